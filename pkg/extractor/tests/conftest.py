"""Shared fixtures: a tiny deterministic masked LM and WiC-style inputs."""

from __future__ import annotations

from contextlib import contextmanager

import pytest
import torch
from tokenizers import Tokenizer, normalizers, pre_tokenizers, processors
from tokenizers.models import WordPiece
from transformers import BertConfig, BertModel, BertTokenizerFast

HIDDEN_SIZE = 32
NUM_LAYERS = 2

VOCAB = [
    "[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]",
    "the", "a", "to", "of", "in", "and", "near", "she", "he",
    "cat", "sat", "on", "mat", "dog", "drive", "drove", "went",
    "sheep", "cows", "into", "barn", "field", "out",
    "river", "bank", "money", "deposit", "water", "flows",
    "##bank", "##s", "##ed",
]


def build_tiny_model(directory):
    """Write a seeded random-init BERT and matching WordPiece tokenizer."""
    core = Tokenizer(WordPiece({tok: i for i, tok in enumerate(VOCAB)},
                               unk_token="[UNK]"))
    core.normalizer = normalizers.BertNormalizer(lowercase=True)
    core.pre_tokenizer = pre_tokenizers.BertPreTokenizer()
    core.post_processor = processors.TemplateProcessing(
        single="[CLS] $A [SEP]",
        pair="[CLS] $A [SEP] $B [SEP]",
        special_tokens=[("[CLS]", VOCAB.index("[CLS]")),
                        ("[SEP]", VOCAB.index("[SEP]"))])
    tokenizer = BertTokenizerFast(tokenizer_object=core, unk_token="[UNK]",
                                  pad_token="[PAD]", cls_token="[CLS]",
                                  sep_token="[SEP]", mask_token="[MASK]",
                                  model_max_length=64)
    tokenizer.save_pretrained(directory)

    torch.manual_seed(0)
    config = BertConfig(vocab_size=len(VOCAB), hidden_size=HIDDEN_SIZE,
                        num_hidden_layers=NUM_LAYERS, num_attention_heads=2,
                        intermediate_size=64, max_position_embeddings=64)
    BertModel(config).save_pretrained(directory)
    return directory


@pytest.fixture(scope="session")
def tiny_model_dir(tmp_path_factory):
    return build_tiny_model(tmp_path_factory.mktemp("tinybert"))


# 10 WiC-style lines; line 4 repeats one context verbatim, lines 5 and 8
# use a multi-subword target (riverbank -> river + ##bank)
WIC_LINES = [
    ("bank", "N", "1-1", "the bank flows near the field",
     "the bank holds money"),
    ("drive", "V", "1-3", "she drive the cows into the barn",
     "he went to drive sheep out of the field"),
    ("water", "N", "1-3", "the water flows into the river",
     "a deposit of water sat on the mat"),
    ("water", "N", "1-1", "the water flows", "the water flows"),
    ("riverbank", "N", "1-4", "the riverbank flows near the field",
     "she sat on a riverbank near the water"),
    ("cat", "N", "1-4", "the cat sat on the mat", "the dog and the cat"),
    ("money", "N", "1-0", "the money went into the bank",
     "money went out of the field"),
    ("sheep", "N", "1-1", "the sheep went into the barn",
     "the sheep sat near the river"),
    ("barn", "N", "5-1", "the cows went into the barn",
     "a barn sat in the field"),
    ("riverbank", "N", "1-1", "the riverbank near the barn",
     "the riverbank near the water"),
]

WIC_GOLD = ["T", "F", "T", "T", "F", "T", "F", "T", "F", "T"]

IDENTICAL_CONTEXT_LINE = 4  # 1-based line number of the repeated context


@pytest.fixture(scope="session")
def wic_fixture(tmp_path_factory):
    """(data path, gold path) for the 10-line WiC-style fixture."""
    directory = tmp_path_factory.mktemp("wic")
    data = directory / "wic10.tsv"
    data.write_text("".join("\t".join(line) + "\n" for line in WIC_LINES),
                    encoding="utf-8")
    gold = directory / "gold.txt"
    gold.write_text("".join(label + "\n" for label in WIC_GOLD),
                    encoding="utf-8")
    return data, gold


@pytest.fixture()
def criterion(capfd):
    @contextmanager
    def announce(name):
        try:
            yield
        except BaseException:
            with capfd.disabled():
                print(f"\n[FAIL] {name}", flush=True)
            raise
        with capfd.disabled():
            print(f"\n[PASS] {name}", flush=True)
    return announce
