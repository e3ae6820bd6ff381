"""Deterministic token-vector extraction from a masked language model."""

from __future__ import annotations

import numpy as np
import torch

from .errors import ContractError, ModelLoadError

_POOLINGS = ("mean", "first")


def resolve_layer(selector, num_layers: int) -> int:
    """Map a layer selector onto an index into the hidden-state stack.

    'last' selects the final encoder layer. Integers follow hidden-state
    indexing: 0 is the embedding output, num_layers the final layer, and
    negative values count back from the end.
    """
    if selector == "last":
        return num_layers
    try:
        index = int(selector)
    except (TypeError, ValueError):
        raise ContractError(
            f"layer must be 'last' or an integer, got {selector!r}") from None
    if not -(num_layers + 1) <= index <= num_layers:
        raise ContractError(
            f"layer {index} invalid for a model with {num_layers} encoder "
            f"layers; valid indices run from {-(num_layers + 1)} to {num_layers}")
    return index


class EmbeddingModel:
    """A tokenizer and encoder pair prepared for deterministic inference.

    The encoder runs in evaluation mode with gradients disabled. Identical
    (tokens, target) items share one forward pass, so equal contexts always
    yield bitwise-equal vectors regardless of where they appear in the
    input.
    """

    def __init__(self, model_id, layer="last", pooling: str = "mean",
                 batch_size: int = 8):
        if pooling not in _POOLINGS:
            raise ContractError(f"pooling must be one of {_POOLINGS}, got {pooling!r}")
        if batch_size < 1:
            raise ContractError(f"batch_size must be >= 1, got {batch_size}")
        from transformers import AutoModel, AutoTokenizer
        from transformers.utils import logging as hf_logging
        hf_logging.disable_progress_bar()
        try:
            self.tokenizer = AutoTokenizer.from_pretrained(model_id)
            self.model = AutoModel.from_pretrained(model_id)
        except Exception as exc:  # transformers raises a wide mix of types here
            raise ModelLoadError(f"cannot load model {str(model_id)!r}: {exc}") from exc
        self.model.eval()
        self.pooling = pooling
        self.batch_size = int(batch_size)
        self.hidden_size = int(self.model.config.hidden_size)
        self.num_layers = int(self.model.config.num_hidden_layers)
        self.layer_index = resolve_layer(layer, self.num_layers)

    def target_vectors(self, items) -> list[np.ndarray | None]:
        """One vector per (tokens, target index) item, None if unaligned.

        A target aligns to the encoder positions whose word id equals its
        index; multi-subword targets pool those positions by the configured
        policy. None results cover targets out of range, truncated away, or
        dropped by the tokenizer.
        """
        order: list[tuple[tuple[str, ...], int]] = []
        seen = set()
        for tokens, target in items:
            key = (tuple(tokens), int(target))
            if key not in seen:
                seen.add(key)
                order.append(key)
        result: dict[tuple, np.ndarray | None] = {key: None for key in order}
        todo = [key for key in order if key[0]]

        with torch.no_grad():
            for start in range(0, len(todo), self.batch_size):
                chunk = todo[start:start + self.batch_size]
                encoded = self.tokenizer([list(tokens) for tokens, _ in chunk],
                                         is_split_into_words=True, padding=True,
                                         truncation=True, return_tensors="pt")
                hidden = self.model(**encoded, output_hidden_states=True) \
                    .hidden_states[self.layer_index]
                for i, key in enumerate(chunk):
                    _, target = key
                    positions = [p for p, wid
                                 in enumerate(encoded.word_ids(batch_index=i))
                                 if wid == target]
                    if not positions:
                        continue
                    pieces = hidden[i, positions]
                    pooled = pieces[0] if self.pooling == "first" else pieces.mean(dim=0)
                    result[key] = pooled.numpy().copy()
        return [result[(tuple(tokens), int(target))] for tokens, target in items]
