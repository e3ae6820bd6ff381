"""Contextualised word-embedding extraction from masked language models.

Produces the JSON-Lines pair-embedding and instance-embedding files that
the evaluation pipeline consumes. Inference is deterministic: evaluation
mode, no gradients, and identical contexts share one forward pass.
"""

from .errors import ContractError, ExtractError, InputError, ModelLoadError
from .extract import (ExtractionResult, ExtractionSpec, Failure,
                      extract_instances, extract_pairs)
from .inputs import (InstanceLine, PairLine, parse_instance_file,
                     parse_pair_file)
from .model import EmbeddingModel, resolve_layer

__version__ = "0.1.0"

__all__ = [
    "ContractError",
    "EmbeddingModel",
    "ExtractError",
    "ExtractionResult",
    "ExtractionSpec",
    "Failure",
    "InputError",
    "InstanceLine",
    "ModelLoadError",
    "PairLine",
    "extract_instances",
    "extract_pairs",
    "parse_instance_file",
    "parse_pair_file",
    "resolve_layer",
    "__version__",
]
