"""Next-token LSTM/transformer models over the polytope interchange format."""

__version__ = "0.1.0"

from .data import Vocab, build_vocab, decode_block, encode, load_matrices, parse_matrices  # noqa: F401
from .training import ARCHS, GenerationRun, ModelConfig, generate, load_checkpoint, train  # noqa: F401
