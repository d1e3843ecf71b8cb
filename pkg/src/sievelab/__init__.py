"""Numerical experiments on the large sieve inequality with power moduli."""

from .expsums import CoeffSequence
from .kernels import BACKEND
from .sequences import generate_sequence

__version__ = "0.1.0"

__all__ = ["BACKEND", "CoeffSequence", "generate_sequence", "__version__"]
