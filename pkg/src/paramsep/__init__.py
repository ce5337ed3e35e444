"""Desk-scale simulation of parameter-cost separations in learning.

Implements two families of synthetic binary classification tasks built
from Reed-Solomon codes, pseudorandom generators, one-time signatures
and subset samplers, together with the learners, budgeted Hamming
adversaries, exact small-bias/extraction validators, and a Monte Carlo
experiment harness that exhibits the bounded-vs-unbounded parameter
separations at desk scale.
"""

from ._kernels import BACKEND as kernel_backend

__version__ = "0.1.0"

__all__ = ["kernel_backend", "__version__"]
