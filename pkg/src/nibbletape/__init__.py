"""Arithmetized minimal Turing machine as an asynchronous cellular
automaton: deterministic array and compacted-integer engines, noise-driven
execution through a matching filter, and a combinatorial hierarchy toolbox
(digit sums, entropy, free energy) with brute-force verification suites.
"""

from .backend import BACKEND, available_backends

__version__ = "0.1.0"

__all__ = ["BACKEND", "available_backends", "__version__"]
