"""Exact tools for respectful decompositions g = H + V of real Lie algebras.

Submodules: ``exactlin`` (rational linear algebra), ``sympoly``
(polynomials, Pfaffians), ``liealg`` (algebras and their series),
``decomp`` (decomposition analysis), ``existence`` (verdicts and
certificates), ``geodesic`` (metric notions), ``catalog`` (named
algebras), ``cli``.
"""

from .decomp import Decomposition, analyze
from .exactlin import Subspace, span
from .liealg import LieAlgebra

__all__ = ["Decomposition", "LieAlgebra", "Subspace", "analyze", "span"]
__version__ = "0.1.0"
