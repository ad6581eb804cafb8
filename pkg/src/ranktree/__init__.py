"""Exact rank-distribution engine for random binary search trees.

Submodules:

* plring     -- exact kernel: rationals and the (1-x)^b log(1/(1-x))^c ring
* genfun     -- generating-function recurrences and the constants c_k, f_k, g_k
* oracle     -- exact finite-n dynamic programs (ground truth)
* montecarlo -- seeded tree simulation and empirical estimates
* conjecture -- denominator factorizations, structure checks, alpha_0
* cli        -- batch front end (constants/bounds/oracle/simulate/factor/verify)
"""

from .plring import DivergentIntegral, PLExpr, Rational, rational
from .genfun import InternalInconsistency

__all__ = [
    "PLExpr",
    "Rational",
    "rational",
    "DivergentIntegral",
    "InternalInconsistency",
]

__version__ = "0.1.0"
