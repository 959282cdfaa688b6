"""Dense complex linear algebra and special functions used by the simulator."""

from .faddeeva import faddeeva, gauss_pole_overlap
from .linalg import (
    EigenDecomposition,
    eig_real_nonsymmetric,
    expm,
    inverse,
    lu_factor,
    lu_solve,
)
from .quadrature import clenshaw_curtis, integrate_adaptive

__all__ = [
    "EigenDecomposition",
    "clenshaw_curtis",
    "eig_real_nonsymmetric",
    "expm",
    "faddeeva",
    "gauss_pole_overlap",
    "integrate_adaptive",
    "inverse",
    "lu_factor",
    "lu_solve",
]
