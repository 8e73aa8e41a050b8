"""Zeta functions of Grover-walk quantum search on discrete tori."""
from .graph import (
    MarkedSet,
    ModifiedGraph,
    SegmentDecomposition,
    TorusGraph,
    build_duplication,
    build_torus,
    decompose_1d,
    resolve_marked,
)
from .linalg import BACKEND, LogDet, lu_logdet, symmetric_eigenvalues
from .mahler import figure1_table, log_zeta_nonsearch, log_zeta_search, mahler_quadrature
from .operators import build_dirichlet, build_K, build_L, build_time_evolution
from .quadrature import QuadratureSpec
from .zeta import (
    ZetaValue,
    search_walk,
    zeta_1d_finite,
    zeta_1d_limit,
    zeta_case1,
    zeta_case2_finite,
    zeta_case2_limit,
    zeta_direct,
    zeta_factorized,
    zeta_nonsearch_limit,
)

__version__ = "0.1.0"
