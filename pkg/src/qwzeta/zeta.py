"""Evaluators of ζ(U, T, u)^{-1} = det(I - uU)^{1/n_vertices}.

Every evaluator returns the reciprocal zeta value. Finite-size evaluators
first assemble the total log-determinant and take the principal root
exp((log|det| + i·arg det)/n) with arg in (-π, π], so that different routes
to the same determinant agree even for complex u. The N → ∞ limits have no
determinant to take a root of; they exponentiate their exponent directly.
"""
from __future__ import annotations

import cmath
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from . import linalg, spectra
from .graph import (
    CHECKERBOARD,
    HALF,
    MarkedSet,
    ModifiedGraph,
    SegmentDecomposition,
    TorusGraph,
    build_duplication,
    build_torus,
    decompose_1d,
    resolve_marked,
)
from .operators import build_dirichlet, build_time_evolution
from .quadrature import QuadratureSpec, safe_log, tensor_mean

EDGE_TOL = 1e-12
PHASE_TOL = 1e-8
IMAG_TOL = 1e-9

METHODS = (
    "direct",
    "factorized",
    "closed-1d",
    "closed-case1",
    "closed-case2",
    "limit-1d",
    "limit-case2",
    "limit-nonsearch",
)


@dataclass(frozen=True)
class ZetaValue:
    value: complex
    u: complex
    method: str
    n_vertices: int | None = None
    flags: tuple[str, ...] = ()
    quad: dict | None = field(default=None, compare=False)

    @property
    def exponent(self) -> Fraction | None:
        return None if self.n_vertices is None else Fraction(1, self.n_vertices)

    @property
    def real(self) -> float:
        return self.value.real

    @property
    def singular(self) -> bool:
        return "singular" in self.flags


def _real_unit(u: complex) -> bool:
    u = complex(u)
    return u.imag == 0.0 and -1.0 < u.real < 1.0


def _finish(total_log: complex, u, method, n=None, flags=(), quad=None) -> ZetaValue:
    u = complex(u)
    flags = tuple(flags)
    if not cmath.isfinite(total_log):
        return ZetaValue(0j, u, method, n, flags + ("singular",), quad)
    if n is not None:
        total_log = complex(total_log.real, linalg.wrap_phase(total_log.imag)) / n
    value = cmath.exp(total_log)
    if _real_unit(u):
        if abs(value.imag) > IMAG_TOL * max(abs(value), 1.0):
            raise ArithmeticError(f"{method}: non-real value {value} at real u={u.real}")
        value = complex(value.real, 0.0)
    else:
        flags += ("branch-sensitive",)
    return ZetaValue(value, u, method, n, flags, quad)


def _zero(u, method, n=None, quad=None) -> ZetaValue:
    return ZetaValue(0j, complex(u), method, n, ("singular",), quad)


def _log_edge(coef, base: complex) -> complex | None:
    """coef·log(base), or None when base is a refused zero (|base| < EDGE_TOL)."""
    if coef == 0:
        return 0j
    if abs(base) < EDGE_TOL:
        return None
    return float(coef) * cmath.log(base)


def _sum_logs(vals: np.ndarray) -> complex:
    """Σ log vals as a complex number (real fast path when all positive)."""
    if vals.size == 0:
        return 0j
    if not np.iscomplexobj(vals) and np.all(vals > 0):
        return complex(math.fsum(np.log(vals)), 0.0)
    vals = vals.astype(np.complex128)
    if np.any(vals == 0):
        return complex(-math.inf, 0.0)
    logs = np.log(vals)
    return complex(math.fsum(logs.real), math.fsum(logs.imag))


def _poly_factors(u: complex, eigenvalues: np.ndarray) -> np.ndarray:
    """(1+u)^2 - 4u λ^2 over λ, real-typed when u is real."""
    if complex(u).imag == 0.0:
        u = complex(u).real
    return (1 + u) ** 2 - 4 * u * np.asarray(eigenvalues) ** 2


# ---------------------------------------------------------------- direct


@dataclass(frozen=True)
class SearchWalk:
    """A torus, its marking, the duplication graph and the dense W'."""

    torus: TorusGraph
    marked: MarkedSet
    graph: ModifiedGraph
    W: np.ndarray = field(repr=False, compare=False)

    @property
    def dim(self) -> int:
        return self.W.shape[0]


def search_walk(d: int, L: int, marking, max_dim: int | None = None) -> SearchWalk:
    torus = build_torus(d, L)
    marked = marking if isinstance(marking, MarkedSet) else resolve_marked(torus, marking)
    G = build_duplication(torus, marked)
    if max_dim is not None and G.n_edges > max_dim:
        raise ValueError(f"W' would be {G.n_edges}x{G.n_edges}, over the limit {max_dim}")
    return SearchWalk(torus, marked, G, build_time_evolution(G))


def zeta_direct(Wp: np.ndarray, n_vertices: int, u: complex, backend: str | None = None) -> ZetaValue:
    """det(I - u W')^{1/n_vertices} straight from an LU factorization."""
    n = Wp.shape[0]
    ld = linalg.lu_logdet(np.eye(n) - complex(u) * Wp, backend=backend)
    if ld.singular:
        return _zero(u, "direct", n_vertices)
    if _real_unit(u) and abs(ld.phase) > PHASE_TOL:
        raise ArithmeticError(f"det(I - uW') has phase {ld.phase} at real u={u}")
    phase = 0.0 if _real_unit(u) else ld.phase
    return _finish(complex(ld.log_modulus, phase), u, "direct", n_vertices)


# ------------------------------------------------------------ factorized


@lru_cache(maxsize=512)
def _dirichlet_eigs(graph: TorusGraph, marked: MarkedSet, source: str) -> tuple[float, ...]:
    if source == "numeric":
        return tuple(linalg.symmetric_eigenvalues(build_dirichlet(graph, marked).matrix))
    free = graph.n_vertices - marked.m
    if marked.kind == CHECKERBOARD:
        return (0.0,) * free
    if marked.kind == HALF:
        return tuple(spectra.case2_dirichlet_spectrum(graph.d, graph.L // 2).values)
    if graph.d == 1:
        dec = decompose_1d(graph, marked)
        if dec.cyclic:
            return tuple(spectra.torus_adjacency_spectrum(1, graph.L).values / 2)
        return tuple(spectra.dirichlet_1d_spectrum(map(len, dec.free_runs), len(dec.isolated)).values)
    if source == "closed":
        raise ValueError("no closed-form Dirichlet spectrum for an explicit marking in d >= 2")
    return _dirichlet_eigs(graph, marked, "numeric")


def dirichlet_eigenvalues(graph: TorusGraph, marked: MarkedSet, spectrum: str = "auto") -> np.ndarray:
    """Spec(P_M): ``numeric`` (Jacobi), ``closed`` (fail if none known) or ``auto``."""
    if spectrum not in ("auto", "numeric", "closed"):
        raise ValueError(f"unknown spectrum source {spectrum!r}")
    return np.asarray(_dirichlet_eigs(graph, marked, spectrum))


def zeta_factorized(graph: TorusGraph, marked: MarkedSet, u: complex, spectrum: str = "auto") -> ZetaValue:
    """(1-u)^{2(ε-N)+3m} det((1+u)^2 I - 4u P_M^2), rooted like ``zeta_direct``."""
    n = graph.n_vertices
    power = 2 * (graph.n_edges - n) + 3 * marked.m
    head = _log_edge(power, 1 - complex(u))
    if head is None:
        return _zero(u, "factorized", n)
    eigs = dirichlet_eigenvalues(graph, marked, spectrum)
    total = head + _sum_logs(_poly_factors(u, eigs))
    return _finish(total, u, "factorized", n)


# --------------------------------------------------------------- 1D forms


def zeta_1d_finite(decomp: SegmentDecomposition, u: complex) -> ZetaValue:
    """Closed form on the cycle from the run decomposition.

    exp[3c_M log(1-u) + 2c_F' log(1+u)
        + (1/N) Σ_j Σ_{k=1}^{|F_j|} log(1 - 2cos(2kπ/(|F_j|+1))u + u^2)]
    """
    if decomp.cyclic:
        raise ValueError("no marked vertex: the free set is a cycle, not a union of paths")
    N = decomp.n
    m = sum(map(len, decomp.marked_runs))
    head = _log_edge(3 * m, 1 - complex(u))
    iso = _log_edge(2 * len(decomp.isolated), 1 + complex(u))
    if head is None or iso is None:
        return _zero(u, "closed-1d", N)
    uu = complex(u).real if complex(u).imag == 0 else complex(u)
    parts = []
    for run in decomp.free_runs:
        n = len(run)
        k = np.arange(1, n + 1)
        parts.append(1 - 2 * np.cos(2 * k * np.pi / (n + 1)) * uu + uu * uu)
    factors = np.concatenate(parts) if parts else np.empty(0)
    return _finish(head + iso + _sum_logs(factors), u, "closed-1d", N)


def _check_ratios(ratios) -> tuple[float, float, float]:
    c = tuple(ratios)
    if len(c) != 3 or any(not 0 <= x <= 1 for x in c):
        raise ValueError(f"ratios must be three numbers in [0, 1], got {ratios}")
    if abs(sum(c) - 1) > 1e-12:
        raise ValueError(f"ratios must sum to 1, got {float(sum(c))}")
    return tuple(float(x) for x in c)


def free_run_integral(u: complex, quad: QuadratureSpec | None = None) -> complex | float:
    """∫ log(1 - 2cos θ u + u^2) dθ/2π on the periodic rule."""
    quad = quad or QuadratureSpec.periodic(1)
    uu = complex(u).real if complex(u).imag == 0 else complex(u)
    val, _ = tensor_mean(lambda th: safe_log(1 - 2 * np.cos(th[0]) * uu + uu * uu), quad)
    return val


def zeta_1d_limit(ratios, u: complex, quad: QuadratureSpec | None = None) -> ZetaValue:
    c_M, c_F, c_Fp = _check_ratios(ratios)
    quad = quad or QuadratureSpec.periodic(1)
    head = _log_edge(3 * c_M, 1 - complex(u))
    iso = _log_edge(2 * c_Fp, 1 + complex(u))
    if head is None or iso is None:
        return _zero(u, "limit-1d", quad=quad.metadata())
    integral = c_F * free_run_integral(u, quad) if c_F else 0.0
    return _finish(head + iso + integral, u, "limit-1d", quad=quad.metadata())


# ---------------------------------------------------------- d-dim torus


def zeta_case1(d: int, u: complex, n_vertices: int | None = None) -> ZetaValue:
    """(1-u)^{2d-1/2} (1+u) for the checkerboard marking.

    With ``n_vertices`` the value is formed as the principal n-th root of
    the full determinant, matching ``zeta_direct`` for complex u as well.
    """
    if d < 1:
        raise ValueError("d must be >= 1")
    head = _log_edge(2 * d - 0.5, 1 - complex(u))
    tail = _log_edge(1, 1 + complex(u))
    if head is None or tail is None:
        return _zero(u, "closed-case1", n_vertices)
    total = head + tail
    if n_vertices is not None:
        total *= n_vertices
    return _finish(total, u, "closed-case1", n_vertices)


def zeta_case2_finite(d: int, N: int, u: complex) -> ZetaValue:
    """Half-region closed form on T_{2N}^d from the layered Dirichlet spectrum."""
    if d < 1 or N < 1:
        raise ValueError("d and N must be >= 1")
    n = (2 * N) ** d
    head = _log_edge(Fraction(4 * d - 1, 2) * n, 1 - complex(u))
    if head is None:
        return _zero(u, "closed-case2", n)
    eigs = spectra.case2_dirichlet_spectrum(d, N).values
    return _finish(head + _sum_logs(_poly_factors(u, eigs)), u, "closed-case2", n)


def _angle_integrand(d: int, u: complex, half_last: bool) -> Callable:
    uu = complex(u).real if complex(u).imag == 0 else complex(u)
    a = (1 + uu) ** 2
    b = 4 * uu / d**2

    def fn(th):
        c = 0.0
        for i, t in enumerate(th):
            c = c + (np.cos(t / 2) if half_last and i == d - 1 else np.cos(t))
        return safe_log(a - b * c * c)

    return fn


def _limit(d, u, quad, power, half_last, method) -> ZetaValue:
    head = _log_edge(power, 1 - complex(u))
    if head is None:
        return _zero(u, method, quad=quad.metadata())
    integral, dropped = tensor_mean(_angle_integrand(d, u, half_last), quad)
    flags = ("excluded-points",) if dropped else ()
    return _finish(head + 0.5 * integral, u, method, flags=flags, quad=quad.metadata())


def zeta_case2_limit(d: int, u: complex, quad: QuadratureSpec | None = None) -> ZetaValue:
    """N → ∞ half-region value; the last angle enters as cos(θ_d/2)."""
    quad = quad or QuadratureSpec.halfangle_last(d)
    return _limit(d, u, quad, 2 * d - 0.5, True, "limit-case2")


def zeta_nonsearch_limit(d: int, u: complex, quad: QuadratureSpec | None = None) -> ZetaValue:
    """N → ∞ value for the walk without search (the comparator curve)."""
    quad = quad or QuadratureSpec.periodic(d)
    return _limit(d, u, quad, d, False, "limit-nonsearch")


# ------------------------------------------------------------------ sweep


def sweep(fn: Callable[[complex], ZetaValue], us: Sequence[complex], workers: int = 1) -> list[ZetaValue]:
    """Evaluate ``fn`` over a u-grid; output order equals input order."""
    if workers <= 1:
        return [fn(u) for u in us]
    with ThreadPoolExecutor(workers) as pool:
        return list(pool.map(fn, us))
