"""Logarithmic zeta of the search and non-search walks via Mahler measures.

The two Laurent polynomials are written in the symmetric variables
s_j = X_j + X_j^{-1} = 2 cos θ_j. For the search walk the last variable is
√X_d + √X_d^{-1} = 2 cos(θ_d/2), realized on the half-angle rule.
"""
from __future__ import annotations

import cmath
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .quadrature import QuadratureSpec, iterate
from .zeta import zeta_case2_limit, zeta_nonsearch_limit

ZERO_TOL = 1e-14
NONSEARCH = "nonsearch"
SEARCH = "search-case2"


def _symmetric_sum(th, half_last: bool):
    d = len(th)
    s = 0.0
    for i, t in enumerate(th):
        s = s + 2.0 * (np.cos(t / 2) if half_last and i == d - 1 else np.cos(t))
    return s


def nonsearch_poly(th, u):
    """(Σ_j (X_j + X_j^{-1}))^2 - d^2 (u + u^{-1} + 2)."""
    s = _symmetric_sum(th, False)
    return s * s - len(th) ** 2 * (u + 1 / u + 2)


def search_poly(th, u):
    """(Σ_{j<d} (X_j + X_j^{-1}) + √X_d + √X_d^{-1})^2 - d^2 (u + u^{-1} + 2)."""
    s = _symmetric_sum(th, True)
    return s * s - len(th) ** 2 * (u + 1 / u + 2)


def jensen_poly(th, u):
    """(1 - uX)(1 - uX^{-1}) = 1 - 2u cos θ + u^2."""
    return 1 - 2 * u * np.cos(th[0]) + u * u


INTEGRANDS: dict[str, tuple[Callable, Callable[[int], QuadratureSpec]]] = {
    "nonsearch-poly": (nonsearch_poly, QuadratureSpec.periodic),
    "search-poly": (search_poly, QuadratureSpec.halfangle_last),
    "jensen": (jensen_poly, QuadratureSpec.periodic),
}


@dataclass(frozen=True)
class MahlerMeasure:
    value: float
    excluded: int
    branch_residual: float
    quad: QuadratureSpec

    @property
    def flags(self) -> tuple[str, ...]:
        return ("excluded-points",) if self.excluded else ()


def mahler_measure(
    integrand: str | Callable,
    d: int,
    u: complex,
    quad: QuadratureSpec | None = None,
    branch_offset: float | None = None,
) -> MahlerMeasure:
    """m(f) = average of log|f| over the torus.

    Grid points where |f| < ZERO_TOL are excluded and counted. When
    ``branch_offset`` is given, ``branch_residual`` is the largest
    |branch_offset + arg f| reduced mod 2π over the grid.
    """
    if isinstance(integrand, str):
        try:
            fn, default_rule = INTEGRANDS[integrand]
        except KeyError:
            raise ValueError(f"unknown integrand {integrand!r}; known: {sorted(INTEGRANDS)}") from None
        quad = quad or default_rule(d)
    else:
        fn = integrand
        quad = quad or QuadratureSpec.periodic(d)
    if quad.d != d:
        raise ValueError(f"quadrature is {quad.d}-dimensional, integrand is {d}-dimensional")
    uu = complex(u).real if complex(u).imag == 0 else complex(u)
    sums, wsums, excluded, residual = [], [], 0, 0.0
    for angles, w in iterate(quad):
        f = np.broadcast_to(np.asarray(fn(angles, uu)), w.shape)
        mod = np.abs(f)
        ok = mod >= ZERO_TOL
        if not ok.all():
            excluded += int(ok.size - ok.sum())
            w = np.where(ok, w, 0.0)
            mod = np.where(ok, mod, 1.0)
        sums.append(float(np.sum(w * np.log(mod))))
        wsums.append(float(np.sum(w)))
        if branch_offset is not None:
            arg = np.angle(f.astype(np.complex128))[ok]
            r = np.remainder(arg + branch_offset + np.pi, 2 * np.pi) - np.pi
            if r.size:
                residual = max(residual, float(np.abs(r).max()))
    total = math.fsum(wsums)
    if total == 0.0:
        raise ArithmeticError("integrand vanishes at every quadrature point")
    return MahlerMeasure(math.fsum(sums) / total, excluded, residual, quad)


def mahler_quadrature(integrand, d: int, u: complex, quad: QuadratureSpec | None = None) -> float:
    return mahler_measure(integrand, d, u, quad).value


@dataclass(frozen=True)
class LogZetaValue:
    value: float
    variant: str
    u: float
    d: int
    imag_residual: float
    excluded: int
    quad: dict


def _check_u(u) -> float:
    u = complex(u)
    if u.imag != 0 or not 0 < u.real < 1:
        raise ValueError(f"logarithmic zeta is evaluated for real u in (0, 1), got {u}")
    return u.real


def _log_zeta(variant, integrand, power, d, u, quad, check_branch) -> LogZetaValue:
    u = _check_u(u)
    prefactor = cmath.log(-math.sqrt(u) / d)
    # the pointwise factorization (1+u)^2 - (u/d^2)s^2 = (-u/d^2)(s^2 - d^2(u+1/u+2))
    # needs arg(-u/d^2) + arg f ≡ 0 mod 2π
    offset = cmath.phase(complex(-u / d**2)) if check_branch else None
    mm = mahler_measure(integrand, d, u, quad, branch_offset=offset)
    value = power * math.log1p(-u) + prefactor.real + 0.5 * mm.value
    residual = mm.branch_residual if check_branch else math.nan
    return LogZetaValue(value, variant, u, d, residual, mm.excluded, mm.quad.metadata())


def log_zeta_nonsearch(d: int, u: float, quad: QuadratureSpec | None = None, check_branch: bool = True) -> LogZetaValue:
    return _log_zeta(NONSEARCH, "nonsearch-poly", d, d, u, quad, check_branch)


def log_zeta_search(d: int, u: float, quad: QuadratureSpec | None = None, check_branch: bool = True) -> LogZetaValue:
    return _log_zeta(SEARCH, "search-poly", 2 * d - 0.5, d, u, quad, check_branch)


def log_of_limit(variant: str, d: int, u: float, quad: QuadratureSpec | None = None) -> float:
    """log of the N → ∞ zeta value by direct angle quadrature (the oracle route)."""
    fn = zeta_nonsearch_limit if variant == NONSEARCH else zeta_case2_limit
    return math.log(fn(d, u, quad).real)


@dataclass(frozen=True)
class Figure1Table:
    d: int
    rows: tuple[tuple[float, float, float, float], ...]
    quad: dict

    @property
    def diffs(self) -> np.ndarray:
        return np.array([r[3] for r in self.rows])

    @property
    def monotone(self) -> bool:
        """|difference| non-decreasing along the grid."""
        a = np.abs(self.diffs)
        return bool(np.all(np.diff(a) >= -1e-12))

    def max_abs_diff(self) -> tuple[float, float]:
        a = np.abs(self.diffs)
        i = int(np.argmax(a))
        return float(a[i]), self.rows[i][0]

    def to_csv(self) -> str:
        lines = ["u,L_nonsearch,L_search,diff"]
        lines += [",".join(repr(float(x)) for x in row) for row in self.rows]
        return "\n".join(lines) + "\n"


def figure1_table(
    d: int,
    us: Sequence[float],
    quad_points: int | None = None,
    workers: int = 1,
) -> Figure1Table:
    """Rows (u, ℒ_nonsearch, ℒ_search, ℒ_nonsearch - ℒ_search) over the grid."""
    us = [float(u) for u in us]
    for u in us:
        _check_u(u)
    q_ns = QuadratureSpec.periodic(d, quad_points)
    q_s = QuadratureSpec.halfangle_last(d, quad_points)

    def row(u):
        ns = log_zeta_nonsearch(d, u, q_ns, check_branch=False).value
        s = log_zeta_search(d, u, q_s, check_branch=False).value
        return (u, ns, s, ns - s)

    if workers <= 1:
        rows = [row(u) for u in us]
    else:
        with ThreadPoolExecutor(workers) as pool:
            rows = list(pool.map(row, us))
    return Figure1Table(d, tuple(rows), q_s.metadata())


GNUPLOT_SCRIPT = """\
# gnuplot script for the comparison table written next to it
set datafile separator ','
set key top right
set xlabel 'u'
set ylabel 'log zeta'
plot '{csv}' using 1:2 skip 1 with lines title 'non-search', \\
     '{csv}' using 1:3 skip 1 with points pt 7 ps 0.4 title 'search (half region)'
"""


def default_grid() -> list[float]:
    return [round(0.01 * k, 2) for k in range(1, 100)]


__all__ = [
    "Figure1Table",
    "LogZetaValue",
    "MahlerMeasure",
    "default_grid",
    "figure1_table",
    "log_of_limit",
    "log_zeta_nonsearch",
    "log_zeta_search",
    "mahler_measure",
    "mahler_quadrature",
]
