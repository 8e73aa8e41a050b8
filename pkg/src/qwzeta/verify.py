"""Oracle suites behind ``qwzeta verify``.

Each suite returns a list of :class:`Check` records; :func:`run` bundles
them into the versioned JSON report.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Iterable, Sequence

import numpy as np

from . import mahler, spectra
from .graph import CHECKERBOARD, HALF, build_torus, decompose_1d, random_marking, resolve_marked
from .linalg import symmetric_eigenvalues
from .operators import build_dirichlet, build_K, build_L, path_adjacency
from .quadrature import QuadratureSpec
from .zeta import (
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

SCHEMA = 1
DEFAULT_SEED = 7
DEFAULT_US = (0.1, -0.1, 0.5, -0.5, 0.9, 0.3 + 0.2j)
DET_TOL = 1e-9
QUAD_TOL = 1e-6
MAX_DIM = 4096
SUITES = ("prop22", "thm31", "case1", "case2", "structure", "limits", "remarks", "mahler", "figure1")


@dataclass
class Check:
    check: str
    config: str
    max_residual: float
    tol: float
    count: int = 1
    detail: str = ""

    @property
    def passed(self) -> bool:
        return bool(self.max_residual < self.tol)

    def as_dict(self) -> dict:
        out = asdict(self)
        out["pass"] = self.passed
        if not math.isfinite(out["max_residual"]):
            out["max_residual"] = str(out["max_residual"])
        return out


def rel(a: complex, b: complex) -> float:
    return abs(a - b) / max(abs(a), 1e-300)


def configurations(d: int, L: int, n_random: int, rng: np.random.Generator):
    """Named markings: checkerboard and half (even L) plus seeded random sets."""
    torus = build_torus(d, L)
    out = []
    if L % 2 == 0:
        out += [(CHECKERBOARD, resolve_marked(torus, CHECKERBOARD)), (HALF, resolve_marked(torus, HALF))]
    for i in range(n_random):
        out.append((f"random{i}", random_marking(torus, rng)))
    return torus, out


def _check_budget(d: int, L: int, max_dim: int) -> None:
    dim = 2 * d * L**d + L**d
    if dim > max_dim:
        raise ValueError(f"d={d}, L={L} needs W' up to {dim}x{dim}; limit is {max_dim} (--max-dim)")


def suite_prop22(d, Ls, n_random, rng, us, tol, max_dim) -> list[Check]:
    checks = []
    for L in Ls:
        _check_budget(d, L, max_dim)
        torus, confs = configurations(d, L, n_random, rng)
        for name, marked in confs:
            w = search_walk(d, L, marked)
            res = max(rel(zeta_direct(w.W, torus.n_vertices, u).value,
                          zeta_factorized(torus, marked, u).value) for u in us)
            checks.append(Check("prop22", f"d={d} L={L} {name} m={marked.m}", res, tol, len(us)))
    return checks


def suite_thm31(Ls, n_random, rng, us, tol, max_dim) -> list[Check]:
    checks = []
    for L in Ls:
        _check_budget(1, L, max_dim)
        torus, confs = configurations(1, L, n_random, rng)
        confs.append(("all", resolve_marked(torus, range(L))))
        for name, marked in confs:
            w = search_walk(1, L, marked)
            dec = decompose_1d(torus, marked)
            res = max(rel(zeta_direct(w.W, L, u).value, zeta_1d_finite(dec, u).value) for u in us)
            checks.append(Check("thm31", f"L={L} {name} m={marked.m}", res, tol, len(us)))
    return checks


def suite_case1(d, Ls, us, tol, max_dim) -> list[Check]:
    checks = []
    real_us = [u for u in us if complex(u).imag == 0]
    per_L = {}
    for L in Ls:
        _check_budget(d, L, max_dim)
        w = search_walk(d, L, CHECKERBOARD)
        n = w.torus.n_vertices
        vals = [zeta_direct(w.W, n, u).value for u in us]
        per_L[L] = [v for v, u in zip(vals, us) if complex(u).imag == 0]
        res = max(abs(v - zeta_case1(d, u, n).value) for v, u in zip(vals, us))
        checks.append(Check("case1", f"d={d} L={L}", res, 1e-10, len(us)))
    if len(per_L) > 1 and real_us:
        arr = np.array(list(per_L.values()))
        spread = np.abs(arr - arr[0]).max()
        checks.append(Check("case1-L-independence", f"d={d} L={list(per_L)}", float(spread), 1e-10, arr.size))
    return checks


def suite_case2(d, Ls, us, tol, max_dim) -> list[Check]:
    checks = []
    for L in Ls:
        _check_budget(d, L, max_dim)
        w = search_walk(d, L, HALF)
        n = w.torus.n_vertices
        res = max(rel(zeta_direct(w.W, n, u).value, zeta_case2_finite(d, L // 2, u).value) for u in us)
        checks.append(Check("case2", f"d={d} N={L // 2}", res, tol, len(us)))
    return checks


def suite_structure(d, Ls, n_random, rng, max_dim) -> list[Check]:
    checks = []
    for L in Ls:
        _check_budget(d, L, max_dim)
        torus, confs = configurations(d, L, n_random, rng)
        for name, marked in confs:
            w = search_walk(d, L, marked)
            K = build_K(w.graph).to_dense()
            Lm = build_L(w.graph).to_dense()
            I_N = np.eye(torus.n_vertices)
            res = max(np.abs(K.T @ K - I_N).max(), np.abs(Lm.T @ Lm - I_N).max(),
                      np.abs(w.W @ w.W.conj().T - np.eye(w.dim)).max())
            checks.append(Check("orthogonality", f"d={d} L={L} {name}", float(res), 1e-12))
        A = torus.adjacency()
        res = np.abs(np.sort(spectra.torus_adjacency_spectrum(d, L).values) - symmetric_eigenvalues(A)).max()
        checks.append(Check("torus-spectrum", f"d={d} L={L}", float(res), 1e-10))
        if L % 2 == 0:
            P = build_dirichlet(torus, resolve_marked(torus, HALF)).matrix
            res = np.abs(spectra.case2_dirichlet_spectrum(d, L // 2).sorted() - symmetric_eigenvalues(P)).max()
            checks.append(Check("case2-spectrum", f"d={d} N={L // 2}", float(res), 1e-10))
    for n in (1, 2, 3, 10, 30, 50):
        res = np.abs(path_spectrum_sorted(n) - symmetric_eigenvalues(path_adjacency(n))).max()
        checks.append(Check("path-spectrum", f"n={n}", float(res), 1e-10))
    return checks


def path_spectrum_sorted(n: int) -> np.ndarray:
    return spectra.path_spectrum(n).sorted()


def suite_limits(quad_points=None) -> list[Check]:
    checks = []
    for d, Ns, bound in ((1, (8, 16, 32, 64, 128), 1e-3), (2, (2, 4, 8, 16), 1e-2)):
        quad = QuadratureSpec.halfangle_last(d, quad_points)
        for u in (0.3, 0.6):
            lim = zeta_case2_limit(d, u, quad).real
            gaps = [abs(zeta_case2_finite(d, N, u).real - lim) for N in Ns]
            increases = max(np.diff(gaps).max(), 0.0)
            detail = ", ".join(f"N={N}: {g:.3e}" for N, g in zip(Ns, gaps))
            checks.append(Check("limit-monotone", f"d={d} u={u}", float(increases), 1e-300, len(Ns), detail))
            checks.append(Check("limit-gap", f"d={d} u={u} N={Ns[-1]}", gaps[-1], bound, 1, detail))
    return checks


def suite_remarks(quad_points=None) -> list[Check]:
    us = [round(0.1 * k, 1) for k in range(1, 10)]
    q1 = QuadratureSpec.periodic(1, quad_points)
    qh = QuadratureSpec.halfangle_last(1, quad_points)
    a = max(abs(zeta_1d_limit((0.5, 0, 0.5), u, q1).real - zeta_case1(1, u).real) for u in us)
    b = max(abs(zeta_1d_limit((0.5, 0.5, 0), u, q1).real - zeta_case2_limit(1, u, qh).real) for u in us)
    return [Check("remark-case1", "d=1", a, 1e-7, len(us)), Check("remark-case2", "d=1", b, 1e-7, len(us))]


def suite_mahler(quad_points=None, tol=QUAD_TOL) -> list[Check]:
    checks = []
    for u in (0.25, 0.5, 0.9, 1.5, 3.0):
        got = mahler.mahler_quadrature("jensen", 1, u, QuadratureSpec.periodic(1, quad_points or 4096))
        checks.append(Check("jensen", f"u={u}", abs(got - 2 * math.log(max(1.0, u))), 1e-8))
    for d in (1, 2):
        for u in (0.1, 0.3, 0.5, 0.7, 0.9):
            qn = QuadratureSpec.periodic(d, quad_points)
            qs = QuadratureSpec.halfangle_last(d, quad_points)
            ns = mahler.log_zeta_nonsearch(d, u, qn)
            s = mahler.log_zeta_search(d, u, qs)
            checks.append(Check("cor-nonsearch", f"d={d} u={u}",
                                abs(ns.value - math.log(zeta_nonsearch_limit(d, u, qn).real)), tol))
            checks.append(Check("cor-search", f"d={d} u={u}",
                                abs(s.value - math.log(zeta_case2_limit(d, u, qs).real)), tol))
            checks.append(Check("branch-cancellation", f"d={d} u={u}",
                                max(ns.imag_residual, s.imag_residual), 1e-8))
    return checks


def suite_figure1(d=2, quad_points=None, workers=1) -> list[Check]:
    table = mahler.figure1_table(d, mahler.default_grid(), quad_points, workers)
    a = np.abs(table.diffs)
    first = table.rows[0]
    return [
        Check("figure1-monotone", f"d={d}", float(max(-np.diff(a).min(), 0.0)), 1e-12, len(a)),
        Check("figure1-small-u", f"d={d} u={first[0]}", max(abs(first[1]), abs(first[2])), 0.1),
    ]


def run(
    suites: Iterable[str],
    d: int = 1,
    Ls: Sequence[int] = (4, 5, 6, 7, 8),
    n_random: int = 5,
    seed: int = DEFAULT_SEED,
    us: Sequence[complex] = DEFAULT_US,
    tol: float = DET_TOL,
    quad_tol: float = QUAD_TOL,
    quad_points: int | None = None,
    max_dim: int = MAX_DIM,
    workers: int = 1,
) -> dict:
    suites = list(suites)
    if "all" in suites:
        suites = list(SUITES)
    unknown = [s for s in suites if s not in SUITES]
    if unknown:
        raise ValueError(f"unknown suite(s) {unknown}; choose from {SUITES + ('all',)}")
    rng = np.random.default_rng(seed)
    even = [L for L in Ls if L % 2 == 0]
    checks: list[Check] = []
    for s in suites:
        if s == "prop22":
            checks += suite_prop22(d, Ls, n_random, rng, us, tol, max_dim)
        elif s == "thm31":
            if d != 1:
                raise ValueError("suite thm31 runs on the cycle only (--d 1)")
            checks += suite_thm31(Ls, n_random, rng, us, tol, max_dim)
        elif s == "case1":
            checks += suite_case1(d, even, us, tol, max_dim)
        elif s == "case2":
            checks += suite_case2(d, even, us, tol, max_dim)
        elif s == "structure":
            checks += suite_structure(d, Ls, n_random, rng, max_dim)
        elif s == "limits":
            checks += suite_limits(quad_points)
        elif s == "remarks":
            checks += suite_remarks(quad_points)
        elif s == "mahler":
            checks += suite_mahler(quad_points, quad_tol)
        elif s == "figure1":
            checks += suite_figure1(2, quad_points, workers)
    return {
        "schema": SCHEMA,
        "suites": suites,
        "d": d,
        "L": list(Ls),
        "seed": seed,
        "u": [[complex(u).real, complex(u).imag] for u in us],
        "checks": [c.as_dict() for c in checks],
        "pass": all(c.passed for c in checks),
    }
