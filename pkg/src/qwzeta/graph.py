"""Tori, marked-vertex configurations, 1D run decomposition, duplication graph."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

MAX_VERTICES = 1 << 20

CHECKERBOARD = "checkerboard"
HALF = "half"
EXPLICIT = "explicit"


@dataclass(frozen=True)
class TorusGraph:
    """The discrete torus T_L^d.

    Vertices are numbered row-major over coordinates (x_1, ..., x_d), so the
    last coordinate varies fastest. Edges are listed axis by axis, and within
    an axis by base vertex; each edge is stored as (v, v + e_axis mod L).
    """

    d: int
    L: int
    edges: np.ndarray = field(repr=False, compare=False)

    @property
    def n_vertices(self) -> int:
        return self.L**self.d

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @property
    def degree(self) -> int:
        return 2 * self.d

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.L,) * self.d

    def coords(self, v) -> np.ndarray:
        """Coordinates of vertex id(s) ``v``; shape (..., d)."""
        return np.stack(np.unravel_index(v, self.shape), axis=-1)

    def index(self, coords) -> np.ndarray:
        c = np.asarray(coords) % self.L
        return np.ravel_multi_index(tuple(np.moveaxis(c, -1, 0)), self.shape)

    def adjacency(self) -> np.ndarray:
        n = self.n_vertices
        A = np.zeros((n, n))
        np.add.at(A, (self.edges[:, 0], self.edges[:, 1]), 1.0)
        np.add.at(A, (self.edges[:, 1], self.edges[:, 0]), 1.0)
        return A

    def neighbors(self, v: int) -> list[int]:
        c = self.coords(v)
        out = []
        for ax in range(self.d):
            for step in (-1, 1):
                cc = c.copy()
                cc[ax] += step
                out.append(int(self.index(cc)))
        return out


def build_torus(d: int, L: int, max_vertices: int = MAX_VERTICES) -> TorusGraph:
    if d < 1:
        raise ValueError(f"dimension must be >= 1, got d={d}")
    if L < 3:
        raise ValueError(f"side length must be >= 3 (L={L} gives a multigraph)")
    if L**d > max_vertices:
        raise ValueError(f"L^d = {L}^{d} exceeds the vertex budget {max_vertices}")
    shape = (L,) * d
    ids = np.arange(L**d)
    coords = np.stack(np.unravel_index(ids, shape), axis=-1)
    edges = []
    for ax in range(d):
        nxt = coords.copy()
        nxt[:, ax] = (nxt[:, ax] + 1) % L
        heads = np.ravel_multi_index(tuple(nxt.T), shape)
        edges.append(np.stack([ids, heads], axis=1))
    return TorusGraph(d, L, np.concatenate(edges).astype(np.int64))


@dataclass(frozen=True)
class MarkedSet:
    kind: str
    vertices: tuple[int, ...]
    n_vertices: int

    @property
    def m(self) -> int:
        return len(self.vertices)

    @property
    def mask(self) -> np.ndarray:
        out = np.zeros(self.n_vertices, dtype=bool)
        out[list(self.vertices)] = True
        return out

    def label(self) -> str:
        if self.kind == EXPLICIT:
            return "explicit:" + ",".join(map(str, self.vertices))
        return self.kind


def parse_marking(text: str) -> str | tuple[int, ...]:
    """Parse ``checkerboard``, ``half`` or ``explicit:i,j,...`` (``explicit:`` alone is empty)."""
    text = text.strip()
    low = text.lower()
    if low in (CHECKERBOARD, "case1"):
        return CHECKERBOARD
    if low in (HALF, "halfregion", "half-region", "case2"):
        return HALF
    if low.startswith("explicit:"):
        body = text.split(":", 1)[1].strip().strip("[]")
        if not body:
            return ()
        return tuple(int(tok) for tok in body.replace(" ", "").split(",") if tok)
    raise ValueError(f"unknown marking {text!r}")


def resolve_marked(torus: TorusGraph, spec: str | Sequence[int]) -> MarkedSet:
    """Resolve a marking spec against a torus.

    ``half`` marks the layers 0 <= x_d <= L/2 - 1 of the last coordinate,
    which keeps exactly half of the vertices marked.
    """
    if isinstance(spec, str):
        spec = parse_marking(spec)
    n = torus.n_vertices
    if isinstance(spec, str):
        if torus.L % 2:
            raise ValueError(f"{spec} marking needs even L, got L={torus.L}")
        coords = torus.coords(np.arange(n))
        if spec == CHECKERBOARD:
            mask = coords.sum(axis=1) % 2 == 0
        else:
            mask = coords[:, -1] < torus.L // 2
        return MarkedSet(spec, tuple(int(v) for v in np.flatnonzero(mask)), n)
    ids = [int(v) for v in spec]
    if len(set(ids)) != len(ids):
        raise ValueError("explicit marking contains duplicates")
    bad = [v for v in ids if not 0 <= v < n]
    if bad:
        raise ValueError(f"explicit marking has out-of-range ids {bad} (n={n})")
    return MarkedSet(EXPLICIT, tuple(sorted(ids)), n)


def random_marking(torus: TorusGraph, rng: np.random.Generator, allow_empty: bool = False) -> MarkedSet:
    """Each vertex marked independently with probability 1/2."""
    while True:
        mask = rng.random(torus.n_vertices) < 0.5
        if allow_empty or mask.any():
            return resolve_marked(torus, np.flatnonzero(mask).tolist())


@dataclass(frozen=True)
class SegmentDecomposition:
    """Circular run decomposition of a marking of the cycle T_N^1.

    ``marked_runs`` are the maximal marked runs, ``free_runs`` the maximal
    unmarked runs of at least two vertices, ``isolated`` the unmarked vertices
    whose two neighbours are both marked. With no marked vertex at all, the
    whole cycle is a single free run and ``cyclic`` is set.
    """

    n: int
    marked_runs: tuple[tuple[int, ...], ...]
    free_runs: tuple[tuple[int, ...], ...]
    isolated: tuple[int, ...]
    cyclic: bool = False

    @property
    def c_M(self) -> Fraction:
        return Fraction(sum(map(len, self.marked_runs)), self.n)

    @property
    def c_F(self) -> Fraction:
        return Fraction(sum(map(len, self.free_runs)), self.n)

    @property
    def c_F_prime(self) -> Fraction:
        return Fraction(len(self.isolated), self.n)

    @property
    def c_j(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(len(r), self.n) for r in self.free_runs)

    @property
    def ratios(self) -> tuple[Fraction, Fraction, Fraction]:
        return self.c_M, self.c_F, self.c_F_prime

    def marked(self) -> tuple[int, ...]:
        return tuple(sorted(v for run in self.marked_runs for v in run))


def decompose_1d(torus: TorusGraph, marked: MarkedSet) -> SegmentDecomposition:
    if torus.d != 1:
        raise ValueError(f"run decomposition is defined on the cycle only, got d={torus.d}")
    n = torus.L
    mask = marked.mask
    if not mask.any():
        return SegmentDecomposition(n, (), (tuple(range(n)),), (), cyclic=True)
    if mask.all():
        return SegmentDecomposition(n, (tuple(range(n)),), (), ())
    # rotate so the scan starts just after a marked->unmarked boundary
    start = next(i for i in range(n) if mask[i] != mask[i - 1])
    runs: list[tuple[bool, list[int]]] = []
    for k in range(n):
        v = (start + k) % n
        if runs and runs[-1][0] == mask[v]:
            runs[-1][1].append(v)
        else:
            runs.append((bool(mask[v]), [v]))
    marked_runs, free_runs, isolated = [], [], []
    for is_marked, run in runs:
        if is_marked:
            marked_runs.append(tuple(run))
        elif len(run) == 1:
            isolated.append(run[0])
        else:
            free_runs.append(tuple(run))
    return SegmentDecomposition(
        n, tuple(marked_runs), tuple(free_runs), tuple(sorted(isolated))
    )


@dataclass(frozen=True)
class ModifiedGraph:
    """Duplication graph G_M on X ⊔ Y with the extra edges (x, x') at marks.

    Edge e joins X-vertex ``x_end[e]`` to Y-vertex ``y_end[e]``. The first
    2ε edges form E' (each base edge {x, y} contributes {x, y'} then {x', y});
    the last m edges form E_2 in marked-vertex order.
    """

    torus: TorusGraph
    marked: MarkedSet
    x_end: np.ndarray = field(repr=False, compare=False)
    y_end: np.ndarray = field(repr=False, compare=False)

    @property
    def n_edges(self) -> int:
        return len(self.x_end)

    @property
    def n_vertices(self) -> int:
        return self.torus.n_vertices

    @property
    def n_prime_edges(self) -> int:
        return 2 * self.torus.n_edges

    @property
    def is_e2(self) -> np.ndarray:
        out = np.zeros(self.n_edges, dtype=bool)
        out[self.n_prime_edges:] = True
        return out

    @property
    def base_degree(self) -> np.ndarray:
        """Degrees d_G of the original torus, indexed by vertex."""
        return np.full(self.n_vertices, self.torus.degree)


def build_duplication(graph: TorusGraph, marked: MarkedSet) -> ModifiedGraph:
    e = graph.edges
    x_end = np.empty(2 * len(e), dtype=np.int64)
    y_end = np.empty(2 * len(e), dtype=np.int64)
    x_end[0::2], y_end[0::2] = e[:, 0], e[:, 1]
    x_end[1::2], y_end[1::2] = e[:, 1], e[:, 0]
    marks = np.asarray(marked.vertices, dtype=np.int64)
    return ModifiedGraph(graph, marked, np.concatenate([x_end, marks]), np.concatenate([y_end, marks]))
