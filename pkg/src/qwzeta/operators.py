"""Boundary matrices K and L, the search evolution W', and the Dirichlet walk P_M."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import TextIO

import numpy as np

from .graph import MarkedSet, ModifiedGraph, TorusGraph


@dataclass(frozen=True)
class SparseRealMatrix:
    shape: tuple[int, int]
    rows: np.ndarray = field(repr=False)
    cols: np.ndarray = field(repr=False)
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        keys = self.rows.astype(np.int64) * self.shape[1] + self.cols
        if len(np.unique(keys)) != len(keys):
            raise ValueError("duplicate (row, col) entries")
        if len(keys) and (self.rows.max() >= self.shape[0] or self.cols.max() >= self.shape[1]):
            raise ValueError("entry outside declared shape")

    @property
    def nnz(self) -> int:
        return len(self.values)

    def to_dense(self) -> np.ndarray:
        out = np.zeros(self.shape)
        out[self.rows, self.cols] = self.values
        return out

    def matvec(self, v: np.ndarray) -> np.ndarray:
        out = np.zeros(self.shape[0], dtype=np.result_type(v, float))
        np.add.at(out, self.rows, self.values * v[self.cols])
        return out

    def rmatvec(self, v: np.ndarray) -> np.ndarray:
        out = np.zeros(self.shape[1], dtype=np.result_type(v, float))
        np.add.at(out, self.cols, self.values * v[self.rows])
        return out

    def write_triplets(self, fh: TextIO) -> None:
        """Header ``rows cols nnz`` then one ``row col value`` line per entry."""
        fh.write(f"{self.shape[0]} {self.shape[1]} {self.nnz}\n")
        for r, c, v in zip(self.rows, self.cols, self.values):
            fh.write(f"{r} {c} {v:.17g}\n")

    @classmethod
    def read_triplets(cls, fh: TextIO) -> "SparseRealMatrix":
        nr, nc, nnz = map(int, fh.readline().split())
        body = [fh.readline().split() for _ in range(nnz)]
        rows = np.array([int(t[0]) for t in body], dtype=np.int64)
        cols = np.array([int(t[1]) for t in body], dtype=np.int64)
        vals = np.array([float(t[2]) for t in body])
        return cls((nr, nc), rows, cols, vals)


def _boundary(G: ModifiedGraph, ends: np.ndarray) -> SparseRealMatrix:
    marked = G.marked.mask
    deg = G.base_degree
    e2 = G.is_e2
    # marked vertices keep only their E_2 edge, with weight 1
    keep = np.where(marked[ends], e2, ~e2)
    rows = np.flatnonzero(keep)
    cols = ends[rows]
    vals = np.where(marked[cols], 1.0, 1.0 / np.sqrt(deg[cols]))
    order = np.lexsort((rows, cols))
    return SparseRealMatrix((G.n_edges, G.n_vertices), rows[order], cols[order], vals[order])


def build_K(G: ModifiedGraph) -> SparseRealMatrix:
    """(2ε+m) x N boundary matrix on the X side; columns are orthonormal."""
    return _boundary(G, G.x_end)


def build_L(G: ModifiedGraph) -> SparseRealMatrix:
    """(2ε+m) x N boundary matrix on the Y side; columns are orthonormal."""
    return _boundary(G, G.y_end)


def build_time_evolution(G: ModifiedGraph) -> np.ndarray:
    """Dense W' = (2LL^T - I)(2KK^T - I), complex-typed."""
    K = build_K(G).to_dense()
    L = build_L(G).to_dense()
    n = G.n_edges
    RK = 2.0 * K @ K.T - np.eye(n)
    RL = 2.0 * L @ L.T - np.eye(n)
    return (RL @ RK).astype(np.complex128)


class TimeEvolutionOperator:
    """Matrix-free W' as two reflections; ``apply`` costs O(nnz)."""

    def __init__(self, G: ModifiedGraph):
        self.K = build_K(G)
        self.L = build_L(G)
        self.n = G.n_edges

    def apply(self, v: np.ndarray) -> np.ndarray:
        w = 2.0 * self.K.matvec(self.K.rmatvec(v)) - v
        return 2.0 * self.L.matvec(self.L.rmatvec(w)) - w


@dataclass(frozen=True)
class DirichletMatrix:
    """Random walk restricted to the unmarked vertices (absorbed at marks).

    ``vertices[i]`` is the torus vertex behind row/column i.
    """

    matrix: np.ndarray = field(repr=False)
    vertices: tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.vertices)


def build_dirichlet(graph: TorusGraph, marked: MarkedSet) -> DirichletMatrix:
    free = np.flatnonzero(~marked.mask)
    A = graph.adjacency()
    P = A[np.ix_(free, free)] / graph.degree
    return DirichletMatrix(P, tuple(int(v) for v in free))


def path_adjacency(n: int) -> np.ndarray:
    """D_n: adjacency matrix of the path on n vertices."""
    return np.eye(n, k=1) + np.eye(n, k=-1)


def _torus_shift_adjacency(d: int, L: int) -> np.ndarray:
    """Σ_axes (S + S^T) over cyclic shifts; at L = 2 this is the doubled-edge cycle."""
    n = L**d
    A = np.zeros((n, n))
    S = np.roll(np.eye(L), 1, axis=1)
    C = S + S.T
    for axis in range(d):
        A += np.kron(np.kron(np.eye(L**axis), C), np.eye(L ** (d - axis - 1)))
    return A


def case2_dirichlet_kronecker(d: int, N: int) -> np.ndarray:
    """(1/2d)(I_N ⊗ A(T_{2N}^{d-1}) + D_N ⊗ I), the layered Case-2 form.

    Rows are ordered layer-major: the unmarked layer index x_d - N first,
    then the remaining coordinates in row-major order.
    """
    inner = _torus_shift_adjacency(d - 1, 2 * N)
    size = inner.shape[0]
    return (np.kron(np.eye(N), inner) + np.kron(path_adjacency(N), np.eye(size))) / (2 * d)


def case2_layer_permutation(graph: TorusGraph, dm: DirichletMatrix) -> np.ndarray:
    """Row order of ``dm`` that matches :func:`case2_dirichlet_kronecker`."""
    coords = graph.coords(np.asarray(dm.vertices))
    N = graph.L // 2
    layer = coords[:, -1] - N
    rest = np.zeros(len(layer), dtype=np.int64)
    for ax in range(graph.d - 1):
        rest = rest * graph.L + coords[:, ax]
    return np.lexsort((rest, layer))
