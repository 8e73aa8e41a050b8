"""Closed-form spectra of path graphs, torus adjacency, and the Case-2 Dirichlet walk."""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

MERGE_ATOL = 1e-12


@dataclass(frozen=True)
class SpectrumList:
    values: np.ndarray  # one entry per index tuple, in generation order
    provenance: str = "closed-form"

    def __len__(self) -> int:
        return len(self.values)

    def sorted(self) -> np.ndarray:
        return np.sort(self.values)

    def multiset(self, atol: float = MERGE_ATOL) -> list[tuple[float, int]]:
        """Merge coinciding eigenvalues into (value, multiplicity) pairs."""
        out: list[tuple[float, int]] = []
        for v in self.sorted():
            if out and abs(v - out[-1][0]) <= atol:
                out[-1] = (out[-1][0], out[-1][1] + 1)
            else:
                out.append((float(v), 1))
        return out


def path_spectrum(n: int) -> SpectrumList:
    """{2 cos(kπ/(n+1)) : k = 1..n}."""
    if n < 0:
        raise ValueError("n must be >= 0")
    k = np.arange(1, n + 1)
    return SpectrumList(2.0 * np.cos(k * np.pi / (n + 1)))


def torus_adjacency_spectrum(d: int, L: int) -> SpectrumList:
    """{2 Σ_j cos(2π(k_j-1)/L) : k_j = 1..L}, index tuples in row-major order."""
    if d < 1 or L < 1:
        raise ValueError("d and L must be positive")
    c = 2.0 * np.cos(2.0 * np.pi * np.arange(L) / L)
    total = np.zeros(())
    for _ in range(d):
        total = np.add.outer(total, c)
    return SpectrumList(total.ravel())


def case2_dirichlet_spectrum(d: int, N: int) -> SpectrumList:
    """(1/d)(Σ_{j<d} cos((k_j-1)π/N) + cos(k_d π/(N+1))), k_j ∈ 1..2N, k_d ∈ 1..N."""
    if d < 1 or N < 1:
        raise ValueError("d and N must be positive")
    periodic = np.cos(np.arange(2 * N) * np.pi / N)
    layered = np.cos(np.arange(1, N + 1) * np.pi / (N + 1))
    total = np.zeros(())
    for _ in range(d - 1):
        total = np.add.outer(total, periodic)
    total = np.add.outer(total, layered)
    return SpectrumList(total.ravel() / d)


def dirichlet_1d_spectrum(run_lengths, n_isolated: int) -> SpectrumList:
    """Spectrum of (1/2) ⊕_j D_{|F_j|} ⊕ O_{|F'|}."""
    parts = [path_spectrum(n).values / 2.0 for n in run_lengths]
    parts.append(np.zeros(n_isolated))
    return SpectrumList(np.concatenate(parts) if parts else np.empty(0))


def kronecker_sum_spectrum(a, b) -> np.ndarray:
    """All sums λ_a + λ_b (eigenvalues of I ⊗ A + B ⊗ I)."""
    return np.add.outer(np.asarray(b), np.asarray(a)).ravel()


def index_tuples(d: int, N: int):
    """Index tuples (k_1, ..., k_d) of the Case-2 family, in generation order."""
    ranges = [range(1, 2 * N + 1)] * (d - 1) + [range(1, N + 1)]
    return itertools.product(*ranges)
