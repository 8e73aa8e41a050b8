"""Pure numpy versions of the kernels in ``_kernels.pyx``.

Same signatures and return conventions. The Jacobi fallback uses a
round-robin pair ordering so each round applies n/2 disjoint rotations with
vectorized row and column updates.
"""
import math

import numpy as np


def lu_logdet_raw(a):
    A = np.array(a, dtype=np.complex128, copy=True)
    n = A.shape[0]
    logmod = 0.0
    phase = 0.0
    for k in range(n):
        col = np.abs(A[k:, k])
        p = k + int(np.argmax(col))
        best = col[p - k]
        if best == 0.0:
            return float("-inf"), 0.0, True
        if p != k:
            A[[k, p]] = A[[p, k]]
            phase += math.pi
        piv = A[k, k]
        logmod += math.log(best)
        phase += math.atan2(piv.imag, piv.real)
        f = A[k + 1:, k] / piv
        A[k + 1:, k + 1:] -= np.outer(f, A[k, k + 1:])
    return logmod, phase, False


def _round_robin(n):
    """Tournament schedule: n-1 rounds (n even) of disjoint index pairs."""
    m = n + (n % 2)
    players = list(range(m))
    rounds = []
    for _ in range(m - 1):
        pairs = [(players[i], players[m - 1 - i]) for i in range(m // 2)]
        pairs = [(min(p, q), max(p, q)) for p, q in pairs if p < n and q < n]
        rounds.append((np.array([p for p, _ in pairs]), np.array([q for _, q in pairs])))
        players = [players[0]] + [players[-1]] + players[1:-1]
    return rounds


def jacobi_eigenvalues_raw(a, rtol, max_sweeps):
    A = np.array(a, dtype=np.float64, copy=True)
    n = A.shape[0]
    total = np.linalg.norm(A)
    rounds = _round_robin(n) if n > 1 else []
    sweep = 0
    while True:
        off = math.sqrt(2.0 * np.sum(np.triu(A, 1) ** 2))
        if off <= rtol * total:
            break
        if sweep >= max_sweeps:
            raise RuntimeError(f"Jacobi did not converge in {max_sweeps} sweeps")
        sweep += 1
        for P, Q in rounds:
            if not len(P):
                continue
            apq = A[P, Q]
            active = apq != 0.0
            safe = np.where(active, apq, 1.0)
            with np.errstate(over="ignore"):
                theta = (A[Q, Q] - A[P, P]) / (2.0 * safe)
                t = np.sign(theta) / (np.abs(theta) + np.hypot(theta, 1.0))
            t = np.where(theta == 0.0, 1.0, t)
            t = np.where(active, t, 0.0)
            c = 1.0 / np.sqrt(t * t + 1.0)
            s = t * c
            colp, colq = A[:, P].copy(), A[:, Q].copy()
            A[:, P] = c * colp - s * colq
            A[:, Q] = s * colp + c * colq
            rowp, rowq = A[P, :].copy(), A[Q, :].copy()
            A[P, :] = c[:, None] * rowp - s[:, None] * rowq
            A[Q, :] = s[:, None] * rowp + c[:, None] * rowq
            A[P, Q] = 0.0
            A[Q, P] = 0.0
    return np.diag(A).copy(), sweep
