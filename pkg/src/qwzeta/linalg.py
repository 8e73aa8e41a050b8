"""Dense complex log-determinants and a symmetric Jacobi eigensolver.

The hot loops live in the compiled ``_kernels`` extension when it is built;
otherwise (or with ``QWZETA_PURE_PYTHON=1``) the numpy fallback is used.
``BACKEND`` names the active one.
"""
from __future__ import annotations

import cmath
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import _fallback

if os.environ.get("QWZETA_PURE_PYTHON"):
    _kernels = _fallback
    BACKEND = "python"
else:
    try:
        from . import _kernels  # type: ignore[attr-defined]

        BACKEND = "compiled"
    except ImportError:
        _kernels = _fallback
        BACKEND = "python"

BACKENDS = {"python": _fallback}
if BACKEND == "compiled":
    BACKENDS["compiled"] = _kernels


def wrap_phase(phi: float) -> float:
    """Map an angle to (-pi, pi]."""
    out = math.remainder(phi, 2 * math.pi)
    return math.pi if out == -math.pi else out


@dataclass(frozen=True)
class LogDet:
    log_modulus: float
    phase: float
    singular: bool = False

    @property
    def value(self) -> complex:
        if self.singular:
            return 0j
        return cmath.exp(complex(self.log_modulus, self.phase))

    def as_complex(self) -> complex:
        return complex(self.log_modulus, self.phase)


def _kernel(backend: str | None):
    if backend is None:
        return _kernels
    try:
        return BACKENDS[backend]
    except KeyError:
        raise ValueError(f"backend {backend!r} not available (have {sorted(BACKENDS)})") from None


def lu_logdet(A, backend: str | None = None) -> LogDet:
    """log det A from an LU factorization with partial pivoting.

    A zero pivot is reported through ``singular`` with log-modulus -inf; it
    does not raise.
    """
    A = np.asarray(A)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"square matrix required, got shape {A.shape}")
    if A.shape[0] == 0:
        return LogDet(0.0, 0.0)
    logmod, phase, singular = _kernel(backend).lu_logdet_raw(A)
    if singular:
        return LogDet(-math.inf, 0.0, True)
    return LogDet(logmod, wrap_phase(phase))


def lu_logdet_many(mats: Iterable, workers: int = 1, backend: str | None = None) -> list[LogDet]:
    """Batch ``lu_logdet``; results come back in input order."""
    mats = list(mats)
    if workers <= 1:
        return [lu_logdet(A, backend) for A in mats]
    with ThreadPoolExecutor(workers) as pool:
        return list(pool.map(lambda A: lu_logdet(A, backend), mats))


def symmetric_eigenvalues(
    A,
    rtol: float = 1e-13,
    max_sweeps: int = 100,
    backend: str | None = None,
) -> np.ndarray:
    """Ascending eigenvalues of a real symmetric matrix by Jacobi rotations."""
    A = np.asarray(A, dtype=np.float64)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"square matrix required, got shape {A.shape}")
    if A.size == 0:
        return np.empty(0)
    scale = max(np.abs(A).max(), 1.0)
    if np.abs(A - A.T).max() > 1e-12 * scale:
        raise ValueError("matrix is not symmetric")
    if not np.any(A):
        return np.zeros(A.shape[0])
    diag, _ = _kernel(backend).jacobi_eigenvalues_raw(np.ascontiguousarray(A), rtol, max_sweeps)
    return np.sort(diag)


def symmetric_eigenvalues_many(mats: Sequence, workers: int = 1, **kw) -> list[np.ndarray]:
    if workers <= 1:
        return [symmetric_eigenvalues(A, **kw) for A in mats]
    with ThreadPoolExecutor(workers) as pool:
        return list(pool.map(lambda A: symmetric_eigenvalues(A, **kw), mats))
