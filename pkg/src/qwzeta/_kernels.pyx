# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled LU log-determinant and cyclic Jacobi kernels."""
import numpy as np
cimport numpy as cnp
from libc.math cimport log, atan2, hypot, sqrt, fabs, M_PI

cnp.import_array()


def lu_logdet_raw(a):
    """Partial-pivot LU on a copy of ``a``.

    Returns (log_modulus, phase, singular); phase is unwrapped (sum of pivot
    arguments plus pi per row swap).
    """
    cdef double complex[:, ::1] A = np.array(a, dtype=np.complex128, order="C", copy=True)
    cdef Py_ssize_t n = A.shape[0]
    cdef Py_ssize_t i, j, k, p
    cdef double best, mag, logmod = 0.0, phase = 0.0
    cdef double complex piv, f, tmp
    for k in range(n):
        p = k
        best = hypot(A[k, k].real, A[k, k].imag)
        for i in range(k + 1, n):
            mag = hypot(A[i, k].real, A[i, k].imag)
            if mag > best:
                best = mag
                p = i
        if best == 0.0:
            return float("-inf"), 0.0, True
        if p != k:
            for j in range(n):
                tmp = A[k, j]
                A[k, j] = A[p, j]
                A[p, j] = tmp
            phase += M_PI
        piv = A[k, k]
        logmod += log(best)
        phase += atan2(piv.imag, piv.real)
        for i in range(k + 1, n):
            f = A[i, k] / piv
            if f == 0:
                continue
            for j in range(k + 1, n):
                A[i, j] = A[i, j] - f * A[k, j]
    return logmod, phase, False


def jacobi_eigenvalues_raw(a, double rtol, int max_sweeps):
    """Cyclic-by-row Jacobi on a copy of the symmetric matrix ``a``.

    Returns (diagonal, sweeps); iterates until the off-diagonal Frobenius
    norm drops below ``rtol`` times the Frobenius norm of ``a``.
    """
    cdef double[:, ::1] A = np.array(a, dtype=np.float64, order="C", copy=True)
    cdef Py_ssize_t n = A.shape[0]
    cdef Py_ssize_t p, q, k
    cdef int sweep = 0
    cdef double total = 0.0, off, apq, theta, t, c, s, akp, akq
    for p in range(n):
        for q in range(n):
            total += A[p, q] * A[p, q]
    total = sqrt(total)
    while True:
        off = 0.0
        for p in range(n):
            for q in range(p + 1, n):
                off += 2.0 * A[p, q] * A[p, q]
        if sqrt(off) <= rtol * total:
            break
        if sweep >= max_sweeps:
            raise RuntimeError(f"Jacobi did not converge in {max_sweeps} sweeps")
        sweep += 1
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                if apq == 0.0:
                    continue
                theta = (A[q, q] - A[p, p]) / (2.0 * apq)
                t = 1.0 / (fabs(theta) + sqrt(theta * theta + 1.0))
                if theta < 0.0:
                    t = -t
                c = 1.0 / sqrt(t * t + 1.0)
                s = t * c
                for k in range(n):
                    akp = A[k, p]
                    akq = A[k, q]
                    A[k, p] = c * akp - s * akq
                    A[k, q] = s * akp + c * akq
                for k in range(n):
                    akp = A[p, k]
                    akq = A[q, k]
                    A[p, k] = c * akp - s * akq
                    A[q, k] = s * akp + c * akq
                A[p, q] = 0.0
                A[q, p] = 0.0
    return np.asarray([A[k, k] for k in range(n)]), sweep
