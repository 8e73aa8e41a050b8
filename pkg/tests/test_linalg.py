import cmath
import math

import numpy as np
import pytest

from qwzeta import linalg
from qwzeta.linalg import lu_logdet, lu_logdet_many, symmetric_eigenvalues, wrap_phase
from qwzeta.operators import path_adjacency


def cofactor_det(A):
    """Laplace expansion along the first row; exact up to rounding for small n."""
    n = len(A)
    if n == 1:
        return A[0][0]
    total = 0
    for j in range(n):
        minor = [row[:j] + row[j + 1:] for row in A[1:]]
        total += (-1) ** j * A[0][j] * cofactor_det(minor)
    return total


def crandn(rng, n):
    return rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))


def test_identity(backend):
    ld = lu_logdet(np.eye(5), backend)
    assert ld.log_modulus == 0.0 and ld.phase == 0.0 and not ld.singular


def test_diag(backend):
    ld = lu_logdet(np.diag([2.0, 3.0]), backend)
    assert ld.log_modulus == pytest.approx(math.log(6), rel=1e-15)
    assert ld.phase == 0.0


def test_permutation_sign(backend):
    P = np.array([[0.0, 1.0], [1.0, 0.0]])
    ld = lu_logdet(P, backend)
    assert ld.log_modulus == pytest.approx(0.0, abs=1e-15)
    assert abs(ld.phase) == pytest.approx(math.pi)
    assert ld.value == pytest.approx(-1.0)


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6])
def test_cofactor_oracle(backend, rng, n):
    for _ in range(5):
        A = crandn(rng, n)
        expected = cofactor_det(A.tolist())
        got = lu_logdet(A, backend).value
        assert abs(got - expected) / abs(expected) < 1e-10


def test_real_input_cofactor(backend, rng):
    A = rng.standard_normal((6, 6))
    expected = cofactor_det(A.tolist())
    got = lu_logdet(A, backend)
    assert abs(got.value - expected) / abs(expected) < 1e-10


def test_multiplicativity(backend, rng):
    A, B = crandn(rng, 20), crandn(rng, 20)
    la, lb, lab = (lu_logdet(M, backend) for M in (A, B, A @ B))
    assert abs(la.log_modulus + lb.log_modulus - lab.log_modulus) / abs(lab.log_modulus) < 1e-10
    assert abs(wrap_phase(la.phase + lb.phase - lab.phase)) < 1e-10


def test_large_matrix_no_overflow(backend, rng):
    n = 200 if backend == "compiled" else 120
    A = 50 * crandn(rng, n)
    ld = lu_logdet(A, backend)
    assert math.isfinite(ld.log_modulus) and ld.log_modulus > 700
    ref = np.linalg.slogdet(A)
    assert ld.log_modulus == pytest.approx(ref[1], rel=1e-12)
    assert abs(wrap_phase(ld.phase - cmath.phase(ref[0]))) < 1e-9


def test_singular(backend):
    A = np.array([[1.0, 2.0], [2.0, 4.0]])
    ld = lu_logdet(A, backend)
    assert ld.singular and ld.log_modulus == -math.inf and ld.value == 0


def test_batch_preserves_order(rng):
    mats = [np.diag([float(k + 1)] * 3) for k in range(6)]
    out = lu_logdet_many(mats, workers=3)
    assert [round(x.log_modulus, 12) for x in out] == [round(3 * math.log(k + 1), 12) for k in range(6)]


def test_backends_agree(rng):
    if len(linalg.BACKENDS) < 2:
        pytest.skip("compiled kernels not built")
    A = crandn(rng, 40)
    a, b = (lu_logdet(A, k) for k in ("compiled", "python"))
    assert a.log_modulus == pytest.approx(b.log_modulus, rel=1e-13)
    assert abs(wrap_phase(a.phase - b.phase)) < 1e-12


def test_wrap_phase():
    assert wrap_phase(-math.pi) == math.pi
    assert wrap_phase(3 * math.pi) == pytest.approx(math.pi)
    assert wrap_phase(0.5) == 0.5


def test_path_eigenvalues(backend):
    assert np.allclose(symmetric_eigenvalues(path_adjacency(2), backend=backend), [-1, 1], atol=1e-14)
    r = math.sqrt(2)
    assert np.allclose(symmetric_eigenvalues(path_adjacency(3), backend=backend), [-r, 0, r], atol=1e-14)


def test_zero_matrix(backend):
    assert symmetric_eigenvalues(np.zeros((4, 4)), backend=backend).tolist() == [0.0] * 4


@pytest.mark.parametrize("n", [2, 7, 30, 64])
def test_eigen_invariants(backend, rng, n):
    X = rng.standard_normal((n, n))
    A = X + X.T
    ev = symmetric_eigenvalues(A, backend=backend)
    assert np.all(np.diff(ev) >= 0)
    assert ev.sum() == pytest.approx(np.trace(A), abs=1e-10 * n)
    assert (ev**2).sum() == pytest.approx(np.sum(A * A), rel=1e-12)
    assert np.abs(ev - np.linalg.eigvalsh(A)).max() < 1e-10 * max(1, np.abs(ev).max())


def test_eigen_rejects_asymmetric(backend):
    with pytest.raises(ValueError, match="symmetric"):
        symmetric_eigenvalues(np.array([[0.0, 1.0], [0.0, 0.0]]), backend=backend)


def test_rejects_non_square():
    with pytest.raises(ValueError):
        lu_logdet(np.zeros((2, 3)))
    with pytest.raises(ValueError):
        symmetric_eigenvalues(np.zeros((2, 3)))


def test_unknown_backend():
    with pytest.raises(ValueError):
        lu_logdet(np.eye(2), backend="fortran")


def test_eigen_converges_on_graph_spectra(backend):
    # highly degenerate spectra drive the off-diagonal norm far below the diagonal one
    from qwzeta.graph import build_torus

    A = build_torus(2, 8).adjacency().astype(float)
    ev = symmetric_eigenvalues(A, backend=backend)
    assert np.abs(ev - np.linalg.eigvalsh(A)).max() < 1e-10
    ev = symmetric_eigenvalues(path_adjacency(50), backend=backend)
    assert np.abs(ev - np.linalg.eigvalsh(path_adjacency(50))).max() < 1e-10
