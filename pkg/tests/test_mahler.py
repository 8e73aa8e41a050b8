import math

import numpy as np
import pytest

from qwzeta import mahler
from qwzeta.quadrature import QuadratureSpec, iterate, tensor_mean
from qwzeta.zeta import zeta_case2_limit, zeta_nonsearch_limit


def test_quadrature_weights_sum_to_one():
    for spec in (QuadratureSpec.periodic(2, 32), QuadratureSpec.halfangle_last(2, 33), QuadratureSpec.periodic(1, 17)):
        total = sum(float(w.sum()) for _, w in iterate(spec))
        assert total == pytest.approx(1.0, abs=1e-14)


def test_quadrature_validation():
    with pytest.raises(ValueError):
        QuadratureSpec.periodic(1, 8)
    with pytest.raises(ValueError):
        QuadratureSpec(2, 64, ("periodic",))
    with pytest.raises(ValueError):
        QuadratureSpec.periodic(4, 1 << 10)


def test_trig_moments_exact():
    spec = QuadratureSpec.periodic(2, 64)
    mean, dropped = tensor_mean(lambda th: np.cos(th[0]) ** 2 * np.cos(th[1]) ** 4, spec)
    assert dropped == 0
    assert mean == pytest.approx(0.5 * 3 / 8, abs=1e-15)


def test_tensor_mean_drops_nonfinite():
    spec = QuadratureSpec.periodic(1, 16)
    mean, dropped = tensor_mean(lambda th: np.where(th[0] == 0, np.inf, 1.0), spec)
    assert dropped == 1 and mean == pytest.approx(1.0)


def test_chunking_does_not_change_result(monkeypatch):
    from qwzeta import quadrature

    spec = QuadratureSpec.periodic(2, 256)
    fn = lambda th: np.log(3 + np.cos(th[0]) + np.cos(th[1]))
    a, _ = tensor_mean(fn, spec)
    monkeypatch.setattr(quadrature, "CHUNK_ELEMENTS", 1000)
    b, _ = tensor_mean(fn, spec)
    assert a == pytest.approx(b, abs=1e-15)


def test_constant():
    q = QuadratureSpec.periodic(2, 16)
    assert mahler.mahler_quadrature(lambda th, u: 3.5 + 0 * th[0], 2, 0.5, q) == pytest.approx(math.log(3.5), rel=1e-15)


@pytest.mark.parametrize("u", [0.25, 0.5, 0.9, 1.5, 2.0, 3.0])
def test_jensen(u):
    got = mahler.mahler_quadrature("jensen", 1, u, QuadratureSpec.periodic(1, 4096))
    assert got == pytest.approx(2 * math.log(max(1.0, u)), abs=1e-8)


def test_unknown_integrand():
    with pytest.raises(ValueError):
        mahler.mahler_quadrature("nope", 1, 0.5)


def test_zero_points_excluded():
    # 1 - 2cos θ + 1 vanishes at θ = 0
    mm = mahler.mahler_measure("jensen", 1, 1.0, QuadratureSpec.periodic(1, 64))
    assert mm.excluded == 1 and mm.flags == ("excluded-points",)


def test_nonsearch_d1():
    v = mahler.log_zeta_nonsearch(1, 0.5)
    assert v.value == pytest.approx(math.log(0.5), abs=1e-10)
    assert math.exp(v.value) == pytest.approx(zeta_nonsearch_limit(1, 0.5).real, abs=1e-10)


def test_nonsearch_d2():
    assert mahler.log_zeta_nonsearch(2, 0.6).value == pytest.approx(math.log(zeta_nonsearch_limit(2, 0.6).real), abs=1e-7)


def test_search_identities():
    assert mahler.log_zeta_search(1, 0.5).value == pytest.approx(math.log(zeta_case2_limit(1, 0.5).real), abs=1e-7)
    s = mahler.log_zeta_search(2, 0.9)
    assert s.value == pytest.approx(math.log(zeta_case2_limit(2, 0.9).real), abs=1e-7)
    assert s.imag_residual < 1e-8


def test_small_u_goes_to_zero():
    for fn in (mahler.log_zeta_nonsearch, mahler.log_zeta_search):
        assert abs(fn(2, 1e-4).value) < 1e-3


@pytest.mark.parametrize("u", [0.0, 1.0, -0.2, 0.3 + 0.1j])
def test_u_range(u):
    with pytest.raises(ValueError):
        mahler.log_zeta_nonsearch(2, u)


@pytest.mark.parametrize("variant", ["nonsearch", "search"])
def test_halfangle_convergence(variant):
    """Identity residual shrinks at least fourfold per doubling, or is already at round-off."""
    fn = mahler.log_zeta_search if variant == "search" else mahler.log_zeta_nonsearch
    rule = QuadratureSpec.halfangle_last if variant == "search" else QuadratureSpec.periodic
    ref = math.log((zeta_case2_limit if variant == "search" else zeta_nonsearch_limit)(1, 0.7, rule(1, 1 << 16)).real)
    errs = [abs(fn(1, 0.7, rule(1, n)).value - ref) for n in (32, 64, 128)]
    for a, b in zip(errs, errs[1:]):
        assert b < 1e-13 or a / b >= 4


def test_difference_is_log_power():
    # both integrals agree, so the gap is (d - 1/2)(-log(1-u))
    for d in (1, 2):
        for u in (0.2, 0.7):
            ns = mahler.log_zeta_nonsearch(d, u).value
            s = mahler.log_zeta_search(d, u).value
            assert ns - s == pytest.approx(-(d - 0.5) * math.log1p(-u), abs=1e-9)


def test_figure1_table_small():
    t = mahler.figure1_table(1, [0.05, 0.5, 0.9], quad_points=256)
    assert len(t.rows) == 3 and t.monotone
    assert abs(t.diffs[0]) < abs(t.diffs[1])
    lines = t.to_csv().splitlines()
    assert lines[0] == "u,L_nonsearch,L_search,diff"
    assert lines[1].startswith("0.05,")
    peak, at = t.max_abs_diff()
    assert at == 0.9 and peak == pytest.approx(abs(t.diffs[2]))


def test_figure1_workers_identical():
    a = mahler.figure1_table(2, [0.1, 0.4, 0.8], quad_points=64, workers=1)
    b = mahler.figure1_table(2, [0.1, 0.4, 0.8], quad_points=64, workers=3)
    assert a.to_csv() == b.to_csv()
