import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qwzeta.graph import build_torus, decompose_1d, resolve_marked
from qwzeta.quadrature import QuadratureSpec
from qwzeta.zeta import (
    search_walk,
    sweep,
    zeta_1d_finite,
    zeta_1d_limit,
    zeta_case1,
    zeta_case2_finite,
    zeta_case2_limit,
    zeta_direct,
    zeta_factorized,
    zeta_nonsearch_limit,
)

CASE1_D1_HALF = 0.5**1.5 * 1.5  # (1-u)^{3/2}(1+u) at u = 1/2
CASE1_D2_HALF = 0.5**3.5 * 1.5  # (1-u)^{7/2}(1+u) at u = 1/2


def direct(d, L, marking, u):
    w = search_walk(d, L, marking)
    return zeta_direct(w.W, w.torus.n_vertices, u)


def setup(d, L, marking):
    t = build_torus(d, L)
    return t, resolve_marked(t, marking)


@pytest.mark.parametrize("marking", [[], [0, 2], "half", [1]])
def test_u_zero_is_one(marking):
    assert direct(1, 4, marking, 0).value == 1
    t, m = setup(1, 4, marking)
    assert zeta_factorized(t, m, 0).value == 1


def test_checkerboard_cycle_value():
    assert direct(1, 4, [0, 2], 0.5).value == pytest.approx(CASE1_D1_HALF, rel=1e-13)
    t, m = setup(1, 4, [0, 2])
    assert zeta_1d_finite(decompose_1d(t, m), 0.5).value == pytest.approx(CASE1_D1_HALF, rel=1e-14)


def test_two_runs_direct_vs_factorized_and_closed():
    t, m = setup(1, 6, [0, 3])
    ref = direct(1, 6, m, 0.3).value
    assert zeta_factorized(t, m, 0.3).value == pytest.approx(ref, rel=1e-10)
    assert zeta_1d_finite(decompose_1d(t, m), 0.3).value == pytest.approx(ref, rel=1e-10)


def test_unmarked_cycle_product_formula():
    u = 0.5
    prod = math.prod(1 - 2 * math.cos(4 * math.pi * k / 4) * u + u * u for k in range(4)) ** 0.25
    t, m = setup(1, 4, [])
    assert zeta_factorized(t, m, u).value == pytest.approx(prod, rel=1e-13)
    assert direct(1, 4, [], u).value == pytest.approx(prod, rel=1e-12)


def test_all_marked():
    t, m = setup(1, 4, range(4))
    assert zeta_factorized(t, m, 0.5).value == pytest.approx(0.125, rel=1e-14)
    assert direct(1, 4, range(4), 0.5).value == pytest.approx(0.125, rel=1e-12)
    assert zeta_1d_finite(decompose_1d(t, m), 0.5).value == pytest.approx(0.125, rel=1e-14)


def test_checkerboard_2d_matches_case1():
    t, m = setup(2, 4, "checkerboard")
    assert zeta_factorized(t, m, 0.7).value == pytest.approx(zeta_case1(2, 0.7).value, rel=1e-13)


def test_case1_values():
    assert zeta_case1(1, 0.5).value == pytest.approx(CASE1_D1_HALF, rel=1e-15)
    assert zeta_case1(2, 0.5).value == pytest.approx(CASE1_D2_HALF, rel=1e-15)


@pytest.mark.parametrize("L", [4, 6, 8])
def test_case1_independent_of_side(L):
    assert direct(2, L, "checkerboard", 0.3).value == pytest.approx(zeta_case1(2, 0.3).value, abs=1e-12)


def test_case1_complex_matches_direct():
    u = 0.3 + 0.2j
    w = search_walk(2, 4, "checkerboard")
    n = w.torus.n_vertices
    assert abs(zeta_direct(w.W, n, u).value - zeta_case1(2, u, n).value) < 1e-12


def test_case2_d1_matches_one_run():
    t, m = setup(1, 6, [0, 1, 2])
    assert zeta_case2_finite(1, 3, 0.4).value == pytest.approx(zeta_1d_finite(decompose_1d(t, m), 0.4).value, rel=1e-13)


def test_case2_d2_matches_direct():
    assert zeta_case2_finite(2, 2, 0.3).value == pytest.approx(direct(2, 4, "half", 0.3).value, rel=1e-10)


@pytest.mark.parametrize("d,N", [(1, 1), (2, 2), (3, 2)])
def test_case2_u_zero(d, N):
    assert zeta_case2_finite(d, N, 0).value == 1


def test_limit_1d_jensen():
    q = QuadratureSpec.periodic(1)
    for ratios in [(0.5, 0, 0.5), (0.2, 0.5, 0.3), (0, 1, 0)]:
        c_M, _, c_Fp = ratios
        for u in (0.2, 0.5, -0.6):
            want = (1 - u) ** (3 * c_M) * (1 + u) ** (2 * c_Fp)
            assert zeta_1d_limit(ratios, u, q).value == pytest.approx(want, abs=1e-12)
    assert zeta_1d_limit((0, 1, 0), 2.0, q).value == pytest.approx(4.0, rel=1e-12)


def test_limit_1d_rejects_bad_ratios():
    with pytest.raises(ValueError):
        zeta_1d_limit((0.5, 0.6, 0), 0.3)


def test_limit_remarks():
    assert zeta_1d_limit((0.5, 0, 0.5), 0.5).value == pytest.approx(CASE1_D1_HALF, rel=1e-14)
    for u in (0.2, 0.5, 0.8):
        assert zeta_1d_limit((0.5, 0.5, 0), u).value == pytest.approx(zeta_case2_limit(1, u).value, abs=1e-7)


def test_limits_at_zero():
    assert zeta_case2_limit(2, 0).value == 1
    assert zeta_nonsearch_limit(2, 0).value == 1


def test_nonsearch_d1_is_one_minus_u():
    assert zeta_nonsearch_limit(1, 0.5).value == pytest.approx(0.5, abs=1e-12)


def test_case2_limit_approached_by_finite():
    lim = zeta_case2_limit(1, 0.5).value
    gaps = [abs(zeta_case2_finite(1, N, 0.5).value - lim) for N in (32, 128, 512)]
    assert gaps[0] > gaps[1] > gaps[2]
    # the gap shrinks like 1/N
    assert gaps[2] * 512 == pytest.approx(gaps[1] * 128, rel=0.05)


def test_real_u_gives_real_positive():
    for u in (-0.9, -0.3, 0.4, 0.95):
        v = direct(1, 7, [1, 2, 5], u)
        assert complex(v.value).imag == 0 and v.real > 0


def test_sweep_order():
    us = [0.1, 0.2, 0.3, 0.4]
    vals = sweep(lambda u: zeta_case1(2, u), us, workers=3)
    assert [v.u for v in vals] == us


@settings(max_examples=25, deadline=None)
@given(st.integers(3, 9), st.data(), st.sampled_from([0.1, -0.5, 0.9, 0.3 + 0.2j]))
def test_direct_equals_closed_1d(L, data, u):
    marks = sorted(data.draw(st.sets(st.integers(0, L - 1), min_size=1)))
    t, m = setup(1, L, marks)
    ref = direct(1, L, m, u).value
    assert abs(zeta_1d_finite(decompose_1d(t, m), u).value - ref) / abs(ref) < 1e-9
    assert abs(zeta_factorized(t, m, u, spectrum="numeric").value - ref) / abs(ref) < 1e-9
