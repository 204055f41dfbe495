import math

import numpy as np
import pytest

import apgaps.heath_brown as hb
from apgaps.arith import chebyshev_psi, mobius, von_mangoldt_table


def test_kth_root_floor():
    assert hb.kth_root_floor(1000, 3) == 10
    assert hb.kth_root_floor(999, 3) == 9
    assert hb.kth_root_floor(1, 4) == 1
    assert hb.kth_root_floor(2**40, 2) == 2**20
    for x in (7, 100, 12345):
        for k in (1, 2, 3, 4):
            r = hb.kth_root_floor(x, k)
            assert r**k <= x < (r + 1) ** k


def test_identity_reproduces_von_mangoldt():
    x = 2000
    lam = von_mangoldt_table(x)
    for k in (1, 2, 3):
        table = hb.hb_lambda_table(x, k)
        assert float(np.max(np.abs(table[1:] - lam[1:]))) <= 1e-9


def test_hb_lambda_point_values():
    assert hb.hb_lambda(1, 500, 2) == pytest.approx(0.0, abs=1e-12)
    assert hb.hb_lambda(64, 500, 2) == pytest.approx(math.log(2), rel=1e-12)
    assert hb.hb_lambda(97, 500, 3) == pytest.approx(math.log(97), rel=1e-12)
    assert hb.hb_lambda(30, 500, 2) == pytest.approx(0.0, abs=1e-10)


def test_one_fold_is_moebius_inversion():
    # k = 1 keeps the truncation inactive: sum_{uv = n} mu(v) log u = Lambda(n)
    x = 300
    for n in (2, 12, 64, 97, 210):
        want = math.fsum(mobius(v) * math.log(n // v) for v in range(1, n + 1) if n % v == 0)
        assert hb.hb_lambda(n, x, 1) == pytest.approx(want, abs=1e-10)


def test_hb_lambda_rejects_bad_args():
    with pytest.raises(ValueError):
        hb.hb_lambda_table(1000, 0)
    with pytest.raises(ValueError):
        hb.hb_lambda(1001, 1000, 2)


def test_decompose_zero_function():
    total, comps = hb.hb_decompose_sum(200, 2, lambda n: 0.0)
    assert total == 0
    assert all(v == 0 for c in comps for v in c.values)


def test_decompose_constant_recovers_psi():
    total, comps = hb.hb_decompose_sum(100, 2, lambda n: 1.0)
    assert total.real == pytest.approx(chebyshev_psi(100), rel=1e-12)
    assert total.imag == pytest.approx(0.0, abs=1e-12)
    assert comps


def test_decompose_character_weight():
    import apgaps.characters as chars

    chi = next(c for c in chars.enumerate_characters(4) if not c.is_principal)
    f = lambda n: chi(n) * math.log(500 / n)
    total, _ = hb.hb_decompose_sum(500, 2, f)
    assert abs(total - hb.direct_lambda_sum(500, f)) <= 1e-9


def test_decompose_three_fold():
    f = lambda n: 1.0 / n
    total, comps = hb.hb_decompose_sum(2000, 3, f)
    assert abs(total - hb.direct_lambda_sum(2000, f)) <= 1e-9
    assert all(hb.component_constraints_ok(c, 2000) for c in comps)


def test_component_structure():
    x = 1000
    _, comps = hb.hb_decompose_sum(x, 2, lambda n: 1.0)
    z = hb.kth_root_floor(x, 2)
    for c in comps:
        assert 1 <= c.j <= 2
        assert c.sign == (-1) ** (c.j - 1)
        assert c.weight == math.comb(2, c.j)
        assert len(c.u_boxes) == c.j and len(c.v_boxes) == c.j
        assert all(2**b <= z for b in c.v_boxes)
        assert hb.component_constraints_ok(c, x)
    # dyadic boxing keeps the component count polylogarithmic
    assert len(comps) <= (x.bit_length() + 1) ** 4


def test_multi_shares_enumeration():
    rng = np.random.default_rng(1)
    rows = rng.normal(size=(4, 501))
    fs = [lambda n, row=row: row[n] for row in rows]
    totals, _ = hb.hb_decompose_sum_multi(500, 2, fs)
    for f, tot in zip(fs, totals):
        assert abs(tot - hb.direct_lambda_sum(500, f)) <= 1e-9


def test_decompose_bounds():
    with pytest.raises(ValueError):
        hb.hb_decompose_sum(2e5, 2, lambda n: 1.0)
    with pytest.raises(ValueError):
        hb.hb_decompose_sum(100, 4, lambda n: 1.0)
