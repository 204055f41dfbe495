import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import apgaps.bv_sums as bv
from apgaps.arith import (
    chebyshev_psi,
    euler_phi,
    log_integral_Y1,
    mobius,
    prime_power_arrays,
    tau_m,
)
from apgaps.reports import ERROR_SUM_CSV_HEADER


def _class_prime_powers(x, r, a):
    P, W = prime_power_arrays(int(math.floor(x)))
    return [(int(p), float(w)) for p, w in zip(P, W) if r == 1 or p % r == a % r]


def test_smoothed_R_small_and_empty():
    assert bv.smoothed_R(1.5) == 0.0
    want = math.fsum(w * math.log(10 / p) for p, w in _class_prime_powers(10, 1, 0))
    assert bv.smoothed_R(10) == pytest.approx(want, rel=1e-12)


def test_smoothed_R_integral_representation():
    # R(x; r, a) equals the integral of psi(y; r, a) dy/y, integrated exactly
    # between the jumps of the step function psi
    def integral_oracle(x, r, a):
        pw = _class_prime_powers(x, r, a)
        total, running, prev = [], 0.0, 1.0
        for p, w in pw:
            total.append(running * (math.log(p) - math.log(prev)))
            running += w
            prev = p
        total.append(running * (math.log(x) - math.log(prev)))
        return math.fsum(total)

    for x, r, a in [(1000.0, 1, 0), (5000.0, 3, 1), (12000.0, 4, 3), (33333.3, 10, 7)]:
        assert bv.smoothed_R(x, r, a) == pytest.approx(integral_oracle(x, r, a), rel=1e-6, abs=1e-6)


def test_sandwich_examples():
    ok, lo, psi, hi = bv.sandwich_check(1e4, 3, 1, 0.01)
    assert ok and lo <= psi <= hi
    # below the first prime of the class everything vanishes
    ok, lo, psi, hi = bv.sandwich_check(2.0, 7, 3, 0.1)
    assert ok and lo == psi == hi == 0.0
    for lam in (1.0, 0.1, 0.01):
        assert bv.sandwich_check(1e4, 3, 1, lam)[0]
    with pytest.raises(ValueError):
        bv.sandwich_check(100, 1, 0, 0.0)


@settings(max_examples=30)
@given(
    st.floats(min_value=100.0, max_value=1e5),
    st.integers(1, 20),
    st.floats(min_value=0.01, max_value=1.0),
    st.data(),
)
def test_sandwich_random(x, r, lam, data):
    a = data.draw(st.integers(0, r - 1)) if r > 1 else 0
    assert bv.sandwich_check(x, r, a, lam)[0]


def naive_psi_by_class(x, m):
    """Independent per-class accumulation: plain dict loop, no bincount."""
    sums = {a: [] for a in range(m)}
    for p, w in _class_prime_powers(x, 1, 0):
        sums[p % m].append(w)
    return {a: math.fsum(v) for a, v in sums.items()}


def naive_E_b(x, q, b):
    total = []
    for d in range(1, int(math.floor(x**b)) + 1):
        if math.gcd(d, q) != 1:
            continue
        m = q * d
        by_class = naive_psi_by_class(x, m)
        target = x / euler_phi(m)
        total.append(max(abs(by_class[a] - target) for a in range(m) if math.gcd(a, m) == 1))
    return math.fsum(total)


def naive_variance(x, q, Q):
    total = []
    for d in range(1, int(Q / q) + 1):
        if math.gcd(d, q) != 1:
            continue
        m = q * d
        by_class = naive_psi_by_class(x, m)
        target = x / euler_phi(m)
        total.append(
            math.fsum((by_class[a] - target) ** 2 for a in range(m) if math.gcd(a, m) == 1)
        )
    return math.fsum(total)


def test_E_b_degenerate_single_modulus():
    # x^b < 2 leaves only d = 1
    x, q, b = 50.0, 3, 0.1
    assert x**b < 2
    rep = bv.compute_E_b(x, q, b)
    assert rep.term_count == 1
    want = max(
        abs(chebyshev_psi(x, q, a) - x / euler_phi(q)) for a in range(q) if math.gcd(a, q) == 1
    )
    assert rep.value == pytest.approx(want, rel=1e-12)


def test_E_b_against_naive_oracle():
    for x, q, b in [(1e4, 3, 0.25), (1e5, 3, 0.2), (2e4, 1, 0.3)]:
        rep = bv.compute_E_b(x, q, b)
        assert rep.value == pytest.approx(naive_E_b(x, q, b), rel=1e-9)
        assert rep.normalizer == pytest.approx(x / euler_phi(q))


def test_E_b_preconditions():
    with pytest.raises(ValueError):
        bv.compute_E_b(1e4, 3, 0.6)
    with pytest.raises(ValueError):
        bv.compute_E_b(100.0, 60, 0.45)  # x^b q > x


def test_E_b_thread_invariance():
    a = bv.compute_E_b(1e5, 3, 0.28, threads=1)
    b = bv.compute_E_b(1e5, 3, 0.28, threads=4)
    assert a.value == b.value  # bit identical


def test_variance_single_modulus():
    x, q = 1e4, 7
    rep = bv.bdh_variance(x, q, float(q))
    assert rep.term_count == 1
    want = math.fsum(
        (chebyshev_psi(x, q, a) - x / euler_phi(q)) ** 2 for a in range(q) if math.gcd(a, q) == 1
    )
    assert rep.value == pytest.approx(want, rel=1e-9)


def test_variance_against_naive_oracle():
    for x, q, Q in [(1e4, 1, 100.0), (1e4, 3, 90.0), (1e5, 1, 1e3)]:
        rep = bv.bdh_variance(x, q, Q)
        assert rep.value == pytest.approx(naive_variance(x, q, Q), rel=1e-9)


def test_variance_preconditions_and_threads():
    with pytest.raises(ValueError):
        bv.bdh_variance(1e4, 10, 5.0)
    with pytest.raises(ValueError):
        bv.bdh_variance(1e4, 1, 1e5)
    a = bv.bdh_variance(1e4, 1, 500.0, threads=1)
    b = bv.bdh_variance(1e4, 1, 500.0, threads=3)
    assert a.value == b.value


def test_error_report_csv_row():
    rep = bv.compute_E_b(1e4, 3, 0.2)
    row = rep.csv_row()
    assert len(row.split(",")) == len(ERROR_SUM_CSV_HEADER.split(","))
    assert rep.json_dict()["ratio"] == rep.ratio


def naive_maynard_sums(x, q, a, h_m, k, L):
    lhs1, lhs2 = [], []
    primes = [p for p, w in _class_prime_powers(x, 1, 0) if w and _is_prime(p)]
    for d in range(1, int(math.floor(x**L)) + 1):
        if math.gcd(d, q) != 1 or mobius(d) == 0:
            continue
        w = tau_m(3 * k, d)
        b_d = bv._crt_unit_lift(a, q, d)
        m = q * d
        count = sum(1 for n in range(int(x / 2) + 1, int(x) + 1) if n % m == b_d % m)
        lhs1.append(w * abs(count - (x / (2 * q)) / d))
        pcount = sum(1 for p in primes if p > x / 2 + h_m and p <= x and p % m == b_d % m)
        lhs2.append(w * abs(pcount - log_integral_Y1(x, q) / euler_phi(d)))
    return math.fsum(lhs1), math.fsum(lhs2)


def _is_prime(p):
    from apgaps.arith import is_prime

    return is_prime(p)


def test_maynard_condition_sums_against_naive():
    rep = bv.maynard_condition_sums(1e5, 3, 1, 0, 2, 0.2)
    want1, want2 = naive_maynard_sums(1e5, 3, 1, 0, 2, 0.2)
    assert rep.lhs1 == pytest.approx(want1, rel=1e-9)
    assert rep.lhs2 == pytest.approx(want2, rel=1e-9)


def test_maynard_inner_term_bound():
    # counting integers in one class of an interval is within 1 of length/modulus
    x, q, a = 1e5, 3, 1
    for d in (1, 2, 5, 7, 11):
        b_d = bv._crt_unit_lift(a, q, d)
        m = q * d
        count = bv._count_in_class(x / 2, x, m, b_d % m)
        assert abs(count - (x / (2 * q)) / d) < 1.0


def test_maynard_lhs1_pointwise_bound():
    x, q, a, k, L = 1e5, 3, 1, 2, 0.2
    rep = bv.maynard_condition_sums(x, q, a, 0, k, L)
    cap = sum(
        mobius(d) ** 2 * tau_m(3 * k, d)
        for d in range(1, int(math.floor(x**L)) + 1)
        if math.gcd(d, q) == 1
    )
    assert rep.lhs1 <= cap


def test_maynard_preconditions():
    with pytest.raises(ValueError):
        bv.maynard_condition_sums(1e5, 6, 2, 0, 2, 0.2)  # gcd(a, q) != 1
    with pytest.raises(ValueError):
        bv.maynard_condition_sums(100.0, 30, 1, 0, 2, 0.45)  # x^L q > x
