"""Acceptance gate: one test per criterion, each printing a pass line.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
lines; every tolerance is pinned here. The headline statements are
asymptotic with non-effective constants, so empirical criteria record
measured ratios and assert only exact identities, oracle matches, and the
documented monotonicity reflections at desk scale.
"""

import json
import math
import random
import sys
import time
from fractions import Fraction

import numpy as np
import pytest

import apgaps.bv_sums as bv
import apgaps.characters as chars
import apgaps.cli as cli
import apgaps.comb_lemmas as cl
import apgaps.gaps as gaps
import apgaps.heath_brown as hb
import apgaps.variational as var
from apgaps.arith import euler_phi, is_prime, von_mangoldt_table


def record(n, msg):
    print(f"ACCEPTANCE {n}: PASS - {msg}", file=sys.stderr, flush=True)


def test_criterion_01_exact_identity_suite():
    start = time.time()
    for r in range(1, 501):
        total = sum(chars.phi_star_by_enumeration(d) for d in chars.divisors(r))
        assert total == euler_phi(r), f"primitive-count divisor sum failed at r = {r}"
    rng = random.Random(0)
    for r in range(1, 201):
        table = {}

        def F(chi):
            key = (chi.modulus, chi.exponents)
            if key not in table:
                table[key] = rng.randrange(1, 1 << 30)
            return table[key]

        assert chars.conductor_partition_check(r, F), f"conductor partition failed at r = {r}"
    elapsed = time.time() - start
    assert elapsed < 60
    record(1, f"phi-star divisor sums r <= 500 and conductor partition r <= 200 in {elapsed:.1f}s")


def test_criterion_02_heath_brown_identity():
    start = time.time()
    x0 = 2000
    lam = von_mangoldt_table(x0)
    for k in (1, 2, 3):
        table = hb.hb_lambda_table(x0, k)
        err = float(np.max(np.abs(table[1:] - lam[1:])))
        assert err <= 1e-9, f"k = {k}: error {err}"
    rng = np.random.default_rng(0)
    x = 1e4
    rows = rng.normal(size=(20, int(x) + 1))
    fs = [lambda n, row=row: row[n] for row in rows]
    for k in (1, 2):
        totals, comps = hb.hb_decompose_sum_multi(x, k, fs)
        assert all(hb.component_constraints_ok(c, int(x)) for c in comps)
        for f, tot in zip(fs, totals):
            direct = hb.direct_lambda_sum(x, f)
            assert abs(tot - direct) <= 1e-9 * max(1.0, abs(direct))
    elapsed = time.time() - start
    assert elapsed < 60
    record(2, f"expansion equals Lambda for n <= 2000, k in (1,2,3); 20 random f at x = 1e4 in {elapsed:.1f}s")


def test_criterion_03_large_sieve_and_farey():
    rng = np.random.default_rng(1)
    for trial in range(100):
        N = int(rng.integers(1, 2001))
        r = int(rng.integers(1, 51))
        D = int(rng.integers(1, 11))
        coeffs = rng.normal(size=N) + 1j * rng.normal(size=N)
        lhs, rhs, _ = chars.large_sieve_check(r, D, coeffs)
        assert lhs <= rhs * (1 + 1e-12), f"trial {trial}: {lhs} > {rhs}"
    for r in range(1, 21):
        for D in range(1, 11):
            assert chars.farey_spacing_min(r, D) >= Fraction(1, r * D * D)
    record(3, "100 randomized large-sieve trials and exact spacing bound for r <= 20, D <= 10")


def test_criterion_04_combinatorial_scans():
    start = time.time()
    assert cl.verify_trichotomy(24) == []
    assert cl.verify_comblem(24) == []
    checked1, bad1 = cl.random_trichotomy_sweep(1_000_000, seed=0)
    assert bad1 == []
    checked2, bad2 = cl.random_comblem_sweep(1_000_000, seed=0)
    assert bad2 == []
    elapsed = time.time() - start
    assert elapsed < 300
    record(
        4,
        f"exact grids to denominator 24 plus {checked1 + checked2} random tuples, "
        f"zero counterexamples in {elapsed:.1f}s",
    )


def test_criterion_05_variational_anchor_and_mc():
    cert1 = var.mk_lower_bound(1, 3)
    assert abs(cert1.lower_bound - 1.0) <= 1e-9
    certs = [cert1]
    for k in (2, 5, 10):
        lams = []
        for degree in range(5):
            cert = var.mk_lower_bound(k, degree)
            lams.append(cert.lower_bound)
            certs.append(cert)
        for lo, hi in zip(lams, lams[1:]):
            assert hi >= lo - 1e-10, f"k = {k}: degree sweep not monotone"
    for cert in certs:
        mc = var.verify_certificate(cert, 1_000_000, seed=cert.k * 7 + cert.degree)
        assert mc.contains(cert.lower_bound), (
            f"k = {cert.k}, degree = {cert.degree}: MC ratio {mc.ratio} +- {mc.sigma} "
            f"excludes {cert.lower_bound}"
        )
    record(5, f"k = 1 anchor at 1.0, monotone degree sweeps, {len(certs)} certificates MC-confirmed at 5 sigma")


def test_criterion_06_variational_growth(tmp_path):
    ks = (2, 5, 10, 20, 50)
    lams = [var.mk_lower_bound(k, 3).lower_bound for k in ks]
    for lo, hi in zip(lams, lams[1:]):
        assert hi > lo
    out = tmp_path / "growth.jsonl"
    assert cli.main(["certify", "--ks", "2,5,10,20,50", "--degree", "3", "--out", str(out)]) == 0
    rows = [json.loads(line) for line in out.read_text().splitlines()]
    assert [r["k"] for r in rows] == list(ks)
    assert all("log_k" in r for r in rows)
    table = ", ".join(f"({k}, {lam:.4f}, log k = {math.log(k):.4f})" for k, lam in zip(ks, lams))
    record(6, f"strict growth along k; diagnostic table emitted: {table}")


def test_criterion_07_smoothed_sandwich():
    rng = np.random.default_rng(2)
    for _ in range(1000):
        x = float(rng.uniform(100.0, 1e6))
        r = int(rng.integers(1, 31))
        a = int(rng.integers(0, r)) if r > 1 else 0
        lam = float(rng.uniform(0.005, 1.0))
        ok, lower, psi, upper = bv.sandwich_check(x, r, a, lam)
        assert ok, f"sandwich failed at x={x}, r={r}, a={a}, lam={lam}"
    # integral representation on a sample of the same distribution
    from apgaps.arith import prime_power_arrays

    for _ in range(25):
        x = float(rng.uniform(100.0, 1e5))
        r = int(rng.integers(1, 11))
        a = int(rng.integers(0, r)) if r > 1 else 0
        P, W = prime_power_arrays(int(x))
        keep = slice(None) if r == 1 else P % r == a % r
        Ps, Ws = P[keep], W[keep]
        pieces, running, prev = [], 0.0, 1.0
        for p, w in zip(Ps.tolist(), Ws.tolist()):
            pieces.append(running * (math.log(p) - math.log(prev)))
            running += w
            prev = p
        pieces.append(running * (math.log(x) - math.log(prev)))
        oracle = math.fsum(pieces)
        assert bv.smoothed_R(x, r, a) == pytest.approx(oracle, rel=1e-6, abs=1e-6)
    record(7, "1000 random sandwich tuples and 25 integral-representation checks at 1e-6")


def test_criterion_08_worst_case_error_decay():
    start = time.time()
    values = {}
    for q in (3, 4, 5, 12):
        r_small = bv.compute_E_b(1e4, q, 0.2)
        r_large = bv.compute_E_b(1e6, q, 0.2)
        values[q] = (r_small.ratio, r_large.ratio)
        assert r_large.ratio < r_small.ratio, f"q = {q}: no decay"
    elapsed = time.time() - start
    assert elapsed < 600
    recorded = ", ".join(f"q={q}: {a:.6f} -> {b:.6f}" for q, (a, b) in values.items())
    record(8, f"normalized worst-case ratios shrink from x = 1e4 to 1e6 ({recorded}) in {elapsed:.1f}s")


# Measured on this grid: the largest ratio is ~0.51 (x = 1e6, q = 1).
VARIANCE_RATIO_CAP = 1.0


def test_criterion_09_variance_ratio_bounded():
    start = time.time()
    ratios = {}
    for x in (1e4, 1e5, 1e6):
        for q in (1, 3, 12):
            rep = bv.bdh_variance(x, q, x / math.log(x))
            ratios[(x, q)] = rep.ratio
    worst = max(ratios.values())
    assert worst < VARIANCE_RATIO_CAP
    elapsed = time.time() - start
    recorded = ", ".join(f"(1e{int(math.log10(x))}, q={q}): {v:.4f}" for (x, q), v in ratios.items())
    record(9, f"variance ratios all below {VARIANCE_RATIO_CAP} (max {worst:.4f}; {recorded}) in {elapsed:.0f}s")


def test_criterion_10_pipeline_soundness():
    # the eps -> 0 exponent rate at theta = 2/5 is exactly 40
    assert gaps.exponent_rate_exact(Fraction(2, 5)) == Fraction(40)
    assert gaps.abstract_B_consistency(Fraction(2, 5))
    res = gaps.constellation_search(100, 1, 0, 2)
    assert res.found and res.gap == 2
    rng = np.random.default_rng(3)
    for _ in range(20):
        q = int(rng.choice([1, 2, 3, 4, 5, 7, 12]))
        units = [a for a in range(1, q) if math.gcd(a, q) == 1] or [0]
        a = int(rng.choice(units))
        x = int(rng.integers(50, 20000))
        t = int(rng.integers(1, 5))
        got = gaps.constellation_search(float(x), q, a, t)
        ps = [n for n in range(x // 2 + 1, x + 1) if is_prime(n) and (q == 1 or n % q == a)]
        want = None if len(ps) < t else min(ps[i + t - 1] - ps[i] for i in range(len(ps) - t + 1))
        assert (got.gap if got.found else None) == want
    record(10, "exact rate 40 at theta = 2/5, twin window at x = 100, 20 oracle-matched searches")


def test_criterion_11_determinism(tmp_path):
    pairs = []
    for name, argv in [
        ("bv", ["bv", "--x", "1e5", "--q", "3", "--b", "0.2"]),
        ("bdh", ["bdh", "--x", "2e4", "--q", "3", "--Q", "500"]),
        ("comb", ["comb", "--denominator", "16", "--random", "10000"]),
    ]:
        a = tmp_path / f"{name}_a.out"
        b = tmp_path / f"{name}_b.out"
        assert cli.main(argv + ["--threads", "1", "--out", str(a)] if name != "comb" else argv + ["--out", str(a)]) == 0
        assert cli.main(argv + ["--threads", "4", "--out", str(b)] if name != "comb" else argv + ["--out", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes(), f"{name} outputs differ across thread counts"
        pairs.append(name)
    record(11, f"byte-identical dual runs across thread counts: {', '.join(pairs)}")
