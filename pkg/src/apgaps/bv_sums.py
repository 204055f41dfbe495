"""Distribution error sums for primes in arithmetic progressions.

Measured quantities, each against its trivial normalizer:

- compute_E_b: sum over moduli d <= x^b of the worst residue-class error
  |psi(x; q d, a) - x/phi(q d)|, the maximum taken over all reduced classes.
- bdh_variance: the mean-square analogue, summed over all reduced classes.
- smoothed_R / sandwich_check: the log-smoothed weighted sum and the
  two-sided bounds it implies for psi.
- maynard_condition_sums: squarefree tau-weighted condition sums over
  moduli d <= x^L.

The d-loops run over fixed-size chunks whose partial sums are merged with
fsum in chunk order, so results are bit-identical for any thread count.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from functools import lru_cache

import numpy as np

from .arith import (
    euler_phi,
    factorize,
    log_integral_Y1,
    mobius,
    prime_power_arrays,
    primes_in_range,
    psi_residue_sums,
    reduced_residue_mask,
    tau_m,
)
from .reports import ErrorSumReport, MaynardConditionReport

_CHUNK = 256  # fixed chunk length in d; never tied to the worker count


def smoothed_R(x: float, r: int = 1, a: int = 0) -> float:
    """Sum of Lambda(n) * log(x/n) over n <= x with n = a (mod r)."""
    if x < 1:
        raise ValueError("need x >= 1")
    P, W = prime_power_arrays(int(math.floor(x)))
    if r > 1:
        keep = P % r == a % r
        P, W = P[keep], W[keep]
    if len(P) == 0:
        return 0.0
    return math.fsum(W * (math.log(x) - np.log(P.astype(np.float64))))


def sandwich_check(x: float, r: int, a: int, lam: float, slack: float = 1e-9):
    """Difference-quotient bounds for psi from the smoothed sum.

    Returns (ok, lower, psi, upper) for
    (R(x) - R(x e^-lam))/lam <= psi(x; r, a) <= (R(x e^lam) - R(x))/lam.
    """
    if lam <= 0:
        raise ValueError("need lam > 0")
    from .arith import chebyshev_psi

    r_mid = smoothed_R(x, r, a)
    lower = (r_mid - smoothed_R(x * math.exp(-lam), r, a)) / lam
    upper = (smoothed_R(x * math.exp(lam), r, a) - r_mid) / lam
    psi = chebyshev_psi(x, r, a % r)
    ok = lower <= psi + slack and psi <= upper + slack
    return ok, lower, psi, upper


def _chunked_fsum(d_values: list[int], per_d, threads: int = 1) -> float:
    """fsum of per_d(d) over d_values via fixed chunks, merged in chunk order."""
    chunks = [d_values[i : i + _CHUNK] for i in range(0, len(d_values), _CHUNK)]

    def one(chunk):
        return math.fsum(per_d(d) for d in chunk)

    if threads <= 1 or len(chunks) <= 1:
        partials = [one(c) for c in chunks]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            partials = list(pool.map(one, chunks))
    return math.fsum(partials)


def compute_E_b(x: float, q: int, b: float, threads: int = 1) -> ErrorSumReport:
    """Worst-case error sum over moduli q*d, d <= x^b coprime to q."""
    if not 0 < b < 0.5:
        raise ValueError("need 0 < b < 1/2")
    if q < 1:
        raise ValueError("need q >= 1")
    if x**b * q > x:
        raise ValueError("x^b * q exceeds x; classes would be emptier than the main term")
    D = int(math.floor(x**b))
    ds = [d for d in range(1, D + 1) if math.gcd(d, q) == 1]

    def per_d(d: int) -> float:
        m = q * d
        vec = psi_residue_sums(x, m)
        dev = np.abs(vec[reduced_residue_mask(m)] - x / euler_phi(m))
        return float(np.max(dev)) if dev.size else 0.0

    value = _chunked_fsum(ds, per_d, threads)
    return ErrorSumReport(
        x=x, q=q, param_name="b", param=b, value=value, normalizer=x / euler_phi(q), term_count=len(ds)
    )


def bdh_variance(x: float, q: int, Q: float, threads: int = 1) -> ErrorSumReport:
    """Mean-square error over all reduced classes of moduli q*d, d <= Q/q.

    The inner sum expands as sum(psi^2) - 2T sum(psi) + phi(m) T^2 over
    reduced classes with T = x/phi(m); only classes of prime powers p^k with
    p | m are nonreduced yet carry mass, so the reduced-class restriction is
    a small explicit correction instead of an O(m) gcd mask per modulus.
    """
    if Q < q:
        raise ValueError("need Q >= q")
    if not Q <= x:
        raise ValueError("need Q <= x")
    dmax = int(math.floor(Q / q))
    ds = [d for d in range(1, dmax + 1) if math.gcd(d, q) == 1]
    xi = int(math.floor(x))
    P, W = prime_power_arrays(xi)
    P_mod = P.astype(np.int32) if xi < 2**31 else P
    psi_total = math.fsum(W)
    q_primes = [p for p, _ in factorize(q).factors]

    def per_d(d: int) -> float:
        m = q * d
        vec = np.bincount(P_mod % m, weights=W, minlength=m)
        phi_m = euler_phi(m)
        T = x / phi_m
        cls = set()
        for p in q_primes + [p for p, _ in factorize(d).factors]:
            pk = p
            while pk <= xi:
                cls.add(pk % m)
                pk *= p
        if cls:
            nr = vec[sorted(cls)]
            s_nr = float(nr.sum())
            ss_nr = float(np.dot(nr, nr))
        else:
            s_nr = ss_nr = 0.0
        return (float(np.dot(vec, vec)) - ss_nr) - 2.0 * T * (psi_total - s_nr) + phi_m * T * T

    value = _chunked_fsum(ds, per_d, threads)
    normalizer = x * Q * math.log(x) / euler_phi(q)
    return ErrorSumReport(
        x=x, q=q, param_name="Q", param=Q, value=value, normalizer=normalizer, term_count=len(ds)
    )


# ---------------------------------------------------------------------------
# squarefree tau-weighted condition sums


def _count_in_class(lo: float, hi: float, m: int, c: int) -> int:
    """#{n in (lo, hi] : n >= 1, n = c (mod m)} for 0 <= c < m."""
    c0 = c if c >= 1 else m  # smallest positive member of the class

    def upto(t: float) -> int:
        ft = int(math.floor(t))
        return (ft - c0) // m + 1 if ft >= c0 else 0

    return upto(hi) - upto(lo)


def _crt_unit_lift(a: int, q: int, d: int) -> int:
    """Smallest positive n with n = a (mod q) and n = 1 (mod d); gcd(q, d) = 1."""
    if d == 1:
        return a % q if a % q else q
    inv = pow(q, -1, d)
    n = (a % q) + q * (((1 - a) * inv) % d)
    n %= q * d
    return n if n else q * d


@lru_cache(maxsize=8)
def _primes_array(limit: int) -> np.ndarray:
    ps = primes_in_range(1, limit)
    ps.setflags(write=False)
    return ps


def maynard_condition_sums(
    x: float, q: int, a: int, h_m: int, k: int, L: float
) -> MaynardConditionReport:
    """The two tau_{3k}-weighted sums over squarefree d <= x^L coprime to q.

    lhs1 weighs integer counts in (x/2, x] against Y/d with Y = x/(2q);
    lhs2 weighs prime counts in (x/2 + h_m, x] against Y1/phi(d). The class
    b_d is the CRT lift of a mod q with unit second coordinate.
    """
    if math.gcd(a, q) != 1:
        raise ValueError("need gcd(a, q) = 1")
    if x**L * q > x:
        raise ValueError("x^L * q exceeds x")
    D = int(math.floor(x**L))
    Y = x / (2 * q)
    Y1 = log_integral_Y1(x, q)
    primes = _primes_array(int(math.floor(x)))
    lo2 = x / 2 + h_m
    start = int(np.searchsorted(primes, math.floor(lo2), side="right"))
    tail = primes[start:]

    terms1: list[float] = []
    terms2: list[float] = []
    skipped = 0
    count = 0
    for d in range(1, D + 1):
        if math.gcd(d, q) != 1 or mobius(d) == 0:
            continue
        w = tau_m(3 * k, d)
        b_d = _crt_unit_lift(a, q, d)
        m = q * d
        count += 1
        cnt = _count_in_class(x / 2, x, m, b_d % m)
        terms1.append(w * abs(cnt - Y / d))
        pcnt = int(np.count_nonzero(tail % m == b_d % m))
        terms2.append(w * abs(pcnt - Y1 / euler_phi(d)))
    return MaynardConditionReport(
        x=x,
        q=q,
        a=a,
        h_m=h_m,
        k=k,
        L=L,
        lhs1=math.fsum(terms1),
        lhs2=math.fsum(terms2),
        term_count=count,
        skipped=skipped,
    )
