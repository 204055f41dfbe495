"""Integer arithmetic, multiplicative functions, and segmented prime sieves.

Intervals are half-open (lo, hi] throughout and all logarithms are natural.
Von Mangoldt weights are IEEE doubles; weighted accumulations go through
math.fsum so results do not depend on chunking or thread counts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

DEFAULT_SEGMENT = 1 << 20

# Deterministic Miller-Rabin witness set, valid for all n < 2**64.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic primality test for 0 <= n < 2**64."""
    if n < 2:
        return False
    for p in _MR_WITNESSES:
        if n % p == 0:
            return n == p
    d = n - 1
    s = (d & -d).bit_length() - 1
    d >>= s
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _brent_rho(n: int) -> int:
    """Nontrivial factor of an odd composite n, deterministic parameter sweep."""
    if n % 2 == 0:
        return 2
    for c in range(1, 256):
        y, r, q, g = 2, 1, 1, 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(128, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += 128
            r <<= 1
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g
    raise ArithmeticError(f"rho failed to split {n}")


@dataclass(frozen=True)
class Factorization:
    """Prime-power decomposition: factors is ((p1, e1), ...) with p1 < p2 < ..."""

    n: int
    factors: tuple[tuple[int, int], ...]

    def __post_init__(self):
        prod = 1
        last = 0
        for p, e in self.factors:
            if p <= last or e < 1:
                raise ValueError("factors must have strictly increasing primes, exponents >= 1")
            prod *= p**e
            last = p
        if prod != self.n:
            raise ValueError(f"factor product {prod} != {self.n}")

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)


_TRIAL_LIMIT = 20000


@lru_cache(maxsize=None)
def _trial_primes() -> tuple[int, ...]:
    return tuple(int(p) for p in primes_up_to(_TRIAL_LIMIT))


def _factor_hard(m: int, out: list[int]) -> None:
    # m has no prime factor below the trial bound
    if m == 1:
        return
    if is_prime(m):
        out.append(m)
        return
    d = _brent_rho(m)
    _factor_hard(d, out)
    _factor_hard(m // d, out)


def factorize(n: int) -> Factorization:
    """Exact factorization for 1 <= n < 2**63."""
    if n < 1:
        raise ValueError("factorize requires n >= 1")
    m = n
    factors: list[tuple[int, int]] = []
    for p in _trial_primes():
        if p * p > m:
            break
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            factors.append((p, e))
    if m > 1:
        if m < _TRIAL_LIMIT * _TRIAL_LIMIT or is_prime(m):
            # below the trial square the cofactor is prime
            factors.append((m, 1))
        else:
            hard: list[int] = []
            _factor_hard(m, hard)
            hard.sort()
            i = 0
            while i < len(hard):
                j = i
                while j < len(hard) and hard[j] == hard[i]:
                    j += 1
                factors.append((hard[i], j - i))
                i = j
    factors.sort()
    return Factorization(n, tuple(factors))


def radical(n: int) -> int:
    """Product of the distinct primes dividing n; radical(1) = 1."""
    out = 1
    for p, _ in factorize(n).factors:
        out *= p
    return out


def euler_phi(n: int) -> int:
    out = n
    for p, _ in factorize(n).factors:
        out = out // p * (p - 1)
    return out


def mobius(n: int) -> int:
    sign = 1
    for _, e in factorize(n).factors:
        if e > 1:
            return 0
        sign = -sign
    return sign


def tau_m(m: int, d: int) -> int:
    """Number of ordered m-tuples of positive integers with product d.

    Multiplicative with tau_m(p**e) = C(e + m - 1, m - 1); exact integers.
    """
    if m < 2:
        raise ValueError("tau_m requires m >= 2")
    if d < 1:
        raise ValueError("tau_m requires d >= 1")
    out = 1
    for _, e in factorize(d).factors:
        out *= math.comb(e + m - 1, m - 1)
    return out


# ---------------------------------------------------------------------------
# sieving


@lru_cache(maxsize=None)
def _base_primes(limit: int) -> np.ndarray:
    """Direct sieve up to limit (used for segment marking; limit <= sqrt(hi))."""
    if limit < 2:
        return np.empty(0, dtype=np.int64)
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if flags[p]:
            flags[p * p :: p] = False
    out = np.flatnonzero(flags).astype(np.int64)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class SieveSegment:
    """Primality flags and von Mangoldt weights for n in (lo, hi].

    Offset i corresponds to n = lo + 1 + i.
    """

    lo: int
    hi: int
    prime_flags: np.ndarray
    lambda_weights: np.ndarray

    def primes(self) -> np.ndarray:
        return self.lo + 1 + np.flatnonzero(self.prime_flags).astype(np.int64)


def sieve_segment(lo: int, hi: int) -> SieveSegment:
    if not 0 <= lo < hi:
        raise ValueError("need 0 <= lo < hi")
    width = hi - lo
    flags = np.ones(width, dtype=bool)
    if lo == 0:
        flags[0] = False  # n = 1
    base = _base_primes(math.isqrt(hi))
    lam = np.zeros(width, dtype=np.float64)
    for p in base.tolist():
        # first composite multiple of p above lo, never killing p itself
        start = max(p * p, (lo // p + 1) * p)
        if start <= hi:
            flags[start - lo - 1 :: p] = False
        # prime powers carry weight log p
        pk = p
        logp = math.log(p)
        while pk <= hi:
            if pk > lo:
                lam[pk - lo - 1] = logp
            pk *= p
    idx = np.flatnonzero(flags)
    lam[idx] = np.log(lo + 1 + idx.astype(np.float64))
    return SieveSegment(lo, hi, flags, lam)


def primes_in_range(lo: int, hi: int, segment_size: int = DEFAULT_SEGMENT) -> np.ndarray:
    """Ascending primes in (lo, hi]; segment size never changes the output."""
    if hi <= lo:
        return np.empty(0, dtype=np.int64)
    parts = []
    s = lo
    while s < hi:
        e = min(s + segment_size, hi)
        parts.append(sieve_segment(s, e).primes())
        s = e
    return np.concatenate(parts) if parts else np.empty(0, dtype=np.int64)


def primes_up_to(n: int) -> np.ndarray:
    return primes_in_range(0, n) if n >= 2 else np.empty(0, dtype=np.int64)


def primes_in_ap(lo: int, hi: int, q: int, a: int, segment_size: int = DEFAULT_SEGMENT) -> list[int]:
    """Ascending primes p in (lo, hi] with p = a (mod q)."""
    if not 0 <= lo < hi:
        raise ValueError("need 0 <= lo < hi")
    if q < 1 or not 0 <= a < q:
        raise ValueError("need q >= 1 and 0 <= a < q")
    ps = primes_in_range(lo, hi, segment_size)
    if q == 1:
        return [int(p) for p in ps]
    return [int(p) for p in ps[ps % q == a]]


def prime_power_arrays(limit: int) -> tuple[np.ndarray, np.ndarray]:
    """(P, W): ascending prime powers P <= limit and their weights W = log p.

    Built at segment-aligned caps and sliced, so nearby limits share one
    sieve pass.
    """
    if limit < 2:
        e = np.empty(0, dtype=np.int64)
        return e, e.astype(np.float64)
    cap = ((limit + DEFAULT_SEGMENT - 1) // DEFAULT_SEGMENT) * DEFAULT_SEGMENT
    P, W = _prime_power_arrays_cap(cap)
    i = int(np.searchsorted(P, limit, side="right"))
    return P[:i], W[:i]


@lru_cache(maxsize=6)
def _prime_power_arrays_cap(limit: int) -> tuple[np.ndarray, np.ndarray]:
    primes = primes_in_range(1, limit)
    vals = [primes]
    wts = [np.log(primes.astype(np.float64))]
    for p in primes[primes <= math.isqrt(limit)].tolist():
        logp = math.log(p)
        pk = p * p
        while pk <= limit:
            vals.append(np.array([pk], dtype=np.int64))
            wts.append(np.array([logp]))
            pk *= p
    P = np.concatenate(vals)
    W = np.concatenate(wts)
    order = np.argsort(P, kind="stable")
    P, W = P[order], W[order]
    P.setflags(write=False)
    W.setflags(write=False)
    return P, W


def chebyshev_psi(x: float, q: int = 1, a: int = 0) -> float:
    """Sum of von Mangoldt weights over n <= x with n = a (mod q), fsum-exact."""
    if x < 1:
        raise ValueError("need x >= 1")
    P, W = prime_power_arrays(int(math.floor(x)))
    if q > 1:
        W = W[P % q == a % q]
    return math.fsum(W)


def psi_residue_sums(x: float, m: int) -> np.ndarray:
    """Vector of psi(x; m, a) for all residues a mod m in one pass."""
    P, W = prime_power_arrays(int(math.floor(x)))
    return np.bincount((P % m).astype(np.int64), weights=W, minlength=m)


def reduced_residue_mask(m: int) -> np.ndarray:
    return np.gcd(np.arange(m, dtype=np.int64), m) == 1


# ---------------------------------------------------------------------------
# logarithmic integral


def _adaptive_simpson(f, a, fa, b, fb, m, fm, whole, tol, depth):
    lm = (a + m) / 2
    rm = (m + b) / 2
    flm, frm = f(lm), f(rm)
    left = (m - a) / 6 * (fa + 4 * flm + fm)
    right = (b - m) / 6 * (fm + 4 * frm + fb)
    if depth <= 0 or abs(left + right - whole) <= 15 * tol:
        return left + right + (left + right - whole) / 15
    return _adaptive_simpson(f, a, fa, m, fm, lm, flm, left, tol / 2, depth - 1) + _adaptive_simpson(
        f, m, fm, b, fb, rm, frm, right, tol / 2, depth - 1
    )


def log_integral_Y1(x: float, q: int = 1) -> float:
    """(1/phi(q)) * integral of dt/log t over (x/2, x), adaptive to 1e-12 relative."""
    if x < 4:
        raise ValueError("need x >= 4 so the integrand stays off the pole")

    def f(t):
        return 1.0 / math.log(t)

    a, b = x / 2, x
    rough = (b - a) / math.log(b)
    m = (a + b) / 2
    fa, fb, fm = f(a), f(b), f(m)
    whole = (b - a) / 6 * (fa + 4 * fm + fb)
    val = _adaptive_simpson(f, a, fa, b, fb, m, fm, whole, 1e-13 * rough, 60)
    return val / euler_phi(q)


# ---------------------------------------------------------------------------
# bulk tables (dense, for convolution work)


def von_mangoldt_table(n: int) -> np.ndarray:
    lam = np.zeros(n + 1, dtype=np.float64)
    ps = primes_up_to(n)
    lam[ps] = np.log(ps.astype(np.float64))
    for p in ps[ps <= math.isqrt(n)].tolist():
        pk = p * p
        while pk <= n:
            lam[pk] = math.log(p)
            pk *= p
    return lam


def mobius_table(n: int) -> np.ndarray:
    mu = np.ones(n + 1, dtype=np.int64)
    for p in primes_up_to(n).tolist():
        mu[p::p] *= -1
        sq = p * p
        if sq <= n:
            mu[sq::sq] = 0
    if n >= 0:
        mu[0] = 0
    return mu
