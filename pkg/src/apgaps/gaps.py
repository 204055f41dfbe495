"""End-to-end gap-bound pipeline for primes in one progression.

Given x, q = x^theta, residue a and a target count t, the chain is: validate
the (theta, radical) constraints, evaluate the level of distribution
L(theta), pick the least tabulated k whose certified variational bound
exceeds (2t - 2)/(L + eps/2), build an admissible k-tuple, and report the
resulting bound q * exp(2t/L) next to the tuple's actual scaled diameter.
A separate scan finds the tightest real constellation of t primes of the
class in (x/2, x].
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .arith import primes_in_ap, primes_in_range, radical
from .variational import VariationalCertificate, min_k_for

THETA_MAX = Fraction(5, 12)
BRANCH_POINT = Fraction(2, 5)


def level_L_exact(theta: Fraction, eps: Fraction = Fraction(0)) -> Fraction:
    """Piecewise level of distribution, exact; eps = 0 gives the limit value."""
    theta = Fraction(theta)
    eps = Fraction(eps)
    if not 0 < theta <= THETA_MAX:
        raise ValueError("need 0 < theta <= 5/12")
    if eps < 0 or eps >= Fraction(1, 20):
        raise ValueError("need 0 <= eps < 1/20")
    if theta < BRANCH_POINT - eps:
        return Fraction(1, 2) - theta - eps
    return Fraction(9, 20) - theta - eps


def level_L(theta: float, eps: float) -> float:
    """Float rendering of the exact level; requires eps > 0."""
    if eps <= 0:
        raise ValueError("need eps > 0")
    return float(level_L_exact(Fraction(theta), Fraction(eps)))


def abstract_B_consistency(theta) -> bool:
    """Exact identity 2 / (9/20 - theta) = 40 / (9 - 20 theta) on [2/5, 9/20)."""
    th = Fraction(theta)
    if not BRANCH_POINT <= th < Fraction(9, 20):
        raise ValueError("need 2/5 <= theta < 9/20")
    return 2 / (Fraction(9, 20) - th) == Fraction(40) / (9 - 20 * th)


def exponent_rate_exact(theta) -> Fraction:
    """2 / L(theta) in the eps -> 0 limit, as an exact rational."""
    return 2 / level_L_exact(Fraction(theta))


def D0(x: float) -> float:
    """loglog(x/2) / logloglog(x/2); domain-guarded to keep the value meaningful."""
    if x <= 2:
        raise ValueError("need x > 2")
    ll = math.log(math.log(x / 2))
    if not ll > 1:
        raise ValueError("x below the domain guard: logloglog(x/2) must exceed 1")
    lll = math.log(ll)
    if not lll > 1:
        raise ValueError("x below the domain guard: logloglog(x/2) must exceed 1")
    return ll / lll


@dataclass(frozen=True)
class GapConfig:
    x: float
    q: int
    a: int
    t: int
    eta: float = 0.01
    C: float = 2.0
    eps: float = 1e-3
    A: float = 2.0

    @property
    def theta(self) -> float:
        return math.log(self.q) / math.log(self.x)


def validate_config(cfg: GapConfig, shifts: tuple[int, ...] | None = None) -> list[str]:
    """Every failed constraint is reported separately; empty list means valid."""
    errors: list[str] = []
    if cfg.x <= math.e:
        errors.append("x too small: need log x > 1")
        return errors
    if cfg.q < 1:
        errors.append("q must be >= 1")
        return errors
    if math.gcd(cfg.a, cfg.q) != 1:
        errors.append(f"gcd(a, q) = {math.gcd(cfg.a, cfg.q)} != 1")
    if cfg.t < 1:
        errors.append("t must be >= 1")
    theta = cfg.theta
    if theta > 5 / 12 - cfg.eta:
        errors.append(f"theta = {theta:.6f} exceeds 5/12 - eta = {5 / 12 - cfg.eta:.6f}")
    rad = radical(cfg.q)
    rad_cap = math.log(cfg.x) ** cfg.C
    if rad > rad_cap:
        errors.append(f"radical(q) = {rad} exceeds (log x)^C = {rad_cap:.6g}")
    if shifts is not None:
        try:
            d0 = D0(cfg.x)
        except ValueError as exc:
            errors.append(str(exc))
        else:
            if shifts and max(shifts) >= d0:
                errors.append(
                    f"x too small for k = {len(shifts)}: largest shift {max(shifts)} >= D0(x) = {d0:.4f}"
                )
    return errors


# ---------------------------------------------------------------------------
# admissible tuples


@dataclass(frozen=True)
class AdmissibleTuple:
    """Sorted shifts starting at 0 plus a per-prime avoided-residue certificate.

    Only primes p <= k need a certificate; for p > k the k occupied classes
    cannot cover all p of them.
    """

    shifts: tuple[int, ...]
    certificate: dict[int, int] = field(hash=False)

    @property
    def k(self) -> int:
        return len(self.shifts)

    @property
    def diameter(self) -> int:
        return self.shifts[-1] - self.shifts[0] if self.shifts else 0


@dataclass(frozen=True)
class AdmissibilityResult:
    admissible: bool
    certificate: dict[int, int] | None
    violating_prime: int | None


def is_admissible(shifts) -> AdmissibilityResult:
    """Exhaustive residue check over primes p <= k."""
    shifts = tuple(shifts)
    if len(set(shifts)) != len(shifts) or list(shifts) != sorted(shifts):
        raise ValueError("shifts must be distinct and sorted")
    k = len(shifts)
    cert: dict[int, int] = {}
    for p in primes_in_range(1, max(k, 1)).tolist():
        hit = {h % p for h in shifts}
        if len(hit) == p:
            return AdmissibilityResult(False, None, int(p))
        cert[int(p)] = min(r for r in range(p) if r not in hit)
    return AdmissibilityResult(True, cert, None)


def admissible_primes_past_k(k: int) -> AdmissibleTuple:
    """First k primes exceeding k, shifted to start at 0.

    No prime p <= k divides any chosen prime, so the class of -p_min mod p
    is avoided by every shift; diameter grows like k log k.
    """
    if k < 1:
        raise ValueError("need k >= 1")
    lo, hi = k, max(2 * k, 16)
    ps: list[int] = []
    while len(ps) < k:
        ps = primes_in_ap(lo, hi, 1, 0)
        hi *= 2
    ps = ps[:k]
    base = ps[0]
    shifts = tuple(p - base for p in ps)
    cert = {int(p): (-base) % int(p) for p in primes_in_range(1, max(k, 1)).tolist()}
    tup = AdmissibleTuple(shifts, cert)
    check = is_admissible(shifts)
    if not check.admissible:
        raise AssertionError(f"construction produced an inadmissible tuple at p = {check.violating_prime}")
    return tup


# ---------------------------------------------------------------------------
# bound assembly and constellation search


@dataclass(frozen=True)
class GapBoundReport:
    k: int
    L: float
    bound: float  # q * exp(2 t / L)
    tuple_shifts: tuple[int, ...]
    tuple_diameter: int
    scaled_diameter: int  # q * (h'_k - h'_1)
    certificate_bound: float
    threshold: float
    fits_D0: bool

    def json_dict(self) -> dict:
        return {
            "k": self.k,
            "L": self.L,
            "bound": self.bound,
            "tuple_diameter": self.tuple_diameter,
            "scaled_diameter": self.scaled_diameter,
            "certificate_bound": self.certificate_bound,
            "threshold": self.threshold,
            "fits_D0": self.fits_D0,
        }


def gap_bound(cfg: GapConfig, table: list[VariationalCertificate]) -> GapBoundReport:
    """Select k, build the tuple, and report the bound q * exp(2t/L).

    Whether real constellations beat the bound is reported elsewhere and
    never asserted: the statement is asymptotic and desk-scale x need not
    qualify as large.
    """
    errors = validate_config(cfg)
    if errors:
        raise ValueError("; ".join(errors))
    L = level_L(cfg.theta, cfg.eps)
    k, cert = min_k_for(cfg.t, L + cfg.eps / 2, table)
    tup = admissible_primes_past_k(k)
    try:
        fits = bool(tup.shifts[-1] < D0(cfg.x))
    except ValueError:
        fits = False
    return GapBoundReport(
        k=k,
        L=L,
        bound=cfg.q * math.exp(2 * cfg.t / L),
        tuple_shifts=tup.shifts,
        tuple_diameter=tup.diameter,
        scaled_diameter=cfg.q * tup.diameter,
        certificate_bound=cert.lower_bound,
        threshold=(2 * cfg.t - 2) / (L + cfg.eps / 2),
        fits_D0=fits,
    )


@dataclass(frozen=True)
class ConstellationResult:
    found: bool
    count: int  # primes of the class in (x/2, x]
    gap: int | None
    primes: tuple[int, ...]

    def json_dict(self) -> dict:
        return {
            "found": self.found,
            "count": self.count,
            "gap": self.gap,
            "primes": list(self.primes),
        }


def constellation_search(x: float, q: int, a: int, t: int) -> ConstellationResult:
    """Minimal window of t consecutive primes = a (mod q) in (x/2, x]."""
    if x > 10**8:
        raise ValueError("desk bound is x <= 1e8")
    if t < 1:
        raise ValueError("need t >= 1")
    if math.gcd(a % q if q > 1 else 0, q) != 1 and q > 1:
        raise ValueError("need gcd(a, q) = 1")
    ps = primes_in_ap(int(math.floor(x / 2)), int(math.floor(x)), q, a % q)
    if len(ps) < t:
        return ConstellationResult(False, len(ps), None, ())
    best_i = 0
    best = ps[t - 1] - ps[0]
    for i in range(1, len(ps) - t + 1):
        g = ps[i + t - 1] - ps[i]
        if g < best:
            best, best_i = g, i
    return ConstellationResult(True, len(ps), best, tuple(ps[best_i : best_i + t]))
