"""Certified lower bounds for the Maynard functional M_k.

Trial functions are symmetric polynomials on the simplex
R_k = {t in [0,1]^k : sum t_i <= 1}, spanned by monomial symmetric
polynomials m_lambda indexed by integer partitions. Both quadratic forms

    I(F)   = integral of F^2 over R_k
    sum_J  = k * integral over R_{k-1} of (integral of F dt_1)^2

reduce to exact rational Gram matrices through the Dirichlet integral

    int_{R_n} (1 - sum t)^c  prod t_i^{a_i} dt = c! prod(a_i!) / (n + c + sum a_i)!

The best quotient over the span is the top generalized eigenvalue of
(B, A); any feasible quotient is a valid lower bound for M_k, so the
certificate records the quotient of the computed coefficient vector, also
evaluated in exact rational arithmetic. Monte-Carlo integration gives an
independent check of every certificate.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

BASIS_SIZE_CAP = 200


def simplex_monomial_integral(k: int, exponents) -> Fraction:
    """Exact integral of prod t_i^(a_i) over the simplex R_k."""
    exps = list(exponents)
    if len(exps) > k or any(a < 0 for a in exps):
        raise ValueError("need at most k nonnegative exponents")
    num = 1
    for a in exps:
        num *= math.factorial(a)
    return Fraction(num, math.factorial(k + sum(exps)))


def basis_partitions(k: int, max_degree: int) -> tuple[tuple[int, ...], ...]:
    """All partitions of degree <= max_degree with at most k parts, low degree first."""
    out: list[tuple[int, ...]] = []
    for d in range(max_degree + 1):
        out.extend(_partitions(d, min(k, d) if d else 0))
    if len(out) > BASIS_SIZE_CAP:
        raise ValueError(f"basis size {len(out)} exceeds cap {BASIS_SIZE_CAP}")
    return tuple(out)


def _partitions(total: int, max_parts: int, max_part: int | None = None):
    if max_part is None:
        max_part = total
    if total == 0:
        yield ()
        return
    if max_parts == 0:
        return
    for first in range(min(total, max_part), 0, -1):
        for rest in _partitions(total - first, max_parts - 1, first):
            yield (first,) + rest


def _mult_factorial(partition) -> int:
    out = 1
    for _, grp in itertools.groupby(partition):
        out *= math.factorial(len(list(grp)))
    return out


def _n_arrangements(partition, coords: int) -> int:
    """Distinct placements of the parts on `coords` labelled coordinates."""
    s = len(partition)
    if s > coords:
        return 0
    return math.factorial(coords) // (math.factorial(coords - s) * _mult_factorial(partition))


def _arrangements(partition, coords: int):
    """Yield sparse {coordinate: exponent} placements, distinct coordinates."""
    values = sorted(set(partition), reverse=True)
    mults = [partition.count(v) for v in values]

    def rec(vi, free):
        if vi == len(values):
            yield {}
            return
        for chosen in itertools.combinations(free, mults[vi]):
            rest = tuple(c for c in free if c not in chosen)
            for tail in rec(vi + 1, rest):
                d = dict(tail)
                for c in chosen:
                    d[c] = values[vi]
                yield d

    yield from rec(0, tuple(range(coords)))


@lru_cache(maxsize=None)
def _integral_by_signature(k: int, sig: tuple[int, ...]) -> Fraction:
    return simplex_monomial_integral(k, sig)


def gram_I(k: int, basis) -> tuple[np.ndarray, list[list[Fraction]]]:
    """Gram matrix of the basis under the F^2 integral; float and exact forms.

    The float rendering is scaled by k! (integration against the uniform
    probability measure on the simplex) so entries stay representable at
    large k; the exact matrix is unscaled. Both quadratic forms get the same
    scale, so Rayleigh quotients are unaffected.
    """
    n = len(basis)
    if n == 0:
        raise ValueError("basis must be nonempty")
    exact = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        lam = basis[i]
        n_lam = _n_arrangements(lam, k)
        canon = {c: v for c, v in enumerate(lam)}
        for j in range(i, n):
            mu = basis[j]
            sig_counts: dict[tuple[int, ...], int] = {}
            for beta in _arrangements(mu, k):
                comb = dict(canon)
                for c, v in beta.items():
                    comb[c] = comb.get(c, 0) + v
                sig = tuple(sorted(comb.values(), reverse=True))
                sig_counts[sig] = sig_counts.get(sig, 0) + 1
            val = n_lam * sum(cnt * _integral_by_signature(k, sig) for sig, cnt in sig_counts.items())
            exact[i][j] = exact[j][i] = val
    scale = math.factorial(k)
    flt = np.array([[float(v * scale) for v in row] for row in exact])
    return flt, exact


def _j_pair_value(k: int, a1: int, b1: int, rest_sig: tuple[int, ...], deg_sum: int) -> Fraction:
    num = math.factorial(a1 + b1 + 2)
    for e in rest_sig:
        num *= math.factorial(e)
    den = (a1 + 1) * (b1 + 1) * math.factorial(k + 1 + deg_sum)
    return Fraction(num, den)


def gram_J(k: int, basis) -> tuple[np.ndarray, list[list[Fraction]]]:
    """Gram matrix of the basis under the summed J functional, float and exact.

    Symmetry of the basis collapses the k coordinate choices to a factor k
    times the coordinate-1 term; the inner integral's upper limit
    1 - t_2 - ... - t_k enters through the (1 - sum)^c Dirichlet factor.
    The float rendering carries the same k! scale as gram_I.
    """
    n = len(basis)
    if n == 0:
        raise ValueError("basis must be nonempty")
    exact = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        lam = basis[i]
        deg_lam = sum(lam)
        # group lambda arrangements by the exponent sitting on coordinate 1
        first_choices: list[tuple[int, tuple[int, ...], int]] = []
        rest_count = _n_arrangements(lam, k - 1)
        if rest_count:
            first_choices.append((0, lam, rest_count))
        for v in sorted(set(lam), reverse=True):
            rest = list(lam)
            rest.remove(v)
            cnt = _n_arrangements(tuple(rest), k - 1)
            if cnt:
                first_choices.append((v, tuple(rest), cnt))
        for j in range(i, n):
            mu = basis[j]
            deg_sum = deg_lam + sum(mu)
            total = Fraction(0)
            for a1, rest_lam, cnt in first_choices:
                canon = {c + 1: v for c, v in enumerate(rest_lam)}  # coords 1.. are t_2..t_k
                sig_counts: dict[tuple[int, tuple[int, ...]], int] = {}
                for beta in _arrangements(mu, k):
                    b1 = beta.get(0, 0)
                    comb = dict(canon)
                    for c, v in beta.items():
                        if c:
                            comb[c] = comb.get(c, 0) + v
                    sig = (b1, tuple(sorted(comb.values(), reverse=True)))
                    sig_counts[sig] = sig_counts.get(sig, 0) + 1
                total += cnt * sum(
                    m * _j_pair_value(k, a1, b1, rest_sig, deg_sum)
                    for (b1, rest_sig), m in sig_counts.items()
                )
            exact[i][j] = exact[j][i] = k * total
    scale = math.factorial(k)
    flt = np.array([[float(v * scale) for v in row] for row in exact])
    return flt, exact


# ---------------------------------------------------------------------------
# generalized Rayleigh maximization


class RayleighError(RuntimeError):
    pass


def max_rayleigh(
    A: np.ndarray, B: np.ndarray, tol: float = 1e-10, maxiter: int = 10_000
) -> tuple[float, np.ndarray]:
    """Top generalized eigenpair of (B, A) with A positive definite.

    Cholesky-transform to an ordinary symmetric problem, then power
    iteration; B must be positive semidefinite so the top eigenvalue is the
    spectral radius.
    """
    A = np.asarray(A, dtype=np.float64)
    B = np.asarray(B, dtype=np.float64)
    n = A.shape[0]
    try:
        L = np.linalg.cholesky(A)
    except np.linalg.LinAlgError as exc:
        cond = float(np.linalg.cond(A))
        raise RayleighError(f"Gram matrix not numerically positive definite (cond ~ {cond:.3e})") from exc

    def apply_C(y):
        w = np.linalg.solve(L.T, y)
        return np.linalg.solve(L, B @ w)

    y = np.ones(n) + np.arange(n) / (10.0 * max(n, 1))
    y /= np.linalg.norm(y)
    lam = 0.0
    for _ in range(maxiter):
        Cy = apply_C(y)
        norm = np.linalg.norm(Cy)
        if norm == 0.0:
            raise RayleighError("operator annihilated the iterate; top eigenvalue is 0")
        y_next = Cy / norm
        lam_next = float(y_next @ apply_C(y_next))
        residual = float(np.linalg.norm(apply_C(y_next) - lam_next * y_next))
        if abs(lam_next - lam) <= tol * max(1.0, abs(lam_next)) and residual <= 1e3 * tol * max(1.0, abs(lam_next)):
            c = np.linalg.solve(L.T, y_next)
            quot_den = float(c @ A @ c)
            return float(c @ B @ c) / quot_den, c
        y, lam = y_next, lam_next
    raise RayleighError(f"no convergence after {maxiter} iterations; last residual {residual:.3e}")


# ---------------------------------------------------------------------------
# certificates


@dataclass(frozen=True)
class VariationalCertificate:
    k: int
    degree: int
    basis: tuple[tuple[int, ...], ...]
    coefficients: tuple[float, ...]
    lower_bound: float
    exact_bound: Fraction  # the float coefficients' quotient, rationally exact

    @property
    def basis_size(self) -> int:
        return len(self.basis)

    def json_dict(self) -> dict:
        return {
            "k": self.k,
            "degree": self.degree,
            "basis_size": self.basis_size,
            "lambda": self.lower_bound,
            "exact_bound": str(self.exact_bound),
        }


def _exact_quotient(c, A_exact, B_exact) -> Fraction:
    cf = [Fraction(float(ci)) for ci in c]
    num = Fraction(0)
    den = Fraction(0)
    n = len(cf)
    for i in range(n):
        if cf[i] == 0:
            continue
        for j in range(n):
            if cf[j] == 0:
                continue
            num += cf[i] * cf[j] * B_exact[i][j]
            den += cf[i] * cf[j] * A_exact[i][j]
    if den <= 0:
        raise RayleighError("coefficient vector has nonpositive A-norm")
    return num / den


def mk_lower_bound(k: int, max_degree: int) -> VariationalCertificate:
    """Best quotient over the symmetric polynomial basis of bounded degree."""
    if k < 1:
        raise ValueError("need k >= 1")
    basis = basis_partitions(k, max_degree)
    A, A_exact = gram_I(k, basis)
    B, B_exact = gram_J(k, basis)
    lam, c = max_rayleigh(A, B)
    if float(c @ B @ c) <= 0:
        raise RayleighError("optimizer returned a function with vanishing J mass")
    # normalize for reproducibility: unit A-norm, leading significant entry positive
    c = c / math.sqrt(float(c @ A @ c))
    pivot = int(np.argmax(np.abs(c)))
    if c[pivot] < 0:
        c = -c
    return VariationalCertificate(
        k=k,
        degree=max_degree,
        basis=basis,
        coefficients=tuple(float(v) for v in c),
        lower_bound=float(lam),
        exact_bound=_exact_quotient(c, A_exact, B_exact),
    )


# ---------------------------------------------------------------------------
# Monte-Carlo verification


@lru_cache(maxsize=None)
def _set_partitions(s: int) -> tuple[tuple[tuple[int, ...], ...], ...]:
    if s == 0:
        return ((),)
    out = []
    for smaller in _set_partitions(s - 1):
        for bi in range(len(smaller)):
            out.append(smaller[:bi] + (smaller[bi] + (s - 1,),) + smaller[bi + 1 :])
        out.append(smaller + ((s - 1,),))
    return tuple(out)


@lru_cache(maxsize=None)
def _powersum_expansion(partition: tuple[int, ...]) -> tuple[tuple[Fraction, tuple[int, ...]], ...]:
    """m_lambda as a rational combination of power-sum products.

    Inclusion-exclusion over coincidence patterns of the ordered placement:
    each set partition pi of the parts contributes prod over blocks of
    (-1)^(|B|-1) (|B|-1)! p_{sum of block}, divided by the multiplicity
    factorials of lambda.
    """
    s = len(partition)
    denom = _mult_factorial(partition)
    terms: dict[tuple[int, ...], Fraction] = {}
    for pi in _set_partitions(s):
        coef = Fraction(1, denom)
        powers = []
        for block in pi:
            coef *= Fraction((-1) ** (len(block) - 1) * math.factorial(len(block) - 1))
            powers.append(sum(partition[i] for i in block))
        key = tuple(sorted(powers))
        terms[key] = terms.get(key, Fraction(0)) + coef
    return tuple((c, key) for key, c in sorted(terms.items()) if c != 0)


def eval_monomial_sym(partition: tuple[int, ...], pts: np.ndarray) -> np.ndarray:
    """Evaluate m_lambda at points (rows of pts); pts has one column per coordinate."""
    if len(partition) == 0:
        return np.ones(len(pts))
    maxpow = sum(partition)
    psums = {r: np.sum(pts**r, axis=1) for r in range(1, maxpow + 1)}
    out = np.zeros(len(pts))
    for coef, powers in _powersum_expansion(tuple(partition)):
        term = np.full(len(pts), float(coef))
        for r in powers:
            term = term * psums[r]
        out += term
    return out


def _eval_F(cert: VariationalCertificate, pts: np.ndarray) -> np.ndarray:
    out = np.zeros(len(pts))
    for c, lam in zip(cert.coefficients, cert.basis):
        if c:
            out += c * eval_monomial_sym(lam, pts)
    return out


@dataclass(frozen=True)
class MCVerification:
    ratio: float
    sigma: float
    samples: int

    def contains(self, value: float, n_sigma: float = 5.0) -> bool:
        slack = max(n_sigma * self.sigma, 1e-12)
        return abs(self.ratio - value) <= slack

    def json_dict(self) -> dict:
        return {"mc_ratio": self.ratio, "mc_sigma": self.sigma, "mc_samples": self.samples}


def verify_certificate(
    cert: VariationalCertificate, sample_count: int = 100_000, seed: int = 0, batch: int = 50_000
) -> MCVerification:
    """Independent Monte-Carlo estimate of the certified quotient.

    Uniform simplex sampling by exponential spacings; the inner t_1 integral
    of the J side uses Gauss-Legendre nodes, exact for polynomials.
    """
    if sample_count < 10**5:
        raise ValueError("need at least 1e5 samples")
    if all(c == 0.0 for c in cert.coefficients):
        raise ValueError("zero trial function")
    k = cert.k
    rng = np.random.default_rng(seed)
    nodes, weights = np.polynomial.legendre.leggauss(cert.degree // 2 + 2)

    # Probability-measure means: the simplex volumes cancel in the quotient,
    # quotient = k^2 * E[(inner integral)^2] / E[F^2], so no factorial appears.
    tot = 0.0
    tot_sq = 0.0
    done = 0
    while done < sample_count:
        m = min(batch, sample_count - done)
        e = rng.exponential(size=(m, k + 1))
        pts = (e / e.sum(axis=1, keepdims=True))[:, :k]
        v = _eval_F(cert, pts) ** 2
        tot += float(np.sum(v))
        tot_sq += float(np.sum(v * v))
        done += m
    mean_i = tot / sample_count
    var_i = max(tot_sq / sample_count - mean_i**2, 0.0) / sample_count

    if k == 1:
        inner = 0.5 * float(np.dot(weights, _eval_F(cert, ((nodes[:, None] + 1) / 2))))
        mean_j = inner * inner
        var_j = 0.0
    else:
        tot = 0.0
        tot_sq = 0.0
        done = 0
        while done < sample_count:
            m = min(batch, sample_count - done)
            e = rng.exponential(size=(m, k))
            rest = (e / e.sum(axis=1, keepdims=True))[:, : k - 1]
            u = 1.0 - rest.sum(axis=1)
            inner = np.zeros(m)
            for g, w in zip(nodes, weights):
                t1 = (g + 1) / 2 * u
                pts = np.column_stack([t1, rest])
                inner += w * _eval_F(cert, pts)
            inner *= u / 2
            v = inner**2
            tot += float(np.sum(v))
            tot_sq += float(np.sum(v * v))
            done += m
        mean_j = tot / sample_count
        var_j = max(tot_sq / sample_count - mean_j**2, 0.0) / sample_count

    ratio = k * k * mean_j / mean_i
    rel = math.sqrt(var_j / mean_j**2 + var_i / mean_i**2) if mean_j > 0 else math.sqrt(var_i) / mean_i
    sigma = abs(ratio) * rel
    return MCVerification(ratio=ratio, sigma=sigma, samples=sample_count)


# ---------------------------------------------------------------------------
# k selection


class CertificateCapExceeded(LookupError):
    def __init__(self, threshold: float, best: float, kmax: int):
        super().__init__(
            f"no tabulated k reaches the threshold {threshold:.6g} (best certified bound "
            f"{best:.6g} at k <= {kmax})"
        )
        self.threshold = threshold


def certificate_table(ks, degree: int) -> list[VariationalCertificate]:
    return [mk_lower_bound(k, degree) for k in ks]


def min_k_for(t: int, L: float, table) -> tuple[int, VariationalCertificate]:
    """Least tabulated k whose certified bound exceeds (2t - 2)/L.

    Certificates are lower bounds, so the answer is sound but possibly not
    minimal among all k.
    """
    if L <= 0:
        raise ValueError("need L > 0")
    threshold = (2 * t - 2) / L
    best = 0.0
    kmax = 0
    for cert in sorted(table, key=lambda c: c.k):
        best = max(best, cert.lower_bound)
        kmax = max(kmax, cert.k)
        if cert.lower_bound > threshold:
            return cert.k, cert
    raise CertificateCapExceeded(threshold, best, kmax)
