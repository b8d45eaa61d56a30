"""Log-space evaluation of the closed-form probability bounds and tiling
thresholds.

Everything that can overflow (binomials, powers of tiny probabilities) is
evaluated through log-gamma and compensated summation; exact rational
versions are provided where downstream tests demand bit-exact comparisons.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Sequence


def log_binomial(n: int, k: int) -> float:
    """log C(n, k); -inf when the coefficient is zero."""
    if k < 0 or k > n:
        return -math.inf
    return math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)


def fkg_lower_bound(n: int, ell: int, p: float) -> float:
    """Log of the product lower bound on P[G(n,p) has no K_{ell+1}]:
    C(n, ell+1) * log(1 - p^C(ell+1, 2)).

    Correlation (Harris/FKG) makes the product over (ell+1)-sets a valid
    lower bound.  Returns 0.0 when there are no (ell+1)-sets and -inf when
    p = 1 and at least one set exists.
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p={p} outside [0, 1]")
    if n < ell + 1:
        return 0.0
    nsets = math.comb(n, ell + 1)
    epairs = math.comb(ell + 1, 2)
    if p == 0.0:
        return 0.0
    if p == 1.0:
        return -math.inf
    return nsets * math.log1p(-(p ** epairs))


@dataclass
class JansonReport:
    """Upper bound on P[an a_size-set spans no K_ell] in G(., p):
    exp(-E(X) + Delta/2), with X the K_ell count in the set and Delta the
    ordered-pair correlation sum over ell-subsets sharing >= 2 vertices."""
    a_size: int
    ell: int
    p: float
    expected_x: float
    delta: float
    log_upper_bound: float        # min(0, -E(X) + Delta/2); bound clamped to 1

    @property
    def upper_bound(self) -> float:
        return math.exp(self.log_upper_bound)

    @property
    def raw_exponent(self) -> float:
        return -self.expected_x + self.delta / 2.0


def _delta_terms_log(a_size: int, ell: int, p: float) -> List[float]:
    """Per-intersection-size log terms of the exact pairwise sum."""
    if p == 0.0:
        return []
    lp = math.log(p)
    epairs = math.comb(ell, 2)
    out = []
    for s in range(2, ell):
        lt = (log_binomial(a_size, ell) + log_binomial(ell, s)
              + log_binomial(a_size - ell, ell - s)
              + (2 * epairs - math.comb(s, 2)) * lp)
        if lt > -math.inf:
            out.append(lt)
    return out


def janson_bound(a_size: int, ell: int, p: float) -> JansonReport:
    """Evaluate the exponential upper bound in log space.

    The correlation sum is computed exactly by intersection-size casework:
    ordered pairs of distinct ell-subsets with |S & S'| = s contribute
    C(a, ell) C(ell, s) C(a-ell, ell-s) p^(2 C(ell,2) - C(s,2)); only
    s in [2, ell-1] carries shared edges.  ell = 2 therefore has Delta = 0.
    """
    if not (a_size >= ell >= 2):
        raise ValueError(f"need a_size >= ell >= 2, got {a_size}, {ell}")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p={p} outside [0, 1]")
    epairs = math.comb(ell, 2)
    if p == 0.0:
        expected = 0.0
    else:
        expected = math.exp(log_binomial(a_size, ell) + epairs * math.log(p))
    delta = math.fsum(math.exp(t) for t in _delta_terms_log(a_size, ell, p))
    exponent = -expected + delta / 2.0
    return JansonReport(a_size=a_size, ell=ell, p=p, expected_x=expected,
                        delta=delta, log_upper_bound=min(0.0, exponent))


def janson_delta_exact(a_size: int, ell: int, p) -> Fraction:
    """Exact rational correlation sum (same casework as janson_bound).
    ``p`` is converted to an exact Fraction, so binary floats are taken at
    their exact value."""
    q = p if isinstance(p, Fraction) else Fraction(p)
    epairs = math.comb(ell, 2)
    total = Fraction(0)
    for s in range(2, ell):
        total += (math.comb(a_size, ell) * math.comb(ell, s)
                  * math.comb(a_size - ell, ell - s)
                  * q ** (2 * epairs - math.comb(s, 2)))
    return total


def janson_expected_exact(a_size: int, ell: int, p) -> Fraction:
    q = p if isinstance(p, Fraction) else Fraction(p)
    return math.comb(a_size, ell) * q ** math.comb(ell, 2)


def drc_condition(n: int, avg_degree: float, t: int, r: int, m: float,
                  a: float) -> float:
    """Slack of the selector feasibility inequality:
    d^t / n^(t-1) - C(n, r) (m/n)^t - a.

    Nonnegative slack means a certified selection of at least ``a`` vertices
    is achievable in expectation.  Both terms are evaluated in log space and
    only exponentiated if representable; otherwise the sign of the dominant
    term decides.
    """
    if n <= 0 or t < 1 or r < 1:
        raise ValueError("need n >= 1, t >= 1, r >= 1")
    if avg_degree < 0 or m < 0:
        raise ValueError("degrees and neighborhood targets must be nonnegative")
    lt1 = -math.inf if avg_degree == 0 else t * math.log(avg_degree) - (t - 1) * math.log(n)
    lt2 = -math.inf if m == 0 else log_binomial(n, r) + t * (math.log(m) - math.log(n))
    big = 700.0
    if lt1 > big or lt2 > big:
        if abs(lt1 - lt2) < 1e-9:
            return 0.0 - a
        return math.inf if lt1 > lt2 else -math.inf
    return math.exp(lt1) - math.exp(lt2) - a


def chi_cr(part_sizes: Sequence[int]) -> Fraction:
    """Critical chromatic number of a complete multipartite graph:
    (k-1) r / (r - sigma) with k parts, r vertices, sigma the smallest part.

    A single part is degenerate (the formula is 0/0); by convention the
    value 0 is returned and callers treat it as undefined.
    """
    if not part_sizes:
        raise ValueError("at least one part required")
    if any(s <= 0 for s in part_sizes):
        raise ValueError("part sizes must be positive")
    k = len(part_sizes)
    if k == 1:
        return Fraction(0)
    r = sum(part_sizes)
    sigma = min(part_sizes)
    return Fraction((k - 1) * r, r - sigma)


def komlos_threshold(part_sizes: Sequence[int]) -> Fraction:
    """Minimum-degree fraction 1 - 1/chi_cr above which near-perfect tilings
    by the given complete multipartite graph are guaranteed (asymptotically).
    """
    c = chi_cr(part_sizes)
    if c == 0:
        raise ValueError("degenerate critical chromatic number (single part)")
    return 1 - Fraction(1) / c


@dataclass
class DegreeThresholds:
    """The two minimum-degree terms competing in the factor threshold:
    the tiling term (r-l)/r and the cover term 1/(2 - rho_star)."""
    n: int
    r: int
    ell: int
    rho_star: Fraction
    tiling_term: Fraction
    cover_term: Fraction

    @property
    def threshold(self) -> Fraction:
        return max(self.tiling_term, self.cover_term)

    @property
    def scaled(self) -> Fraction:
        return self.threshold * self.n


def degree_thresholds(n: int, r: int, ell: int, rho_star) -> DegreeThresholds:
    if not r > ell >= 2:
        raise ValueError(f"need r > ell >= 2, got r={r}, ell={ell}")
    rho = rho_star if isinstance(rho_star, Fraction) else Fraction(rho_star)
    if not 0 <= rho < 1:
        raise ValueError(f"rho_star={rho} outside [0, 1)")
    return DegreeThresholds(
        n=n, r=r, ell=ell, rho_star=rho,
        tiling_term=Fraction(r - ell, r),
        cover_term=Fraction(1) / (2 - rho),
    )


def alpha_profile(n: int, r: int, ell: int, c: float) -> float:
    """Evaluate the sublinear independence profile n^(1 - c * (ln n)^(-lam))
    with lam = 1 / floor(r/l + 1).

    A finite-n stand-in for "almost linear but not quite": the profile sits
    between n^(1-eps) and n / log n for every fixed eps as n grows.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    if not r > ell >= 2:
        raise ValueError(f"need r > ell >= 2, got r={r}, ell={ell}")
    lam = 1.0 / (r // ell + 1)
    return n ** (1.0 - c * math.log(n) ** (-lam))
