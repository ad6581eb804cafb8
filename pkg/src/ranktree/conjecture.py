"""Number-theoretic and structural checks on the exact rank constants.

Factors the denominators of c_k by trial division, checks that the
largest prime divisor stays below 2^(k+1)+1 (a theorem) and that the
prime support is a gap-free interval starting at 2 (a conjecture, for
k >= 2), verifies the term-structure bounds on B_k, and locates the
shortest-path constant alpha_0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

from . import genfun
from .plring import Rational

__all__ = [
    "FactorReport",
    "ConjectureVerdict",
    "PLStructureReport",
    "EnvelopeRow",
    "primes_upto",
    "factor_smooth",
    "check_conjectures",
    "check_pl_structure",
    "alpha0",
    "lower_envelope_report",
]


@lru_cache(maxsize=None)
def primes_upto(bound: int) -> tuple[int, ...]:
    """All primes <= bound, by sieve of Eratosthenes."""
    if bound < 2:
        return ()
    sieve = bytearray([1]) * (bound + 1)
    sieve[0] = sieve[1] = 0
    for p in range(2, math.isqrt(bound) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytearray(len(sieve[p * p :: p]))
    return tuple(i for i, is_p in enumerate(sieve) if is_p)


@dataclass(frozen=True)
class FactorReport:
    input: int
    factors: list[tuple[int, int]]  # (prime, exponent), ascending
    residual: int                   # 1 if fully factored below the bound
    bound: int

    @property
    def fully_factored(self) -> bool:
        return self.residual == 1

    def reconstruct(self) -> int:
        value = self.residual
        for p, e in self.factors:
            value *= p**e
        return value

    def to_dict(self) -> dict:
        return {
            "input": str(self.input),
            "factors": [[p, e] for p, e in self.factors],
            "residual": str(self.residual),
            "bound": self.bound,
        }


def factor_smooth(n: int, bound: int) -> FactorReport:
    """Factor out every prime <= bound by trial division."""
    if n < 1 or bound < 2:
        raise ValueError("need n >= 1 and bound >= 2")
    residual = n
    factors = []
    for p in primes_upto(bound):
        if p * p > residual and residual <= bound:
            break
        e = 0
        while residual % p == 0:
            residual //= p
            e += 1
        if e:
            factors.append((p, e))
    if 1 < residual <= bound:
        # residual itself is a prime within the bound
        factors.append((residual, 1))
        residual = 1
        factors.sort()
    return FactorReport(input=n, factors=factors, residual=residual, bound=bound)


@dataclass(frozen=True)
class ConjectureVerdict:
    k: int
    denominator: FactorReport
    threshold: int                  # 2^(k+1) + 1
    largest_prime: int              # 0 if no prime factor found
    smoothness_pass: bool           # largest prime divisor <= threshold
    gap_free: bool | None           # prime support = all primes up to largest;
                                    # None when not applicable (k < 2)

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "threshold": self.threshold,
            "largest_prime": self.largest_prime,
            "smoothness_pass": self.smoothness_pass,
            "gap_free": self.gap_free,
            "denominator": self.denominator.to_dict(),
        }


def check_conjectures(k: int, c: Rational) -> ConjectureVerdict:
    """Check both denominator conjectures for one exact constant c_k.

    Smoothness (proved in general): every prime divisor of denom(c_k) is
    at most 2^(k+1)+1.  Gap-freeness (open, stated for k >= 2): the prime
    divisors form the full interval of primes from 2 up to the largest.
    Verdicts are only asserted when the factorization is complete.
    """
    threshold = 2 ** (k + 1) + 1
    denom = int(c.denominator)
    report = factor_smooth(denom, threshold)
    primes = [p for p, _ in report.factors]
    largest = primes[-1] if primes else 0
    smooth = report.fully_factored
    if k >= 2 and report.fully_factored:
        gap_free = primes == list(primes_upto(largest))
    elif k >= 2:
        gap_free = False
    else:
        gap_free = None
    return ConjectureVerdict(
        k=k,
        denominator=report,
        threshold=threshold,
        largest_prime=largest,
        smoothness_pass=smooth,
        gap_free=gap_free,
    )


@dataclass(frozen=True)
class PLStructureReport:
    k: int
    bound: int                      # 2^(k+1) - 1
    max_upow: int
    max_vpow: int
    min_upow: int
    max_denom_prime: int
    passed: bool

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "bound": self.bound,
            "max_upow": self.max_upow,
            "max_vpow": self.max_vpow,
            "min_upow": self.min_upow,
            "max_denom_prime": self.max_denom_prime,
            "passed": self.passed,
        }


def check_pl_structure(k: int) -> PLStructureReport:
    """Verify the exponent and coefficient-denominator bounds on B_k."""
    bound = 2 ** (k + 1) - 1
    expr = genfun.root_rank_gf(k)
    max_u = max_v = max_prime = 0
    min_u = 0
    for (b, c), a in expr:
        max_u = max(max_u, b)
        min_u = min(min_u, b)
        max_v = max(max_v, c)
        den = int(a.denominator)
        if den > 1:
            rep = factor_smooth(den, bound)
            if not rep.fully_factored:
                max_prime = max(max_prime, rep.residual)  # exceeds the bound
            else:
                max_prime = max(max_prime, rep.factors[-1][0])
    passed = min_u >= 0 and max_u <= bound and max_v <= bound and max_prime <= bound
    return PLStructureReport(
        k=k,
        bound=bound,
        max_upow=max_u,
        max_vpow=max_v,
        min_upow=min_u,
        max_denom_prime=max_prime,
        passed=passed,
    )


def _g_of_alpha(a: float) -> float:
    return a + a * math.log(2.0 / a) - 1.0


def alpha0(tol: float) -> float:
    """Smaller positive root of a + a log(2/a) - 1, by bisection."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    lo, hi = 0.1, 1.0  # g(0.1) < 0 < g(1) = log 2
    while hi - lo > tol:
        mid = (lo + hi) / 2
        if _g_of_alpha(mid) < 0:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


@dataclass(frozen=True)
class EnvelopeRow:
    k: int
    exact_tail: Rational
    lower_reference: float          # (2/3) e^{-k/alpha0}
    upper_bound: Rational           # (6k+7)/3 * (1/3)^k
    decay_ratio: float | None       # (1 - S_k)/(1 - S_{k-1})

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "exact_tail": str(self.exact_tail),
            "exact_tail_float": float(self.exact_tail),
            "lower_reference": self.lower_reference,
            "upper_bound_float": float(self.upper_bound),
            "decay_ratio": self.decay_ratio,
        }


@dataclass(frozen=True)
class EnvelopeReport:
    alpha0: float
    rows: list[EnvelopeRow] = field(default_factory=list)


def lower_envelope_report(kmax: int) -> EnvelopeReport:
    """Exact tails next to the exponential envelopes.

    The decay-ratio column is reported, never asserted: whether
    k^-1 log(1/c_k) converges (inside [log 3, 1/alpha_0]) is open.
    """
    a0 = alpha0(1e-12)
    rows = []
    prev_tail = None
    for k in range(kmax + 1):
        tail = 1 - genfun.partial_sum(k)
        ratio = float(tail / prev_tail) if prev_tail else None
        rows.append(
            EnvelopeRow(
                k=k,
                exact_tail=tail,
                lower_reference=(2.0 / 3.0) * math.exp(-k / a0),
                upper_bound=Rational(6 * k + 7) / 3 / Rational(3) ** k,
                decay_ratio=ratio,
            )
        )
        prev_tail = tail
    return EnvelopeReport(alpha0=a0, rows=rows)
