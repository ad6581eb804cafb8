"""Generating functions and exact constants for vertex ranks.

Builds, inside the (1-x)^b log(1/(1-x))^c ring:

* B_k       -- probability GF of a root of rank exactly k,
* B_{<=k}   -- its partial sums (root rank at most k),
* Bcal_{>k} -- (rank > k root, descendant leaf) pair GFs,
* Bhat_k    -- (rank k root, closest descendant leaf) GFs,
* P_{>k}    -- tail GF of the randomized greedy root-to-leaf walk,

and from them the limiting constants c_k, f_k, g_k, the tail moments
I_{k,t} = integral of (1-y)^t P_{>k}(y), and the tail-bound tables.

Whenever two independent routes to the same exact value exist (the
constants and the tail moments), both are computed and compared; any
mismatch raises InternalInconsistency, since it can only mean a bug.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .plring import ONE, PLExpr, Rational, U, UINV, X, ZERO

__all__ = [
    "InternalInconsistency",
    "GFFamily",
    "ConstantsTable",
    "ConstantsRow",
    "TailTable",
    "TailRow",
    "KINDS",
    "root_rank_gf",
    "root_rank_cdf_gf",
    "rank_constant",
    "partial_sum",
    "leaf_pair_tail_gf",
    "leaf_pair_gf",
    "leaf_pair_constant",
    "closest_leaf_gf",
    "closest_leaf_constant",
    "per_vertex_ratios",
    "greedy_tail_gf",
    "tail_moment",
    "tail_report",
    "ode_residual",
    "constants_table",
    "gf_by_kind",
    "cache_snapshot",
    "cache_insert",
]


class InternalInconsistency(AssertionError):
    """Two independent exact routes to the same value disagreed."""


KINDS = ("root_rank", "root_rank_cdf", "leaf_pair_tail", "closest_leaf", "greedy_tail")


@dataclass(frozen=True)
class GFFamily:
    kind: str
    k: int
    expr: PLExpr


# In-memory memo, keyed by (kind, k).  Idempotent fill: recomputation is
# deterministic, so concurrent duplicate writes store identical values.
_CACHE: dict[tuple[str, int], PLExpr] = {}


def _memo(kind: str, k: int, build) -> PLExpr:
    key = (kind, k)
    hit = _CACHE.get(key)
    if hit is None:
        hit = _CACHE.setdefault(key, build())
    return hit


def cache_snapshot() -> dict[tuple[str, int], PLExpr]:
    return dict(_CACHE)


def cache_insert(kind: str, k: int, expr: PLExpr) -> None:
    """Seed the memo (e.g. from an on-disk cache)."""
    if kind not in KINDS:
        raise ValueError(f"unknown GF kind {kind!r}")
    _CACHE.setdefault((kind, k), expr)


# ---------------------------------------------------------------------------
# Root rank generating functions


def root_rank_gf(k: int) -> PLExpr:
    """B_k: sum of x^n P(root of the random n-tree has rank k)."""
    if k < 0:
        raise ValueError("k must be >= 0")

    def build() -> PLExpr:
        if k == 0:
            return X
        prev = root_rank_gf(k - 1)
        below = ZERO
        for j in range(k - 1):
            below = below + root_rank_gf(j)
        rhs = 2 * prev * (UINV - below) - prev * prev
        return rhs.antiderivative(0)

    return _memo("root_rank", k, build)


def root_rank_cdf_gf(k: int) -> PLExpr:
    """B_{<=k}: sum of x^n P(root rank <= k); B_{<=-1} = 0."""
    if k < -1:
        raise ValueError("k must be >= -1")
    if k == -1:
        return ZERO

    def build() -> PLExpr:
        prev = root_rank_cdf_gf(k - 1)
        # d/dx(1/(1-x) - B_{<=k}) = (1/(1-x) - B_{<=k-1})^2 - 1
        deriv = UINV * UINV - ((UINV - prev) ** 2 - ONE)
        return deriv.antiderivative(0)

    return _memo("root_rank_cdf", k, build)


_PARTIAL_SUMS: dict[int, Rational] = {}


def partial_sum(k: int) -> Rational:
    """S_k = c_0 + ... + c_k, via the cdf route that avoids B_k itself."""
    if k < -1:
        raise ValueError("k must be >= -1")
    if k == -1:
        return Rational(0)
    hit = _PARTIAL_SUMS.get(k)
    if hit is None:
        cdf_prev = root_rank_cdf_gf(k - 1)
        integrand = ONE + U * U - (ONE - U * cdf_prev) ** 2
        hit = _PARTIAL_SUMS.setdefault(k, integrand.integral01())
    return hit


def rank_constant(k: int) -> Rational:
    """Exact c_k, cross-checked along two independent routes."""
    if k < 0:
        raise ValueError("k must be >= 0")
    via_sums = partial_sum(k) - partial_sum(k - 1)
    via_bk = 2 * (U * root_rank_gf(k)).integral01()
    if via_sums != via_bk:
        raise InternalInconsistency(
            f"c_{k}: partial-sum route {via_sums} != integral route {via_bk}"
        )
    return via_bk


# ---------------------------------------------------------------------------
# Descendant-leaf pair families


def leaf_pair_tail_gf(k: int) -> PLExpr:
    """Bcal_{>k}: GF of expected (root rank > k) x (leaf count) products."""
    if k < -1:
        raise ValueError("k must be >= -1")

    def build() -> PLExpr:
        if k == -1:
            # generating function of E[L_n] = (n+1)/3 for n >= 2, 1 for n = 1
            third = Rational(1) / 3
            return PLExpr({(-2, 0): third, (1, 0): -third})
        deriv = 2 * (UINV - root_rank_cdf_gf(k - 1)) * leaf_pair_tail_gf(k - 1)
        return deriv.antiderivative(0)

    return _memo("leaf_pair_tail", k, build)


def leaf_pair_gf(k: int) -> PLExpr:
    """Bcal_k = Bcal_{>k-1} - Bcal_{>k}."""
    if k < 0:
        raise ValueError("k must be >= 0")
    return leaf_pair_tail_gf(k - 1) - leaf_pair_tail_gf(k)


def leaf_pair_constant(k: int) -> Rational:
    """Exact f_k = 2 * integral of (1-x) Bcal_k over [0, 1]."""
    expr = U * leaf_pair_gf(k)
    # divergent parts of the two tails must cancel; integral01 raises otherwise
    return 2 * expr.integral01()


def closest_leaf_gf(k: int) -> PLExpr:
    """Bhat_k: GF of expected (root rank = k) x (closest-leaf count) products."""
    if k < 0:
        raise ValueError("k must be >= 0")

    def build() -> PLExpr:
        if k == 0:
            return X
        # bracket 1 + B_{>=k-1}(x) read as 1/(1-x) - B_{<=k-2}(x)
        deriv = 2 * (UINV - root_rank_cdf_gf(k - 2)) * closest_leaf_gf(k - 1)
        return deriv.antiderivative(0)

    return _memo("closest_leaf", k, build)


def closest_leaf_constant(k: int) -> Rational:
    """Exact g_k = 2 * integral of (1-x) Bhat_k over [0, 1]."""
    return 2 * (U * closest_leaf_gf(k)).integral01()


def per_vertex_ratios(k: int) -> tuple[Rational, Rational]:
    """Limiting per-rank-k-vertex leaf counts: (f_k/c_k, g_k/c_k)."""
    c = rank_constant(k)
    return leaf_pair_constant(k) / c, closest_leaf_constant(k) / c


# ---------------------------------------------------------------------------
# Greedy-path tails


def greedy_tail_gf(k: int) -> PLExpr:
    """P_{>k}: GF of P(randomized greedy root-to-leaf walk is longer than k)."""
    if k < -1:
        raise ValueError("k must be >= -1")

    def build() -> PLExpr:
        if k == -1:
            return UINV - ONE  # x/(1-x)
        prev = greedy_tail_gf(k - 1)
        second = 2 * prev.differentiate() + 2 * PLExpr.term(1, -2, 0) * prev
        return second.antiderivative(0).antiderivative(0)

    return _memo("greedy_tail", k, build)


_TAIL_MOMENTS: dict[tuple[int, int], Rational] = {}

# the recurrence route is checked against the direct integral up to here
_TAIL_MOMENT_CHECK_KMAX = 6


def tail_moment(k: int, t: int) -> Rational:
    """I_{k,t} = integral of (1-y)^t P_{>k}(y) over [0, 1], exact."""
    if k < -1:
        raise ValueError("k must be >= -1")
    if t < 1:
        raise ValueError("t must be >= 1")
    key = (k, t)
    hit = _TAIL_MOMENTS.get(key)
    if hit is not None:
        return hit
    if k == -1:
        value = Rational(1) / (t * (t + 1))
    else:
        # I_{k,t} = 2/((t+2)(t+1)) [I_{k-1,t} + (t+2) I_{k-1,t+1}]
        value = (
            2 * (tail_moment(k - 1, t) + (t + 2) * tail_moment(k - 1, t + 1))
            / Rational((t + 2) * (t + 1))
        )
    if -1 <= k <= _TAIL_MOMENT_CHECK_KMAX:
        direct = (PLExpr.term(1, t, 0) * greedy_tail_gf(k)).integral01()
        if direct != value:
            raise InternalInconsistency(
                f"I_{{{k},{t}}}: recurrence {value} != integral {direct}"
            )
    return _TAIL_MOMENTS.setdefault(key, value)


@dataclass(frozen=True)
class TailRow:
    k: int
    exact_tail: Rational           # 1 - S_k
    exact_tail_prev: Rational      # 1 - S_{k-1}, the other index convention
    moment_bound: Rational         # 2 I_{k,1}
    theorem_bound: Rational        # (6k+7)/3 * (1/3)^k
    lower_reference: float         # (2/3) e^{-k/alpha0}, reported only


@dataclass(frozen=True)
class TailTable:
    kmax: int
    rows: list[TailRow] = field(default_factory=list)
    moments: dict[tuple[int, int], Rational] = field(default_factory=dict)


def tail_report(kmax: int, tmax: int = 4) -> TailTable:
    """Exact tails 1 - S_k next to both proven upper bounds.

    Asserts 1 - S_k <= 2 I_{k,1} and 1 - S_k <= (6k+7)/3 (1/3)^k for every
    computed k; the exponential lower envelope is attached as a floating
    reference value only.
    """
    from .conjecture import alpha0  # deferred: conjecture imports this module

    a0 = alpha0(1e-12)
    rows = []
    moments = {}
    for k in range(kmax + 1):
        for t in range(1, tmax + 1):
            moments[(k, t)] = tail_moment(k, t)
        tail = 1 - partial_sum(k)
        tail_prev = 1 - partial_sum(k - 1)
        bound2i = 2 * tail_moment(k, 1)
        theorem = Rational(6 * k + 7, 3) / Rational(3) ** k
        if tail > bound2i:
            raise InternalInconsistency(f"1 - S_{k} exceeds 2 I_{{{k},1}}")
        if tail > theorem:
            raise InternalInconsistency(f"1 - S_{k} exceeds the (1/3)^k bound")
        rows.append(
            TailRow(
                k=k,
                exact_tail=tail,
                exact_tail_prev=tail_prev,
                moment_bound=bound2i,
                theorem_bound=theorem,
                lower_reference=(2.0 / 3.0) * math.exp(-k / a0),
            )
        )
    return TailTable(kmax=kmax, rows=rows, moments=moments)


# ---------------------------------------------------------------------------
# Constants table


def ode_residual(kind: str, k: int) -> PLExpr:
    """Plug the computed family back into its defining equation.

    Returns derivative-minus-right-hand-side, which must be the zero
    element: the recurrences integrate these exact equations, so any
    nonzero residual means the calculus layer is broken.
    """
    if kind == "root_rank":
        if k == 0:
            return root_rank_gf(0) - X
        below = ZERO
        for j in range(k - 1):
            below = below + root_rank_gf(j)
        prev = root_rank_gf(k - 1)
        rhs = 2 * prev * (UINV - below) - prev * prev
        return root_rank_gf(k).differentiate() - rhs
    if kind == "root_rank_cdf":
        if k < 0:
            raise ValueError("k must be >= 0")
        # d/dx of 1/(1-x) - cdf_k is u^-2 - cdf_k'
        lhs = PLExpr.term(1, -2, 0) - root_rank_cdf_gf(k).differentiate()
        rhs = (UINV - root_rank_cdf_gf(k - 1)) ** 2 - ONE
        return lhs - rhs
    if kind == "leaf_pair_tail":
        if k < 0:
            raise ValueError("k must be >= 0")
        rhs = 2 * (UINV - root_rank_cdf_gf(k - 1)) * leaf_pair_tail_gf(k - 1)
        return leaf_pair_tail_gf(k).differentiate() - rhs
    if kind == "closest_leaf":
        if k < 1:
            raise ValueError("k must be >= 1")
        rhs = 2 * (UINV - root_rank_cdf_gf(k - 2)) * closest_leaf_gf(k - 1)
        return closest_leaf_gf(k).differentiate() - rhs
    if kind == "greedy_tail":
        if k < 0:
            raise ValueError("k must be >= 0")
        prev = greedy_tail_gf(k - 1)
        rhs = 2 * prev.differentiate() + 2 * PLExpr.term(1, -2, 0) * prev
        return greedy_tail_gf(k).differentiate().differentiate() - rhs
    raise ValueError(f"unknown GF kind {kind!r}")


@dataclass(frozen=True)
class ConstantsRow:
    k: int
    c: Rational
    f: Rational
    g: Rational
    partial_sum: Rational
    f_over_c: Rational
    g_over_c: Rational


@dataclass(frozen=True)
class ConstantsTable:
    kmax: int
    rows: list[ConstantsRow] = field(default_factory=list)


def constants_table(kmax: int) -> ConstantsTable:
    rows = []
    for k in range(kmax + 1):
        c = rank_constant(k)
        f = leaf_pair_constant(k)
        g = closest_leaf_constant(k)
        s = partial_sum(k)
        if not 0 < c or not s < 1:
            raise InternalInconsistency(f"c_{k} or S_{k} out of range")
        rows.append(
            ConstantsRow(
                k=k, c=c, f=f, g=g, partial_sum=s, f_over_c=f / c, g_over_c=g / c
            )
        )
    return ConstantsTable(kmax=kmax, rows=rows)


def gf_by_kind(kind: str, k: int) -> PLExpr:
    builders = {
        "root_rank": root_rank_gf,
        "root_rank_cdf": root_rank_cdf_gf,
        "leaf_pair_tail": leaf_pair_tail_gf,
        "closest_leaf": closest_leaf_gf,
        "greedy_tail": greedy_tail_gf,
    }
    try:
        return builders[kind](k)
    except KeyError:
        raise ValueError(f"unknown GF kind {kind!r}") from None
