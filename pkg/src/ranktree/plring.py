"""Exact arithmetic on finite combinations of (1-x)^b * log(1/(1-x))^c.

Every function handled here is a finite sum

    sum of  coeff * u^b * v^c,   u = 1 - x,  v = log(1/(1-x)),

with exact rational coefficients, integer b (possibly negative) and
nonnegative integer c.  The family {u^b v^c} is linearly independent on
[0, 1), so two expressions are equal as functions iff their canonical
term maps coincide.  The class is closed under the ring operations,
differentiation and antidifferentiation, which is what makes it the
right kernel for the generating-function recurrences in genfun.
"""

from __future__ import annotations

import math
from typing import Iterable, Mapping

try:  # gmpy2 speeds up the big-rational arithmetic considerably
    from gmpy2 import mpq as Rational
except ImportError:  # pragma: no cover
    from fractions import Fraction as Rational

__all__ = [
    "Rational",
    "rational",
    "DivergentIntegral",
    "PLExpr",
    "ZERO",
    "ONE",
    "U",
    "UINV",
    "V",
    "X",
]


def rational(num, den=1) -> Rational:
    """Build a canonical Rational from ints, decimal strings, or Rationals."""
    if isinstance(num, str):
        num = int(num)
    if isinstance(den, str):
        den = int(den)
    return Rational(num) / Rational(den)


class DivergentIntegral(ValueError):
    """Raised when integrating a term (1-x)^b with b < 0 over [0, 1]."""


def _as_coeff(a) -> Rational:
    if isinstance(a, (int, Rational)):
        return Rational(a)
    from fractions import Fraction

    if isinstance(a, Fraction):
        return rational(a.numerator, a.denominator)
    raise TypeError(f"cannot use {a!r} as a coefficient")


class PLExpr:
    """Canonical, immutable term map (upow, vpow) -> nonzero coefficient."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[tuple[int, int], object] | None = None):
        canon: dict[tuple[int, int], Rational] = {}
        if terms:
            for (b, c), a in terms.items():
                if c < 0:
                    raise ValueError("vpow must be nonnegative")
                a = _as_coeff(a)
                if a:
                    key = (int(b), int(c))
                    s = canon.get(key, 0) + a
                    if s:
                        canon[key] = s
                    else:
                        canon.pop(key, None)
        self._terms = canon

    # -- constructors ------------------------------------------------------

    @classmethod
    def term(cls, coeff, upow: int = 0, vpow: int = 0) -> "PLExpr":
        return cls({(upow, vpow): coeff})

    @classmethod
    def const(cls, value) -> "PLExpr":
        return cls.term(value)

    # -- canonical access --------------------------------------------------

    @property
    def terms(self) -> dict[tuple[int, int], Rational]:
        return dict(self._terms)

    def coeff(self, upow: int, vpow: int) -> Rational:
        return self._terms.get((upow, vpow), Rational(0))

    def is_zero(self) -> bool:
        return not self._terms

    def __len__(self) -> int:
        return len(self._terms)

    def __iter__(self):
        return iter(sorted(self._terms.items()))

    def __eq__(self, other) -> bool:
        if isinstance(other, PLExpr):
            return self._terms == other._terms
        return NotImplemented

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def __repr__(self) -> str:
        if not self._terms:
            return "PLExpr(0)"
        bits = [f"({a})*u^{b}*v^{c}" for (b, c), a in sorted(self._terms.items())]
        return "PLExpr[" + " + ".join(bits) + "]"

    # -- ring operations ---------------------------------------------------

    def __add__(self, other) -> "PLExpr":
        if isinstance(other, (int, Rational)):
            other = PLExpr.const(other)
        if not isinstance(other, PLExpr):
            return NotImplemented
        out = dict(self._terms)
        for key, a in other._terms.items():
            s = out.get(key, 0) + a
            if s:
                out[key] = s
            else:
                out.pop(key, None)
        return _raw(out)

    __radd__ = __add__

    def __neg__(self) -> "PLExpr":
        return _raw({k: -a for k, a in self._terms.items()})

    def __sub__(self, other) -> "PLExpr":
        if isinstance(other, (int, Rational)):
            other = PLExpr.const(other)
        if not isinstance(other, PLExpr):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "PLExpr":
        return (-self) + other

    def scale(self, a) -> "PLExpr":
        a = _as_coeff(a)
        if not a:
            return ZERO
        return _raw({k: c * a for k, c in self._terms.items()})

    def __mul__(self, other) -> "PLExpr":
        if isinstance(other, (int, Rational)):
            return self.scale(other)
        if not isinstance(other, PLExpr):
            return NotImplemented
        out: dict[tuple[int, int], Rational] = {}
        for (b1, c1), a1 in self._terms.items():
            for (b2, c2), a2 in other._terms.items():
                key = (b1 + b2, c1 + c2)
                s = out.get(key, 0) + a1 * a2
                if s:
                    out[key] = s
                else:
                    out.pop(key, None)
        return _raw(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "PLExpr":
        if n < 0:
            raise ValueError("negative powers of PLExpr are not defined")
        result = ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    # -- calculus ----------------------------------------------------------

    def differentiate(self) -> "PLExpr":
        """Exact d/dx:  u^b v^c  ->  -b u^(b-1) v^c + c u^(b-1) v^(c-1)."""
        out: dict[tuple[int, int], Rational] = {}
        for (b, c), a in self._terms.items():
            if b:
                _acc(out, (b - 1, c), -b * a)
            if c:
                _acc(out, (b - 1, c - 1), c * a)
        return _raw(out)

    def antiderivative(self, value_at_0=0) -> "PLExpr":
        """The antiderivative F with F(0) = value_at_0, exact.

        u^(-1) v^c integrates to v^(c+1)/(c+1); for b != -1 integration by
        parts trades one power of v for a 1/(b+1) factor until c reaches 0.
        """
        out: dict[tuple[int, int], Rational] = {}
        for (b, c), a in self._terms.items():
            if b == -1:
                _acc(out, (0, c + 1), a / Rational(c + 1))
            else:
                # - v^c u^(b+1)/(b+1) + (c/(b+1)) * integral(u^b v^(c-1))
                factor = a
                while c > 0:
                    _acc(out, (b + 1, c), -factor / Rational(b + 1))
                    factor = factor * c / Rational(b + 1)
                    c -= 1
                _acc(out, (b + 1, 0), -factor / Rational(b + 1))
        result = _raw(out)
        shift = _as_coeff(value_at_0) - result.value_at_0()
        if shift:
            result = result + PLExpr.const(shift)
        return result

    def value_at_0(self) -> Rational:
        """Exact value at x = 0, where u = 1 and v = 0."""
        total = Rational(0)
        for (b, c), a in self._terms.items():
            if c == 0:
                total += a
        return total

    def integral01(self) -> Rational:
        """Exact integral over [0, 1]: each term contributes c!/(b+1)^(c+1)."""
        total = Rational(0)
        for (b, c), a in self._terms.items():
            if b < 0:
                raise DivergentIntegral(
                    f"term u^{b} v^{c} diverges on [0, 1]"
                )
            total += a * Rational(math.factorial(c)) / Rational(b + 1) ** (c + 1)
        return total

    # -- power series ------------------------------------------------------

    def series(self, order: int) -> list[Rational]:
        """Exact Taylor coefficients [x^0 .. x^order] at x = 0."""
        if order < 0:
            raise ValueError("order must be nonnegative")
        n = order + 1
        total = [Rational(0)] * n
        for (b, c), a in self._terms.items():
            if c > order:
                continue  # v^c = O(x^c)
            ts = _u_pow_series(b, order)
            if c:
                ts = _convolve(ts, _v_pow_series(c, order), n)
            for i, t in enumerate(ts):
                if t:
                    total[i] += a * t
        return total

    # -- numerics ----------------------------------------------------------

    def eval_real(self, x: float) -> float:
        """Floating evaluation for 0 <= x < 1."""
        if not 0.0 <= x < 1.0:
            raise ValueError(f"x={x} outside [0, 1)")
        u = 1.0 - x
        v = -math.log1p(-x)
        return sum(float(a) * u**b * v**c for (b, c), a in self._terms.items())

    # -- stable text form --------------------------------------------------

    def to_records(self) -> list[dict]:
        """Stable serialization, sorted by (upow, vpow); bit-exact round trip."""
        return [
            {
                "num": str(a.numerator),
                "den": str(a.denominator),
                "upow": b,
                "vpow": c,
            }
            for (b, c), a in sorted(self._terms.items())
        ]

    @classmethod
    def from_records(cls, records: Iterable[Mapping]) -> "PLExpr":
        return cls(
            {
                (int(r["upow"]), int(r["vpow"])): rational(r["num"], r["den"])
                for r in records
            }
        )


def _raw(terms: dict[tuple[int, int], Rational]) -> PLExpr:
    expr = PLExpr.__new__(PLExpr)
    expr._terms = terms
    return expr


def _acc(out: dict, key: tuple[int, int], a) -> None:
    s = out.get(key, 0) + a
    if s:
        out[key] = s
    else:
        out.pop(key, None)


def _u_pow_series(b: int, order: int) -> list[Rational]:
    """Coefficients of (1-x)^b; finite binomial for b >= 0, else geometric-type."""
    coeffs = [Rational(1)]
    c = Rational(1)
    for i in range(order):
        # C(b, i+1)(-1)^(i+1) = previous * (i - b) / (i + 1), valid for any b
        c = c * Rational(i - b) / Rational(i + 1)
        coeffs.append(c)
    return coeffs


_V_SERIES_CACHE: dict[tuple[int, int], list[Rational]] = {}


def _v_pow_series(c: int, order: int) -> list[Rational]:
    cached = _V_SERIES_CACHE.get((c, order))
    if cached is not None:
        return cached
    n = order + 1
    v1 = [Rational(0)] + [Rational(1) / Rational(i) for i in range(1, n)]
    if c == 1:
        out = v1
    else:
        out = _convolve(_v_pow_series(c - 1, order), v1, n)
    _V_SERIES_CACHE[(c, order)] = out
    return out


def _convolve(a: list[Rational], b: list[Rational], n: int) -> list[Rational]:
    out = [Rational(0)] * n
    for i, ai in enumerate(a[:n]):
        if not ai:
            continue
        for j, bj in enumerate(b[: n - i]):
            if bj:
                out[i + j] += ai * bj
    return out


ZERO = PLExpr()
ONE = PLExpr.const(1)
U = PLExpr.term(1, 1, 0)
UINV = PLExpr.term(1, -1, 0)
V = PLExpr.term(1, 0, 1)
X = ONE - U  # the identity function x
