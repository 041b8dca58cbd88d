"""Exact scalars: rationals, Gaussian rationals and the field Q(1/sqrt(N)).

Phase-normalised equations (dHYM, central charges) have coefficients of the
form ``a + b/|Z|`` with ``|Z|**2`` rational. :class:`Surd` keeps such values
exact so that sign tests never touch floating point.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from numbers import Rational

from .errors import MalformedInput

__all__ = [
    "Gaussian",
    "Surd",
    "as_fraction",
    "format_rational",
    "format_scalar",
    "parse_rational",
    "rational_sqrt",
    "sign",
]


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        return parse_rational(x)
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")


def parse_rational(text) -> Fraction:
    """Parse ``"num/den"``, ``"num"`` or an int. Floats are refused."""
    if isinstance(text, bool):
        raise MalformedInput(f"not a rational: {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    if not isinstance(text, str):
        raise MalformedInput(f"not a rational: {text!r}")
    s = text.strip()
    if "." in s or "e" in s.lower():
        raise MalformedInput(f"decimal literals are not exact rationals: {text!r}")
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise MalformedInput(f"not a rational: {text!r}") from exc


def format_rational(x) -> str:
    """Lowest-terms ``num/den`` (integers print without a denominator)."""
    return str(Fraction(x))


def rational_sqrt(q: Fraction) -> Fraction | None:
    """Exact square root of a non-negative rational, or None."""
    q = Fraction(q)
    if q < 0:
        return None
    n, d = q.numerator, q.denominator
    rn, rd = isqrt(n), isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


@dataclass(frozen=True)
class Gaussian:
    """Exact Gaussian rational ``re + i*im``."""

    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "re", as_fraction(self.re))
        object.__setattr__(self, "im", as_fraction(self.im))

    @classmethod
    def coerce(cls, x) -> "Gaussian":
        if isinstance(x, Gaussian):
            return x
        return cls(as_fraction(x), Fraction(0))

    def __add__(self, other):
        o = Gaussian.coerce(other)
        return Gaussian(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return Gaussian(-self.re, -self.im)

    def __sub__(self, other):
        return self + (-Gaussian.coerce(other))

    def __rsub__(self, other):
        return Gaussian.coerce(other) - self

    def __mul__(self, other):
        o = Gaussian.coerce(other)
        return Gaussian(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers are not supported")
        out = Gaussian(1)
        for _ in range(k):
            out = out * self
        return out

    def conjugate(self) -> "Gaussian":
        return Gaussian(self.re, -self.im)

    def abs2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        try:
            o = Gaussian.coerce(other)
        except TypeError:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"Gaussian({format_rational(self.re)}, {format_rational(self.im)})"

    def __str__(self):
        if not self.im:
            return format_rational(self.re)
        sgn = "-" if self.im < 0 else "+"
        return f"{format_rational(self.re)} {sgn} {format_rational(abs(self.im))}i"

    def to_json(self) -> dict:
        return {"re": format_rational(self.re), "im": format_rational(self.im)}

    @classmethod
    def from_json(cls, obj) -> "Gaussian":
        if isinstance(obj, dict):
            return cls(parse_rational(obj.get("re", 0)), parse_rational(obj.get("im", 0)))
        return cls(parse_rational(obj))


I = Gaussian(0, 1)


class Surd:
    """Element ``a + b / sqrt(radicand)`` of Q(1/sqrt(N)) with exact order.

    ``radicand`` must be a positive rational. When it is a perfect square the
    value collapses to a plain rational (``b`` is folded into ``a``).
    """

    __slots__ = ("a", "b", "radicand")

    def __init__(self, a=0, b=0, radicand=1):
        a, b, n = as_fraction(a), as_fraction(b), as_fraction(radicand)
        if n <= 0:
            raise ValueError("radicand must be positive")
        root = rational_sqrt(n)
        if root is not None:
            a, b, n = a + b / root, Fraction(0), Fraction(1)
        elif b == 0:
            n = Fraction(1)
        self.a, self.b, self.radicand = a, b, n

    @property
    def is_rational(self) -> bool:
        return self.b == 0

    def _lift(self, other) -> "Surd":
        if isinstance(other, Surd):
            if other.b and self.b and other.radicand != self.radicand:
                raise ValueError("cannot mix surds with different radicands")
            return other
        return Surd(as_fraction(other), 0, self.radicand)

    def _common(self, o: "Surd") -> Fraction:
        return self.radicand if self.b else o.radicand

    def __add__(self, other):
        try:
            o = self._lift(other)
        except TypeError:
            return NotImplemented
        return Surd(self.a + o.a, self.b + o.b, self._common(o))

    __radd__ = __add__

    def __neg__(self):
        return Surd(-self.a, -self.b, self.radicand)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        try:
            o = self._lift(other)
        except TypeError:
            return NotImplemented
        n = self._common(o)
        return Surd(self.a * o.a + self.b * o.b / n, self.a * o.b + self.b * o.a, n)

    __rmul__ = __mul__

    def __truediv__(self, other):
        q = as_fraction(other)
        return Surd(self.a / q, self.b / q, self.radicand)

    def sign(self) -> int:
        a, b = self.a, self.b
        sa = (a > 0) - (a < 0)
        sb = (b > 0) - (b < 0)
        if sb == 0 or sa == sb:
            return sa or sb
        if sa == 0:
            return sb
        # opposite signs: compare a**2 with b**2 / N
        lhs, rhs = a * a, b * b / self.radicand
        return sa if lhs > rhs else sb

    def _cmp(self, other) -> int:
        try:
            return (self - other).sign()
        except TypeError:
            return NotImplemented

    def __eq__(self, other):
        try:
            return (self - other).sign() == 0
        except (TypeError, ValueError):
            return NotImplemented

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.radicand))

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __bool__(self):
        return self.sign() != 0

    def __float__(self):
        return float(self.a) + float(self.b) / float(self.radicand) ** 0.5

    def __repr__(self):
        return f"Surd({self.a}, {self.b}, {self.radicand})"

    def __str__(self):
        if self.b == 0:
            return format_rational(self.a)
        head = "" if self.a == 0 else f"{format_rational(self.a)} + "
        return f"{head}{format_rational(self.b)}/sqrt({format_rational(self.radicand)})"

    def to_json(self):
        if self.b == 0:
            return format_rational(self.a)
        return {
            "rational": format_rational(self.a),
            "surd": format_rational(self.b),
            "radicand": format_rational(self.radicand),
        }


def sign(x) -> int:
    """Exact sign of a Fraction, int or Surd."""
    if isinstance(x, Surd):
        return x.sign()
    x = as_fraction(x)
    return (x > 0) - (x < 0)


def format_scalar(x):
    """JSON-ready form of an exact scalar."""
    if isinstance(x, Surd):
        return x.to_json()
    if isinstance(x, Gaussian):
        return x.to_json()
    return format_rational(x)
