"""Exact arithmetic in the real field Q(sqrt2, sqrt3).

Every metric quantity in this package (coordinates, lengths, direction
components, positions along edges) is a QuadNumber

    a + b*sqrt2 + c*sqrt3 + d*sqrt6      (a, b, c, d rational)

so that all geometric predicates are decided exactly.  Signs are decided
by interval refinement: a nonzero element of the field has a nonzero
value, hence some finite precision separates it from 0.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from functools import total_ordering

_RatLike = int | Fraction


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"rational coefficient expected, got {type(x).__name__}")


def _sqrt_bounds(n: int, digits: int) -> tuple[Fraction, Fraction]:
    """Lower/upper rational bounds for sqrt(n) with error < 10**-digits."""
    scale = 10 ** digits
    lo = math.isqrt(n * scale * scale)
    return Fraction(lo, scale), Fraction(lo + 1, scale)


@total_ordering
class QuadNumber:
    """An element of Q(sqrt2, sqrt3) with exact coefficient arithmetic."""

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a: _RatLike = 0, b: _RatLike = 0, c: _RatLike = 0,
                 d: _RatLike = 0):
        object.__setattr__(self, "a", _frac(a))
        object.__setattr__(self, "b", _frac(b))
        object.__setattr__(self, "c", _frac(c))
        object.__setattr__(self, "d", _frac(d))

    def __setattr__(self, *_):
        raise AttributeError("QuadNumber is immutable")

    # -- construction helpers -------------------------------------------------

    @classmethod
    def of(cls, x) -> QuadNumber:
        if isinstance(x, QuadNumber):
            return x
        return cls(_frac(x))

    @property
    def coeffs(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        return (self.a, self.b, self.c, self.d)

    def is_rational(self) -> bool:
        return self.b == 0 and self.c == 0 and self.d == 0

    def as_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.a

    # -- ring operations ------------------------------------------------------

    def __add__(self, other) -> QuadNumber:
        o = QuadNumber.of(other)
        return QuadNumber(self.a + o.a, self.b + o.b, self.c + o.c, self.d + o.d)

    __radd__ = __add__

    def __neg__(self) -> QuadNumber:
        return QuadNumber(-self.a, -self.b, -self.c, -self.d)

    def __sub__(self, other) -> QuadNumber:
        return self + (-QuadNumber.of(other))

    def __rsub__(self, other) -> QuadNumber:
        return (-self) + other

    def __mul__(self, other) -> QuadNumber:
        o = QuadNumber.of(other)
        a1, b1, c1, d1 = self.coeffs
        a2, b2, c2, d2 = o.coeffs
        # basis products: sqrt2*sqrt3 = sqrt6, sqrt2*sqrt6 = 2*sqrt3, ...
        return QuadNumber(
            a1 * a2 + 2 * b1 * b2 + 3 * c1 * c2 + 6 * d1 * d2,
            a1 * b2 + b1 * a2 + 3 * (c1 * d2 + d1 * c2),
            a1 * c2 + c1 * a2 + 2 * (b1 * d2 + d1 * b2),
            a1 * d2 + d1 * a2 + b1 * c2 + c1 * b2,
        )

    __rmul__ = __mul__

    def _conj2(self) -> QuadNumber:
        # Galois conjugate sqrt2 -> -sqrt2
        return QuadNumber(self.a, -self.b, self.c, -self.d)

    def _conj3(self) -> QuadNumber:
        # Galois conjugate sqrt3 -> -sqrt3
        return QuadNumber(self.a, self.b, -self.c, -self.d)

    def inverse(self) -> QuadNumber:
        if self.is_zero():
            raise ZeroDivisionError("division by zero in Q(sqrt2, sqrt3)")
        g2 = self._conj2()
        g3 = self._conj3()
        g23 = self._conj2()._conj3()
        num = g2 * g3 * g23
        norm = self * num
        assert norm.is_rational()
        n = norm.a
        return QuadNumber(num.a / n, num.b / n, num.c / n, num.d / n)

    def __truediv__(self, other) -> QuadNumber:
        return self * QuadNumber.of(other).inverse()

    def __rtruediv__(self, other) -> QuadNumber:
        return QuadNumber.of(other) * self.inverse()

    def __pow__(self, n: int) -> QuadNumber:
        if n < 0:
            return self.inverse() ** (-n)
        out = QuadNumber(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # -- decisions ------------------------------------------------------------

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0 and self.c == 0 and self.d == 0

    def sign(self) -> int:
        """Exact sign in {-1, 0, 1}, by interval refinement.

        Refinement terminates because a nonzero field element has a
        nonzero real value.
        """
        if self.is_zero():
            return 0
        digits = 12
        while True:
            lo = hi = self.a
            for coeff, rad in ((self.b, 2), (self.c, 3), (self.d, 6)):
                if coeff == 0:
                    continue
                rlo, rhi = _sqrt_bounds(rad, digits)
                if coeff > 0:
                    lo += coeff * rlo
                    hi += coeff * rhi
                else:
                    lo += coeff * rhi
                    hi += coeff * rlo
            if lo > 0:
                return 1
            if hi < 0:
                return -1
            digits *= 2

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction, QuadNumber)):
            o = QuadNumber.of(other)
            return self.coeffs == o.coeffs
        return NotImplemented

    def __lt__(self, other) -> bool:
        return (self - QuadNumber.of(other)).sign() < 0

    def __hash__(self):
        return hash(self.coeffs)

    def __float__(self) -> float:
        return (float(self.a) + float(self.b) * math.sqrt(2)
                + float(self.c) * math.sqrt(3) + float(self.d) * math.sqrt(6))

    def __abs__(self) -> QuadNumber:
        return self if self.sign() >= 0 else -self

    # -- text form ------------------------------------------------------------

    def __repr__(self):
        return f"QuadNumber({self})"

    def __str__(self):
        return format_scalar(self)


ZERO = QuadNumber(0)
ONE = QuadNumber(1)
SQRT2 = QuadNumber(0, 1)
SQRT3 = QuadNumber(0, 0, 1)
SQRT6 = QuadNumber(0, 0, 0, 1)
HALF = QuadNumber(Fraction(1, 2))

_TERM_RE = re.compile(
    r"^(?:(?P<rat>-?\d+(?:/\d+)?)\*)?"
    r"(?P<root>sqrt[236])"
    r"(?:/(?P<den>\d+))?$"
)
_ROOTS = {"sqrt2": SQRT2, "sqrt3": SQRT3, "sqrt6": SQRT6}


def parse_scalar(text: str) -> QuadNumber:
    """Parse the exact-scalar grammar: sums of rational and root terms.

    Accepted terms: "1", "-1/2", "sqrt2", "3/4*sqrt3", "sqrt2/2".
    """
    s = text.strip().replace(" ", "")
    if not s:
        raise ValueError("empty scalar")
    # split into signed terms
    terms: list[str] = []
    buf = ""
    for i, ch in enumerate(s):
        if ch in "+-" and i > 0 and s[i - 1] not in "+-*/":
            terms.append(buf)
            buf = ch
        else:
            buf += ch
    terms.append(buf)
    total = QuadNumber(0)
    for term in terms:
        t = term
        sign = 1
        while t and t[0] in "+-":
            if t[0] == "-":
                sign = -sign
            t = t[1:]
        if not t:
            raise ValueError(f"bad scalar term {term!r} in {text!r}")
        if "sqrt" in t:
            m = _TERM_RE.match(t)
            if not m:
                raise ValueError(f"bad scalar term {term!r} in {text!r}")
            coeff = Fraction(m.group("rat")) if m.group("rat") else Fraction(1)
            if m.group("den"):
                coeff /= int(m.group("den"))
            total = total + _ROOTS[m.group("root")] * (sign * coeff)
        else:
            total = total + QuadNumber(sign * Fraction(t))
    return total


def format_scalar(x: QuadNumber) -> str:
    """Canonical textual form; parse_scalar(format_scalar(x)) == x."""
    parts: list[tuple[Fraction, str]] = []
    for coeff, name in ((x.a, ""), (x.b, "sqrt2"), (x.c, "sqrt3"), (x.d, "sqrt6")):
        if coeff != 0:
            parts.append((coeff, name))
    if not parts:
        return "0"
    out = ""
    for i, (coeff, name) in enumerate(parts):
        mag = abs(coeff)
        if name:
            body = name if mag == 1 else f"{mag}*{name}"
        else:
            body = str(mag)
        if i == 0:
            out = ("-" if coeff < 0 else "") + body
        else:
            out += (" - " if coeff < 0 else " + ") + body
    return out


def dot(u: tuple[QuadNumber, QuadNumber], v: tuple[QuadNumber, QuadNumber]) -> QuadNumber:
    return u[0] * v[0] + u[1] * v[1]


def cross(u: tuple[QuadNumber, QuadNumber], v: tuple[QuadNumber, QuadNumber]) -> QuadNumber:
    return u[0] * v[1] - u[1] * v[0]


def vec_sub(p, q):
    return (p[0] - q[0], p[1] - q[1])


def vec_add(p, q):
    return (p[0] + q[0], p[1] + q[1])


def vec_scale(k, p):
    k = QuadNumber.of(k)
    return (k * p[0], k * p[1])


def norm_sq(v) -> QuadNumber:
    return v[0] * v[0] + v[1] * v[1]
