"""Exact Gaussian integers, projective points over Z[i] and extended Mobius maps."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Union

IntLike = Union[int, "GaussianInteger"]


def _round_div(n: int, d: int) -> int:
    # nearest integer to n/d for d > 0, ties toward +inf
    return (2 * n + d) // (2 * d)


@dataclass(frozen=True, slots=True)
class GaussianInteger:
    re: int = 0
    im: int = 0

    @staticmethod
    def of(x: IntLike) -> "GaussianInteger":
        if isinstance(x, GaussianInteger):
            return x
        if isinstance(x, bool) or not isinstance(x, int):
            raise TypeError(f"cannot coerce {x!r} to a Gaussian integer")
        return GaussianInteger(x, 0)

    def __add__(self, other: IntLike) -> "GaussianInteger":
        o = GaussianInteger.of(other)
        return GaussianInteger(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other: IntLike) -> "GaussianInteger":
        o = GaussianInteger.of(other)
        return GaussianInteger(self.re - o.re, self.im - o.im)

    def __rsub__(self, other: IntLike) -> "GaussianInteger":
        return GaussianInteger.of(other) - self

    def __mul__(self, other: IntLike) -> "GaussianInteger":
        o = GaussianInteger.of(other)
        return GaussianInteger(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __neg__(self) -> "GaussianInteger":
        return GaussianInteger(-self.re, -self.im)

    def __bool__(self) -> bool:
        return self.re != 0 or self.im != 0

    def conj(self) -> "GaussianInteger":
        return GaussianInteger(self.re, -self.im)

    def norm(self) -> int:
        return self.re * self.re + self.im * self.im

    def __divmod__(self, other: IntLike) -> tuple["GaussianInteger", "GaussianInteger"]:
        """Nearest-integer division: the remainder has norm at most half the divisor's."""
        o = GaussianInteger.of(other)
        n = o.norm()
        if n == 0:
            raise ZeroDivisionError("Gaussian division by zero")
        num = self * o.conj()
        quo = GaussianInteger(_round_div(num.re, n), _round_div(num.im, n))
        return quo, self - quo * o

    def __floordiv__(self, other: IntLike) -> "GaussianInteger":
        return divmod(self, other)[0]

    def __mod__(self, other: IntLike) -> "GaussianInteger":
        return divmod(self, other)[1]

    def divides(self, other: IntLike) -> bool:
        o = GaussianInteger.of(other)
        if not self:
            return not o
        return not (o % self)

    def exact_div(self, other: IntLike) -> "GaussianInteger":
        q, r = divmod(self, other)
        if r:
            raise ArithmeticError(f"{other} does not divide {self}")
        return q

    def is_unit(self) -> bool:
        return self.norm() == 1

    def normalized(self) -> "GaussianInteger":
        """Associate in the quadrant re > 0, im >= 0 (zero stays zero)."""
        z = self
        for _ in range(4):
            if z.re > 0 and z.im >= 0:
                return z
            z = z * I
        return z

    def mod2(self) -> tuple[int, int]:
        return (self.re & 1, self.im & 1)

    def __complex__(self) -> complex:
        return complex(self.re, self.im)

    def __str__(self) -> str:
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            return {1: "i", -1: "-i"}.get(self.im, f"{self.im}i")
        sign = "+" if self.im > 0 else "-"
        mag = abs(self.im)
        return f"{self.re}{sign}{'' if mag == 1 else mag}i"


ZERO = GaussianInteger(0, 0)
ONE = GaussianInteger(1, 0)
I = GaussianInteger(0, 1)
UNITS = (ONE, I, -ONE, -I)


def gi(re: int = 0, im: int = 0) -> GaussianInteger:
    return GaussianInteger(re, im)


def gi_gcd(a: IntLike, b: IntLike) -> GaussianInteger:
    """Greatest common divisor, normalized to the quadrant re > 0, im >= 0."""
    a, b = GaussianInteger.of(a), GaussianInteger.of(b)
    if not a and not b:
        raise ValueError("gcd(0, 0) is undefined")
    while b:
        a, b = b, a % b
    return a.normalized()


@dataclass(frozen=True, slots=True)
class GaussianProjectivePoint:
    """A point p/q of the projective line over Q(i); (0, 0) is rejected."""

    p: GaussianInteger
    q: GaussianInteger

    def __post_init__(self):
        if not self.p and not self.q:
            raise ValueError("(0, 0) is not a projective point")

    @staticmethod
    def of(p: IntLike, q: IntLike = 1) -> "GaussianProjectivePoint":
        return GaussianProjectivePoint(GaussianInteger.of(p), GaussianInteger.of(q)).canonical()

    @staticmethod
    def from_rationals(x, y) -> "GaussianProjectivePoint":
        """The point x + iy for rationals x, y (ints, Fractions or decimal strings)."""
        fx, fy = Fraction(x), Fraction(y)
        den = fx.denominator * fy.denominator
        p = GaussianInteger(int(fx * den), int(fy * den))
        return GaussianProjectivePoint(p, GaussianInteger(den, 0)).canonical()

    def canonical(self) -> "GaussianProjectivePoint":
        g = gi_gcd(self.p, self.q)
        p, q = self.p.exact_div(g), self.q.exact_div(g)
        lead = q if q else p
        for u in UNITS:
            v = lead * u
            if v.re > 0 and v.im >= 0:
                return GaussianProjectivePoint(p * u, q * u)
        raise AssertionError("unreachable")

    def is_canonical(self) -> bool:
        return self == self.canonical()

    def is_infinity(self) -> bool:
        return not self.q

    def same_point(self, other: "GaussianProjectivePoint") -> bool:
        return self.p * other.q == self.q * other.p

    def real_imag(self) -> tuple[Fraction, Fraction]:
        if not self.q:
            raise ZeroDivisionError("the point at infinity has no coordinates")
        w = self.p * self.q.conj()
        n = self.q.norm()
        return Fraction(w.re, n), Fraction(w.im, n)

    def __complex__(self) -> complex:
        if not self.q:
            return complex("inf")
        x, y = self.real_imag()
        return complex(float(x), float(y))

    def __str__(self) -> str:
        if not self.q:
            return "inf"
        if self.q == ONE:
            return str(self.p)
        return f"({self.p})/({self.q})"


@dataclass(frozen=True, slots=True)
class ExtendedMobius:
    """z -> (a w + b)/(c w + d) with w = conj(z) when conjugates_first is set."""

    a: GaussianInteger
    b: GaussianInteger
    c: GaussianInteger
    d: GaussianInteger
    conjugates_first: bool = False

    def __post_init__(self):
        if not self.det():
            raise ValueError("singular Mobius matrix")

    @staticmethod
    def make(a: IntLike, b: IntLike, c: IntLike, d: IntLike, conj: bool = False) -> "ExtendedMobius":
        of = GaussianInteger.of
        return ExtendedMobius(of(a), of(b), of(c), of(d), conj)

    def entries(self) -> tuple[GaussianInteger, ...]:
        return (self.a, self.b, self.c, self.d)

    def det(self) -> GaussianInteger:
        return self.a * self.d - self.b * self.c

    def __matmul__(self, other: "ExtendedMobius") -> "ExtendedMobius":
        """Composition: (self @ other)(z) = self(other(z))."""
        a2, b2, c2, d2 = other.entries()
        if self.conjugates_first:
            a2, b2, c2, d2 = a2.conj(), b2.conj(), c2.conj(), d2.conj()
        return ExtendedMobius(
            self.a * a2 + self.b * c2,
            self.a * b2 + self.b * d2,
            self.c * a2 + self.d * c2,
            self.c * b2 + self.d * d2,
            self.conjugates_first != other.conjugates_first,
        )

    def inverse(self) -> "ExtendedMobius":
        a, b, c, d = self.d, -self.b, -self.c, self.a
        if self.conjugates_first:
            a, b, c, d = a.conj(), b.conj(), c.conj(), d.conj()
        return ExtendedMobius(a, b, c, d, self.conjugates_first)

    def projectively_equal(self, other: "ExtendedMobius") -> bool:
        if self.conjugates_first != other.conjugates_first:
            return False
        xs, ys = self.entries(), other.entries()
        return all(xs[i] * ys[j] == xs[j] * ys[i] for i in range(4) for j in range(i + 1, 4))

    def apply_pair(self, p: GaussianInteger, q: GaussianInteger) -> tuple[GaussianInteger, GaussianInteger]:
        if self.conjugates_first:
            p, q = p.conj(), q.conj()
        return self.a * p + self.b * q, self.c * p + self.d * q

    def __call__(self, z: GaussianProjectivePoint) -> GaussianProjectivePoint:
        return mobius_apply(self, z)

    def apply_complex(self, z: complex) -> complex:
        w = z.conjugate() if self.conjugates_first else z
        a, b, c, d = (complex(e) for e in self.entries())
        if w == complex("inf") or abs(w) == float("inf"):
            return a / c if c else complex("inf")
        den = c * w + d
        if den == 0:
            return complex("inf")
        return (a * w + b) / den

    def jacobian(self, z: complex) -> float:
        """Area scaling factor |g'(z)|^2 at a finite point."""
        w = z.conjugate() if self.conjugates_first else z
        c, d = complex(self.c), complex(self.d)
        return abs(complex(self.det())) ** 2 / abs(c * w + d) ** 4


IDENTITY = ExtendedMobius.make(1, 0, 0, 1)


def mobius_apply(t: ExtendedMobius, z: GaussianProjectivePoint) -> GaussianProjectivePoint:
    p, q = t.apply_pair(z.p, z.q)
    return GaussianProjectivePoint(p, q).canonical()


FIXED_POINTS: dict[str, GaussianProjectivePoint] = {
    "0": GaussianProjectivePoint(ZERO, ONE),
    "1": GaussianProjectivePoint(ONE, ONE),
    "inf": GaussianProjectivePoint(ONE, ZERO),
    "i": GaussianProjectivePoint(I, ONE),
    "1+i": GaussianProjectivePoint(GaussianInteger(1, 1), ONE),
    "1/(1-i)": GaussianProjectivePoint(ONE, GaussianInteger(1, -1)),
}
PARITY_LABELS = tuple(FIXED_POINTS)


def parity_class(z: GaussianProjectivePoint) -> str:
    """Label of the tangency point r/s with p*s = q*r (mod 2); the input is reduced first."""
    z = z.canonical()
    for label, w in FIXED_POINTS.items():
        if (z.p * w.q - z.q * w.p).mod2() == (0, 0):
            return label
    raise AssertionError("coprime pair outside the six parity classes")


def fixed_point_label(z: GaussianProjectivePoint) -> str | None:
    for label, w in FIXED_POINTS.items():
        if z.same_point(w):
            return label
    return None


def gaussian_integers_in_disk(radius_sq: int) -> Iterator[GaussianInteger]:
    r = 0
    while (r + 1) ** 2 <= radius_sq:
        r += 1
    for x in range(-r, r + 1):
        for y in range(-r, r + 1):
            if x * x + y * y <= radius_sq:
                yield GaussianInteger(x, y)
