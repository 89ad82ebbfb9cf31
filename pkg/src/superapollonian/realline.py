"""Reflections in the ideal triangle 0, 1, infinity and the Euclidean algorithms they give."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

Real = Union[Fraction, int, float]
INF = math.inf

LETTERS = ("a", "b", "c")


# -- the three-branch map t ---------------------------------------------------------

def _is_fixed(x: Real) -> bool:
    return x == 0 or x == 1 or (isinstance(x, float) and math.isinf(x))


def t_real(x: Real) -> tuple[str, Real] | None:
    """One step of t; None at the fixed points 0, 1 and infinity."""
    if _is_fixed(x):
        return None
    if x < 0:
        return "a", -x
    if x < 1:
        den = 2 * x - 1
        return "b", (x / den if den else INF)
    return "c", 2 - x


def real_expand(x: Real, max_steps: int | None = None) -> tuple[str, Real | None]:
    """Letters of the t-orbit of x and the fixed point reached (None if truncated)."""
    if isinstance(x, int):
        x = Fraction(x)
    word = []
    while max_steps is None or len(word) < max_steps:
        nxt = t_real(x)
        if nxt is None:
            return "".join(word), x
        word.append(nxt[0])
        x = nxt[1]
    return "".join(word), None


def apply_letter(letter: str, x: Fraction | float) -> Fraction | float:
    """The Mobius map a, b or c itself, defined on the whole line."""
    if letter == "a":
        return -x
    if letter == "b":
        den = 2 * x - 1
        return x / den if den else INF
    if letter == "c":
        return 2 - x
    raise ValueError(f"unknown letter {letter!r}")


# -- convergent triples ------------------------------------------------------------

Pair = tuple[int, int]


def pair_value(r: Pair) -> float:
    p, q = r
    return p / q if q else math.copysign(INF, p)


def pair_fraction(r: Pair) -> Fraction | None:
    p, q = r
    return Fraction(p, q) if q else None


def mediant(r: Pair, s: Pair) -> Pair:
    return (r[0] + s[0], r[1] + s[1])


def mediant_convergents(word: Sequence[str], negative: bool = False) -> list[tuple[Pair, Pair, Pair]]:
    """Triples (g(1), g(inf), g(0)) for each prefix g of the word, built from mediants.

    Letter a, b or c replaces the first, second or third entry by the mediant of the
    other two.  Pairs are kept as unreduced (p, q) so infinity keeps its sign.
    """
    cur = [(1, 1), (-1 if negative else 1, 0), (0, 1)]
    out = [tuple(cur)]
    prev = None
    for l in word:
        if l == prev:
            raise ValueError("consecutive letters must differ")
        k = LETTERS.index(l)
        others = [cur[j] for j in range(3) if j != k]
        cur[k] = mediant(*others)
        out.append(tuple(cur))
        prev = l
    return out


def farey_determinants(triple: tuple[Pair, Pair, Pair]) -> tuple[int, int, int]:
    det = lambda r, s: r[0] * s[1] - r[1] * s[0]
    a, b, c = triple
    return det(a, b), det(b, c), det(a, c)


def simple_cf_convergents(x: Fraction, qmax: int) -> list[Fraction]:
    """Classical continued fraction convergents of x with denominator at most qmax."""
    out = []
    h0, h1, k0, k1 = 0, 1, 1, 0
    y = x
    while True:
        a = math.floor(y)
        h0, h1 = h1, a * h1 + h0
        k0, k1 = k1, a * k1 + k0
        if k1 > qmax:
            break
        out.append(Fraction(h1, k1))
        frac = y - a
        if frac == 0:
            break
        y = 1 / frac
    return out


# -- invariant density and return time -----------------------------------------------

def real_density(x: float) -> float:
    """Density of the infinite invariant measure of t."""
    if x == 0 or x == 1:
        raise ValueError("the density is singular at 0 and 1")
    if x < 0:
        return -1 / x
    if x < 1:
        return 1 / (x * (1 - x))
    return 1 / (x - 1)


def return_time(y: float, x: float) -> float:
    """Return time of the geodesic from y < 0 to x > 1."""
    if not (y < 0 and x > 1):
        raise ValueError("return time is defined here for y < 0 < 1 < x")
    return 0.5 * math.log(x * (1 - y) / (y * (1 - x)))


def return_time_integral(epsabs: float = 1e-11, epsrel: float = 1e-11) -> tuple[float, float]:
    """Integral of the return time against dx dy / (x - y)^2, with its error estimate."""
    from scipy import integrate

    # y = -s/(1-s) and x = 1/v map both ranges onto (0, 1)
    def integrand(v: float, s: float) -> float:
        y = -s / (1 - s)
        x = 1 / v
        jac = 1 / ((1 - s) ** 2 * v * v)
        return return_time(y, x) * jac / (x - y) ** 2

    return integrate.dblquad(integrand, 0, 1, 0, 1, epsabs=epsabs, epsrel=epsrel)


# -- homogeneous Euclidean algorithms ------------------------------------------------

@dataclass
class EuclidTrace:
    states: list[tuple[int, int]]
    letters: str
    gcd: int
    bezout: tuple[int, int]  # (u, v) with u p + v q = the nonzero terminal entry

    @property
    def steps(self) -> int:
        return len(self.letters)

    def to_json(self) -> dict:
        return {"states": [list(s) for s in self.states], "letters": self.letters,
                "gcd": self.gcd, "bezout": list(self.bezout), "steps": self.steps}


def euclid_step(p: int, q: int) -> tuple[str, tuple[int, int]] | None:
    if p == q or p == 0 or q == 0:
        return None
    if (p < 0) != (q < 0):
        return "a", (-p, q)
    if abs(p) < abs(q):
        return "b", (p, 2 * p - q)
    return "c", (2 * q - p, q)


# each step is linear: new (p, q) = M (p, q)
_EUCLID_MATRICES = {"a": ((-1, 0), (0, 1)), "b": ((1, 0), (2, -1)), "c": ((-1, 2), (0, 1))}


def euclid_reduce(p: int, q: int) -> EuclidTrace:
    """Run the reflective Euclidean algorithm and recover Bezout coefficients."""
    if p == 0 and q == 0:
        raise ValueError("(0, 0) has no gcd")
    states = [(p, q)]
    letters = []
    while (nxt := euclid_step(*states[-1])) is not None:
        letters.append(nxt[0])
        states.append(nxt[1])
    fp, fq = states[-1]
    # pick the coordinate holding +-gcd (either one when p = q)
    idx = 1 if fp == 0 else 0
    # back-substitute: row vector r with r . (current state) = terminal entry
    r = (1, 0) if idx == 0 else (0, 1)
    for l in reversed(letters):
        m = _EUCLID_MATRICES[l]
        r = (r[0] * m[0][0] + r[1] * m[1][0], r[0] * m[0][1] + r[1] * m[1][1])
    g = (fp, fq)[idx]
    return EuclidTrace(states, "".join(letters), abs(g), r)


def romik_step(p: int, q: int) -> tuple[str, tuple[int, int]] | None:
    if q == 0 or p == q:
        return None
    r = p - 2 * q
    if r > q:
        return "a", (r, q)
    if r > 0:
        return "b", (q, r)
    return "c", (q, 2 * q - p)


def romik_euclid(p: int, q: int) -> EuclidTrace:
    """The comparison algorithm on pairs p > q >= 0."""
    if not p > q >= 0:
        raise ValueError("need p > q >= 0")
    states = [(p, q)]
    letters = []
    while (nxt := romik_step(*states[-1])) is not None:
        letters.append(nxt[0])
        states.append(nxt[1])
    return EuclidTrace(states, "".join(letters), states[-1][0], (0, 0))


# -- Pythagorean triples and the circle ----------------------------------------------

# keyed by the letter of t each branch is conjugate to under line_to_circle
TRIPLE_MATRICES = {
    "a": ((1, 0, 0), (0, -1, 0), (0, 0, 1)),
    "b": ((3, 2, 2), (-2, -1, -2), (-2, -2, -1)),
    "c": ((3, 2, -2), (-2, -1, 2), (2, 2, -1)),
}


def _triple_letter(b, c) -> str | None:
    if b > 0:
        return "a"
    if b < 0 and c < 0:
        return "b"
    if b < 0 and c > 0:
        return "c"
    return None


def triple_system_step(t: Sequence[int]) -> tuple[str, tuple[int, int, int]] | None:
    """Reduce a Pythagorean triple a^2 = b^2 + c^2; None at (g,-g,0) or (g,0,+-g)."""
    a, b, c = t
    l = _triple_letter(b, c)
    if l is None:
        return None
    m = TRIPLE_MATRICES[l]
    return l, tuple(sum(x * y for x, y in zip(row, t)) for row in m)


def triple_reduce(t: Sequence[int]) -> tuple[str, list[tuple[int, int, int]]]:
    a, b, c = t
    if a <= 0 or a * a != b * b + c * c:
        raise ValueError(f"{tuple(t)} is not a Pythagorean triple with a > 0")
    states = [tuple(t)]
    letters = []
    while (nxt := triple_system_step(states[-1])) is not None:
        letters.append(nxt[0])
        states.append(nxt[1])
    return "".join(letters), states


def pyth_circle_step(x, y):
    """The triple map divided by a, acting on the unit circle."""
    l = _triple_letter(x, y)
    if l is None:
        return None
    m = TRIPLE_MATRICES[l]
    top = m[0][0] + m[0][1] * x + m[0][2] * y
    return l, ((m[1][0] + m[1][1] * x + m[1][2] * y) / top,
               (m[2][0] + m[2][1] * x + m[2][2] * y) / top)


def line_to_circle(r):
    """Coordinate change carrying t to the circle map; infinity goes to (0, 1)."""
    if isinstance(r, float) and math.isinf(r):
        return (0.0, 1.0)
    den = 1 + r * r
    return (-2 * r / den, (r * r - 1) / den)
