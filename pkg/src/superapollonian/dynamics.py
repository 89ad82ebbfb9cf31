"""The planar reduction maps T_A and T_B, expansions, convergents and capture checks."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence, Union

from .gaussian import (
    FIXED_POINTS,
    ExtendedMobius,
    GaussianInteger,
    GaussianProjectivePoint,
    fixed_point_label,
    gi_gcd,
)
from .geometry import classify_complex, classify_pair
from .group import MOBIUS, Letter, Word, letter, word_mobius

PlanarPoint = Union[GaussianProjectivePoint, complex]

CAPTURE_CONSTANT = math.sqrt(2) / (1 + math.sqrt(2))
FORD_CONSTANT = 1 / math.sqrt(3)
DEFAULT_EPS = 1e-12

# integer coefficients (a, b, c, d) of each generator, applied to (conj p, conj q)
_COEFFS = {
    l: tuple((e.re, e.im) for e in m.entries()) for l, m in MOBIUS.items()
}


@dataclass(frozen=True)
class RegionLabel:
    side: str
    kind: str  # "circle" or "triangle"
    index: int

    def __str__(self) -> str:
        prime = "'" if self.kind == "triangle" else ""
        return f"{self.side}{self.index}{prime}"


def _region_letter(side: str, region: tuple[bool, int]) -> Letter:
    is_circle, k = region
    inversion = is_circle if side == "B" else not is_circle
    return letter(inversion, k)


def _check_side(side: str) -> None:
    if side not in ("A", "B"):
        raise ValueError("side must be 'A' or 'B'")


def classify(side: str, z: PlanarPoint, eps: float = DEFAULT_EPS) -> RegionLabel | None:
    """Region containing z, or None at one of the six tangency points."""
    _check_side(side)
    if isinstance(z, GaussianProjectivePoint):
        reg = classify_pair(side, z.p.re, z.p.im, z.q.re, z.q.im)
    else:
        reg, _ = classify_complex(side, complex(z), eps)
    if reg is None:
        return None
    return RegionLabel(side, "circle" if reg[0] else "triangle", reg[1])


def _apply_raw(l: Letter, pr: int, pi: int, qr: int, qi: int) -> tuple[int, int, int, int]:
    (ar, ai), (br, bi), (cr, ci), (dr, di) = _COEFFS[l]
    pi, qi = -pi, -qi
    return (ar * pr - ai * pi + br * qr - bi * qi,
            ar * pi + ai * pr + br * qi + bi * qr,
            cr * pr - ci * pi + dr * qr - di * qi,
            cr * pi + ci * pr + dr * qi + di * qr)


def step(side: str, z: PlanarPoint, eps: float = DEFAULT_EPS) -> tuple[Letter, PlanarPoint] | None:
    """One application of T_A or T_B; None when z is a tangency point."""
    _check_side(side)
    if isinstance(z, GaussianProjectivePoint):
        reg = classify_pair(side, z.p.re, z.p.im, z.q.re, z.q.im)
        if reg is None:
            return None
        l = _region_letter(side, reg)
        pr, pi, qr, qi = _apply_raw(l, z.p.re, z.p.im, z.q.re, z.q.im)
        return l, GaussianProjectivePoint(GaussianInteger(pr, pi), GaussianInteger(qr, qi))
    reg, _ = classify_complex(side, complex(z), eps)
    if reg is None:
        return None
    l = _region_letter(side, reg)
    return l, MOBIUS[l].apply_complex(complex(z))


@dataclass
class ExpansionResult:
    side: str
    word: Word
    terminal: str | None = None
    steps: int = 0
    truncated: bool = False
    boundary_hit: int | None = None  # index of the first letter that may be unreliable

    def to_json(self) -> dict:
        return {
            "side": self.side,
            "word": [l.name for l in self.word],
            "terminal": self.terminal,
            "steps": self.steps,
            "truncated": self.truncated,
            "boundary_hit": self.boundary_hit,
        }


def expand_exact(side: str, z: GaussianProjectivePoint, max_steps: int | None = None) -> ExpansionResult:
    _check_side(side)
    z = z.canonical()
    pr, pi, qr, qi = z.p.re, z.p.im, z.q.re, z.q.im
    word: list[Letter] = []
    while max_steps is None or len(word) < max_steps:
        reg = classify_pair(side, pr, pi, qr, qi)
        if reg is None:
            end = GaussianProjectivePoint(GaussianInteger(pr, pi), GaussianInteger(qr, qi))
            return ExpansionResult(side, tuple(word), fixed_point_label(end), len(word))
        l = _region_letter(side, reg)
        word.append(l)
        pr, pi, qr, qi = _apply_raw(l, pr, pi, qr, qi)
    return ExpansionResult(side, tuple(word), None, len(word), truncated=True)


def expand_float(side: str, z: complex, max_steps: int = 256, eps: float = DEFAULT_EPS) -> ExpansionResult:
    _check_side(side)
    z = complex(z)
    word: list[Letter] = []
    hit = None
    for _ in range(max_steps):
        reg, on_edge = classify_complex(side, z, eps)
        if on_edge and hit is None:
            hit = len(word)
        if reg is None:
            return ExpansionResult(side, tuple(word), None, len(word), False, hit)
        l = _region_letter(side, reg)
        word.append(l)
        z = MOBIUS[l].apply_complex(z)
        if not math.isfinite(z.real) or not math.isfinite(z.imag):
            if hit is None:
                hit = len(word)
            break
    return ExpansionResult(side, tuple(word), None, len(word), True, hit)


def expand(side: str, z: PlanarPoint, max_steps: int | None = None, eps: float = DEFAULT_EPS) -> ExpansionResult:
    if isinstance(z, GaussianProjectivePoint):
        return expand_exact(side, z, max_steps)
    return expand_float(side, complex(z), 256 if max_steps is None else max_steps, eps)


def reconstruct(word: Sequence[Letter], terminal: str) -> GaussianProjectivePoint:
    return word_mobius(word)(FIXED_POINTS[terminal])


def convergents(word: Sequence[Letter], n: int | None = None) -> dict[str, list[GaussianProjectivePoint]]:
    """Images of the six tangency points under each prefix of length 0..n."""
    n = len(word) if n is None else n
    if n > len(word):
        raise ValueError("prefix longer than the word")
    out = {label: [z] for label, z in FIXED_POINTS.items()}
    g = ExtendedMobius(GaussianInteger(1), GaussianInteger(0), GaussianInteger(0), GaussianInteger(1))
    for l in word[:n]:
        g = g @ MOBIUS[l]
        for label, z in FIXED_POINTS.items():
            out[label].append(g(z))
    return out


def _exact_point(z: PlanarPoint) -> GaussianProjectivePoint:
    if isinstance(z, GaussianProjectivePoint):
        return z.canonical()
    z = complex(z)
    return GaussianProjectivePoint.from_rationals(Fraction(z.real), Fraction(z.imag))


@dataclass
class CaptureReport:
    candidates: int
    misses: list[GaussianProjectivePoint]
    ford_candidates: int
    horizon: int
    status: str  # "ok", "miss" or "inconclusive"
    constant: float = CAPTURE_CONSTANT
    extra: dict = field(default_factory=dict)


def capture_check(z: PlanarPoint, qmax: int, constant: float = CAPTURE_CONSTANT, side: str = "B",
                  margin: int = 100, max_steps: int = 4000) -> CaptureReport:
    """Check that every good approximation p/q with norm(q) <= qmax^2 is a convergent.

    Float inputs are read as the exact binary rational they store.  The expansion is
    followed until all six convergent denominators exceed ``margin * qmax^2``.
    """
    pt = _exact_point(z)
    x, y = pt.real_imag()
    bound = qmax * qmax
    pr, pi, qr, qi = pt.p.re, pt.p.im, pt.q.re, pt.q.im
    g = ExtendedMobius(GaussianInteger(1), GaussianInteger(0), GaussianInteger(0), GaussianInteger(1))
    seen = {w.canonical() for w in FIXED_POINTS.values()}
    status = "inconclusive"
    steps = 0
    while steps < max_steps:
        reg = classify_pair(side, pr, pi, qr, qi)
        if reg is None:
            break
        l = _region_letter(side, reg)
        pr, pi, qr, qi = _apply_raw(l, pr, pi, qr, qi)
        g = g @ MOBIUS[l]
        steps += 1
        current = [g(w) for w in FIXED_POINTS.values()]
        seen.update(current)
        if min(c.q.norm() for c in current) > margin * bound:
            status = "ok"
            break

    misses, count, ford = [], 0, 0
    zc = complex(float(x), float(y))
    for a in range(1, qmax + 1):
        for b in range(0, qmax + 1):
            if a * a + b * b > bound:
                continue
            q = GaussianInteger(a, b)
            nq = a * a + b * b
            target = zc * complex(a, b)
            for u in range(math.floor(target.real) - 1, math.floor(target.real) + 3):
                for v in range(math.floor(target.imag) - 1, math.floor(target.imag) + 3):
                    # |z - p/q|^2 * |q|^4, exact except for the comparison constant
                    dx, dy = x * a - y * b - u, x * b + y * a - v
                    err = float((dx * dx + dy * dy) * nq)
                    if err >= constant ** 2 and err >= FORD_CONSTANT ** 2:
                        continue
                    p = GaussianInteger(u, v)
                    if gi_gcd(p, q).norm() != 1:
                        continue
                    if err < constant ** 2:
                        count += 1
                        if GaussianProjectivePoint(p, q).canonical() not in seen:
                            misses.append(GaussianProjectivePoint(p, q))
                    if err < FORD_CONSTANT ** 2:
                        ford += 1
    if misses:
        status = "miss"
    return CaptureReport(count, misses, ford, steps, status, constant)
