"""Circles in augmented curvature-center coordinates, base quadruples and Farey regions.

A circle is stored as (cocurvature, curvature, b1, b2) with curvature-center
b = b1 + i b2.  Its interior is where ``a|z|^2 - 2 Re(conj(b) z) + c < 0``;
for the base quadruple rows this picks out exactly the open regions B_i / A_i.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .gaussian import ExtendedMobius, GaussianInteger, GaussianProjectivePoint, FIXED_POINTS
from .group import (
    D2,
    DESCARTES,
    GRAM_DESCARTES,
    Letter,
    Word,
    is_invert_normal,
    is_swap_normal,
    normal_words,
    word_mobius,
    format_word,
)


@dataclass(frozen=True)
class AccCircle:
    cocurvature: Fraction
    curvature: Fraction
    b1: Fraction
    b2: Fraction

    @staticmethod
    def of(c, a, b1, b2) -> "AccCircle":
        return AccCircle(Fraction(c), Fraction(a), Fraction(b1), Fraction(b2))

    def as_row(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        return (self.cocurvature, self.curvature, self.b1, self.b2)

    def determinant_ok(self) -> bool:
        return self.curvature * self.cocurvature - self.b1 ** 2 - self.b2 ** 2 == -1

    @property
    def is_line(self) -> bool:
        return self.curvature == 0

    def center(self) -> tuple[Fraction, Fraction]:
        if self.is_line:
            raise ValueError("a line has no center")
        return self.b1 / self.curvature, self.b2 / self.curvature

    def radius(self) -> float:
        return abs(1 / float(self.curvature))

    def negated(self) -> "AccCircle":
        return AccCircle(-self.cocurvature, -self.curvature, -self.b1, -self.b2)

    def same_set(self, other: "AccCircle") -> bool:
        return self == other or self == other.negated()

    def value(self, x, y):
        """Signed defining form at the finite point x + iy (negative inside)."""
        a, c = self.curvature, self.cocurvature
        return a * (x * x + y * y) - 2 * (self.b1 * x + self.b2 * y) + c

    def value_at(self, z: GaussianProjectivePoint) -> Fraction:
        """Homogeneous form at p/q; the sign agrees with ``value`` and infinity is allowed."""
        w = z.p * z.q.conj()
        return (self.curvature * z.p.norm() - 2 * (self.b1 * w.re + self.b2 * w.im)
                + self.cocurvature * z.q.norm())

    def contains(self, z: GaussianProjectivePoint, closed: bool = False) -> bool:
        v = self.value_at(z)
        return v <= 0 if closed else v < 0

    def image(self, g: ExtendedMobius) -> "AccCircle":
        """Image circle under g, with the interior carried to the interior."""
        den = math.lcm(*(x.denominator for x in self.as_row()))
        a = int(self.curvature * den)
        c = int(self.cocurvature * den)
        b = GaussianInteger(int(self.b1 * den), int(self.b2 * den))
        if g.conjugates_first:
            b = b.conj()
        h = ((GaussianInteger(a), -b), (-b.conj(), GaussianInteger(c)))
        adj = ((g.d, -g.b), (-g.c, g.a))
        k = [[h[i][0] * adj[0][j] + h[i][1] * adj[1][j] for j in range(2)] for i in range(2)]
        out = [[adj[0][i].conj() * k[0][j] + adj[1][i].conj() * k[1][j] for j in range(2)] for i in range(2)]
        scale = den * g.det().norm()
        bn = -out[0][1]
        return AccCircle(Fraction(out[1][1].re, scale), Fraction(out[0][0].re, scale),
                         Fraction(bn.re, scale), Fraction(bn.im, scale))


@dataclass(frozen=True)
class AccQuadruple:
    rows: tuple[AccCircle, AccCircle, AccCircle, AccCircle]

    @staticmethod
    def from_matrix(m: Sequence[Sequence]) -> "AccQuadruple":
        return AccQuadruple(tuple(AccCircle.of(*r) for r in m))

    def matrix(self) -> tuple[tuple[Fraction, ...], ...]:
        return tuple(r.as_row() for r in self.rows)

    def __getitem__(self, i: int) -> AccCircle:
        return self.rows[i]


CONFIG_MATRIX = ((0, -4, 0, 0), (-4, 0, 0, 0), (0, 0, 2, 0), (0, 0, 0, 2))
# the identity holds for the normalized Descartes form -G_D / 2
_CONFIG_SCALED = tuple(tuple(-2 * x for x in row) for row in CONFIG_MATRIX)

R_B = AccQuadruple.from_matrix([(0, 0, 0, -1), (2, 0, 0, 1), (0, 2, 0, 1), (2, 2, 2, 1)])
R_A = AccQuadruple.from_matrix([(2, 2, 1, 2), (0, 2, 1, 0), (2, 0, 1, 0), (0, 0, -1, 0)])


def base_quadruples() -> tuple[AccQuadruple, AccQuadruple]:
    return R_B, R_A


def _mul(x: Sequence[Sequence], y: Sequence[Sequence]) -> tuple:
    cols = list(zip(*y))
    return tuple(tuple(sum(a * b for a, b in zip(row, col)) for col in cols) for row in x)


def config_check(q: AccQuadruple) -> bool:
    c = q.matrix()
    ct = tuple(zip(*c))
    return _mul(_mul(ct, GRAM_DESCARTES), c) == _CONFIG_SCALED


def act_on_quadruple(w: Sequence[Letter], q: AccQuadruple, check: bool = True) -> AccQuadruple:
    """Rows of M(m_n) ... M(m_1) q; on R_B these are the circles m_1 ... m_n(c_i)."""
    m = q.matrix()
    for l in w:
        m = _mul(DESCARTES[l], m)
    out = AccQuadruple.from_matrix(m)
    if check and not config_check(out):
        raise ArithmeticError("Descartes configuration violated")
    return out


def dual_quadruple(q: AccQuadruple) -> AccQuadruple:
    m = _mul(D2, q.matrix())
    return AccQuadruple.from_matrix([[x / 2 for x in row] for row in m])


def tangency_point(c1: AccCircle, c2: AccCircle) -> GaussianProjectivePoint:
    """Point of contact of two externally tangent oriented circles."""
    a = c1.curvature + c2.curvature
    if a == 0:
        z = GaussianProjectivePoint(GaussianInteger(1), GaussianInteger(0))
    else:
        bx, by = (c1.b1 + c2.b1) / a, (c1.b2 + c2.b2) / a
        z = GaussianProjectivePoint.from_rationals(bx, by)
    if c1.value_at(z) != 0 or c2.value_at(z) != 0:
        raise ArithmeticError("circles are not tangent with compatible orientation")
    return z


def tangency_points(q: AccQuadruple) -> dict[tuple[int, int], GaussianProjectivePoint]:
    return {(i, j): tangency_point(q[i], q[j]) for i in range(4) for j in range(i + 1, 4)}


# -- exact region predicates ---------------------------------------------------------

def _int_rows(q: AccQuadruple) -> tuple[tuple[int, int, int, int], ...]:
    return tuple(tuple(int(x) for x in r.as_row()) for r in q.rows)


_RB_INT = _int_rows(R_B)
_RA_INT = _int_rows(R_A)


def _form(row, pn: int, qn: int, x: int, y: int) -> int:
    c, a, b1, b2 = row
    return a * pn - 2 * (b1 * x + b2 * y) + c * qn


def is_fixed_pair(pr: int, pi: int, qr: int, qi: int) -> bool:
    # 0, inf, 1, i, 1+i, 1/(1-i)
    if (pr == 0 and pi == 0) or (qr == 0 and qi == 0):
        return True
    if pr == qr and pi == qi:
        return True
    if pr == -qi and pi == qr:
        return True
    if pr == qr - qi and pi == qr + qi:
        return True
    return 2 * pr == qr - qi and 2 * pi == qr + qi


def classify_pair(side: str, pr: int, pi: int, qr: int, qi: int) -> tuple[bool, int] | None:
    """Region of p/q as (is_circle, index 1..4); None for the six tangency points."""
    if is_fixed_pair(pr, pi, qr, qi):
        return None
    pn = pr * pr + pi * pi
    qn = qr * qr + qi * qi
    x = pr * qr + pi * qi
    y = pi * qr - pr * qi
    circles, duals = (_RB_INT, _RA_INT) if side == "B" else (_RA_INT, _RB_INT)
    for k, row in enumerate(circles):
        if _form(row, pn, qn, x, y) < 0:
            return True, k + 1
    for k, row in enumerate(duals):
        if _form(row, pn, qn, x, y) <= 0:
            return False, k + 1
    raise AssertionError("point outside every region")


def classify_complex(side: str, z: complex, eps: float = 1e-12) -> tuple[tuple[bool, int] | None, bool]:
    """Float classification; returns (region, boundary_hit).  Triangles win ties."""
    x, y = z.real, z.imag
    for label, w in FIXED_POINTS.items():
        if label == "inf":
            continue
        if abs(z - complex(w)) <= eps:
            return None, True
    circles, duals = (_RB_INT, _RA_INT) if side == "B" else (_RA_INT, _RB_INT)
    pn = x * x + y * y
    vals = [_form(row, pn, 1.0, x, y) for row in circles]
    scale = eps * max(1.0, pn)
    hit = any(abs(v) <= scale for v in vals)
    for k, v in enumerate(vals):
        if v < -scale:
            return (True, k + 1), hit
    dvals = [_form(row, pn, 1.0, x, y) for row in duals]
    k = min(range(4), key=lambda j: dvals[j])
    return (False, k + 1), hit or abs(dvals[k]) <= scale


# -- Farey regions -----------------------------------------------------------------------

@dataclass(frozen=True)
class FareyRegion:
    side: str
    word: Word
    kind: str  # "circle" or "triangle"
    index: int
    prefix: ExtendedMobius = field(repr=False)
    circle: AccCircle | None = None
    vertices: tuple[GaussianProjectivePoint, ...] = ()
    arcs: tuple[AccCircle, ...] = ()
    dual: AccCircle | None = None

    def contains(self, z: GaussianProjectivePoint) -> bool:
        w = self.prefix.inverse()(z)
        got = classify_pair(self.side, w.p.re, w.p.im, w.q.re, w.q.im)
        return got == (self.kind == "circle", self.index)

    def outline(self) -> AccCircle:
        """Farey circle, or the circle through the three vertices of a Farey triangle."""
        return self.circle if self.kind == "circle" else self.dual


def farey_region(w: Sequence[Letter], side: str = "B") -> FareyRegion:
    w = tuple(w)
    if not w:
        raise ValueError("Farey regions need a nonempty word")
    normal = is_swap_normal(w) if side == "B" else is_invert_normal(w)
    if not normal:
        raise ValueError(f"word {format_word(w)} is not in the normal form for side {side}")
    last = w[-1]
    g = word_mobius(w[:-1])
    own, other = (R_B, R_A) if side == "B" else (R_A, R_B)
    i = last.index - 1
    is_circle = last.is_inversion if side == "B" else last.is_swap
    if is_circle:
        return FareyRegion(side, w, "circle", last.index, g, circle=own[i].image(g))
    bounding = [own[j] for j in range(4) if j != i]
    verts = tuple(
        tangency_point(bounding[s], bounding[t]) for s, t in ((0, 1), (0, 2), (1, 2))
    )
    return FareyRegion(
        side, w, "triangle", last.index, g,
        vertices=tuple(g(v) for v in verts),
        arcs=tuple(c.image(g) for c in bounding),
        dual=other[i].image(g),
    )


# -- rendering ----------------------------------------------------------------------------

def _disk_meets_rect(c: AccCircle, rect: tuple[Fraction, ...]) -> bool:
    x0, y0, x1, y1 = rect
    if c.is_line:
        return any(c.value(x, y) < 0 for x in (x0, x1) for y in (y0, y1))
    cx, cy = c.center()
    dx = max(x0 - cx, Fraction(0), cx - x1)
    dy = max(y0 - cy, Fraction(0), cy - y1)
    if c.curvature > 0:
        return dx * dx + dy * dy < 1 / c.curvature ** 2
    # negative curvature: the interior is the outside of the circle
    far = max((x - cx) ** 2 + (y - cy) ** 2 for x in (x0, x1) for y in (y0, y1))
    return far > 1 / c.curvature ** 2


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def _line_segment(c: AccCircle, rect) -> tuple[tuple[float, float], tuple[float, float]] | None:
    # points with b1 x + b2 y = c / 2, clipped to the rectangle
    x0, y0, x1, y1 = (float(v) for v in rect)
    n1, n2, k = float(c.b1), float(c.b2), float(c.cocurvature) / 2
    pts = []
    if abs(n2) > 1e-15:
        for x in (x0, x1):
            y = (k - n1 * x) / n2
            if y0 - 1e-12 <= y <= y1 + 1e-12:
                pts.append((x, y))
    if abs(n1) > 1e-15:
        for y in (y0, y1):
            x = (k - n2 * y) / n1
            if x0 - 1e-12 <= x <= x1 + 1e-12:
                pts.append((x, y))
    pts = sorted(set((round(a, 12), round(b, 12)) for a, b in pts))
    if len(pts) < 2:
        return None
    return pts[0], pts[-1]


def render_elements(depth: int, viewport=(0, 0, 1, 1), side: str = "B") -> list[tuple[Word, str, AccCircle]]:
    """Outline circles of all Farey regions with words of length <= depth meeting the viewport."""
    rect = tuple(Fraction(v) for v in viewport)
    out = []
    for n in range(1, depth + 1):
        for w in normal_words(n, "swap" if side == "B" else "invert"):
            reg = farey_region(w, side)
            c = reg.outline()
            if _disk_meets_rect(c, rect):
                out.append((w, reg.kind, c))
    out.sort(key=lambda e: format_word(e[0]))
    return out


def render_svg(depth: int, viewport=(0, 0, 1, 1), side: str = "B", size: int = 800,
               max_depth: int = 7, elements=None) -> str:
    """SVG 1.1 drawing with one element per Farey region outline."""
    if depth > max_depth:
        raise ValueError(f"depth {depth} exceeds the configured maximum {max_depth}")
    if elements is None:
        elements = render_elements(depth, viewport, side) if depth > 0 else []
    x0, y0, x1, y1 = (float(v) for v in viewport)
    scale = size / max(x1 - x0, y1 - y0)
    width, height = (x1 - x0) * scale, (y1 - y0) * scale

    def sx(x: float) -> float:
        return (x - x0) * scale

    def sy(y: float) -> float:
        return (y1 - y) * scale

    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{_fmt(width)}" '
        f'height="{_fmt(height)}" viewBox="0 0 {_fmt(width)} {_fmt(height)}">',
        f'<rect x="0" y="0" width="{_fmt(width)}" height="{_fmt(height)}" fill="white"/>',
    ]
    for w, kind, c in elements:
        attrs = (f'data-word="{format_word(w)}" data-kind="{kind}" '
                 f'data-curvature="{c.curvature}"')
        stroke = "#1f4e9c" if kind == "circle" else "#c0392b"
        style = f'fill="none" stroke="{stroke}" stroke-width="0.6"'
        if c.is_line:
            seg = _line_segment(c, viewport)
            if seg is None:
                continue
            (ax, ay), (bx, by) = seg
            lines.append(f'<line x1="{_fmt(sx(ax))}" y1="{_fmt(sy(ay))}" x2="{_fmt(sx(bx))}" '
                         f'y2="{_fmt(sy(by))}" {style} {attrs}/>')
        else:
            cx, cy = c.center()
            lines.append(f'<circle cx="{_fmt(sx(float(cx)))}" cy="{_fmt(sy(float(cy)))}" '
                         f'r="{_fmt(c.radius() * scale)}" {style} {attrs}/>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
