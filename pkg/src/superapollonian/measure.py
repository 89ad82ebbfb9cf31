"""Invariant densities of T_A and T_B, region measures, the sphere transfer operator
and closed-form frequency predictions."""

from __future__ import annotations

import cmath
import functools
import math
import warnings
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy import integrate

from .gaussian import ExtendedMobius, GaussianInteger
from .geometry import R_A, R_B, classify_complex
from .group import INVERSIONS, LORENTZ, MOBIUS, SWAPS, Letter, letter, word_mobius

Region = tuple[bool, int]  # (is_circle, index 1..4)

TOTAL_MEASURE = 2 * math.pi ** 2
REGION_MEASURE = math.pi ** 2 / 4

# rho(w) = i w + 1 carries T_A to T_B and the A regions onto the B regions
RHO = ExtendedMobius.make(GaussianInteger(0, 1), 1, 0, 1)
RHO_INVERSE = RHO.inverse()
A_TO_B_INDEX = {1: 3, 2: 4, 3: 2, 4: 1}
B_TO_A_INDEX = {v: k for k, v in A_TO_B_INDEX.items()}


def rho(w: complex) -> complex:
    return 1j * w + 1


def rho_inverse(v: complex) -> complex:
    return -1j * (v - 1)


# -- closed-form density of T_B ----------------------------------------------------------

def _edge_term(x: float, y: float) -> float:
    """atan(x/y)/(4x^2) - 1/(4xy), with its removable singularity at x = 0."""
    t = x / y
    if abs(t) < 0.05:
        # atan(t) - t = sum_{k>=1} (-1)^k t^(2k+1)/(2k+1)
        s, p = 0.0, t ** 3
        for k in range(1, 9):
            s += (-1) ** k * p / (2 * k + 1)
            p *= t * t
        return s / (4 * x * x) if x else 0.0
    return math.atan(t) / (4 * x * x) - 1 / (4 * x * y)


def _half_plane_density(x: float, y: float) -> float:
    return _edge_term(x, y) + _edge_term(1 - x, y) + _edge_term(x * x - x + y * y, y)


def _disk_density(x: float, y: float) -> float:
    inside = y * y - y + x * x
    if abs(inside) < 1e-13:
        # on the boundary circle the three terms cancel; step toward the centre
        x, y = x * (1 - 1e-7), 0.5 + (y - 0.5) * (1 - 1e-7)
        inside = y * y - y + x * x
        if abs(inside) < 1e-15:
            return 0.0
    return (_edge_term(x, inside) + _edge_term(x * x - x + y * y, inside)
            + _edge_term(x * x - x + (1 - y) ** 2, inside))


def density_in_region(region: Region, z: complex) -> float:
    """The T_B density formula attached to a B region, evaluated at z.

    Returns 0 at the few points where a formula divides by zero; those lie on
    region boundaries and carry no mass.
    """
    is_circle, k = region
    x, y = z.real, z.imag
    try:
        if is_circle:
            if k == 1:
                return _half_plane_density(x, y)
            if k == 2:
                return _half_plane_density(x, 1 - y)
            if k == 3:
                return _disk_density(x, y)
            return _disk_density(1 - x, y)
        if k == 1:
            d2 = (x - 0.5) ** 2 + (y - 1) ** 2
            return math.pi / (4 * (0.25 - d2) ** 2)
        if k == 2:
            d2 = (x - 0.5) ** 2 + y ** 2
            return math.pi / (4 * (0.25 - d2) ** 2)
        if k == 3:
            return math.pi / (4 * (1 - x) ** 2)
        return math.pi / (4 * x * x)
    except ZeroDivisionError:
        return 0.0


def f_b(z: complex) -> float:
    """Density of the invariant measure of T_B; infinite at the six fixed points."""
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        return math.inf
    reg, _ = classify_complex("B", z, 0.0)
    if reg is None:
        return math.inf
    return density_in_region(reg, z)


def f_a(w: complex) -> float:
    """Density of the invariant measure of T_A, pulled back from f_b by rho."""
    return f_b(rho(complex(w)))


def density(side: str, z: complex) -> float:
    if side == "B":
        return f_b(z)
    if side == "A":
        return f_a(z)
    raise ValueError("side must be 'A' or 'B'")


def density_grid(side: str, xs: Sequence[float], ys: Sequence[float]) -> np.ndarray:
    """Density values on a grid, indexed [row for y, column for x]."""
    return np.array([[density(side, complex(x, y)) for x in xs] for y in ys])


# -- independent check: integrate |z - w|^-4 over the partner regions ----------------------

_ALL_ROWS = [tuple(float(v) for v in c.as_row()) for q in (R_A, R_B) for c in q.rows]


def _ray_crossings(z: complex, u: complex) -> list[float]:
    out = []
    for c, a, b1, b2 in _ALL_ROWS:
        bz = b1 * z.real + b2 * z.imag
        bu = b1 * u.real + b2 * u.imag
        qa = a
        qb = 2 * (a * (z.real * u.real + z.imag * u.imag) - bu)
        qc = a * abs(z) ** 2 - 2 * bz + c
        if qa == 0:
            if qb != 0 and -qc / qb > 1e-14:
                out.append(-qc / qb)
            continue
        disc = qb * qb - 4 * qa * qc
        if disc > 0:
            s = math.sqrt(disc)
            out.extend(r for r in ((-qb - s) / (2 * qa), (-qb + s) / (2 * qa)) if r > 1e-14)
    return sorted(out)


def partner_regions(region: Region) -> set[Region]:
    """Regions on the other side that a geodesic from this region may end in."""
    is_circle, i = region
    if is_circle:
        return {(True, i)} | {(False, j) for j in range(1, 5) if j != i}
    return {(False, j) for j in range(1, 5)} | {(True, j) for j in range(1, 5) if j != i}


def density_by_integration(side: str, z: complex, epsabs: float = 1e-11) -> tuple[float, float]:
    """Density at z computed directly from the geodesic measure, in polar coordinates.

    Along each ray from z the partner-region segments are found exactly, and each
    contributes the radial integral of r^-3.  Returns (value, error estimate).
    """
    z = complex(z)
    reg, _ = classify_complex(side, z, 0.0)
    if reg is None:
        return math.inf, 0.0
    targets = partner_regions(reg)
    other = "A" if side == "B" else "B"

    def along(theta: float) -> float:
        u = cmath.exp(1j * theta)
        rs = [0.0] + _ray_crossings(z, u) + [math.inf]
        total = 0.0
        for r0, r1 in zip(rs, rs[1:]):
            if r1 - r0 < 1e-15:
                continue
            mid = z + u * ((r0 + r1) / 2 if r1 < math.inf else 2 * r0 + 1)
            got, _ = classify_complex(other, mid, 0.0)
            if got in targets:
                inner = 1 / (2 * r0 * r0) if r0 > 0 else math.inf
                outer = 0.0 if r1 == math.inf else 1 / (2 * r1 * r1)
                total += inner - outer
        return total

    return integrate.quad(along, 0, 2 * math.pi, limit=800, epsabs=epsabs, epsrel=epsabs)


# -- region and Farey measures ------------------------------------------------------------

def _disk_halfwidth(y: float) -> float:
    return math.sqrt(max(0.0, 0.25 - (y - 0.5) ** 2))


_INF = math.inf
# (y_low, y_high, x_low(y), x_high(y)) for each B region
B_REGION_LIMITS: dict[Region, tuple] = {
    (True, 1): (-_INF, 0.0, lambda y: -_INF, lambda y: _INF),
    (True, 2): (1.0, _INF, lambda y: -_INF, lambda y: _INF),
    (True, 3): (0.0, 1.0, lambda y: -_disk_halfwidth(y), _disk_halfwidth),
    (True, 4): (0.0, 1.0, lambda y: 1 - _disk_halfwidth(y), lambda y: 1 + _disk_halfwidth(y)),
    (False, 1): (0.5, 1.0, _disk_halfwidth, lambda y: 1 - _disk_halfwidth(y)),
    (False, 2): (0.0, 0.5, _disk_halfwidth, lambda y: 1 - _disk_halfwidth(y)),
    (False, 3): (0.0, 1.0, lambda y: 1 + _disk_halfwidth(y), lambda y: _INF),
    (False, 4): (0.0, 1.0, lambda y: -_INF, lambda y: -_disk_halfwidth(y)),
}


class QuadratureError(RuntimeError):
    def __init__(self, value: float, error: float, target: float):
        super().__init__(f"quadrature reached error {error:.3g}, target {target:.3g}")
        self.value, self.error, self.target = value, error, target


def integrate_over_b_region(func: Callable[[complex], float], region: Region,
                            epsabs: float = 1e-10, epsrel: float = 1e-10) -> tuple[float, float]:
    y0, y1, xlo, xhi = B_REGION_LIMITS[region]
    # inner slices grazing a disk boundary warn; region_measure cross-checks the disks instead
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        return integrate.dblquad(lambda x, y: func(complex(x, y)), y0, y1, xlo, xhi,
                                 epsabs=epsabs, epsrel=epsrel)


def to_b_region(side: str, region: Region) -> Region:
    return region if side == "B" else (region[0], A_TO_B_INDEX[region[1]])


def region_measure(side: str, region: Region, tol: float = 1e-6) -> float:
    """Measure of a base region by adaptive quadrature of its density.

    A regions are integrated through rho, which carries them onto B regions and has
    unit Jacobian.  Raises QuadratureError if the error estimate misses ``tol``.
    """
    breg = to_b_region(side, region)
    value, err = _base_region_integral(breg)
    # the disk regions report a pessimistic estimate; accept it when the
    # y-sliced integral agrees with an x-sliced one
    if err > tol:
        other = _cross_check(breg)
        if abs(other - value) > tol:
            raise QuadratureError(value, max(err, abs(other - value)), tol)
    return value


@functools.lru_cache(maxsize=None)
def _base_region_integral(region: Region) -> tuple[float, float]:
    return integrate_over_b_region(lambda z: density_in_region(region, z), region)


@functools.lru_cache(maxsize=None)
def _cross_check(region: Region) -> float:
    """Disk measure integrated in polar coordinates about the disk centre."""
    is_circle, k = region
    if not is_circle or k not in (3, 4):
        raise ValueError("cross-check is only set up for the two disk regions")
    cx = 0.0 if k == 3 else 1.0
    centre = complex(cx, 0.5)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        val, _ = integrate.dblquad(
            lambda r, t: r * density_in_region(region, centre + r * cmath.exp(1j * t)),
            0, 2 * math.pi, 0, 0.5, epsabs=1e-11, epsrel=1e-11)
    return val


def first_letter_region(side: str, l: Letter) -> Region:
    """Region on which the expansion map uses the letter l."""
    circle = l.is_inversion if side == "B" else l.is_swap
    return circle, l.index


def farey_measure(word: Sequence[Letter], side: str = "B",
                  epsabs: float = 1e-11, epsrel: float = 1e-10) -> float:
    """Measure of the Farey region of a normal-form word.

    The region is g(R) where g is the word without its last letter and R the base
    region of that letter; we integrate density(g u) |g'(u)|^2 over R.  The whole
    region sits inside the region of the first letter, so that density formula
    is used throughout.
    """
    word = tuple(word)
    if not word:
        raise ValueError("need a nonempty word")
    g = word_mobius(word[:-1])
    home = to_b_region(side, first_letter_region(side, word[0]))
    base = to_b_region(side, first_letter_region(side, word[-1]))
    if side == "B":
        def func(u: complex) -> float:
            v = g.apply_complex(u)
            return density_in_region(home, v) * g.jacobian(u)
    else:
        def func(u: complex) -> float:
            w = rho_inverse(u)
            v = rho(g.apply_complex(w))
            return density_in_region(home, v) * g.jacobian(w)
    value, _ = integrate_over_b_region(func, base, epsabs, epsrel)
    return value


# -- closed forms ------------------------------------------------------------------------

def closed_form_i(alpha: float) -> float:
    """2 pi (alpha / sqrt(alpha^2 - 1) - 1), for alpha > 1."""
    if alpha <= 1:
        raise ValueError("closed_form_i needs alpha > 1")
    return 2 * math.pi * (alpha / math.sqrt(alpha * alpha - 1) - 1)


def closed_form_j(alpha: float) -> float:
    """Integral of 1/(alpha + sqrt(x(1 - x))) over [0, 1], in closed form."""
    if alpha < 0:
        raise ValueError("closed_form_j needs alpha >= 0")
    if alpha == 0:
        return math.pi
    u = 1 / (2 * alpha)
    if u < 1:
        return math.pi - 2 * math.acos(u) / math.sqrt(1 - u * u)
    if u == 1:
        return math.pi - 2
    return math.pi - 2 * math.acosh(u) / math.sqrt(u * u - 1)


def quadrature_j(alpha: float) -> float:
    val, _ = integrate.quad(lambda x: 1 / (alpha + math.sqrt(x * (1 - x))), 0, 1,
                            epsabs=1e-13, epsrel=1e-13, limit=200)
    return val


def quadrature_i(alpha: float) -> float:
    """The defining integral of closed_form_i, by adaptive quadrature."""
    if alpha <= 1:
        raise ValueError("quadrature_i needs alpha > 1")
    val, _ = integrate.quad(lambda x: 2 * math.sqrt(1 - x * x) / (alpha * alpha - (1 - x * x)),
                            -1, 1, epsabs=1e-13, epsrel=1e-13, limit=200)
    return val


def first_digit_distribution() -> tuple[float, float]:
    """(probability the first letter is an inversion, probability it is a swap)."""
    return 2 * (1 - 1 / math.sqrt(3)), 2 / math.sqrt(3) - 1


def schmidt_string_frequency(n: int) -> float:
    return (closed_form_j(n - 1) - 2 * closed_form_j(n) + closed_form_j(n + 1)) / (8 * math.pi)


def alternating_run_frequency(n: int) -> float:
    return closed_form_j(n - 1) / (8 * math.pi)


def predicted_frequencies(max_run: int = 3) -> dict[str, float]:
    """Conjectural pattern frequencies, valid if the expansion maps are ergodic."""
    j1 = closed_form_j(1)
    p_inv, p_swap = first_digit_distribution()
    out = {
        "first_inversion": p_inv,
        "first_swap": p_swap,
        "two_swaps": 12 * (math.pi / 4 * j1) / TOTAL_MEASURE,
        "two_inversions": 12 * (math.pi / 4 * j1) / TOTAL_MEASURE,
        "three_swaps": 12 * (j1 - closed_form_i(4)) / (8 * math.pi),
        "three_inversions": 12 * (j1 - closed_form_i(4)) / (8 * math.pi),
    }
    for n in range(1, max_run + 1):
        out[f"schmidt_{n}"] = schmidt_string_frequency(n)
        out[f"alt_run_{n}"] = alternating_run_frequency(n)
    return out


# -- the sphere map and its transfer operator ----------------------------------------------

SPHERE_ORDER: tuple[Letter, ...] = INVERSIONS + SWAPS
_LORENTZ_ARRAYS = {l: np.array(LORENTZ[l], dtype=float) for l in SPHERE_ORDER}


def fibonacci_sphere(n: int) -> np.ndarray:
    """n quasi-uniform points on the unit sphere, as an (n, 3) array."""
    k = np.arange(n) + 0.5
    z = 1 - 2 * k / n
    r = np.sqrt(1 - z * z)
    phi = k * math.pi * (3 - math.sqrt(5))
    return np.column_stack((r * np.cos(phi), r * np.sin(phi), z))


def _tops(points: np.ndarray) -> np.ndarray:
    """First coordinate of L(1, X) for each letter in SPHERE_ORDER, shape (8, n)."""
    ones = np.ones((len(points), 1))
    v = np.hstack((ones, points))
    return np.stack([v @ _LORENTZ_ARRAYS[l][0] for l in SPHERE_ORDER])


def sphere_branch(points: np.ndarray) -> np.ndarray:
    """Index into SPHERE_ORDER of the letter the sphere map applies; -1 where none does."""
    below = _tops(points) < 1
    idx = np.argmax(below, axis=0)
    return np.where(below.any(axis=0), idx, -1)


def sphere_map(points: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Vectorised sphere map: (branch index, image points)."""
    branch = sphere_branch(points)
    out = points.copy()
    v = np.hstack((np.ones((len(points), 1)), points))
    for k, l in enumerate(SPHERE_ORDER):
        sel = branch == k
        w = v[sel] @ _LORENTZ_ARRAYS[l].T
        out[sel] = w[:, 1:] / w[:, :1]
    return branch, out


def is_swap_branch(branch: np.ndarray) -> np.ndarray:
    return branch >= len(INVERSIONS)


def transfer_apply(f: Callable[[np.ndarray], np.ndarray] | np.ndarray, points: np.ndarray,
                   grid: np.ndarray | None = None) -> np.ndarray:
    """Transfer operator of the sphere map for the normalised area measure.

    Each letter L contributes f(Y) / top^2 at X, where L(1, X) = top (1, Y), provided
    the sphere map really uses L at Y.  ``f`` is either a vectorised callable or a
    sample on ``grid`` (nearest-neighbour lookup).
    """
    if not callable(f):
        from scipy.spatial import cKDTree

        if grid is None:
            raise ValueError("grid values need the grid they were sampled on")
        values = np.asarray(f, dtype=float)
        tree = cKDTree(grid)
        f = lambda y: values[tree.query(y)[1]]
    v = np.hstack((np.ones((len(points), 1)), points))
    total = np.zeros(len(points))
    for k, l in enumerate(SPHERE_ORDER):
        w = v @ _LORENTZ_ARRAYS[l].T
        top = w[:, 0]
        pre = w[:, 1:] / top[:, None]
        ok = sphere_branch(pre) == k
        total += np.where(ok, f(pre) / top ** 2, 0.0)
    return total


@dataclass
class TransferSummary:
    grid_size: int
    total_mass: float
    swap_mass: float
    second_digit_swap: float

    def to_json(self) -> dict:
        return dict(self.__dict__)


def transfer_summary(n: int = 400_000) -> TransferSummary:
    """Grid estimates of the mass of F(1), the first-letter swap probability and the
    second-letter swap probability, all under the normalised area measure."""
    pts = fibonacci_sphere(n)
    pushed = transfer_apply(lambda y: np.ones(len(y)), pts)
    swap = is_swap_branch(sphere_branch(pts))
    return TransferSummary(n, float(pushed.mean()), float(swap.mean()), float((pushed * swap).mean()))


# -- invertible extension -----------------------------------------------------------------

def in_geodesic_domain(w_region: Region, z_region: Region) -> bool:
    """Whether an A region and a B region are disjoint, so geodesics may join them."""
    return z_region in partner_regions(w_region)


@dataclass(frozen=True)
class GeodesicPair:
    w: complex  # A coordinate
    z: complex  # B coordinate

    def regions(self) -> tuple[Region | None, Region | None]:
        return classify_complex("A", self.w, 0.0)[0], classify_complex("B", self.z, 0.0)[0]

    def is_valid(self) -> bool:
        a, b = self.regions()
        return a is not None and b is not None and in_geodesic_domain(a, b)


def _letter_for(side: str, region: Region) -> Letter:
    is_circle, k = region
    return letter(is_circle if side == "B" else not is_circle, k)


def extension_step(g: GeodesicPair) -> GeodesicPair:
    """Apply the first letter of the T_B expansion of z to both coordinates."""
    if not g.is_valid():
        raise ValueError(f"{g} is not a geodesic between disjoint regions")
    _, zreg = g.regions()
    m = MOBIUS[_letter_for("B", zreg)]
    return GeodesicPair(m.apply_complex(g.w), m.apply_complex(g.z))


def extension_inverse(g: GeodesicPair) -> GeodesicPair:
    """Undo extension_step: the letter is read off the A coordinate's T_A region."""
    if not g.is_valid():
        raise ValueError(f"{g} is not a geodesic between disjoint regions")
    wreg, _ = g.regions()
    m = MOBIUS[_letter_for("A", wreg)]
    return GeodesicPair(m.apply_complex(g.w), m.apply_complex(g.z))


@dataclass
class ExtensionReport:
    samples: int
    region_violations: int
    roundtrip_failures: int
    max_roundtrip_error: float


def random_geodesic_pairs(rng: np.random.Generator, count: int, spread: float = 1.0) -> list[GeodesicPair]:
    """Pairs in the extension's domain; coordinates drawn from a Cauchy law around 1/2 + i/2."""
    out = []
    while len(out) < count:
        a, b, c, d = rng.standard_cauchy(4) * spread
        g = GeodesicPair(complex(0.5 + a, 0.5 + b), complex(0.5 + c, 0.5 + d))
        if g.is_valid():
            out.append(g)
    return out


def extension_region_check(samples: int = 10_000, seed: int = 0, tol: float = 1e-9) -> ExtensionReport:
    """Check where the extension sends each product of regions, and that it inverts.

    With z in circle B_i the image has w in triangle A_i; with z in triangle B_i
    the image has w in circle A_i.  Images must stay in the domain.
    """
    rng = np.random.Generator(np.random.Philox(seed))
    bad = fails = 0
    worst = 0.0
    for g in random_geodesic_pairs(rng, samples):
        img = extension_step(g)
        _, (zc, zi) = g.regions()
        if not img.is_valid() or img.regions()[0] != (not zc, zi):
            bad += 1
            continue
        back = extension_inverse(img)
        err = max(abs(back.w - g.w) / max(1, abs(g.w)), abs(back.z - g.z) / max(1, abs(g.z)))
        worst = max(worst, err)
        if err > tol:
            fails += 1
    return ExtensionReport(samples, bad, fails, worst)


# -- symmetries and invariance of the density -------------------------------------------------

# isometries of the plane preserving the measure: (name, map, area Jacobian)
SYMMETRIES: dict[str, tuple[Callable[[complex], complex], Callable[[complex], float]]] = {
    "reflect_half": (lambda z: -z.conjugate() + 1, lambda z: 1.0),
    "rotate_0_1_inf": (lambda z: -1 / (z - 1), lambda z: 1 / abs(z - 1) ** 4),
    "reflect_shift_i": (lambda z: z.conjugate() + 1j, lambda z: 1.0),
    "invert_unit": (lambda z: 1 / z.conjugate(), lambda z: 1 / abs(z) ** 4),
}


def symmetry_defect(name: str, z: complex) -> float:
    """Relative gap between f_B(z) and f_B(g z) |g'(z)|^2 for a named symmetry g."""
    g, jac = SYMMETRIES[name]
    here = f_b(z)
    there = f_b(g(z)) * jac(z)
    return abs(here - there) / max(1.0, abs(here))


def invariance_defect(z: complex) -> float:
    """Relative gap in the fixed-point equation f_B = (transfer of f_B) at z.

    The preimages of z under T_B are l(z) for each letter l whose region contains l(z).
    """
    z = complex(z)
    total = 0.0
    for l, m in MOBIUS.items():
        u = m.apply_complex(z)
        reg, _ = classify_complex("B", u, 0.0)
        if reg is not None and _letter_for("B", reg) == l:
            total += f_b(u) * m.jacobian(z)
    here = f_b(z)
    return abs(total - here) / max(1.0, here)


def rectangle_invariance(rect: tuple[float, float, float, float], order: int = 40) -> tuple[float, float]:
    """(mu_B(E), mu_B(T_B^-1 E)) for a rectangle E = (x0, y0, x1, y1), by a tensor
    Gauss-Legendre rule; the preimage is integrated as a pull-back onto E."""
    x0, y0, x1, y1 = rect
    nodes, weights = np.polynomial.legendre.leggauss(order)
    xs = x0 + (x1 - x0) * (nodes + 1) / 2
    ys = y0 + (y1 - y0) * (nodes + 1) / 2
    scale = (x1 - x0) * (y1 - y0) / 4
    direct = pulled = 0.0
    for x, wx in zip(xs, weights):
        for y, wy in zip(ys, weights):
            z = complex(x, y)
            w = wx * wy * scale
            direct += w * f_b(z)
            for l, m in MOBIUS.items():
                u = m.apply_complex(z)
                reg, _ = classify_complex("B", u, 0.0)
                if reg is not None and _letter_for("B", reg) == l:
                    pulled += w * f_b(u) * m.jacobian(z)
    return float(direct), float(pulled)
