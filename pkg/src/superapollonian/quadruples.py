"""Integer reduction systems on Lorentz and Descartes quadruples.

T_L reduces Lorentz quadruples a^2 = b^2 + c^2 + d^2, T_S and T_I reduce Descartes
quadruples, and T_D walks nonnegative Lorentz quadruples down the height graph.
Words are recorded so that ``x = W_1 W_2 ... W_n b`` with ``W_1`` the first letter
applied, which is also the order used by :func:`group.word_matrix`.
"""

from __future__ import annotations

import logging
import math
import random
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence

from .gaussian import GaussianInteger, GaussianProjectivePoint
from .group import (
    DESCARTES,
    INVERSIONS,
    J2,
    LORENTZ,
    SWAPS,
    Letter,
    format_word,
    matmul,
    matvec,
    word_matrix,
)

log = logging.getLogger(__name__)

Quad = tuple[int, int, int, int]


def lorentz_form(x: Sequence) -> int:
    a, b, c, d = x
    return a * a - b * b - c * c - d * d


def descartes_form(y: Sequence) -> int:
    s = sum(y)
    return s * s - 2 * sum(v * v for v in y)


def is_lorentz(x: Sequence) -> bool:
    return lorentz_form(x) == 0 and x[0] > 0


def is_descartes(y: Sequence) -> bool:
    return descartes_form(y) == 0


def quad_gcd(x: Sequence[int]) -> int:
    return math.gcd(*x)


def _as_quad(x: Sequence[int]) -> Quad:
    if len(x) != 4:
        raise ValueError("a quadruple has four entries")
    return tuple(int(v) for v in x)  # type: ignore[return-value]


@dataclass
class ReductionTrace:
    """States visited by a reduction; ``states[k]`` is the input after k steps."""

    input: Quad
    word: list = field(default_factory=list)
    states: list[Quad] = field(default_factory=list)
    system: str = ""

    @property
    def terminal(self) -> Quad:
        return self.states[-1]

    @property
    def gcd(self) -> int:
        return quad_gcd(self.input)

    def __len__(self) -> int:
        return len(self.word)

    def tokens(self) -> list[str]:
        if self.system == "T_L":
            return [l.lorentz_name for l in self.word]
        return [str(l) for l in self.word]

    def to_json(self) -> dict:
        return {
            "system": self.system,
            "input": list(self.input),
            "gcd": self.gcd,
            "word": self.tokens(),
            "states": [list(s) for s in self.states],
            "terminal": list(self.terminal),
        }


# -- Lorentz quadruples ---------------------------------------------------------------

# the priority order of T_L: inversions before swaps
_TL_ORDER = INVERSIONS + SWAPS


def is_lorentz_terminal(x: Sequence[int]) -> bool:
    """True for (g, +-g, 0, 0) and its coordinate permutations."""
    a, b, c, d = x
    return a >= abs(b) + abs(c) + abs(d)


def t_l_step(x: Sequence[int]) -> tuple[Letter, Quad] | None:
    """One step of T_L with strict inequalities; None at a terminal quadruple."""
    x = _as_quad(x)
    if is_lorentz_terminal(x):
        return None
    a = x[0]
    for l in _TL_ORDER:
        row = LORENTZ[l][0]
        if sum(r * v for r, v in zip(row, x)) < a:
            return l, matvec(LORENTZ[l], x)
    raise ArithmeticError(f"{x} is not a Lorentz quadruple")


def t_l_reduce(x: Sequence[int], max_steps: int | None = None) -> ReductionTrace:
    x = _as_quad(x)
    if not is_lorentz(x):
        raise ValueError(f"{x} is not a Lorentz quadruple with a > 0")
    trace = ReductionTrace(x, [], [x], "T_L")
    cur = x
    while max_steps is None or len(trace.word) < max_steps:
        nxt = t_l_step(cur)
        if nxt is None:
            break
        l, cur = nxt
        trace.word.append(l)
        trace.states.append(cur)
    return trace


def t_sph_step(point: Sequence) -> tuple[Letter, tuple] | None:
    """T_L scaled to the unit sphere; exact for Fractions, approximate for floats."""
    x, y, z = point
    v = (1, x, y, z)
    # on the sphere this only holds at the six images of terminal quadruples
    if abs(x) + abs(y) + abs(z) <= 1:
        return None
    for l in _TL_ORDER:
        m = LORENTZ[l]
        top = sum(r * t for r, t in zip(m[0], v))
        if top < 1:
            w = matvec(m, v)
            return l, (w[1] / top, w[2] / top, w[3] / top)
    return None


def projection(x: Sequence[int]) -> tuple[Fraction, Fraction, Fraction]:
    a, b, c, d = x
    return Fraction(b, a), Fraction(c, a), Fraction(d, a)


def phi_map(x: Sequence[int]) -> GaussianProjectivePoint:
    """The planar point (a + c - d + b i)/(a + b - d - c i) attached to a Lorentz quadruple."""
    a, b, c, d = x
    p = GaussianInteger(a + c - d, b)
    q = GaussianInteger(a + b - d, -c)
    if not p and not q:
        # d = a; the other representative of the stereographic projection applies
        p = GaussianInteger(b, a + c + d)
        q = GaussianInteger(a + b + d, c)
    if not p and not q:
        raise ArithmeticError(f"{tuple(x)} has no image point")
    return GaussianProjectivePoint(p, q).canonical()


def sphere_to_plane(point: Sequence) -> complex:
    """The same map on sphere points, as a complex number."""
    x, y, z = (float(t) for t in point)
    den = complex(1 + x - z, -y)
    if den == 0:
        return complex("inf")
    return complex(1 + y - z, x) / den


def lorentz_to_descartes(x: Sequence[int]) -> Quad:
    w = matvec(J2, x)
    if any(v % 2 for v in w):
        raise ValueError(f"J{tuple(x)} = {tuple(Fraction(v, 2) for v in w)} is not integral")
    return tuple(v // 2 for v in w)  # type: ignore[return-value]


def descartes_to_lorentz(y: Sequence[int]) -> Quad:
    # J is an involution
    return lorentz_to_descartes(y)


def random_lorentz_quadruple(rng: random.Random, amax: int) -> Quad:
    """A primitive Lorentz quadruple with a <= amax from the four-square parametrization."""
    r = math.isqrt(amax)
    while True:
        m, n, p, q = (rng.randint(-r, r) for _ in range(4))
        a = m * m + n * n + p * p + q * q
        if a == 0 or a > amax:
            continue
        rest = [2 * (m * q + n * p), 2 * (n * q - m * p), m * m + n * n - p * p - q * q]
        g = math.gcd(a, *rest)
        rest = [v // g for v in rest]
        rng.shuffle(rest)
        return (a // g, *rest)


def lorentz_quadruples(amax: int, primitive: bool = True, nonneg: bool = False) -> Iterator[Quad]:
    """All Lorentz quadruples with 0 < a <= amax, ordered by a."""
    for a in range(1, amax + 1):
        aa = a * a
        lo = 0 if nonneg else -a
        for b in range(lo, a + 1):
            bb = aa - b * b
            for c in range(lo, a + 1):
                dd = bb - c * c
                if dd < 0:
                    continue
                d = math.isqrt(dd)
                if d * d != dd:
                    continue
                for dv in ((d, -d) if d and not nonneg else (d,)):
                    if not primitive or math.gcd(a, b, c, dv) == 1:
                        yield (a, b, c, dv)


# -- Descartes quadruples -----------------------------------------------------------

def is_simplest_descartes(y: Sequence[int]) -> bool:
    s = sorted(y)
    return s[0] == s[1] == 0 and s[2] == s[3] > 0


_TS_ORDER = INVERSIONS + SWAPS
_TI_ORDER = SWAPS + INVERSIONS


def _descartes_condition(l: Letter, y: Quad) -> bool:
    k = l.index - 1
    if l.is_inversion:
        return y[k] < 0
    return sum(y) - y[k] < y[k]


def _descartes_step(order, y: Sequence[int]) -> tuple[Letter, Quad] | None:
    y = _as_quad(y)
    for l in order:
        if _descartes_condition(l, y):
            return l, matvec(DESCARTES[l], y)
    return None


def t_s_step(y: Sequence[int]) -> tuple[Letter, Quad] | None:
    return _descartes_step(_TS_ORDER, y)


def t_i_step(y: Sequence[int]) -> tuple[Letter, Quad] | None:
    return _descartes_step(_TI_ORDER, y)


def _descartes_reduce(name: str, order, y: Sequence[int], max_steps: int | None) -> ReductionTrace:
    y = _as_quad(y)
    if not is_descartes(y) or sum(y) <= 0:
        raise ValueError(f"{y} is not a Descartes quadruple with positive sum")
    trace = ReductionTrace(y, [], [y], name)
    cur = y
    while max_steps is None or len(trace.word) < max_steps:
        nxt = _descartes_step(order, cur)
        if nxt is None:
            break
        l, cur = nxt
        trace.word.append(l)
        trace.states.append(cur)
    return trace


def t_s_reduce(y: Sequence[int], max_steps: int | None = None) -> ReductionTrace:
    return _descartes_reduce("T_S", _TS_ORDER, y, max_steps)


def t_i_reduce(y: Sequence[int], max_steps: int | None = None) -> ReductionTrace:
    return _descartes_reduce("T_I", _TI_ORDER, y, max_steps)


def reconstruct_quadruple(word: Sequence[Letter], terminal: Sequence[int], realization: str) -> Quad:
    return matvec(word_matrix(word, realization), terminal)


def is_root(y: Sequence[int]) -> bool:
    a, b, c, d = sorted(y)
    return a <= 0 <= b and a + b + c >= d


def swap_run_end(y: Sequence[int]) -> Quad:
    """State of T_I when it first emits an inversion, or its terminal state."""
    cur = _as_quad(y)
    while True:
        nxt = t_i_step(cur)
        if nxt is None or nxt[0].is_inversion:
            return cur
        cur = nxt[1]


def swap_run_root_check(y: Sequence[int]) -> bool:
    return is_root(swap_run_end(y))


def double_flip(index: int) -> tuple:
    """S_i^perp S_i as an integer matrix."""
    return matmul(DESCARTES[Letter[f"S{index}P"]], DESCARTES[Letter[f"S{index}"]])


def descartes_quadruples(bound: int, primitive: bool = True, positive_sum: bool = True) -> list[Quad]:
    """All Descartes quadruples with every |entry| <= bound, in lexicographic order."""
    import numpy as np

    r = np.arange(-bound, bound + 1, dtype=np.int64)
    out: set[Quad] = set()
    for a in range(-bound, bound + 1):
        b = r[:, None]
        c = r[None, :]
        disc = a * b + b * c + c * a
        ok = disc >= 0
        root = np.zeros_like(disc)
        root[ok] = np.round(np.sqrt(disc[ok].astype(np.float64))).astype(np.int64)
        ok &= root * root == disc
        bi, ci = np.nonzero(ok)
        for bv, cv, sq in zip(b[bi, 0], c[0, ci], root[bi, ci]):
            base = a + int(bv) + int(cv)
            for d in {base + 2 * int(sq), base - 2 * int(sq)}:
                if abs(d) > bound:
                    continue
                q = (a, int(bv), int(cv), d)
                if positive_sum and sum(q) <= 0:
                    continue
                if primitive and math.gcd(*q) != 1:
                    continue
                out.add(q)
    return sorted(out)


# -- the height graph on nonnegative Lorentz quadruples ---------------------------------

# D_1 .. D_7, each undoing one sign pattern of T_D
D_MATRICES: tuple[tuple, ...] = tuple(
    tuple(tuple(r) for r in m)
    for m in (
        [[2, 1, -1, -1], [-1, 0, 1, 1], [-1, -1, 0, 1], [-1, -1, 1, 0]],
        [[2, -1, 1, -1], [-1, 0, -1, 1], [-1, 1, 0, 1], [-1, 1, -1, 0]],
        [[2, -1, -1, 1], [-1, 0, 1, -1], [-1, 1, 0, -1], [-1, 1, 1, 0]],
        [[2, -1, -1, -1], [-1, 0, 1, 1], [-1, 1, 0, 1], [-1, 1, 1, 0]],
        [[2, -1, 1, 1], [-1, 0, -1, -1], [-1, 1, 0, -1], [-1, 1, -1, 0]],
        [[2, 1, -1, 1], [-1, 0, 1, -1], [-1, -1, 0, -1], [-1, -1, 1, 0]],
        [[2, 1, 1, -1], [-1, 0, -1, 1], [-1, -1, 0, 1], [-1, -1, -1, 0]],
    )
)

# sign pattern of (B, C, D) as printed next to each D_i
SIGN_TABLE = {
    (1, -1, -1): 1,
    (-1, 1, -1): 2,
    (-1, -1, 1): 3,
    (-1, -1, -1): 4,
    (-1, 1, 1): 5,
    (1, -1, 1): 6,
    (1, 1, -1): 7,
}

_table_warned = False


def is_origin(x: Sequence[int]) -> bool:
    return x[0] > 0 and sum(1 for v in x[1:] if v == 0) >= 2


def _abs(x: Sequence[int]) -> Quad:
    return tuple(abs(v) for v in x)  # type: ignore[return-value]


def _flip(x: Sequence[int]) -> Quad:
    return (x[0], -x[1], -x[2], -x[3])


def recovering_letters(x: Sequence[int], nxt: Sequence[int], flip: bool = True) -> list[int]:
    """Indices i with abs(D_i v) = x, where v is nxt with its last three entries negated.

    With ``flip=False`` the matrices are applied to nxt itself; that reading misses
    every step where B, C and D are all negative.
    """
    v = _flip(nxt) if flip else tuple(nxt)
    x = tuple(x)
    return [i for i, m in enumerate(D_MATRICES, start=1) if _abs(matvec(m, v)) == x]


def t_d_step(x: Sequence[int]) -> tuple[int, Quad] | None:
    """One step of T_D as (i, next): the least i with abs(D_i flip(next)) = x."""
    global _table_warned
    a, b, c, d = x = _as_quad(x)
    if min(x) < 0:
        raise ValueError("T_D acts on nonnegative quadruples")
    if is_origin(x):
        return None
    big_b, big_c, big_d = a - c - d, a - b - d, a - b - c
    nxt = (2 * a - b - c - d, abs(big_b), abs(big_c), abs(big_d))
    found = recovering_letters(x, nxt)
    if not found:
        raise ArithmeticError(f"no D matrix recovers {x}")
    i = found[0]
    printed = SIGN_TABLE.get(tuple((v > 0) - (v < 0) for v in (big_b, big_c, big_d)))
    if printed is not None and printed != i and not _table_warned:
        _table_warned = True
        log.warning("sign table gives D_%d at %s but D_%d recovers it", printed, x, i)
    return i, nxt


def t_d_reduce(x: Sequence[int], max_steps: int | None = None) -> ReductionTrace:
    x = _as_quad(x)
    if not is_lorentz(x) or min(x) < 0:
        raise ValueError(f"{x} is not a nonnegative Lorentz quadruple")
    trace = ReductionTrace(x, [], [x], "T_D")
    cur = x
    while max_steps is None or len(trace.word) < max_steps:
        nxt = t_d_step(cur)
        if nxt is None:
            break
        i, cur = nxt
        trace.word.append(f"D{i}")
        trace.states.append(cur)
    return trace


def t_d_reconstruct(word: Sequence[str], terminal: Sequence[int]) -> Quad:
    """Undo a T_D trace: apply v -> abs(D_i flip(v)) for the letters from last to first."""
    v = _as_quad(terminal)
    for tok in reversed(word):
        v = _abs(matvec(D_MATRICES[int(str(tok).lstrip("D")) - 1], _flip(v)))
    return v


_SIGNS = tuple((1, s1, s2, s3) for s1 in (1, -1) for s2 in (1, -1) for s3 in (1, -1))


def graph_neighbors(x: Sequence[int]) -> list[Quad]:
    """abs(L x) over the eight generators, in generator order."""
    return [_abs(matvec(LORENTZ[l], x)) for l in _TL_ORDER]


def min_height_neighbor(x: Sequence[int]) -> Quad:
    return min(graph_neighbors(x), key=lambda v: v[0])


_GROWTH = math.log(2 + math.sqrt(3))


def _steps_lower_bound(height: int) -> int:
    # a neighbour's height is within a factor 2 + sqrt(3) of the current one
    return max(0, math.ceil(math.log(height) / _GROWTH - 1e-9))


@dataclass
class OracleResult:
    distance: int | None
    status: str  # "ok" or "inconclusive"
    explored: int


def bfs_oracle(x: Sequence[int], radius: int) -> OracleResult:
    """Graph distance from x to the nearest origin, searching at most ``radius`` steps.

    The search is exact on the whole infinite graph: a branch is cut only when the
    height bound shows it cannot reach an origin within the radius.
    """
    start = _as_quad(x)
    if is_origin(start):
        return OracleResult(0, "ok", 1)
    seen = {start}
    frontier = deque([(start, 0)])
    while frontier:
        v, dist = frontier.popleft()
        for w in graph_neighbors(v):
            if w in seen:
                continue
            if is_origin(w):
                return OracleResult(dist + 1, "ok", len(seen))
            if dist + 1 + _steps_lower_bound(w[0]) > radius:
                continue
            seen.add(w)
            frontier.append((w, dist + 1))
    return OracleResult(None, "inconclusive", len(seen))


def height_subgraph(amax: int) -> dict[Quad, set[Quad]]:
    """Simple graph on primitive nonnegative quadruples with a <= amax (loops dropped)."""
    verts = set(lorentz_quadruples(amax, primitive=True, nonneg=True))
    return {v: {w for w in graph_neighbors(v) if w in verts and w != v} for v in verts}


def count_triangles(graph: dict[Quad, set[Quad]]) -> int:
    n = 0
    for u, nbrs in graph.items():
        for v in nbrs:
            if v > u:
                n += sum(1 for w in graph[v] & nbrs if w > v)
    return n


def shortest_cycle_through(graph: dict[Quad, set[Quad]], v: Quad, limit: int = 8) -> int | None:
    """Length of a shortest cycle through v, found by BFS in each branch."""
    best = None
    branch = {}
    dist = {v: 0}
    queue = deque()
    for w in graph[v]:
        branch[w] = w
        dist[w] = 1
        queue.append(w)
    while queue:
        u = queue.popleft()
        if best is not None and 2 * dist[u] + 1 > best:
            break
        for w in graph[u]:
            if w == v:
                continue
            if w not in dist:
                if dist[u] + 1 > limit:
                    continue
                dist[w] = dist[u] + 1
                branch[w] = branch[u]
                queue.append(w)
            elif branch[w] != branch[u]:
                length = dist[u] + dist[w] + 1
                if best is None or length < best:
                    best = length
    return best


def format_trace(trace: ReductionTrace) -> str:
    if trace.system in ("T_L", "T_S", "T_I"):
        word = format_word(trace.word, lorentz=trace.system == "T_L")
    else:
        word = " ".join(trace.word)
    return f"{trace.input} -> {trace.terminal} via [{word}]"
