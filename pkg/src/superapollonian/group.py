"""The eight reflection generators in their Lorentz, Descartes and Mobius realizations.

Words are tuples of letters in Mobius order: the leftmost letter is the outermost
map, so ``(m1, m2)`` means ``z -> m1(m2(z))`` and the same product ``L(m1) L(m2)``
acts on column vectors.  Matrix order (``M_n ... M_1``) only appears when a word
acts on the rows of a circle quadruple or when serializing with ``matrix_order``.
"""

from __future__ import annotations

import enum
from fractions import Fraction
from functools import reduce
from itertools import product
from typing import Iterable, Iterator, Sequence

from .gaussian import ExtendedMobius, GaussianInteger

Matrix4 = tuple[tuple[int, int, int, int], ...]


class Letter(enum.Enum):
    S1 = (False, 1)
    S2 = (False, 2)
    S3 = (False, 3)
    S4 = (False, 4)
    S1P = (True, 1)
    S2P = (True, 2)
    S3P = (True, 3)
    S4P = (True, 4)

    @property
    def is_inversion(self) -> bool:
        return self.value[0]

    @property
    def is_swap(self) -> bool:
        return not self.value[0]

    @property
    def index(self) -> int:
        return self.value[1]

    def perp(self) -> "Letter":
        return letter(not self.is_inversion, self.index)

    def commutes_with(self, other: "Letter") -> bool:
        return self == other or (self.is_inversion != other.is_inversion and self.index != other.index)

    @property
    def lorentz_name(self) -> str:
        return "L" + self.name[1:]

    def __str__(self) -> str:
        return self.name


SWAPS = (Letter.S1, Letter.S2, Letter.S3, Letter.S4)
INVERSIONS = (Letter.S1P, Letter.S2P, Letter.S3P, Letter.S4P)
LETTERS = SWAPS + INVERSIONS

Word = tuple[Letter, ...]


def letter(inversion: bool, index: int) -> Letter:
    return (INVERSIONS if inversion else SWAPS)[index - 1]


def parse_word(text: str | Iterable[str]) -> Word:
    tokens = text.split() if isinstance(text, str) else list(text)
    out = []
    for tok in tokens:
        name = tok.strip().upper()
        if name.startswith("L"):
            name = "S" + name[1:]
        try:
            out.append(Letter[name])
        except KeyError:
            raise ValueError(f"unknown letter token {tok!r}") from None
    return tuple(out)


def format_word(w: Sequence[Letter], matrix_order: bool = False, lorentz: bool = False) -> str:
    seq = reversed(w) if matrix_order else w
    return " ".join(l.lorentz_name if lorentz else l.name for l in seq)


# -- integer 4x4 matrices ---------------------------------------------------------

def mat(rows: Sequence[Sequence[int]]) -> Matrix4:
    return tuple(tuple(r) for r in rows)


def matmul(x: Sequence[Sequence], y: Sequence[Sequence]) -> tuple:
    cols = list(zip(*y))
    return tuple(tuple(sum(a * b for a, b in zip(row, col)) for col in cols) for row in x)


def matvec(m: Sequence[Sequence], v: Sequence) -> tuple:
    return tuple(sum(a * b for a, b in zip(row, v)) for row in m)


def transpose(m: Sequence[Sequence]) -> tuple:
    return tuple(zip(*m))


IDENTITY4: Matrix4 = mat([[int(i == j) for j in range(4)] for i in range(4)])

GRAM_LORENTZ: Matrix4 = mat([[1, 0, 0, 0], [0, -1, 0, 0], [0, 0, -1, 0], [0, 0, 0, -1]])
GRAM_DESCARTES: Matrix4 = mat([[-1, 1, 1, 1], [1, -1, 1, 1], [1, 1, -1, 1], [1, 1, 1, -1]])

# J = J2 / 2, an involution with 2 Q_D(J x) = Q_L(x)
J2: Matrix4 = mat([[1, 1, 1, 1], [1, 1, -1, -1], [1, -1, 1, -1], [1, -1, -1, 1]])
# D = D2 / 2 exchanges a Descartes quadruple with its dual
D2: Matrix4 = mat([[-1, 1, 1, 1], [1, -1, 1, 1], [1, 1, -1, 1], [1, 1, 1, -1]])

_LORENTZ = {
    Letter.S1: [[2, -1, -1, -1], [1, 0, -1, -1], [1, -1, 0, -1], [1, -1, -1, 0]],
    Letter.S2: [[2, -1, 1, 1], [1, 0, 1, 1], [-1, 1, 0, -1], [-1, 1, -1, 0]],
    Letter.S3: [[2, 1, -1, 1], [-1, 0, 1, -1], [1, 1, 0, 1], [-1, -1, 1, 0]],
    Letter.S4: [[2, 1, 1, -1], [-1, 0, -1, 1], [-1, -1, 0, 1], [1, 1, 1, 0]],
    Letter.S1P: [[2, 1, 1, 1], [-1, 0, -1, -1], [-1, -1, 0, -1], [-1, -1, -1, 0]],
    Letter.S2P: [[2, 1, -1, -1], [-1, 0, 1, 1], [1, 1, 0, -1], [1, 1, -1, 0]],
    Letter.S3P: [[2, -1, 1, -1], [1, 0, 1, -1], [-1, 1, 0, 1], [1, -1, 1, 0]],
    Letter.S4P: [[2, -1, -1, 1], [1, 0, -1, 1], [1, -1, 0, 1], [-1, 1, 1, 0]],
}
LORENTZ: dict[Letter, Matrix4] = {k: mat(v) for k, v in _LORENTZ.items()}


def _descartes(l: Letter) -> Matrix4:
    k = l.index - 1
    rows = [list(r) for r in IDENTITY4]
    for i in range(4):
        for j in range(4):
            if l.is_swap and i == k:
                rows[i][j] = -1 if j == k else 2
            if l.is_inversion and j == k and i != k:
                rows[i][j] = 2
    rows[k][k] = -1
    return mat(rows)


DESCARTES: dict[Letter, Matrix4] = {l: _descartes(l) for l in LETTERS}

_g = GaussianInteger
MOBIUS: dict[Letter, ExtendedMobius] = {
    Letter.S1: ExtendedMobius(_g(1, 2), _g(-2), _g(2), _g(-1, 2), True),
    Letter.S2: ExtendedMobius(_g(1), _g(0), _g(2), _g(-1), True),
    Letter.S3: ExtendedMobius(_g(-1), _g(2), _g(0), _g(1), True),
    Letter.S4: ExtendedMobius(_g(-1), _g(0), _g(0), _g(1), True),
    Letter.S1P: ExtendedMobius(_g(1), _g(0), _g(0), _g(1), True),
    Letter.S2P: ExtendedMobius(_g(1), _g(0, 2), _g(0), _g(1), True),
    Letter.S3P: ExtendedMobius(_g(1), _g(0), _g(0, -2), _g(1), True),
    Letter.S4P: ExtendedMobius(_g(1, -2), _g(0, 2), _g(0, -2), _g(1, 2), True),
}
# z -> (conj z - 1 + i)/((1 - i) conj z + i), swapping each base circle with its dual
DUALITY_MOBIUS = ExtendedMobius(_g(1), _g(-1, 1), _g(1, -1), _g(0, 1), True)


def letter_to_lorentz(l: Letter) -> Matrix4:
    return LORENTZ[l]


def letter_to_descartes(l: Letter) -> Matrix4:
    return DESCARTES[l]


def letter_to_mobius(l: Letter) -> ExtendedMobius:
    return MOBIUS[l]


def j_conjugate(m: Sequence[Sequence[int]]) -> Matrix4:
    """J m J, raising if the result is not integral."""
    p = matmul(matmul(J2, m), J2)
    if any(x % 4 for row in p for x in row):
        raise ArithmeticError("J-conjugate is not integral")
    return mat([[x // 4 for x in row] for row in p])


def duality_descartes() -> tuple[tuple[Fraction, ...], ...]:
    return tuple(tuple(Fraction(x, 2) for x in row) for row in D2)


def preserves_form(m: Sequence[Sequence[int]], gram: Sequence[Sequence[int]]) -> bool:
    return matmul(matmul(transpose(m), gram), m) == tuple(tuple(r) for r in gram)


# -- words -----------------------------------------------------------------------

def word_matrix(w: Sequence[Letter], realization: str = "descartes") -> Matrix4:
    """Product M(m1) M(m2) ... M(mn) acting on column vectors."""
    table = {"descartes": DESCARTES, "lorentz": LORENTZ}[realization]
    return reduce(matmul, (table[l] for l in w), IDENTITY4)


def word_mobius(w: Sequence[Letter]) -> ExtendedMobius:
    """The composite map m1 o m2 o ... o mn."""
    out = ExtendedMobius(_g(1), _g(0), _g(0), _g(1), False)
    for l in w:
        out = out @ MOBIUS[l]
    return out


def is_swap_normal(w: Sequence[Letter]) -> bool:
    for x, y in zip(w, w[1:]):
        if x == y or (x.is_swap and y.is_inversion and x.index != y.index):
            return False
    return True


def is_invert_normal(w: Sequence[Letter]) -> bool:
    for x, y in zip(w, w[1:]):
        if x == y or (x.is_inversion and y.is_swap and x.index != y.index):
            return False
    return True


def _cancel(w: list[Letter]) -> bool:
    # remove one pair x ... x separated only by letters commuting with x
    for i, x in enumerate(w):
        for j in range(i + 1, len(w)):
            if w[j] == x:
                del w[j], w[i]
                return True
            if not w[j].commutes_with(x):
                break
    return False


def normalize_word(w: Sequence[Letter], target: str = "swap") -> Word:
    """Shortest representative in swap (or invert) normal form of the same group element."""
    if target not in ("swap", "invert"):
        raise ValueError("target must be 'swap' or 'invert'")
    letters = list(w)
    while _cancel(letters):
        pass
    # commuting pairs are then sorted by bubbling the offending letter past its neighbour
    moved = True
    while moved:
        moved = False
        for i in range(len(letters) - 1):
            x, y = letters[i], letters[i + 1]
            if x.index == y.index or x.is_inversion == y.is_inversion:
                continue
            if (target == "swap" and x.is_swap) or (target == "invert" and x.is_inversion):
                letters[i], letters[i + 1] = y, x
                moved = True
    return tuple(letters)


def perp_word(w: Sequence[Letter]) -> Word:
    return tuple(l.perp() for l in reversed(w))


def invert_word(w: Sequence[Letter]) -> Word:
    return tuple(reversed(w))


def normal_words(n: int, kind: str = "swap") -> Iterator[Word]:
    """All words of length n in the requested normal form."""
    check = is_swap_normal if kind == "swap" else is_invert_normal

    def extend(prefix: Word) -> Iterator[Word]:
        if len(prefix) == n:
            yield prefix
            return
        for l in LETTERS:
            cand = prefix + (l,)
            if check(cand[-2:]):
                yield from extend(cand)

    yield from extend(())


def all_words(n: int) -> Iterator[Word]:
    return (tuple(p) for p in product(LETTERS, repeat=n))
