"""Frequency experiments: bounded Lorentz quadruples and random planar points."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .dynamics import expand_exact, expand_float
from .gaussian import GaussianProjectivePoint
from .group import Letter
from .measure import predicted_frequencies
from .quadruples import lorentz_quadruples, t_l_reduce

# pattern name -> (run length, swap?)
RUN_PATTERNS = {
    "two_swaps": (2, True),
    "two_inversions": (2, False),
    "three_swaps": (3, True),
    "three_inversions": (3, False),
}


@dataclass
class FrequencyReport:
    experiment: str
    observed: dict[str, float]
    predicted: dict[str, float]
    sample_size: int
    seed: int | None = None
    tolerance: float | None = None
    counts: dict[str, tuple[int, int]] = field(default_factory=dict)  # pattern -> (hits, windows)
    excluded: int = 0
    config: dict = field(default_factory=dict)

    def deviations(self) -> dict[str, float]:
        return {k: self.observed[k] - self.predicted[k] for k in self.observed if k in self.predicted}

    def within_tolerance(self, reference: dict[str, float] | None = None) -> bool:
        ref = self.predicted if reference is None else reference
        if self.tolerance is None:
            raise ValueError("report has no tolerance")
        return all(abs(self.observed[k] - ref[k]) <= self.tolerance for k in ref if k in self.observed)

    def to_json(self) -> dict:
        return {
            "experiment": self.experiment,
            "config": self.config,
            "seed": self.seed,
            "sample_size": self.sample_size,
            "excluded": self.excluded,
            "tolerance": self.tolerance,
            "observed": self.observed,
            "predicted_conjectural": self.predicted,
            "counts": {k: list(v) for k, v in self.counts.items()},
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["pattern", "observed", "hits", "windows", "predicted_conjectural"])
        for k, v in self.observed.items():
            hits, total = self.counts.get(k, ("", ""))
            pred = self.predicted.get(k)
            w.writerow([k, f"{v:.12g}", hits, total, "" if pred is None else f"{pred:.12g}"])
        return buf.getvalue()


def count_runs(words: Iterable[Sequence[bool]], length: int, swap: bool) -> tuple[int, int]:
    """Pooled count of windows of the given length made only of swaps (or inversions)."""
    hits = total = 0
    for w in words:
        for i in range(len(w) - length + 1):
            total += 1
            hits += all(v == swap for v in w[i:i + length])
    return hits, total


def _swap_pattern(word: Sequence[Letter]) -> list[bool]:
    return [l.is_swap for l in word]


def _tabulate(words: list[list[bool]], digits: bool) -> tuple[dict, dict]:
    observed, counts = {}, {}
    for name, (k, swap) in RUN_PATTERNS.items():
        hits, total = count_runs(words, k, swap)
        counts[name] = (hits, total)
        observed[name] = hits / total if total else float("nan")
    if digits:
        for pos, label in ((0, "first"), (1, "second")):
            long_enough = [w for w in words if len(w) > pos]
            swaps = sum(w[pos] for w in long_enough)
            n = len(long_enough)
            counts[f"{label}_swap"] = (swaps, n)
            counts[f"{label}_inversion"] = (n - swaps, n)
            observed[f"{label}_swap"] = swaps / n
            observed[f"{label}_inversion"] = (n - swaps) / n
    return observed, counts


def bounded_quadruples(n: int) -> list[tuple[int, int, int, int]]:
    """X_N: Lorentz quadruples with 0 < a <= n and gcd(b, c, d) = 1, every sign pattern."""
    if n < 1:
        raise ValueError("need n >= 1")
    return list(lorentz_quadruples(n, primitive=True))


def experiment_bounded_quadruples(n: int = 200, tolerance: float | None = 0.002) -> FrequencyReport:
    """Expand every quadruple of X_N with T_L and tabulate letter statistics.

    Run frequencies pool all windows of all words together.
    """
    words = [_swap_pattern(t_l_reduce(x).word) for x in bounded_quadruples(n)]
    observed, counts = _tabulate(words, digits=True)
    pred = predicted_frequencies()
    predicted = {k: pred[k] for k in observed if k in pred}
    return FrequencyReport("bounded_quadruples", observed, predicted, len(words), None, tolerance,
                           counts, 0, {"max_a": n})


def random_dyadic_point(rng: np.random.Generator, bits: int = 200) -> tuple[Fraction, Fraction]:
    """A uniform point of the unit square, exactly, with denominator 2^bits."""
    nbytes = (bits + 7) // 8
    scale = 1 << bits
    x = int.from_bytes(rng.bytes(nbytes), "big") % scale
    y = int.from_bytes(rng.bytes(nbytes), "big") % scale
    return Fraction(x, scale), Fraction(y, scale)


def experiment_random_points(count: int = 100, steps: int = 100, seed: int = 0, side: str = "B",
                             exact: bool = True, bits: int = 200,
                             tolerance: float | None = 0.03) -> FrequencyReport:
    """Expand random points of the unit square and tabulate run frequencies.

    Points come from a Philox generator.  In exact mode each point is a dyadic
    rational and the expansion is done in integer arithmetic; in float mode,
    expansions that touch a region boundary are dropped and counted.
    """
    rng = np.random.Generator(np.random.Philox(seed))
    words, excluded = [], 0
    for _ in range(count):
        x, y = random_dyadic_point(rng, bits)
        if exact:
            res = expand_exact(side, GaussianProjectivePoint.from_rationals(x, y), steps)
        else:
            res = expand_float(side, complex(float(x), float(y)), steps)
            if res.boundary_hit is not None:
                excluded += 1
                continue
        words.append(_swap_pattern(res.word))
    observed, counts = _tabulate(words, digits=False)
    pred = predicted_frequencies()
    predicted = {k: pred[k] for k in observed}
    config = {"count": count, "steps": steps, "side": side, "exact": exact, "bits": bits,
              "generator": "Philox"}
    return FrequencyReport("random_points", observed, predicted, len(words), seed, tolerance,
                           counts, excluded, config)


# values observed in the original experiments, for side-by-side reports
PUBLISHED_BOUNDED = {
    "two_swaps": 0.338, "two_inversions": 0.329, "three_swaps": 0.235, "three_inversions": 0.220,
    "first_swap": 0.161, "first_inversion": 0.838, "second_swap": 0.365, "second_inversion": 0.634,
}
PUBLISHED_RANDOM = {"two_swaps": 0.328, "two_inversions": 0.347, "three_swaps": 0.224,
                    "three_inversions": 0.251}
