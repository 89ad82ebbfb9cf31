"""Acceptance suite: criteria 1-10, each reported as one PASS/FAIL line.

Run under pytest (lines appear in the terminal summary) or directly with
``python3 tests/test_acceptance.py``.
"""

from __future__ import annotations

import math
import random
import time
from fractions import Fraction

import numpy as np

from superapollonian import measure
from superapollonian.dynamics import capture_check, expand, expand_exact, reconstruct
from superapollonian.experiments import (
    PUBLISHED_BOUNDED,
    experiment_bounded_quadruples,
    experiment_random_points,
    random_dyadic_point,
)
from superapollonian.gaussian import (
    GaussianInteger,
    GaussianProjectivePoint,
    gi_gcd,
    parity_class,
)
from superapollonian.group import (
    DESCARTES,
    DUALITY_MOBIUS,
    GRAM_DESCARTES,
    GRAM_LORENTZ,
    IDENTITY4,
    INVERSIONS,
    LETTERS,
    LORENTZ,
    MOBIUS,
    SWAPS,
    format_word,
    invert_word,
    j_conjugate,
    matmul,
    normal_words,
    perp_word,
    preserves_form,
)
from superapollonian.quadruples import (
    bfs_oracle,
    count_triangles,
    descartes_quadruples,
    graph_neighbors,
    height_subgraph,
    lorentz_quadruples,
    phi_map,
    random_lorentz_quadruple,
    reconstruct_quadruple,
    shortest_cycle_through,
    swap_run_end,
    is_root,
    t_d_reduce,
    t_l_reduce,
)
from superapollonian.realline import (
    euclid_reduce,
    mediant_convergents,
    real_expand,
    return_time_integral,
    romik_euclid,
)

FIGURE_WORD = "S3P S2 S2P S3P S1 S1P S4 S2 S4 S1 S1P S3 S2 S3 S3P S4 S4P S2 S1 S2"

CONVERGENT_TRIPLES = [
    "1/1,1/0,0/1", "1/1,1/2,0/1", "1/3,1/2,0/1", "1/3,1/2,2/5", "3/7,1/2,2/5",
    "3/7,5/12,2/5", "3/7,5/12,8/19", "13/31,5/12,8/19", "13/31,5/12,18/43",
    "13/31,31/74,18/43", "13/31,31/74,44/105", "75/179,31/74,44/105",
    "75/179,31/74,106/253", "137/327,31/74,106/253", "137/327,31/74,168/401",
    "199/475,31/74,168/401", "199/475,367/876,168/401", "535/1277,367/876,168/401",
    "535/1277,703/1678,168/401", "871/2079,703/1678,168/401",
    "871/2079,703/1678,1574/3757",
]

EUCLID_246 = [(246, 113), (-20, 113), (20, 113), (20, -73), (-20, -73), (-20, 33), (20, 33),
              (20, 7), (-6, 7), (6, 7), (6, 5), (4, 5), (4, 3), (2, 3), (2, 1), (0, 1)]
COMPARISON_246 = [(246, 113), (113, 20), (73, 20), (33, 20), (20, 7), (7, 6), (6, 5), (5, 4),
                  (4, 3), (3, 2), (2, 1), (1, 0)]


def _pairs(text: str) -> tuple[tuple[int, int], ...]:
    return tuple(tuple(int(v) for v in frac.split("/")) for frac in text.split(","))


# -- criterion checks: each returns (passed, detail) ------------------------------------

def check_algebra() -> tuple[bool, str]:
    t = time.perf_counter()
    failures = []
    for l in LETTERS:
        for name, table, gram in (("lorentz", LORENTZ, GRAM_LORENTZ), ("descartes", DESCARTES, GRAM_DESCARTES)):
            if matmul(table[l], table[l]) != IDENTITY4:
                failures.append(f"{l} {name} square")
            if not preserves_form(table[l], gram):
                failures.append(f"{l} {name} form")
        if j_conjugate(LORENTZ[l]) != DESCARTES[l]:
            failures.append(f"{l} J-conjugacy")
        if not (DUALITY_MOBIUS @ MOBIUS[l] @ DUALITY_MOBIUS).projectively_equal(MOBIUS[l.perp()]):
            failures.append(f"{l} duality")
    for s in SWAPS:
        for p in INVERSIONS:
            if s.index == p.index:
                continue
            for name, table in (("lorentz", LORENTZ), ("descartes", DESCARTES)):
                if matmul(table[s], table[p]) != matmul(table[p], table[s]):
                    failures.append(f"{s},{p} {name} commute")
            if not (MOBIUS[s] @ MOBIUS[p]).projectively_equal(MOBIUS[p] @ MOBIUS[s]):
                failures.append(f"{s},{p} mobius commute")
    elapsed = time.perf_counter() - t
    ok = not failures and elapsed < 1
    return ok, f"{len(failures)} identity failures, {elapsed:.2f}s (limit 1s) {failures[:3]}"


def _random_gaussian_rational(rng: random.Random) -> GaussianProjectivePoint:
    while True:
        q = GaussianInteger(rng.randint(-1000, 1000), rng.randint(-1000, 1000))
        if not q or q.norm() > 10 ** 6:
            continue
        p = GaussianInteger(rng.randint(-3000, 3000), rng.randint(-3000, 3000))
        if gi_gcd(p, q).norm() == 1:
            return GaussianProjectivePoint(p, q).canonical()


def check_termination(samples: int = 10_000) -> tuple[bool, str]:
    t = time.perf_counter()
    rng = random.Random(2024)
    bad = {"A": 0, "B": 0}
    for _ in range(samples):
        z = _random_gaussian_rational(rng)
        for side in ("A", "B"):
            res = expand_exact(side, z)
            if res.terminal != parity_class(z) or not reconstruct(res.word, res.terminal).same_point(z):
                bad[side] += 1
    lorentz_bad = twist_bad = 0
    for _ in range(samples):
        x = random_lorentz_quadruple(rng, 10 ** 4)
        trace = t_l_reduce(x)
        if reconstruct_quadruple(trace.word, trace.terminal, "lorentz") != x:
            lorentz_bad += 1
        if expand_exact("B", phi_map(x)).word != tuple(trace.word):
            twist_bad += 1
    elapsed = time.perf_counter() - t
    ok = not any(bad.values()) and not lorentz_bad and not twist_bad and elapsed < 60
    return ok, (f"T_B bad {bad['B']}, T_A bad {bad['A']}, T_L bad {lorentz_bad}, "
                f"intertwining bad {twist_bad} over {samples} each, {elapsed:.1f}s (limit 60s)")


def check_traces() -> tuple[bool, str]:
    notes = []
    word = expand("B", complex(0.3828008104, 0.2638108161), 20).word
    if format_word(word) != FIGURE_WORD:
        notes.append(f"planar word {format_word(word)}")
    letters, _ = real_expand(Fraction("0.4189513796210592"), 20)
    triples = mediant_convergents(letters)
    if triples != [_pairs(t) for t in CONVERGENT_TRIPLES]:
        notes.append("convergent triples differ")
    if euclid_reduce(246, 113).states != EUCLID_246:
        notes.append("reflective Euclid trace differs")
    if romik_euclid(246, 113).states != COMPARISON_246:
        notes.append("comparison trace differs")
    return not notes, "; ".join(notes) or "20-letter word, 21 triples and both (246,113) traces match"


def check_constants() -> tuple[bool, str]:
    pred = measure.predicted_frequencies()
    p_inv, p_swap = measure.first_digit_distribution()
    targets = [
        (p_inv, 0.84529946), (p_swap, 0.15470053), (pred["two_swaps"], 0.345299),
        (pred["three_swaps"], 0.246913), (pred["schmidt_1"], 0.084117),
        (pred["schmidt_2"], 0.007180), (pred["schmidt_3"], 0.002249),
    ]
    worst = max(abs(a - b) for a, b in targets)
    j_gap = max(abs(measure.closed_form_j(a) - measure.quadrature_j(a)) for a in range(5))
    ok = worst <= 5e-5 and j_gap <= 1e-8
    return ok, f"max constant gap {worst:.2e} (limit 5e-5), J closed form vs quadrature {j_gap:.2e} (limit 1e-8)"


def check_experiment_bounded() -> tuple[bool, str]:
    t = time.perf_counter()
    rep = experiment_bounded_quadruples(200)
    elapsed = time.perf_counter() - t
    gaps = {k: rep.observed[k] - v for k, v in PUBLISHED_BOUNDED.items()}
    worst = max(gaps, key=lambda k: abs(gaps[k]))
    ok = abs(gaps[worst]) <= 0.002 and elapsed < 300
    return ok, (f"{rep.sample_size} quadruples, worst {worst} {rep.observed[worst]:.4f} vs "
                f"{PUBLISHED_BOUNDED[worst]} (tol 0.002), {elapsed:.1f}s (limit 300s)")


def check_experiment_random() -> tuple[bool, str]:
    rep = experiment_random_points(count=100, steps=100, seed=0)
    dev = rep.deviations()
    worst = max(dev, key=lambda k: abs(dev[k]))
    ok = abs(dev[worst]) <= 0.03
    return ok, f"seed 0, worst {worst} {rep.observed[worst]:.4f} vs {rep.predicted[worst]:.4f} (tol 0.03)"


def _sample_words(rng: random.Random, count: int) -> list:
    pool = [w for n in range(1, 5) for w in normal_words(n, "swap")]
    return rng.sample(pool, count)


def check_measures() -> tuple[bool, str]:
    regions = [(c, k) for c in (True, False) for k in range(1, 5)]
    values = {(side, r): measure.region_measure(side, r) for side in ("A", "B") for r in regions}
    region_gap = max(abs(v - measure.REGION_MEASURE) for v in values.values())
    total = sum(v for (side, _), v in values.items() if side == "B")
    total_gap = abs(total - measure.TOTAL_MEASURE)

    rng = random.Random(7)
    farey_gap = 0.0
    for w in _sample_words(rng, 10):
        base = measure.farey_measure(w, "B")
        farey_gap = max(farey_gap, abs(measure.farey_measure(perp_word(w), "B") - base),
                        abs(measure.farey_measure(invert_word(w), "A") - base))

    gen = np.random.Generator(np.random.Philox(11))
    pts = [complex(0.5 + a, 0.5 + b) for a, b in gen.standard_cauchy((1000, 2))]
    sym_gap = max(measure.symmetry_defect(name, z) for name in measure.SYMMETRIES for z in pts)

    mass = measure.transfer_summary().total_mass
    ok = region_gap <= 1e-6 and total_gap <= 1e-6 and farey_gap <= 1e-5 and sym_gap <= 1e-12 \
        and abs(mass - 1) <= 1e-4
    return ok, (f"16 regions max gap {region_gap:.1e}, total gap {total_gap:.1e}, farey gap "
                f"{farey_gap:.1e}, symmetry gap {sym_gap:.1e}, transfer mass {mass:.7f}")


def check_swap_runs() -> tuple[bool, str]:
    quads = descartes_quadruples(100)
    failures = [q for q in quads if not is_root(swap_run_end(q))]
    return not failures, f"{len(failures)} failures over {len(quads)} primitive quadruples {failures[:3]}"


def check_height_graph() -> tuple[bool, str]:
    verts = list(lorentz_quadruples(50, primitive=True, nonneg=True))
    dist_bad = greedy_bad = 0
    for v in verts:
        trace = t_d_reduce(v)
        oracle = bfs_oracle(v, len(trace))
        if oracle.status != "ok" or oracle.distance != len(trace):
            dist_bad += 1
        for cur, nxt in zip(trace.states, trace.states[1:]):
            nbrs = graph_neighbors(cur)
            if nxt not in nbrs or nxt[0] != min(w[0] for w in nbrs):
                greedy_bad += 1
                break
    graph = height_subgraph(60)
    triangles = count_triangles(graph)
    rng = random.Random(3)
    sample = rng.sample(sorted(graph), 100)
    girths = {shortest_cycle_through(graph, v) for v in sample} - {None}
    ok = not dist_bad and not greedy_bad and triangles == 0 and girths == {4}
    return ok, (f"{len(verts)} quadruples: distance mismatches {dist_bad}, non-greedy steps "
                f"{greedy_bad}; a<=60 graph: {triangles} triangles, sampled shortest cycles {sorted(girths)}")


def check_capture(points: int = 100, qmax: int = 30) -> tuple[bool, str]:
    rng = np.random.Generator(np.random.Philox(5))
    misses = inconclusive = candidates = 0
    for _ in range(points):
        x, y = random_dyadic_point(rng, 200)
        rep = capture_check(GaussianProjectivePoint.from_rationals(x, y), qmax)
        misses += len(rep.misses)
        inconclusive += rep.status == "inconclusive"
        candidates += rep.candidates
    value, _ = return_time_integral()
    gap = abs(value - math.pi ** 2 / 6)
    ok = not misses and not inconclusive and gap <= 1e-4
    return ok, (f"{candidates} good approximations, {misses} misses, {inconclusive} inconclusive; "
                f"return-time integral gap {gap:.1e}")


CHECKS = {
    1: check_algebra, 2: check_termination, 3: check_traces, 4: check_constants,
    5: check_experiment_bounded, 6: check_experiment_random, 7: check_measures,
    8: check_swap_runs, 9: check_height_graph, 10: check_capture,
}


def _run(number: int, report) -> None:
    passed, detail = CHECKS[number]()
    report(number, passed, detail)
    assert passed, detail


def test_criterion_01_algebraic_identities(report):
    _run(1, report)


def test_criterion_02_termination_and_reconstruction(report):
    _run(2, report)


def test_criterion_03_published_traces(report):
    _run(3, report)


def test_criterion_04_closed_form_constants(report):
    _run(4, report)


def test_criterion_05_bounded_quadruple_frequencies(report):
    _run(5, report)


def test_criterion_06_random_point_frequencies(report):
    _run(6, report)


def test_criterion_07_measure_suite(report):
    _run(7, report)


def test_criterion_08_swap_runs_end_at_roots(report):
    _run(8, report)


def test_criterion_09_height_graph(report):
    _run(9, report)


def test_criterion_10_approximation_capture(report):
    _run(10, report)


if __name__ == "__main__":
    import sys

    failed = 0
    for number, check in CHECKS.items():
        passed, detail = check()
        failed += not passed
        print(f"criterion {number:2d}: {'PASS' if passed else 'FAIL'}  {detail}", flush=True)
    sys.exit(1 if failed else 0)
