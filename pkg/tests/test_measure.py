import math
import random

import numpy as np
import pytest

from superapollonian import measure
from superapollonian.gaussian import FIXED_POINTS
from superapollonian.group import SWAPS, Letter, invert_word, normal_words, perp_word


def test_density_examples():
    assert measure.f_b(complex(2, 0.5)) == pytest.approx(math.pi / 4, rel=1e-14)
    assert measure.f_b(complex(0.5, 0.25)) == pytest.approx(math.pi / (4 * (3 / 16) ** 2), rel=1e-14)
    assert measure.f_b(complex(FIXED_POINTS["1+i"])) == math.inf
    assert measure.f_b(complex("inf")) == math.inf


@pytest.mark.parametrize("side,z", [
    ("B", complex(0.3, 0.4)), ("B", complex(0.1, 0.9)), ("B", complex(2.5, -0.7)),
    ("B", complex(-0.4, 0.3)), ("A", complex(0.7, 1.3)), ("A", complex(0.4, 0.45)),
])
def test_density_matches_direct_integration(side, z):
    value, err = measure.density_by_integration(side, z)
    assert measure.density(side, z) == pytest.approx(value, rel=1e-8, abs=10 * err)


def test_a_density_is_a_pullback():
    rng = random.Random(17)
    for _ in range(1000):
        w = complex(rng.uniform(-3, 3), rng.uniform(-3, 3))
        assert measure.f_a(w) == measure.f_b(measure.rho(w))
        assert measure.rho_inverse(measure.rho(w)) == pytest.approx(w, abs=1e-12)


def test_density_grid_shape():
    grid = measure.density_grid("B", [0.1, 0.2, 0.3], [0.4, 0.6])
    assert grid.shape == (2, 3)
    assert grid[1, 0] == measure.f_b(complex(0.1, 0.6))


def test_region_measures():
    assert measure.region_measure("B", (False, 3)) == pytest.approx(math.pi ** 2 / 4, abs=1e-6)
    total = sum(measure.region_measure("B", (c, k)) for c in (True, False) for k in range(1, 5))
    assert total == pytest.approx(2 * math.pi ** 2, abs=1e-6)


def test_farey_measures_of_single_letters_are_the_regions():
    for l in SWAPS:
        assert measure.farey_measure((l,)) == pytest.approx(math.pi ** 2 / 4, abs=1e-7)


def test_perp_and_inverse_preserve_farey_measure():
    w = (Letter.S1, Letter.S2)
    base = measure.farey_measure(w)
    assert measure.farey_measure(perp_word(w)) == pytest.approx(base, abs=1e-8)
    assert measure.farey_measure(invert_word(w), "A") == pytest.approx(base, abs=1e-8)


def test_two_swap_frequency_from_farey_measures():
    words = [w for w in normal_words(2) if all(l.is_swap for l in w)]
    assert len(words) == 12
    total = sum(measure.farey_measure(w) for w in words)
    assert total / measure.TOTAL_MEASURE == pytest.approx(0.345299, abs=1e-4)
    assert total / measure.TOTAL_MEASURE == pytest.approx(measure.predicted_frequencies()["two_swaps"],
                                                          abs=1e-8)


def test_closed_forms():
    assert measure.closed_form_j(1) == pytest.approx(math.pi * (1 - 4 / (3 * math.sqrt(3))), rel=1e-14)
    assert measure.closed_form_j(1) == pytest.approx(0.723193, abs=1e-6)
    assert measure.closed_form_i(4) == pytest.approx(2 * math.pi * (4 / math.sqrt(15) - 1), rel=1e-14)
    assert measure.closed_form_i(4) == pytest.approx(0.2060606, abs=1e-7)
    assert measure.closed_form_j(0) == math.pi
    for a in (0, 0.3, 0.5, 1, 2, 3, 4):
        assert measure.closed_form_j(a) == pytest.approx(measure.quadrature_j(a), abs=1e-10)
    for a in (1.5, 2, 4):
        assert measure.closed_form_i(a) == pytest.approx(measure.quadrature_i(a), abs=1e-10)
    with pytest.raises(ValueError):
        measure.closed_form_i(1)


def test_predicted_frequencies():
    pred = measure.predicted_frequencies()
    assert pred["two_swaps"] == pytest.approx(0.345299, abs=1e-6)
    assert pred["three_swaps"] == pytest.approx(0.246913, abs=1e-6)
    assert pred["schmidt_1"] == pytest.approx(0.084117, abs=1e-6)
    assert pred["schmidt_2"] == pytest.approx(0.007180, abs=1e-6)
    assert pred["schmidt_3"] == pytest.approx(0.002249, abs=1e-6)
    assert pred["alt_run_2"] == pytest.approx(measure.closed_form_j(1) / (8 * math.pi))
    p_inv, p_swap = measure.first_digit_distribution()
    assert p_inv == pytest.approx(0.84529946, abs=1e-8)
    assert p_swap == pytest.approx(0.15470053, abs=1e-8)
    assert p_inv + p_swap == pytest.approx(1, abs=1e-15)


def test_transfer_operator():
    summary = measure.transfer_summary(100_000)
    assert summary.total_mass == pytest.approx(1, abs=1e-3)
    assert summary.swap_mass == pytest.approx(measure.first_digit_distribution()[1], abs=1e-3)
    assert 0.3 < summary.second_digit_swap < 0.4


def test_transfer_on_sampled_values_matches_callable():
    grid = measure.fibonacci_sphere(20_000)
    f = lambda y: 1 + y[:, 2] ** 2
    direct = measure.transfer_apply(f, grid[:200])
    sampled = measure.transfer_apply(f(grid), grid[:200], grid)
    assert np.max(np.abs(direct - sampled)) < 0.2 * np.max(direct)
    with pytest.raises(ValueError):
        measure.transfer_apply(f(grid), grid[:10])


def test_sphere_points_are_on_the_sphere():
    pts = measure.fibonacci_sphere(1000)
    assert np.allclose(np.sum(pts ** 2, axis=1), 1)
    branch, image = measure.sphere_map(pts)
    ok = branch >= 0
    assert np.allclose(np.sum(image[ok] ** 2, axis=1), 1)


def test_extension_is_a_bijection_on_regions():
    rep = measure.extension_region_check(samples=2000, seed=0)
    assert rep.region_violations == 0
    assert rep.roundtrip_failures == 0
    assert rep.max_roundtrip_error < 1e-9


def test_density_symmetries():
    gen = np.random.Generator(np.random.Philox(18))
    pts = [complex(0.5 + a, 0.5 + b) for a, b in gen.standard_cauchy((1000, 2))]
    for name in measure.SYMMETRIES:
        assert max(measure.symmetry_defect(name, z) for z in pts) < 1e-12


def test_density_is_a_fixed_point_of_the_transfer():
    rng = random.Random(19)
    for _ in range(300):
        z = complex(rng.uniform(-2, 3), rng.uniform(-2, 3))
        assert measure.invariance_defect(z) < 1e-10


def test_rectangle_invariance():
    rng = random.Random(20)
    for _ in range(20):
        x0, y0 = rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5)
        rect = (x0, y0, x0 + rng.uniform(0.05, 0.4), y0 + rng.uniform(0.05, 0.4))
        direct, pulled = measure.rectangle_invariance(rect, order=24)
        assert pulled == pytest.approx(direct, rel=1e-6)
