import random

import pytest

from superapollonian.gaussian import (
    FIXED_POINTS,
    IDENTITY,
    GaussianInteger as G,
    GaussianProjectivePoint as P,
    gi_gcd,
    mobius_apply,
    parity_class,
)
from superapollonian.group import LETTERS, MOBIUS, Letter


def test_ring_basics():
    assert G(1, 1) * G(1, -1) == G(2)
    assert G(3, -2).conj() == G(3, 2)
    assert G(2, 1).norm() == 5


def test_division_with_remainder_is_small():
    rng = random.Random(1)
    for _ in range(500):
        a = G(rng.randint(-99, 99), rng.randint(-99, 99))
        b = G(rng.randint(-20, 20), rng.randint(-20, 20))
        if not b:
            continue
        q, r = divmod(a, b)
        assert q * b + r == a
        assert 2 * r.norm() <= b.norm()


def test_gcd_examples():
    assert gi_gcd(G(3, 1), G(1, 1)) == G(1, 1)
    assert gi_gcd(2, G(1, 1)) == G(1, 1)
    # gcd(a, 0) is a with its unit stripped
    assert gi_gcd(G(-3, -1), 0) == G(3, 1).normalized()
    assert gi_gcd(G(0, 5), 0) == G(5)
    with pytest.raises(ValueError):
        gi_gcd(0, 0)


def test_gcd_divides_both():
    rng = random.Random(2)
    for _ in range(300):
        a = G(rng.randint(-50, 50), rng.randint(-50, 50))
        b = G(rng.randint(-50, 50), rng.randint(-50, 50))
        if not a and not b:
            continue
        g = gi_gcd(a, b)
        assert g.divides(a) and g.divides(b)
        assert g.re > 0 and g.im >= 0


def test_projective_point_rejects_zero_pair():
    with pytest.raises(ValueError):
        P(G(0), G(0))


def test_canonical_form_is_unique():
    z = P(G(2, 2), G(0, 4)).canonical()
    assert z == P.of(G(1, 1), G(0, 2))
    assert z.same_point(P(G(1, 1), G(0, 2)))
    assert z.is_canonical()


def test_from_rationals():
    z = P.from_rationals("1/2", "3/4")
    assert z.real_imag() == (pytest.approx(0.5), pytest.approx(0.75))
    assert complex(z) == complex(0.5, 0.75)


def test_generator_action_on_pairs():
    third = P.of(1, 3)
    assert mobius_apply(MOBIUS[Letter.S4], third) == P.of(-1, 3)
    # s2 acts on (p, q) as (conj p, 2 conj p - conj q)
    p, q = G(2, 1), G(3, -5)
    image = MOBIUS[Letter.S2].apply_pair(p, q)
    assert P(*image).same_point(P(p.conj(), 2 * p.conj() - q.conj()))


def test_parity_classes():
    assert parity_class(P.of(0, 1)) == "0"
    assert parity_class(P.of(1, 3)) == "1"
    assert parity_class(P.of(G(1, 1), 2)) == "1/(1-i)"
    assert FIXED_POINTS["1/(1-i)"].same_point(P.of(G(1, 1), 2))


def test_parity_class_is_invariant_under_generators():
    rng = random.Random(3)
    for _ in range(300):
        p = G(rng.randint(-40, 40), rng.randint(-40, 40))
        q = G(rng.randint(-40, 40), rng.randint(-40, 40))
        if not (p or q) or gi_gcd(p, q).norm() != 1:
            continue
        z = P(p, q)
        for l in LETTERS:
            assert parity_class(mobius_apply(MOBIUS[l], z)) == parity_class(z)


def test_mobius_inverse_and_jacobian():
    m = MOBIUS[Letter.S4P]
    assert (m @ m.inverse()).projectively_equal(IDENTITY)
    assert (m @ m).projectively_equal(IDENTITY)
    z = complex(0.3, 0.7)
    h = 1e-6
    num = abs(m.apply_complex(z + h) - m.apply_complex(z)) / h
    assert m.jacobian(z) == pytest.approx(num ** 2, rel=1e-5)


def test_mobius_action_respects_composition():
    rng = random.Random(22)
    maps = list(MOBIUS.values())
    for _ in range(1000):
        s, t = rng.choice(maps), rng.choice(maps)
        p = G(rng.randint(-30, 30), rng.randint(-30, 30))
        q = G(rng.randint(-30, 30), rng.randint(-30, 30))
        if not p and not q:
            continue
        z = P(p, q)
        assert mobius_apply(s @ t, z).same_point(mobius_apply(s, mobius_apply(t, z)))
