from __future__ import annotations

import random
from fractions import Fraction

import numpy as np
import pytest

from strongdich import (
    FinitePoset,
    IncidenceFunction,
    PosetError,
    convolve,
    identity_function,
    moebius,
    moebius_invert,
    zeta,
)
from strongdich.posets import random_poset


def chain(n: int) -> FinitePoset:
    return FinitePoset.from_relation(list(range(1, n + 1)), lambda x, y: x <= y)


def antichain(n: int) -> FinitePoset:
    return FinitePoset.from_relation(list(range(n)), lambda x, y: x == y)


def divisor_poset(n: int) -> FinitePoset:
    divs = [d for d in range(1, n + 1) if n % d == 0]
    return FinitePoset.from_relation(divs, lambda x, y: y % x == 0)


def test_axiom_violations_name_the_pair():
    bad_reflexive = np.array([[0, 1], [0, 1]], dtype=bool)
    with pytest.raises(PosetError, match="reflexivity.*'a'"):
        FinitePoset(["a", "b"], bad_reflexive)
    bad_antisym = np.array([[1, 1], [1, 1]], dtype=bool)
    with pytest.raises(PosetError, match="antisymmetry"):
        FinitePoset(["a", "b"], bad_antisym)
    bad_trans = np.array(
        [[1, 1, 0], [0, 1, 1], [0, 0, 1]], dtype=bool
    )  # a<=b<=c but not a<=c
    with pytest.raises(PosetError, match="transitivity"):
        FinitePoset(["a", "b", "c"], bad_trans)


def test_zeta_examples():
    p = antichain(3)
    assert zeta(p) == identity_function(p)
    c = chain(2)
    z = zeta(c)
    assert z(1, 2) == 1 and z(2, 1) == 0
    for x in c.elements:
        assert z(x, x) == 1


def test_moebius_on_chain():
    p = chain(3)
    mu = moebius(p)
    assert mu(1, 1) == 1
    assert mu(1, 2) == -1
    assert mu(1, 3) == 0
    assert mu(2, 1) == 0


def test_moebius_boolean_lattice_of_two_element_set():
    subsets = [frozenset(), frozenset("a"), frozenset("b"), frozenset("ab")]
    p = FinitePoset.from_relation(subsets, lambda x, y: x <= y)
    mu = moebius(p)
    assert mu(subsets[0], subsets[3]) == 1
    assert mu(subsets[0], subsets[1]) == -1


def test_moebius_divisor_poset_matches_number_theory():
    classical = {1: 1, 2: -1, 3: -1, 4: 0, 6: 1, 12: 0}
    mu = moebius(divisor_poset(12))
    for d, expected in classical.items():
        assert mu(1, d) == expected


def test_moebius_support_and_diagonal():
    p = random_poset(7, random.Random(1))
    mu = moebius(p)
    for i in range(len(p)):
        assert mu.at(i, i) == 1
        for j in range(len(p)):
            if not p.leq[i, j]:
                assert mu.at(i, j) == 0


def test_convolution_identity_and_moebius_inverse():
    p = chain(3)
    mu, z, ident = moebius(p), zeta(p), identity_function(p)
    alpha = _random_incidence(p, random.Random(2))
    assert convolve(ident, alpha) == alpha
    assert convolve(alpha, ident) == alpha
    assert convolve(mu, z) == ident
    assert convolve(z, mu) == ident


def _random_incidence(p: FinitePoset, rng: random.Random) -> IncidenceFunction:
    m = len(p)
    vals = [
        [
            Fraction(rng.randrange(-6, 7), rng.randrange(1, 5)) if p.leq[i, j] else 0
            for j in range(m)
        ]
        for i in range(m)
    ]
    return IncidenceFunction(p, vals)


def test_moebius_inversion_round_trip():
    rng = random.Random(9)
    for _ in range(10):
        p = random_poset(4, rng)
        alpha = _random_incidence(p, rng)
        beta = convolve(alpha, zeta(p))
        assert moebius_invert(beta) == alpha
    p = chain(4)
    assert moebius_invert(zeta(p)) == identity_function(p)
    assert moebius_invert(identity_function(p)) == moebius(p)


def test_zeta_cancellation():
    rng = random.Random(4)
    p = random_poset(6, rng)
    alpha = _random_incidence(p, rng)
    beta = _random_incidence(p, rng)
    if alpha != beta:
        assert convolve(alpha, zeta(p)) != convolve(beta, zeta(p))


def test_random_posets_moebius_zeta_identity():
    rng = random.Random(123)
    for _ in range(25):
        p = random_poset(8, rng)
        ident = identity_function(p)
        assert convolve(moebius(p), zeta(p)) == ident
        assert convolve(zeta(p), moebius(p)) == ident


def test_incidence_support_violation_rejected():
    p = antichain(2)
    with pytest.raises(ValueError, match="support"):
        IncidenceFunction(p, [[1, 1], [0, 1]])
