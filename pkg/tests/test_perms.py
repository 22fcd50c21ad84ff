from __future__ import annotations

import random

import pytest

from strongdich import (
    AffineMap,
    OrderCapExceeded,
    Permutation,
    PermutationGroup,
    affine_from_perm,
    affine_group,
    affine_to_perm,
    compose,
    generate_group,
    is_subgroup,
    join,
    k0_subgroup,
    orbit_sizes,
    orbits,
    setwise_stabilizer,
)


def aff(n, u, v):
    return affine_to_perm(AffineMap(n, u, v))


def test_permutation_validation():
    with pytest.raises(ValueError):
        Permutation((0, 0, 1))
    with pytest.raises(ValueError):
        Permutation((1, 2, 3))
    assert Permutation.identity(4).images == (0, 1, 2, 3)


def test_compose_identity_and_inverse():
    rng = random.Random(7)
    for _ in range(20):
        n = rng.randrange(1, 9)
        imgs = list(range(n))
        rng.shuffle(imgs)
        p = Permutation(tuple(imgs))
        assert compose(Permutation.identity(n), p) == p
        assert compose(p, Permutation.identity(n)) == p
        assert compose(p, p.inverse()) == Permutation.identity(n)


def test_compose_right_acts_first():
    # n=6: (x -> 5x) after (x -> x+1) is x -> 5x+5
    got = compose(aff(6, 0, 5), aff(6, 1, 1))
    assert got == aff(6, 5, 5)
    assert affine_from_perm(got) == AffineMap(6, 5, 5)


def test_compose_degree_mismatch():
    with pytest.raises(ValueError):
        compose(Permutation.identity(3), Permutation.identity(4))


def test_generate_group_trivial_and_swap():
    assert generate_group(3, []).order == 1
    swap = Permutation((1, 0))
    g = generate_group(2, [swap])
    assert g.order == 2 and swap in g


def test_generate_group_affine_order():
    assert affine_group(6).order == 12  # 6 * phi(6)


def test_generated_group_closure_invariants():
    g = affine_group(6)
    assert g.identity.is_identity()
    elems = set(g.elements)
    for a in g.elements:
        assert a.inverse() in elems
        for b in g.elements:
            assert compose(a, b) in elems


def test_order_cap():
    with pytest.raises(OrderCapExceeded):
        generate_group(8, [Permutation((1, 2, 3, 4, 5, 6, 7, 0))], max_order=5)


def test_orbits_examples():
    trivial = generate_group(6, [])
    assert orbits(trivial) == [[0], [1], [2], [3], [4], [5]]
    assert orbits(generate_group(6, [aff(6, 1, 1)])) == [[0, 1, 2, 3, 4, 5]]
    assert orbits(generate_group(6, [aff(6, 2, 1)])) == [[0, 2, 4], [1, 3, 5]]


def test_orbit_partition_properties():
    for n in (6, 10, 12):
        g = affine_group(n)
        for gens in ([aff(n, 2, 1)], [aff(n, 0, n - 1)], list(g.generators[:2])):
            h = generate_group(n, gens)
            parts = orbits(h)
            assert sum(len(o) for o in parts) == n
            assert sorted(x for o in parts for x in o) == list(range(n))
            for o in parts:
                assert h.order % len(o) == 0


def test_setwise_stabilizer_trivial_cases():
    g = affine_group(6)
    assert setwise_stabilizer(g, set()) == g
    assert setwise_stabilizer(g, range(6)) == g


def test_setwise_stabilizer_of_point_zero():
    # independent oracle: scan all 12 maps x -> v*x+u for (v*0+u) % 6 == 0
    expected = {(u, v) for u in range(6) for v in (1, 5) if (v * 0 + u) % 6 == 0}
    stab = setwise_stabilizer(affine_group(6), {0})
    got = {(affine_from_perm(p).translation, affine_from_perm(p).multiplier) for p in stab}
    assert got == expected == {(0, 1), (0, 5)}
    assert stab.order == 2


def test_stabilizer_equals_complement_stabilizer():
    rng = random.Random(3)
    g = affine_group(10)
    for _ in range(10):
        a = frozenset(rng.sample(range(10), rng.randrange(0, 11)))
        comp = frozenset(range(10)) - a
        sa = setwise_stabilizer(g, a)
        sc = setwise_stabilizer(g, comp)
        for p in sa.elements:
            assert p.image_of_set(comp) == comp
        assert sa == sc


def test_stabilizer_conjugation_covariance():
    rng = random.Random(11)
    g = affine_group(8)
    for _ in range(8):
        a = frozenset(rng.sample(range(8), 3))
        h = rng.choice(g.elements)
        moved = h.image_of_set(a)
        lhs = setwise_stabilizer(g, moved)
        conj = {compose(compose(h, p), h.inverse()) for p in setwise_stabilizer(g, a)}
        assert lhs.element_set() == conj


def test_is_subgroup():
    g = affine_group(6)
    k0 = k0_subgroup(6)
    trivial = generate_group(6, [])
    assert is_subgroup(g, trivial)
    assert is_subgroup(g, g)
    assert is_subgroup(g, k0)
    # odd translation lies outside K0
    h = generate_group(6, [aff(6, 3, 1)])
    assert not is_subgroup(k0, h)
    with pytest.raises(ValueError):
        is_subgroup(g, affine_group(4))


def test_lagrange():
    g = affine_group(12)
    for gens in ([aff(12, 4, 1)], [aff(12, 0, 5)], [aff(12, 6, 11)]):
        h = generate_group(12, gens)
        assert is_subgroup(g, h)
        assert g.order % h.order == 0


def test_join():
    h = generate_group(6, [aff(6, 2, 1)])
    assert join(h, []) == h
    q = aff(6, 3, 1)
    j = join(generate_group(6, []), [q])
    assert j.order == 2
    full_translations = join(h, [q])
    assert full_translations.order == 6
    assert aff(6, 1, 1) in full_translations
    with pytest.raises(ValueError):
        join(h, [Permutation.identity(4)])


def test_group_canonical_equality_and_hash():
    a = generate_group(6, [aff(6, 2, 1)])
    b = generate_group(6, [aff(6, 4, 1)])  # same subgroup, other generator
    assert a == b and hash(a) == hash(b)
    assert len({a, b}) == 1
