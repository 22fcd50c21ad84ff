from __future__ import annotations

import pytest

from strongdich import (
    AffineMap,
    BudgetExceeded,
    Dichotomy,
    affine_group,
    affine_to_perm,
    bottom_moebius_full,
    c_of_l,
    compose,
    enumerate_subgroups,
    generate_group,
    has_only_even_orbits,
    is_rigid,
    is_subgroup,
    join,
    k0_subgroup,
    mq_elements,
    mq_h_count,
    orbit_sizes,
    quasipolarities,
    strong_count_bruteforce,
    strong_count_formula,
    verify_theorem,
)
from strongdich.cache import build_class_data
from strongdich.lattice import _mask_from_indices


def aff(n, u, v):
    return affine_to_perm(AffineMap(n, u, v))


def test_dichotomy_validation():
    with pytest.raises(ValueError):
        Dichotomy(6, frozenset({0, 1}))  # wrong size
    with pytest.raises(ValueError):
        Dichotomy(5, frozenset({0, 1}))  # odd modulus
    with pytest.raises(ValueError):
        Dichotomy(6, frozenset({0, 1, 2}), quasipolarity=AffineMap(6, 2, 1))
    d = Dichotomy(6, frozenset({0, 1, 2}), quasipolarity=AffineMap(6, 3, 1))
    assert d.complement == frozenset({3, 4, 5})
    assert d.as_mask() == 0b000111


def test_mq_elements_n2():
    q = AffineMap(2, 1, 1)
    ds = list(mq_elements(q))
    assert {d.members for d in ds} == {frozenset({0}), frozenset({1})}


def test_mq_elements_n6():
    q = AffineMap(6, 3, 1)
    ds = list(mq_elements(q))
    assert len(ds) == 8
    assert len({d.members for d in ds}) == 8
    for d in ds:
        assert {q(x) for x in d.members} == d.complement  # qD = complement(D)


def test_mq_elements_rejects_non_quasipolarity():
    with pytest.raises(ValueError):
        list(mq_elements(AffineMap(6, 2, 1)))


def test_is_rigid_n2():
    g = affine_group(2)
    assert is_rigid(Dichotomy(2, frozenset({0})), g)


def test_renaissance_dichotomy_is_rigid():
    # the classical (K/D) = ({0,3,4,7,8,9}, rest) in Z/12
    g = affine_group(12)
    d = Dichotomy(12, frozenset({0, 3, 4, 7, 8, 9}))
    # independent oracle: scan all 48 maps x -> v*x+u directly
    hits = [
        (u, v)
        for u in range(12)
        for v in (1, 5, 7, 11)
        if {(v * x + u) % 12 for x in d.members} == d.members
    ]
    assert hits == [(0, 1)]
    assert is_rigid(d, g)
    # its quasipolarity is x -> 5x + 2
    assert {(5 * x + 2) % 12 for x in d.members} == d.complement
    assert Dichotomy(12, d.members, quasipolarity=AffineMap(12, 2, 5)).quasipolarity


def test_not_rigid_when_translation_invariant():
    g = affine_group(12)
    evens = Dichotomy(12, frozenset(range(0, 12, 2)))
    assert not is_rigid(evens, g)


def test_strong_count_bruteforce_k1():
    assert strong_count_bruteforce(1) == 1


def test_strong_count_bruteforce_guards():
    with pytest.raises(ValueError, match="even"):
        strong_count_bruteforce(2)
    with pytest.raises(BudgetExceeded):
        strong_count_bruteforce(21, cutoff=19)
    # exploration flag unlocks even k
    assert isinstance(strong_count_bruteforce(2, allow_even=True), int)


def test_strong_count_formula_guards():
    with pytest.raises(ValueError, match="odd"):
        strong_count_formula(4)


def test_strong_counts_agree_small_odd_k(class_data):
    for k in (1, 3, 5, 7, 9):
        data = class_data(2 * k)
        assert strong_count_formula(k, data=data) == strong_count_bruteforce(k)


def test_each_rigid_dichotomy_has_unique_quasipolarity():
    # collect rigid dichotomies per quasipolarity and check global disjointness
    for k in (3, 5):
        n = 2 * k
        g = affine_group(n)
        seen: dict[frozenset, tuple] = {}
        for q in quasipolarities(n):
            for d in mq_elements(q):
                if is_rigid(d, g):
                    assert d.members not in seen
                    seen[d.members] = (q.translation, q.multiplier)
        assert len(seen) % g.order == 0


def test_rigid_orbit_is_free_and_covariant():
    n = 10
    g = affine_group(n)
    q = quasipolarities(n)[0]
    rigid = next(d for d in mq_elements(q) if is_rigid(d, g))
    orbit = {frozenset(p.images[x] for x in rigid.members) for p in g.elements}
    assert len(orbit) == g.order
    qperm = affine_to_perm(q)
    for p in g.elements:
        moved = frozenset(p.images[x] for x in rigid.members)
        conj = compose(compose(p, qperm), p.inverse())
        assert frozenset(conj.images[x] for x in moved) == frozenset(range(n)) - moved
        assert is_rigid(Dichotomy(n, moved), g)


def test_mq_h_count_trivial_subgroup_gives_all():
    for n in (6, 10):
        q = quasipolarities(n)[0]
        trivial = generate_group(n, [])
        assert mq_h_count(q, trivial, method="direct") == 1 << (n // 2)
        assert mq_h_count(q, trivial, method="closed") == 1 << (n // 2)


def test_mq_h_count_outside_k0_is_zero():
    n = 6
    k0 = k0_subgroup(n)
    for q in quasipolarities(n):
        h = generate_group(n, [aff(n, 3, 1)])
        assert not is_subgroup(k0, h)
        assert mq_h_count(q, h, method="direct") == 0
        assert mq_h_count(q, h, method="closed") == 0


def test_mq_h_count_example_n6():
    q = AffineMap(6, 3, 1)
    h = generate_group(6, [aff(6, 2, 1)])
    assert is_subgroup(k0_subgroup(6), h)
    assert mq_h_count(q, h, method="direct") == 2
    assert mq_h_count(q, h, method="closed") == 2


def test_mq_h_count_lemma_all_pairs_small():
    for k in (3, 5):
        n = 2 * k
        lat = enumerate_subgroups(affine_group(n))
        k0 = k0_subgroup(n)
        for q in quasipolarities(n):
            for sid in range(lat.subgroup_count):
                h = lat.subgroup(sid)
                direct = mq_h_count(q, h, method="direct")
                if is_subgroup(k0, h):
                    lgrp = join(h, [affine_to_perm(q)])
                    assert direct == 1 << len(orbit_sizes(lgrp))
                    assert direct == mq_h_count(q, h, method="closed")
                else:
                    assert direct == 0


def test_even_orbit_characterization_small():
    n = 6
    lat = enumerate_subgroups(affine_group(n))
    k0 = k0_subgroup(n)
    trivial = generate_group(n, [])
    assert not has_only_even_orbits(trivial)
    assert has_only_even_orbits(generate_group(n, [aff(n, 3, 1)]))
    for sid in range(lat.subgroup_count):
        h = lat.subgroup(sid)
        assert has_only_even_orbits(h) == (not is_subgroup(k0, h))


def test_c_of_l_quasipolarity_case():
    n = 6
    lat = enumerate_subgroups(affine_group(n))
    for q in quasipolarities(n):
        lgrp = generate_group(n, [affine_to_perm(q)])
        assert c_of_l(lgrp, lat) == 1  # equals -mu(1, C2) = 1


def test_c_of_l_equals_minus_moebius_aff6():
    n = 6
    lat = enumerate_subgroups(affine_group(n))
    mu_full = bottom_moebius_full(lat)
    k0 = k0_subgroup(n)
    checked = 0
    for sid in range(lat.subgroup_count):
        lgrp = lat.subgroup(sid)
        if is_subgroup(k0, lgrp):
            continue
        assert c_of_l(lgrp, lat, mu_full=mu_full) == -mu_full[sid]
        checked += 1
    assert checked > 0


def test_c_of_l_rejects_subgroups_of_k0():
    n = 6
    lat = enumerate_subgroups(affine_group(n))
    with pytest.raises(ValueError):
        c_of_l(generate_group(n, []), lat)


def test_black_side_identity_small():
    # s(2k) = (1/|G|) sum_q sum_{H<=K0} mu(1,H) 2^(#orbits of <H,q>)
    for k in (3, 5):
        n = 2 * k
        lat = enumerate_subgroups(affine_group(n))
        mu_full = bottom_moebius_full(lat)
        ig = lat.indexed
        k0 = k0_subgroup(n)
        k0_mask = _mask_from_indices(ig.indices_of(k0.elements), ig.order)
        total = 0
        for q in quasipolarities(n):
            qi = ig.index_of(affine_to_perm(q))
            for sid, mask in enumerate(lat.masks):
                if mask & k0_mask != mask or mu_full[sid] == 0:
                    continue
                joined = ig.close(list(lat.indices_of(sid)) + [qi])
                total += mu_full[sid] * (1 << len(ig.orbit_sizes_of(joined)))
        assert total % lat.group.order == 0
        assert total // lat.group.order == strong_count_bruteforce(k)


def test_verify_theorem_small(class_data):
    for k in (1, 3):
        report = verify_theorem(k, data=class_data(2 * k))
        assert report.theorem_holds
        assert report.qrig_at_minus_one == -report.s_value
        assert report.s_bruteforce == report.s_value
    with pytest.raises(ValueError):
        verify_theorem(2)


def test_bruteforce_jobs_deterministic():
    assert strong_count_bruteforce(7, jobs=1) == strong_count_bruteforce(7, jobs=3)
