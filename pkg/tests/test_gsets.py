import random
from itertools import product

import pytest

from rquiver.gsets import C2, FiniteGroup, GSet, Subgroup, equivariant_maps, induce


def brute_force_equivariant(x, y):
    """Oracle: scan all |y|^|x| functions for equivariance."""
    out = []
    for images in product(range(y.size), repeat=x.size):
        if all(images[x.apply(g, p)] == y.apply(g, images[p])
               for g in x.group.elements() for p in range(x.size)):
            out.append(images)
    return out


def gelfand_vertices():
    # points: 0 = star (fixed), 1 = plus, 2 = minus (swapped)
    return GSet(C2, 3, [[0, 1, 2], [0, 2, 1]])


def random_gset(rng, group, size):
    while True:
        perms = []
        ok = True
        for _ in group.generators:
            perms.append(rng.sample(range(size), size))
        try:
            return GSet.from_generator_perms(group, size, perms)
        except ValueError:
            continue


def test_group_validation():
    with pytest.raises(ValueError):
        FiniteGroup([[0, 1], [0, 1]])
    s3 = FiniteGroup.symmetric(3)
    assert s3.order == 6
    assert s3.mul(s3.identity, 4) == 4


def test_orbits_trivial_and_gelfand():
    t = GSet.trivial(C2, 3)
    assert t.orbits() == [(0,), (1,), (2,)]
    v = gelfand_vertices()
    assert v.orbits() == [(0,), (1, 2)]


def test_regular_action_transitive():
    s3 = FiniteGroup.symmetric(3)
    reg = GSet(s3, 6, [[s3.mul(g, x) for x in range(6)] for g in s3.elements()])
    assert len(reg.orbits()) == 1


def test_stabilizers_gelfand():
    v = gelfand_vertices()
    assert v.stabilizer(0) == Subgroup.full(C2)
    assert v.stabilizer(1) == Subgroup.trivial_in(C2)
    t = GSet.trivial(C2, 2)
    assert t.stabilizer(1) == Subgroup.full(C2)


def test_orbit_stabilizer():
    rng = random.Random(5)
    s3 = FiniteGroup.symmetric(3)
    for group in (C2, FiniteGroup.cyclic(3), s3):
        for _ in range(5):
            x = random_gset(rng, group, 4)
            for p in range(x.size):
                assert len(x.orbit_of(p)) * x.stabilizer(p).order == group.order


def test_induce_trivial_subgroup_point():
    triv = Subgroup.trivial_in(C2)
    hgrp, _ = triv.as_group()
    pt = GSet.trivial(hgrp, 1)
    ind, unit = induce(pt, triv)
    assert ind.size == 2
    assert len(ind.orbits()) == 1
    assert unit == [0]


def test_induce_full_subgroup_identity():
    full = Subgroup.full(C2)
    hgrp, embed = full.as_group()
    x = GSet(hgrp, 2, [[0, 1], [1, 0]])
    ind, unit = induce(x, full)
    assert ind.size == 2
    assert sorted(unit) == [0, 1]
    # same orbit structure
    assert [len(o) for o in ind.orbits()] == [2]


def test_induce_coset_enumeration_oracle():
    s3 = FiniteGroup.symmetric(3)
    # pick a transposition: an element of order 2
    t = next(g for g in s3.elements() if g != s3.identity and s3.mul(g, g) == s3.identity)
    sub = Subgroup(s3, {s3.identity, t})
    hgrp, _ = sub.as_group()
    pt = GSet.trivial(hgrp, 1)
    ind, _ = induce(pt, sub)
    cosets = GSet.coset_space(sub)
    assert ind.size == 3
    assert ind.size == cosets.size
    # isomorphic as G-sets: same orbit/stabilizer data and an equivariant bijection
    bijections = [f for f in equivariant_maps(ind, cosets) if len(set(f)) == ind.size]
    assert bijections


def test_equivariant_maps_swap():
    sw = GSet(C2, 2, [[0, 1], [1, 0]])
    maps = equivariant_maps(sw, sw)
    assert set(maps) == {(0, 1), (1, 0)}
    assert set(maps) == set(brute_force_equivariant(sw, sw))
    pt = GSet.trivial(C2, 1)
    assert equivariant_maps(sw, pt) == [(0, 0)]


def test_equivariant_maps_against_brute_force():
    rng = random.Random(9)
    for group in (C2, FiniteGroup.cyclic(3)):
        for _ in range(6):
            x = random_gset(rng, group, 3)
            y = random_gset(rng, group, 3)
            assert set(equivariant_maps(x, y)) == set(brute_force_equivariant(x, y))


def test_equivariant_maps_contain_identity_and_compose():
    rng = random.Random(13)
    x = random_gset(rng, C2, 4)
    maps = equivariant_maps(x, x)
    assert tuple(range(4)) in maps
    for f in maps:
        for g in maps:
            comp = tuple(f[g[p]] for p in range(4))
            assert comp in maps


def test_adjunction_counts():
    rng = random.Random(17)
    s3 = FiniteGroup.symmetric(3)
    cases = 0
    for group, sub_elems in [
        (C2, {0}), (C2, {0, 1}),
        (FiniteGroup.cyclic(4), {0, 2}),
        (s3, {s3.identity, next(g for g in s3.elements()
                                if g != s3.identity and s3.mul(g, g) == s3.identity)}),
    ]:
        sub = Subgroup(group, sub_elems)
        hgrp, _ = sub.as_group()
        for _ in range(4):
            x = random_gset(rng, hgrp, rng.randint(1, 3))
            y = random_gset(rng, group, rng.randint(1, 4))
            ind, unit = induce(x, sub)
            lhs = equivariant_maps(ind, y)
            rhs = equivariant_maps(x, y.restrict_to(sub))
            assert len(lhs) == len(rhs)
            # the bijection is restriction along the unit map
            restricted = {tuple(f[unit[p]] for p in range(x.size)) for f in lhs}
            assert restricted == set(rhs)
            cases += 1
    assert cases >= 12
