import random
from fractions import Fraction

import pytest

from ordercone.errors import NotGenerating, NotPointed, NotPositive
from ordercone.lattice import random_product_space, random_space
from ordercone.rational import add, neg, rank, sub, vec
from ordercone.space import validate

V1, V2, V3, V4 = (vec(v) for v in ([1, 0, 1], [0, 1, 1], [-1, 0, 1], [0, -1, 1]))
W = vec([1, 1, 0])
ZERO3 = vec([0, 0, 0])


@pytest.fixture(scope="module")
def fourray():
    return validate([V1, V2, V3, V4], 3)


def test_validate_examples():
    s = validate([[1, 0, 0], [0, 1, 0], [0, 0, 1]], 3)
    assert s.validation.pointed and s.validation.generating and s.validation.preriesz
    with pytest.raises(NotPointed):
        validate([[1, 0], [-1, 0]], 2)
    with pytest.raises(NotGenerating):
        validate([[1, 0, 0], [0, 1, 0]], 3)


def test_order_examples(fourray):
    assert fourray.leq(ZERO3, V1)
    assert fourray.leq(W, V1) and sub(V1, W) == V4
    assert not fourray.contains_positive(W)


def test_upper_bounds_offsets(fourray):
    s = add(V1, V2)
    ub = fourray.upper_bounds([s, neg(s)])
    assert ub.offsets == tuple(abs(v) for v in fourray.values(s))
    # facets in order f12, f41, f23, f34 evaluated at (1,1,2)
    assert ub.offsets == vec([0, 2, 2, 4])
    assert fourray.upper_bounds([ZERO3]).offsets == vec([0, 0, 0, 0])
    x = vec([2, -1, 5])
    ub_x = fourray.upper_bounds([x])
    assert ub_x.contains(x) and ub_x.contains(add(x, V3)) and not ub_x.contains(sub(x, V3))


def test_infimum_examples(fourray):
    x = vec([1, 2, 7])
    assert fourray.infimum([x]) == x
    std2 = validate([[1, 0], [0, 1]], 2)
    assert std2.infimum([vec([1, 0]), vec([0, 1])]) == vec([0, 0])
    assert fourray.infimum([V1, V2]) is None
    assert fourray.infimum([V1, V3]) == ZERO3
    assert std2.supremum([vec([1, 0]), vec([0, 1])]) == vec([1, 1])


def test_disjointness_examples(fourray):
    for method in ("oracle", "fast"):
        verdict = fourray.is_disjoint(V1, V2, method)
        assert not verdict.disjoint
        assert verdict.witness == W
        assert fourray.is_disjoint(V1, V3, method).disjoint
        assert not fourray.is_disjoint(V1, V1, method).disjoint
        assert fourray.is_disjoint(ZERO3, V1, method).disjoint
    w = fourray.is_disjoint(V1, V2).witness
    assert fourray.leq(w, V1) and fourray.leq(w, V2) and not fourray.contains_positive(neg(w))


def test_general_witness_lies_in_one_upper_bound_set(fourray):
    x, y = vec([1, 0, 0]), vec([0, 1, 3])
    verdict = fourray.is_disjoint(x, y)
    assert not verdict.disjoint
    sym = fourray.upper_bounds([add(x, y), neg(add(x, y))])
    anti = fourray.upper_bounds([sub(x, y), sub(y, x)])
    assert sym.contains(verdict.witness) != anti.contains(verdict.witness)


def test_D_and_symmetric_interval_examples(fourray):
    w, wt = add(V1, V2), add(V3, V4)
    assert fourray.is_D_disjoint(V1, V2)
    assert fourray.is_D_disjoint(w, wt)
    assert not fourray.is_D_disjoint(V1, V1)
    assert fourray.is_symmetric_interval_disjoint(V1, V2)
    assert not fourray.is_symmetric_interval_disjoint(w, wt)
    p = fourray.interval(neg(w), w).intersect(fourray.interval(neg(wt), wt))
    assert p.contains(vec([1, -1, 0]))
    assert fourray.is_symmetric_interval_disjoint(V1, ZERO3)
    with pytest.raises(NotPositive):
        fourray.is_D_disjoint(W, V1)
    with pytest.raises(NotPositive):
        fourray.is_symmetric_interval_disjoint(V1, W)


def test_atoms(fourray):
    assert fourray.atoms() == (V1, V2, V3, V4)
    assert all(fourray.is_atom(v) for v in (V1, V2, V3, V4))
    assert not fourray.is_atom(add(V1, V2))
    assert not fourray.is_atom(ZERO3)
    std = validate([[1, 0, 0], [0, 1, 0], [0, 0, 1]], 3)
    assert set(std.atoms()) == {vec([1, 0, 0]), vec([0, 1, 0]), vec([0, 0, 1])}


def test_subspaces(fourray):
    assert fourray.subspaces_disjoint((V1,), (V3,))
    assert not fourray.subspace_is_directed((W,))
    assert fourray.subspace_is_directed((V1,))
    assert fourray.subspace_is_directed((V1, V2))


# -- seeded properties ------------------------------------------------------------

def _spaces():
    for seed in range(12):
        for dim in (2, 3, 4):
            yield random_space(dim, dim + seed % 3, seed)
            yield random_product_space(dim, seed)


def _random_vector(rng, dim):
    return vec(Fraction(rng.randint(-4, 4), rng.randint(1, 2)) for _ in range(dim))


def _random_positive(rng, space):
    x = [Fraction(0)] * space.dim
    for g in space.extreme_rays:
        c = rng.choice((0, 0, 1, 2))
        x = [a + c * b for a, b in zip(x, g)]
    return tuple(x)


def test_symmetry_and_self_disjointness():
    rng = random.Random(11)
    for space in _spaces():
        for _ in range(5):
            x, y = _random_vector(rng, space.dim), _random_vector(rng, space.dim)
            assert space.is_disjoint(x, y).disjoint == space.is_disjoint(y, x).disjoint
            assert space.is_disjoint(x, x).disjoint == (not any(x))


def test_positive_pair_bridge():
    rng = random.Random(12)
    for space in _spaces():
        zero = (Fraction(0),) * space.dim
        for _ in range(4):
            x, y = _random_positive(rng, space), _random_positive(rng, space)
            assert space.is_disjoint(x, y).disjoint == (space.infimum([x, y]) == zero)


def test_infimum_dominates_sampled_lower_bounds():
    rng = random.Random(13)
    checked = 0
    for space in list(_spaces())[:12]:
        a = [_random_positive(rng, space) for _ in range(2)]
        g = space.infimum(a)
        if g is None:
            continue
        assert all(space.leq(g, v) for v in a)
        lower = space.lower_bounds(a)
        samples = 0
        while samples < 2000 // 12:
            z = vec(Fraction(rng.randint(-8, 8), 2) for _ in range(space.dim))
            if lower.contains(z):
                samples += 1
                assert space.leq(z, g)
        checked += 1
    assert checked > 0


def test_disjoint_positive_parts_give_disjoint_subspaces():
    for space in _spaces():
        rays = space.extreme_rays
        for i, a in enumerate(rays):
            for b in rays[i + 1:]:
                if space.is_disjoint(a, b, witness=False).disjoint:
                    assert space.subspaces_disjoint((a,), (b,))
                    assert space.subspace_is_directed((a,))


def test_pairwise_disjoint_tuples_are_independent():
    rng = random.Random(14)
    for space in _spaces():
        # greedy pairwise-disjoint tuple from random vectors and extreme rays
        pool = list(space.extreme_rays) + [_random_vector(rng, space.dim) for _ in range(6)]
        chosen = []
        for v in pool:
            if any(v) and all(space.is_disjoint(v, c, "fast").disjoint for c in chosen):
                chosen.append(v)
        assert rank(chosen) == len(chosen)
