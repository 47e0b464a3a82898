import random
from fractions import Fraction
from itertools import combinations

import pytest

from ordercone.bands import band_closure, enumerate_bands
from ordercone.errors import NotBandProjection, NotIdempotent
from ordercone.lattice import is_vector_lattice, product_space, random_product_space, random_space
from ordercone.projections import (
    as_band_projection,
    boolean_law_failures,
    boolean_ops,
    check_characterisation,
    decompose,
    directed_direct_sum_search,
    domination_check,
    enumerate_band_projections,
    generated_projection_band,
    is_projection_band,
    product_infimum_check,
    projection_matrix,
    range_kernel_check,
    rank_one_projections,
    trivial_intersection_check,
)
from ordercone.rational import (
    identity,
    mat,
    mat_add,
    mat_sub,
    matmul,
    span_basis,
    vec,
    zero_matrix,
)
from ordercone.space import validate

V1, V2, V3, V4 = (vec(v) for v in ([1, 0, 1], [0, 1, 1], [-1, 0, 1], [0, -1, 1]))


def diag(*entries):
    n = len(entries)
    return mat([[entries[i] if i == j else 0 for j in range(n)] for i in range(n)])


def standard(n):
    return validate([[int(i == j) for j in range(n)] for i in range(n)], n)


@pytest.fixture(scope="module")
def fourray():
    return validate([V1, V2, V3, V4], 3)


@pytest.fixture(scope="module")
def fourray_x_r():
    gens = [tuple(v) + (0,) for v in (V1, V2, V3, V4)] + [(0, 0, 0, 1)]
    return validate(gens, 4)


def test_is_projection_band_examples(fourray):
    assert is_projection_band(fourray, band_closure(fourray, [V1])) is None
    std2 = standard(2)
    p = is_projection_band(std2, band_closure(std2, [vec([1, 0])]))
    assert p.matrix == diag(1, 0)
    bands = enumerate_bands(fourray)
    assert is_projection_band(fourray, bands[-1]).matrix == identity(3)
    assert is_projection_band(fourray, bands[0]).matrix == zero_matrix(3)


def test_characterisation_examples(fourray):
    assert check_characterisation(standard(2), diag(1, 0)).flags == (True,) * 6
    assert check_characterisation(standard(3), diag(1, 0, 0)).verdict
    # projection onto span{v1} along span{v2, v3 + v4}
    p = projection_matrix((V1,), span_basis([V2, vec([-1, -1, 2])], 3), 3)
    assert matmul(p, p) == p
    assert check_characterisation(fourray, p).flags == (False,) * 6
    with pytest.raises(NotIdempotent):
        check_characterisation(standard(2), mat([[2, 0], [0, 0]]))


def test_projection_census(fourray, fourray_x_r):
    rep = enumerate_band_projections(fourray)
    assert len(rep.projections) == 2 and rep.m == 1 and not rep.is_lattice
    rep3 = enumerate_band_projections(standard(3))
    assert len(rep3.projections) == 8 and rep3.m == 3 and rep3.is_lattice
    rep4 = enumerate_band_projections(fourray_x_r)
    assert len(rep4.projections) == 4 and rep4.m == 2
    ranges = sorted(p.range_band.basis for p in rep4.minimal)
    assert ranges == sorted([
        span_basis([vec([0, 0, 0, 1])], 4),
        span_basis([vec([1, 0, 0, 0]), vec([0, 1, 0, 0]), vec([0, 0, 1, 0])], 4),
    ])


def test_boolean_ops_examples(fourray_x_r):
    std3 = standard(3)
    ops = boolean_ops(std3, diag(1, 1, 0), diag(0, 1, 1))
    assert ops.meet == diag(0, 1, 0) and ops.join == diag(1, 1, 1)
    assert ops.complement == diag(0, 0, 1)
    ops = boolean_ops(std3, diag(1, 0, 1), identity(3))
    assert ops.meet == diag(1, 0, 1) and ops.join == identity(3)
    a, b = (p.matrix for p in enumerate_band_projections(fourray_x_r).minimal)
    ops = boolean_ops(fourray_x_r, a, b)
    assert ops.meet == zero_matrix(4) and ops.join == identity(4)
    with pytest.raises(NotBandProjection):
        boolean_ops(std3, mat([[1, 1, 0], [0, 0, 0], [0, 0, 0]]), identity(3))


def test_domination_and_trivial_intersection():
    std3 = standard(3)
    assert domination_check(std3, diag(1, 0, 0), diag(1, 1, 0)) == (True, True, True)
    assert domination_check(std3, diag(0, 1, 0), diag(0, 1, 0)) == (True, True, True)
    assert domination_check(std3, diag(1, 0, 0), diag(0, 1, 0)) == (False, False, False)
    std2 = standard(2)
    assert trivial_intersection_check(std2, diag(1, 0), diag(0, 1)) == (True, True, True)
    assert trivial_intersection_check(std2, diag(1, 0), diag(1, 0)) == (False, False, False)


def test_non_projection_bands_guard(fourray):
    # span{v1} and span{v2} meet trivially but are not disjoint
    assert not fourray.subspaces_disjoint((V1,), (V2,))
    with pytest.raises(NotBandProjection):
        as_band_projection(fourray, projection_matrix((V1,), span_basis([V2, V3], 3), 3))


def test_range_kernel_examples(fourray):
    assert range_kernel_check(standard(3), identity(3))
    assert range_kernel_check(standard(2), diag(1, 0))
    p = projection_matrix((V1,), span_basis([V2, V3], 3), 3)
    assert not range_kernel_check(fourray, p)


def test_product_infimum_examples(fourray_x_r):
    std3 = standard(3)
    assert product_infimum_check(std3, [diag(1, 1, 0)], vec([1, 2, 3]))
    assert product_infimum_check(std3, [diag(1, 1, 0), diag(0, 1, 1)], vec([1, 2, 3]))
    assert std3.infimum([vec([1, 2, 0]), vec([0, 2, 3])]) == vec([0, 2, 0])
    mats = [p.matrix for p in enumerate_band_projections(fourray_x_r).projections]
    rng = random.Random(5)
    for _ in range(6):
        x = vec([0, 0, 0, 0])
        for g in fourray_x_r.generators:
            c = rng.randint(0, 2)
            x = tuple(a + c * b for a, b in zip(x, g))
        assert product_infimum_check(fourray_x_r, rng.sample(mats, 2), x)


def test_decompose_examples(fourray, fourray_x_r):
    dec = decompose(standard(3))
    assert dec.m == 3 and all(f.space.dim == 1 for f in dec.factors)
    dec = decompose(fourray)
    assert dec.m == 1 and dec.factors[0].space.facets == fourray.facets
    dec = decompose(fourray_x_r)
    dims = sorted(f.space.dim for f in dec.factors)
    assert dims == [1, 3]
    big = next(f for f in dec.factors if f.space.dim == 3)
    assert big.space.facets == fourray.facets


def test_generated_projection_band(fourray):
    assert generated_projection_band(fourray, [V1]).dim == 3
    std3 = standard(3)
    assert generated_projection_band(std3, [vec([1, 0, 0])]).basis == (vec([1, 0, 0]),)
    assert generated_projection_band(std3, []).dim == 0


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_rank_one_census(n):
    rep = enumerate_band_projections(standard(n))
    assert len(rank_one_projections(rep)) == n


# -- seeded properties ------------------------------------------------------------

def _spaces():
    for seed in range(8):
        for dim in (2, 3, 4, 5):
            yield random_product_space(dim, seed)
        yield random_space(3, 4 + seed % 2, seed)


def test_algebra_laws_and_counting():
    for space in _spaces():
        rep = enumerate_band_projections(space)
        assert not boolean_law_failures(rep)
        assert len(rep.projections) == 2 ** rep.m and rep.m <= space.dim
        assert rep.is_lattice == is_vector_lattice(space, rep).is_lattice
        assert len(rank_one_projections(rep)) <= space.dim
        mats = [p.matrix for p in rep.projections]
        for a, b in combinations(mats, 2):
            assert matmul(a, b) == matmul(b, a)


def test_pairwise_checks_agree():
    for space in list(_spaces())[:16]:
        rep = enumerate_band_projections(space)
        for p, q in combinations(rep.projections, 2):
            boolean_ops(space, p, q)
            domination_check(space, p, q)
            trivial_intersection_check(space, p, q)


def test_sum_lemma_on_minimal_antichains():
    n_checked = 0
    for space in _spaces():
        rep = enumerate_band_projections(space)
        mins = [p.matrix for p in rep.minimal]
        mats = {p.matrix for p in rep.projections}
        n = space.dim
        for k in range(1, len(mins) + 1):
            for subset in combinations(mins, k):
                total = zero_matrix(n)
                prod = identity(n)
                for a in subset:
                    total = mat_add(total, a)
                    prod = matmul(prod, mat_sub(identity(n), a))
                assert total in mats
                assert mat_sub(identity(n), total) == prod
                n_checked += 1
    assert n_checked > 30


def test_decompose_random_products():
    for space in _spaces():
        dec = decompose(space)
        assert dec.m == enumerate_band_projections(space).m


def test_characterisation_on_random_idempotents():
    rng = random.Random(31)
    for space in list(_spaces())[:12]:
        n = space.dim
        rep = enumerate_band_projections(space)
        for p in rep.projections:
            assert check_characterisation(space, p.matrix).verdict
        for _ in range(3):
            k = rng.randint(1, n - 1)
            vs = [vec(rng.randint(-2, 2) for _ in range(n)) for _ in range(n)]
            basis = span_basis(vs, n)
            if len(basis) != n:
                continue
            p = projection_matrix(basis[:k], basis[k:], n)
            verdict = check_characterisation(space, p).verdict
            assert verdict == (p in {q.matrix for q in rep.projections})
            assert range_kernel_check(space, p) == verdict


def test_product_infimum_on_random_products():
    rng = random.Random(32)
    for space in _spaces():
        mats = [p.matrix for p in enumerate_band_projections(space).projections]
        for _ in range(3):
            x = [Fraction(0)] * space.dim
            for g in space.extreme_rays:
                c = rng.randint(0, 2)
                x = [a + c * b for a, b in zip(x, g)]
            chosen = rng.sample(mats, min(len(mats), 2))
            assert product_infimum_check(space, chosen, tuple(x))


def test_direct_sum_search_is_evidence_only():
    # the question is open; record that nothing turns up on these samples
    checked = 0
    for space in _spaces():
        ev = directed_direct_sum_search(space)
        checked += ev.pairs_checked
        assert ev.counterexamples == ()
    assert checked > 0


def test_product_space_of_fixtures(fourray):
    line = validate([(1,)], 1)
    prod = product_space(fourray, line)
    assert enumerate_band_projections(prod).m == 2
