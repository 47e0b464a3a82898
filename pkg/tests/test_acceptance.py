"""Acceptance suite: one check per criterion, each printing a single PASS/FAIL line.

Run under pytest (lines appear in the normal output) or directly with
``python tests/test_acceptance.py``.
"""

import random
import sys
import time
from fractions import Fraction
from itertools import combinations

from ordercone import cli
from ordercone.bands import band_meet, band_sum_check, disjoint_complement, enumerate_bands
from ordercone.lattice import (
    hierarchy_report,
    is_vector_lattice,
    pervasive_at,
    random_product_space,
    random_space,
)
from ordercone.projections import (
    boolean_law_failures,
    decompose,
    enumerate_band_projections,
    product_infimum_check,
)
from ordercone.rational import intersect_subspaces, matmul, neg, rank, span_basis, vec
from ordercone.space import validate

V1, V2, V3, V4 = (vec(v) for v in ([1, 0, 1], [0, 1, 1], [-1, 0, 1], [0, -1, 1]))


def _cli(*argv):
    report, code = cli.run(list(argv))
    assert code == 0, report
    assert all(c["passed"] for c in report["checks"]), report["checks"]
    return report["result"]


def _standard(n):
    return validate([[int(i == j) for j in range(n)] for i in range(n)], n)


def criterion_1():
    """Four-ray band census: 8 bands with the expected directedness."""
    result = _cli("bands", "fourray.json")
    assert result["count"] == 8
    dims = sorted(b["dim"] for b in result["bands"])
    assert dims == [0, 1, 1, 1, 1, 1, 1, 3]
    lines = {b["basis"][0]: b["directed"] for b in result["bands"] if b["dim"] == 1}
    expected = {}
    for v in (V1, V2, V3, V4):
        expected[cli.format_vec(span_basis([v], 3)[0])] = True
    expected["1,1,0"] = False
    expected["1,-1,0"] = False
    assert lines == expected
    return 1.0


def criterion_2():
    """Four-ray projection census: {0, I}, m = 1, not a lattice, witness (v1, v2)."""
    result = _cli("projections", "fourray.json")
    assert result["count"] == 2 and result["m"] == 1
    ranks = sorted(p["rank"] for p in result["projections"])
    assert ranks == [0, 3]
    verdict = _cli("is-lattice", "fourray.json")
    assert verdict["is_lattice"] is False
    assert verdict["witness"] == ["1,0,1", "0,1,1"]
    return 1.0


def criterion_3():
    """Standard R^n, n = 1..4: 2^n bands and projections, m = n, lattice, n rank-one projections."""
    for n in range(1, 5):
        space = _standard(n)
        assert len(enumerate_bands(space)) == 2 ** n
        rep = enumerate_band_projections(space)
        assert len(rep.projections) == 2 ** n and rep.m == n
        verdict = is_vector_lattice(space, rep)
        assert verdict.is_lattice and verdict.routes.rank1_census == n
        assert sum(1 for p in rep.projections if p.rank == 1) == n
    return 5.0


def criterion_4():
    """Disjointness: v1, v2 not disjoint with a verified witness; v1 ⊥ v3 by both methods."""
    space = validate([V1, V2, V3, V4], 3)
    verdict = space.is_disjoint(V1, V2, "oracle")
    w = verdict.witness
    assert not verdict.disjoint
    assert space.leq(w, V1) and space.leq(w, V2) and not space.contains_positive(neg(w))
    assert w == vec([1, 1, 0])
    assert space.is_disjoint(V1, V3, "oracle").disjoint
    assert space.is_disjoint(V1, V3, "fast").disjoint
    return 1.0


def criterion_5():
    """Hierarchy separations on the four-ray space."""
    space = validate([V1, V2, V3, V4], 3)
    w, wt = tuple(a + b for a, b in zip(V1, V2)), tuple(a + b for a, b in zip(V3, V4))
    rows = hierarchy_report(space, [(V1, V2), (w, wt)])
    assert [r.triple for r in rows] == [(False, True, True), (False, False, True)]
    p = space.interval(neg(w), w).intersect(space.interval(neg(wt), wt))
    assert p.contains(vec([1, -1, 0]))
    return 1.0


def criterion_6():
    """Decomposition of four-ray × R into the four-ray space and R, bipositively."""
    result = _cli("decompose", "fourray_x_r.json")
    assert result["m"] == 2
    factors = sorted(result["factors"], key=lambda f: f["dim"])
    assert factors[0]["dim"] == 1 and factors[0]["facets"] == ["1"]
    fourray = validate([V1, V2, V3, V4], 3)
    assert factors[1]["dim"] == 3
    assert factors[1]["facets"] == [cli.format_vec(f) for f in fourray.facets]
    # independent re-check of the isomorphism in the API
    _, space = cli.load_spec("fourray_x_r.json")
    dec = decompose(space)
    assert rank(dec.isomorphism) == 4
    return 2.0


def _random_vector(rng, dim):
    return vec(Fraction(rng.randint(-3, 3), rng.randint(1, 2)) for _ in range(dim))


def _random_positive(rng, space):
    x = [Fraction(0)] * space.dim
    for g in space.extreme_rays:
        c = rng.choice((0, 0, 1, 2))
        x = [a + c * b for a, b in zip(x, g)]
    return tuple(x)


def _scaled(rng, basis, dim):
    x = [Fraction(0)] * dim
    for b in basis:
        c = Fraction(rng.randint(-3, 3), rng.randint(1, 2))
        x = [a + c * bi for a, bi in zip(x, b)]
    return tuple(x)


def acceptance_spaces():
    for i in range(200):
        dim = 2 + (i // 2) % 4
        if i % 2 == 0:
            yield random_space(dim, dim + (i // 8) % 3, i)
        else:
            yield random_product_space(dim, i)


def _check_space(space, rng, failures, tag):
    n = space.dim
    bands = enumerate_bands(space)
    rep = enumerate_band_projections(space, bands)

    # (a) oracle = fast on 20 pairs: half generic, half drawn from band / complement pairs
    for k in range(20):
        if k < 10:
            x, y = _random_vector(rng, n), _random_vector(rng, n)
        else:
            b = rng.choice(bands)
            perp = disjoint_complement(space, b.basis, check=False)
            x, y = _scaled(rng, b.basis, n), _scaled(rng, perp.basis, n)
            if rng.random() < 0.3:
                y = tuple(a + c for a, c in zip(y, _random_vector(rng, n)))
        if space.is_disjoint(x, y, "oracle", witness=False).disjoint != \
                space.is_disjoint(x, y, "fast", witness=False).disjoint:
            failures.append(f"{tag} (a) oracle/fast disagree on {x}, {y}")

    # (b) commutation and Boolean laws
    mats = [p.matrix for p in rep.projections]
    for a, b in combinations(mats, 2):
        if matmul(a, b) != matmul(b, a):
            failures.append(f"{tag} (b) projections do not commute")
    laws = boolean_law_failures(rep)
    if laws:
        failures.append(f"{tag} (b) {laws[:3]}")

    # (c) counting
    verdict = is_vector_lattice(space, rep)
    if len(rep.projections) != 2 ** rep.m or rep.m > n or (rep.m == n) != verdict.is_lattice:
        failures.append(f"{tag} (c) counting")

    # (d) implication chain
    pairs = [(_random_positive(rng, space), _random_positive(rng, space)) for _ in range(2)]
    rays = space.extreme_rays
    pairs.append((rays[0], rays[-1]))
    for row in hierarchy_report(space, pairs):
        d, s, dd = row.triple
        if (d and not s) or (s and not dd):
            failures.append(f"{tag} (d) chain broken")

    # (e) pairwise-disjoint nonzero tuples are independent
    pool = list(rays) + [v for b in bands for v in b.basis] + [_random_vector(rng, n) for _ in range(4)]
    rng.shuffle(pool)
    chosen = []
    for v in pool:
        if any(v) and all(space.is_disjoint(v, c, "oracle", witness=False).disjoint for c in chosen):
            chosen.append(v)
    if rank(chosen) != len(chosen):
        failures.append(f"{tag} (e) dependent disjoint tuple")

    # (f) product of projections is the infimum
    for _ in range(2):
        chosen_p = rng.sample(mats, min(2, len(mats)))
        if not product_infimum_check(space, chosen_p, _random_positive(rng, space)):
            failures.append(f"{tag} (f) product infimum")

    # (g) band identities
    for _ in range(2):
        b, c = rng.choice(bands), rng.choice(bands)
        if not band_sum_check(space, b, c).identity_holds:
            failures.append(f"{tag} (g) sum identities")
        chosen_b = rng.sample(bands, min(3, len(bands)))
        inter = chosen_b[0].basis
        for x in chosen_b[1:]:
            inter = intersect_subspaces(inter, x.basis, n)
        perps = [v for x in chosen_b for v in disjoint_complement(space, x.basis, check=False).basis]
        if band_meet(space, chosen_b).basis != inter or \
                disjoint_complement(space, perps, check=False).basis != inter:
            failures.append(f"{tag} (g) meet identity")


def criterion_7():
    """Seeded property suites on 200 random spaces of dimension 2..5."""
    rng = random.Random(20240607)
    failures = []
    for i, space in enumerate(acceptance_spaces()):
        _check_space(space, rng, failures, f"space {i}")
    assert not failures, failures[:10]
    return 600.0


def criterion_8():
    """Pervasiveness probes."""
    ok, x = pervasive_at(_standard(2), vec([1, -1]))
    assert ok and x is not None
    ok, _ = pervasive_at(validate([V1, V2, V3, V4], 3), vec([1, 1, 0]))
    assert not ok
    return 1.0


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4,
            criterion_5, criterion_6, criterion_7, criterion_8]


def evaluate(criterion):
    """Run one criterion; returns (passed, line)."""
    number = criterion.__name__.split("_")[1]
    start = time.perf_counter()
    try:
        limit = criterion()
        elapsed = time.perf_counter() - start
        passed = elapsed < limit
        detail = f"{elapsed:.2f}s (limit {limit:g}s)"
    except AssertionError as exc:
        elapsed = time.perf_counter() - start
        passed = False
        detail = f"{elapsed:.2f}s: {str(exc)[:200]}"
    doc = criterion.__doc__.strip().splitlines()[0]
    line = f"ACCEPTANCE {number} {'PASS' if passed else 'FAIL'}: {doc} [{detail}]"
    return passed, line


def _make_test(criterion):
    def test(capsys):
        passed, line = evaluate(criterion)
        with capsys.disabled():
            print("\n" + line)
        assert passed, line

    test.__name__ = f"test_{criterion.__name__}"
    return test


for _c in CRITERIA:
    globals()[f"test_{_c.__name__}"] = _make_test(_c)


if __name__ == "__main__":
    results = [evaluate(c) for c in CRITERIA]
    for _, line in results:
        print(line)
    sys.exit(0 if all(p for p, _ in results) else 1)
