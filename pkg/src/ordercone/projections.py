"""Band projections, their Boolean algebra and the product decomposition.

Band projections are only ever found through bands: for each enumerated band
``B`` we test ``X = B ⊕ B^⊥`` and, if it holds, build the projection onto
``B`` along ``B^⊥``.  Every statement that has several equivalent forms is
evaluated in each form and a disagreement raises :class:`TheoremViolation`.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import gcd, lcm
from typing import Optional, Sequence, Union

from ordercone.bands import (
    Band,
    band_meet,
    band_of_subspace,
    disjoint_complement,
    enumerate_bands,
    make_band,
)
from ordercone.errors import (
    NotBandProjection,
    NotIdempotent,
    NotPositive,
    PositivityContradiction,
    TheoremViolation,
)
from ordercone.parallel import parallel_map
from ordercone.polyhedral import cone_subspace_intersection
from ordercone.rational import (
    Mat,
    column_space,
    identity,
    int_matrix_form,
    intersect_subspaces,
    inverse,
    is_idempotent,
    mat,
    mat_add,
    mat_sub,
    matmul,
    matvec,
    nullspace,
    rank,
    span_basis,
    subspace_contains,
    transpose,
    vec,
    zero_matrix,
)
from ordercone.space import OrderedSpace, validate


@dataclass(frozen=True)
class Positivity:
    P_positive: bool
    complement_positive: bool


@dataclass(frozen=True)
class BandProjection:
    matrix: Mat
    range_band: Band
    kernel_band: Band
    positivity: Positivity

    @property
    def rank(self) -> int:
        return self.range_band.dim


def projection_matrix(range_basis: Mat, kernel_basis: Mat, n: int) -> Mat:
    """Projection onto span(range_basis) along span(kernel_basis)."""
    if not range_basis:
        return zero_matrix(n)
    cols = transpose(tuple(range_basis) + tuple(kernel_basis))
    keep = len(range_basis)
    inv = inverse(cols)
    # P = T diag(1..1, 0..0) T^{-1}
    head = tuple(row[:keep] for row in cols)
    return matmul(head, inv[:keep])


def is_positive_map(space: OrderedSpace, m: Mat) -> bool:
    return all(space.contains_positive(matvec(m, g)) for g in space.generators)


def is_projection_band(space: OrderedSpace, band: Band) -> Optional[BandProjection]:
    """The band projection onto ``band``, or None if it is not a projection band."""
    n = space.dim
    perp = disjoint_complement(space, band.basis, check=False)
    if band.dim + perp.dim != n or rank(band.basis + perp.basis) != n:
        return None
    p = projection_matrix(band.basis, perp.basis, n)
    q = mat_sub(identity(n), p)
    positivity = Positivity(is_positive_map(space, p), is_positive_map(space, q))
    if not (positivity.P_positive and positivity.complement_positive):
        raise PositivityContradiction(
            f"X = B ⊕ B^⊥ for B = span{band.basis} but the projection is not bipositive"
        )
    return BandProjection(p, band, perp, positivity)


def _check_idempotent(p: Mat) -> None:
    if not is_idempotent(p):
        raise NotIdempotent("matrix is not a projection")


def _range(p: Mat, n: int) -> Mat:
    return column_space(p, n)


def _kernel(p: Mat, n: int) -> Mat:
    return nullspace(p, n)


@dataclass(frozen=True)
class Characterisation:
    band_projection: bool
    kernel_is_range_complement: bool
    range_is_kernel_complement: bool
    range_disjoint_from_kernel: bool
    bipositive: bool
    complement_is_band_projection: bool

    @property
    def flags(self) -> tuple:
        return (
            self.band_projection,
            self.kernel_is_range_complement,
            self.range_is_kernel_complement,
            self.range_disjoint_from_kernel,
            self.bipositive,
            self.complement_is_band_projection,
        )

    @property
    def verdict(self) -> bool:
        return self.band_projection


def _is_band_projection_by_definition(space: OrderedSpace, p: Mat) -> bool:
    n = space.dim
    band = band_of_subspace(space, _range(p, n))
    if band is None:
        return False
    proj = is_projection_band(space, band)
    return proj is not None and proj.matrix == p


def check_characterisation(space: OrderedSpace, p) -> Characterisation:
    """Evaluate the six equivalent forms of "P is a band projection"."""
    p = mat(p)
    _check_idempotent(p)
    n = space.dim
    rng, ker = _range(p, n), _kernel(p, n)
    q = mat_sub(identity(n), p)
    result = Characterisation(
        band_projection=_is_band_projection_by_definition(space, p),
        kernel_is_range_complement=disjoint_complement(space, rng, check=False).basis == ker,
        range_is_kernel_complement=disjoint_complement(space, ker, check=False).basis == rng,
        range_disjoint_from_kernel=space.subspaces_disjoint(rng, ker, "oracle"),
        bipositive=is_positive_map(space, p) and is_positive_map(space, q),
        complement_is_band_projection=(
            is_positive_map(space, q) and is_positive_map(space, mat_sub(identity(n), q))
        ),
    )
    if len(set(result.flags)) != 1:
        raise TheoremViolation(f"band projection characterisations disagree: {result.flags}")
    return result


def as_band_projection(space: OrderedSpace, p: Union[BandProjection, Mat]) -> BandProjection:
    if isinstance(p, BandProjection):
        return p
    p = mat(p)
    _check_idempotent(p)
    band = band_of_subspace(space, _range(p, space.dim))
    proj = is_projection_band(space, band) if band is not None else None
    if proj is None or proj.matrix != p:
        raise NotBandProjection("matrix is not a band projection")
    return proj


# -- the Boolean algebra ------------------------------------------------------

@dataclass(frozen=True)
class BooleanAlgebraReport:
    projections: tuple
    m: int
    meet_table: tuple
    join_table: tuple
    complement_map: tuple
    minimal_band_ids: tuple
    minimal_indices: tuple
    is_lattice: bool
    bands: tuple

    def index_of(self, matrix: Mat) -> int:
        for k, p in enumerate(self.projections):
            if p.matrix == matrix:
                return k
        raise KeyError("not a band projection of this space")

    @property
    def minimal(self) -> list:
        return [self.projections[k] for k in self.minimal_indices]


def _contains(outer: Band, inner: Band) -> bool:
    return subspace_contains(outer.basis, inner.basis)


def enumerate_band_projections(space: OrderedSpace, bands: Optional[Sequence[Band]] = None
                               ) -> BooleanAlgebraReport:
    """All band projections with meet/join/complement tables.

    Verifies the structure theorem along the way: the minimal projections are
    pairwise orthogonal and sum to the identity, and every band projection is
    the sum of a unique subset of them, so there are exactly ``2^m``.
    """
    n = space.dim
    if bands is None:
        bands = enumerate_bands(space)
    found = [p for p in parallel_map(lambda b: is_projection_band(space, b), bands) if p is not None]
    found.sort(key=lambda p: (p.rank, p.matrix))
    projections = tuple(found)

    nonzero = [k for k, p in enumerate(projections) if p.rank > 0]
    minimal = tuple(
        k for k in nonzero
        if not any(
            j != k and _contains(projections[k].range_band, projections[j].range_band)
            for j in nonzero
        )
    )
    m = len(minimal)
    mins = [projections[k].matrix for k in minimal]
    zero = zero_matrix(n)
    for a, b in combinations(mins, 2):
        if matmul(a, b) != zero:
            raise TheoremViolation("two minimal band projections are not orthogonal")
    total = zero
    for a in mins:
        total = mat_add(total, a)
    if n and total != identity(n):
        raise TheoremViolation("minimal band projections do not sum to the identity")
    if len(projections) != 2 ** m or m > n:
        raise TheoremViolation(f"{len(projections)} band projections but m = {m}")
    for p in projections:
        subset = [a for a in mins if matmul(a, p.matrix) != zero]
        s = zero
        for a in subset:
            s = mat_add(s, a)
        if s != p.matrix:
            raise TheoremViolation("band projection is not a sum of minimal projections")

    # tables on exact integer forms: M = ints / den with gcd 1
    forms = [int_matrix_form(p.matrix) for p in projections]
    index = {f: k for k, f in enumerate(forms)}
    ident = int_matrix_form(identity(n))
    size = len(projections)
    meet, join = [], []
    for i in range(size):
        mrow, jrow = [], []
        for j in range(size):
            a, b = forms[i], forms[j]
            ab = _int_product(a, b)
            if ab not in index:
                raise TheoremViolation("PQ is not a band projection")
            mrow.append(index[ab])
            pq = _int_combine(_int_combine(a, b, 1), ab, -1)
            if pq not in index:
                raise TheoremViolation("P + Q - PQ is not a band projection")
            jrow.append(index[pq])
        meet.append(tuple(mrow))
        join.append(tuple(jrow))
    comp = []
    for f in forms:
        c = _int_combine(ident, f, -1)
        if c not in index:
            raise TheoremViolation("I - P is not a band projection")
        comp.append(index[c])
    return BooleanAlgebraReport(
        projections=projections,
        m=m,
        meet_table=tuple(meet),
        join_table=tuple(join),
        complement_map=tuple(comp),
        minimal_band_ids=tuple(projections[k].range_band.id for k in minimal),
        minimal_indices=minimal,
        is_lattice=m == n,
        bands=tuple(bands),
    )


def _normalise(rows: list, den: int) -> tuple:
    g = den
    for row in rows:
        for k in row:
            g = gcd(g, k)
    return tuple(tuple(k // g for k in row) for row in rows), den // g


def _int_product(a: tuple, b: tuple) -> tuple:
    (am, ad), (bm, bd) = a, b
    cols = list(zip(*bm))
    rows = [[sum(x * y for x, y in zip(row, col)) for col in cols] for row in am]
    return _normalise(rows, ad * bd)


def _int_combine(a: tuple, b: tuple, sign: int) -> tuple:
    """``a + sign * b`` on integer forms."""
    (am, ad), (bm, bd) = a, b
    den = lcm(ad, bd)
    fa, fb = den // ad, sign * (den // bd)
    rows = [[x * fa + y * fb for x, y in zip(r, t)] for r, t in zip(am, bm)]
    return _normalise(rows, den)


def boolean_law_failures(report: BooleanAlgebraReport) -> list[str]:
    """Check the Boolean algebra axioms on the index tables; returns failures."""
    meet, join, comp = report.meet_table, report.join_table, report.complement_map
    size = len(report.projections)
    bottom = next(k for k, p in enumerate(report.projections) if p.rank == 0)
    top = next(k for k, p in enumerate(report.projections)
               if p.rank == len(p.matrix))
    failures = []
    for a in range(size):
        if meet[a][a] != a or join[a][a] != a:
            failures.append(f"idempotence at {a}")
        if meet[a][bottom] != bottom or join[a][top] != top:
            failures.append(f"bounds at {a}")
        if meet[a][comp[a]] != bottom or join[a][comp[a]] != top:
            failures.append(f"complement at {a}")
        others = [c for c in range(size) if meet[a][c] == bottom and join[a][c] == top]
        if others != [comp[a]]:
            failures.append(f"complement of {a} not unique")
        for b in range(size):
            if meet[a][b] != meet[b][a] or join[a][b] != join[b][a]:
                failures.append(f"commutativity at {a},{b}")
            if join[a][meet[a][b]] != a or meet[a][join[a][b]] != a:
                failures.append(f"absorption at {a},{b}")
            for c in range(size):
                if meet[meet[a][b]][c] != meet[a][meet[b][c]]:
                    failures.append(f"meet associativity at {a},{b},{c}")
                if join[join[a][b]][c] != join[a][join[b][c]]:
                    failures.append(f"join associativity at {a},{b},{c}")
                if meet[join[a][b]][c] != join[meet[a][c]][meet[b][c]]:
                    failures.append(f"distributivity at {a},{b},{c}")
    return failures


@dataclass(frozen=True)
class BooleanOps:
    meet: Mat
    join: Mat
    complement: Mat


def boolean_ops(space: OrderedSpace, p, q) -> BooleanOps:
    """``P ∧ Q = PQ``, ``P ∨ Q = P + Q - PQ`` and ``P^c = I - P``, all verified."""
    p, q = as_band_projection(space, p), as_band_projection(space, q)
    n = space.dim
    a, b = p.matrix, q.matrix
    ab = matmul(a, b)
    if ab != matmul(b, a):
        raise TheoremViolation("band projections do not commute")
    for name, m in (("PQ", ab), ("P+Q-PQ", mat_sub(mat_add(a, b), ab))):
        if not is_idempotent(m) or not is_positive_map(space, m) \
                or not is_positive_map(space, mat_sub(identity(n), m)):
            raise TheoremViolation(f"{name} is not a band projection")
    join = mat_sub(mat_add(a, b), ab)
    pr, qr = p.range_band.basis, q.range_band.basis
    if _range(ab, n) != intersect_subspaces(pr, qr, n):
        raise TheoremViolation("range of PQ differs from PX ∩ QX")
    if _range(join, n) != span_basis(pr + qr, n):
        raise TheoremViolation("range of P + Q - PQ differs from PX + QX")
    return BooleanOps(ab, join, mat_sub(identity(n), a))


def domination_check(space: OrderedSpace, p, q) -> tuple[bool, bool, bool]:
    """``(PX ⊆ QX, QP = P, P <= Q)``; all three must agree."""
    p, q = as_band_projection(space, p), as_band_projection(space, q)
    n = space.dim
    triple = (
        subspace_contains(q.range_band.basis, p.range_band.basis),
        matmul(q.matrix, p.matrix) == p.matrix,
        is_positive_map(space, mat_sub(q.matrix, p.matrix)),
    )
    if len(set(triple)) != 1:
        raise TheoremViolation(f"domination criteria disagree: {triple}")
    return triple


def trivial_intersection_check(space: OrderedSpace, p, q) -> tuple[bool, bool, bool]:
    """``(PQ = 0, PX ∩ QX = {0}, PX ⊥ QX)``; all three must agree."""
    p, q = as_band_projection(space, p), as_band_projection(space, q)
    n = space.dim
    pr, qr = p.range_band.basis, q.range_band.basis
    triple = (
        matmul(p.matrix, q.matrix) == zero_matrix(n),
        intersect_subspaces(pr, qr, n) == (),
        space.subspaces_disjoint(pr, qr, "oracle"),
    )
    if len(set(triple)) != 1:
        raise TheoremViolation(f"trivial-intersection criteria disagree: {triple}")
    return triple


def range_kernel_check(space: OrderedSpace, p) -> bool:
    """Both ``PX`` and ``ker P`` are projection bands; equivalent to P being a band projection."""
    p = mat(p)
    _check_idempotent(p)
    n = space.dim
    verdict = True
    for basis in (_range(p, n), _kernel(p, n)):
        band = band_of_subspace(space, basis)
        if band is None or is_projection_band(space, band) is None:
            verdict = False
    if verdict != check_characterisation(space, p).verdict:
        raise TheoremViolation("range/kernel criterion disagrees with the characterisation")
    return verdict


def product_infimum_check(space: OrderedSpace, projections: Sequence, x) -> bool:
    """``P_1 ... P_k x`` is the infimum of ``{P_1 x, ..., P_k x}`` for positive x."""
    x = vec(x)
    if not space.contains_positive(x):
        raise NotPositive("x must be positive")
    mats = [as_band_projection(space, p).matrix for p in projections]
    g = x
    for m in reversed(mats):
        g = matvec(m, g)
    inf = space.infimum([matvec(m, x) for m in mats])
    return inf is not None and inf == g


# -- decomposition ------------------------------------------------------------

@dataclass(frozen=True)
class Factor:
    basis: Mat
    space: OrderedSpace
    band: Band


@dataclass(frozen=True)
class Decomposition:
    factors: tuple
    isomorphism: Mat

    @property
    def m(self) -> int:
        return len(self.factors)


def decompose(space: OrderedSpace, report: Optional[BooleanAlgebraReport] = None) -> Decomposition:
    """Split the space into its minimal projection bands.

    ``isomorphism`` maps factor coordinates (concatenated) to the ambient
    space; it is checked to be bipositive against the product cone, and every
    factor is checked to have only the trivial band projections.
    """
    if report is None:
        report = enumerate_band_projections(space)
    n = space.dim
    factors = []
    columns = []
    for proj in report.minimal:
        basis = proj.range_band.basis
        part = cone_subspace_intersection(space.cone, basis)
        factor_space = validate(part.rays, len(basis))
        sub_report = enumerate_band_projections(factor_space)
        if sub_report.m != 1:
            raise TheoremViolation("a minimal projection band has non-trivial band projections")
        factors.append(Factor(basis, factor_space, proj.range_band))
        columns.extend(basis)
    iso = transpose(tuple(columns), n)
    if rank(iso) != n:
        raise TheoremViolation("minimal projection bands do not span the space")
    inv = inverse(iso)
    # forward: product cone generators land in X+
    offset = 0
    for f in factors:
        k = len(f.basis)
        for ray in f.space.generators:
            coords = [0] * offset + list(ray) + [0] * (n - offset - k)
            if not space.contains_positive(matvec(iso, vec(coords))):
                raise TheoremViolation("isomorphism is not positive")
        offset += k
    # backward: X+ generators land in the product cone
    for g in space.generators:
        coords = matvec(inv, g)
        offset = 0
        for f in factors:
            k = len(f.basis)
            if not f.space.contains_positive(coords[offset:offset + k]):
                raise TheoremViolation("inverse isomorphism is not positive")
            offset += k
    return Decomposition(tuple(factors), iso)


def generated_projection_band(space: OrderedSpace, vectors: Sequence,
                              report: Optional[BooleanAlgebraReport] = None) -> Band:
    """Smallest projection band containing the given vectors."""
    if report is None:
        report = enumerate_band_projections(space)
    vectors = [vec(v) for v in vectors]
    if not vectors:
        return make_band(space, range(len(space.facets)))
    containing = [
        p.range_band for p in report.projections
        if all(p.range_band.contains(v) for v in vectors)
    ]
    return band_meet(space, containing)


def rank_one_projections(report: BooleanAlgebraReport) -> list[BandProjection]:
    return [p for p in report.projections if p.rank == 1]


@dataclass(frozen=True)
class DirectSumEvidence:
    """Experimental evidence only: pairs of directed bands with ``X = B ⊕ C``."""

    pairs_checked: int
    counterexamples: tuple  # (B, C) with X = B ⊕ C but C != B^⊥


def directed_direct_sum_search(space: OrderedSpace,
                               bands: Optional[Sequence[Band]] = None) -> DirectSumEvidence:
    """Look for directed bands ``B, C`` with ``X = B ⊕ C`` yet ``C != B^⊥``.

    Whether such a pair can exist is open, so the result is evidence and
    never a decision.
    """
    n = space.dim
    if bands is None:
        bands = enumerate_bands(space)
    directed = [b for b in bands if b.directed]
    checked = 0
    found = []
    for b in directed:
        for c in directed:
            if b.dim + c.dim != n or rank(b.basis + c.basis) != n:
                continue
            checked += 1
            if disjoint_complement(space, b.basis, check=False).basis != c.basis:
                found.append((b, c))
    return DirectSumEvidence(checked, tuple(found))
