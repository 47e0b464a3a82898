"""Disjoint complements, bands and the complete lattice of bands.

For a cone with facet functionals ``f_1 .. f_m`` every disjoint complement
has the form ``Z(J) = {x : f_j(x) = 0 for j in J}`` with ``J`` the set of
facets that are non-zero somewhere on the set being complemented.  Bands are
therefore indexed by facet subsets, and all set-theoretic fixpoints reduce
to rank computations.  The definitional LP oracle in
:meth:`OrderedSpace.is_disjoint` cross-checks the formula on demand.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, replace
from typing import Iterable, Optional, Sequence

from ordercone.errors import TheoremViolation, TooManyFacets, ValidationFailure
from ordercone.rational import (
    Mat,
    in_span,
    int_form,
    intersect_subspaces,
    nullspace,
    rank,
    span_basis,
    subspace_contains,
    vec,
)
from ordercone.space import OrderedSpace

MAX_FACETS = 20


@dataclass(frozen=True)
class Band:
    """A band ``B = Z(support)`` with its canonical basis.

    ``support`` is saturated: it lists every facet that vanishes on ``B``.
    """

    basis: Mat
    support: frozenset
    directed: bool
    is_projection_band: bool
    id: Optional[int] = None

    @property
    def dim(self) -> int:
        return len(self.basis)

    def contains(self, x: Sequence) -> bool:
        return in_span(self.basis, x)

    def __le__(self, other: "Band") -> bool:
        return subspace_contains(other.basis, self.basis)


def support(space: OrderedSpace, vectors: Iterable[Sequence]) -> frozenset:
    """Indices of facets that are non-zero on at least one vector."""
    out = set()
    for v in vectors:
        out.update(i for i, x in enumerate(space.values(v)) if x != 0)
    return frozenset(out)


def zero_set(space: OrderedSpace, indices: Iterable[int]) -> Mat:
    rows = [space.facets[i] for i in sorted(indices)]
    return nullspace(rows, space.dim)


def vanishing_facets(space: OrderedSpace, basis: Mat) -> frozenset:
    vals = [space.values(b) for b in basis]
    return frozenset(i for i in range(len(space.facets)) if all(v[i] == 0 for v in vals))


def _face_is_spanning(space: OrderedSpace, zero_idx: frozenset, dim: int) -> bool:
    # B ∩ X+ is the face cut out by the vanishing facets; it is generated
    # by the extreme rays lying in it
    face = [
        g for g, vals in zip(space.extreme_rays, space.ray_values)
        if all(vals[j] == 0 for j in zero_idx)
    ]
    return rank(face) == dim if face else dim == 0


def _complement_support(space: OrderedSpace, zero_idx: frozenset) -> frozenset:
    """Support of Z(zero_idx), i.e. the facets defining its complement."""
    return frozenset(range(len(space.facets))) - zero_idx


def make_band(space: OrderedSpace, indices: Iterable[int], band_id: Optional[int] = None) -> Band:
    """The subspace ``Z(indices)`` as a :class:`Band` (no band test performed)."""
    basis = zero_set(space, indices)
    zero_idx = vanishing_facets(space, basis)
    comp = zero_set(space, _complement_support(space, zero_idx))
    projection = len(basis) + len(comp) == space.dim and rank(basis + comp) == space.dim
    return Band(basis, zero_idx, _face_is_spanning(space, zero_idx, len(basis)), projection, band_id)


def band_of_subspace(space: OrderedSpace, basis: Mat) -> Optional[Band]:
    """The subspace as a Band if it is one, else None."""
    basis = span_basis(basis, space.dim)
    closure = band_closure(space, basis, check=False)
    return closure if closure.basis == basis else None


def disjoint_complement(space: OrderedSpace, vectors: Iterable[Sequence], *,
                        check: bool = True, probes: int = 50, seed: int = 0) -> Band:
    """``S^⊥`` as a band.

    With ``check`` the result is validated against the LP oracle: every basis
    vector must be disjoint from every element of ``S``, and random vectors
    outside the result must fail to be disjoint from some element of ``S``.
    """
    vectors = [vec(v) for v in vectors]
    band = make_band(space, support(space, vectors))
    if check:
        _validate_complement(space, vectors, band, probes, seed)
    return band


def _validate_complement(space, vectors, band: Band, probes: int, seed: int) -> None:
    for b in band.basis:
        for s in vectors:
            if not space.is_disjoint(b, s, "oracle", witness=False):
                raise ValidationFailure(f"basis vector {b} of S^⊥ is not disjoint from {s}")
    if band.dim == space.dim:
        return
    rng = random.Random(seed)
    done = 0
    while done < probes:
        x = vec(rng.randint(-5, 5) for _ in range(space.dim))
        if band.contains(x):
            continue
        done += 1
        if all(space.is_disjoint(x, s, "oracle", witness=False) for s in vectors):
            raise ValidationFailure(f"{x} lies outside S^⊥ yet is disjoint from S")


def band_closure(space: OrderedSpace, vectors: Iterable[Sequence], *,
                 check: bool = True, probes: int = 50) -> Band:
    """``S^⊥⊥``, the smallest band containing ``S``."""
    first = disjoint_complement(space, vectors, check=check, probes=probes)
    return disjoint_complement(space, first.basis, check=check, probes=probes)


def is_band(space: OrderedSpace, basis: Mat) -> bool:
    return band_of_subspace(space, basis) is not None


def _closure(space: OrderedSpace, indices: frozenset, cache: dict) -> frozenset:
    """All facets lying in the span of the given facets (a flat)."""
    if indices in cache:
        return cache[indices]
    rows = [space.facets[i] for i in sorted(indices)]
    # f is in span(rows) iff it annihilates the kernel of rows
    kernel = [int_form(k)[0] for k in nullspace(rows, space.dim)]
    flat = frozenset(
        i for i, f in enumerate(space.int_facets)
        if all(sum(a * b for a, b in zip(f, k)) == 0 for k in kernel)
    )
    cache[indices] = flat
    return flat


def enumerate_bands(space: OrderedSpace) -> list[Band]:
    """Every band of the space, sorted by dimension then basis.

    Bands are exactly the complements ``Z(K)^⊥ = Z([m] \\ cl(K))`` where
    ``cl(K)`` ranges over the flats of the facet configuration, so a search
    over flats visits every band without walking all ``2^m`` subsets.
    """
    m = len(space.facets)
    if m > MAX_FACETS:
        raise TooManyFacets(f"{m} facets (limit {MAX_FACETS})")
    everything = frozenset(range(m))
    cache: dict = {}
    start = _closure(space, frozenset(), cache)
    flats = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for flat in frontier:
            for i in range(m):
                if i in flat:
                    continue
                bigger = _closure(space, flat | {i}, cache)
                if bigger not in flats:
                    flats.add(bigger)
                    nxt.append(bigger)
        frontier = nxt
    bands = {}
    for flat in flats:
        band = make_band(space, everything - flat)
        if band.basis not in bands:
            if band_closure(space, band.basis, check=False).basis != band.basis:
                raise TheoremViolation(f"Z(J) for a flat complement is not a band: {band.basis}")
            bands[band.basis] = band
    ordered = sorted(bands.values(), key=lambda b: (b.dim, b.basis))
    return [replace(b, id=k) for k, b in enumerate(ordered)]


def enumerate_bands_brute_force(space: OrderedSpace) -> list[Band]:
    """Reference enumeration over all ``2^m`` facet subsets (small m only)."""
    m = len(space.facets)
    if m > MAX_FACETS:
        raise TooManyFacets(f"{m} facets (limit {MAX_FACETS})")
    found = {}
    for mask in range(1 << m):
        idx = [i for i in range(m) if mask >> i & 1]
        candidate = zero_set(space, idx)
        closure = band_closure(space, candidate, check=False)
        if closure.basis == candidate:
            found.setdefault(candidate, closure)
    ordered = sorted(found.values(), key=lambda b: (b.dim, b.basis))
    return [replace(b, id=k) for k, b in enumerate(ordered)]


def band_meet(space: OrderedSpace, bands: Sequence[Band]) -> Band:
    """Intersection; the empty meet is the whole space."""
    idx = set()
    for b in bands:
        idx |= b.support
    return make_band(space, idx)


def band_join(space: OrderedSpace, bands: Sequence[Band],
              all_bands: Optional[Sequence[Band]] = None) -> Band:
    """Smallest band containing every input: the meet of all bands above them."""
    if all_bands is None:
        all_bands = enumerate_bands(space)
    above = [c for c in all_bands if all(b <= c for b in bands)]
    return band_meet(space, above)


def band_join_by_complements(space: OrderedSpace, bands: Sequence[Band]) -> Band:
    """``(∩ B_i^⊥)^⊥``, the closure of the sum."""
    complements = [disjoint_complement(space, b.basis, check=False) for b in bands]
    return disjoint_complement(space, band_meet(space, complements).basis, check=False)


@dataclass(frozen=True)
class BandSumReport:
    sum_basis: Mat
    sum_is_band: bool
    closure: Band
    intersection_identity: bool
    closure_identity: bool

    @property
    def identity_holds(self) -> bool:
        return self.intersection_identity and self.closure_identity


def band_sum_check(space: OrderedSpace, b: Band, c: Band) -> BandSumReport:
    """Compare ``B + C`` with its band closure and test both complement identities.

    ``B ∩ C = (B^⊥ + C^⊥)^⊥`` and ``(B + C)^⊥⊥ = (B^⊥ ∩ C^⊥)^⊥``.
    """
    n = space.dim
    total = span_basis(b.basis + c.basis, n)
    closure = band_closure(space, total, check=False)
    b_perp = disjoint_complement(space, b.basis, check=False)
    c_perp = disjoint_complement(space, c.basis, check=False)
    meet = intersect_subspaces(b.basis, c.basis, n)
    perp_sum = span_basis(b_perp.basis + c_perp.basis, n)
    lhs_a = disjoint_complement(space, perp_sum, check=False).basis
    perp_meet = intersect_subspaces(b_perp.basis, c_perp.basis, n)
    rhs_c = disjoint_complement(space, perp_meet, check=False).basis
    return BandSumReport(
        sum_basis=total,
        sum_is_band=closure.basis == total,
        closure=closure,
        intersection_identity=meet == lhs_a,
        closure_identity=closure.basis == rhs_c,
    )


def find_band(bands: Sequence[Band], basis: Mat) -> Optional[Band]:
    for b in bands:
        if b.basis == basis:
            return b
    return None
