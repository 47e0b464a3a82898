"""Pre-Riesz spaces with a polyhedral cone and their pointwise order notions."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from ordercone.errors import NotGenerating, NotPointed, NotPositive, TheoremViolation
from ordercone.polyhedral import (
    Cone,
    HPolyhedron,
    SubspaceCone,
    cone_subspace_intersection,
    lp,
    polytope_is_zero,
    v_to_h,
)
from ordercone.rational import (
    ZERO,
    Mat,
    Vec,
    add,
    int_form,
    neg,
    nullspace,
    rank,
    solve,
    span_basis,
    sub,
    vec,
)


@dataclass(frozen=True)
class Validation:
    pointed: bool
    generating: bool

    @property
    def preriesz(self) -> bool:
        # closed (polyhedral) cones are Archimedean, so pointed + generating suffices
        return self.pointed and self.generating


@dataclass(frozen=True)
class DisjointnessVerdict:
    disjoint: bool
    witness: Optional[Vec]
    method: str

    def __bool__(self) -> bool:
        return self.disjoint


def validate(generators: Iterable[Sequence], dim: int) -> "OrderedSpace":
    """Build an :class:`OrderedSpace`, rejecting cones that are not pre-Riesz."""
    cone = v_to_h([vec(g) for g in generators], dim)
    checks = Validation(cone.is_pointed(), cone.is_generating())
    if not checks.pointed:
        raise NotPointed("the cone contains a line")
    if not checks.generating:
        raise NotGenerating(f"the generators do not span Q^{dim}")
    return OrderedSpace(dim, cone, checks)


@dataclass(frozen=True)
class OrderedSpace:
    dim: int
    cone: Cone
    validation: Validation

    @property
    def facets(self) -> Mat:
        return self.cone.facets

    @property
    def generators(self) -> Mat:
        return self.cone.generators

    @property
    def extreme_rays(self) -> Mat:
        return self.cone.extreme_rays

    @cached_property
    def int_facets(self) -> tuple:
        return tuple(tuple(int(a) for a in f) for f in self.cone.facets)

    @cached_property
    def ray_values(self) -> Mat:
        """Facet values of each extreme ray."""
        return tuple(self.values(r) for r in self.extreme_rays)

    def values(self, x: Sequence[Fraction]) -> Vec:
        """Facet functionals evaluated at ``x``."""
        ints, den = int_form(x)
        out = []
        for f in self.int_facets:
            s = 0
            for a, b in zip(f, ints):
                s += a * b
            out.append(Fraction(s, den))
        return tuple(out)

    def contains_positive(self, x: Sequence[Fraction]) -> bool:
        return all(v >= 0 for v in self.values(x))

    def leq(self, x: Sequence[Fraction], y: Sequence[Fraction]) -> bool:
        return self.contains_positive(sub(tuple(y), tuple(x)))

    def _require_positive(self, *xs) -> None:
        for x in xs:
            if not self.contains_positive(x):
                raise NotPositive(f"vector {tuple(map(str, x))} is not positive")

    # -- bounds -----------------------------------------------------------

    def upper_bounds(self, vectors: Sequence[Sequence[Fraction]]) -> HPolyhedron:
        """``{u : u >= a for all a}``; u >= a iff f_i(u) >= f_i(a) for every facet."""
        if not vectors:
            raise ValueError("need at least one vector")
        vals = [self.values(a) for a in vectors]
        offsets = tuple(max(col) for col in zip(*vals))
        return HPolyhedron(self.facets, offsets, self.dim)

    def lower_bounds(self, vectors: Sequence[Sequence[Fraction]]) -> HPolyhedron:
        if not vectors:
            raise ValueError("need at least one vector")
        vals = [self.values(a) for a in vectors]
        offsets = tuple(-min(col) for col in zip(*vals))
        return HPolyhedron(tuple(neg(f) for f in self.facets), offsets, self.dim)

    def infimum(self, vectors: Sequence[Sequence[Fraction]]) -> Optional[Vec]:
        """Greatest lower bound, or None when it does not exist.

        With ``c_i`` the maximum of ``f_i`` over the lower bounds, a vector
        ``g`` with ``f_i(g) = c_i`` for all ``i`` dominates every lower bound;
        it exists iff the infimum does.
        """
        lower = self.lower_bounds(vectors)
        targets = []
        for f in self.facets:
            res = lp(f, "max", lower)
            if res.status != "optimal":
                raise TheoremViolation("lower-bound set of a finite set must be bounded above")
            targets.append(res.value)
        g = solve(self.facets, targets, self.dim)
        if g is None:
            return None
        return g

    def supremum(self, vectors: Sequence[Sequence[Fraction]]) -> Optional[Vec]:
        upper = self.upper_bounds(vectors)
        targets = []
        for f in self.facets:
            res = lp(f, "min", upper)
            targets.append(res.value)
        return solve(self.facets, targets, self.dim)

    # -- disjointness -----------------------------------------------------

    def is_disjoint(self, x, y, method: str = "oracle", witness: bool = True) -> DisjointnessVerdict:
        """Decide ``x ⊥ y``.

        ``oracle`` compares the upper-bound sets of ``{x+y, -x-y}`` and
        ``{x-y, y-x}`` by containment LPs.  ``fast`` checks that no facet
        functional is non-zero on both vectors.
        """
        x, y = vec(x), vec(y)
        if method == "oracle":
            disjoint, point = self._oracle_disjoint(x, y)
        elif method == "fast":
            disjoint, point = self.fast_disjoint(x, y), None
        else:
            raise ValueError(f"unknown method {method!r}")
        if disjoint or not witness:
            return DisjointnessVerdict(disjoint, None, method)
        if self.contains_positive(x) and self.contains_positive(y):
            point = self.lower_bound_witness(x, y)
        elif point is None:
            point = self._oracle_disjoint(x, y)[1]
        return DisjointnessVerdict(False, point, method)

    def fast_disjoint(self, x, y) -> bool:
        return all(a == 0 or b == 0 for a, b in zip(self.values(x), self.values(y)))

    def _oracle_disjoint(self, x: Vec, y: Vec) -> tuple[bool, Optional[Vec]]:
        sym = self.upper_bounds([add(x, y), neg(add(x, y))])
        anti = self.upper_bounds([sub(x, y), sub(y, x)])
        for inner, outer in ((sym, anti), (anti, sym)):
            point = _escape_point(inner, outer)
            if point is not None:
                return False, point
        return True, None

    def lower_bound_witness(self, x: Vec, y: Vec) -> Optional[Vec]:
        """A common lower bound of positive ``x, y`` that is not <= 0.

        Such a point exists exactly when ``inf{x, y} != 0``.
        """
        lower = self.lower_bounds([x, y])
        total = tuple(sum(col) for col in zip(*self.facets))
        res = lp(total, "max", lower)
        if res.status == "optimal" and not self.contains_positive(neg(res.point)):
            return res.point
        for f in self.facets:
            res = lp(f, "max", lower)
            if res.status == "optimal" and res.value > 0:
                return res.point
        return None

    def interval(self, low: Sequence[Fraction], high: Sequence[Fraction]) -> HPolyhedron:
        """Order interval ``[low, high]``."""
        fl, fh = self.values(low), self.values(high)
        normals = self.facets + tuple(neg(f) for f in self.facets)
        offsets = fl + tuple(-v for v in fh)
        return HPolyhedron(normals, offsets, self.dim)

    def is_D_disjoint(self, x, y) -> bool:
        """``[0, x] ∩ [0, y] = {0}`` for positive ``x, y``."""
        x, y = vec(x), vec(y)
        self._require_positive(x, y)
        zero = (ZERO,) * self.dim
        p = self.interval(zero, x).intersect(self.interval(zero, y))
        return polytope_is_zero(p, self.facets)

    def is_symmetric_interval_disjoint(self, x, y) -> bool:
        """``[-x, x] ∩ [-y, y] = {0}`` for positive ``x, y``."""
        x, y = vec(x), vec(y)
        self._require_positive(x, y)
        p = self.interval(neg(x), x).intersect(self.interval(neg(y), y))
        return polytope_is_zero(p, self.facets)

    # -- atoms ------------------------------------------------------------

    def atoms(self) -> Mat:
        return self.extreme_rays

    def is_atom(self, a) -> bool:
        """Extreme-ray test; for atoms also checks ``[-a, a] ⊆ span{a}``."""
        a = vec(a)
        if not any(a) or not self.contains_positive(a):
            return False
        active = [f for f, v in zip(self.facets, self.values(a)) if v == 0]
        if rank(active) != self.dim - 1:
            return False
        segment = self.interval(neg(a), a)
        for h in nullspace([a], self.dim):
            for sense in ("max", "min"):
                if lp(h, sense, segment).value != 0:
                    raise TheoremViolation(f"[-a, a] leaves span{{a}} for the atom {a}")
        return True

    # -- subspaces --------------------------------------------------------

    def positive_part(self, basis: Mat) -> SubspaceCone:
        return cone_subspace_intersection(self.cone, span_basis(basis, self.dim))

    def subspace_is_directed(self, basis: Mat) -> bool:
        basis = span_basis(basis, self.dim)
        return self.positive_part(basis).span_dim == len(basis)

    def subspaces_disjoint(self, v_basis: Mat, w_basis: Mat, method: str = "oracle") -> bool:
        return all(
            self.is_disjoint(v, w, method, witness=False).disjoint
            for v in v_basis
            for w in w_basis
        )


def _escape_point(inner: HPolyhedron, outer: HPolyhedron) -> Optional[Vec]:
    """A point of ``inner`` outside ``outer``, or None if ``inner ⊆ outer``.

    Both polyhedra share their normals, so only rows where ``outer`` is
    stricter need an LP.
    """
    for f, b_in, b_out in zip(inner.normals, inner.offsets, outer.offsets):
        if b_out <= b_in:
            continue
        res = lp(f, "min", inner)
        if res.status != "optimal":
            # f >= b_in on inner, so the minimum always exists
            raise TheoremViolation("upper-bound set is empty or unbounded below")
        if res.value < b_out:
            return res.point
    return None
