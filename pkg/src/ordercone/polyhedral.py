"""Polyhedral cones and exact linear programming.

A :class:`Cone` carries both descriptions of a polyhedral cone: the
generators it was built from and the irredundant facet functionals ``f_i``
with ``cone = {x : f_i(x) >= 0 for all i}``.  Conversion between the two is
the double description method.  :func:`lp` is a dense two-phase simplex over
the rationals with Bland's rule; every answer comes with a certificate that
is checked exactly before it is returned.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from ordercone.errors import DimensionMismatch, PreconditionViolation, TheoremViolation
from ordercone.rational import (
    ZERO,
    Mat,
    Vec,
    dot,
    inverse,
    matvec,
    neg,
    nullspace,
    primitive,
    rank,
    span_basis,
    transpose,
    vec,
)


@dataclass(frozen=True)
class Cone:
    dim: int
    generators: Mat
    facets: Mat
    extreme_rays: Mat

    def contains(self, x: Sequence[Fraction]) -> bool:
        return all(dot(f, x) >= 0 for f in self.facets)

    def facet_values(self, x: Sequence[Fraction]) -> Vec:
        return tuple(dot(f, x) for f in self.facets)

    def is_pointed(self) -> bool:
        return rank(self.facets) == self.dim

    def is_generating(self) -> bool:
        return rank(self.generators) == self.dim


@dataclass(frozen=True)
class HPolyhedron:
    """The set ``{x : normals[i] . x >= offsets[i]}``."""

    normals: Mat
    offsets: Vec
    dim: int

    def __post_init__(self):
        if len(self.normals) != len(self.offsets):
            raise DimensionMismatch("normals and offsets differ in length")
        if any(len(a) != self.dim for a in self.normals):
            raise DimensionMismatch("normal of wrong dimension")

    def contains(self, x: Sequence[Fraction]) -> bool:
        return all(dot(a, x) >= b for a, b in zip(self.normals, self.offsets))

    def intersect(self, other: "HPolyhedron") -> "HPolyhedron":
        return HPolyhedron(self.normals + other.normals, self.offsets + other.offsets, self.dim)


@dataclass(frozen=True)
class LPResult:
    """Outcome of :func:`lp`.

    ``certificate`` depends on ``status``: dual multipliers ``y >= 0`` with
    ``A^T y = c`` (``c`` the objective in minimisation form, i.e. negated for
    ``max``) when optimal; a Farkas vector ``y >= 0`` with ``A^T y = 0`` and
    ``b.y > 0`` when infeasible; a recession direction ``d`` with ``A d >= 0``
    and ``c.d < 0`` when unbounded.
    """

    status: str
    value: Optional[Fraction] = None
    point: Optional[Vec] = None
    certificate: Optional[Vec] = None


# -- double description -------------------------------------------------------

def _canonical_rays(rays) -> Mat:
    return tuple(sorted({primitive(r) for r in rays if any(r)}))


def _dd_pointed(m: Sequence[Vec], r: int) -> list[Vec]:
    """Extreme rays of the pointed cone ``{z in Q^r : m z >= 0}``.

    ``m`` must have rank ``r``.  Rows are inserted in input order.
    """
    # initial simplicial cone on the first r independent rows
    chosen: list[int] = []
    for i, row in enumerate(m):
        if rank([m[j] for j in chosen] + [row]) > len(chosen):
            chosen.append(i)
            if len(chosen) == r:
                break
    base = [m[i] for i in chosen]
    inv = inverse(tuple(base))
    rays = [primitive(col) for col in transpose(inv)]
    processed = list(chosen)
    for i, a in enumerate(m):
        if i in chosen:
            continue
        vals = [dot(a, ray) for ray in rays]
        pos = [k for k, v in enumerate(vals) if v > 0]
        negs = [k for k, v in enumerate(vals) if v < 0]
        new = [rays[k] for k, v in enumerate(vals) if v >= 0]
        if negs and pos:
            zero_sets = [
                frozenset(j for j in processed if dot(m[j], ray) == 0) for ray in rays
            ]
            for p in pos:
                for q in negs:
                    common = zero_sets[p] & zero_sets[q]
                    if len(common) < r - 2:
                        continue
                    if rank([m[j] for j in common]) != r - 2:
                        continue
                    combo = tuple(
                        vals[p] * x - vals[q] * y for x, y in zip(rays[q], rays[p])
                    )
                    new.append(primitive(combo))
        rays = new
        processed.append(i)
    return rays


def h_to_v(normals: Sequence[Sequence[Fraction]], dim: int) -> tuple[Mat, Mat]:
    """Generators of ``{y : normals . y >= 0}``.

    Returns ``(rays, lineality)``: canonical extreme rays of the cone modulo
    its lineality space, and a canonical basis of the lineality space.
    """
    normals = [tuple(a) for a in normals]
    lineality = nullspace(normals, dim)
    if len(lineality) == dim:
        return (), lineality
    rowspace = span_basis(normals, dim)
    # y = rowspace^T z; in z-coordinates the cone is pointed
    reduced = [tuple(dot(a, rs) for rs in rowspace) for a in normals]
    zrays = _dd_pointed(reduced, len(rowspace))
    rays = []
    for z in zrays:
        y = [ZERO] * dim
        for coeff, rs in zip(z, rowspace):
            if coeff:
                y = [a + coeff * b for a, b in zip(y, rs)]
        rays.append(y)
    return _canonical_rays(rays), lineality


def extreme_generators(generators: Mat, facets: Mat, dim: int) -> Mat:
    """Sublist of ``generators`` spanning extreme rays, first representative kept."""
    seen = set()
    out = []
    for g in generators:
        if not any(g):
            continue
        key = primitive(g)
        if key in seen:
            continue
        active = [f for f in facets if dot(f, g) == 0]
        if rank(active) == dim - 1:
            seen.add(key)
            out.append(g)
    return tuple(out)


def v_to_h(generators: Sequence[Sequence], dim: int) -> Cone:
    """Facet description of the conic hull of ``generators``.

    Lines are allowed here: a lineality direction ``l`` of the dual shows up
    as the pair of facets ``l`` and ``-l``.  Facets are scaled to coprime
    integers (positive scaling only, orientation is meaningful) and sorted.
    """
    gens = tuple(vec(g) for g in generators)
    if any(len(g) != dim for g in gens):
        raise DimensionMismatch(f"generator of wrong dimension (expected {dim})")
    rays, lineality = h_to_v(gens, dim)
    facets = list(rays)
    for l in lineality:
        facets.append(primitive(l))
        facets.append(primitive(neg(l)))
    facets = tuple(sorted(set(facets)))
    return Cone(dim, gens, facets, extreme_generators(gens, facets, dim))


def cone_from_facets(facets: Sequence[Sequence], dim: int) -> Cone:
    """Cone given by inequalities; generators are computed."""
    rays, lineality = h_to_v([vec(f) for f in facets], dim)
    gens = list(rays) + [g for l in lineality for g in (l, neg(l))]
    return v_to_h(gens, dim)


# -- linear programming -------------------------------------------------------

def _pivot(t: list[list[Fraction]], d: list[Fraction], r: int, j: int) -> None:
    row = t[r]
    p = row[j]
    if p != 1:
        row = [x / p for x in row]
        t[r] = row
    nz = [k for k, x in enumerate(row) if x]
    for i, other in enumerate(t):
        if i == r:
            continue
        f = other[j]
        if f:
            for k in nz:
                other[k] -= f * row[k]
    f = d[j]
    if f:
        for k in nz:
            d[k] -= f * row[k]


def _run_simplex(t, basis, d, allowed: int):
    """Bland's rule.  Returns ``None`` at optimum, else the unbounded column."""
    rhs = len(t[0]) - 1 if t else 0
    while True:
        j = next((k for k in range(allowed) if d[k] < 0), None)
        if j is None:
            return None
        best = None
        for i, row in enumerate(t):
            a = row[j]
            if a > 0:
                key = (row[rhs] / a, basis[i])
                if best is None or key < best[0]:
                    best = (key, i)
        if best is None:
            return j
        r = best[1]
        _pivot(t, d, r, j)
        basis[r] = j


def _reduced_costs(t, basis, cost) -> list[Fraction]:
    d = list(cost) + [ZERO]
    for i, b in enumerate(basis):
        cb = cost[b]
        if cb:
            row = t[i]
            for k, x in enumerate(row):
                if x:
                    d[k] -= cb * x
    return d


def lp(objective: Sequence[Fraction], sense: str, constraints: HPolyhedron) -> LPResult:
    """Optimise ``objective . x`` over ``constraints`` exactly."""
    if sense not in ("min", "max"):
        raise ValueError(f"sense must be 'min' or 'max', not {sense!r}")
    n = constraints.dim
    if len(objective) != n:
        raise DimensionMismatch("objective and constraints disagree on dimension")
    a_rows = constraints.normals
    b = constraints.offsets
    m = len(a_rows)
    c = tuple(objective) if sense == "min" else neg(tuple(objective))

    # columns: x+ (n), x- (n), slack (m), artificial (k); rhs last
    art_rows = [i for i in range(m) if b[i] > 0]
    n_real = 2 * n + m
    ncols = n_real + len(art_rows)
    t: list[list[Fraction]] = []
    basis: list[int] = []
    art_of = {}
    for i, (a, bi) in enumerate(zip(a_rows, b)):
        s = 1 if bi > 0 else -1
        row = [ZERO] * (ncols + 1)
        for k, x in enumerate(a):
            if x:
                row[k] = s * x
                row[n + k] = -s * x
        row[2 * n + i] = Fraction(-s)
        row[ncols] = s * bi
        if bi > 0:
            col = n_real + len(art_of)
            art_of[i] = col
            row[col] = Fraction(1)
            basis.append(col)
        else:
            basis.append(2 * n + i)
        t.append(row)

    if art_rows:
        cost1 = [ZERO] * n_real + [Fraction(1)] * len(art_rows)
        d = _reduced_costs(t, basis, cost1)
        _run_simplex(t, basis, d, ncols)
        phase1 = -d[ncols]
        if phase1 > 0:
            y = tuple(d[2 * n + i] for i in range(m))
            _check_farkas(a_rows, b, y, n)
            return LPResult("infeasible", certificate=y)
        # drive remaining artificials out of the basis (degenerate pivots)
        for i, bcol in enumerate(basis):
            if bcol >= n_real:
                j = next(k for k in range(n_real) if t[i][k] != 0)
                _pivot(t, d, i, j)
                basis[i] = j
        t = [row[:n_real] + [row[ncols]] for row in t]
    cost2 = list(c) + [-x for x in c] + [ZERO] * m
    d = _reduced_costs(t, basis, cost2)
    unbounded_col = _run_simplex(t, basis, d, n_real)
    if unbounded_col is not None:
        z = [ZERO] * n_real
        z[unbounded_col] = Fraction(1)
        for i, bcol in enumerate(basis):
            z[bcol] = -t[i][unbounded_col]
        ray = tuple(z[k] - z[n + k] for k in range(n))
        if not (all(dot(a, ray) >= 0 for a in a_rows) and dot(c, ray) < 0):
            raise TheoremViolation("unboundedness certificate failed to verify")
        return LPResult("unbounded", certificate=ray)
    z = [ZERO] * n_real
    for i, bcol in enumerate(basis):
        z[bcol] = t[i][n_real]
    x = tuple(z[k] - z[n + k] for k in range(n))
    y = tuple(d[2 * n + i] for i in range(m))
    value = dot(c, x)
    if not constraints.contains(x):
        raise TheoremViolation("simplex returned an infeasible point")
    if any(v < 0 for v in y) or matvec(transpose(a_rows, n), y) != c or dot(b, y) != value:
        raise TheoremViolation("duality certificate failed to verify")
    return LPResult("optimal", value if sense == "min" else -value, x, y)


def _check_farkas(a_rows, b, y, n):
    if any(v < 0 for v in y) or any(matvec(transpose(a_rows, n), y)) or dot(b, y) <= 0:
        raise TheoremViolation("Farkas certificate failed to verify")


def maximize(objective, constraints: HPolyhedron) -> LPResult:
    return lp(objective, "max", constraints)


def minimize(objective, constraints: HPolyhedron) -> LPResult:
    return lp(objective, "min", constraints)


def polytope_is_zero(p: HPolyhedron, spanning_functionals: Sequence[Vec]) -> bool:
    """True iff ``p == {0}``; ``p`` must contain the origin."""
    if not p.contains((ZERO,) * p.dim):
        raise PreconditionViolation("polyhedron does not contain the origin")
    if rank(spanning_functionals) != p.dim:
        raise PreconditionViolation("functionals do not span the dual space")
    for h in spanning_functionals:
        for sense in ("max", "min"):
            res = lp(h, sense, p)
            if res.status != "optimal" or res.value != 0:
                return False
    return True


@dataclass(frozen=True)
class SubspaceCone:
    """``cone ∩ span(basis)`` in subspace coordinates and in the ambient space."""

    basis: Mat
    cone: Optional[Cone]
    rays: Mat
    ambient_rays: Mat

    @property
    def span_dim(self) -> int:
        return rank(self.ambient_rays)


def cone_subspace_intersection(c: Cone, basis: Mat) -> SubspaceCone:
    k = len(basis)
    if rank(basis) != k:
        raise DimensionMismatch("basis rows are not independent")
    if k == 0:
        return SubspaceCone(basis, None, (), ())
    restricted = [tuple(dot(f, b) for b in basis) for f in c.facets]
    rays, lineality = h_to_v(restricted, k)
    if lineality:
        raise PreconditionViolation("cone contains a line inside the subspace")
    ambient = []
    for z in rays:
        x = [ZERO] * c.dim
        for coeff, bv in zip(z, basis):
            if coeff:
                x = [a + coeff * b for a, b in zip(x, bv)]
        ambient.append(primitive(x))
    sub = v_to_h(rays, k) if rays else None
    return SubspaceCone(basis, sub, rays, tuple(ambient))
