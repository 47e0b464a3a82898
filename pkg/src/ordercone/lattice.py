"""Vector-lattice detection, pervasiveness probes and random test spaces."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Optional, Sequence

from ordercone.errors import NotApplicable, PreconditionViolation, SearchExhausted, TheoremViolation
from ordercone.polyhedral import HPolyhedron, lp
from ordercone.projections import BooleanAlgebraReport, enumerate_band_projections
from ordercone.rational import Vec, neg, rank, vec
from ordercone.space import OrderedSpace, validate


@dataclass(frozen=True)
class LatticeRoutes:
    simplicial: bool
    rank1_census: int
    m_equals_n: bool
    extreme_ray_pairwise_disjoint: bool


@dataclass(frozen=True)
class LatticeVerdict:
    is_lattice: bool
    routes: LatticeRoutes
    witness: Optional[tuple]


def is_vector_lattice(space: OrderedSpace, report: Optional[BooleanAlgebraReport] = None
                      ) -> LatticeVerdict:
    """Decide whether the space is a vector lattice by four independent routes."""
    n = space.dim
    if report is None:
        report = enumerate_band_projections(space)
    rays = space.extreme_rays
    simplicial = len(rays) == n and rank(rays) == n
    census = sum(1 for p in report.projections if p.rank == 1)
    pairwise = len(rays) == n and all(
        space.is_disjoint(a, b, "oracle", witness=False) for a, b in combinations(rays, 2)
    )
    routes = LatticeRoutes(simplicial, census, report.m == n, pairwise)
    votes = {simplicial, census == n, report.m == n, pairwise}
    if len(votes) != 1:
        raise TheoremViolation(f"lattice criteria disagree: {routes}")
    lattice = simplicial
    witness = None if lattice else _atom_pair_witness(space)
    return LatticeVerdict(lattice, routes, witness)


def _atom_pair_witness(space: OrderedSpace) -> tuple:
    """Two extreme rays with ``[-x,x] ∩ [-y,y] = {0}`` that are not disjoint."""
    for a, b in combinations(space.extreme_rays, 2):
        if space.is_disjoint(a, b, "oracle", witness=False):
            continue
        if not space.is_symmetric_interval_disjoint(a, b):
            raise TheoremViolation(f"distinct atoms {a}, {b} have overlapping symmetric intervals")
        return (a, b)
    raise SearchExhausted("non-lattice space but all extreme rays are pairwise disjoint")


def weakly_pervasive_witness(space: OrderedSpace, random_pairs: int = 20, seed: int = 0
                             ) -> Optional[tuple]:
    """A positive pair that is D-disjoint but not disjoint, or None for lattices.

    Extreme-ray pairs are tried first, in canonical order; random positive
    pairs only if none of those works.
    """
    rays = space.extreme_rays
    if len(rays) == space.dim:
        return None
    for a, b in combinations(rays, 2):
        if not space.is_disjoint(a, b, "oracle", witness=False) and space.is_D_disjoint(a, b):
            return (a, b)
    rng = random.Random(seed)
    for _ in range(random_pairs):
        x, y = _random_positive(space, rng), _random_positive(space, rng)
        if not space.is_disjoint(x, y, "oracle", witness=False) and space.is_D_disjoint(x, y):
            return (x, y)
    raise SearchExhausted("non-lattice space but no D-disjoint, non-disjoint pair found")


def _random_positive(space: OrderedSpace, rng: random.Random) -> Vec:
    x = [Fraction(0)] * space.dim
    for g in space.extreme_rays:
        c = rng.randint(0, 3)
        if c:
            x = [a + c * b for a, b in zip(x, g)]
    return tuple(x)


def pervasive_at(space: OrderedSpace, b) -> tuple[bool, Optional[Vec]]:
    """Is there ``x > 0`` below every positive upper bound of ``b``?

    Returns the verdict and, when true, such an ``x``.
    """
    b = vec(b)
    if space.contains_positive(neg(b)):
        raise NotApplicable("b <= 0")
    # U(b): positive upper bounds of b
    offsets = tuple(max(v, 0) for v in space.values(b))
    upper = HPolyhedron(space.facets, offsets, space.dim)
    mins = [lp(f, "min", upper).value for f in space.facets]
    # {x in X+ : f_i(x) <= min_{U(b)} f_i}
    region = HPolyhedron(
        space.facets + tuple(neg(f) for f in space.facets),
        (Fraction(0),) * len(space.facets) + tuple(-v for v in mins),
        space.dim,
    )
    total = tuple(sum(col) for col in zip(*space.facets))
    res = lp(total, "max", region)
    if res.value > 0:
        return True, res.point
    return False, None


@dataclass(frozen=True)
class HierarchyRow:
    x: Vec
    y: Vec
    disjoint: bool
    symmetric_interval_disjoint: bool
    D_disjoint: bool

    @property
    def triple(self) -> tuple:
        return (self.disjoint, self.symmetric_interval_disjoint, self.D_disjoint)

    @property
    def separates(self) -> Optional[str]:
        if self.symmetric_interval_disjoint and not self.disjoint:
            return "disjoint/symmetric"
        if self.D_disjoint and not self.symmetric_interval_disjoint:
            return "symmetric/D"
        return None


def hierarchy_report(space: OrderedSpace, pairs: Sequence[tuple]) -> list[HierarchyRow]:
    """Disjoint ⟹ symmetric-interval-disjoint ⟹ D-disjoint, per pair."""
    rows = []
    for x, y in pairs:
        x, y = vec(x), vec(y)
        row = HierarchyRow(
            x, y,
            space.is_disjoint(x, y, "oracle", witness=False).disjoint,
            space.is_symmetric_interval_disjoint(x, y),
            space.is_D_disjoint(x, y),
        )
        if (row.disjoint and not row.symmetric_interval_disjoint) or \
                (row.symmetric_interval_disjoint and not row.D_disjoint):
            raise TheoremViolation(f"implication chain broken for {x}, {y}: {row.triple}")
        rows.append(row)
    return rows


@dataclass(frozen=True)
class ConeSeed:
    dim: int
    ray_count: int
    seed: int
    rays: tuple


DENOMINATOR = 4


def cone_seed(dim: int, ray_count: int, seed: int) -> ConeSeed:
    """Rays ``(p, 1)`` with ``p`` in ``[-1, 1]^(dim-1)``, resampled until they span."""
    if not 2 <= dim <= 6:
        raise PreconditionViolation("dim must lie in 2..6")
    if ray_count < dim:
        raise PreconditionViolation("need at least dim rays")
    rng = random.Random(f"ordercone:{dim}:{ray_count}:{seed}")
    while True:
        rays = tuple(
            tuple(Fraction(rng.randint(-DENOMINATOR, DENOMINATOR), DENOMINATOR)
                  for _ in range(dim - 1)) + (Fraction(1),)
            for _ in range(ray_count)
        )
        if rank(rays) == dim:
            return ConeSeed(dim, ray_count, seed, rays)


def random_space(dim: int, ray_count: int, seed: int) -> OrderedSpace:
    return validate(cone_seed(dim, ray_count, seed).rays, dim)


def product_space(*spaces: OrderedSpace) -> OrderedSpace:
    """Direct product with the product cone (generators padded with zeros)."""
    n = sum(s.dim for s in spaces)
    gens = []
    offset = 0
    for s in spaces:
        for g in s.generators:
            gens.append((Fraction(0),) * offset + tuple(g) + (Fraction(0),) * (n - offset - s.dim))
        offset += s.dim
    return validate(gens, n)


def random_product_space(dim: int, seed: int) -> OrderedSpace:
    """Product of random pieces with dimensions summing to ``dim``.

    Pieces of dimension 1 are the ordered line, pieces of dimension 2 are
    simplicial, and larger pieces get one or two surplus rays so that they
    are usually not lattices.
    """
    if not 2 <= dim <= 6:
        raise PreconditionViolation("dim must lie in 2..6")
    rng = random.Random(f"ordercone-product:{dim}:{seed}")
    pieces = []
    left = dim
    while left:
        k = rng.choice([j for j in (1, 3, 3, 4) if j <= left])
        if k == 1:
            pieces.append(validate([(1,)], 1))
        else:
            surplus = rng.randint(1, 2) if k > 2 else 0
            pieces.append(random_space(k, k + surplus, rng.randrange(10 ** 6)))
        left -= k
    return product_space(*pieces)
