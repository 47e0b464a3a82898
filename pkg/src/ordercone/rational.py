"""Exact rational vectors and matrices.

Scalars are :class:`fractions.Fraction`.  Vectors are tuples of fractions and
matrices are tuples of row vectors; both are immutable so they can be shared
freely and used as dictionary keys.  A matrix with no rows carries no column
count, so functions that may see one take an explicit ``ncols``.

Every subspace has one canonical basis: the non-zero rows of the reduced row
echelon form of any spanning set.  Equal subspaces therefore compare equal
as plain tuples.
"""

from __future__ import annotations

import re
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Optional, Sequence

from ordercone.errors import DimensionMismatch, ParseError

Vec = tuple  # tuple[Fraction, ...]
Mat = tuple  # tuple[Vec, ...]

ZERO = Fraction(0)
ONE = Fraction(1)

_RAT_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+)\s*)?$")


def rat(value) -> Fraction:
    """Coerce an int, Fraction or rational string to a Fraction.

    Floats are refused: silently inheriting binary rounding would defeat the
    point of exact arithmetic.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise ParseError(f"not a rational number: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rat(value)
    raise ParseError(f"not a rational number: {value!r}")


def parse_rat(text: str) -> Fraction:
    m = _RAT_RE.match(text)
    if m is None:
        raise ParseError(f"not a rational number: {text!r}")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise ParseError(f"zero denominator: {text!r}")
    return Fraction(num, den)


def format_rat(q: Fraction) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def vec(values: Iterable) -> Vec:
    return tuple(rat(v) for v in values)


def mat(rows: Iterable[Iterable]) -> Mat:
    rows = tuple(vec(r) for r in rows)
    if rows and len({len(r) for r in rows}) != 1:
        raise DimensionMismatch("rows of unequal length")
    return rows


def parse_vec(text: str) -> Vec:
    """Parse ``"1,-1/2,0"``."""
    parts = [p for p in text.split(",")]
    if not text.strip() or any(not p.strip() for p in parts):
        raise ParseError(f"malformed vector: {text!r}")
    return tuple(parse_rat(p) for p in parts)


def format_vec(v: Sequence[Fraction]) -> str:
    return ",".join(format_rat(x) for x in v)


def zeros(n: int) -> Vec:
    return (ZERO,) * n


def unit(n: int, i: int) -> Vec:
    return tuple(ONE if k == i else ZERO for k in range(n))


def identity(n: int) -> Mat:
    return tuple(unit(n, i) for i in range(n))


def zero_matrix(n: int, m: Optional[int] = None) -> Mat:
    return tuple(zeros(n if m is None else m) for _ in range(n))


def dot(u: Sequence, v: Sequence) -> Fraction:
    s = ZERO
    for a, b in zip(u, v):
        if a and b:
            s += a * b
    return s


def add(u: Vec, v: Vec) -> Vec:
    return tuple(a + b for a, b in zip(u, v))


def sub(u: Vec, v: Vec) -> Vec:
    return tuple(a - b for a, b in zip(u, v))


def neg(u: Vec) -> Vec:
    return tuple(-a for a in u)


def scale(c, u: Vec) -> Vec:
    return tuple(c * a for a in u)


def is_zero(u: Sequence) -> bool:
    return not any(u)


def transpose(m: Mat, nrows_if_empty: int = 0) -> Mat:
    if not m:
        return tuple(() for _ in range(nrows_if_empty))
    return tuple(zip(*m))


def matvec(m: Mat, x: Vec) -> Vec:
    return tuple(dot(row, x) for row in m)


def matmul(a: Mat, b: Mat) -> Mat:
    bt = transpose(b)
    return tuple(tuple(dot(row, col) for col in bt) for row in a)


def mat_add(a: Mat, b: Mat) -> Mat:
    return tuple(add(r, s) for r, s in zip(a, b))


def mat_sub(a: Mat, b: Mat) -> Mat:
    return tuple(sub(r, s) for r, s in zip(a, b))


def primitive(v: Sequence[Fraction]) -> Vec:
    """Positive rescaling of ``v`` to coprime integers (zero stays zero)."""
    den = 1
    for x in v:
        den = lcm(den, x.denominator)
    ints = [int(x * den) for x in v]
    g = 0
    for k in ints:
        g = gcd(g, k)
    if g == 0:
        return tuple(Fraction(0) for _ in v)
    return tuple(Fraction(k // g) for k in ints)


def int_form(v: Sequence[Fraction]) -> tuple[tuple[int, ...], int]:
    """``v = ints / den`` with ``den`` the lcm of the denominators."""
    den = 1
    for x in v:
        if x.denominator != 1:
            den = lcm(den, x.denominator)
    if den == 1:
        return tuple(int(x) for x in v), 1
    return tuple(x.numerator * (den // x.denominator) for x in v), den


def int_matrix_form(m: Mat) -> tuple[tuple[tuple[int, ...], ...], int]:
    """``m = ints / den`` reduced so that gcd(all entries, den) = 1."""
    den = 1
    for row in m:
        for x in row:
            if x.denominator != 1:
                den = lcm(den, x.denominator)
    ints = [[x.numerator * (den // x.denominator) for x in row] for row in m]
    g = den
    for row in ints:
        for k in row:
            g = gcd(g, k)
    return tuple(tuple(k // g for k in row) for row in ints), den // g


def _integer_rows(m: Sequence[Sequence[Fraction]]) -> list[list[int]]:
    out = []
    for row in m:
        den = 1
        for x in row:
            den = lcm(den, x.denominator)
        out.append([x.numerator * (den // x.denominator) for x in row])
    return out


def rank(m: Sequence[Sequence[Fraction]]) -> int:
    """Rank over Q by fraction-free (Bareiss) elimination on integer rows."""
    a = _integer_rows(m)
    if not a:
        return 0
    nrows, ncols = len(a), len(a[0])
    r = 0
    prev = 1
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        p = a[r][c]
        for i in range(r + 1, nrows):
            ai = a[i]
            f = ai[c]
            ar = a[r]
            for k in range(c + 1, ncols):
                ai[k] = (p * ai[k] - f * ar[k]) // prev
            ai[c] = 0
        prev = p
        r += 1
        if r == nrows:
            break
    return r


def rref(m: Sequence[Sequence[Fraction]], ncols: Optional[int] = None):
    """Reduced row echelon form.

    Returns ``(rows, pivots)`` where ``rows`` holds only the non-zero rows.
    Elimination runs on integer rows (kept primitive by gcd division) and
    converts to fractions once at the end.
    """
    rows = _integer_rows(m)
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        pr = rows[r]
        p = pr[c]
        for i in range(len(rows)):
            if i == r:
                continue
            ri = rows[i]
            f = ri[c]
            if f:
                new = [p * x - f * y for x, y in zip(ri, pr)]
                g = 0
                for x in new:
                    if x:
                        g = gcd(g, x)
                        if g == 1:
                            break
                rows[i] = [x // g for x in new] if g > 1 else new
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    out = []
    for row, c in zip(rows[:r], pivots):
        p = row[c]
        out.append(tuple(Fraction(x, p) if x else ZERO for x in row))
    return tuple(out), tuple(pivots)


def span_basis(vectors: Iterable[Sequence[Fraction]], dim: int) -> Mat:
    """Canonical basis of the span of ``vectors`` in Q^dim."""
    rows, _ = rref([tuple(v) for v in vectors], dim)
    return rows


def nullspace(m: Sequence[Sequence[Fraction]], ncols: Optional[int] = None) -> Mat:
    """Canonical basis of ``{x : m x = 0}``."""
    if ncols is None:
        if not m:
            raise DimensionMismatch("ncols required for a matrix without rows")
        ncols = len(m[0])
    rows, pivots = rref(m, ncols)
    pivset = set(pivots)
    basis = []
    for f in range(ncols):
        if f in pivset:
            continue
        x = [ZERO] * ncols
        x[f] = ONE
        for row, p in zip(rows, pivots):
            x[p] = -row[f]
        basis.append(x)
    return span_basis(basis, ncols)


def solve(m: Sequence[Sequence[Fraction]], b: Sequence[Fraction],
          ncols: Optional[int] = None) -> Optional[Vec]:
    """One exact solution of ``m x = b``, or None if the system is inconsistent.

    Free variables are set to zero, so the answer is deterministic.
    """
    if len(b) != len(m):
        raise DimensionMismatch(f"{len(m)} equations but right-hand side of length {len(b)}")
    if ncols is None:
        if not m:
            raise DimensionMismatch("ncols required for a matrix without rows")
        ncols = len(m[0])
    aug = [tuple(row) + (rhs,) for row, rhs in zip(m, b)]
    rows, pivots = rref(aug, ncols + 1)
    if pivots and pivots[-1] == ncols:
        return None
    x = [ZERO] * ncols
    for row, p in zip(rows, pivots):
        x[p] = row[ncols]
    return tuple(x)


def inverse(m: Mat) -> Mat:
    n = len(m)
    aug = [tuple(row) + unit(n, i) for i, row in enumerate(m)]
    rows, pivots = rref(aug, 2 * n)
    if len(rows) < n or pivots[n - 1] != n - 1:
        raise DimensionMismatch("matrix is singular")
    return tuple(tuple(row[n:]) for row in rows)


def in_span(basis: Mat, v: Sequence[Fraction]) -> bool:
    """Membership test against a canonical (RREF) basis."""
    v = list(v)
    for row in basis:
        p = next(i for i, x in enumerate(row) if x != 0)
        f = v[p]
        if f:
            v = [a - f * b for a, b in zip(v, row)]
    return not any(v)


def subspace_contains(big: Mat, small: Mat) -> bool:
    return all(in_span(big, v) for v in small)


def intersect_subspaces(a: Mat, b: Mat, dim: int) -> Mat:
    """Canonical basis of span(a) ∩ span(b)."""
    if not a or not b:
        return ()
    # x = a^T s = b^T t  <=>  [a^T | -b^T] (s, t) = 0
    cols = list(a) + [neg(v) for v in b]
    system = transpose(tuple(cols))
    kernel = nullspace(system, len(cols))
    vectors = []
    for k in kernel:
        s = k[:len(a)]
        x = [ZERO] * dim
        for coeff, v in zip(s, a):
            if coeff:
                x = [xi + coeff * vi for xi, vi in zip(x, v)]
        vectors.append(x)
    return span_basis(vectors, dim)


def column_space(m: Mat, nrows: int) -> Mat:
    return span_basis(transpose(m, nrows), nrows)


def is_idempotent(p: Mat) -> bool:
    return matmul(p, p) == p
