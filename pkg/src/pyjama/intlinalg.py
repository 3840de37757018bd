"""Exact integer linear algebra: Hermite/Smith normal forms and integer kernels."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence


class DimensionMismatch(ValueError):
    pass


class IntMat:
    """Dense integer matrix with explicit shape (so 0-row matrices keep a width)."""

    __slots__ = ("rows", "nrows", "ncols")

    def __init__(self, rows: Iterable[Iterable[int]], ncols: int | None = None):
        data = [[int(v) for v in r] for r in rows]
        if ncols is None:
            if not data:
                raise ValueError("ncols is required for a matrix with no rows")
            ncols = len(data[0])
        for r in data:
            if len(r) != ncols:
                raise DimensionMismatch(f"row of length {len(r)} in a {ncols}-column matrix")
        self.rows = data
        self.nrows = len(data)
        self.ncols = ncols

    @classmethod
    def identity(cls, n: int) -> "IntMat":
        return cls([[int(i == j) for j in range(n)] for i in range(n)], n)

    @classmethod
    def zeros(cls, m: int, n: int) -> "IntMat":
        return cls([[0] * n for _ in range(m)], n)

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def row(self, i: int) -> list[int]:
        return list(self.rows[i])

    def col(self, j: int) -> list[int]:
        return [r[j] for r in self.rows]

    def transpose(self) -> "IntMat":
        return IntMat([[self.rows[i][j] for i in range(self.nrows)] for j in range(self.ncols)], self.nrows)

    def __matmul__(self, other: "IntMat") -> "IntMat":
        if self.ncols != other.nrows:
            raise DimensionMismatch(f"{self.shape} @ {other.shape}")
        cols = other.transpose().rows
        return IntMat([[sum(a * b for a, b in zip(r, c)) for c in cols] for r in self.rows], other.ncols)

    def apply(self, v: Sequence) -> list:
        """Matrix-vector product; works for int or Fraction vectors."""
        if len(v) != self.ncols:
            raise DimensionMismatch(f"vector of length {len(v)} for {self.shape} matrix")
        return [sum(a * x for a, x in zip(r, v)) for r in self.rows]

    def select_cols(self, idx: Sequence[int]) -> "IntMat":
        return IntMat([[r[j] for j in idx] for r in self.rows], len(idx))

    def select_rows(self, idx: Sequence[int]) -> "IntMat":
        return IntMat([list(self.rows[i]) for i in idx], self.ncols)

    def is_zero(self) -> bool:
        return all(v == 0 for r in self.rows for v in r)

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.rows]

    def __eq__(self, other) -> bool:
        return isinstance(other, IntMat) and self.shape == other.shape and self.rows == other.rows

    def __repr__(self) -> str:
        return f"IntMat({self.rows!r}, ncols={self.ncols})"


def det(m: IntMat) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    n = m.nrows
    if n != m.ncols:
        raise DimensionMismatch("determinant of a non-square matrix")
    if n == 0:
        return 1
    a = m.tolist()
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def rank_q(rows: Sequence[Sequence]) -> int:
    """Rank over the rationals."""
    return len(rref(rows)[1])


def rref(rows: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over Q; returns (nonzero rows, pivot columns)."""
    a = [[Fraction(v) for v in r] for r in rows]
    if not a:
        return [], []
    n = len(a[0])
    pivots: list[int] = []
    r = 0
    for c in range(n):
        p = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = 1 / a[r][c]
        a[r] = [v * inv for v in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == len(a):
            break
    return a[:r], pivots


def hnf(m: IntMat) -> IntMat:
    """Row-style Hermite normal form with the zero rows removed.

    Pivots are positive and entries above each pivot are reduced into
    ``[0, pivot)``; the rows form a basis of the lattice spanned by the input rows.
    """
    a = m.tolist()
    n = m.ncols
    r = 0
    for c in range(n):
        if r == len(a):
            break
        # gcd-combine column c into row r with unimodular 2x2 row operations
        for i in range(r + 1, len(a)):
            if a[i][c] == 0:
                continue
            x, y = a[r][c], a[i][c]
            g, s, t = _xgcd(x, y)
            u, v = x // g, y // g
            row_r = [s * p + t * q for p, q in zip(a[r], a[i])]
            row_i = [-v * p + u * q for p, q in zip(a[r], a[i])]
            a[r], a[i] = row_r, row_i
        if a[r][c] == 0:
            continue
        if a[r][c] < 0:
            a[r] = [-v for v in a[r]]
        piv = a[r][c]
        for i in range(r):
            q = a[i][c] // piv
            if q:
                a[i] = [p - q * w for p, w in zip(a[i], a[r])]
        r += 1
    return IntMat([row for row in a[:r] if any(row)], n)


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, s, t) with s*a + t*b = g = gcd(a, b) >= 0."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        a, s0, t0 = -a, -s0, -t0
    return a, s0, t0


@dataclass(frozen=True)
class SnfResult:
    D: IntMat
    U: IntMat
    V: IntMat

    @property
    def invariant_factors(self) -> list[int]:
        k = min(self.D.shape)
        return [self.D[i, i] for i in range(k) if self.D[i, i] != 0]

    @property
    def rank(self) -> int:
        return len(self.invariant_factors)


def snf(g: IntMat) -> SnfResult:
    """Smith normal form: returns unimodular U, V with U @ G @ V = D."""
    m, n = g.shape
    a = g.tolist()
    U = IntMat.identity(m).tolist()
    V = IntMat.identity(n).tolist()

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, f):  # row_dst += f * row_src
        a[dst] = [x + f * y for x, y in zip(a[dst], a[src])]
        U[dst] = [x + f * y for x, y in zip(U[dst], U[src])]

    def add_col(dst, src, f):  # col_dst += f * col_src
        for row in a:
            row[dst] += f * row[src]
        for row in V:
            row[dst] += f * row[src]

    for t in range(min(m, n)):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if a[i][j] and (best is None or abs(a[i][j]) < abs(a[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        swap_rows(t, best[0])
        swap_cols(t, best[1])
        while True:
            done = True
            for i in range(t + 1, m):
                if a[i][t]:
                    add_row(i, t, -(a[i][t] // a[t][t]))
                    if a[i][t]:
                        done = False
            for j in range(t + 1, n):
                if a[t][j]:
                    add_col(j, t, -(a[t][j] // a[t][t]))
                    if a[t][j]:
                        done = False
            if not done:
                # move the smallest remainder into the pivot and repeat
                best = (t, t)
                for i in range(t + 1, m):
                    if a[i][t] and abs(a[i][t]) < abs(a[best[0]][best[1]]):
                        best = (i, t)
                for j in range(t + 1, n):
                    if a[t][j] and abs(a[t][j]) < abs(a[best[0]][best[1]]):
                        best = (t, j)
                if best[0] != t:
                    swap_rows(t, best[0])
                if best[1] != t:
                    swap_cols(t, best[1])
                continue
            bad = next(
                ((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if a[i][j] % a[t][t]),
                None,
            )
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            U[t] = [-x for x in U[t]]
    return SnfResult(IntMat(a, n), IntMat(U, m), IntMat(V, n))


def clear_denominators(rows: Sequence[Sequence]) -> IntMat:
    """Scale each rational row to a primitive integer row (same kernel)."""
    out = []
    for r in rows:
        fr = [Fraction(v) for v in r]
        lcm = 1
        for v in fr:
            lcm = lcm * v.denominator // math.gcd(lcm, v.denominator)
        ints = [int(v * lcm) for v in fr]
        g = 0
        for v in ints:
            g = math.gcd(g, v)
        out.append([v // g for v in ints] if g else ints)
    return IntMat(out, len(rows[0]) if rows else 0)


def int_kernel(c: Sequence[Sequence], n: int | None = None) -> IntMat:
    """Basis (as rows) of the lattice ``{m in Z^n : C m = 0}``.

    The returned lattice is the full integer kernel, so it is saturated.
    """
    if n is None:
        if not c:
            raise ValueError("column count required for an empty matrix")
        n = len(c[0])
    rows = [r for r in c if any(Fraction(v) != 0 for v in r)]
    if not rows:
        return IntMat.identity(n)
    ci = clear_denominators(rows)
    res = snf(ci)
    r = res.rank
    # columns of V beyond the rank span exactly the integer kernel
    basis = [[res.V[i, j] for i in range(n)] for j in range(r, n)]
    if not basis:
        return IntMat([], n)
    return hnf(IntMat(basis, n))


def lattice_contains(basis: IntMat, v: Sequence[int]) -> bool:
    """True iff ``v`` is an integer combination of the rows of ``basis``."""
    if len(v) != basis.ncols:
        raise DimensionMismatch(f"vector of length {len(v)} vs lattice in Z^{basis.ncols}")
    rest = [int(x) for x in v]
    if basis.nrows == 0:
        return not any(rest)
    h = hnf(basis)
    for row in h.rows:
        p = next(j for j, x in enumerate(row) if x)
        if rest[p] % row[p]:
            return False
        q = rest[p] // row[p]
        if q:
            rest = [a - q * b for a, b in zip(rest, row)]
    return not any(rest)


def unimodular_inverse(m: IntMat) -> IntMat:
    """Inverse of a square integer matrix with determinant +-1."""
    n = m.nrows
    aug = [[Fraction(x) for x in r] + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(m.rows)]
    red, piv = rref(aug)
    if piv[:n] != list(range(n)):
        raise ValueError("matrix is singular")
    inv = [[x for x in r[n:]] for r in red]
    if any(x.denominator != 1 for r in inv for x in r):
        raise ValueError("matrix is not unimodular")
    return IntMat([[int(x) for x in r] for r in inv], n)


def reduce_rows(m: IntMat, max_rounds: int = 200) -> IntMat:
    """Greedy pairwise size reduction of a lattice basis (same lattice).

    Replaces row i by row_i - c*row_j whenever that lowers its L1 norm,
    until no move helps; rows are then sorted by (norm, lexicographic) with a
    positive leading entry. This is a cheap heuristic, not LLL.
    """
    rows = [list(r) for r in m.rows]

    def l1(v):
        return sum(abs(x) for x in v)

    for _ in range(max_rounds):
        improved = False
        for i in range(len(rows)):
            for j in range(len(rows)):
                if i == j:
                    continue
                best, best_c = l1(rows[i]), 0
                for c in (1, -1, 2, -2, 3, -3):
                    cand = l1([a - c * b for a, b in zip(rows[i], rows[j])])
                    if cand < best:
                        best, best_c = cand, c
                if best_c:
                    rows[i] = [a - best_c * b for a, b in zip(rows[i], rows[j])]
                    improved = True
        if not improved:
            break
    out = []
    for r in rows:
        lead = next((x for x in r if x), 0)
        out.append([-x for x in r] if lead < 0 else r)
    out.sort(key=lambda r: (l1(r), [-abs(x) for x in r], r))
    return IntMat(out, m.ncols)
