"""Certified branch-and-bound emptiness prover.

Decides whether ``{w in [eps, 1-eps]^n : m . w in Z for every relation row m}``
is empty. Internal nodes either fix the integer value of one relation
(k-branch) or bisect one coordinate; fixed relations tighten the box by
linear interval propagation. A closed node names one relation whose value
range over the box misses every admissible integer. The resulting tree is a
certificate that ``certcheck.check_certificate`` replays independently.
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Union

from .exactnum import fmt_rat
from .intlinalg import IntMat, rref

CERT_FORMAT = "pyjama-emptiness-cert/1"
MAX_PROPAGATION_PASSES = 4


@dataclass
class ProofStats:
    nodes: int = 0
    leaves: int = 0
    kbranches: int = 0
    bisections: int = 0
    max_depth: int = 0

    def as_dict(self) -> dict:
        return dict(self.__dict__)


@dataclass
class Empty:
    certificate: dict
    stats: ProofStats


@dataclass
class Nonempty:
    witness: list[Fraction]
    stats: ProofStats


@dataclass
class Unknown:
    stats: ProofStats
    reason: str = "budget exhausted"


ProofResult = Union[Empty, Nonempty, Unknown]


class _BudgetExhausted(Exception):
    pass


class _Found(Exception):
    def __init__(self, w):
        self.w = w


@dataclass
class _Solver:
    G: list[list[int]]
    eps: Fraction
    budget: int
    max_k_branch: int
    stats: ProofStats = field(default_factory=ProofStats)

    def __post_init__(self):
        self.n = len(self.G[0])
        self.support = [[j for j, c in enumerate(row) if c] for row in self.G]
        # [R | T] with R = T G in reduced echelon form, for exact witness solving
        r = len(self.G)
        aug = [list(row) + [int(i == k) for k in range(r)] for i, row in enumerate(self.G)]
        red, piv = rref(aug)
        self.solve_rows = [(row[: self.n], row[self.n :], p) for row, p in zip(red, piv)]
        self.pivot_cols = [p for p in piv if p < self.n]
        self.free_cols = [j for j in range(self.n) if j not in self.pivot_cols]

    # -- interval helpers -------------------------------------------------

    def row_range(self, i, lo, hi) -> tuple[Fraction, Fraction]:
        a = b = Fraction(0)
        for j in self.support[i]:
            c = self.G[i][j]
            if c > 0:
                a += c * lo[j]
                b += c * hi[j]
            else:
                a += c * hi[j]
                b += c * lo[j]
        return a, b

    def propagate(self, lo, hi, fixed):
        """Tighten the box with the fixed relations; returns (steps, closing row or None)."""
        steps = []
        for _ in range(MAX_PROPAGATION_PASSES):
            changed = False
            for i in sorted(fixed):
                k = fixed[i]
                for j in self.support[i]:
                    s_lo, s_hi = self.row_range(i, lo, hi)
                    c = self.G[i][j]
                    own_lo, own_hi = (c * lo[j], c * hi[j]) if c > 0 else (c * hi[j], c * lo[j])
                    rest_lo, rest_hi = s_lo - own_lo, s_hi - own_hi
                    if c > 0:
                        a, b = (k - rest_hi) / c, (k - rest_lo) / c
                    else:
                        a, b = (k - rest_lo) / c, (k - rest_hi) / c
                    nlo, nhi = max(lo[j], a), min(hi[j], b)
                    if nlo > nhi:
                        return steps, i
                    if nlo > lo[j] or nhi < hi[j]:
                        lo[j], hi[j] = nlo, nhi
                        steps.append((i, j))
                        changed = True
            if not changed:
                break
        return steps, None

    def try_witness(self, lo, hi, fixed) -> Optional[list[Fraction]]:
        if len(fixed) < len(self.G):
            return None
        kvec = [fixed[i] for i in range(len(self.G))]
        consts = {}
        for rrow, trow, p in self.solve_rows:
            rhs = sum(t * k for t, k in zip(trow, kvec))
            if p >= self.n:
                if rhs != 0:
                    return None  # inconsistent fixed values for dependent rows
                continue
            consts[p] = (Fraction(rhs), [rrow[f] for f in self.free_cols])
        w = self._point(consts, [(lo[f] + hi[f]) / 2 for f in self.free_cols])
        if not self._in_box(w, lo, hi):
            # the midpoint missed; ask an exact LP for any point of the slice
            x = self._slice_point(consts, lo, hi)
            if x is None:
                return None
            w = self._point(consts, x)
        for row in self.G:
            if sum(c * v for c, v in zip(row, w)).denominator != 1:
                return None
        return w

    def _point(self, consts, x) -> list[Fraction]:
        w = [None] * self.n
        for f, v in zip(self.free_cols, x):
            w[f] = v
        for p, (rhs, coef) in consts.items():
            w[p] = rhs - sum(c * v for c, v in zip(coef, x))
        return w

    @staticmethod
    def _in_box(w, lo, hi) -> bool:
        return all(lo[j] <= w[j] <= hi[j] for j in range(len(w)))

    def _slice_point(self, consts, lo, hi) -> Optional[list[Fraction]]:
        """Free coordinates x with lo <= w(x) <= hi, via y = x - lo_free >= 0."""
        nf = len(self.free_cols)
        base = [lo[f] for f in self.free_cols]
        A, b = [], []
        for k, f in enumerate(self.free_cols):
            A.append([int(i == k) for i in range(nf)])
            b.append(hi[f] - lo[f])
        for p, (rhs, coef) in consts.items():
            at_base = rhs - sum(c * v for c, v in zip(coef, base))
            # w_p = at_base - coef . y must lie in [lo_p, hi_p]
            A.append([-c for c in coef])
            b.append(hi[p] - at_base)
            A.append(list(coef))
            b.append(at_base - lo[p])
        y = feasible_point(A, b)
        if y is None:
            return None
        return [v + d for v, d in zip(base, y)]

    # -- search -------------------------------------------------------------

    def node(self, lo, hi, fixed, depth) -> dict:
        st = self.stats
        st.nodes += 1
        st.max_depth = max(st.max_depth, depth)
        if st.nodes > self.budget:
            raise _BudgetExhausted()
        steps, closing = self.propagate(lo, hi, fixed)
        out: dict = {"propagate": [list(s) for s in steps]}
        if closing is not None:
            st.leaves += 1
            out.update(kind="leaf", relation=closing)
            return out
        counts = {}
        for i in range(len(self.G)):
            a, b = self.row_range(i, lo, hi)
            if i in fixed:
                if not (a <= fixed[i] <= b):
                    st.leaves += 1
                    out.update(kind="leaf", relation=i)
                    return out
            else:
                cnt = math.floor(b) - math.ceil(a) + 1
                if cnt <= 0:
                    st.leaves += 1
                    out.update(kind="leaf", relation=i)
                    return out
                counts[i] = (cnt, math.ceil(a))
        w = self.try_witness(lo, hi, fixed)
        if w is not None:
            raise _Found(w)
        if counts:
            i = min(counts, key=lambda r: (counts[r][0], r))
            cnt, first = counts[i]
            if cnt <= self.max_k_branch:
                st.kbranches += 1
                children = []
                for k in range(first, first + cnt):
                    f2 = dict(fixed)
                    f2[i] = k
                    children.append({"k": k, "node": self.node(list(lo), list(hi), f2, depth + 1)})
                out.update(kind="kbranch", relation=i, children=children)
                return out
        j = max(range(self.n), key=lambda c: (hi[c] - lo[c], -c))
        if hi[j] == lo[j]:
            # fully determined box with no witness: should be closed by exactness; bail out
            raise _BudgetExhausted()
        mid = (lo[j] + hi[j]) / 2
        st.bisections += 1
        lo_hi = list(hi)
        lo_hi[j] = mid
        hi_lo = list(lo)
        hi_lo[j] = mid
        left = self.node(list(lo), lo_hi, dict(fixed), depth + 1)
        right = self.node(hi_lo, list(hi), dict(fixed), depth + 1)
        out.update(
            kind="bisect",
            coord=j,
            mid=fmt_rat(mid),
            children=[{"side": "lo", "node": left}, {"side": "hi", "node": right}],
        )
        return out



def feasible_point(A, b) -> Optional[list[Fraction]]:
    """Some y >= 0 with A y <= b, or None; exact phase-one simplex with Bland's rule."""
    m = len(A)
    d = len(A[0]) if A else 0
    if all(x >= 0 for x in b):
        return [Fraction(0)] * d
    neg = [i for i in range(m) if b[i] < 0]
    ncol = d + m + len(neg)
    rows, basis = [], []
    for i in range(m):
        row = [Fraction(x) for x in A[i]] + [Fraction(int(k == i)) for k in range(m)]
        row += [Fraction(0)] * len(neg)
        rhs = Fraction(b[i])
        if rhs < 0:
            row = [-x for x in row]
            rhs = -rhs
            a = d + m + neg.index(i)
            row[a] = Fraction(1)
            basis.append(a)
        else:
            basis.append(d + i)
        rows.append(row + [rhs])
    # reduced costs of "minimise the sum of artificials"
    obj = [Fraction(int(j >= d + m)) for j in range(ncol)] + [Fraction(0)]
    for i in range(m):
        if basis[i] >= d + m:
            obj = [o - x for o, x in zip(obj, rows[i])]
    while True:
        enter = next((j for j in range(ncol) if obj[j] < 0), None)
        if enter is None:
            break
        best = None
        for i in range(m):
            if rows[i][enter] > 0:
                key = (rows[i][-1] / rows[i][enter], basis[i])
                if best is None or key < best[0]:
                    best = (key, i)
        if best is None:
            return None  # cannot happen for a bounded objective
        r = best[1]
        piv = rows[r][enter]
        rows[r] = [x / piv for x in rows[r]]
        for i in range(m):
            f = rows[i][enter]
            if i != r and f:
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        f = obj[enter]
        obj = [x - f * y for x, y in zip(obj, rows[r])]
        basis[r] = enter
    if obj[-1] != 0:
        return None
    y = [Fraction(0)] * d
    for i, j in enumerate(basis):
        if j < d:
            y[j] = rows[i][-1]
    return y

def _as_rows(relations) -> list[list[int]]:
    if isinstance(relations, IntMat):
        return relations.tolist()
    return [[int(x) for x in r] for r in relations]


def prove_empty(
    relations: Union[IntMat, Sequence[Sequence[int]]],
    eps: Fraction,
    budget: int = 10**6,
    max_k_branch: int = 16,
) -> ProofResult:
    """Search for a witness in, or a certificate of emptiness for, the closed cube."""
    eps = Fraction(eps)
    if not (0 < eps < Fraction(1, 2)):
        raise ValueError(f"eps must lie in (0, 1/2), got {eps}")
    G = _as_rows(relations)
    if not G:
        # no constraints: the cube itself is a witness
        raise ValueError("prove_empty needs at least one relation")
    solver = _Solver(G, eps, budget, max_k_branch)
    n = solver.n
    lo = [eps] * n
    hi = [1 - eps] * n
    old_limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old_limit, 20000))
    try:
        root = solver.node(lo, hi, {}, 0)
    except _Found as f:
        w = f.w
        assert all(eps <= x <= 1 - eps for x in w)
        assert all(sum(c * x for c, x in zip(row, w)).denominator == 1 for row in G)
        return Nonempty(w, solver.stats)
    except _BudgetExhausted:
        return Unknown(solver.stats)
    finally:
        sys.setrecursionlimit(old_limit)
    cert = {
        "format": CERT_FORMAT,
        "relations": G,
        "epsilon": fmt_rat(eps),
        "root": root,
        "stats": solver.stats.as_dict(),
    }
    return Empty(cert, solver.stats)
