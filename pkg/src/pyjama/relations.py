"""Relation lattices, the subgroup S of the torus, periodicity and quadratic type."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .config import Configuration, UnitVector
from .exactnum import QuadElem
from .intlinalg import IntMat, det, int_kernel, snf, unimodular_inverse


class SaturationViolated(RuntimeError):
    """The relation lattice had a nontrivial Smith invariant factor."""


class NotApplicable(ValueError):
    """The configuration is not of quadratic (periodic-type) form."""


@dataclass(frozen=True)
class RelationLattice:
    basis: IntMat  # r x n, rows are relations
    n: int

    @property
    def rank(self) -> int:
        return self.basis.nrows

    @property
    def dim_d(self) -> int:
        return self.n - self.rank


@dataclass(frozen=True)
class SubgroupParam:
    """``S = {B z mod 1 : z in T^d}``; ``chart`` lists coordinates with ``B[chart] = I``."""

    B: IntMat  # n x d
    V: IntMat  # n x n unimodular from the Smith form of the relation basis
    chart: Optional[tuple[int, ...]]

    @property
    def d(self) -> int:
        return self.B.ncols

    def rows(self) -> list[list[int]]:
        return self.B.tolist()


@dataclass(frozen=True)
class QuadClass:
    D: int
    triples: tuple[tuple[int, int, int], ...]
    Mprod: int
    rotation: UnitVector  # the first vector of the configuration; maps the normalized frame back

    @property
    def is_pythagorean(self) -> bool:
        return self.D == 1


def coordinate_matrix(cfg: Configuration) -> list[list[Fraction]]:
    """Rows: the sqrt(r)-coefficients of all x coordinates, then of all y coordinates, per radicand."""
    rows = []
    for r in cfg.radicands():
        rows.append([u.cos.coeff(r) for u in cfg.vectors])
        rows.append([u.sin.coeff(r) for u in cfg.vectors])
    return rows


def relation_lattice(cfg: Configuration) -> RelationLattice:
    n = len(cfg)
    return RelationLattice(int_kernel(coordinate_matrix(cfg), n), n)


def check_relation(cfg: Configuration, m) -> bool:
    """Exact test of sum_j m_j u_j = 0."""
    x = sum((u.cos * int(c) for u, c in zip(cfg.vectors, m)), QuadElem())
    y = sum((u.sin * int(c) for u, c in zip(cfg.vectors, m)), QuadElem())
    return x.is_zero() and y.is_zero()


def _gauss_reduce_columns(B: list[list[int]]) -> list[list[int]]:
    """Lagrange-Gauss reduction of the two columns of an n x 2 integer matrix."""
    def dot(a, b):
        return sum(x * y for x, y in zip(a, b))

    u = [r[0] for r in B]
    v = [r[1] for r in B]
    if dot(u, u) > dot(v, v):
        u, v = v, u
    while True:
        uu = dot(u, u)
        q = round(Fraction(dot(u, v), uu))
        v = [b - q * a for a, b in zip(u, v)]
        if dot(v, v) >= uu:
            break
        u, v = v, u
    return [[a, b] for a, b in zip(u, v)]


def subgroup_param(rl: RelationLattice) -> SubgroupParam:
    n, r, d = rl.n, rl.rank, rl.dim_d
    if r == 0:
        return SubgroupParam(IntMat.identity(n), IntMat.identity(n), tuple(range(n)))
    res = snf(rl.basis)
    if res.invariant_factors != [1] * r:
        raise SaturationViolated(f"invariant factors {res.invariant_factors}")
    V = res.V
    B = V.select_cols(range(r, n))
    chart = None
    for J in itertools.combinations(range(n), d):
        if abs(det(B.select_rows(J))) == 1:
            chart = J
            break
    if chart is not None:
        B = B @ unimodular_inverse(B.select_rows(chart))
    elif d == 2:
        B = IntMat(_gauss_reduce_columns(B.tolist()), 2)
    # keep V unimodular with B as its last d columns, so V^-1 gives chart coordinates
    V = IntMat([list(V.row(i)[:r]) + list(B.row(i)) for i in range(n)], n)
    return SubgroupParam(B, V, chart)


def relation_matrix_times(B: IntMat, z) -> list:
    return B.apply(z)


def is_periodic(cfg: Configuration) -> bool:
    if len(cfg) < 2:
        return False
    return relation_lattice(cfg).dim_d == 2


def period_lattice(cfg: Configuration) -> Optional[tuple[tuple[QuadElem, QuadElem], tuple[QuadElem, QuadElem]]]:
    """Basis of ``{v : <u_j, v> in Z for all j}`` when the strip union is fully periodic.

    The basis is dual to the subgroup parametrization: ``<u_j, v_k> = B[j, k]``.
    """
    if not is_periodic(cfg):
        return None
    param = subgroup_param(relation_lattice(cfg))
    us = cfg.vectors
    a = 0
    b = next(j for j in range(1, len(us)) if not (us[0].cos * us[j].sin - us[0].sin * us[j].cos).is_zero())
    ua, ub = us[a], us[b]
    dt = ua.cos * ub.sin - ua.sin * ub.cos
    basis = []
    for k in range(2):
        pa, pb = param.B[a, k], param.B[b, k]
        vx = (ub.sin * pa - ua.sin * pb) / dt
        vy = (ua.cos * pb - ub.cos * pa) / dt
        basis.append((vx, vy))
    for j, u in enumerate(us):
        for k, v in enumerate(basis):
            val = u.dot(v)
            if val != param.B[j, k]:
                raise AssertionError(f"period vector check failed: <u_{j}, v_{k}> = {val}")
    return basis[0], basis[1]


def _triple(c: Fraction, k: Fraction) -> tuple[int, int, int]:
    n = c.denominator * k.denominator // math.gcd(c.denominator, k.denominator)
    m, kk = int(c * n), int(k * n)
    g = math.gcd(math.gcd(m, kk), n)
    return m // g, kk // g, n // g


def classify_quadratic(cfg: Configuration) -> QuadClass:
    """Rotate the first vector to (1, 0) and read off ``(m_j, k_j, n_j)`` with common ``D``.

    Raises NotApplicable when some cosine is irrational or the sines do not
    share a single square root.
    """
    first = cfg.vectors[0]
    rot = [u.rotate(first.inverse()) for u in cfg.vectors]
    if rot[0].cos != 1:
        raise AssertionError("normalizing rotation failed")
    D = None
    for u in rot:
        if not u.cos.is_rational():
            raise NotApplicable(f"cosine {u.cos} is irrational")
        rads = u.sin.radicands()
        if len(rads) > 1:
            raise NotApplicable(f"sine {u.sin} spans several square roots")
        if rads:
            if D is not None and rads[0] != D:
                raise NotApplicable(f"sines involve both sqrt({D}) and sqrt({rads[0]})")
            D = rads[0]
    D = D or 1
    triples = []
    for u in rot:
        c = u.cos.coeff(1)
        k = u.sin.coeff(D)
        m, kk, n = _triple(c, k)
        if m * m + D * kk * kk != n * n:
            raise AssertionError(f"triple ({m}, {kk}, {n}) violates m^2 + D k^2 = n^2")
        triples.append((m, kk, n))
    M = 1
    for _, _, n in triples:
        M *= n
    return QuadClass(D, tuple(triples), M, first)
