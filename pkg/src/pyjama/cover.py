"""Covering radius of a strip configuration and covering verdicts.

The covering radius is ``eps* = max over S of min_j ||w_j||``; the plane is
covered at half-width ``eps`` exactly when ``eps >= eps*``. For ``d <= 2`` it
is computed exactly; for larger ``d`` the emptiness prover brackets it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Union

from . import geometry as geo
from .config import Configuration
from .exactnum import dist_to_int, frac_part
from .intlinalg import IntMat, reduce_rows, unimodular_inverse
from .prover import Empty, Nonempty, Unknown, prove_empty
from .relations import RelationLattice, SubgroupParam, relation_lattice, subgroup_param

HALF = Fraction(1, 2)


class UnsupportedDimension(ValueError):
    """Exact computation requested for a configuration with d >= 3."""


@dataclass(frozen=True)
class Enclosure:
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        if not (0 <= self.lo <= self.hi <= HALF):
            raise ValueError(f"bad enclosure [{self.lo}, {self.hi}]")

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def __contains__(self, x) -> bool:
        return self.lo <= x <= self.hi


@dataclass
class CoversCertified:
    certificate: Optional[dict]
    method: str
    radius: Optional[Fraction] = None


@dataclass
class UncoveredWitness:
    point: tuple[Fraction, ...]  # chart coordinates z in T^d
    value: Fraction  # exact min_j ||w_j|| at that point
    torus_point: Optional[tuple[Fraction, ...]] = None


@dataclass
class UnknownVerdict:
    report: dict = field(default_factory=dict)


CoverVerdict = Union[CoversCertified, UncoveredWitness, UnknownVerdict]


@dataclass(frozen=True)
class RadiusResult:
    value: Fraction
    point: tuple[Fraction, ...]  # argmax in chart coordinates
    method: str


# above this many breaklines the cell arrangement gets slow (cells grow like
# lines^2) and the exact maximisation switches to a superlevel set
MAX_ARRANGEMENT_LINES = 100
# side of the sampling grid used to seed the superlevel threshold
GRID = 48


def all_halves_in_S(rl: RelationLattice) -> bool:
    """(1/2, ..., 1/2) lies on S iff every relation has an even coefficient sum."""
    return all(sum(row) % 2 == 0 for row in rl.basis.rows)


def _affine_on_cell(b, cell: geo.ConvexPoly):
    """||b . z|| restricted to a cell free of the lines b . z = k/2, as (a1, a2, c)."""
    cx, cy = cell.centroid_guess()
    t = b[0] * cx + b[1] * cy
    m = math.floor(2 * t)
    if m % 2 == 0:
        return (Fraction(b[0]), Fraction(b[1]), Fraction(-m, 2))
    return (Fraction(-b[0]), Fraction(-b[1]), Fraction(m + 1, 2))


def _band_affines(b, piece: geo.ConvexPoly):
    """||b . z|| on a piece lying in one band k + t <= b . z <= k + 1 - t, as two affines."""
    cx, cy = piece.centroid_guess()
    k = math.floor(b[0] * cx + b[1] * cy)
    fb0, fb1 = Fraction(b[0]), Fraction(b[1])
    return [(fb0, fb1, Fraction(-k)), (-fb0, -fb1, Fraction(k + 1))]


def _max_min_affine(cell: geo.ConvexPoly, affs):
    """Maximum over the cell of min_i affs_i(z), with a lexicographically smallest argmax."""
    best = None
    for i, (a, b, c) in enumerate(affs):
        region: Optional[geo.ConvexPoly] = cell
        for k, (a2, b2, c2) in enumerate(affs):
            if k == i:
                continue
            region = geo.clip(region, a2 - a, b2 - b, c2 - c)
            if region is None:
                break
        if region is None:
            continue
        for v in region.vertices:
            val = a * v[0] + b * v[1] + c
            if best is None or val > best[0] or (val == best[0] and tuple(v) < best[1]):
                best = (val, tuple(v))
    return best


def _superlevel(dirs, t: Fraction) -> geo.PolySet:
    """Pieces of {z : ||b . z|| >= t for every b}; zero-area parts are dropped."""
    region = geo.PolySet.square()
    for p, q in sorted(dirs, key=lambda b: (abs(b[0]) + abs(b[1]), b)):
        region = geo.intersect_strip(region, p, q, Fraction(0), t)
        if region.is_empty():
            break
    return region


def _directions(rows) -> list[tuple[int, int]]:
    dirs = []
    for b in rows:
        key = tuple(b)
        neg = tuple(-x for x in b)
        if key not in dirs and neg not in dirs and any(b):
            dirs.append(key)
    return dirs


def _breaklines(dirs) -> list[tuple[int, int, Fraction]]:
    lines = []
    for b in dirs:
        lo = min(0, b[0]) + min(0, b[1])
        hi = max(0, b[0]) + max(0, b[1])
        for k in range(2 * lo, 2 * hi + 1):
            lines.append((b[0], b[1], Fraction(k, 2)))
    return lines


def _best(cands):
    best = None
    for val, pt in cands:
        pt = tuple(frac_part(x) for x in pt)
        if best is None or val > best[0] or (val == best[0] and pt < best[1]):
            best = (val, pt)
    return best


def _exact_by_arrangement(dirs):
    """Max over the cells cut out by all breaklines b . z = k/2."""
    cands = []
    for cell in geo.arrangement_cells(_breaklines(dirs)):
        affs = sorted({_affine_on_cell(b, cell) for b in dirs})
        cands.append(_max_min_affine(cell, affs))
    return _best(cands)


def _exact_by_superlevel(dirs):
    """Max over the pieces of a superlevel set {f >= t} with t below the maximum.

    f(z) = min_b ||b . z|| is concave on each piece, so the same small LP
    applies, but only near the top of f. A grid sample gives t just below a
    value f attains, so {f >= t} has area.
    """
    def approx_f(i, j):
        return min(abs(v - round(v)) for v in ((b[0] * i + b[1] * j) / GRID for b in dirs))

    i0, j0 = max(((i, j) for i in range(GRID) for j in range(GRID)), key=lambda ij: approx_f(*ij))
    t = min(dist_to_int(Fraction(b[0] * i0 + b[1] * j0, GRID)) for b in dirs) * 255 / 256
    if t <= 0:
        t = Fraction(1, 3)
    while True:
        pieces = _superlevel(dirs, t).pieces
        if pieces:
            break
        t = t * 3 / 4
    cands = []
    for piece in pieces:
        affs = sorted({a for b in dirs for a in _band_affines(b, piece)})
        cands.append(_max_min_affine(piece, affs))
    return _best(cands)


def _exact_2d(rows) -> tuple[Fraction, tuple[Fraction, Fraction], str]:
    dirs = _directions(rows)
    if len(_breaklines(dirs)) <= MAX_ARRANGEMENT_LINES:
        return (*_exact_by_arrangement(dirs), "arrangement")
    return (*_exact_by_superlevel(dirs), "superlevel")


def covering_radius_exact_full(cfg: Configuration) -> RadiusResult:
    rl = relation_lattice(cfg)
    if rl.rank == 0:
        return RadiusResult(HALF, (HALF,) * rl.dim_d, "rank-0")
    if rl.dim_d > 2:
        raise UnsupportedDimension(
            f"d = {rl.dim_d}: exact radius needs d <= 2; use covering_radius_enclosure"
        )
    param = subgroup_param(rl)
    if all_halves_in_S(rl):
        z = _chart_point(param, [HALF] * rl.n)
        return RadiusResult(HALF, z, "all-halves")
    rows = param.rows()
    if param.d == 1:
        rows = [[b[0], 0] for b in rows]
    val, pt, method = _exact_2d(rows)
    return RadiusResult(val, pt[: param.d], method)


def covering_radius_exact(cfg: Configuration) -> Fraction:
    """Exact eps* for configurations with d <= 2."""
    return covering_radius_exact_full(cfg).value


def _chart_point(param: SubgroupParam, w) -> tuple[Fraction, ...]:
    """Chart coordinates z (mod 1) of a point w of S, i.e. B z = w mod 1."""
    n, d = param.B.nrows, param.d
    if param.chart is not None:
        return tuple(frac_part(w[j]) for j in param.chart)
    vinv = unimodular_inverse(param.V)
    y = vinv.apply(list(w))
    return tuple(frac_part(x) for x in y[n - d :])


def prover_relations(rl: RelationLattice) -> IntMat:
    return reduce_rows(rl.basis)


def covering_radius_enclosure(
    cfg: Configuration, tol: Fraction, budget: int = 10**6
) -> tuple[Enclosure, dict]:
    """Rational bracket [lo, hi] around eps* by bisection on the prover.

    Returns the enclosure and a log of the proof calls made.
    """
    tol = Fraction(tol)
    if tol <= 0:
        raise ValueError("tol must be positive")
    rl = relation_lattice(cfg)
    log = {"steps": [], "stopped": "tolerance"}
    if rl.rank == 0 or all_halves_in_S(rl):
        return Enclosure(HALF, HALF), log
    G = prover_relations(rl)
    lo, hi = Fraction(0), HALF
    while hi - lo > tol:
        mid = (lo + hi) / 2
        res = prove_empty(G, mid, budget)
        entry = {"epsilon": mid, "nodes": res.stats.nodes}
        if isinstance(res, Empty):
            hi = mid
            entry["result"] = "empty"
        elif isinstance(res, Nonempty):
            v = min(dist_to_int(x) for x in res.witness)
            lo = max(lo, v)
            entry["result"] = "witness"
            entry["value"] = v
        else:
            entry["result"] = "unknown"
            log["steps"].append(entry)
            log["stopped"] = "budget"
            break
        log["steps"].append(entry)
    return Enclosure(lo, hi), log


def is_covering(cfg: Configuration, eps: Fraction, budget: int = 10**6) -> CoverVerdict:
    """Does the configuration cover the plane with strips of half-width ``eps``?"""
    eps = Fraction(eps)
    if not (0 < eps < HALF):
        raise ValueError(f"eps must lie in (0, 1/2), got {eps}")
    rl = relation_lattice(cfg)
    if rl.dim_d <= 2 or rl.rank == 0 or all_halves_in_S(rl):
        if rl.rank == 0 or all_halves_in_S(rl):
            param = subgroup_param(rl) if rl.rank else None
            z = _chart_point(param, [HALF] * rl.n) if param else (HALF,) * rl.dim_d
            return UncoveredWitness(z, HALF, (HALF,) * rl.n)
        r = covering_radius_exact_full(cfg)
        if eps >= r.value:
            return CoversCertified({"method": r.method, "radius": r.value}, "exact", r.value)
        param = subgroup_param(rl)
        w = tuple(frac_part(x) for x in param.B.apply(list(r.point)))
        return UncoveredWitness(r.point, r.value, w)
    G = prover_relations(rl)
    res = prove_empty(G, eps, budget)
    if isinstance(res, Empty):
        return CoversCertified(res.certificate, "prover")
    if isinstance(res, Nonempty):
        v = min(dist_to_int(x) for x in res.witness)
        step = HALF - eps
        while v <= eps and step > eps / 1024:
            # witness on the cube boundary: look for one strictly inside
            step /= 2
            again = prove_empty(G, eps + step, budget)
            if isinstance(again, Nonempty):
                res, v = again, min(dist_to_int(x) for x in again.witness)
            elif isinstance(again, Unknown):
                break
        if v > eps:
            param = subgroup_param(rl)
            return UncoveredWitness(_chart_point(param, res.witness), v, tuple(res.witness))
        return UnknownVerdict({"reason": "witness on the cube boundary", "value": v, "stats": res.stats.as_dict()})
    return UnknownVerdict({"reason": res.reason, "stats": res.stats.as_dict()})
