"""Difference-set density criterion and certified upper bounds on eps_0.

If the difference set of the uncovered locus ``X_eps = S cap (eps, 1-eps)^n``
is not dense in ``S``, then ``eps_0 <= eps``. For ``d <= 2`` everything is
exact: ``X_eps`` is a finite union of rational polygons in chart
coordinates, and for a finite union of closed polygons "dense" is the same
as "covers the torus".
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from . import geometry as geo
from .config import Configuration
from .cover import HALF, UnsupportedDimension, covering_radius_exact
from .relations import relation_lattice, subgroup_param


@dataclass
class NotDense:
    center: geo.RatPoint2
    clearance: Fraction


@dataclass
class Dense:
    pass


@dataclass
class DensityUnknown:
    reason: str


DensityVerdict = Union[NotDense, Dense, DensityUnknown]


PieceBudgetExceeded = geo.PieceLimitExceeded

# intermediate pieces allowed while intersecting strips, per allowed difference pair
INTERMEDIATE_FACTOR = 10


def chart_rows(cfg: Configuration) -> list[tuple[int, int]]:
    """Rows of B as 2-vectors (a 1-dimensional chart is padded with a zero)."""
    rl = relation_lattice(cfg)
    if rl.dim_d > 2:
        raise UnsupportedDimension(f"d = {rl.dim_d}; density computations need d <= 2")
    param = subgroup_param(rl)
    rows = []
    for b in param.rows():
        v = (b[0], b[1] if param.d == 2 else 0)
        if v not in rows and (-v[0], -v[1]) not in rows:
            rows.append(v)
    return rows


def uncovered_region(cfg: Configuration, eps: Fraction, max_pieces: Optional[int] = None) -> geo.PolySet:
    """Closure of X_eps in chart coordinates; zero-area parts are dropped.

    ``max_pieces`` bounds every intermediate piece count (PieceBudgetExceeded).
    """
    eps = Fraction(eps)
    if not 0 < eps < HALF:
        raise ValueError(f"eps must lie in (0, 1/2), got {eps}")
    region = geo.PolySet.square()
    # short rows first: they cut the square into fewer pieces
    for p, q in sorted(chart_rows(cfg), key=lambda r: (abs(r[0]) + abs(r[1]), r)):
        region = geo.intersect_strip(region, p, q, Fraction(0), eps, limit=max_pieces)
        if region.is_empty():
            break
    return region


def density_test(cfg: Configuration, eps: Fraction, max_pairs: Optional[int] = None) -> DensityVerdict:
    """Is the difference set of X_eps dense in S? ``max_pairs`` caps the work (Unknown past it)."""
    eps = Fraction(eps)
    if not 0 < eps < HALF:
        raise ValueError(f"eps must lie in (0, 1/2), got {eps}")
    rl = relation_lattice(cfg)
    if rl.dim_d > 2:
        return DensityUnknown(f"d = {rl.dim_d} > 2")
    limit = None if max_pairs is None else max(INTERMEDIATE_FACTOR * max_pairs, 1000)
    try:
        X = uncovered_region(cfg, eps, max_pieces=limit)
    except PieceBudgetExceeded as exc:
        return DensityUnknown(f"uncovered region: {exc}")
    if max_pairs is not None and len(X) ** 2 > max_pairs:
        return DensityUnknown(f"{len(X)} pieces give more than {max_pairs} difference pairs")
    pieces = geo.prune_pieces(geo.difference_pieces(X))
    gap = geo.complement_in_torus(pieces)
    found = geo.inner_point_with_clearance(gap)
    if found is None:
        return Dense()
    center, r = found
    if not geo.ball_misses(center, r, pieces):
        raise AssertionError("density certificate ball meets the difference set")
    return NotDense(center, r)


def verify_not_dense(cfg: Configuration, eps: Fraction, verdict: NotDense) -> bool:
    """Recompute the difference set and check the certificate ball exactly."""
    X = uncovered_region(cfg, eps)
    return verdict.clearance > 0 and geo.ball_misses(verdict.center, verdict.clearance, geo.difference_pieces(X))


@dataclass
class BoundResult:
    bound: Optional[Fraction]
    certificate: Optional[NotDense]
    dense_below: Optional[Fraction]  # largest probed eps found Dense, if any
    probes: list  # (eps, verdict name) in probe order
    limited: bool = False  # some probe hit the work budget

    @property
    def status(self) -> str:
        if self.bound is None:
            return "budget" if self.limited else "inapplicable"
        return "partial" if self.limited else "bisected"


def epsilon0_bound_full(cfg: Configuration, tol: Fraction, max_pairs: Optional[int] = None) -> BoundResult:
    """Smallest probed eps with a non-dense difference set.

    Without a budget the answer is within ``tol`` of the flip point. When a
    probe runs out of budget the search continues above it, so the bound is
    still certified but may be loose (``limited`` is set).
    """
    tol = Fraction(tol)
    if tol <= 0:
        raise ValueError("tol must be positive")
    radius = covering_radius_exact(cfg)
    probes = []

    def probe(e):
        v = density_test(cfg, e, max_pairs)
        probes.append((e, type(v).__name__))
        return v

    hi = radius if radius < HALF else HALF - tol / 2
    cert = probe(hi)
    if not isinstance(cert, NotDense):
        return BoundResult(None, None, None, probes, isinstance(cert, DensityUnknown))
    lo, dense_below, limited = Fraction(0), None, False
    while hi - lo > tol:
        mid = (lo + hi) / 2
        v = probe(mid)
        if isinstance(v, NotDense):
            hi, cert = mid, v
        else:
            lo = mid
            if isinstance(v, Dense):
                dense_below = mid
            else:
                limited = True
    return BoundResult(hi, cert, dense_below, probes, limited)


def epsilon0_bound(cfg: Configuration, tol: Fraction, max_pairs: Optional[int] = None) -> Optional[Fraction]:
    """Certified upper bound on eps_0 from the density criterion, or None."""
    return epsilon0_bound_full(cfg, tol, max_pairs).bound
