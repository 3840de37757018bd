"""Exact rational polygon geometry on the unit 2-torus.

Regions are finite unions of closed convex polygons with pairwise disjoint
interiors, every piece inside the square [0, 1]^2. Wraparound is handled by
cutting at the square boundary and translating, so each primitive below is
plain Euclidean geometry.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, NamedTuple, Optional, Sequence

from .exactnum import rat_sqrt_floor

ZERO = Fraction(0)
ONE = Fraction(1)


class RatPoint2(NamedTuple):
    x: Fraction
    y: Fraction

    def __add__(self, o):
        return RatPoint2(self.x + o[0], self.y + o[1])

    def __sub__(self, o):
        return RatPoint2(self.x - o[0], self.y - o[1])

    def __neg__(self):
        return RatPoint2(-self.x, -self.y)


def P(x, y) -> RatPoint2:
    return RatPoint2(Fraction(x), Fraction(y))


def _cross(o, a, b) -> Fraction:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


class ConvexPoly:
    """Strictly convex polygon with CCW vertices and positive area."""

    __slots__ = ("vertices", "_area")

    def __init__(self, vertices: Sequence[RatPoint2]):
        vs = _clean(vertices)
        if len(vs) < 3:
            raise ValueError("degenerate polygon")
        self.vertices = tuple(vs)
        self._area = None
        if self.area <= 0:
            raise ValueError("polygon must be counterclockwise with positive area")

    @classmethod
    def maybe(cls, vertices: Sequence[RatPoint2]) -> Optional["ConvexPoly"]:
        """Build a polygon, or None if it is degenerate (zero area)."""
        vs = _clean(vertices)
        if len(vs) < 3:
            return None
        poly = cls.__new__(cls)
        poly.vertices = tuple(vs)
        poly._area = None
        return poly if poly.area > 0 else None

    @classmethod
    def box(cls, x0, y0, x1, y1) -> "ConvexPoly":
        return cls([P(x0, y0), P(x1, y0), P(x1, y1), P(x0, y1)])

    @classmethod
    def hull(cls, points: Iterable) -> Optional["ConvexPoly"]:
        return cls.maybe(convex_hull(points))

    @property
    def area(self) -> Fraction:
        if self._area is None:
            vs = self.vertices
            s = ZERO
            for i in range(len(vs)):
                a, b = vs[i], vs[(i + 1) % len(vs)]
                s += a[0] * b[1] - a[1] * b[0]
            self._area = s / 2
        return self._area

    def edges(self):
        vs = self.vertices
        for i in range(len(vs)):
            yield vs[i], vs[(i + 1) % len(vs)]

    def halfplanes(self) -> list[tuple[Fraction, Fraction, Fraction]]:
        """(a, b, c) with a*x + b*y + c >= 0 describing the polygon."""
        out = []
        for p, q in self.edges():
            a = -(q[1] - p[1])
            b = q[0] - p[0]
            out.append((a, b, -(a * p[0] + b * p[1])))
        return out

    def centroid_guess(self) -> RatPoint2:
        n = len(self.vertices)
        return RatPoint2(sum(v[0] for v in self.vertices) / n, sum(v[1] for v in self.vertices) / n)

    def translate(self, dx, dy) -> "ConvexPoly":
        return ConvexPoly([RatPoint2(v[0] + dx, v[1] + dy) for v in self.vertices])

    def reflect(self) -> "ConvexPoly":
        return ConvexPoly([-v for v in self.vertices])

    def contains_point(self, p, strict: bool = False) -> bool:
        for a, b, c in self.halfplanes():
            s = a * p[0] + b * p[1] + c
            if s < 0 or (strict and s == 0):
                return False
        return True

    def bbox(self):
        xs = [v[0] for v in self.vertices]
        ys = [v[1] for v in self.vertices]
        return min(xs), min(ys), max(xs), max(ys)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ConvexPoly):
            return NotImplemented
        return set(self.vertices) == set(other.vertices)

    def __hash__(self):
        return hash(frozenset(self.vertices))

    def __repr__(self) -> str:
        return "ConvexPoly([" + ", ".join(f"({v[0]}, {v[1]})" for v in self.vertices) + "])"


def _clean(vertices: Sequence) -> list[RatPoint2]:
    vs: list[RatPoint2] = []
    for v in vertices:
        v = RatPoint2(Fraction(v[0]), Fraction(v[1]))
        if not vs or vs[-1] != v:
            vs.append(v)
    while len(vs) > 1 and vs[0] == vs[-1]:
        vs.pop()
    # drop collinear vertices
    changed = True
    while changed and len(vs) >= 3:
        changed = False
        for i in range(len(vs)):
            if _cross(vs[i - 1], vs[i], vs[(i + 1) % len(vs)]) == 0:
                del vs[i]
                changed = True
                break
    return vs


def convex_hull(points: Iterable) -> list[RatPoint2]:
    """Andrew's monotone chain; CCW, no collinear points."""
    pts = sorted({RatPoint2(Fraction(p[0]), Fraction(p[1])) for p in points})
    if len(pts) <= 2:
        return pts
    lower: list[RatPoint2] = []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list[RatPoint2] = []
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def clip(poly: ConvexPoly, a, b, c) -> Optional[ConvexPoly]:
    """Intersection with the closed half-plane a*x + b*y + c >= 0."""
    vs = poly.vertices
    vals = [a * v[0] + b * v[1] + c for v in vs]
    if all(s >= 0 for s in vals):
        return poly
    if all(s <= 0 for s in vals):
        return None
    out = []
    n = len(vs)
    for i in range(n):
        p, q = vs[i], vs[(i + 1) % n]
        sp, sq = vals[i], vals[(i + 1) % n]
        if sp >= 0:
            out.append(p)
        if (sp > 0 and sq < 0) or (sp < 0 and sq > 0):
            t = sp / (sp - sq)
            out.append(RatPoint2(p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])))
    return ConvexPoly.maybe(out)


def intersect_convex(p: ConvexPoly, q: ConvexPoly) -> Optional[ConvexPoly]:
    cur: Optional[ConvexPoly] = p
    for a, b, c in q.halfplanes():
        cur = clip(cur, a, b, c)
        if cur is None:
            return None
    return cur


def subtract_convex(p: ConvexPoly, q: ConvexPoly) -> list[ConvexPoly]:
    """Pieces of closure(p minus q), pairwise interior-disjoint."""
    # cheap bbox rejection
    ax0, ay0, ax1, ay1 = p.bbox()
    bx0, by0, bx1, by1 = q.bbox()
    if ax1 <= bx0 or bx1 <= ax0 or ay1 <= by0 or by1 <= ay0:
        return [p]
    out = []
    cur: Optional[ConvexPoly] = p
    for a, b, c in q.halfplanes():
        outside = clip(cur, -a, -b, -c)
        if outside is not None:
            out.append(outside)
        cur = clip(cur, a, b, c)
        if cur is None:
            break
    return out


class PolySet:
    """Finite union of interior-disjoint closed convex pieces inside [0, 1]^2."""

    __slots__ = ("pieces",)

    def __init__(self, pieces: Iterable[ConvexPoly] = ()):
        self.pieces = tuple(pieces)

    @classmethod
    def square(cls) -> "PolySet":
        return cls([UNIT_SQUARE])

    @property
    def area(self) -> Fraction:
        return sum((p.area for p in self.pieces), ZERO)

    def is_empty(self) -> bool:
        return not self.pieces

    def __len__(self) -> int:
        return len(self.pieces)

    def __iter__(self):
        return iter(self.pieces)

    def vertex_sets(self) -> list[frozenset]:
        return [frozenset(p.vertices) for p in self.pieces]

    def __repr__(self) -> str:
        return f"PolySet({list(self.pieces)!r})"


UNIT_SQUARE = ConvexPoly([P(0, 0), P(1, 0), P(1, 1), P(0, 1)])


def intersect(a: PolySet, b: PolySet) -> PolySet:
    out = []
    for p in a.pieces:
        for q in b.pieces:
            r = intersect_convex(p, q)
            if r is not None:
                out.append(r)
    return PolySet(out)


def difference(a: PolySet, b: PolySet | Iterable[ConvexPoly]) -> PolySet:
    pieces = list(a.pieces)
    for q in (b.pieces if isinstance(b, PolySet) else b):
        nxt = []
        for p in pieces:
            nxt.extend(subtract_convex(p, q))
        pieces = nxt
        if not pieces:
            break
    return PolySet(pieces)


def union(a: PolySet, b: PolySet) -> PolySet:
    return PolySet(a.pieces + difference(b, a).pieces)


def union_all(pieces: Iterable[ConvexPoly]) -> PolySet:
    """Disjoint-interior union of possibly overlapping convex pieces."""
    acc: list[ConvexPoly] = []
    for p in pieces:
        acc.extend(difference(PolySet([p]), acc).pieces)
    return PolySet(acc)


def complement_in_torus(a: PolySet | Iterable[ConvexPoly]) -> PolySet:
    return difference(PolySet.square(), a)


def contains(outer: PolySet, inner: PolySet) -> bool:
    """Exact test that ``inner`` lies inside ``outer`` (up to measure zero)."""
    return difference(inner, outer).area == 0


def same_region(a: PolySet, b: PolySet) -> bool:
    return contains(a, b) and contains(b, a)


def area(s: PolySet) -> Fraction:
    return s.area


# ---------------------------------------------------------------------------
# Strips, Minkowski sums, torus wrapping


def strip_region(p: int, q: int, c: Fraction, eps: Fraction) -> PolySet:
    """Closure of {z in [0,1)^2 : (p z1 + q z2 + c) mod 1 in (eps, 1 - eps)}."""
    eps = Fraction(eps)
    c = Fraction(c)
    if not (0 <= eps < Fraction(1, 2)):
        raise DegenerateStrip(f"strip half-width must lie in [0, 1/2), got {eps}")
    if p == 0 and q == 0:
        raise ValueError("strip direction (0, 0)")
    lo = c + min(0, p) + min(0, q)
    hi = c + max(0, p) + max(0, q)
    out = []
    for k in range(math.floor(lo) - 1, math.ceil(hi) + 1):
        cell = clip(UNIT_SQUARE, Fraction(p), Fraction(q), c - (k + eps))
        if cell is not None:
            cell = clip(cell, Fraction(-p), Fraction(-q), (k + 1 - eps) - c)
        if cell is not None:
            out.append(cell)
    return PolySet(out)


class PieceLimitExceeded(RuntimeError):
    """A polygon computation produced more pieces than the caller allowed."""


def intersect_strip(
    region: PolySet, p: int, q: int, c: Fraction, eps: Fraction, limit: Optional[int] = None
) -> PolySet:
    """``intersect(region, strip_region(p, q, c, eps))`` without the all-pairs loop.

    Each piece is only clipped against the bands its range of p*x + q*y + c meets.
    """
    eps = Fraction(eps)
    c = Fraction(c)
    if not (0 <= eps < Fraction(1, 2)):
        raise DegenerateStrip(f"strip half-width must lie in [0, 1/2), got {eps}")
    if p == 0 and q == 0:
        raise ValueError("strip direction (0, 0)")
    fp, fq = Fraction(p), Fraction(q)
    out = []
    for piece in region.pieces:
        vals = [fp * v[0] + fq * v[1] + c for v in piece.vertices]
        for k in range(math.floor(min(vals)) - 1, math.ceil(max(vals)) + 1):
            if k + 1 - eps <= min(vals) or k + eps >= max(vals):
                continue
            cell = clip(piece, fp, fq, c - (k + eps))
            if cell is not None:
                cell = clip(cell, -fp, -fq, (k + 1 - eps) - c)
            if cell is not None:
                out.append(cell)
                if limit is not None and len(out) > limit:
                    raise PieceLimitExceeded(f"more than {limit} pieces")
    return PolySet(out)


class DegenerateStrip(ValueError):
    pass


def minkowski_sum(a: ConvexPoly, b: ConvexPoly) -> ConvexPoly:
    return ConvexPoly(convex_hull(RatPoint2(p[0] + q[0], p[1] + q[1]) for p in a.vertices for q in b.vertices))


def torus_wrap(poly: ConvexPoly) -> list[ConvexPoly]:
    """Cut a polygon at integer grid lines and translate every part into [0,1]^2."""
    x0, y0, x1, y1 = poly.bbox()
    out = []
    for i in range(math.floor(x0), math.ceil(x1)):
        for j in range(math.floor(y0), math.ceil(y1)):
            part = intersect_convex(poly, ConvexPoly.box(i, j, i + 1, j + 1))
            if part is not None:
                out.append(part.translate(-i, -j) if (i or j) else part)
    return out


def difference_pieces(s: PolySet) -> list[ConvexPoly]:
    """Torus-wrapped pieces P_i + (-P_j) over ordered pairs (may overlap)."""
    out = []
    refl = [p.reflect() for p in s.pieces]
    for p in s.pieces:
        for r in refl:
            out.extend(torus_wrap(minkowski_sum(p, r)))
    return out


def prune_pieces(pieces: Iterable[ConvexPoly]) -> list[ConvexPoly]:
    """Drop duplicates and pieces inside another one; largest first.

    The union is unchanged. Subtracting big pieces first keeps the number of
    fragments in a complement computation down.
    """
    uniq = sorted(set(pieces), key=lambda p: (-p.area, p.vertices))
    kept: list[ConvexPoly] = []
    for p in uniq:
        if not any(all(q.contains_point(v) for v in p.vertices) for q in kept):
            kept.append(p)
    return kept


def difference_set(s: PolySet) -> PolySet:
    """Closure of {a - b : a, b in s} on the torus, as a disjoint-interior union."""
    return union_all(prune_pieces(difference_pieces(s)))


# ---------------------------------------------------------------------------
# Arrangements


def arrangement_cells(lines: Iterable[tuple], region: ConvexPoly = None) -> list[ConvexPoly]:
    """Split ``region`` (default [0,1]^2) by lines p*x + q*y = rhs into convex cells."""
    cells = [region or UNIT_SQUARE]
    for p, q, rhs in lines:
        a, b, c = Fraction(p), Fraction(q), -Fraction(rhs)
        nxt = []
        for cell in cells:
            vals = [a * v[0] + b * v[1] + c for v in cell.vertices]
            if all(s >= 0 for s in vals) or all(s <= 0 for s in vals):
                nxt.append(cell)
                continue
            for part in (clip(cell, a, b, c), clip(cell, -a, -b, -c)):
                if part is not None:
                    nxt.append(part)
        cells = nxt
    return cells


# ---------------------------------------------------------------------------
# Distances and clearance


def _seg_dist2(p, a, b) -> Fraction:
    dx, dy = b[0] - a[0], b[1] - a[1]
    L = dx * dx + dy * dy
    t = ((p[0] - a[0]) * dx + (p[1] - a[1]) * dy) / L
    t = min(ONE, max(ZERO, t))
    ex = a[0] + t * dx - p[0]
    ey = a[1] + t * dy - p[1]
    return ex * ex + ey * ey


def point_poly_dist2(p, poly: ConvexPoly) -> Fraction:
    """Exact squared Euclidean distance from a point to a closed convex polygon."""
    if poly.contains_point(p):
        return ZERO
    return min(_seg_dist2(p, a, b) for a, b in poly.edges())


def boundary_dist2(p, poly: ConvexPoly) -> Fraction:
    """Squared distance from an interior point to the polygon boundary."""
    return min(_seg_dist2(p, a, b) for a, b in poly.edges())


def inner_point_with_clearance(s: PolySet) -> Optional[tuple[RatPoint2, Fraction]]:
    """A rational point and radius whose closed ball sits inside ``s``.

    The radius is strictly below the distance to the piece boundary, so the
    ball also misses every closed set that meets ``s`` only on its boundary.
    """
    best = None
    for poly in s.pieces:
        c = poly.centroid_guess()
        r = rat_sqrt_floor(boundary_dist2(c, poly)) / 2
        if r > 0 and (best is None or r > best[1]):
            best = (c, r)
    return best


def ball_misses(center, radius: Fraction, pieces: Iterable[ConvexPoly]) -> bool:
    """Exact check that the closed ball is disjoint from every piece."""
    r2 = radius * radius
    return all(point_poly_dist2(center, p) > r2 for p in pieces)
