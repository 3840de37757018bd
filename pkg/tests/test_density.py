import random
from fractions import Fraction as F

import pytest

from pyjama import geometry as geo
from pyjama.config import Configuration, UnitVector, build_cube_roots, build_pythagorean, build_section3
from pyjama.cover import UnsupportedDimension, covering_radius_exact
from pyjama.density import (
    Dense,
    DensityUnknown,
    NotDense,
    chart_rows,
    density_test,
    epsilon0_bound,
    epsilon0_bound_full,
    uncovered_region,
    verify_not_dense,
)
from pyjama.exactnum import dist_to_int
from pyjama.geometry import P, ConvexPoly, PolySet

from conftest import sqrt3_directions

X_AXIS = Configuration.from_vectors([UnitVector.of(1, 0)])


def _in_X(rows, eps, z):
    return all(dist_to_int(p * z[0] + q * z[1]) >= eps for p, q in rows)


def _ball_misses_by_sampling(cfg, eps, verdict, grid=40):
    """c not in X - X means (X + c) misses X; test that on grid points of X."""
    rows = chart_rows(cfg)
    cx, cy = verdict.center
    for i in range(grid + 1):
        for j in range(grid + 1):
            z = (F(i, grid), F(j, grid))
            if _in_X(rows, eps, z) and _in_X(rows, eps, (z[0] + cx, z[1] + cy)):
                return False
    return True


def test_single_direction_flip_at_quarter():
    v = density_test(X_AXIS, F(26, 100))
    assert isinstance(v, NotDense)
    assert verify_not_dense(X_AXIS, F(26, 100), v)
    assert isinstance(density_test(X_AXIS, F(1, 4)), Dense)
    assert isinstance(density_test(X_AXIS, F(24, 100)), Dense)
    b = epsilon0_bound(X_AXIS, F(1, 1000))
    assert F(1, 4) < b <= F(1, 4) + F(1, 1000)


def test_single_direction_band():
    X = uncovered_region(X_AXIS, F(1, 4))
    assert geo.same_region(X, PolySet([ConvexPoly.box(F(1, 4), 0, F(3, 4), 1)]))


def test_axes_flip_at_quarter():
    axes = build_pythagorean(4)
    assert isinstance(density_test(axes, F(1, 4)), Dense)
    v = density_test(axes, F(26, 100))
    assert isinstance(v, NotDense) and verify_not_dense(axes, F(26, 100), v)


def test_cube_roots_triangles():
    cube = build_cube_roots()
    eps = F(21, 100)
    X = uncovered_region(cube, eps)
    t1 = ConvexPoly.hull([P(eps, eps), P(eps, 1 - 2 * eps), P(1 - 2 * eps, eps)])
    t2 = ConvexPoly.hull([P(1 - eps, 1 - eps), P(1 - eps, 2 * eps), P(2 * eps, 1 - eps)])
    assert geo.same_region(X, PolySet([t1, t2]))
    v = density_test(cube, eps)
    assert isinstance(v, NotDense)
    assert verify_not_dense(cube, eps, v)
    assert _ball_misses_by_sampling(cube, eps, v)


def test_cube_roots_dense_at_and_below_fifth():
    cube = build_cube_roots()
    for eps in (F(1, 5), F(19, 100), F(1, 10)):
        assert isinstance(density_test(cube, eps), Dense)


def test_cube_roots_bound():
    res = epsilon0_bound_full(build_cube_roots(), F(1, 1000))
    assert F(1, 5) < res.bound <= F(1, 5) + F(1, 1000)
    assert res.status == "bisected"
    assert res.dense_below is not None and res.dense_below <= F(1, 5)
    assert res.bound - res.dense_below <= F(1, 1000)
    assert verify_not_dense(build_cube_roots(), res.bound, res.certificate)


def test_uncovered_region_empty_iff_past_radius():
    cube = build_cube_roots()
    assert uncovered_region(cube, F(1, 3)).is_empty()
    assert not uncovered_region(cube, F(1, 3) - F(1, 100)).is_empty()
    rng = random.Random(4)
    pool = sqrt3_directions(7)
    for _ in range(4):
        cfg = Configuration.from_vectors(rng.sample(pool, 3))
        r = covering_radius_exact(cfg)
        if r < F(1, 2):
            assert uncovered_region(cfg, r).is_empty()
            assert not uncovered_region(cfg, r - F(1, 200)).is_empty()


def test_uncovered_region_shrinks():
    cube = build_cube_roots()
    ladder = [F(k, 100) for k in (5, 12, 20, 27, 32)]
    regions = [uncovered_region(cube, e) for e in ladder]
    for a, b in zip(regions, regions[1:]):
        assert b.area <= a.area
        assert geo.same_region(geo.intersect(a, b), b)


def test_verdicts_monotone():
    cfgs = [build_cube_roots(), Configuration.from_vectors(sqrt3_directions(7)[:3])]
    for cfg in cfgs:
        ladder = [F(k, 50) for k in range(1, 17)]
        seen_not_dense = False
        for e in ladder:
            v = density_test(cfg, e)
            assert not isinstance(v, DensityUnknown)
            if seen_not_dense:
                assert isinstance(v, NotDense), (cfg, e)
            seen_not_dense = seen_not_dense or isinstance(v, NotDense)


def test_bound_never_exceeds_radius():
    rng = random.Random(9)
    pool = sqrt3_directions(7)
    for _ in range(2):
        cfg = Configuration.from_vectors(rng.sample(pool, rng.randint(2, 3)))
        b = epsilon0_bound(cfg, F(1, 16))
        assert b is not None and b <= covering_radius_exact(cfg)


def test_higher_dimension_is_unknown():
    assert isinstance(density_test(build_section3(), F(1, 4)), DensityUnknown)
    with pytest.raises(UnsupportedDimension):
        uncovered_region(build_section3(), F(1, 4))
    res = epsilon0_bound_full(build_cube_roots(), F(1, 64), max_pairs=1)
    assert res.bound is None or res.status == "partial"


def test_budget_gives_unknown():
    v = density_test(build_pythagorean(13), F(1, 5), max_pairs=4)
    assert isinstance(v, DensityUnknown)


def test_bad_epsilon():
    for e in (F(0), F(1, 2), F(-1, 3)):
        with pytest.raises(ValueError):
            density_test(build_cube_roots(), e)
