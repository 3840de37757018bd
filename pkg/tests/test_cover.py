import itertools
import random
from fractions import Fraction as F

import pytest

from pyjama import cover
from pyjama.config import (
    Configuration,
    UnitVector,
    build_cube_roots,
    build_pythagorean,
    build_section3,
    negate,
    rotate,
)
from pyjama.cover import (
    CoversCertified,
    UncoveredWitness,
    UnsupportedDimension,
    covering_radius_enclosure,
    covering_radius_exact,
    covering_radius_exact_full,
    is_covering,
)
from pyjama.exactnum import dist_to_int
from pyjama.relations import relation_lattice, subgroup_param

from conftest import pythagorean_directions, random_pythagorean, sqrt3_directions

THRESHOLD = F(1, 3) - F(1, 48)


def _rows(cfg):
    return subgroup_param(relation_lattice(cfg)).rows()


def _f(rows, z):
    return min(dist_to_int(sum(b * x for b, x in zip(row, z))) for row in rows)


def _radius_oracle(cfg):
    """Evaluate min_j ||b_j . z|| at every vertex of the kink-line arrangement.

    The function is piecewise linear with kinks on b.z in Z/2 and on
    (b_i +- b_j).z in Z, so its maximum over the unit square sits at an
    intersection of two such lines (or of one with the square's sides).
    """
    rows = [tuple(r) + (0,) * (2 - len(r)) for r in _rows(cfg)]
    lines = [(1, 0, 0), (0, 1, 0), (1, 0, 1), (0, 1, 1)]
    combos = list(rows)
    for a, b in itertools.combinations(rows, 2):
        combos += [(a[0] + b[0], a[1] + b[1]), (a[0] - b[0], a[1] - b[1])]
    for p, q in combos:
        if p or q:
            span = abs(p) + abs(q)
            lines += [(p, q, F(k, 2)) for k in range(-2 * span, 2 * span + 1)]
    best = F(0)
    for (a1, b1, c1), (a2, b2, c2) in itertools.combinations(set(lines), 2):
        det = a1 * b2 - a2 * b1
        if det == 0:
            continue
        x = F(c1 * b2 - c2 * b1, det)
        y = F(a1 * c2 - a2 * c1, det)
        if 0 <= x <= 1 and 0 <= y <= 1:
            best = max(best, _f(rows, (x, y)))
    return best


def _on_S(cfg, w):
    return all(sum(c * x for c, x in zip(m, w)).denominator == 1 for m in relation_lattice(cfg).basis.rows)


def test_known_radii():
    assert covering_radius_exact(build_cube_roots()) == F(1, 3)
    assert covering_radius_exact(Configuration.from_vectors([UnitVector.of(1, 0)])) == F(1, 2)
    assert covering_radius_exact(build_pythagorean(4)) == F(1, 2)
    assert covering_radius_exact_full(build_pythagorean(5)).method == "all-halves"
    assert covering_radius_exact_full(build_pythagorean(4)).method == "rank-0"
    assert covering_radius_exact(build_pythagorean(5)) == F(1, 2)


def test_cube_roots_argmax():
    r = covering_radius_exact_full(build_cube_roots())
    assert _f(_rows(build_cube_roots()), r.point) == F(1, 3)


def test_exact_radius_matches_vertex_oracle():
    rng = random.Random(5)
    small = sqrt3_directions(7)
    checked = 0
    for _ in range(8):
        cfg = Configuration.from_vectors(rng.sample(small, rng.randint(2, len(small))))
        if relation_lattice(cfg).dim_d <= 2:
            assert covering_radius_exact(cfg) == _radius_oracle(cfg)
            checked += 1
    assert covering_radius_exact(build_cube_roots()) == _radius_oracle(build_cube_roots())
    assert checked >= 5


def test_pythagorean_shortcut_matches_oracle():
    rng = random.Random(8)
    pool = pythagorean_directions(13)
    for _ in range(4):
        cfg = Configuration.from_vectors(rng.sample(pool, 3))
        assert _radius_oracle(cfg) == covering_radius_exact(cfg) == F(1, 2)


def test_section3_needs_enclosure():
    with pytest.raises(UnsupportedDimension):
        covering_radius_exact(build_section3())


def test_is_covering_cube_roots():
    cube = build_cube_roots()
    v = is_covering(cube, F(1, 3))
    assert isinstance(v, CoversCertified) and v.radius == F(1, 3)
    v = is_covering(cube, F(3, 10))
    assert isinstance(v, UncoveredWitness)
    assert v.value == F(1, 3)
    assert min(dist_to_int(x) for x in v.torus_point) == v.value
    assert _on_S(cube, v.torus_point)


def test_is_covering_section3():
    cfg = build_section3()
    v = is_covering(cfg, THRESHOLD + F(1, 10 ** 6))
    assert isinstance(v, CoversCertified) and v.method == "prover"
    v = is_covering(cfg, F(1, 4))
    assert isinstance(v, UncoveredWitness) and v.value > F(1, 4)
    assert _on_S(cfg, v.torus_point)
    assert min(dist_to_int(x) for x in v.torus_point) == v.value


def test_is_covering_pythagorean_never_covers():
    v = is_covering(build_pythagorean(25), F(49, 100))
    assert isinstance(v, UncoveredWitness) and v.value == F(1, 2)


def test_enclosures():
    enc, log = covering_radius_enclosure(build_cube_roots(), F(1, 1000))
    assert F(1, 3) in enc and enc.width <= F(1, 1000)
    assert log["stopped"] == "tolerance"
    enc, _ = covering_radius_enclosure(build_section3(), F(1, 1000))
    assert enc.width <= F(1, 1000)
    assert enc.hi <= THRESHOLD + F(1, 1000)
    assert enc.lo > F(1, 4)
    enc, _ = covering_radius_enclosure(build_pythagorean(13), F(1, 100))
    assert enc.lo == enc.hi == F(1, 2)


def test_enclosure_budget_stops_early():
    enc, log = covering_radius_enclosure(build_section3(), F(1, 10 ** 6), budget=3)
    assert log["stopped"] == "budget"
    assert enc.lo <= enc.hi


def test_rotation_and_sign_invariance():
    rng = random.Random(12)
    pool = sqrt3_directions(7)
    rots = [UnitVector.of(F(3, 5), F(4, 5)), pool[1], pool[-1]]
    for _ in range(4):
        cfg = Configuration.from_vectors(rng.sample(pool, rng.randint(2, 4)))
        r = covering_radius_exact(cfg)
        for rot in rots:
            rotated = rotate(cfg, rot)
            if relation_lattice(rotated).dim_d <= 2:
                assert covering_radius_exact(rotated) == r
        flipped = Configuration.from_vectors(negate(cfg, [0]))
        assert covering_radius_exact(flipped) == r


def test_adding_directions_never_raises_radius():
    rng = random.Random(21)
    pool = sqrt3_directions(7)
    for _ in range(6):
        k = rng.randint(2, len(pool) - 1)
        sub = rng.sample(pool, k)
        extra = rng.choice([u for u in pool if u not in sub])
        assert covering_radius_exact(Configuration.from_vectors(sub + [extra])) <= covering_radius_exact(
            Configuration.from_vectors(sub)
        )


def test_verdict_consistent_with_radius(rng):
    pool = sqrt3_directions(7)
    for _ in range(4):
        cfg = Configuration.from_vectors(rng.sample(pool, 3))
        r = covering_radius_exact(cfg)
        for eps in (r - F(1, 50), r, min(r + F(1, 50), F(49, 100))):
            if not 0 < eps < F(1, 2):
                continue
            v = is_covering(cfg, eps)
            assert isinstance(v, CoversCertified) == (eps >= r)


def test_radius_is_an_upper_bound_on_samples(rng):
    for cfg in (build_cube_roots(), Configuration.from_vectors(sqrt3_directions(7)[:4])):
        r = covering_radius_exact(cfg)
        rows = _rows(cfg)
        for _ in range(300):
            z = (F(rng.randrange(1000), 1000), F(rng.randrange(1000), 1000))
            assert _f(rows, z) <= r


def test_random_pythagorean_radius_half(rng):
    for _ in range(5):
        assert covering_radius_exact(random_pythagorean(rng, max_hyp=40)) == F(1, 2)


def test_arrangement_and_superlevel_agree():
    rng = random.Random(30)
    pool = sqrt3_directions(13)
    compared = 0
    for _ in range(10):
        cfg = Configuration.from_vectors(rng.sample(pool, rng.randint(2, 4)))
        rl = relation_lattice(cfg)
        if rl.rank == 0 or rl.dim_d > 2:
            continue
        dirs = cover._directions(subgroup_param(rl).rows())
        if len(cover._breaklines(dirs)) > 70:
            continue
        assert cover._exact_by_arrangement(dirs)[0] == cover._exact_by_superlevel(dirs)[0]
        compared += 1
    assert compared >= 3
    assert covering_radius_exact_full(build_cube_roots()).method == "arrangement"
