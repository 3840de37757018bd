import random
from fractions import Fraction as F

import pytest
from sympy import Matrix

from pyjama.config import (
    Configuration,
    UnitVector,
    build_cube_roots,
    build_pythagorean,
    build_section3,
)
from pyjama.exactnum import QuadElem
from pyjama.intlinalg import IntMat, det, lattice_contains, snf
from pyjama.relations import (
    NotApplicable,
    check_relation,
    classify_quadratic,
    coordinate_matrix,
    is_periodic,
    period_lattice,
    relation_lattice,
    subgroup_param,
)

from conftest import random_pythagorean

# the four relations of the hand proof, with signs adjusted to the stored
# (sign-canonical) vectors
SECTION3_RELATIONS = [
    [1, 1, -1, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 1, -1, -1, 0, 0, 0],
    [0, 0, 0, 0, 0, 0, -1, 1, 1],
    [-2, 0, 0, 3, 0, 0, -3, 0, 0],
]


def _rank_oracle(cfg):
    """Rank of the coordinate matrix via sympy, built independently from radicand coefficients."""
    rads = sorted({r for u in cfg for r in (*u.cos.terms, *u.sin.terms)})
    rows = []
    for r in rads:
        rows.append([u.cos.coeff(r) for u in cfg])
        rows.append([u.sin.coeff(r) for u in cfg])
    return Matrix(rows).rank()


def test_cube_roots_lattice():
    rl = relation_lattice(build_cube_roots())
    assert rl.rank == 1 and rl.dim_d == 2
    assert lattice_contains(rl.basis, [1, 1, -1]) and lattice_contains(IntMat([[1, 1, -1]]), rl.basis.row(0))


def test_single_vector():
    rl = relation_lattice(Configuration.from_vectors([UnitVector.of(1, 0)]))
    assert rl.rank == 0 and rl.dim_d == 1
    param = subgroup_param(rl)
    assert param.B == IntMat.identity(1)


def test_section3_lattice():
    cfg = build_section3()
    rl = relation_lattice(cfg)
    assert rl.rank == 5 and rl.dim_d == 4
    assert 9 - _rank_oracle(cfg) == 5
    assert len(coordinate_matrix(cfg)) == 8
    for m in SECTION3_RELATIONS:
        assert check_relation(cfg, m)
        assert lattice_contains(rl.basis, m)


def test_relations_hold_exactly():
    for cfg in (build_cube_roots(), build_section3(), build_pythagorean(25)):
        for m in relation_lattice(cfg).basis.rows:
            sx = sum((u.cos * c for u, c in zip(cfg, m)), QuadElem())
            sy = sum((u.sin * c for u, c in zip(cfg, m)), QuadElem())
            assert sx.is_zero() and sy.is_zero()


def test_saturation_on_random_configs():
    rng = random.Random(7)
    mixed = Configuration.from_vectors(build_section3().vectors + build_pythagorean(13).vectors).vectors
    pools = [build_pythagorean(65).vectors, mixed]
    seen = 0
    for _ in range(50):
        pool = rng.choice(pools)
        vecs = rng.sample(list(pool), rng.randint(2, min(9, len(pool))))
        cfg = Configuration.from_vectors(vecs)
        rl = relation_lattice(cfg)
        assert rl.rank == len(cfg) - _rank_oracle(cfg)
        if rl.rank:
            assert snf(rl.basis).invariant_factors == [1] * rl.rank
            seen += 1
    assert seen > 30


def test_subgroup_param_properties():
    for cfg in (build_cube_roots(), build_section3(), build_pythagorean(5), build_pythagorean(13)):
        rl = relation_lattice(cfg)
        p = subgroup_param(rl)
        assert (rl.basis @ p.B).is_zero()
        assert abs(det(p.V)) == 1
        assert [list(r[-p.d:]) for r in p.V.rows] == p.B.tolist()
        if p.chart is not None:
            assert abs(det(p.B.select_rows(p.chart))) == 1


def test_cube_roots_chart_matches_projection():
    p = subgroup_param(relation_lattice(build_cube_roots()))
    assert p.chart == (0, 1)
    assert p.B.tolist() == [[1, 0], [0, 1], [1, 1]]


def test_section3_has_no_unimodular_chart_but_B_is_valid():
    rl = relation_lattice(build_section3())
    p = subgroup_param(rl)
    assert p.B.shape == (9, 4)
    assert (rl.basis @ p.B).is_zero()


def test_periodicity():
    assert is_periodic(build_cube_roots())
    assert not is_periodic(build_section3())
    assert is_periodic(Configuration.from_vectors(
        [UnitVector.of(1, 0), UnitVector.of(F(3, 5), F(4, 5)), UnitVector.of(F(4, 5), F(3, 5))]))
    assert not is_periodic(Configuration.from_vectors([UnitVector.of(1, 0)]))


def test_period_lattice_cube_roots():
    cfg = build_cube_roots()
    v1, v2 = period_lattice(cfg)
    for v in (v1, v2):
        for u in cfg:
            ip = u.dot(v)
            assert ip.is_rational() and ip.as_rational().denominator == 1
    # the lattice generated must contain the hand-found basis (2,0), (1, 1/sqrt3)
    M = Matrix([[v1[0].approx(), v2[0].approx()], [v1[1].approx(), v2[1].approx()]])
    for target in ((2, 0), (1, 1 / 3 ** 0.5)):
        coef = M.solve(Matrix(target))
        assert all(abs(c - round(c)) < 1e-9 for c in coef)
    # same covolume, so the two lattices coincide
    assert abs(abs(M.det()) - 2 / 3 ** 0.5) < 1e-9
    assert period_lattice(build_section3()) is None


def test_period_lattice_random_pythagorean(rng):
    for _ in range(10):
        cfg = random_pythagorean(rng, max_hyp=30, max_vectors=5)
        basis = period_lattice(cfg)
        assert basis is not None
        for v in basis:
            for u in cfg:
                assert u.dot(v).as_rational().denominator == 1


def test_classify_quadratic():
    qc = classify_quadratic(build_cube_roots())
    assert qc.D == 3 and qc.Mprod == 4
    assert sorted(qc.triples) == sorted([(1, 0, 1), (-1, 1, 2), (1, 1, 2)])
    for m, k, n in qc.triples:
        assert m * m + qc.D * k * k == n * n
    qc = classify_quadratic(Configuration.from_vectors([UnitVector.of(1, 0), UnitVector.of(F(3, 5), F(4, 5))]))
    assert qc.D == 1 and qc.Mprod == 5
    with pytest.raises(NotApplicable):
        classify_quadratic(build_section3())


def test_is_periodic_iff_d2(rng):
    for _ in range(15):
        cfg = random_pythagorean(rng, max_hyp=25, max_vectors=5)
        assert is_periodic(cfg) == (relation_lattice(cfg).dim_d == 2)
