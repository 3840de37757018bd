"""Explicit uncovered points for periodic configurations.

For a configuration whose directions, after rotating the first one to
(1, 0), all have the form (m/n, k sqrt(D)/n), a single point of the plane
keeps every inner product at distance >= 1/3 from the integers (1/2 when D
is 1 or even). The point is built from M = prod n_j and, for odd D, from the
smallest prime p | D.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .config import Configuration
from .exactnum import Irrational, QuadElem, dist_to_int, prime_factors, q_as_rational
from .relations import NotApplicable, QuadClass, classify_quadratic

HALF = Fraction(1, 2)


class NotPeriodicQuadratic(ValueError):
    pass


class InternalBoundViolation(AssertionError):
    pass


class IrrationalInnerProduct(ValueError):
    pass


@dataclass(frozen=True)
class PeriodicWitness:
    case: str  # "D1", "EvenD" or "OddPrime"
    p: int | None
    point: tuple[QuadElem, QuadElem]
    bound: Fraction
    achieved: Fraction
    inner_products: tuple[Fraction, ...]
    qclass: QuadClass


def verify_point(cfg: Configuration, point: Sequence) -> Fraction:
    """min_j ||<u_j, point>||, computed exactly."""
    vals = []
    for u in cfg.vectors:
        try:
            vals.append(q_as_rational(u.dot(point)))
        except Irrational as exc:
            raise IrrationalInnerProduct(str(exc)) from exc
    return min(dist_to_int(v) for v in vals)


def _check_coprime(triples) -> None:
    for m, k, n in triples:
        if math.gcd(m, n) != 1 or math.gcd(k, n) != 1 or (k and math.gcd(m, k) != 1 and m):
            raise InternalBoundViolation(f"triple ({m}, {k}, {n}) is not pairwise coprime")


def periodic_witness(cfg: Configuration) -> PeriodicWitness:
    try:
        qc = classify_quadratic(cfg)
    except NotApplicable as exc:
        raise NotPeriodicQuadratic(str(exc)) from exc
    _check_coprime(qc.triples)
    D, M = qc.D, qc.Mprod
    if D == 1:
        case, p = "D1", None
        x = (QuadElem.rational(Fraction(M, 2)), QuadElem.rational(Fraction(M, 2)))
        bound = HALF
    elif D % 2 == 0:
        # y = (2M/D) sqrt(D); for D = 2 this is M sqrt(2)
        case, p = "EvenD", 2
        x = (QuadElem.rational(Fraction(M, 2)), QuadElem.sqrt(D, Fraction(2 * M, D)))
        bound = HALF
    else:
        p = prime_factors(D)[0]
        case = "OddPrime"
        t = pow(M, -1, p)
        x = (QuadElem.rational(Fraction(t * M * (p - 1), 2 * p)), QuadElem.sqrt(D, M))
        bound = Fraction(p - 1, 2 * p)
    # back to the user's frame: rotate by the first vector
    r = qc.rotation
    point = (r.cos * x[0] - r.sin * x[1], r.sin * x[0] + r.cos * x[1])
    try:
        ips = tuple(q_as_rational(u.dot(point)) for u in cfg.vectors)
    except Irrational as exc:
        raise InternalBoundViolation(f"witness inner product is irrational: {exc}") from exc
    achieved = min(dist_to_int(v) for v in ips)
    if achieved < bound:
        raise InternalBoundViolation(f"achieved {achieved} < bound {bound}")
    return PeriodicWitness(case, p, point, bound, achieved, ips, qc)
