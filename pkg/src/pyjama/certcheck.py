"""Independent replay of emptiness certificates.

Shares no code with the search: it rebuilds every box from the root cube,
recomputes each propagation bound itself and trusts only the choices
recorded in the tree (which relation, which coordinate, which midpoint).
"""

from __future__ import annotations

import json
import math
from fractions import Fraction


class _Invalid(Exception):
    pass


def _frac(x) -> Fraction:
    if isinstance(x, bool):
        raise _Invalid("boolean where a number was expected")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise _Invalid(f"bad rational {x!r}")


def _range(row, lo, hi):
    a = b = Fraction(0)
    for c, l, h in zip(row, lo, hi):
        if c > 0:
            a += c * l
            b += c * h
        elif c < 0:
            a += c * h
            b += c * l
    return a, b


def _tighten(row, j, k, lo, hi):
    """Bounds on w_j implied by row . w = k over the box (None if infeasible)."""
    c = row[j]
    if c == 0:
        raise _Invalid(f"coordinate {j} is not in the support of the relation")
    ra = rb = Fraction(0)
    for t, (ct, l, h) in enumerate(zip(row, lo, hi)):
        if t == j or ct == 0:
            continue
        if ct > 0:
            ra += ct * l
            rb += ct * h
        else:
            ra += ct * h
            rb += ct * l
    x1, x2 = (k - ra) / c, (k - rb) / c
    return max(lo[j], min(x1, x2)), min(hi[j], max(x1, x2))


def _replay(node, rels, lo, hi, fixed) -> None:
    if not isinstance(node, dict):
        raise _Invalid("node must be an object")
    for step in node.get("propagate", []):
        i, j = int(step[0]), int(step[1])
        if i not in fixed:
            raise _Invalid(f"propagation through unfixed relation {i}")
        nlo, nhi = _tighten(rels[i], j, fixed[i], lo, hi)
        if nlo > nhi:
            return  # the box is empty: nothing left to cover
        lo[j], hi[j] = nlo, nhi
    kind = node.get("kind")
    if kind == "leaf":
        i = int(node["relation"])
        if not 0 <= i < len(rels):
            raise _Invalid(f"relation index {i} out of range")
        a, b = _range(rels[i], lo, hi)
        if i in fixed:
            if a <= fixed[i] <= b:
                raise _Invalid(f"leaf: relation {i} can still equal {fixed[i]}")
        elif math.ceil(a) <= math.floor(b):
            raise _Invalid(f"leaf: relation {i} range [{a}, {b}] contains an integer")
        return
    if kind == "kbranch":
        i = int(node["relation"])
        if i in fixed or not 0 <= i < len(rels):
            raise _Invalid(f"k-branch on fixed or unknown relation {i}")
        a, b = _range(rels[i], lo, hi)
        children = {}
        for ch in node["children"]:
            k = int(ch["k"])
            if k in children:
                raise _Invalid(f"duplicate k-branch label {k}")
            children[k] = ch["node"]
        for k in range(math.ceil(a), math.floor(b) + 1):
            if k not in children:
                raise _Invalid(f"k-branch on relation {i} misses k = {k}")
            f2 = dict(fixed)
            f2[i] = k
            _replay(children[k], rels, list(lo), list(hi), f2)
        return
    if kind == "bisect":
        j = int(node["coord"])
        mid = _frac(node["mid"])
        if not lo[j] < mid < hi[j]:
            raise _Invalid(f"bisection point {mid} not inside [{lo[j]}, {hi[j]}]")
        sides = {}
        for ch in node["children"]:
            if ch["side"] in sides:
                raise _Invalid("duplicate bisection side")
            sides[ch["side"]] = ch["node"]
        if set(sides) != {"lo", "hi"}:
            raise _Invalid("bisection needs exactly the sides lo and hi")
        h2 = list(hi)
        h2[j] = mid
        _replay(sides["lo"], rels, list(lo), h2, dict(fixed))
        l2 = list(lo)
        l2[j] = mid
        _replay(sides["hi"], rels, l2, list(hi), dict(fixed))
        return
    raise _Invalid(f"unknown node kind {kind!r}")


def check_certificate(cert, relations=None, eps=None) -> bool:
    """True iff the tree proves the closed cube [eps, 1-eps]^n misses every relation lattice point.

    ``relations`` and ``eps`` default to the values stored in the certificate;
    when given they must be what the certificate is checked against.
    """
    try:
        if isinstance(cert, str):
            cert = json.loads(cert)
        source = relations if relations is not None else cert["relations"]
        if hasattr(source, "tolist"):
            source = source.tolist()
        rels = [[int(x) for x in r] for r in source]
        if not rels or any(len(r) != len(rels[0]) for r in rels):
            raise _Invalid("relation rows must be nonempty and of equal length")
        e = _frac(eps) if isinstance(eps, (str, int)) else (Fraction(eps) if eps is not None else _frac(cert["epsilon"]))
        if not 0 < e < Fraction(1, 2):
            raise _Invalid("epsilon out of range")
        n = len(rels[0])
        _replay(cert["root"], rels, [e] * n, [1 - e] * n, {})
        return True
    except (_Invalid, KeyError, TypeError, ValueError, IndexError, ZeroDivisionError):
        return False
