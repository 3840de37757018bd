"""Exact scalars: rationals, multiquadratic field elements and rational intervals.

Every coordinate, inner product and threshold in the package lives here.
Nothing in this module touches floating point.
"""

from __future__ import annotations

import ast
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Union

Rat = Fraction
Number = Union[int, Fraction]


class Irrational(ValueError):
    """A quantity that had to be rational carries a nontrivial square root."""


# ---------------------------------------------------------------------------
# Integers


@lru_cache(maxsize=4096)
def prime_factors(n: int) -> tuple[int, ...]:
    """Distinct prime factors of ``n > 0`` in increasing order (trial division)."""
    if n < 1:
        raise ValueError(f"prime_factors needs a positive integer, got {n}")
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        out.append(n)
    return tuple(out)


@lru_cache(maxsize=4096)
def squarefree_split(n: int) -> tuple[int, int]:
    """Write ``n > 0`` as ``s**2 * r`` with ``r`` squarefree; returns ``(s, r)``."""
    if n < 1:
        raise ValueError(f"radicand must be positive, got {n}")
    s, r = 1, 1
    for p in prime_factors(n):
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        s *= p ** (e // 2)
        if e % 2:
            r *= p
    return s, r


def is_squarefree(n: int) -> bool:
    return n >= 1 and squarefree_split(n)[0] == 1


def dist_to_int(x: Number) -> Fraction:
    """Distance from ``x`` to the nearest integer, in ``[0, 1/2]``."""
    x = Fraction(x)
    f = x - math.floor(x)
    return min(f, 1 - f)


def frac_part(x: Number) -> Fraction:
    x = Fraction(x)
    return x - math.floor(x)


def fmt_rat(x: Number) -> str:
    """``"p/q"`` string for exact JSON output (integers print without a slash)."""
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def parse_rat(text: str | int | Fraction) -> Fraction:
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    return Fraction(text.strip())


_ALLOWED_BINOPS = (ast.Add, ast.Sub, ast.Mult, ast.Div, ast.Pow)


def parse_rational_expr(text: str) -> Fraction:
    """Evaluate an arithmetic expression over the rationals, e.g. ``"1/3-1/48"``.

    Integers, ``+ - * /``, unary minus, parentheses and integer powers
    (``10**-6``) are accepted. Decimal literals are rejected so that no float
    ever enters a threshold.
    """

    def ev(node: ast.AST) -> Fraction:
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and type(node.value) is int:
            return Fraction(node.value)
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp) and isinstance(node.op, _ALLOWED_BINOPS):
            a, b = ev(node.left), ev(node.right)
            if isinstance(node.op, ast.Add):
                return a + b
            if isinstance(node.op, ast.Sub):
                return a - b
            if isinstance(node.op, ast.Mult):
                return a * b
            if isinstance(node.op, ast.Div):
                if b == 0:
                    raise ValueError("division by zero in rational expression")
                return a / b
            if b.denominator != 1 or abs(b) > 4096:
                raise ValueError("exponent must be a small integer")
            return a ** int(b)
        raise ValueError(f"unsupported syntax in rational expression: {ast.dump(node)}")

    try:
        tree = ast.parse(text.strip(), mode="eval")
    except SyntaxError as exc:
        raise ValueError(f"cannot parse rational expression {text!r}") from exc
    return ev(tree)


# ---------------------------------------------------------------------------
# Intervals


@dataclass(frozen=True)
class RatInterval:
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @classmethod
    def point(cls, x: Number) -> "RatInterval":
        return cls(Fraction(x), Fraction(x))

    def __add__(self, other: "RatInterval") -> "RatInterval":
        return RatInterval(self.lo + other.lo, self.hi + other.hi)

    def __neg__(self) -> "RatInterval":
        return RatInterval(-self.hi, -self.lo)

    def __sub__(self, other: "RatInterval") -> "RatInterval":
        return self + (-other)

    def scale(self, c: Number) -> "RatInterval":
        a, b = self.lo * c, self.hi * c
        return RatInterval(min(a, b), max(a, b))

    def __mul__(self, other: "RatInterval") -> "RatInterval":
        ps = [self.lo * other.lo, self.lo * other.hi, self.hi * other.lo, self.hi * other.hi]
        return RatInterval(min(ps), max(ps))

    def contains(self, x: Number) -> bool:
        return self.lo <= x <= self.hi

    def integers(self) -> range:
        """The integers lying in the closed interval."""
        return range(math.ceil(self.lo), math.floor(self.hi) + 1)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo


def sqrt_enclosure(d: int, bits: int) -> RatInterval:
    """Interval of width ``2**-bits`` (or a point) around ``sqrt(d)``."""
    scale = 1 << bits
    r = math.isqrt(d * scale * scale)
    if r * r == d * scale * scale:
        return RatInterval.point(Fraction(r, scale))
    return RatInterval(Fraction(r, scale), Fraction(r + 1, scale))


def rat_sqrt_floor(q: Fraction, bits: int = 32) -> Fraction:
    """A rational ``r`` with ``0 <= r <= sqrt(q)``, accurate to ``2**-bits``."""
    if q <= 0:
        return Fraction(0)
    scale = 1 << bits
    return Fraction(math.isqrt(q.numerator * scale * scale // q.denominator), scale)


# ---------------------------------------------------------------------------
# Multiquadratic elements


class QuadElem:
    """An exact element ``sum_r q_r * sqrt(r)`` over squarefree radicands ``r``.

    Radicand 1 carries the rational part. Terms with zero coefficient are
    dropped, so the element is zero exactly when it has no terms; this relies
    on square roots of distinct squarefree integers being linearly
    independent over the rationals.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[int, Number] | None = None):
        acc: dict[int, Fraction] = {}
        for r, q in (terms or {}).items():
            q = Fraction(q)
            if q == 0:
                continue
            s, rf = squarefree_split(int(r))
            acc[rf] = acc.get(rf, Fraction(0)) + q * s
        self._terms = {r: q for r, q in sorted(acc.items()) if q != 0}
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict[int, Fraction]) -> "QuadElem":
        obj = cls.__new__(cls)
        obj._terms = {r: terms[r] for r in sorted(terms) if terms[r] != 0}
        obj._hash = None
        return obj

    @classmethod
    def rational(cls, q: Number) -> "QuadElem":
        return cls({1: q})

    @classmethod
    def sqrt(cls, n: int, coeff: Number = 1) -> "QuadElem":
        return cls({n: coeff})

    @classmethod
    def coerce(cls, x) -> "QuadElem":
        if isinstance(x, QuadElem):
            return x
        if isinstance(x, (int, Fraction)):
            return cls.rational(x)
        raise TypeError(f"cannot convert {type(x).__name__} to QuadElem")

    @property
    def terms(self) -> dict[int, Fraction]:
        return dict(self._terms)

    def radicands(self) -> tuple[int, ...]:
        return tuple(self._terms)

    def coeff(self, r: int) -> Fraction:
        return self._terms.get(r, Fraction(0))

    def is_zero(self) -> bool:
        return not self._terms

    def is_rational(self) -> bool:
        return all(r == 1 for r in self._terms)

    # arithmetic ----------------------------------------------------------

    def __add__(self, other) -> "QuadElem":
        try:
            other = QuadElem.coerce(other)
        except TypeError:
            return NotImplemented
        acc = dict(self._terms)
        for r, q in other._terms.items():
            acc[r] = acc.get(r, Fraction(0)) + q
        return QuadElem._raw(acc)

    __radd__ = __add__

    def __neg__(self) -> "QuadElem":
        return QuadElem._raw({r: -q for r, q in self._terms.items()})

    def __sub__(self, other) -> "QuadElem":
        try:
            other = QuadElem.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "QuadElem":
        return QuadElem.coerce(other) - self

    def __mul__(self, other) -> "QuadElem":
        if isinstance(other, (int, Fraction)):
            return QuadElem._raw({r: q * other for r, q in self._terms.items()})
        try:
            other = QuadElem.coerce(other)
        except TypeError:
            return NotImplemented
        acc: dict[int, Fraction] = {}
        for a, qa in self._terms.items():
            for b, qb in other._terms.items():
                # sqrt(a)*sqrt(b) = g*sqrt(ab/g^2) keeps the radicand squarefree
                g = math.gcd(a, b)
                r = (a // g) * (b // g)
                acc[r] = acc.get(r, Fraction(0)) + qa * qb * g
        return QuadElem._raw(acc)

    __rmul__ = __mul__

    def conjugate(self, p: int) -> "QuadElem":
        """Image under the field automorphism sending sqrt(p) to -sqrt(p)."""
        return QuadElem._raw({r: (-q if r % p == 0 else q) for r, q in self._terms.items()})

    def inverse(self) -> "QuadElem":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero QuadElem")
        primes = sorted({p for r in self._terms for p in prime_factors(r)})
        num = QuadElem.rational(1)
        cur = self
        for p in primes:
            c = cur.conjugate(p)
            num = num * c
            cur = cur * c
        # multiplying by every conjugate leaves a rational norm
        return num * (1 / cur.as_rational())

    def __truediv__(self, other) -> "QuadElem":
        if isinstance(other, (int, Fraction)):
            return self * (1 / Fraction(other))
        return self * QuadElem.coerce(other).inverse()

    def __rtruediv__(self, other) -> "QuadElem":
        return QuadElem.coerce(other) * self.inverse()

    # comparison ----------------------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = QuadElem.rational(other)
        if not isinstance(other, QuadElem):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(tuple(self._terms.items()))
        return self._hash

    def enclosure(self, bits: int) -> RatInterval:
        total = RatInterval.point(0)
        for r, q in self._terms.items():
            total = total + sqrt_enclosure(r, bits).scale(q)
        return total

    def sign(self) -> int:
        return q_sign(self)

    def __lt__(self, other) -> bool:
        return q_sign(self - other) < 0

    def __gt__(self, other) -> bool:
        return q_sign(self - other) > 0

    def __le__(self, other) -> bool:
        return q_sign(self - other) <= 0

    def __ge__(self, other) -> bool:
        return q_sign(self - other) >= 0

    def as_rational(self) -> Fraction:
        return q_as_rational(self)

    def rational_part(self) -> Fraction:
        return self.coeff(1)

    def approx(self) -> float:
        """Float value for display only."""
        return float(sum(float(q) * math.sqrt(r) for r, q in self._terms.items()))

    # text ----------------------------------------------------------------

    def to_text(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for r, q in self._terms.items():
            body = fmt_rat(q) if r == 1 else f"{fmt_rat(q)}*sqrt({r})"
            parts.append(body)
        out = parts[0]
        for p in parts[1:]:
            out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return out

    @classmethod
    def from_text(cls, text: str) -> "QuadElem":
        return parse_quad(text)

    def to_triples(self) -> list[list[int]]:
        return [[q.numerator, q.denominator, r] for r, q in self._terms.items()]

    @classmethod
    def from_triples(cls, triples: Iterable[Iterable[int]]) -> "QuadElem":
        acc: dict[int, Fraction] = {}
        for t in triples:
            num, den, rad = t
            acc[rad] = acc.get(rad, Fraction(0)) + Fraction(num, den)
        return cls(acc)

    def __repr__(self) -> str:
        return f"QuadElem({self.to_text()!r})"

    __str__ = to_text


def q_add(a: QuadElem, b: QuadElem) -> QuadElem:
    return a + b


def q_mul(a: QuadElem, b: QuadElem) -> QuadElem:
    return a * b


def q_sign(a: QuadElem) -> int:
    """Exact sign. Zero is read off the term map; otherwise refine until decided."""
    if a.is_zero():
        return 0
    if a.is_rational():
        return 1 if a.coeff(1) > 0 else -1
    bits = 16
    while True:
        iv = a.enclosure(bits)
        if iv.lo > 0:
            return 1
        if iv.hi < 0:
            return -1
        bits *= 2


def q_as_rational(a: QuadElem) -> Fraction:
    if not a.is_rational():
        raise Irrational(f"{a.to_text()} is not rational")
    return a.coeff(1)


_TERM_RE = re.compile(
    r"""^\s*(?P<coef>[+-]?\s*\d+(?:\s*/\s*\d+)?)?\s*
        (?:\*?\s*sqrt\(\s*(?P<rad>\d+)\s*\))?\s*$""",
    re.VERBOSE,
)


def parse_quad(text: str) -> QuadElem:
    """Parse the canonical text form, e.g. ``"1/6 + 1/3*sqrt(6)"``.

    Non-squarefree radicands are normalized (``sqrt(8)`` becomes ``2*sqrt(2)``).
    """
    src = text.strip()
    if not src:
        raise ValueError("empty QuadElem text")
    # split on + / - that start a new term
    pieces = re.split(r"(?<=[\d)\s])\s*(?=[+-])", src)
    acc: dict[int, Fraction] = {}
    for piece in pieces:
        piece = piece.strip()
        if not piece:
            continue
        sign = 1
        body = piece
        if body[0] in "+-":
            sign = -1 if body[0] == "-" else 1
            body = body[1:].strip()
        m = _TERM_RE.match(body)
        if not m or (m.group("coef") is None and m.group("rad") is None):
            raise ValueError(f"malformed term {piece!r} in {text!r}")
        coef = Fraction(m.group("coef").replace(" ", "")) if m.group("coef") else Fraction(1)
        rad = int(m.group("rad")) if m.group("rad") else 1
        if rad == 0:
            continue
        acc[rad] = acc.get(rad, Fraction(0)) + sign * coef
    return QuadElem(acc)
