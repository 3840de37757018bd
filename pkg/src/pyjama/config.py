"""Strip-direction configurations: exact unit vectors, builders and JSON I/O."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .exactnum import QuadElem, is_squarefree, q_sign

HALF = Fraction(1, 2)


class ParseError(ValueError):
    """Malformed configuration input; ``location`` says where."""

    def __init__(self, message: str, location: str = ""):
        self.location = location
        super().__init__(f"{location}: {message}" if location else message)


@dataclass(frozen=True)
class UnitVector:
    cos: QuadElem
    sin: QuadElem

    def __post_init__(self):
        object.__setattr__(self, "cos", QuadElem.coerce(self.cos))
        object.__setattr__(self, "sin", QuadElem.coerce(self.sin))
        if self.cos * self.cos + self.sin * self.sin != 1:
            raise ValueError(f"not a unit vector: ({self.cos}, {self.sin})")

    @classmethod
    def of(cls, c, s) -> "UnitVector":
        return cls(QuadElem.coerce(c), QuadElem.coerce(s))

    def is_canonical(self) -> bool:
        sg = q_sign(self.sin)
        return sg > 0 or (sg == 0 and self.cos == 1)

    def canonical(self) -> "UnitVector":
        return self if self.is_canonical() else UnitVector(-self.cos, -self.sin)

    def __neg__(self) -> "UnitVector":
        return UnitVector(-self.cos, -self.sin)

    def rotate(self, r: "UnitVector") -> "UnitVector":
        """Complex product (cos + i sin)(r.cos + i r.sin)."""
        return UnitVector(
            self.cos * r.cos - self.sin * r.sin,
            self.cos * r.sin + self.sin * r.cos,
        )

    def inverse(self) -> "UnitVector":
        return UnitVector(self.cos, -self.sin)

    def dot(self, x: Sequence) -> QuadElem:
        return self.cos * QuadElem.coerce(x[0]) + self.sin * QuadElem.coerce(x[1])

    def to_json(self) -> dict:
        return {"cos": self.cos.to_triples(), "sin": self.sin.to_triples()}

    def __str__(self) -> str:
        return f"({self.cos}, {self.sin})"


@dataclass(frozen=True)
class Configuration:
    """Ordered, duplicate-free list of canonical strip directions.

    Directions are taken mod pi: ``signs[j]`` is -1 when the j-th builder
    vector was negated during canonicalization (kept so published relations
    can be sign-adjusted).
    """

    vectors: tuple[UnitVector, ...]
    label: str = ""
    signs: tuple[int, ...] = field(default=(), compare=False)

    def __post_init__(self):
        if not self.vectors:
            raise ValueError("a configuration needs at least one direction")
        if len(set(self.vectors)) != len(self.vectors):
            raise ValueError("duplicate directions in configuration")
        for u in self.vectors:
            if not u.is_canonical():
                raise ValueError(f"vector {u} is not in canonical sign form")
        if not self.signs:
            object.__setattr__(self, "signs", (1,) * len(self.vectors))

    @classmethod
    def from_vectors(cls, vectors: Iterable[UnitVector], label: str = "", dedupe: bool = True) -> "Configuration":
        out: list[UnitVector] = []
        signs: list[int] = []
        seen = set()
        for u in vectors:
            c = u.canonical()
            if c in seen:
                if dedupe:
                    continue
                raise ValueError(f"duplicate direction {c}")
            seen.add(c)
            out.append(c)
            signs.append(1 if c == u else -1)
        return cls(tuple(out), label, tuple(signs))

    def __len__(self) -> int:
        return len(self.vectors)

    def __iter__(self):
        return iter(self.vectors)

    def direction_set(self) -> frozenset:
        return frozenset(self.vectors)

    def radicands(self) -> list[int]:
        rs = set()
        for u in self.vectors:
            rs.update(u.cos.radicands())
            rs.update(u.sin.radicands())
        return sorted(rs)

    def inner_products(self, x: Sequence) -> list[QuadElem]:
        return [u.dot(x) for u in self.vectors]


# ---------------------------------------------------------------------------
# Builders


def _cube_root_rotations() -> list[UnitVector]:
    h = Fraction(1, 2)
    return [
        UnitVector.of(1, 0),
        UnitVector.of(-h, QuadElem.sqrt(3, h)),
        UnitVector.of(-h, QuadElem.sqrt(3, -h)),
    ]


def build_cube_roots() -> Configuration:
    """Directions at angles 0, 2pi/3, 4pi/3."""
    return Configuration.from_vectors(_cube_root_rotations(), "cube_roots")


def section3_vectors() -> list[UnitVector]:
    """The nine directions of the 1/3 - 1/48 construction, before sign canonicalization."""
    third = Fraction(1, 3)
    a = UnitVector.of(third, QuadElem.sqrt(8, third))
    b = UnitVector.of(third, QuadElem.sqrt(8, -third))
    rots = _cube_root_rotations()
    return [r for r in rots] + [a.rotate(r) for r in rots] + [b.rotate(r) for r in rots]


def build_section3() -> Configuration:
    return Configuration.from_vectors(section3_vectors(), "section3", dedupe=False)


def primitive_triples(max_hypotenuse: int) -> list[tuple[int, int, int]]:
    """Primitive (a, b, c) with a odd, b even, c <= max_hypotenuse, sorted by (c, a)."""
    out = []
    s = 2
    while s * s + 1 <= max_hypotenuse:
        for t in range(1, s):
            if (s - t) % 2 == 1 and math.gcd(s, t) == 1:
                c = s * s + t * t
                if c <= max_hypotenuse:
                    out.append((s * s - t * t, 2 * s * t, c))
        s += 1
    return sorted(out, key=lambda abc: (abc[2], abc[0]))


def build_pythagorean(max_hypotenuse: int, reflected: bool = True, signed: bool = True) -> Configuration:
    """Axes plus the directions of every primitive triple with hypotenuse <= N.

    With the defaults each triple (a, b, c) contributes (+-a/c, b/c) and
    (+-b/c, a/c). ``reflected=False`` drops the swapped pair and
    ``signed=False`` drops the negative-cosine members.
    """
    if max_hypotenuse < 1:
        raise ValueError("max_hypotenuse must be >= 1")
    vecs = [UnitVector.of(1, 0), UnitVector.of(0, 1)]
    for a, b, c in primitive_triples(max_hypotenuse):
        pairs = [(a, b)] + ([(b, a)] if reflected else [])
        for p, q in pairs:
            vecs.append(UnitVector.of(Fraction(p, c), Fraction(q, c)))
            if signed:
                vecs.append(UnitVector.of(Fraction(-p, c), Fraction(q, c)))
    return Configuration.from_vectors(vecs, f"pythagorean_{max_hypotenuse}")


def rotate(cfg: Configuration, r: UnitVector) -> Configuration:
    return Configuration.from_vectors((u.rotate(r) for u in cfg.vectors), cfg.label)


def negate(cfg: Configuration, which: Iterable[int]) -> list[UnitVector]:
    """Raw vector list with the chosen members negated (for invariance checks)."""
    idx = set(which)
    return [(-u if j in idx else u) for j, u in enumerate(cfg.vectors)]


BUILDERS = {
    "cube_roots": lambda params: build_cube_roots(),
    "section3": lambda params: build_section3(),
    "pythagorean": lambda params: build_pythagorean(
        int(params["max_hypotenuse"]),
        reflected=bool(params.get("reflected", True)),
        signed=bool(params.get("signed", True)),
    ),
}


def build(name: str, **params) -> Configuration:
    if name not in BUILDERS:
        raise ParseError(f"unknown builder {name!r} (choose from {', '.join(sorted(BUILDERS))})")
    return BUILDERS[name](params)


# ---------------------------------------------------------------------------
# JSON


def _parse_terms(raw, where: str) -> QuadElem:
    if not isinstance(raw, list):
        raise ParseError("expected a list of [num, den, radicand] terms", where)
    acc = {}
    for k, t in enumerate(raw):
        loc = f"{where}[{k}]"
        if not (isinstance(t, list) and len(t) == 3 and all(type(v) is int for v in t)):
            raise ParseError(f"malformed term {t!r}", loc)
        num, den, rad = t
        if den <= 0:
            raise ParseError("denominator must be positive", loc)
        if not is_squarefree(rad):
            raise ParseError(f"radicand {rad} is not a squarefree positive integer", loc)
        acc[rad] = acc.get(rad, Fraction(0)) + Fraction(num, den)
    return QuadElem(acc)


def config_from_obj(obj) -> Configuration:
    if not isinstance(obj, dict):
        raise ParseError("configuration must be a JSON object", "$")
    if "builder" in obj:
        params = {k: v for k, v in obj.items() if k != "builder"}
        try:
            return build(obj["builder"], **params)
        except KeyError as exc:
            raise ParseError(f"builder parameter {exc} missing", "$") from exc
    if "vectors" not in obj:
        raise ParseError("missing 'vectors'", "$")
    vecs = []
    for j, v in enumerate(obj["vectors"]):
        loc = f"$.vectors[{j}]"
        if not isinstance(v, dict) or "cos" not in v or "sin" not in v:
            raise ParseError("vector needs 'cos' and 'sin'", loc)
        c = _parse_terms(v["cos"], loc + ".cos")
        s = _parse_terms(v["sin"], loc + ".sin")
        try:
            vecs.append(UnitVector(c, s))
        except ValueError as exc:
            raise ParseError(f"non-unit vector: cos^2 + sin^2 = {c * c + s * s}", loc) from exc
    if not vecs:
        raise ParseError("no vectors", "$.vectors")
    try:
        return Configuration.from_vectors(vecs, str(obj.get("label", "")), dedupe=False)
    except ValueError as exc:
        raise ParseError(str(exc), "$.vectors") from exc


def parse_config(text: str) -> Configuration:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, f"line {exc.lineno} column {exc.colno}") from exc
    return config_from_obj(obj)


def config_to_obj(cfg: Configuration) -> dict:
    return {"label": cfg.label, "vectors": [u.to_json() for u in cfg.vectors]}


def serialize_config(cfg: Configuration) -> str:
    """One vector per line; byte-stable for equal configurations."""
    lines = [json.dumps(u.to_json()) for u in cfg.vectors]
    body = ",\n    ".join(lines)
    return f'{{\n  "label": {json.dumps(cfg.label)},\n  "vectors": [\n    {body}\n  ]\n}}\n'


def load_config(path) -> Configuration:
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read())
