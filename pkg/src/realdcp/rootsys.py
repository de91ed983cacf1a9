"""Exact root systems for the finite irreducible Coxeter types.

Roots are vectors of :class:`~realdcp.scalar.Scalar` in a standard ambient
space. Every type is built the same way: start from a list of simple roots
and close up under the simple reflections. Positive roots are the ones
whose first nonzero coordinate is positive (one per reflecting hyperplane).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import lcm

import numpy as np

from .scalar import PHI, PHI_INV, Scalar

Vector = tuple[Scalar, ...]

FAMILIES = ("A", "B", "D", "E6", "E7", "E8", "F4", "H3", "H4", "I2")
_FIXED_RANK = {"E6": 6, "E7": 7, "E8": 8, "F4": 4, "H3": 3, "H4": 4, "I2": 2}
_MIN_RANK = {"A": 1, "B": 1, "D": 2}
# I2(m) with coordinates in Q(sqrt 5); other m only through flats.synthetic_i2
REALIZABLE_I2 = (3, 4, 5, 6)

EXPECTED_POSITIVE = {
    "A": lambda n: n * (n + 1) // 2,
    "B": lambda n: n * n,
    "D": lambda n: n * (n - 1),
}


class InvalidTypeError(ValueError):
    """Raised for an impossible family/rank combination."""


@dataclass(frozen=True, order=True)
class CoxeterType:
    family: str
    rank: int
    m: int | None = None

    def __post_init__(self):
        fam = self.family
        if fam not in FAMILIES:
            raise InvalidTypeError(f"unknown family {fam!r}; expected one of {', '.join(FAMILIES)}")
        if not isinstance(self.rank, int) or self.rank < 1:
            raise InvalidTypeError(f"rank must be a positive integer, got {self.rank!r}")
        if fam in _FIXED_RANK and self.rank != _FIXED_RANK[fam]:
            raise InvalidTypeError(f"{fam} has rank {_FIXED_RANK[fam]}, not {self.rank}")
        if fam in _MIN_RANK and self.rank < _MIN_RANK[fam]:
            raise InvalidTypeError(f"{fam} requires rank >= {_MIN_RANK[fam]}, got {self.rank}")
        if fam == "I2":
            if self.m is None or self.m < 3:
                raise InvalidTypeError("I2 requires m >= 3")
        elif self.m is not None:
            raise InvalidTypeError(f"m is only meaningful for I2, not {fam}")

    @classmethod
    def parse(cls, text: str) -> CoxeterType:
        """Parse strings such as ``"B5"``, ``"E7"``, ``"H3"``, ``"I2(5)"``."""
        s = text.strip().upper()
        mo = re.fullmatch(r"I2[\(_\-]?(\d+)\)?", s)
        if mo:
            return cls("I2", 2, int(mo.group(1)))
        mo = re.fullmatch(r"([A-Z])(\d+)", s)
        if not mo:
            raise InvalidTypeError(f"cannot parse Coxeter type {text!r}")
        letter, rank = mo.group(1), int(mo.group(2))
        if letter in "ABD":
            return cls(letter, rank)
        return cls(f"{letter}{rank}", rank)

    def __str__(self) -> str:
        if self.family == "I2":
            return f"I2({self.m})"
        if self.family in "ABD":
            return f"{self.family}{self.rank}"
        return self.family

    @property
    def expected_positive_roots(self) -> int:
        fam = self.family
        if fam in EXPECTED_POSITIVE:
            return EXPECTED_POSITIVE[fam](self.rank)
        if fam == "I2":
            return self.m
        return {"E6": 36, "E7": 63, "E8": 120, "F4": 24, "H3": 15, "H4": 60}[fam]

    @property
    def crystallographic(self) -> bool:
        return not (self.family in ("H3", "H4") or (self.family == "I2" and self.m == 5))


def _vec(*xs) -> Vector:
    return tuple(x if isinstance(x, Scalar) else Scalar(x) for x in xs)


def _unit(n: int, i: int, c=1) -> list:
    v = [0] * n
    v[i] = c
    return v


def _simple_roots(ct: CoxeterType) -> list[Vector]:
    fam, n = ct.family, ct.rank
    h = Fraction(1, 2)
    if fam == "A":
        return [_vec(*(_unit(n + 1, i)[k] - _unit(n + 1, i + 1)[k] for k in range(n + 1))) for i in range(n)]
    if fam in ("B", "D"):
        out = [_vec(*(_unit(n, i)[k] - _unit(n, i + 1)[k] for k in range(n))) for i in range(n - 1)]
        if fam == "B":
            out.append(_vec(*_unit(n, n - 1)))
        else:
            out.append(_vec(*(_unit(n, n - 2)[k] + _unit(n, n - 1)[k] for k in range(n))))
        return out
    if fam in ("E6", "E7", "E8"):
        # Bourbaki simple roots of E8 in R^8; E7, E6 are the leading subsets
        e8 = [
            _vec(h, -h, -h, -h, -h, -h, -h, h),
            _vec(1, 1, 0, 0, 0, 0, 0, 0),
            _vec(-1, 1, 0, 0, 0, 0, 0, 0),
            _vec(0, -1, 1, 0, 0, 0, 0, 0),
            _vec(0, 0, -1, 1, 0, 0, 0, 0),
            _vec(0, 0, 0, -1, 1, 0, 0, 0),
            _vec(0, 0, 0, 0, -1, 1, 0, 0),
            _vec(0, 0, 0, 0, 0, -1, 1, 0),
        ]
        return e8[:n]
    if fam == "F4":
        return [_vec(0, 1, -1, 0), _vec(0, 0, 1, -1), _vec(0, 0, 0, 1), _vec(h, -h, -h, -h)]
    if fam == "H3":
        return [_vec(0, 1, 0), _vec(0, 0, 1), _vec(PHI_INV * h, -PHI * h, -h)]
    if fam == "H4":
        return [
            _vec(0, PHI_INV * h, -PHI * h, -h),
            _vec(0, 0, 0, 1),
            _vec(0, 0, 1, 0),
            _vec(PHI_INV * h, -PHI * h, 0, -h),
        ]
    if fam == "I2":
        m = ct.m
        if m == 3:
            return [_vec(1, -1, 0), _vec(0, 1, -1)]
        if m == 4:
            return [_vec(1, -1), _vec(0, 1)]
        if m == 5:
            return [_vec(0, 1, 0), _vec(PHI_INV * h, -PHI * h, -h)]
        if m == 6:
            return [_vec(1, -1, 0), _vec(-2, 1, 1)]
        raise InvalidTypeError(
            f"I2({m}) has no root coordinates in Q(sqrt 5); supported m are {REALIZABLE_I2} "
            "(use flats.synthetic_i2 for the poset)"
        )
    raise InvalidTypeError(f"unhandled family {fam}")


def dot(u: Vector, v: Vector) -> Scalar:
    acc = Scalar(0)
    for a, b in zip(u, v):
        if a and b:
            acc = acc + a * b
    return acc


def _reflect(alpha: Vector, v: Vector) -> Vector:
    c = dot(v, alpha) * 2 / dot(alpha, alpha)
    if not c:
        return v
    return tuple(x - c * y for x, y in zip(v, alpha))


def is_positive(v: Vector) -> bool:
    for x in v:
        if x:
            return x.sign() > 0
    return False


def _normalize(v: Vector) -> Vector:
    return v if is_positive(v) else tuple(-x for x in v)


def _sort_key(v: Vector):
    # lexicographic on real values; coordinates compared exactly
    return tuple(_RealKey(x) for x in v)


class _RealKey:
    __slots__ = ("x",)

    def __init__(self, x: Scalar):
        self.x = x

    def __lt__(self, other):
        return self.x < other.x

    def __eq__(self, other):
        return self.x == other.x


@dataclass(frozen=True)
class RootSystem:
    type: CoxeterType
    dimension: int
    positive_roots: tuple[Vector, ...]
    simple_roots: tuple[int, ...]
    _index: dict = field(default=None, repr=False, compare=False)

    @property
    def rank(self) -> int:
        return self.type.rank

    @property
    def n_positive(self) -> int:
        return len(self.positive_roots)

    def index_of(self, v: Vector) -> int:
        """Index of the positive root spanning the same line as ``v``."""
        return self._index[_normalize(v)]

    def find(self, v: Vector) -> tuple[int, int] | None:
        """Return ``(index, sign)`` with ``v == sign * root[index]``, or None."""
        w = _normalize(v)
        i = self._index.get(w)
        if i is None:
            return None
        return i, (1 if w == v else -1)

    @cached_property
    def gram(self) -> list[list[Scalar]]:
        roots = self.positive_roots
        return [[dot(a, b) for b in roots] for a in roots]

    @cached_property
    def integer_matrix(self) -> np.ndarray | None:
        """Roots as rows of an int64 matrix (common denominator cleared).

        ``None`` when some coordinate is irrational. Scaling every root by the
        same positive constant changes no span, so flats are unaffected.
        """
        if any(not x.is_rational() for r in self.positive_roots for x in r):
            return None
        den = 1
        for r in self.positive_roots:
            for x in r:
                den = lcm(den, x.a.denominator)
        return np.array(
            [[int(x.a * den) for x in r] for r in self.positive_roots], dtype=np.int64
        )


def reflect(rs: RootSystem, root_index: int, v: Vector) -> Vector:
    """Reflect ``v`` in the hyperplane orthogonal to positive root ``root_index``."""
    if not 0 <= root_index < rs.n_positive:
        raise IndexError(f"root index {root_index} out of range 0..{rs.n_positive - 1}")
    return _reflect(rs.positive_roots[root_index], tuple(Scalar.coerce(x) for x in v))


def _close_under_reflections(simple: list[Vector]) -> set[Vector]:
    roots = set()
    frontier = []
    for s in simple:
        for v in (s, tuple(-x for x in s)):
            if v not in roots:
                roots.add(v)
                frontier.append(v)
    while frontier:
        nxt = []
        for v in frontier:
            for s in simple:
                w = _reflect(s, v)
                if w not in roots:
                    roots.add(w)
                    nxt.append(w)
        frontier = nxt
    return roots


def _simple_indices(positive: list[Vector]) -> tuple[int, ...]:
    # a positive root is simple iff its reflection keeps every other positive root positive
    out = []
    for i, a in enumerate(positive):
        aa = dot(a, a)
        ok = True
        for j, b in enumerate(positive):
            if i == j:
                continue
            c = dot(b, a)
            if not c:
                continue
            c = c * 2 / aa
            if not is_positive(tuple(x - c * y for x, y in zip(b, a))):
                ok = False
                break
        if ok:
            out.append(i)
    return tuple(out)


_CACHE: dict[CoxeterType, RootSystem] = {}


def build_root_system(ct: CoxeterType | str) -> RootSystem:
    """Construct the positive roots of ``ct`` exactly, in lexicographic order."""
    if isinstance(ct, str):
        ct = CoxeterType.parse(ct)
    if ct in _CACHE:
        return _CACHE[ct]
    simple = _simple_roots(ct)
    roots = _close_under_reflections(simple)
    positive = sorted((r for r in roots if is_positive(r)), key=_sort_key)
    if len(positive) != ct.expected_positive_roots:
        raise AssertionError(
            f"{ct}: generated {len(positive)} positive roots, expected {ct.expected_positive_roots}"
        )
    index = {r: i for i, r in enumerate(positive)}
    simple_idx = _simple_indices(positive)
    if len(simple_idx) != ct.rank:
        raise AssertionError(f"{ct}: found {len(simple_idx)} simple roots, expected {ct.rank}")
    rs = RootSystem(ct, len(simple[0]), tuple(positive), simple_idx, index)
    _CACHE[ct] = rs
    return rs
