"""Truncated symmetric functions in power sums, with a formal half-grading letter.

Two rings are modelled:

* ``SymA``: polynomials in ``p_1, p_2, ...`` (the characters of symmetric groups),
* ``SymB``: polynomials in ``x_1, y_1, x_2, y_2, ...`` (characters of the
  hyperoctahedral groups), where ``x_i`` records a cycle of length ``i`` with
  product of signs ``+1`` and ``y_i`` one with product ``-1``.

Coefficients are Laurent polynomials over Q in a letter ``s`` (so that a
cohomological variable ``t`` is ``s**2``). Each value carries a truncation
degree ``N``; terms of degree above ``N`` are discarded and binary operations
refuse operands truncated at different degrees.

Internally a value is a list indexed by degree of dicts ``(mono, k) -> Fraction``
where ``k`` is the exponent of ``s``. In ``SymA`` a monomial is a weakly
decreasing tuple of part sizes. In ``SymB`` each factor is encoded as one
integer, ``2*i`` for ``x_i`` and ``2*i + 1`` for ``y_i``, again sorted
decreasingly; the public API speaks in pairs of partitions instead.
"""

from __future__ import annotations

import re
from collections import defaultdict
from collections.abc import Callable, Iterable
from fractions import Fraction
from functools import lru_cache
from math import factorial

Key = tuple[tuple[int, ...], int]


class TruncationMismatchError(ValueError):
    pass


class ConstantTermError(ValueError):
    pass


# ---- partitions -----------------------------------------------------------

@lru_cache(maxsize=None)
def partitions(n: int, max_part: int | None = None) -> tuple[tuple[int, ...], ...]:
    """All partitions of ``n`` as weakly decreasing tuples (reverse lex order)."""
    if max_part is None or max_part > n:
        max_part = n
    if n == 0:
        return ((),)
    out = []
    for first in range(max_part, 0, -1):
        for rest in partitions(n - first, first):
            out.append((first,) + rest)
    return tuple(out)


def bipartitions(n: int) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    return [(lam, mu) for a in range(n, -1, -1) for lam in partitions(a) for mu in partitions(n - a)]


@lru_cache(maxsize=None)
def z_lambda(lam: tuple[int, ...]) -> int:
    """Order of the centralizer of a permutation of cycle type ``lam``."""
    out = 1
    counts: dict[int, int] = defaultdict(int)
    for part in lam:
        counts[part] += 1
    for part, mult in counts.items():
        out *= part**mult * factorial(mult)
    return out


def _merge(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    if not a:
        return b
    if not b:
        return a
    return tuple(sorted(a + b, reverse=True))


# ---- Laurent coefficient helpers -------------------------------------------

def _laurent_str(k: int) -> str:
    return "" if k == 0 else ("s" if k == 1 else f"s^{k}")


class _Sym:
    """Shared implementation; subclasses fix the monomial encoding."""

    __slots__ = ("N", "_deg")
    kind = "?"

    def __init__(self, N: int, by_degree: list[dict[Key, Fraction]] | None = None):
        if N < 0:
            raise ValueError("truncation degree must be >= 0")
        self.N = N
        if by_degree is None:
            by_degree = [{} for _ in range(N + 1)]
        self._deg = by_degree

    # -- encoding hooks --
    @staticmethod
    def _mono_degree(mono: tuple[int, ...]) -> int:
        raise NotImplementedError

    @staticmethod
    def _part_degree(code: int) -> int:
        raise NotImplementedError

    # -- construction --
    @classmethod
    def _raw(cls, N: int, items: Iterable[tuple[Key, Fraction]]):
        deg = [{} for _ in range(N + 1)]
        for (mono, k), c in items:
            d = cls._mono_degree(mono)
            if d > N or not c:
                continue
            bucket = deg[d]
            v = bucket.get((mono, k), 0) + c
            if v:
                bucket[(mono, k)] = v
            else:
                bucket.pop((mono, k), None)
        return cls(N, deg)

    @classmethod
    def zero(cls, N: int):
        return cls(N)

    @classmethod
    def one(cls, N: int):
        return cls.scalar(1, N)

    @classmethod
    def scalar(cls, c, N: int, s_power: int = 0):
        return cls._raw(N, [(((), s_power), Fraction(c))])

    def _new(self, deg=None):
        return type(self)(self.N, deg)

    def _check(self, other) -> None:
        if type(other) is not type(self):
            raise TypeError(f"cannot combine {type(self).__name__} with {type(other).__name__}")
        if other.N != self.N:
            raise TruncationMismatchError(f"truncation degrees differ: {self.N} vs {other.N}")

    def _coerce(self, other):
        if isinstance(other, (int, Fraction)):
            return type(self).scalar(other, self.N)
        return other

    # -- inspection --
    def items(self):
        for bucket in self._deg:
            yield from bucket.items()

    def degree_part(self, d: int):
        """The homogeneous component of degree ``d`` (same truncation)."""
        out = self._new()
        if d <= self.N:
            out._deg[d] = dict(self._deg[d])
        return out

    def homogeneous(self, d: int) -> dict[Key, Fraction]:
        return dict(self._deg[d]) if d <= self.N else {}

    def truncate(self, N: int):
        """Re-truncate at a lower degree (explicit, never implicit)."""
        if N > self.N:
            raise TruncationMismatchError("cannot raise truncation degree")
        return type(self)(N, [dict(b) for b in self._deg[: N + 1]])

    def is_zero(self) -> bool:
        return not any(self._deg)

    def s_exponents(self) -> set[int]:
        return {k for (_, k), _c in self.items()}

    def min_degree(self) -> int | None:
        for d, b in enumerate(self._deg):
            if b:
                return d
        return None

    def constant_term(self) -> dict[int, Fraction]:
        return {k: c for ((_, k), c) in self._deg[0].items()}

    def __eq__(self, other) -> bool:
        if not isinstance(other, _Sym):
            return NotImplemented
        return type(self) is type(other) and self.N == other.N and self._deg == other._deg

    def __hash__(self):
        return hash((self.kind, self.N, frozenset(self.items())))

    def __len__(self) -> int:
        return sum(len(b) for b in self._deg)

    # -- ring operations --
    def __add__(self, other):
        other = self._coerce(other)
        self._check(other)
        out = []
        for a, b in zip(self._deg, other._deg):
            c = dict(a)
            for key, v in b.items():
                w = c.get(key, 0) + v
                if w:
                    c[key] = w
                else:
                    c.pop(key, None)
            out.append(c)
        return self._new(out)

    __radd__ = __add__

    def __neg__(self):
        return self._new([{k: -v for k, v in b.items()} for b in self._deg])

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def scale(self, c, s_power: int = 0):
        """Multiply by the constant ``c * s**s_power``."""
        c = Fraction(c)
        if not c:
            return self._new()
        return self._new([{(m, k + s_power): v * c for (m, k), v in b.items()} for b in self._deg])

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        self._check(other)
        N = self.N
        out = [defaultdict(Fraction) for _ in range(N + 1)]
        for i, a in enumerate(self._deg):
            if not a:
                continue
            for j in range(N + 1 - i):
                b = other._deg[j]
                if not b:
                    continue
                acc = out[i + j]
                for (m1, k1), c1 in a.items():
                    for (m2, k2), c2 in b.items():
                        acc[(_merge(m1, m2), k1 + k2)] += c1 * c2
        return self._new([{k: v for k, v in b.items() if v} for b in out])

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            return mult_inverse(self) ** (-e)
        out = type(self).one(self.N)
        base = self
        while e:
            if e & 1:
                out = out * base
            e >>= 1
            if e:
                base = base * base
        return out

    def map_terms(self, fn: Callable[[tuple[int, ...], int, Fraction], tuple[tuple[int, ...], int, Fraction]]):
        """Apply a degree-preserving relabelling term by term."""
        return type(self)._raw(self.N, (((m2, k2), c2) for (m, k), c in self.items() for (m2, k2, c2) in [fn(m, k, c)]))

    def subs_s(self, power: int):
        """Substitute ``s -> s**power`` in every coefficient."""
        return self._new([{(m, k * power): v for (m, k), v in b.items()} for b in self._deg])

    def even_part(self):
        return self._new([dict(b) if d % 2 == 0 else {} for d, b in enumerate(self._deg)])

    def odd_part(self):
        return self._new([dict(b) if d % 2 == 1 else {} for d, b in enumerate(self._deg)])

    def evaluate_s(self, value) -> _Sym:
        """Substitute a rational number for ``s`` (all exponents then collapse to 0)."""
        value = Fraction(value)
        return type(self)._raw(self.N, (((m, 0), c * value**k) for (m, k), c in self.items()))

    # -- text --
    def _mono_str(self, mono: tuple[int, ...]) -> str:
        raise NotImplementedError

    def __str__(self) -> str:
        return to_text(self)

    def __repr__(self) -> str:
        return f"{type(self).__name__}({to_text(self)!r})"


class SymA(_Sym):
    """Truncated element of Q[s, 1/s][p_1, p_2, ...]."""

    __slots__ = ()
    kind = "A"

    @staticmethod
    def _mono_degree(mono):
        return sum(mono)

    @staticmethod
    def _part_degree(code):
        return code

    @classmethod
    def from_terms(cls, terms: dict, N: int) -> SymA:
        """``{partition: coef}`` where ``coef`` is a number or ``{s_exp: number}``."""
        items = []
        for lam, coef in terms.items():
            lam = tuple(sorted(lam, reverse=True))
            if isinstance(coef, dict):
                items.extend(((lam, k), Fraction(c)) for k, c in coef.items())
            else:
                items.append(((lam, 0), Fraction(coef)))
        return cls._raw(N, items)

    @classmethod
    def p(cls, *parts: int, N: int, coef=1, s_power: int = 0) -> SymA:
        return cls._raw(N, [((tuple(sorted(parts, reverse=True)), s_power), Fraction(coef))])

    def coefficient(self, lam: tuple[int, ...]) -> dict[int, Fraction]:
        lam = tuple(sorted(lam, reverse=True))
        d = sum(lam)
        if d > self.N:
            return {}
        return {k: c for (m, k), c in self._deg[d].items() if m == lam}

    def terms(self) -> dict[tuple[int, ...], dict[int, Fraction]]:
        out: dict = defaultdict(dict)
        for (m, k), c in self.items():
            out[m][k] = c
        return dict(out)

    def _mono_str(self, mono):
        return "p[" + ",".join(map(str, mono)) + "]"


class SymB(_Sym):
    """Truncated element of Q[s, 1/s][x_1, y_1, x_2, y_2, ...]."""

    __slots__ = ()
    kind = "B"

    @staticmethod
    def _mono_degree(mono):
        return sum(c >> 1 for c in mono)

    @staticmethod
    def _part_degree(code):
        return code >> 1

    @staticmethod
    def encode(lam: tuple[int, ...], mu: tuple[int, ...]) -> tuple[int, ...]:
        return tuple(sorted([2 * i for i in lam] + [2 * i + 1 for i in mu], reverse=True))

    @staticmethod
    def decode(mono: tuple[int, ...]) -> tuple[tuple[int, ...], tuple[int, ...]]:
        lam = tuple(c >> 1 for c in mono if not c & 1)
        mu = tuple(c >> 1 for c in mono if c & 1)
        return lam, mu

    @classmethod
    def from_terms(cls, terms: dict, N: int) -> SymB:
        """``{(lam, mu): coef}`` where ``coef`` is a number or ``{s_exp: number}``."""
        items = []
        for (lam, mu), coef in terms.items():
            mono = cls.encode(tuple(lam), tuple(mu))
            if isinstance(coef, dict):
                items.extend(((mono, k), Fraction(c)) for k, c in coef.items())
            else:
                items.append(((mono, 0), Fraction(coef)))
        return cls._raw(N, items)

    @classmethod
    def xy(cls, lam=(), mu=(), N: int = 0, coef=1, s_power: int = 0) -> SymB:
        return cls._raw(N, [((cls.encode(tuple(lam), tuple(mu)), s_power), Fraction(coef))])

    def coefficient(self, lam: tuple[int, ...], mu: tuple[int, ...] = ()) -> dict[int, Fraction]:
        mono = self.encode(tuple(lam), tuple(mu))
        d = self._mono_degree(mono)
        if d > self.N:
            return {}
        return {k: c for (m, k), c in self._deg[d].items() if m == mono}

    def terms(self) -> dict[tuple[tuple[int, ...], tuple[int, ...]], dict[int, Fraction]]:
        out: dict = defaultdict(dict)
        for (m, k), c in self.items():
            out[self.decode(m)][k] = c
        return dict(out)

    def _mono_str(self, mono):
        lam, mu = self.decode(mono)
        return "x[" + ",".join(map(str, lam)) + "]y[" + ",".join(map(str, mu)) + "]"


# ---- text format -----------------------------------------------------------

def _sort_items(f: _Sym):
    return sorted(f.items(), key=lambda kv: (f._mono_degree(kv[0][0]), kv[0][0], kv[0][1]))


def to_text(f: _Sym) -> str:
    """Render as ``c * s^k * p[2,1] + ... + O(N+1)``; exact round trip via :func:`parse`."""
    parts = []
    for (mono, k), c in _sort_items(f):
        factors = [str(c)]
        if k:
            factors.append(_laurent_str(k))
        factors.append(f._mono_str(mono))
        parts.append(" * ".join(factors))
    body = " + ".join(parts) if parts else "0"
    return f"{body} + O({f.N + 1})"


_TERM = re.compile(r"^\s*(-?\d+(?:/\d+)?)\s*(?:\*\s*s(?:\^(-?\d+))?\s*)?\*\s*(p\[[\d,]*\]|x\[[\d,]*\]y\[[\d,]*\])\s*$")


def _split_terms(body: str) -> list[str]:
    # split on " + " only: coefficients carry their own sign
    return [t for t in body.split(" + ") if t.strip()]


def _parts(text: str) -> tuple[int, ...]:
    inner = text[text.index("[") + 1 : text.index("]")]
    return tuple(int(x) for x in inner.split(",") if x)


def parse(text: str) -> SymA | SymB:
    """Inverse of :func:`to_text`."""
    text = text.strip()
    mo = re.search(r"\+?\s*O\((\d+)\)\s*$", text)
    if not mo:
        raise ValueError("missing truncation marker O(N+1)")
    N = int(mo.group(1)) - 1
    body = text[: mo.start()].strip()
    kind = None
    items = []
    if body not in ("", "0"):
        for term in _split_terms(body):
            tm = _TERM.match(term)
            if not tm:
                raise ValueError(f"cannot parse term {term!r}")
            c = Fraction(tm.group(1))
            k = 0
            if "* s" in term or "*s" in term:
                k = int(tm.group(2)) if tm.group(2) is not None else 1
            mono_text = tm.group(3)
            if mono_text.startswith("p"):
                this, mono = "A", _parts(mono_text)
            else:
                xs, ys = mono_text.split("y")
                this, mono = "B", SymB.encode(_parts(xs), _parts("y" + ys))
            if kind is None:
                kind = this
            elif kind != this:
                raise ValueError("mixed p and x/y terms")
            items.append(((mono, k), c))
    cls = SymB if kind == "B" else SymA
    return cls._raw(N, items)


# ---- sign involution ---------------------------------------------------------

def tilde_A(f: SymA) -> SymA:
    """p_i -> (-1)^(i-1) p_i."""
    out = []
    for b in f._deg:
        out.append({(m, k): (-v if (sum(m) - len(m)) & 1 else v) for (m, k), v in b.items()})
    return SymA(f.N, out)


def _tilde_b_sign(mono: tuple[int, ...]) -> int:
    sgn = 1
    for c in mono:
        i = c >> 1
        # x_i -> (-1)^(i-1), y_i -> (-1)^i
        if (i - 1 + (c & 1)) & 1:
            sgn = -sgn
    return sgn


def tilde_B(f: SymB) -> SymB:
    """x_i -> (-1)^(i-1) x_i and y_i -> (-1)^i y_i."""
    return SymB(f.N, [{(m, k): v * _tilde_b_sign(m) for (m, k), v in b.items()} for b in f._deg])


def tilde(f):
    return tilde_B(f) if isinstance(f, SymB) else tilde_A(f)


def flip_y(f: SymB) -> SymB:
    """y_i -> -y_i (tensoring with the product-of-signs character)."""
    return SymB(f.N, [{(m, k): (-v if sum(c & 1 for c in m) & 1 else v) for (m, k), v in b.items()} for b in f._deg])


# ---- plethysm ----------------------------------------------------------------

def _require_no_constant(g: _Sym) -> None:
    if g._deg[0]:
        raise ConstantTermError("plethysm needs a right-hand input with zero constant term")


def _image_A(m: int, g: SymA) -> SymA:
    """p_m o g: p_j -> p_{mj}, s -> s^m."""
    N = g.N
    out = [dict() for _ in range(N + 1)]
    for d, b in enumerate(g._deg):
        if not b or d * m > N:
            continue
        out[d * m] = {(tuple(m * j for j in mono), m * k): c for (mono, k), c in b.items()}
    return SymA(N, out)


def _image_B(code: int, g: SymA) -> SymB:
    """x_m o g (code even) or y_m o g (code odd), with s -> s^m."""
    m, is_y = code >> 1, code & 1
    N = g.N
    out = [dict() for _ in range(N + 1)]
    for d, b in enumerate(g._deg):
        if not b or d * m > N:
            continue
        bucket = {}
        for (mono, k), c in b.items():
            if is_y:
                new = tuple(sorted((2 * m * j + (j & 1) for j in mono), reverse=True))
            else:
                new = tuple(2 * m * j for j in mono)
            bucket[(new, m * k)] = bucket.get((new, m * k), 0) + c
        out[d * m] = bucket
    return SymB(N, out)


def _plethysm(f: _Sym, g: SymA, image: Callable[[int, SymA], _Sym], target: type) -> _Sym:
    _require_no_constant(g)
    if f.N != g.N:
        raise TruncationMismatchError(f"truncation degrees differ: {f.N} vs {g.N}")
    N = f.N
    gmin = g.min_degree()
    if gmin is None:
        # g == 0: only the constant term of f survives
        return target._raw(N, [((m, k), c) for (m, k), c in f._deg[0].items()])
    images: dict[int, _Sym] = {}
    prefix: dict[tuple[int, ...], _Sym] = {(): target.one(N)}
    acc = target.zero(N)
    for d, bucket in enumerate(f._deg):
        if d * gmin > N:
            break
        for (mono, k), c in sorted(bucket.items()):
            # monomials are decreasing tuples; build products along shared prefixes
            cur = prefix.get(mono)
            if cur is None:
                start = len(mono)
                while mono[:start] not in prefix:
                    start -= 1
                cur = prefix[mono[:start]]
                for i in range(start, len(mono)):
                    part = mono[i]
                    if part not in images:
                        images[part] = image(part, g)
                    cur = cur * images[part]
                    prefix[mono[: i + 1]] = cur
            acc = acc + cur.scale(c, k)
    return acc


def plethysm_A(f: SymA, g: SymA) -> SymA:
    """``f o g`` in Lambda_A; ``f``'s own coefficients are left untouched."""
    return _plethysm(f, g, _image_A, SymA)


def plethysm_B(f: SymB, g: SymA) -> SymB:
    """Right action ``f o g`` of Lambda_A on Lambda_B."""
    return _plethysm(f, g, _image_B, SymB)


def plethysm(f, g: SymA):
    return plethysm_B(f, g) if isinstance(f, SymB) else plethysm_A(f, g)


# ---- series ----------------------------------------------------------------------

def exp_series(L: _Sym) -> _Sym:
    """exp(L) for L with zero constant term, by E_n = (1/n) sum_k k L_k E_{n-k}."""
    _require_no_constant(L)
    N = L.N
    cls = type(L)
    comps = [L.degree_part(d) for d in range(N + 1)]
    E = [cls.one(N)]
    for n in range(1, N + 1):
        acc = cls.zero(N)
        for k in range(1, n + 1):
            if comps[k].is_zero() or E[n - k].is_zero():
                continue
            acc = acc + (comps[k] * E[n - k]).scale(Fraction(k, n))
        E.append(acc)
    out = cls.zero(N)
    for e in E:
        out = out + e
    return out


def _log_exp_A(N: int) -> SymA:
    return SymA._raw(N, [(((m,), 0), Fraction(1, m)) for m in range(1, N + 1)])


def _log_exp_B(N: int) -> SymB:
    items = []
    for m in range(1, N + 1):
        items.append((((2 * m,), 0), Fraction(1, 2 * m)))
        items.append((((2 * m + 1,), 0), Fraction(1, 2 * m)))
    return SymB._raw(N, items)


@lru_cache(maxsize=None)
def Exp(N: int) -> SymA:
    """exp(sum p_m / m); its degree-n part is sum over partitions of p_lam / z_lam."""
    return SymA._raw(N, (((lam, 0), Fraction(1, z_lambda(lam))) for n in range(N + 1) for lam in partitions(n)))


def Cosh(N: int) -> SymA:
    return Exp(N).even_part()


def Sinh(N: int) -> SymA:
    return Exp(N).odd_part()


@lru_cache(maxsize=None)
def Exp_B(N: int) -> SymB:
    """exp(sum (x_m + y_m) / 2m)."""
    return exp_series(_log_exp_B(N))


def Cosh_B(N: int) -> SymB:
    return Exp_B(N).even_part()


def Sinh_B(N: int) -> SymB:
    return Exp_B(N).odd_part()


def mult_inverse(f: _Sym) -> _Sym:
    """Multiplicative inverse of a series with constant term exactly 1."""
    if f._deg[0] != {((), 0): Fraction(1)}:
        raise ConstantTermError("multiplicative inverse needs constant term 1")
    N = f.N
    cls = type(f)
    comps = [f.degree_part(d) for d in range(N + 1)]
    H = [cls.one(N)]
    for n in range(1, N + 1):
        acc = cls.zero(N)
        for k in range(1, n + 1):
            if not comps[k].is_zero() and not H[n - k].is_zero():
                acc = acc - comps[k] * H[n - k]
        H.append(acc)
    out = cls.zero(N)
    for h in H:
        out = out + h
    return out


@lru_cache(maxsize=None)
def Sech_B(N: int) -> SymB:
    return mult_inverse(Cosh_B(N))


def plethystic_inverse(f: SymA) -> SymA:
    """g with f o g = p_1, solved one degree at a time (generic, slow)."""
    _require_no_constant(f)
    N = f.N
    p1 = SymA.p(1, N=N)
    if f.degree_part(1) != p1:
        raise ValueError("plethystic inverse needs degree-1 part equal to p_1")
    g = p1
    for n in range(2, N + 1):
        err = plethysm_A(f, g).degree_part(n)
        g = g - err
    return g


@lru_cache(maxsize=None)
def Arcsinh(N: int) -> SymA:
    """Plethystic inverse of Sinh, by a recurrence specific to odd series.

    For an odd series g, Exp o g = exp(L) with L = sum_m (p_m o g)/m, and
    Sinh o g is the odd part of exp(L). Writing E = exp(L) degree by degree,
    the unknown g_n enters E_n only through the linear term L_n, so g_n is
    chosen to kill E_n for odd n >= 3; even parts of g vanish.
    """
    g = [SymA.zero(N) for _ in range(N + 1)]
    if N >= 1:
        g[1] = SymA.p(1, N=N)
    L = [SymA.zero(N) for _ in range(N + 1)]
    E = [SymA.one(N)] + [SymA.zero(N) for _ in range(N)]
    for n in range(1, N + 1):
        rest = SymA.zero(N)
        for m in range(2, n + 1):
            if n % m == 0 and not g[n // m].is_zero():
                rest = rest + _image_A(m, g[n // m]).scale(Fraction(1, m))
        conv = SymA.zero(N)
        for k in range(1, n):
            if not L[k].is_zero() and not E[n - k].is_zero():
                conv = conv + (L[k] * E[n - k]).scale(Fraction(k, n))
        if n == 1:
            L[1] = g[1]
            E[1] = g[1]
        elif n % 2:
            g[n] = -(rest + conv)
            L[n] = g[n] + rest
            E[n] = SymA.zero(N)
        else:
            L[n] = rest
            E[n] = L[n] + conv
    out = SymA.zero(N)
    for part in g:
        out = out + part
    return out


def exp_plethysm_A(g: SymA) -> SymA:
    """Exp o g = exp(sum_m (p_m o g)/m), cheaper than plethysm with Exp term by term."""
    _require_no_constant(g)
    N = g.N
    L = SymA.zero(N)
    for m in range(1, N + 1):
        L = L + _image_A(m, g).scale(Fraction(1, m))
    return exp_series(L)


def exp_plethysm_B(g: SymA, tilde_first: bool = False) -> SymB:
    """Exp_B o g (or Exp_B~ o g) via exp(sum_m (x_m o g + y_m o g)/2m)."""
    _require_no_constant(g)
    N = g.N
    L = SymB.zero(N)
    for m in range(1, N + 1):
        cx, cy = Fraction(1, 2 * m), Fraction(1, 2 * m)
        if tilde_first:
            cx *= (-1) ** (m - 1)
            cy *= (-1) ** m
        L = L + _image_B(2 * m, g).scale(cx) + _image_B(2 * m + 1, g).scale(cy)
    return exp_series(L)


# ---- specialization ----------------------------------------------------------------

Target = tuple[str, int]


def specialize(f: _Sym, rule: Callable[[str, int], tuple[Fraction, Target]]):
    """Ring-homomorphic substitution of generators.

    ``rule(name, i)`` gets ``("p", i)``, ``("x", i)`` or ``("y", i)`` and returns
    ``(coef, target)`` where ``target`` is ``("p", j)`` (a Lambda_A generator)
    or ``("x", e)`` (the e-th power of a single variable ``x``). The result is a
    SymA when every target is a power sum, else a dict ``{(x_exp, s_exp): coef}``.
    """
    is_b = isinstance(f, SymB)
    images = {}
    poly = False
    for (mono, _), _c in f.items():
        for code in mono:
            if code not in images:
                name, i = (("y" if code & 1 else "x"), code >> 1) if is_b else ("p", code)
                coef, target = rule(name, i)
                images[code] = (Fraction(coef), target)
                poly = poly or target[0] == "x"
    if not poly:
        items = []
        for (mono, k), c in f.items():
            coef = c
            parts = []
            for code in mono:
                cc, (_, j) = images[code]
                coef *= cc
                parts.append(j)
            items.append(((tuple(sorted(parts, reverse=True)), k), coef))
        return SymA._raw(f.N, items)
    out: dict[tuple[int, int], Fraction] = defaultdict(Fraction)
    for (mono, k), c in f.items():
        coef = c
        e = 0
        for code in mono:
            cc, (kind, j) = images[code]
            if kind != "x":
                raise ValueError("cannot mix power-sum and single-variable targets")
            coef *= cc
            e += j
        out[(e, k)] += coef
    return {key: v for key, v in out.items() if v}


def to_gamma_invariant(f: SymB) -> SymA:
    """x_i, y_i -> p_i."""
    return specialize(f, lambda name, i: (1, ("p", i)))


def to_gamma_prod(f: SymB) -> SymA:
    """x_i -> p_i, y_i -> -p_i."""
    return specialize(f, lambda name, i: (-1 if name == "y" else 1, ("p", i)))


def power_specialize(f: SymA) -> dict[tuple[int, int], Fraction]:
    """p_i -> x^i; returns ``{(x_exp, s_exp): coef}``."""
    return specialize(f, lambda name, i: (1, ("x", i)))


def s_times_p1(N: int) -> SymA:
    return SymA.p(1, N=N, s_power=1)


# ---- irreducible characters (testing utility) ------------------------------------------

def _beta(lam: tuple[int, ...], length: int) -> tuple[int, ...]:
    lam = lam + (0,) * (length - len(lam))
    return tuple(lam[i] + length - 1 - i for i in range(length))


@lru_cache(maxsize=None)
def _mn(beta: frozenset, rho: tuple[int, ...]) -> int:
    if not rho:
        return 1
    r, rest = rho[0], rho[1:]
    total = 0
    for b in beta:
        if b - r >= 0 and b - r not in beta:
            between = sum(1 for c in beta if b - r < c < b)
            total += (-1) ** between * _mn(beta - {b} | {b - r}, rest)
    return total


def sn_character(lam: tuple[int, ...], rho: tuple[int, ...]) -> int:
    """Irreducible S_n character chi^lam at cycle type rho (Murnaghan-Nakayama)."""
    if sum(lam) != sum(rho):
        raise ValueError("partition sizes differ")
    length = len(lam) + 1
    return _mn(frozenset(_beta(tuple(lam), length)), tuple(sorted(rho, reverse=True)))


def schur_expansion_A(f: SymA, n: int) -> dict[tuple[int, ...], Fraction]:
    """<f_n, s_lam> for the degree-n part of f (must have no s)."""
    terms = f._deg[n]
    if any(k for (_, k) in terms):
        raise ValueError("Schur expansion needs s-free coefficients")
    out = {}
    for lam in partitions(n):
        out[lam] = sum((c * sn_character(lam, m) for (m, _), c in terms.items()), Fraction(0))
    return out


@lru_cache(maxsize=None)
def _schur_power(lam: tuple[int, ...]) -> dict[tuple[int, ...], Fraction]:
    n = sum(lam)
    return {rho: Fraction(sn_character(lam, rho), z_lambda(rho)) for rho in partitions(n)}


@lru_cache(maxsize=None)
def b_irreducible(alpha: tuple[int, ...], beta: tuple[int, ...]) -> SymB:
    """ch of the W(B_n) irreducible indexed by (alpha, beta).

    s_alpha with p_r -> (x_r + y_r)/2 times s_beta with p_r -> (x_r - y_r)/2.
    """
    n = sum(alpha) + sum(beta)

    def sub(lam, sign):
        acc = SymB.zero(n)
        for rho, c in _schur_power(lam).items():
            if not c:
                continue
            term = SymB.scalar(c, n)
            for r in rho:
                term = term * (SymB.xy((r,), (), N=n, coef=Fraction(1, 2)) + SymB.xy((), (r,), N=n, coef=Fraction(sign, 2)))
            acc = acc + term
        return acc

    return sub(tuple(alpha), 1) * sub(tuple(beta), -1)


def b_centralizer(lam: tuple[int, ...], mu: tuple[int, ...]) -> int:
    return 2 ** len(lam) * z_lambda(tuple(lam)) * 2 ** len(mu) * z_lambda(tuple(mu))


def inner_B(f: SymB, g: SymB, n: int) -> Fraction:
    """Character inner product of the degree-n parts (s-free)."""
    a, b = f._deg[n], g._deg[n]
    total = Fraction(0)
    for (m, k), c in a.items():
        if k:
            raise ValueError("inner product needs s-free coefficients")
        d = b.get((m, 0))
        if d:
            lam, mu = SymB.decode(m)
            total += c * d * b_centralizer(lam, mu)
    return total


def inner_A(f: SymA, g: SymA, n: int) -> Fraction:
    a, b = f._deg[n], g._deg[n]
    total = Fraction(0)
    for (m, k), c in a.items():
        if k:
            raise ValueError("inner product needs s-free coefficients")
        d = b.get((m, 0))
        if d:
            total += c * d * z_lambda(m)
    return total


def schur_expansion_B(f: SymB, n: int) -> dict[tuple[tuple[int, ...], tuple[int, ...]], Fraction]:
    """Multiplicities of every W(B_n) irreducible in the degree-n part of f."""
    g = f if f.N == n else f.truncate(n)
    return {(a, b): inner_B(g, b_irreducible(a, b), n) for a, b in bipartitions(n)}
