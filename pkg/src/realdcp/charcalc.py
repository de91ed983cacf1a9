"""Equivariant cohomology characters of the real wonderful models of types A, B, D.

Each graded character is read off a generating function in the completed
symmetric-function rings of :mod:`realdcp.symfunc`: expand to degree ``n``,
keep the degree-``n`` component and split its coefficients by powers of
``s``, where ``s**(2i)`` carries ``(-1)**i`` times the character of ``H^i``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial

from .flats import ConsistencyError
from .symfunc import (
    Arcsinh,
    Cosh,
    Exp,
    Exp_B,
    SymA,
    SymB,
    _Sym,
    b_centralizer,
    bipartitions,
    exp_plethysm_A,
    exp_plethysm_B,
    flip_y,
    inner_B,
    mult_inverse,
    partitions,
    plethysm_A,
    plethysm_B,
    s_times_p1,
    schur_expansion_A,
    schur_expansion_B,
    specialize,
    tilde_A,
    tilde_B,
    to_gamma_invariant,
    to_gamma_prod,
    z_lambda,
)

ONE_DIM = ("1", "eps", "prod", "eps.prod")


class HalfIntegerError(ConsistencyError):
    """An odd power of s survived in a final answer."""


def _margin(n: int) -> int:
    # two degrees of headroom beyond the degree that is read off
    return n + 2


def _restrict(f: _Sym, n: int) -> _Sym:
    """Homogeneous degree-n part, re-truncated at n."""
    return f.degree_part(n).truncate(n)


def _lift(f: _Sym, N: int) -> _Sym:
    """The same element viewed at a higher truncation (degrees must fit)."""
    out = type(f).zero(N)
    for d in range(min(f.N, N) + 1):
        out._deg[d] = dict(f._deg[d])
    return out


def _split_by_t(f: _Sym, n: int) -> list[_Sym]:
    """Coefficients of (-t)^i in the degree-n part, t = s^2."""
    bucket = f.homogeneous(n)
    odd = sorted({k for (_, k) in bucket if k % 2})
    if odd:
        raise HalfIntegerError(f"odd s-exponents {odd} remain in degree {n}")
    if any(k < 0 for (_, k) in bucket):
        raise HalfIntegerError(f"negative power of t in degree {n}")
    top = max((k // 2 for (_, k) in bucket), default=0)
    cls = type(f)
    out = []
    for i in range(top + 1):
        sgn = -1 if i % 2 else 1
        items = [((m, 0), sgn * c) for (m, k), c in bucket.items() if k == 2 * i]
        out.append(cls._raw(n, items))
    while len(out) > 1 and out[-1].is_zero():
        out.pop()
    return out


@dataclass
class GradedCh:
    """Frobenius characteristics of H^0, H^1, ... (one homogeneous entry per degree)."""

    n: int
    kind: str  # "A", "B" or "D"
    per_degree: list[_Sym] = field(default_factory=list)

    def dims(self) -> list[int]:
        return [dimension(f, self.n) for f in self.per_degree]

    def __getitem__(self, i: int) -> _Sym:
        if 0 <= i < len(self.per_degree):
            return self.per_degree[i]
        zero = SymA if self.kind == "A" else SymB
        return zero.zero(self.n)

    def __len__(self) -> int:
        return len(self.per_degree)


def dimension(f: _Sym, n: int) -> int:
    """Degree of the representation whose characteristic is the degree-n part of f."""
    if isinstance(f, SymB):
        c = f.coefficient((1,) * n).get(0, Fraction(0))
        d = c * 2**n * factorial(n)
    else:
        c = f.coefficient((1,) * n).get(0, Fraction(0))
        d = c * factorial(n)
    if d.denominator != 1:
        raise ConsistencyError(f"non-integral dimension {d}")
    return int(d)


# ---- the two generating functions ------------------------------------------------

@lru_cache(maxsize=None)
def arcsinh_tilde_sp1(N: int) -> SymA:
    """Arcsinh~ o s p_1: the coefficient of p_lam picks up s^|lam|."""
    return plethysm_A(tilde_A(Arcsinh(N)), s_times_p1(N))


@lru_cache(maxsize=None)
def typeA_series(N: int) -> SymA:
    """Exp o s^-1 Arcsinh~ o s p_1, truncated at N."""
    return exp_plethysm_A(arcsinh_tilde_sp1(N).scale(1, -1))


@lru_cache(maxsize=None)
def sech_b_tilde_factor(N: int) -> SymB:
    """Sech_B~ o Arcsinh~ o s p_1 = 1 / (even part of Exp_B~ o Arcsinh~ o s p_1).

    Plethysm with a series of odd degrees preserves degree parity, so the
    even part may be taken after the substitution.
    """
    return mult_inverse(exp_plethysm_B(arcsinh_tilde_sp1(N), tilde_first=True).even_part())


@lru_cache(maxsize=None)
def typeB_series(N: int) -> SymB:
    """(Sech_B~ o Arcsinh~ o s p_1)(Exp_B o s^-1 Arcsinh~ o s p_1), truncated at N."""
    a = arcsinh_tilde_sp1(N)
    return sech_b_tilde_factor(N) * exp_plethysm_B(a.scale(1, -1))


def typeB_series_generic(N: int) -> SymB:
    """The same product built with term-by-term plethysm (slower, for cross-checks)."""
    a = arcsinh_tilde_sp1(N)
    sech = tilde_B(mult_inverse(Exp_B(N).even_part()))
    return plethysm_B(sech, a) * plethysm_B(Exp_B(N), a.scale(1, -1))


@lru_cache(maxsize=None)
def typeA_graded_ch(n: int) -> GradedCh:
    """Characters of S_n on H^i of the model of type A_{n-1}.

    ``n = 1`` gives the single entry p_1 in degree 0 (the term ``1 + p_1``).
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    series = typeA_series(_margin(n))
    return GradedCh(n, "A", _split_by_t(series, n))


@lru_cache(maxsize=None)
def typeB_graded_ch(n: int) -> GradedCh:
    """Characters of W(B_n) on H^i of the model of type B_n (``n = 0`` gives [1])."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if n == 0:
        return GradedCh(0, "B", [SymB.one(0)])
    series = typeB_series(_margin(n))
    return GradedCh(n, "B", _split_by_t(series, n))


def one_dim_ch(n: int, which: str) -> SymB:
    """Characteristic of a one-dimensional character of W(B_n), truncated at n."""
    if which not in ONE_DIM:
        raise ValueError(f"unknown character {which!r}; expected one of {ONE_DIM}")
    triv = _restrict(Exp_B(n), n)
    if which == "1":
        return triv
    if which == "eps":
        return tilde_B(triv)
    if which == "prod":
        return flip_y(triv)
    return flip_y(tilde_B(triv))


@lru_cache(maxsize=None)
def typeD_graded_ch(n: int) -> GradedCh:
    """Characters of W(B_n) on H^i of the model of type D_n.

    Obtained by removing the induced piece from B_{n-2} in each degree; every
    entry must still be a genuine character.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    bn = typeB_graded_ch(n)
    bn2 = typeB_graded_ch(n - 2)
    eps2 = _lift(one_dim_ch(2, "eps"), n)
    out = []
    for i in range(len(bn)):
        term = bn[i]
        if i >= 1 and i - 1 < len(bn2):
            term = term - _lift(bn2[i - 1], n) * eps2
        out.append(term)
    # trailing zero entries are kept: for n = 2 the formula itself reads (1, 0)
    for i, f in enumerate(out):
        for label, mult in schur_expansion_B(f, n).items():
            if mult < 0 or mult.denominator != 1:
                raise ConsistencyError(f"D{n} H^{i}: multiplicity {mult} of irreducible {label}")
    return GradedCh(n, "D", out)


def _strip(entries: list[_Sym]) -> list[_Sym]:
    while len(entries) > 1 and entries[-1].is_zero():
        entries.pop()
    return entries


def gamma_invariant_ch(n: int) -> GradedCh:
    """S_n-characters of the invariants of the sign-change subgroup."""
    return GradedCh(n, "A", _strip([to_gamma_invariant(f) for f in typeB_graded_ch(n).per_degree]))


def gamma_prod_ch(n: int) -> GradedCh:
    """S_n-characters of the prod-isotypic part under the sign-change subgroup."""
    return GradedCh(n, "A", _strip([to_gamma_prod(f) for f in typeB_graded_ch(n).per_degree]))


@lru_cache(maxsize=None)
def gamma_prod_series(N: int) -> SymA:
    """Sech~ o Arcsinh~ o s p_1 in Lambda_A."""
    return plethysm_A(tilde_A(mult_inverse(Cosh(N))), arcsinh_tilde_sp1(N))


# ---- class functions -------------------------------------------------------------------

@dataclass
class BClassFunction:
    """Values of a class function of W(B_n) on classes (positive cycles, negative cycles)."""

    n: int
    values: dict[tuple[tuple[int, ...], tuple[int, ...]], Fraction]

    def __getitem__(self, cls):
        return self.values[cls]

    def __eq__(self, other) -> bool:
        return isinstance(other, BClassFunction) and self.n == other.n and self.values == other.values

    def __add__(self, other: BClassFunction) -> BClassFunction:
        return BClassFunction(self.n, {c: v + other.values[c] for c, v in self.values.items()})

    def __sub__(self, other: BClassFunction) -> BClassFunction:
        return BClassFunction(self.n, {c: v - other.values[c] for c, v in self.values.items()})

    def scale(self, c) -> BClassFunction:
        return BClassFunction(self.n, {k: v * c for k, v in self.values.items()})

    def inner(self, other: BClassFunction) -> Fraction:
        return sum((v * other.values[c] / b_centralizer(*c) for c, v in self.values.items()), Fraction(0))

    @property
    def dimension(self) -> Fraction:
        return self.values[((1,) * self.n, ())]


def class_function(ch: SymB, n: int) -> BClassFunction:
    """Character values from the degree-n part of ``ch`` (s-free)."""
    vals = {}
    for lam, mu in bipartitions(n):
        c = ch.coefficient(lam, mu)
        if any(k for k in c):
            raise ValueError("class function needs s-free coefficients")
        vals[(lam, mu)] = c.get(0, Fraction(0)) * b_centralizer(lam, mu)
    return BClassFunction(n, vals)


def from_class_function(cf: BClassFunction) -> SymB:
    """Inverse of :func:`class_function`."""
    return SymB.from_terms({c: v / b_centralizer(*c) for c, v in cf.values.items() if v}, cf.n)


def class_function_A(ch: SymA, n: int) -> dict[tuple[int, ...], Fraction]:
    return {lam: ch.coefficient(lam).get(0, Fraction(0)) * z_lambda(lam) for lam in partitions(n)}


def euler_character_B(n: int) -> BClassFunction:
    """Alternating sum of the H^i characters, from the generating function at s = 1."""
    if n < 1:
        raise ValueError("n must be >= 1")
    f = typeB_series(_margin(n)).evaluate_s(1)
    return class_function(_restrict(f, n), n)


def euler_character_harmonic(n: int) -> BClassFunction:
    """Same class function via the harmonic mean of two substitutions of Exp o Arcsinh~."""
    N = _margin(n)
    h = exp_plethysm_A(tilde_A(Arcsinh(N)))

    def sub(first_to_y: bool):
        def rule(name, i):
            if i & (i - 1):
                raise ConsistencyError(f"Exp o Arcsinh~ involves p_{i}, not a power of 2")
            return 1, ("p", i)
        spec = specialize(h, rule)
        items = []
        for (m, k), c in spec.items():
            mono = tuple(sorted((2 * j + (1 if (j == 1 and first_to_y) else 0) for j in m), reverse=True))
            items.append(((mono, k), c))
        return SymB._raw(N, items)

    a, b = sub(False), sub(True)
    hm = mult_inverse((mult_inverse(a) + mult_inverse(b)).scale(Fraction(1, 2)))
    return class_function(_restrict(hm, n), n)


def alternating_class_function(g: GradedCh) -> BClassFunction:
    total = None
    for i, f in enumerate(g.per_degree):
        cf = class_function(f, g.n).scale((-1) ** i)
        total = cf if total is None else total + cf
    return total


def euler_vanishing_expected(cls: tuple[tuple[int, ...], tuple[int, ...]]) -> bool:
    """Classes on which the Euler character must vanish."""
    lam, mu = cls
    if any(c & (c - 1) for c in lam + mu):
        return True
    return any(c > 1 for c in mu)


# ---- one-dimensional multiplicities ---------------------------------------------------

def onedim_closed_form_B(n: int, which: str, i: int) -> int:
    if which == "1":
        return int(i == 0)
    if which == "eps.prod":
        return int(n % 3 != 2 and i == n // 3)
    if which == "prod":
        return 0
    return int(n % 2 == 0 and i == n // 2)


def onedim_closed_form_D(n: int, which: str, i: int) -> int:
    if which == "eps":
        return 0
    return onedim_closed_form_B(n, which, i)


def onedim_closed_form_D_restricted(n: int, which: str, i: int) -> int:
    """Multiplicities as W(D_n)-characters (only 1 and eps are distinct there)."""
    if which == "1":
        return int(i == 0)
    if which == "eps":
        return int(n % 3 != 2 and i == n // 3)
    raise ValueError("W(D_n) one-dimensional characters here are 1 and eps")


@dataclass
class MultiplicityTable:
    n: int
    kind: str
    computed: dict[tuple[str, int], int]
    closed_form: dict[tuple[str, int], int]

    @property
    def agree(self) -> bool:
        return self.computed == self.closed_form


def _as_int(x: Fraction, what: str) -> int:
    if x.denominator != 1:
        raise ConsistencyError(f"{what} is not an integer: {x}")
    return int(x)


def one_dim_multiplicities(n: int, kind: str = "B", check: bool = True) -> MultiplicityTable:
    """<H^i, chi> for the four one-dimensional characters of W(B_n).

    ``kind = "D"`` uses the model of type D_n, still as W(B_n)-representations;
    ``kind = "D/WD"`` restricts to W(D_n) and reports characters 1 and eps.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    g = typeB_graded_ch(n) if kind == "B" else typeD_graded_ch(n)
    top = max(len(g), n // 2 + 1)
    computed, closed = {}, {}
    if kind == "D/WD":
        chars = {"1": ("1", "prod"), "eps": ("eps", "eps.prod")}
        for which, pair in chars.items():
            for i in range(top):
                val = sum(inner_B(g[i], one_dim_ch(n, c), n) for c in pair)
                computed[(which, i)] = _as_int(val, f"<H^{i}, {which}>")
                closed[(which, i)] = onedim_closed_form_D_restricted(n, which, i)
    else:
        form = onedim_closed_form_B if kind == "B" else onedim_closed_form_D
        for which in ONE_DIM:
            chi = one_dim_ch(n, which)
            for i in range(top):
                computed[(which, i)] = _as_int(inner_B(g[i], chi, n), f"<H^{i}, {which}>")
                closed[(which, i)] = form(n, which, i)
    table = MultiplicityTable(n, kind, computed, closed)
    if check and not table.agree:
        bad = sorted(k for k in computed if computed[k] != closed[k])
        raise ConsistencyError(f"{kind}{n}: one-dimensional multiplicities disagree at {bad}")
    return table


# ---- degree-one induction formulas -----------------------------------------------------

def _h(n: int, N: int) -> SymA:
    return _lift(_restrict(Exp(n), n), N) if n >= 0 else SymA.zero(N)


def _e(n: int, N: int) -> SymA:
    return _lift(tilde_A(_restrict(Exp(n), n)), N)


def _hB(n: int, N: int) -> SymB:
    return _lift(_restrict(Exp_B(n), n), N)


def h1_induction_ch(n: int, kind: str) -> _Sym:
    """Induced characters describing H^1, built by multiplication of characteristics.

    A: S_{n+1} character induced from S_{n-2} x S_3 (trivial times sign).
    B: from W(B_{n-2}) x W(B_2) (trivial times eps), plus from
       W(B_{n-3}) x {+-1} x S_3 (trivial, trivial, sign).
    D: the second summand only.
    """
    if kind == "A":
        if n < 3:
            raise ValueError("type A needs n >= 3")
        N = n + 1
        return _h(n - 2, N) * _e(3, N)
    if kind not in ("B", "D"):
        raise ValueError("kind must be A, B or D")
    if n < (2 if kind == "B" else 3):
        raise ValueError(f"type {kind} needs n >= {2 if kind == 'B' else 3}")
    N = n
    total = SymB.zero(N)
    if kind == "B":
        total = total + _hB(n - 2, N) * _lift(one_dim_ch(2, "eps"), N)
    if n >= 3:
        # {+-1} x S_3 with -1 acting as the central element, S_3 by sign:
        # (x_1 + y_1)/2 composed with e_3
        e3 = _restrict(tilde_A(Exp(3)), 3)
        core = plethysm_B(SymB.xy((1,), (), N=3, coef=Fraction(1, 2)) + SymB.xy((), (1,), N=3, coef=Fraction(1, 2)), e3)
        total = total + _hB(n - 3, N) * _lift(core, N)
    return total


def check_h1_induction(n: int, kind: str) -> bool:
    ind = h1_induction_ch(n, kind)
    if kind == "A":
        ref = typeA_graded_ch(n + 1)[1]
    elif kind == "B":
        ref = typeB_graded_ch(n)[1]
    else:
        ref = typeD_graded_ch(n)[1]
    if ind != ref:
        raise ConsistencyError(f"H^1 induction formula for {kind}{n} disagrees with the generating function")
    return True


# ---- positivity -------------------------------------------------------------------------

def irreducible_multiplicities(g: GradedCh) -> list[dict]:
    if g.kind == "A":
        return [schur_expansion_A(f, g.n) for f in g.per_degree]
    return [schur_expansion_B(f, g.n) for f in g.per_degree]


def is_genuine(g: GradedCh) -> bool:
    return all(m >= 0 and m.denominator == 1 for table in irreducible_multiplicities(g) for m in table.values())


# ---- reports ---------------------------------------------------------------------------------

def _label(cls) -> str:
    lam, mu = cls
    return "(" + ",".join(map(str, lam)) + "|" + ",".join(map(str, mu)) + ")"


def character_report(n: int, kind: str) -> dict:
    """JSON-ready report: Betti numbers, characteristics, class table, multiplicities, checks."""
    from .symfunc import to_text

    if kind == "A":
        g = typeA_graded_ch(n + 1)
    elif kind == "B":
        g = typeB_graded_ch(n)
    elif kind == "D":
        g = typeD_graded_ch(n)
    else:
        raise ValueError("character reports exist for types A, B and D")
    report: dict = {"n": n, "type": f"{kind}{n}", "betti": g.dims(), "per_degree": [to_text(f) for f in g.per_degree]}
    checks: dict[str, str] = {"genuine_characters": "pass" if is_genuine(g) else "fail"}
    if kind == "A":
        report["class_table"] = {
            f"H{i}": {"(" + ",".join(map(str, lam)) + ")": str(v) for lam, v in class_function_A(f, g.n).items()}
            for i, f in enumerate(g.per_degree)
        }
    else:
        report["class_table"] = {
            f"H{i}": {_label(c): str(v) for c, v in class_function(f, n).values.items()}
            for i, f in enumerate(g.per_degree)
        }
        if n >= 2:
            t = one_dim_multiplicities(n, kind, check=False)
            report["multiplicities"] = {f"{w},H{i}": v for (w, i), v in sorted(t.computed.items())}
            checks["one_dim_closed_forms"] = "pass" if t.agree else "fail"
        if kind == "B" and n >= 1:
            ok = euler_character_B(n) == alternating_class_function(g)
            checks["euler_character"] = "pass" if ok else "fail"
    report["checks"] = checks
    return report


def lefschetz_from_characters(n: int) -> int:
    """Sum of dims alternating, for the Euler characteristic of the B_n model."""
    return sum((-1) ** i * d for i, d in enumerate(typeB_graded_ch(n).dims()))


def binomial_h1_dim(n: int) -> int:
    return comb(n, 2) + 4 * comb(n, 3)
