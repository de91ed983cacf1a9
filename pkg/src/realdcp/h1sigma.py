"""An explicit basis of H^1 for the type-B model, with the group action and sigma.

Basis vectors are ``Nu(i, j)`` for ``i < j`` and ``Omega(i, j, k, phi)`` for
``i < j < k`` with a sign vector ``phi`` on ``(i, j, k)`` normalized so that
``phi[0] == +1``. Indices are 1-based. Raw symbols are brought to this form
by :func:`nu` and :func:`omega`, which track the signs coming from reordering
indices (``nu(j, i) = -nu(i, j)``; permuting the three indices of an omega
multiplies by the sign of the permutation; ``phi`` and ``-phi`` agree).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial

from .charcalc import BClassFunction, class_function, typeB_graded_ch, typeD_graded_ch
from .flats import ConsistencyError
from .linalg import int_rank
from .symfunc import bipartitions


@dataclass(frozen=True, order=True)
class Nu:
    i: int
    j: int


@dataclass(frozen=True, order=True)
class Omega:
    i: int
    j: int
    k: int
    phi: tuple[int, int, int]


H1Basis = Nu | Omega
H1Vector = dict  # H1Basis -> Fraction, zero coefficients not stored


def _perm_sign(seq) -> int:
    sgn = 1
    seq = list(seq)
    for a in range(len(seq)):
        for b in range(a + 1, len(seq)):
            if seq[a] > seq[b]:
                sgn = -sgn
    return sgn


def nu(i: int, j: int) -> tuple[int, Nu]:
    """(sign, basis element) for the raw symbol nu_ij."""
    if i == j:
        raise ValueError("nu needs distinct indices")
    return (1, Nu(i, j)) if i < j else (-1, Nu(j, i))


def omega(idx: tuple[int, int, int], phi: tuple[int, int, int]) -> tuple[int, Omega]:
    """(sign, basis element) for omega with indices ``idx`` and signs ``phi`` on them."""
    if len(set(idx)) != 3:
        raise ValueError("omega needs three distinct indices")
    order = sorted(range(3), key=lambda a: idx[a])
    sgn = _perm_sign(idx)
    sidx = tuple(idx[a] for a in order)
    sphi = tuple(phi[a] for a in order)
    if sphi[0] < 0:
        sphi = tuple(-x for x in sphi)
    return sgn, Omega(*sidx, sphi)


def basis(n: int) -> list[H1Basis]:
    out: list[H1Basis] = [Nu(i, j) for i, j in itertools.combinations(range(1, n + 1), 2)]
    for i, j, k in itertools.combinations(range(1, n + 1), 3):
        for b, c in itertools.product((1, -1), repeat=2):
            out.append(Omega(i, j, k, (1, b, c)))
    return out


def _add(v: dict, key, c) -> None:
    w = v.get(key, 0) + c
    if w:
        v[key] = w
    else:
        v.pop(key, None)


@dataclass(frozen=True)
class SignedPerm:
    """The element (eps_1, ..., eps_n) w of W(B_n): permute by w, then change signs.

    ``perm[a - 1] = w(a)``.
    """

    signs: tuple[int, ...]
    perm: tuple[int, ...]

    def __post_init__(self):
        n = len(self.perm)
        if len(self.signs) != n or sorted(self.perm) != list(range(1, n + 1)) or any(s not in (1, -1) for s in self.signs):
            raise ValueError("not a signed permutation")

    @property
    def n(self) -> int:
        return len(self.perm)

    def w(self, a: int) -> int:
        return self.perm[a - 1]

    def eps(self, a: int) -> int:
        return self.signs[a - 1]

    def __mul__(self, other: SignedPerm) -> SignedPerm:
        # (e, w)(e', w') = (e * w(e'), w w') with w(e')_k = e'_{w^-1 k}
        n = self.n
        inv = [0] * (n + 1)
        for a in range(1, n + 1):
            inv[self.w(a)] = a
        signs = tuple(self.eps(k) * other.eps(inv[k]) for k in range(1, n + 1))
        perm = tuple(self.w(other.w(a)) for a in range(1, n + 1))
        return SignedPerm(signs, perm)

    @classmethod
    def identity(cls, n: int) -> SignedPerm:
        return cls((1,) * n, tuple(range(1, n + 1)))


def act_basis(g: SignedPerm, b: H1Basis) -> tuple[int, H1Basis]:
    if isinstance(b, Nu):
        wi, wj = g.w(b.i), g.w(b.j)
        sgn, out = nu(wi, wj)
        return sgn * g.eps(wi) * g.eps(wj), out
    idx = (g.w(b.i), g.w(b.j), g.w(b.k))
    phi = tuple(g.eps(t) * p for t, p in zip(idx, b.phi))
    return omega(idx, phi)


def act_wbn(g: SignedPerm, v: H1Vector) -> H1Vector:
    out: dict = {}
    for b, c in v.items():
        sgn, b2 = act_basis(g, b)
        _add(out, b2, sgn * c)
    return out


def sigma_basis(b: H1Basis) -> H1Vector:
    if isinstance(b, Nu):
        return {b: Fraction(-1)}
    out: dict = {b: Fraction(1)}
    pi, pj, pk = b.phi
    for (a1, p1), (a2, p2) in (((b.i, pi), (b.j, pj)), ((b.j, pj), (b.k, pk)), ((b.k, pk), (b.i, pi))):
        sgn, key = nu(a1, a2)
        _add(out, key, -p1 * p2 * sgn)
    return out


def act_sigma(v: H1Vector) -> H1Vector:
    out: dict = {}
    for b, c in v.items():
        for b2, c2 in sigma_basis(b).items():
            _add(out, b2, c * c2)
    return out


def omega_tilde(b: Omega) -> H1Vector:
    """omega minus half of its nu-corrections; fixed by sigma."""
    out: dict = {b: Fraction(1)}
    pi, pj, pk = b.phi
    for (a1, p1), (a2, p2) in (((b.i, pi), (b.j, pj)), ((b.j, pj), (b.k, pk)), ((b.k, pk), (b.i, pi))):
        sgn, key = nu(a1, a2)
        _add(out, key, Fraction(-p1 * p2 * sgn, 2))
    return out


def _matrix(n: int, op) -> list[list[int]]:
    """Integer matrix of a linear map on the basis (columns = images)."""
    bs = basis(n)
    pos = {b: a for a, b in enumerate(bs)}
    m = [[0] * len(bs) for _ in bs]
    for col, b in enumerate(bs):
        for b2, c in op({b: Fraction(1)}).items():
            if Fraction(c).denominator != 1:
                raise ConsistencyError("non-integral matrix entry")
            m[pos[b2]][col] = int(c)
    return m


def sigma_spectrum(n: int) -> tuple[int, int, int]:
    """(dim of +1 eigenspace, dim of -1 eigenspace, trace) of sigma on H^1."""
    if n < 2:
        raise ValueError("n must be >= 2")
    s = _matrix(n, act_sigma)
    size = len(s)
    minus = [[s[a][b] - (a == b) for b in range(size)] for a in range(size)]
    plus = [[s[a][b] + (a == b) for b in range(size)] for a in range(size)]
    dim_plus = size - int_rank(minus)
    dim_minus = size - int_rank(plus)
    if dim_plus + dim_minus != size:
        raise ConsistencyError("sigma is not diagonalizable with eigenvalues +-1")
    return dim_plus, dim_minus, sum(s[a][a] for a in range(size))


def lefschetz_sigma(n: int) -> int:
    """Alternating sum of traces of sigma on all cohomology (closed form)."""
    if n < 2:
        raise ValueError("n must be >= 2")
    if n % 2:
        return 0
    h = n // 2
    return (-1) ** (h - 1) * factorial(n) * factorial(n - 2) // (factorial(h) * factorial(h - 1))


def class_representative(lam: tuple[int, ...], mu: tuple[int, ...]) -> SignedPerm:
    """Consecutive cycles; each negative cycle gets one sign change."""
    n = sum(lam) + sum(mu)
    perm = [0] * n
    signs = [1] * n
    start = 1
    for cyc, negative in [(c, False) for c in lam] + [(c, True) for c in mu]:
        for a in range(cyc):
            perm[start + a - 1] = start + (a + 1) % cyc
        if negative:
            signs[start - 1] = -1
        start += cyc
    return SignedPerm(tuple(signs), tuple(perm))


def _trace(n: int, g: SignedPerm, then_sigma: bool = False) -> int:
    tr = 0
    for b in basis(n):
        v = act_wbn(g, {b: Fraction(1)})
        if then_sigma:
            v = act_sigma(v)
        tr += v.get(b, 0)
    return int(tr)


def h1_character(n: int) -> BClassFunction:
    """Character of W(B_n) on the span of the basis."""
    if n < 2:
        raise ValueError("n must be >= 2")
    return BClassFunction(n, {c: Fraction(_trace(n, class_representative(*c))) for c in bipartitions(n)})


def sigma_fixed_character(n: int) -> BClassFunction:
    """Character of W(B_n) on the sigma-fixed subspace: (tr g + tr g sigma) / 2."""
    return BClassFunction(
        n,
        {
            c: Fraction(_trace(n, class_representative(*c)) + _trace(n, class_representative(*c), True), 2)
            for c in bipartitions(n)
        },
    )


def check_h1(n: int) -> dict[str, bool]:
    """Compare the explicit model with the generating-function characters."""
    from .charcalc import h1_induction_ch

    chi = h1_character(n)
    out = {
        "dimension": chi.dimension == comb(n, 2) + 4 * comb(n, 3),
        "matches_generating_function": chi == class_function(typeB_graded_ch(n)[1], n),
        "matches_induction": chi == class_function(h1_induction_ch(n, "B"), n),
        "sigma_spectrum": sigma_spectrum(n)[:2] == (4 * comb(n, 3), comb(n, 2)),
    }
    if n >= 3:
        out["sigma_fixed_is_type_D"] = sigma_fixed_character(n) == class_function(typeD_graded_ch(n)[1], n)
    return out


def random_signed_perm(n: int, rng) -> SignedPerm:
    perm = list(range(1, n + 1))
    rng.shuffle(perm)
    return SignedPerm(tuple(rng.choice((1, -1)) for _ in range(n)), tuple(perm))


def generators(n: int) -> list[SignedPerm]:
    """Simple reflections of W(B_n): adjacent transpositions and a sign change."""
    gens = []
    for a in range(1, n):
        perm = list(range(1, n + 1))
        perm[a - 1], perm[a] = perm[a], perm[a - 1]
        gens.append(SignedPerm((1,) * n, tuple(perm)))
    gens.append(SignedPerm((-1,) + (1,) * (n - 1), tuple(range(1, n + 1))))
    return gens
