"""Flats of a reflection arrangement and the even-parabolic poset.

A flat is stored as the set of positive roots lying in a root-spanned
subspace (equivalently, a parabolic subgroup). The even poset consists of
the flats all of whose irreducible components have even rank, ordered by
inclusion. It is enumerated level by level: the upper covers of a flat ``X``
are the even flats of rank ``rk X + 2`` containing ``X``, found as the
rank-2 flats of the root configuration reduced modulo ``span X``.
"""

from __future__ import annotations

import itertools
import json
import logging
from collections.abc import Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial
from pathlib import Path

import numpy as np

from .linalg import as_field, field_rank, int_rank, reduce_mod, rref
from .rootsys import CoxeterType, RootSystem, build_root_system, dot
from .scalar import Scalar

log = logging.getLogger(__name__)

FORMAT_VERSION = 1
DEFAULT_ELEMENT_CAP = 10**8


class ResourceLimitError(RuntimeError):
    """Enumeration exceeded the configured element cap."""

    def __init__(self, message: str, level_counts: list[int]):
        super().__init__(message)
        self.level_counts = level_counts


class ConsistencyError(AssertionError):
    """Two computations that must agree did not."""


class SignViolationError(ConsistencyError):
    pass


def _bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


@dataclass(frozen=True)
class Flat:
    """A closed set of positive roots with its irreducible decomposition."""

    roots: tuple[int, ...]
    rank: int
    components: tuple[tuple[tuple[int, ...], int], ...]

    @property
    def mask(self) -> int:
        m = 0
        for i in self.roots:
            m |= 1 << i
        return m

    @property
    def is_even(self) -> bool:
        return all(r % 2 == 0 for _, r in self.components)

    @property
    def component_ranks(self) -> tuple[int, ...]:
        return tuple(sorted((r for _, r in self.components), reverse=True))


class _Geometry:
    """Exact span/rank machinery for one root system.

    Crystallographic types (all coordinates rational) go through an int64
    numpy path; Q(sqrt 5) types use Scalar arithmetic throughout.
    """

    def __init__(self, rs: RootSystem):
        self.rs = rs
        self.n = rs.n_positive
        self.roots_field = [[as_field(x) for x in r] for r in rs.positive_roots]
        self.intmat = rs.integer_matrix
        if self.intmat is not None:
            self.introws = [[int(x) for x in row] for row in self.intmat]
        nbr = [0] * self.n
        for i, a in enumerate(rs.positive_roots):
            for j, b in enumerate(rs.positive_roots):
                if i != j and dot(a, b):
                    nbr[i] |= 1 << j
        self.nbr = nbr
        self.root_bit = [1 << i for i in range(self.n)]
        self._rank_memo: dict[int, int] = {}

    # ---- basic queries -------------------------------------------------
    def rank(self, mask: int) -> int:
        r = self._rank_memo.get(mask)
        if r is None:
            idx = _bits(mask)
            if self.intmat is not None:
                r = int_rank([self.introws[i] for i in idx])
            else:
                r = field_rank([self.roots_field[i] for i in idx])
            if len(self._rank_memo) < 2_000_000:
                self._rank_memo[mask] = r
        return r

    def closure(self, mask: int) -> int:
        idx = _bits(mask)
        if not idx:
            return 0
        basis, piv = rref([[Fraction(x) if not isinstance(x, Scalar) else x for x in self.roots_field[i]] for i in idx])
        out = 0
        for j in range(self.n):
            if mask >> j & 1 or not any(reduce_mod(self.roots_field[j], basis, piv)):
                out |= 1 << j
        return out

    def components(self, mask: int) -> list[int]:
        comps = []
        rest = mask
        while rest:
            low = rest & -rest
            comp = low
            frontier = low
            while frontier:
                grow = 0
                for j in _bits(frontier):
                    grow |= self.nbr[j]
                grow &= mask & ~comp
                comp |= grow
                frontier = grow
            comps.append(comp)
            rest &= ~comp
        return comps

    def is_even(self, mask: int, total_rank: int) -> bool:
        comps = self.components(mask)
        if len(comps) == 1:
            return total_rank % 2 == 0
        return all(self.rank(c) % 2 == 0 for c in comps)

    def flat(self, mask: int) -> Flat:
        comps = sorted(self.components(mask), key=lambda c: tuple(_bits(c)))
        blocks = tuple((tuple(_bits(c)), self.rank(c)) for c in comps)
        return Flat(tuple(_bits(mask)), sum(r for _, r in blocks), blocks)

    # ---- rank-2 flats above a flat ---------------------------------------
    def rank2_above(self, mask: int) -> list[int]:
        """All flats of rank ``rk(mask) + 2`` containing the flat ``mask``."""
        if self.intmat is not None:
            return self._rank2_above_int(mask)
        return self._rank2_above_exact(mask)

    def _rank2_above_int(self, mask: int) -> list[int]:
        R = self.intmat
        idx = _bits(mask)
        outside = np.array([j for j in range(self.n) if not mask >> j & 1], dtype=np.int64)
        if outside.size < 2:
            return []
        if idx:
            basis, piv = rref([[Fraction(x) for x in self.introws[i]] for i in idx])
            den = 1
            for row in basis:
                for x in row:
                    den = den * x.denominator // np.gcd(den, x.denominator)
            E = np.array([[int(x * den) for x in row] for row in basis], dtype=np.int64)
            free = [c for c in range(R.shape[1]) if c not in piv]
            sub = R[outside]
            res = den * sub - sub[:, piv] @ E
            res = res[:, free]
        else:
            res = R[outside]
        g = np.gcd.reduce(np.abs(res), axis=1)
        res = res // g[:, None]
        lead = res[np.arange(res.shape[0]), np.argmax(res != 0, axis=1)]
        res = res * np.sign(lead)[:, None]
        pts, point_of = np.unique(res, axis=0, return_inverse=True)
        point_of = point_of.ravel()
        m = pts.shape[0]
        if m < 2:
            return []
        point_mask = [0] * m
        for j, p in zip(outside.tolist(), point_of.tolist()):
            point_mask[p] |= 1 << j
        I, J = np.triu_indices(m, 1)
        k = pts.shape[1]
        a, b = np.triu_indices(k, 1)
        P = pts[I][:, a] * pts[J][:, b] - pts[I][:, b] * pts[J][:, a]
        g = np.gcd.reduce(np.abs(P), axis=1)
        P = P // g[:, None]
        lead = P[np.arange(P.shape[0]), np.argmax(P != 0, axis=1)]
        P = P * np.sign(lead)[:, None]
        _, plane_of = np.unique(P, axis=0, return_inverse=True)
        plane_of = plane_of.ravel()
        order = np.argsort(plane_of, kind="stable")
        cuts = np.flatnonzero(np.diff(plane_of[order])) + 1
        out = []
        Il, Jl = I[order], J[order]
        for lo, hi in zip(np.r_[0, cuts], np.r_[cuts, order.size]):
            y = mask
            for p in set(Il[lo:hi].tolist()) | set(Jl[lo:hi].tolist()):
                y |= point_mask[p]
            out.append(y)
        return out

    def _rank2_above_exact(self, mask: int) -> list[int]:
        idx = _bits(mask)
        basis, piv = rref([self.roots_field[i] for i in idx]) if idx else ([], [])
        free = [c for c in range(len(self.roots_field[0])) if c not in piv]
        points: dict[tuple, int] = {}
        for j in range(self.n):
            if mask >> j & 1:
                continue
            v = reduce_mod(self.roots_field[j], basis, piv)
            v = [v[c] for c in free]
            lead = next(x for x in v if x)
            key = tuple(as_field(x / lead) for x in v)
            points[key] = points.get(key, 0) | (1 << j)
        keys = list(points)
        m = len(keys)
        planes: dict[tuple, int] = {}
        k = len(free)
        for i in range(m):
            u = keys[i]
            for j in range(i + 1, m):
                w = keys[j]
                pl = [u[a] * w[b] - u[b] * w[a] for a in range(k) for b in range(a + 1, k)]
                lead = next(x for x in pl if x)
                key = tuple(as_field(x / lead) for x in pl)
                planes[key] = planes.get(key, mask) | points[u] | points[w]
        return list(planes.values())


def _canonical_order(masks) -> list[int]:
    return sorted(masks, key=lambda m: tuple(_bits(m)))


def closure(rs: RootSystem, seed) -> Flat:
    """Smallest flat containing the roots with the given indices."""
    geo = _geometry(rs)
    mask = 0
    for i in seed:
        if not 0 <= i < rs.n_positive:
            raise IndexError(f"root index {i} out of range")
        mask |= 1 << i
    return geo.flat(geo.closure(mask))


_GEOMETRY: dict = {}


def _geometry(rs: RootSystem) -> _Geometry:
    g = _GEOMETRY.get(rs.type)
    if g is None:
        g = _GEOMETRY[rs.type] = _Geometry(rs)
    return g


class _FlatView(Sequence):
    def __init__(self, poset: EvenPoset):
        self._p = poset

    def __len__(self):
        return len(self._p.masks)

    def __getitem__(self, i):
        if isinstance(i, slice):
            return [self[k] for k in range(*i.indices(len(self)))]
        return self._p.flat(i)


@dataclass
class EvenPoset:
    """The even-parabolic poset of one Coxeter type (or a product of types).

    ``masks[i]`` is the root bitmask of element ``i``; element 0 is the empty
    flat. ``cover_lo[k] < cover_hi[k]`` lists the cover relations.
    """

    type: object
    masks: list[int]
    rank_in_poset: list[int]
    cover_lo: np.ndarray
    cover_hi: np.ndarray
    mobius: list[int] = field(default_factory=list)
    rs: RootSystem | None = None
    labels: list | None = None

    @property
    def elements(self) -> Sequence[Flat]:
        return _FlatView(self)

    def flat(self, i: int) -> Flat:
        if self.rs is None:
            raise TypeError("this poset has no root-system realization")
        return _geometry(self.rs).flat(self.masks[i])

    def __len__(self) -> int:
        return len(self.masks)

    @property
    def covers(self) -> list[tuple[int, int]]:
        return list(zip(self.cover_lo.tolist(), self.cover_hi.tolist()))

    @property
    def height(self) -> int:
        return max(self.rank_in_poset) if self.rank_in_poset else 0

    def level_sizes(self) -> list[int]:
        sizes = [0] * (self.height + 1)
        for r in self.rank_in_poset:
            sizes[r] += 1
        return sizes

    def cover_counts(self) -> list[int]:
        """Number of cover relations ending in each level."""
        counts = [0] * (self.height + 1)
        rk = np.asarray(self.rank_in_poset)
        for r, c in zip(*np.unique(rk[self.cover_hi], return_counts=True)):
            counts[int(r)] = int(c)
        return counts

    def atoms(self) -> list[int]:
        return [i for i, r in enumerate(self.rank_in_poset) if r == 1]

    def maximal(self) -> list[int]:
        has_up = np.zeros(len(self), dtype=bool)
        has_up[self.cover_lo] = True
        return [i for i in range(len(self)) if not has_up[i]]

    def lower_csr(self) -> tuple[np.ndarray, np.ndarray]:
        order = np.argsort(self.cover_hi, kind="stable")
        indices = self.cover_lo[order].astype(np.int64)
        counts = np.bincount(self.cover_hi, minlength=len(self))
        indptr = np.zeros(len(self) + 1, dtype=np.int64)
        np.cumsum(counts, out=indptr[1:])
        return indptr, indices

    def upper_csr(self) -> tuple[np.ndarray, np.ndarray]:
        order = np.argsort(self.cover_lo, kind="stable")
        indices = self.cover_hi[order].astype(np.int64)
        counts = np.bincount(self.cover_lo, minlength=len(self))
        indptr = np.zeros(len(self) + 1, dtype=np.int64)
        np.cumsum(counts, out=indptr[1:])
        return indptr, indices


def _gather(indptr: np.ndarray, indices: np.ndarray, rows: np.ndarray) -> np.ndarray:
    starts = indptr[rows]
    lens = indptr[rows + 1] - starts
    total = int(lens.sum())
    if total == 0:
        return np.empty(0, dtype=np.int64)
    offs = np.repeat(starts - np.cumsum(np.r_[0, lens[:-1]]), lens)
    return indices[offs + np.arange(total)]


def compute_mobius(p: EvenPoset) -> list[int]:
    """mu(0, x) by the defining recursion, summing over the whole lower set of x.

    The lower set is collected by walking down cover relations, so elements
    must be numbered with all lower covers before upper ones.
    """
    n = len(p)
    mu = np.zeros(n, dtype=object)
    if n == 0:
        return []
    indptr, indices = p.lower_csr()
    order = np.argsort(np.asarray(p.rank_in_poset), kind="stable")
    mu_int = np.zeros(n, dtype=np.int64)
    big = False
    for x in order.tolist():
        if indptr[x] == indptr[x + 1]:
            if x != 0 and p.rank_in_poset[x] != 0:
                raise ConsistencyError(f"element {x} has no lower cover")
            mu[x] = 1
            mu_int[x] = 1
            continue
        seen = np.zeros(0, dtype=np.int64)
        frontier = np.array([x], dtype=np.int64)
        while frontier.size:
            frontier = np.unique(_gather(indptr, indices, frontier))
            seen = np.union1d(seen, frontier)
        if big:
            val = -sum(mu[seen].tolist())
        else:
            val = -int(mu_int[seen].sum())
            if abs(val) > 2**60:
                big = True
                mu[:] = [int(v) for v in mu_int]
                val = -sum(mu[seen].tolist())
        mu[x] = val
        if not big:
            mu_int[x] = val
    return [int(v) for v in mu]


def _expand_chunk(args):
    type_str, level_masks = args
    rs = build_root_system(type_str)
    geo = _geometry(rs)
    return [geo.rank2_above(m) for m in level_masks]


def enumerate_even_poset(
    rs: RootSystem | CoxeterType | str,
    element_cap: int = DEFAULT_ELEMENT_CAP,
    workers: int = 1,
    progress=None,
) -> EvenPoset:
    """Enumerate the even poset of ``rs`` by breadth-first rank-2 extension."""
    if not isinstance(rs, RootSystem):
        rs = build_root_system(rs)
    geo = _geometry(rs)
    levels: list[list[int]] = [[0]]
    cover_lo: list[np.ndarray] = []
    cover_hi: list[np.ndarray] = []
    offset = 0
    total = 1
    pool = ProcessPoolExecutor(max_workers=workers) if workers > 1 else None
    try:
        while True:
            cur = levels[-1]
            rk = 2 * (len(levels) - 1)
            if rk + 2 > rs.rank:
                break
            if pool is not None:
                chunk = max(1, len(cur) // (workers * 8))
                jobs = [(str(rs.type), cur[i:i + chunk]) for i in range(0, len(cur), chunk)]
                above = [ys for part in pool.map(_expand_chunk, jobs) for ys in part]
            else:
                above = (geo.rank2_above(m) for m in cur)
            even: dict[int, bool] = {}
            pairs: list[tuple[int, int]] = []
            for xi, ys in enumerate(above):
                for y in ys:
                    ok = even.get(y)
                    if ok is None:
                        ok = even[y] = geo.is_even(y, rk + 2)
                    if ok:
                        pairs.append((xi, y))
            nxt = _canonical_order(y for y, ok in even.items() if ok)
            if not nxt:
                break
            total += len(nxt)
            if total > element_cap:
                counts = [len(lv) for lv in levels] + [len(nxt)]
                raise ResourceLimitError(
                    f"{rs.type}: element cap {element_cap} exceeded at poset rank {len(levels)} "
                    f"(level sizes so far {counts})",
                    counts,
                )
            where = {y: i for i, y in enumerate(nxt)}
            base_next = offset + len(cur)
            cover_lo.append(np.array([offset + xi for xi, _ in pairs], dtype=np.int64))
            cover_hi.append(np.array([base_next + where[y] for _, y in pairs], dtype=np.int64))
            if progress:
                progress(len(levels), len(nxt), len(pairs))
            log.info("%s: level %d has %d elements, %d covers", rs.type, len(levels), len(nxt), len(pairs))
            offset = base_next
            levels.append(nxt)
    finally:
        if pool is not None:
            pool.shutdown()
    masks = [m for lv in levels for m in lv]
    rank_in_poset = [k for k, lv in enumerate(levels) for _ in lv]
    lo = np.concatenate(cover_lo) if cover_lo else np.zeros(0, dtype=np.int64)
    hi = np.concatenate(cover_hi) if cover_hi else np.zeros(0, dtype=np.int64)
    p = EvenPoset(rs.type, masks, rank_in_poset, lo, hi, rs=rs)
    p.mobius = compute_mobius(p)
    return p


# ---- brute-force lattice enumeration (independent check for small types) ----

def enumerate_all_flats(rs: RootSystem) -> list[int]:
    """Every flat of the arrangement, by closing X + {root} from the bottom up."""
    geo = _geometry(rs)
    seen = {0}
    frontier = [0]
    while frontier:
        nxt = []
        for x in frontier:
            for j in range(rs.n_positive):
                if not x >> j & 1:
                    y = geo.closure(x | (1 << j))
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
        frontier = nxt
    return _canonical_order(seen)


def even_poset_by_containment(rs: RootSystem) -> EvenPoset:
    """Even poset from the full flat lattice, order by root-set containment.

    Covers are the Hasse diagram of containment; no purity is assumed.
    """
    geo = _geometry(rs)
    even = [m for m in enumerate_all_flats(rs) if geo.flat(m).is_even]
    ranks = [geo.rank(m) for m in even]
    order = sorted(range(len(even)), key=lambda i: (ranks[i], tuple(_bits(even[i]))))
    even = [even[i] for i in order]
    ranks = [ranks[i] for i in order]
    n = len(even)
    below = [[j for j in range(n) if j != i and even[j] & ~even[i] == 0] for i in range(n)]
    lo, hi = [], []
    for i in range(n):
        bs = set(below[i])
        for j in below[i]:
            if not any(j in set(below[k]) for k in bs if k != j):
                lo.append(j)
                hi.append(i)
    # rank_in_poset here is the length of the longest chain from 0
    height = [0] * n
    for i in range(n):
        height[i] = max((height[j] + 1 for j in below[i]), default=0)
    p = EvenPoset(rs.type, even, height, np.array(lo, dtype=np.int64), np.array(hi, dtype=np.int64), rs=rs)
    p.mobius = compute_mobius(p)
    p.flat_ranks = ranks
    return p


# ---- derived invariants ----------------------------------------------------

@dataclass(frozen=True)
class CharPoly:
    coefficients: tuple[int, ...]

    def __call__(self, t):
        return sum(c * t**k for k, c in enumerate(self.coefficients))

    def __str__(self) -> str:
        return format_poly(self.coefficients)

    @classmethod
    def of(cls, coeffs) -> CharPoly:
        c = list(coeffs)
        while len(c) > 1 and c[-1] == 0:
            c.pop()
        return cls(tuple(int(x) for x in c))

    def __add__(self, other: CharPoly) -> CharPoly:
        a, b = self.coefficients, other.coefficients
        n = max(len(a), len(b))
        return CharPoly.of((a[k] if k < len(a) else 0) + (b[k] if k < len(b) else 0) for k in range(n))

    def __mul__(self, other) -> CharPoly:
        if isinstance(other, int):
            return CharPoly.of(other * c for c in self.coefficients)
        a, b = self.coefficients, other.coefficients
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            for j, y in enumerate(b):
                out[i + j] += x * y
        return CharPoly.of(out)

    __rmul__ = __mul__

    def shift(self, k: int = 1) -> CharPoly:
        return CharPoly.of((0,) * k + self.coefficients)


def format_poly(coeffs, var: str = "t") -> str:
    """``1 - 50 t + 49 t^2``: ascending powers, explicit signs."""
    parts = []
    for k, c in enumerate(coeffs):
        if c == 0 and not (k == 0 and all(x == 0 for x in coeffs)):
            continue
        mag = abs(c)
        if k == 0:
            body = f"{mag}"
        elif k == 1:
            body = f"{mag} {var}" if mag != 1 else var
        else:
            body = f"{mag} {var}^{k}" if mag != 1 else f"{var}^{k}"
        if not parts:
            parts.append(("-" if c < 0 else "") + body)
        else:
            parts.append(("- " if c < 0 else "+ ") + body)
    return " ".join(parts) if parts else "0"


def char_poly(p: EvenPoset) -> CharPoly:
    coeffs = [0] * (p.height + 1)
    for r, m in zip(p.rank_in_poset, p.mobius):
        coeffs[r] += m
    return CharPoly.of(coeffs)


def check_sign_alternation(cp: CharPoly) -> None:
    for k, c in enumerate(cp.coefficients):
        if (-1) ** k * c < 0:
            raise SignViolationError(f"coefficient of t^{k} is {c}, sign should be (-1)^{k}")


def check_element_signs(p: EvenPoset) -> None:
    """Each mu(0, x) has sign (-1)^rank(x), as Cohen-Macaulay intervals require."""
    for i, (mu, r) in enumerate(zip(p.mobius, p.rank_in_poset)):
        if (-1) ** r * mu < 0 or (mu == 0 and r == 0):
            raise SignViolationError(f"mu(0, element {i}) = {mu} at rank {r}")


def betti_numbers(p: EvenPoset | CharPoly) -> list[int]:
    cp = p if isinstance(p, CharPoly) else char_poly(p)
    check_sign_alternation(cp)
    return [(-1) ** k * c for k, c in enumerate(cp.coefficients)]


def euler_characteristic(p: EvenPoset | CharPoly) -> int:
    cp = p if isinstance(p, CharPoly) else char_poly(p)
    return cp(1)


# ---- independent oracles ---------------------------------------------------

_WORD = (1 << 64) - 1


def _mask_words(masks: list[int]) -> np.ndarray:
    """Root masks split into 64-bit words, shape (len(masks), words)."""
    width = max(1, (max((m.bit_length() for m in masks), default=0) + 63) // 64)
    out = np.zeros((len(masks), width), dtype=np.uint64)
    for k in range(width):
        out[:, k] = np.fromiter(((m >> (64 * k)) & _WORD for m in masks), dtype=np.uint64, count=len(masks))
    return out


def _zeta_solve(words: np.ndarray, ranks: np.ndarray, chunk_cells: int = 8_000_000) -> np.ndarray:
    """mu(0, -) on a set of flats with a unique bottom, by inverting the containment zeta matrix.

    Flats of equal rank are never properly nested, so the unitriangular system
    is solved one rank level at a time: mu(b) = -sum of mu(a) over a properly
    contained in b. Containment is tested on the mask words in blocks.
    """
    n = len(ranks)
    mu = np.zeros(n, dtype=np.int64)
    bottom = np.flatnonzero(ranks == 0)
    if len(bottom) != 1:
        raise ConsistencyError("expected a unique bottom element")
    mu[bottom[0]] = 1
    for r in range(1, int(ranks.max(initial=0)) + 1):
        lower = np.flatnonzero(ranks < r)
        level = np.flatnonzero(ranks == r)
        lw, lmu = words[lower], mu[lower]
        step = max(1, chunk_cells // max(1, len(lower)))
        for c0 in range(0, len(level), step):
            cols = level[c0 : c0 + step]
            cw = words[cols]
            inside = np.ones((len(lower), len(cols)), dtype=bool)
            for k in range(words.shape[1]):
                inside &= (lw[:, k, None] & ~cw[None, :, k]) == 0
            mu[cols] = -(lmu @ inside.astype(np.int64))
    return mu


def mobius_oracle(p: EvenPoset, check: bool = True) -> list[int]:
    """mu(0, -) from the inverse of the zeta matrix, order by root containment.

    The zeta matrix is built from set containment of root masks, not from
    the cover relations, and inverted exactly (int64 sums bounded by the
    total Betti number). Raises ConsistencyError on the first disagreement
    with ``p.mobius`` when ``check`` is set.
    """
    out = _zeta_solve(_mask_words(p.masks), np.asarray(p.rank_in_poset)).tolist()
    if check:
        for i in range(len(p)):
            if out[i] != p.mobius[i]:
                raise ConsistencyError(
                    f"Mobius mismatch at element {i}: recursion {p.mobius[i]}, zeta inverse {out[i]}"
                )
    return out


def mobius_oracle_interval(p: EvenPoset, top: int) -> int:
    """Zeta-inverse value mu(0, top) using only the elements below ``top``."""
    words = _mask_words(p.masks)
    below = np.ones(len(p), dtype=bool)
    for k in range(words.shape[1]):
        below &= (words[:, k] & ~words[top, k]) == 0
    idx = np.flatnonzero(below)
    mu = _zeta_solve(words[idx], np.asarray(p.rank_in_poset)[idx])
    return int(mu[np.searchsorted(idx, top)])


def semimodularity_check(p: EvenPoset) -> bool:
    """Distinct upper covers of a common element share an upper cover, or are both maximal."""
    uptr, upi = p.upper_csr()
    ups = [set(upi[uptr[i]:uptr[i + 1]].tolist()) for i in range(len(p))]
    for x in range(len(p)):
        cs = sorted(ups[x])
        for a in range(len(cs)):
            for b in range(a + 1, len(cs)):
                u, v = cs[a], cs[b]
                if ups[u] & ups[v]:
                    continue
                if not ups[u] and not ups[v]:
                    continue
                return False
    return True


def is_pure(p: EvenPoset) -> bool:
    """Every maximal chain from the bottom has the same length."""
    mx = p.maximal()
    if not mx:
        return True
    lengths = {p.rank_in_poset[i] for i in mx}
    return len(lengths) == 1


def synthetic_i2(m: int) -> EvenPoset:
    """Even poset of I2(m) for any m >= 3: the bottom and the whole group."""
    if m < 3:
        raise ValueError("I2(m) requires m >= 3")
    p = EvenPoset(
        CoxeterType("I2", 2, m),
        [0, (1 << m) - 1],
        [0, 1],
        np.array([0], dtype=np.int64),
        np.array([1], dtype=np.int64),
    )
    p.mobius = compute_mobius(p)
    return p


def product_poset(p: EvenPoset, q: EvenPoset) -> EvenPoset:
    """Product order; element ``(a, b)`` is indexed ``a * len(q) + b``.

    Root masks concatenate (``q``'s roots shifted past ``p``'s), so
    containment in the product is containment of masks.
    """
    shift = max((m.bit_length() for m in p.masks), default=0)
    masks, ranks, labels = [], [], []
    for a in range(len(p)):
        for b in range(len(q)):
            masks.append(p.masks[a] | (q.masks[b] << shift))
            ranks.append(p.rank_in_poset[a] + q.rank_in_poset[b])
            labels.append((a, b))
    nq = len(q)
    lo, hi = [], []
    for x, y in zip(p.cover_lo.tolist(), p.cover_hi.tolist()):
        for b in range(nq):
            lo.append(x * nq + b)
            hi.append(y * nq + b)
    for x, y in zip(q.cover_lo.tolist(), q.cover_hi.tolist()):
        for a in range(len(p)):
            lo.append(a * nq + x)
            hi.append(a * nq + y)
    label = f"{p.type}x{q.type}"
    out = EvenPoset(label, masks, ranks, np.array(lo, dtype=np.int64), np.array(hi, dtype=np.int64))
    out.mobius = compute_mobius(out)
    return out


def even_poset_for(spec: str, element_cap: int = DEFAULT_ELEMENT_CAP, workers: int = 1) -> EvenPoset:
    """Even poset for a type string; ``"A1xB3"`` style products are allowed."""
    parts = [s for s in spec.replace("*", "x").split("x") if s]
    posets = []
    for part in parts:
        ct = CoxeterType.parse(part)
        if ct.family == "I2" and ct.m not in (3, 4, 5, 6):
            posets.append(synthetic_i2(ct.m))
        else:
            posets.append(enumerate_even_poset(ct, element_cap=element_cap, workers=workers))
    out = posets[0]
    for q in posets[1:]:
        out = product_poset(out, q)
    return out


# ---- type B / D relations -----------------------------------------------------

def d_relation_check(n: int, posets: dict | None = None) -> tuple[CharPoly, CharPoly] | None:
    """(chi(D_n) by enumeration, chi(B_n) + C(n,2) t chi(B_{n-2})); None for n = 2."""
    if n < 2:
        raise ValueError("n must be >= 2")
    if n == 2:
        return None
    posets = posets if posets is not None else {}

    def get(s):
        if s not in posets:
            posets[s] = even_poset_for(s)
        return posets[s]

    lhs = char_poly(get(f"D{n}"))
    bn2 = CharPoly((1,)) if n - 2 == 0 else char_poly(get(f"B{n - 2}"))
    rhs = char_poly(get(f"B{n}")) + (comb(n, 2) * bn2).shift(1)
    if lhs != rhs:
        raise ConsistencyError(f"D{n} relation fails: {lhs} != {rhs}")
    return lhs, rhs


# ---- closed forms -------------------------------------------------------------

def typeA_char_poly_product(n: int) -> CharPoly:
    out = CharPoly((1,))
    for k in range(1, n // 2 + 1):
        out = out * CharPoly((1, -(n + 1 - 2 * k) ** 2))
    return out


def typeB_char_poly_closed(n: int) -> CharPoly:
    """Sum over m of C(n,2m) (4m)!/(2^{2m}(2m+1)!) (-t)^m prod_a (1 - 4a^2 t)."""
    if n < 2:
        return CharPoly((1,))
    total = CharPoly((0,))
    for m in range(n // 2 + 1):
        c = Fraction(comb(n, 2 * m) * factorial(4 * m), 2 ** (2 * m) * factorial(2 * m + 1))
        assert c.denominator == 1
        term = CharPoly((1,))
        for a in range(1, n - 2 * m - 1):
            if a % 2 == n % 2:
                term = term * CharPoly((1, -4 * a * a))
        total = total + (int(c) * (-1) ** m * term).shift(m)
    return total


def euler_closed_form(family: str, n: int) -> int | None:
    """Closed-form Euler characteristic for odd n (None for even n or unsupported)."""
    if n % 2 == 0:
        return 0
    h, l = (n + 1) // 2, (n - 1) // 2
    sgn = (-1) ** l
    if family == "A":
        num, den = factorial(n + 1) * factorial(n - 1), 2**n * factorial(h) * factorial(l)
    elif family == "B":
        num, den = factorial(n) * factorial(n - 1), factorial(h) * factorial(l)
    elif family == "D":
        if n < 3:
            return None
        num = (n - 1) * (7 * n - 17) * factorial(n) * factorial(n - 3)
        den = 8 * factorial(h) * factorial(l)
    else:
        return None
    if num % den:
        raise ConsistencyError(f"closed form for {family}{n} is not an integer")
    return sgn * num // den


# ---- cache file --------------------------------------------------------------

def poset_to_json(p: EvenPoset) -> dict:
    ct = p.type
    return {
        "format_version": FORMAT_VERSION,
        "type": str(ct),
        "rank": ct.rank if isinstance(ct, CoxeterType) else None,
        "element_count": len(p),
        "flats": [_bits(m) for m in p.masks],
        "rank_in_poset": list(p.rank_in_poset),
        "covers": [[int(a), int(b)] for a, b in zip(p.cover_lo.tolist(), p.cover_hi.tolist())],
        "mobius": [int(x) for x in p.mobius],
    }


def poset_from_json(data: dict) -> EvenPoset:
    if data.get("format_version") != FORMAT_VERSION:
        raise ValueError(f"unsupported poset cache format {data.get('format_version')!r}")
    ct = CoxeterType.parse(data["type"]) if "x" not in data["type"] else data["type"]
    masks = []
    for roots in data["flats"]:
        m = 0
        for i in roots:
            m |= 1 << i
        masks.append(m)
    if len(masks) != data["element_count"]:
        raise ValueError("element_count does not match flats")
    covers = np.array(data["covers"], dtype=np.int64).reshape(-1, 2)
    rs = None
    if isinstance(ct, CoxeterType) and not (ct.family == "I2" and ct.m not in (3, 4, 5, 6)):
        rs = build_root_system(ct)
    p = EvenPoset(ct, masks, list(data["rank_in_poset"]), covers[:, 0].copy(), covers[:, 1].copy(),
                  mobius=[int(x) for x in data["mobius"]], rs=rs)
    return p


def save_poset(p: EvenPoset, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_text(json.dumps(poset_to_json(p), separators=(",", ":")))
    tmp.replace(path)
    return path


def load_poset(path: str | Path) -> EvenPoset:
    return poset_from_json(json.loads(Path(path).read_text()))


# ---- signed-partition model of type B -----------------------------------------------

def _odd_block_partitions(items: tuple[int, ...]):
    if not items:
        yield ()
        return
    first, rest = items[0], items[1:]
    for size in range(0, len(rest) + 1, 2):
        for others in itertools.combinations(rest, size):
            block = (first,) + others
            remaining = tuple(x for x in rest if x not in others)
            for tail in _odd_block_partitions(remaining):
                yield (block,) + tail


def _sign_classes(block: tuple[int, ...]):
    # sign vectors on the block up to a global sign: first entry fixed to +1
    for tail in itertools.product((1, -1), repeat=len(block) - 1):
        yield (1,) + tail


def _dowling_elements(n: int):
    ground = tuple(range(1, n + 1))
    for size in range(0, n + 1, 2):
        for zero in itertools.combinations(ground, size):
            rest = tuple(x for x in ground if x not in zero)
            for blocks in _odd_block_partitions(rest):
                for signs in itertools.product(*(list(_sign_classes(b)) for b in blocks)):
                    yield (frozenset(zero), tuple(zip(blocks, signs)))


def _dowling_rank(elem) -> int:
    zero, blocks = elem
    return (len(zero) + sum(len(b) - 1 for b, _ in blocks)) // 2


def _dowling_le(a, b) -> bool:
    za, ba = a
    zb, bb = b
    if not za <= zb:
        return False
    where = {}
    for block, phi in bb:
        for x, p in zip(block, phi):
            where[x] = (block, p)
    for block, phi in ba:
        if set(block) <= zb:
            continue
        if block[0] not in where:
            return False
        target, p0 = where[block[0]]
        # same block of b, and signs agree up to one global sign
        flip = p0 * phi[0]
        for x, p in zip(block, phi):
            if x not in where or where[x][0] != target or where[x][1] != flip * p:
                return False
    return True


def dowling_even_poset(n: int) -> EvenPoset:
    """The even type-B poset built from signed partitions, with no root geometry.

    An element is ``(Z, pi)``: a zero set ``Z`` of even size and a partition of
    the remaining indices into blocks of odd size, each block carrying a sign
    vector up to a global sign. ``labels[i]`` holds that description and
    ``masks[i]`` the matching set of positive roots of B_n (for comparison
    with flat enumeration only; the order itself is combinatorial).
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    elems = list(_dowling_elements(n))
    ranks = [_dowling_rank(e) for e in elems]
    rs = build_root_system(CoxeterType("B", n))
    masks = [_dowling_mask(rs, e) for e in elems]
    order = sorted(range(len(elems)), key=lambda i: (ranks[i], tuple(_bits(masks[i]))))
    elems = [elems[i] for i in order]
    ranks = [ranks[i] for i in order]
    masks = [masks[i] for i in order]
    by_rank: dict[int, list[int]] = {}
    for i, r in enumerate(ranks):
        by_rank.setdefault(r, []).append(i)
    lo, hi = [], []
    for r in sorted(by_rank):
        for j in by_rank.get(r + 1, []):
            for i in by_rank[r]:
                if _dowling_le(elems[i], elems[j]):
                    lo.append(i)
                    hi.append(j)
    p = EvenPoset(CoxeterType("B", n), masks, ranks, np.array(lo, dtype=np.int64), np.array(hi, dtype=np.int64), rs=rs)
    p.labels = elems
    p.mobius = compute_mobius(p)
    return p


def _dowling_mask(rs: RootSystem, elem) -> int:
    n = rs.rank
    zero, blocks = elem

    def vec(coeffs: dict[int, int]):
        return tuple(Scalar(coeffs.get(a, 0)) for a in range(1, n + 1))

    mask = 0
    for a in zero:
        mask |= 1 << rs.index_of(vec({a: 1}))
        for b in zero:
            if a < b:
                mask |= 1 << rs.index_of(vec({a: 1, b: 1}))
                mask |= 1 << rs.index_of(vec({a: 1, b: -1}))
    for block, phi in blocks:
        for (a, pa), (b, pb) in itertools.combinations(zip(block, phi), 2):
            mask |= 1 << rs.index_of(vec({a: pa, b: -pb}))
    return mask
