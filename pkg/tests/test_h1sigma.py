from __future__ import annotations

import random
from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from realdcp import charcalc as cc
from realdcp import flats
from realdcp import h1sigma as h
from realdcp.h1sigma import Nu, Omega, SignedPerm


def signed_perms(n):
    return st.tuples(
        st.lists(st.sampled_from((1, -1)), min_size=n, max_size=n),
        st.permutations(list(range(1, n + 1))),
    ).map(lambda t: SignedPerm(tuple(t[0]), tuple(t[1])))


def basis_vector(b):
    return {b: Fraction(1)}


# ---- normal form ------------------------------------------------------------------------

def test_normal_form():
    assert h.nu(2, 1) == (-1, Nu(1, 2))
    assert h.omega((2, 1, 3), (1, 1, 1)) == (-1, Omega(1, 2, 3, (1, 1, 1)))
    assert h.omega((1, 2, 3), (-1, 1, -1)) == (1, Omega(1, 2, 3, (1, -1, 1)))
    # a cyclic reordering is even; phi read on (1, 2, 3) is (-1, 1, 1), normalized by negation
    assert h.omega((3, 1, 2), (1, -1, 1)) == (1, Omega(1, 2, 3, (1, -1, -1)))
    with pytest.raises(ValueError):
        h.nu(1, 1)
    with pytest.raises(ValueError):
        h.omega((1, 1, 2), (1, 1, 1))


@pytest.mark.parametrize("n", range(2, 8))
def test_basis_size(n, get_poset):
    size = len(h.basis(n))
    assert size == comb(n, 2) + 4 * comb(n, 3)
    assert size == flats.betti_numbers(get_poset(f"B{n}"))[1]


def test_signed_perm_validation():
    with pytest.raises(ValueError):
        SignedPerm((1, 1), (1, 1))
    with pytest.raises(ValueError):
        SignedPerm((1, 2), (1, 2))


# ---- group action --------------------------------------------------------------------------

def test_action_examples():
    n = 4
    e = SignedPerm.identity(n)
    for b in h.basis(n):
        assert h.act_wbn(e, basis_vector(b)) == basis_vector(b)
    flip1 = SignedPerm((-1, 1, 1, 1), (1, 2, 3, 4))
    assert h.act_wbn(flip1, basis_vector(Nu(1, 3))) == {Nu(1, 3): -1}
    swap = SignedPerm((1,) * n, (2, 1, 3, 4))
    assert h.act_wbn(swap, basis_vector(Nu(1, 2))) == {Nu(1, 2): -1}


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 5).flatmap(lambda n: st.tuples(signed_perms(n), signed_perms(n), st.sampled_from(h.basis(n)))))
def test_group_action(args):
    g1, g2, b = args
    v = basis_vector(b)
    assert h.act_wbn(g1, h.act_wbn(g2, v)) == h.act_wbn(g1 * g2, v)


@pytest.mark.parametrize("n", range(2, 6))
def test_action_on_generator_pairs(n):
    gens = h.generators(n)
    for g1 in gens:
        for g2 in gens:
            for b in h.basis(n):
                v = basis_vector(b)
                assert h.act_wbn(g1, h.act_wbn(g2, v)) == h.act_wbn(g1 * g2, v)


def test_random_signed_perm_is_valid():
    rng = random.Random(5)
    g = h.random_signed_perm(6, rng)
    assert g * SignedPerm.identity(6) == g == SignedPerm.identity(6) * g


# ---- sigma ----------------------------------------------------------------------------------

def test_sigma_on_nu():
    assert h.act_sigma(basis_vector(Nu(1, 2))) == {Nu(1, 2): -1}


@pytest.mark.parametrize("n", range(2, 7))
def test_sigma_involution(n):
    for b in h.basis(n):
        assert h.act_sigma(h.act_sigma(basis_vector(b))) == basis_vector(b)


@pytest.mark.parametrize("n", range(2, 7))
def test_sigma_commutes_with_generators(n):
    for g in h.generators(n):
        for b in h.basis(n):
            v = basis_vector(b)
            assert h.act_sigma(h.act_wbn(g, v)) == h.act_wbn(g, h.act_sigma(v))


def test_omega_tilde_fixed():
    for b in h.basis(5):
        if isinstance(b, Omega):
            w = h.omega_tilde(b)
            assert h.act_sigma(w) == w


def test_sigma_spectrum_examples():
    assert h.sigma_spectrum(2) == (0, 1, -1)
    assert h.sigma_spectrum(3) == (4, 3, 1)
    assert h.sigma_spectrum(4) == (16, 6, 10)
    with pytest.raises(ValueError):
        h.sigma_spectrum(1)


@pytest.mark.parametrize("n", range(2, 8))
def test_sigma_spectrum(n):
    plus, minus, trace = h.sigma_spectrum(n)
    assert (plus, minus) == (4 * comb(n, 3), comb(n, 2))
    assert trace == plus - minus


# ---- Lefschetz number ----------------------------------------------------------------------

def test_lefschetz_examples():
    assert h.lefschetz_sigma(2) == 2
    assert h.lefschetz_sigma(3) == 0
    assert h.lefschetz_sigma(4) == -24
    assert h.lefschetz_sigma(6) == 1440
    with pytest.raises(ValueError):
        h.lefschetz_sigma(1)


@pytest.mark.parametrize("n", [2, 3])
def test_lefschetz_from_h1_when_h1_is_top(n):
    # for n <= 3 cohomology stops at H^1, so the trace on H^1 fixes the number
    assert 1 - h.sigma_spectrum(n)[2] == h.lefschetz_sigma(n)


# ---- characters ---------------------------------------------------------------------------

def test_class_representative_cycle_type():
    g = h.class_representative((2, 1), (3,))
    assert g.perm == (2, 1, 3, 5, 6, 4)
    assert g.signs == (1, 1, 1, -1, 1, 1)


def test_h1_character_n5():
    assert h.h1_character(5).dimension == 50


@pytest.mark.parametrize("n", range(2, 7))
def test_h1_character_matches_generating_functions(n):
    chi = h.h1_character(n)
    assert chi.dimension == comb(n, 2) + 4 * comb(n, 3)
    assert chi == cc.class_function(cc.typeB_graded_ch(n)[1], n)
    assert chi == cc.class_function(cc.h1_induction_ch(n, "B"), n)


@pytest.mark.parametrize("n", range(3, 7))
def test_sigma_fixed_part_is_type_d(n):
    assert h.sigma_fixed_character(n) == cc.class_function(cc.typeD_graded_ch(n)[1], n)


@pytest.mark.parametrize("n", range(2, 7))
def test_check_h1(n):
    checks = h.check_h1(n)
    assert all(checks.values()), checks
    assert ("sigma_fixed_is_type_D" in checks) == (n >= 3)
