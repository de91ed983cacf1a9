from __future__ import annotations

from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from realdcp import charcalc as cc
from realdcp import flats
from realdcp import symfunc as sf
from realdcp.flats import ConsistencyError
from realdcp.symfunc import SymA, SymB


# ---- graded characters -------------------------------------------------------------

def test_type_a_small():
    g = cc.typeA_graded_ch(2)
    assert len(g) == 1
    assert g[0] == cc._restrict(sf.Exp(2), 2)
    assert cc.typeA_graded_ch(4).dims() == [1, 4]
    assert cc.typeA_graded_ch(1).dims() == [1]


def test_type_a_trivial_multiplicity():
    g = cc.typeA_graded_ch(5)
    triv = cc._restrict(sf.Exp(5), 5)
    assert [sf.inner_A(f, triv, 5) for f in g.per_degree] == [1] + [0] * (len(g) - 1)


def test_type_b_dims():
    assert cc.typeB_graded_ch(2).dims() == [1, 1]
    assert cc.typeB_graded_ch(3).dims() == [1, 7]
    assert cc.typeB_graded_ch(5).dims() == [1, 50, 289]
    assert cc.typeB_graded_ch(0).dims() == [1]


def test_type_b_generic_series_agrees():
    N = 6
    assert cc.typeB_series(N) == cc.typeB_series_generic(N)


def test_half_integer_cancellation():
    series = cc.typeB_series(8)
    assert all(k % 2 == 0 for k in series.s_exponents())
    assert all(k % 2 == 0 for k in cc.typeA_series(8).s_exponents())


@pytest.mark.parametrize("n", range(1, 9))
def test_dimension_bridge_a(n, get_poset):
    # the S_{n+1} model is the A_n model
    assert cc.typeA_graded_ch(n + 1).dims() == flats.betti_numbers(get_poset(f"A{n}"))


@pytest.mark.parametrize("n", range(2, 7))
def test_dimension_bridge_b_and_d(n, get_poset):
    assert cc.typeB_graded_ch(n).dims() == flats.betti_numbers(get_poset(f"B{n}"))
    if n >= 3:
        assert cc.typeD_graded_ch(n).dims() == flats.betti_numbers(get_poset(f"D{n}"))


def test_type_d_examples():
    assert cc.typeD_graded_ch(4).dims() == [1, 16, 15]
    assert cc.typeD_graded_ch(2).dims() == [1, 0]
    assert cc.typeD_graded_ch(3)[1] == cc.h1_induction_ch(3, "D")
    assert cc.typeD_graded_ch(3).dims() == [1, 4]
    with pytest.raises(ValueError):
        cc.typeD_graded_ch(1)


@pytest.mark.parametrize("n", range(3, 7))
def test_type_d_is_b_minus_induction(n):
    b, d, b2 = cc.typeB_graded_ch(n), cc.typeD_graded_ch(n), cc.typeB_graded_ch(n - 2)
    eps2 = cc._lift(cc.one_dim_ch(2, "eps"), n)
    for i in range(len(b)):
        diff = b[i] - d[i]
        expected = cc._lift(b2[i - 1], n) * eps2 if i >= 1 else SymB.zero(n)
        assert diff == expected


@pytest.mark.parametrize("n", range(1, 7))
def test_gamma_invariants_are_type_a(n):
    assert cc.gamma_invariant_ch(n).per_degree == cc.typeA_graded_ch(n).per_degree


def test_gamma_invariant_n1():
    assert cc.gamma_invariant_ch(1)[0] == SymA.p(1, N=1)


@pytest.mark.parametrize("n", range(1, 7))
def test_gamma_prod_dimension(n):
    # read H^i off the coefficient of (-t)^i in the degree-n part of the series
    from_series = [cc.dimension(f, n) for f in cc._split_by_t(cc.gamma_prod_series(n + 2), n)]
    assert cc.gamma_prod_ch(n).dims() == from_series


def test_gamma_prod_dimensions_by_degree():
    # the prod-isotypic part only lives in degree n/2 for even n, and vanishes for odd n
    assert cc.gamma_prod_ch(3).dims() == [0]
    assert cc.gamma_prod_ch(4).dims() == [0, 0, 9]
    assert cc.gamma_prod_ch(6).dims() == [0, 0, 0, 225]


# ---- one-dimensional characters -------------------------------------------------------

def test_one_dim_ch_examples():
    half = Fraction(1, 2)
    assert cc.one_dim_ch(1, "1") == SymB.xy((1,), N=1, coef=half) + SymB.xy((), (1,), N=1, coef=half)
    assert cc.one_dim_ch(1, "prod") == SymB.xy((1,), N=1, coef=half) + SymB.xy((), (1,), N=1, coef=-half)
    assert cc.one_dim_ch(2, "eps") == sf.tilde_B(cc.one_dim_ch(2, "1"))
    with pytest.raises(ValueError):
        cc.one_dim_ch(2, "banana")


@pytest.mark.parametrize("n", range(1, 6))
def test_one_dim_ch_orthonormal(n):
    chars = [cc.one_dim_ch(n, w) for w in cc.ONE_DIM]
    gram = [[sf.inner_B(a, b, n) for b in chars] for a in chars]
    expected = [[int(i == j) for j in range(4)] for i in range(4)]
    if n == 1:
        # eps equals prod for W(B_1)
        expected = [[1, 0, 0, 1], [0, 1, 1, 0], [0, 1, 1, 0], [1, 0, 0, 1]]
    assert gram == expected


@pytest.mark.parametrize("n", range(2, 8))
def test_one_dim_multiplicities_b(n):
    t = cc.one_dim_multiplicities(n, "B")
    assert t.agree
    assert t.computed[("1", 0)] == 1
    assert all(v == 0 for (w, _), v in t.computed.items() if w == "prod")


@pytest.mark.parametrize("n", range(2, 8))
def test_one_dim_multiplicities_d(n):
    assert cc.one_dim_multiplicities(n, "D").agree
    assert cc.one_dim_multiplicities(n, "D/WD").agree


def test_multiplicity_disagreement_is_reported(monkeypatch):
    monkeypatch.setattr(cc, "onedim_closed_form_B", lambda n, which, i: 7)
    with pytest.raises(ConsistencyError, match="disagree"):
        cc.one_dim_multiplicities(3, "B")
    assert not cc.one_dim_multiplicities(3, "B", check=False).agree


# ---- class functions ---------------------------------------------------------------------

def test_class_function_examples():
    n = 4
    triv = cc.class_function(cc.one_dim_ch(n, "1"), n)
    assert set(triv.values.values()) == {1}
    eps = cc.class_function(cc.one_dim_ch(n, "eps"), n)
    assert eps[((1,) * n, ())] == 1
    assert eps.inner(eps) == 1 and eps.inner(triv) == 0


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 6), st.data())
def test_class_function_round_trip(n, data):
    bps = sf.bipartitions(n)
    coefs = data.draw(st.lists(st.integers(0, 3), min_size=len(bps), max_size=len(bps)))
    ch = SymB.zero(n)
    for (a, b), c in zip(bps, coefs):
        if c:
            ch = ch + sf.b_irreducible(a, b).scale(c)
    cf = cc.class_function(ch, n)
    assert cc.from_class_function(cf) == ch
    assert cf.dimension == cc.dimension(ch, n)


def test_class_function_rejects_s():
    with pytest.raises(ValueError):
        cc.class_function(SymB.xy((1,), N=1, s_power=1), 1)


# ---- euler characters ------------------------------------------------------------------------

def test_euler_character_b5_identity():
    assert cc.euler_character_B(5).dimension == 240


@pytest.mark.parametrize("n", range(2, 8))
def test_euler_character_three_ways(n):
    e = cc.euler_character_B(n)
    assert e == cc.alternating_class_function(cc.typeB_graded_ch(n))
    assert e == cc.euler_character_harmonic(n)
    for cls, v in e.values.items():
        if cc.euler_vanishing_expected(cls):
            assert v == 0, cls


def test_euler_vanishing_classes():
    assert cc.euler_vanishing_expected(((3,), ()))
    assert cc.euler_vanishing_expected(((1,), (2,)))
    assert not cc.euler_vanishing_expected(((2, 1), (1,)))
    assert not cc.euler_vanishing_expected(((4,), ()))


def test_euler_sum_matches_poset(get_poset):
    for n in range(2, 7):
        assert cc.lefschetz_from_characters(n) == flats.euler_characteristic(get_poset(f"B{n}"))


# ---- H^1 induction --------------------------------------------------------------------------

def test_h1_induction_examples():
    assert cc.dimension(cc.h1_induction_ch(3, "A"), 4) == 4
    assert cc.dimension(cc.h1_induction_ch(2, "B"), 2) == 1
    assert cc.dimension(cc.h1_induction_ch(4, "D"), 4) == 16
    with pytest.raises(ValueError):
        cc.h1_induction_ch(2, "A")
    with pytest.raises(ValueError):
        cc.h1_induction_ch(2, "D")


@pytest.mark.parametrize("n", range(3, 7))
def test_h1_induction_matches(n):
    for kind in "ABD":
        assert cc.check_h1_induction(n, kind)
    assert cc.check_h1_induction(2, "B")


@pytest.mark.parametrize("n", range(2, 8))
def test_h1_dimension(n):
    assert cc.typeB_graded_ch(n).dims()[1] == cc.binomial_h1_dim(n) == comb(n, 2) + 4 * comb(n, 3)


# ---- positivity and reports -------------------------------------------------------------------

@pytest.mark.parametrize("n", range(1, 7))
def test_all_characters_genuine(n):
    assert cc.is_genuine(cc.typeA_graded_ch(n))
    assert cc.is_genuine(cc.typeB_graded_ch(n))
    if n >= 2:
        assert cc.is_genuine(cc.typeD_graded_ch(n))


def test_non_genuine_detected():
    g = cc.GradedCh(2, "B", [cc.one_dim_ch(2, "1").scale(-1)])
    assert not cc.is_genuine(g)


def test_character_report():
    r = cc.character_report(4, "B")
    assert r["betti"] == flats.betti_numbers(flats.even_poset_for("B4"))
    assert set(r["checks"].values()) == {"pass"}
    assert r["class_table"]["H0"]["(1,1,1,1|)"] == "1"
    assert cc.character_report(3, "A")["betti"] == [1, 4]
    with pytest.raises(ValueError):
        cc.character_report(3, "E")
