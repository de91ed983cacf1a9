import pytest

from realdcp.rootsys import CoxeterType, InvalidTypeError, build_root_system, dot, reflect
from realdcp.scalar import Scalar

COUNTS = {
    "A1": 1, "A2": 3, "A5": 15, "A8": 36,
    "B1": 1, "B2": 4, "B5": 25,
    "D2": 2, "D4": 12, "D6": 30,
    "E6": 36, "E7": 63, "E8": 120, "F4": 24, "H3": 15, "H4": 60,
    "I2(3)": 3, "I2(4)": 4, "I2(5)": 5, "I2(6)": 6,
}


def vec(*xs):
    return tuple(Scalar(x) for x in xs)


@pytest.mark.parametrize("name,count", sorted(COUNTS.items()))
def test_positive_root_counts(name, count):
    rs = build_root_system(name)
    assert rs.n_positive == count
    assert len(rs.simple_roots) == rs.rank


@pytest.mark.parametrize("name", ["B3", "D4", "F4", "H3", "H4", "I2(5)", "E6"])
def test_closed_under_reflections(name):
    rs = build_root_system(name)
    for i in range(rs.n_positive):
        for r in rs.positive_roots:
            assert rs.find(reflect(rs, i, r)) is not None


@pytest.mark.parametrize("name", ["A4", "B4", "H3", "E7"])
def test_no_parallel_roots(name):
    rs = build_root_system(name)
    lines = set()
    for r in rs.positive_roots:
        lead = next(x for x in r if x)
        lines.add(tuple(x / lead for x in r))
    assert len(lines) == rs.n_positive


def test_b2_roots_are_the_standard_forms():
    rs = build_root_system("B2")
    assert set(rs.positive_roots) == {vec(1, 0), vec(0, 1), vec(1, -1), vec(1, 1)}


def test_d_roots_have_no_short_roots():
    rs = build_root_system("D4")
    assert all(dot(r, r) == 2 for r in rs.positive_roots)


def test_h3_has_irrational_coordinates():
    rs = build_root_system("H3")
    assert any(not x.is_rational() for r in rs.positive_roots for x in r)
    assert rs.integer_matrix is None


def test_a1_single_root():
    assert build_root_system("A1").n_positive == 1


def test_reflection_examples():
    rs = build_root_system("B2")
    a = rs.index_of(vec(1, -1))
    assert reflect(rs, a, vec(1, 0)) == vec(0, 1)
    x1 = rs.index_of(vec(1, 0))
    assert reflect(rs, x1, vec(1, 0)) == vec(-1, 0)
    v = vec(3, -7)
    assert reflect(rs, a, reflect(rs, a, v)) == v


def test_reflect_index_out_of_range():
    rs = build_root_system("B2")
    with pytest.raises(IndexError):
        reflect(rs, 4, vec(1, 0))


@pytest.mark.parametrize("text", ["E5", "F3", "H2", "D1", "B0", "A0", "I2(2)", "Z3", "E"])
def test_invalid_types_rejected(text):
    with pytest.raises(InvalidTypeError):
        CoxeterType.parse(text)


def test_i2_without_coordinates_rejected():
    with pytest.raises(InvalidTypeError, match="synthetic_i2"):
        build_root_system("I2(7)")


def test_parse_round_trip():
    for text in ["A3", "B5", "D4", "E8", "F4", "H3", "H4", "I2(5)"]:
        assert str(CoxeterType.parse(text)) == text
    assert CoxeterType.parse("i2_5") == CoxeterType("I2", 2, 5)


def test_lexicographic_order_is_deterministic():
    rs = build_root_system("B2")
    assert rs.positive_roots == (vec(0, 1), vec(1, -1), vec(1, 0), vec(1, 1))
