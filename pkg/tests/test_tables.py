from fractions import Fraction

import pytest

from nilcohom.errors import TableError
from nilcohom.scalars import QI
from nilcohom.tables import (
    format_table,
    parse_symbolic,
    parse_table,
    parse_vector,
)


def test_single_bracket():
    mu = parse_table("ab = c", 3)
    assert mu.c == {(0, 1): {2: Fraction(1)}}
    assert mu.n == 3


def test_unlisted_pairs_are_zero_and_reversed_pairs_negate():
    mu = parse_table("ba = c", 3)
    assert mu.c == {(0, 1): {2: Fraction(-1)}}
    assert mu.bracket_basis(0, 2) == {}


def test_parameter_substitution_example():
    # be = rtf+(1-t)g at r=0, t=2: the f-coefficient drops, the g one is -1
    mu = parse_table("be = rtf+(1-t)g", 7, {"r": 0, "t": 2})
    assert mu.bracket_basis(1, 4) == {6: Fraction(-1)}


def test_precedence_and_fractions():
    mu = parse_table("ab = (1+t^3/2)c, ac = 1/2d", 4, {"t": 2})
    assert mu.entry(0, 1, 2) == Fraction(5)
    assert mu.entry(0, 2, 3) == Fraction(1, 2)


def test_gaussian_unit():
    mu = parse_table("ab = ic", 3)
    assert mu.field == "Qi"
    assert mu.entry(0, 1, 2) == QI(0, 1)


def test_errors_have_positions():
    with pytest.raises(TableError):
        parse_table("ab = z", 3)  # letter beyond the dimension
    with pytest.raises(TableError):
        parse_table("ab = c", 2)  # c outside dim 2
    with pytest.raises(TableError):
        parse_table("ab = tc", 3)  # undeclared parameter symbol
    with pytest.raises(TableError):
        parse_table("aa = c", 3)
    with pytest.raises(TableError):
        parse_table("ab = c, ab = d", 4)
    with pytest.raises(TableError):
        parse_table("ab = 3", 3)  # scalar right-hand side
    err = None
    try:
        parse_table("ab = c,\nac = ?", 3)
    except TableError as e:
        err = e
    assert err is not None and err.line == 2


def test_symbolic_derivative_is_exact():
    tab = parse_symbolic("ab = rtc + t^2d", 4, params=("r", "t"))
    dt = tab.derivative("t")
    mu = dt.evaluate({"r": Fraction(3), "t": Fraction(5)})
    assert mu.entry(0, 1, 2) == 3  # d/dt (rt) = r
    assert mu.entry(0, 1, 3) == 10  # d/dt t^2 = 2t
    assert tab.derivative("r").derivative("r").evaluate({"r": 0, "t": 0}).is_abelian()


def test_unresolved_parameters_rejected():
    tab = parse_symbolic("ab = tc", 3, params=("t",))
    with pytest.raises(TableError):
        tab.evaluate({})


def test_vector_expressions():
    vecs = parse_vector("2t(tb-d)", 4, params=("t",))
    assert [p.evaluate({"t": 3}) for p in vecs] == [0, 18, 0, -6]
    with pytest.raises(TableError):
        parse_vector("ab", 4)  # product of two letters
    with pytest.raises(TableError):
        parse_vector("a+1", 4)  # scalar part


def test_table_text_round_trip():
    sources = [
        "ab = c, ac = d, ad = e, bc = e, be = f, cd = -f",
        "ab = d, ad = e, bc = e",
        "ab = 3c, ac = -1/2d",
    ]
    for src in sources:
        mu = parse_table(src, 6)
        again = parse_table(format_table(mu), 6)
        assert again == mu


def test_gaussian_table_round_trip():
    mu = parse_table("ab = (0+1 i)c, ac = (1/2-3/4 i)d", 4)
    again = parse_table(format_table(mu), 4)
    assert again == mu


def test_family_identification_on_the_nilpotent_line(catalog):
    # the surface at r=0 is the printed nilpotent curve, parameter for parameter
    for t in (Fraction(1), Fraction(5), Fraction(-2)):
        a = catalog.structure("g_5(r,t)", {"r": 0, "t": t})
        b = catalog.structure("g_1(t)", {"t": t})
        assert a == b
        a = catalog.structure("g_6(r,t)", {"r": 0, "t": t})
        b = catalog.structure("g_I(t)", {"t": t})
        assert a == b
