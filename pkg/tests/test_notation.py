"""Parser/printer round trips and error positions."""

import pytest

from cbound.notation import (
    ParseError,
    parse_braid,
    parse_ovals,
    parse_pd,
    parse_poly,
    render_braid,
    render_ovals,
    render_pd,
    render_poly,
)


def test_braid_round_trip():
    b = parse_braid("BR[3,{1,-2,1,2,-1,2}]")
    assert b.strands == 3
    assert b.letters == (1, -2, 1, 2, -1, 2)
    assert parse_braid(render_braid(b)) == b


def test_braid_whitespace_and_newlines():
    a = parse_braid("BR[ 4 , { 1 ,\n -3 , 2 } ]")
    assert a == parse_braid("BR[4,{1,-3,2}]")


def test_empty_braid_word():
    b = parse_braid("BR[2,{}]")
    assert b.letters == ()
    assert render_braid(b) == "BR[2, {}]"


@pytest.mark.parametrize("bad", [
    "BR[3,{1,-2,",          # truncated
    "BR[3,{1,0,2}]",        # zero is not a generator
    "BR[2,{1,2}]",          # generator out of range
    "BR[1.5,{1}]",          # strand count must be an integer
    "{1,2}",                # missing head
])
def test_braid_errors(bad):
    with pytest.raises(ParseError):
        parse_braid(bad)


def test_braid_error_position():
    with pytest.raises(ParseError) as ei:
        parse_braid("BR[3,\n{1, x}]")
    assert ei.value.line == 2
    # the offending token is the name 'x'
    assert "x" in str(ei.value)


def test_poly_hand_written_shapes():
    # division style, parenthesised exponents, and caret style all agree
    p = parse_poly("2-3*v^2 + v^4 + z^(-2)-(2*v^2)/z^2 + v^4/z^2-v^2*z^2")
    q = parse_poly("2 - 3*v^2 + v^4 + z^-2 - 2*v^2*z^-2 + v^4*z^-2 - v^2*z^2")
    assert p == q
    assert parse_poly(render_poly(p)) == p


def test_poly_nested_denominator():
    p = parse_poly("-3/v^6 + 1/(v^8*z^2)")
    q = parse_poly("-3*v^-6 + v^-8*z^-2")
    assert p == q


def test_poly_constants():
    assert parse_poly("1") == parse_poly("3 - 2")
    assert render_poly(parse_poly("0")) == "0"


def test_poly_rejects_unknown_variable():
    with pytest.raises(ParseError):
        parse_poly("2*w^2")


def test_pd_round_trip():
    text = "PD[X[4,2,5,1],X[2,4,3,3],X[5,1,6,6]]"
    d = parse_pd(text, unknots=0)
    assert render_pd(d) == text


def test_pd_bare_needs_unknot_count():
    with pytest.raises(ParseError):
        parse_pd("PD[]")
    d = parse_pd("PD[]", unknots=2)
    assert len(d.crossings) == 0


def test_pd_tuple_arity():
    with pytest.raises(ParseError):
        parse_pd("PD[X[1,2,3]]", unknots=0)


def test_ovals_round_trip(fixtures_dir):
    text = (fixtures_dir / "wermer.ovals").read_text()
    f = parse_ovals(text)
    assert f.ids() == [1, 2, 3]
    assert parse_ovals(render_ovals(f)).ids() == [1, 2, 3]


def test_ovals_reject_unknown_parent():
    with pytest.raises(ParseError, match="missing parent"):
        parse_ovals("1 7 1 0 0 0.5")


def test_ovals_reject_duplicate_ids():
    with pytest.raises(ParseError, match="duplicate"):
        parse_ovals("1 0 1 0 0 0.5\n1 0 2 1 1 0.3")


def test_ovals_comment_lines():
    f = parse_ovals("# a single oval\n1 0 2 0 0 0.5\n")
    assert [o.winding for o in f.ovals] == [2]
