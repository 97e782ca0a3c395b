import pytest
from hypothesis import given
from hypothesis import strategies as st

from legreuel.errors import ParseError
from legreuel.parser import (
    Command,
    IdealDecl,
    MatrixDecl,
    PolyDecl,
    RingDecl,
    ScriptAST,
    parse_polynomial,
    parse_script,
    tokenize,
)
from legreuel.ring import GLOBAL, LOCAL, RingSpec

from strategies import polynomials

R = RingSpec(("x", "y", "z", "t"), LOCAL)

TWO_PLANES = """
ring (x,y,z,t) local;
ideal i1 = x, y;
ideal i2 = z, t;
ideal X = intersect(i1, i2);
poly f = (x+y+z+t)^3;
chi(X, f);
"""


def test_monomial():
    x, y, z, _ = R.gens()
    assert parse_polynomial("x*y*z", R) == x * y * z


def test_cube_has_twenty_terms():
    assert len(parse_polynomial("(x+y+z+t)^3", R)) == 20


def test_precedence_and_unary_minus():
    x, y, z, _ = R.gens()
    assert parse_polynomial("-x^2*y + 3*z", R) == -(x ** 2) * y + 3 * z
    assert parse_polynomial("-(x+y)^2", R) == -((x + y) ** 2)
    assert parse_polynomial("x - y - z", R) == x - y - z


def test_rational_literals():
    x = R.var("x")
    p = parse_polynomial("3/4*x + 1/2", R)
    assert p == x * R.const("3/4") + R.const("1/2")


@pytest.mark.parametrize("src, col", [("x^-1", 3), ("3x", 1), ("(x+y", 5), ("x+q", 3),
                                      ("x^y", 3), ("x/y", 2)])
def test_errors_carry_spans(src, col):
    with pytest.raises(ParseError) as info:
        parse_polynomial(src, R)
    assert info.value.span == (1, col)


def test_two_planes_script():
    ast = parse_script(TWO_PLANES)
    kinds = [type(s) for s in ast.statements]
    assert kinds == [RingDecl, IdealDecl, IdealDecl, IdealDecl, PolyDecl, Command]
    assert ast.statements[3].exprs[0].name == "intersect"
    assert ast.statements[-1].name == "chi"
    assert ast.ring.order == "local"


def test_empty_script():
    assert parse_script("") == ScriptAST(())
    assert parse_script("# only a comment\n") == ScriptAST(())


def test_use_before_declare_names_the_identifier():
    with pytest.raises(ParseError) as info:
        parse_script("ring (x) local;\npoly f = x + g;\n")
    assert "'g'" in str(info.value) and info.value.span == (2, 14)


def test_duplicate_ring_and_unknown_command():
    with pytest.raises(ParseError, match="at most one ring"):
        parse_script("ring (x) local; ring (y) global;")
    with pytest.raises(ParseError, match="unknown command 'frobnicate'"):
        parse_script("ring (x) local; frobnicate(x);")


def test_matrix_declaration():
    ast = parse_script("ring (a,b) global; matrix M[2][2] = a, b, -b, a;")
    m = ast.statements[1]
    assert isinstance(m, MatrixDecl) and (m.rows, m.cols) == (2, 2) and len(m.exprs) == 4


def test_spans_non_decreasing():
    toks = tokenize(TWO_PLANES)
    spans = [t.span for t in toks]
    assert spans == sorted(spans)


@given(polynomials(RingSpec(("x", "y", "z"), GLOBAL), max_terms=6, max_exp=5,
                   coeffs=st.fractions(max_denominator=50)))
def test_round_trip(p):
    assert parse_polynomial(str(p), p.ring) == p


@given(st.text(alphabet="xyz0123456789+-*/^()=,;[]# \n_abcdefghijklmnopqrstuvw", max_size=60))
def test_parsing_is_total(src):
    try:
        parse_script(src)
    except ParseError as exc:
        assert exc.span is not None


@given(st.text(max_size=30))
def test_polynomial_parsing_is_total(src):
    try:
        parse_polynomial(src, R)
    except ParseError:
        pass


def test_exponent_bound():
    with pytest.raises(ParseError, match="exceeds"):
        parse_polynomial("x^99999", R)


def test_deep_nesting_is_an_error_not_a_crash():
    with pytest.raises(ParseError, match="nested"):
        parse_polynomial("(" * 5000 + "x" + ")" * 5000, R)
