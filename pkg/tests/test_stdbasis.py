import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from legreuel.ring import GLOBAL, LOCAL, RingSpec
from legreuel.stdbasis import (
    Ideal,
    ideal_contains,
    ideal_equal,
    mora_normal_form,
    std_basis,
)

from strategies import polynomials
from test_ring import to_sympy

L = RingSpec(("x", "y"), LOCAL)
G = RingSpec(("x", "y"), GLOBAL)


def leading(i, **kw):
    return sorted(std_basis(i, **kw).leading_ideal)


def test_unit_membership_locally():
    x, _ = L.gens()
    assert mora_normal_form(x, [x - x * x]).is_zero()
    xg, _ = G.gens()
    assert not mora_normal_form(xg, [xg - xg * xg]).is_zero()


def test_units_generate_the_unit_ideal_locally():
    x, y = L.gens()
    assert std_basis(Ideal(L, [1 + x + y * y])).is_unit()
    assert not std_basis(Ideal(G, [G.one() + G.var(0)])).is_unit()


def test_cusp_tangent_cone():
    x, y = L.gens()
    i = Ideal(L, [x ** 2 - y ** 3, x * y])
    lead = set(leading(i))
    assert (2, 0) in lead and (1, 1) in lead


def test_equal_ideals_different_generators():
    x, y = L.gens()
    a = Ideal(L, [x, y])
    b = Ideal(L, [x + y * y, y - x * y])
    assert ideal_equal(a, b)
    assert ideal_contains(b, x * y + y)
    assert not ideal_contains(Ideal(L, [x * y]), x)


@settings(max_examples=30)
@given(st.lists(polynomials(G, max_terms=4, max_exp=3), min_size=1, max_size=3))
def test_groebner_matches_sympy(gens):
    i = Ideal(G, gens)
    ours = sorted(leading(i))
    syms = sympy.symbols("x y")
    exprs = [to_sympy(g) for g in i.generators]
    if not exprs:
        assert ours == []
        return
    gb = sympy.groebner(exprs, *syms, order="grevlex")
    theirs = [sympy.Poly(g, *syms).monoms(order="grevlex")[0] for g in gb.exprs]
    assert ours == sorted(theirs)


@settings(max_examples=30)
@given(st.lists(polynomials(L, max_terms=3, max_exp=3), min_size=1, max_size=3),
       st.sampled_from(["normal", "sugar"]))
def test_strategy_does_not_change_leading_ideal(gens, strategy):
    i = Ideal(L, gens)
    assert leading(i) == leading(Ideal(L, gens), strategy=strategy)


@settings(max_examples=30)
@given(st.lists(polynomials(L, max_terms=3, max_exp=3), min_size=1, max_size=3))
def test_homogenized_and_mora_agree(gens):
    i = Ideal(L, gens)
    assert leading(i) == leading(Ideal(L, gens), method="mora")


@settings(max_examples=30)
@given(st.lists(polynomials(L, max_terms=3, max_exp=3), min_size=1, max_size=3),
       polynomials(L, max_terms=3, max_exp=3))
def test_generators_reduce_to_zero(gens, mult):
    i = Ideal(L, gens)
    for g in i.generators:
        assert ideal_contains(i, g * mult)
    sb = i.std()
    for g in i.generators:
        assert sb.normal_form(g).is_zero()
