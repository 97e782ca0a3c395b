import itertools

import pytest
import sympy
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from legreuel.ideal_ops import (
    INFINITE,
    count_standard_monomials,
    eliminate,
    hilbert_multiplicity,
    hilbert_series,
    ideal_colon,
    ideal_intersect,
    ideal_saturate,
    ideal_sum,
    krull_dim,
    poly_gcd,
    squarefree_part,
    vdim,
)
from legreuel.ring import GLOBAL, LOCAL, RingSpec
from legreuel.stdbasis import Ideal, ideal_contains, ideal_equal

from strategies import polynomials
from test_ring import to_sympy

L3 = RingSpec(("x", "y", "z"), LOCAL)
G3 = RingSpec(("x", "y", "z"), GLOBAL)


def brute_staircase(gens, box):
    return sum(
        1 for m in itertools.product(*[range(b) for b in box])
        if not any(all(a <= b for a, b in zip(g, m)) for g in gens))


def test_xyz_saturation():
    x, y, z = L3.gens()
    f = x * y * z
    # 2-minors of the Jacobian of (xyz, x+y+z)
    J = Ideal(L3, [y * z - x * z, y * z - x * y, x * z - x * y])
    sat, k = ideal_saturate(J, f)
    assert ideal_equal(sat, Ideal(L3, [y - z, y - x]))
    assert vdim(ideal_sum(sat, Ideal(L3, [f]))) == 3


def test_local_global_contrast():
    for ring, want in ((RingSpec(("x",), LOCAL), 2), (RingSpec(("x",), GLOBAL), 3)):
        x = ring.var(0)
        assert vdim(Ideal(ring, [x ** 2 - x ** 3])) == want


def test_vdim_unit_and_infinite():
    x, y, z = L3.gens()
    assert vdim(Ideal(L3, [L3.one()])) == 0
    assert vdim(Ideal(L3, [x * y])) == INFINITE
    assert vdim(Ideal(L3, [x + x * x, y, z])) == 1


def test_intersection_and_colon():
    x, y, z = G3.gens()
    a, b = Ideal(G3, [x]), Ideal(G3, [y])
    assert ideal_equal(ideal_intersect(a, b), Ideal(G3, [x * y]))
    c = ideal_colon(Ideal(G3, [x * y, x * z]), x)
    assert ideal_equal(c, Ideal(G3, [y, z]))


def test_saturation_exponent():
    x, y, z = G3.gens()
    sat, k = ideal_saturate(Ideal(G3, [x ** 3 * y, x ** 2 * z]), x)
    assert ideal_equal(sat, Ideal(G3, [y, z])) and k == 3


def test_eliminate_twisted_parametrization():
    R = RingSpec(("t", "x", "y"), GLOBAL)
    t, x, y = R.gens()
    e = eliminate(Ideal(R, [x - t ** 2, y - t ** 3]), [0])
    assert ideal_equal(e, Ideal(R, [x ** 3 - y ** 2]))


def test_dimension_and_multiplicity():
    x, y, z = L3.gens()
    axes = Ideal(L3, [x * y, y * z, x * z])
    assert krull_dim(axes) == 1
    assert hilbert_multiplicity(axes) == 3
    assert hilbert_multiplicity(Ideal(L3, [x ** 2 - y ** 3, z])) == 2
    assert krull_dim(Ideal(L3, [])) == 3
    assert krull_dim(Ideal(L3, [L3.one()])) == -1
    with pytest.raises(ValueError):
        hilbert_multiplicity(Ideal(L3, [L3.one()]))


def test_hilbert_series_of_plane_curve():
    x, y, _ = G3.gens()
    hs = hilbert_series(Ideal(G3, [x ** 3 + y ** 3]))
    assert (hs.dim, hs.degree) == (2, 3)


def test_squarefree():
    R = RingSpec(("x", "y"), GLOBAL)
    x, y = R.gens()
    f = (x - y) ** 3 * (x + y) ** 2 * x
    assert squarefree_part(f) == ((x - y) * (x + y) * x).monic()


@given(st.lists(st.tuples(*[st.integers(0, 5)] * 3), max_size=5),
       st.tuples(*[st.integers(1, 9)] * 3))
def test_staircase_count_matches_enumeration(gens, pure):
    gens = list(gens) + [tuple(p if i == j else 0 for j in range(3)) for i, p in enumerate(pure)]
    assert count_standard_monomials(gens, 3) == brute_staircase(gens, pure)


@given(st.lists(st.tuples(*[st.integers(0, 4)] * 3), min_size=1, max_size=4))
def test_missing_pure_power_means_infinite(gens):
    assume(not any(sum(1 for e in g if e) == 1 and g[0] for g in gens))
    assume(not any(g == (0, 0, 0) for g in gens))
    assert count_standard_monomials(gens, 3) == INFINITE


@st.composite
def zero_dim_local(draw):
    x, y, z = L3.gens()
    gens = []
    for v in (x, y, z):
        a = draw(st.integers(1, 3))
        tail = draw(polynomials(L3, max_terms=2, max_exp=1))
        gens.append(v ** a + tail * (x + y + z) ** (a + 1))
    gens += draw(st.lists(polynomials(L3, max_terms=3, max_exp=2), max_size=1))
    return Ideal(L3, gens)


@settings(max_examples=25)
@given(zero_dim_local())
def test_vdim_equals_staircase_of_leading_ideal(i):
    v = vdim(i)
    lead = i.std().leading_ideal
    if lead == [(0, 0, 0)]:
        assert v == 0
        return
    box = [min(g[j] for g in lead if g[j] and sum(g) == g[j]) for j in range(3)]
    assert v == brute_staircase(lead, box) <= 10 ** 4


@settings(max_examples=25)
@given(st.lists(polynomials(L3, max_terms=3, max_exp=2), min_size=1, max_size=3),
       polynomials(L3, max_terms=2, max_exp=2))
def test_saturation_is_idempotent(gens, f):
    assume(not f.is_zero())
    i = Ideal(L3, gens)
    s1, k1 = ideal_saturate(i, f)
    s2, _ = ideal_saturate(s1, f)
    assert k1 >= 1
    assert ideal_equal(s1, s2)
    for g in i.generators:
        assert ideal_contains(s1, g)


@settings(max_examples=25)
@given(st.lists(polynomials(G3, max_terms=3, max_exp=2), min_size=1, max_size=2),
       st.lists(polynomials(G3, max_terms=3, max_exp=2), min_size=1, max_size=2))
def test_intersection_properties(ga, gb):
    a, b = Ideal(G3, ga), Ideal(G3, gb)
    c = ideal_intersect(a, b)
    for g in c.generators:
        assert ideal_contains(a, g) and ideal_contains(b, g)
    for p in a.generators:
        for q in b.generators:
            assert ideal_contains(c, p * q)


@settings(max_examples=25)
@given(st.lists(polynomials(G3, max_terms=3, max_exp=2), min_size=1, max_size=2),
       polynomials(G3, max_terms=2, max_exp=2))
def test_colon_property(gens, f):
    assume(not f.is_zero())
    i = Ideal(G3, gens)
    c = ideal_colon(i, f)
    for g in c.generators:
        assert ideal_contains(i, g * f)


@settings(max_examples=40)
@given(polynomials(RingSpec(("x", "y"), GLOBAL), max_terms=3, max_exp=3),
       polynomials(RingSpec(("x", "y"), GLOBAL), max_terms=3, max_exp=3))
def test_gcd_matches_sympy(a, b):
    assume(not a.is_zero() and not b.is_zero())
    g = poly_gcd(a, b)
    expected = sympy.gcd(to_sympy(a), to_sympy(b))
    assert sympy.simplify(to_sympy(g) / expected).is_constant()
