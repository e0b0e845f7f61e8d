import random

import pytest
from hypothesis import given, strategies as st

from quadpd.groebner import groebner, s_pairs_reduce_to_zero
from quadpd.ideal import (Ideal, IdealError, element_quotient, ideal_intersect, ideal_quotient,
                          is_regular_sequence, saturation)
from quadpd.lab import scroll_ideal, tight_family
from quadpd.ring import Ring

from helpers import hilbert_function_by_linear_algebra, random_quadrics, sympy_reduced_basis

R = Ring(["x", "y", "z", "w"])
x, y, z, w = R.gens()


def ideal(*texts, ring=R):
    return Ideal(ring, [ring(t) for t in texts])


def test_reduced_basis_examples():
    # (x^2, ax + by): the product criterion must not drop x*y*b
    S = Ring(["x", "y", "a", "b"])
    G = groebner(S, [S("x^2"), S("a*x + b*y")])
    assert set(G) == {S("x^2"), S("a*x + b*y"), S("x*y*b"), S("y^2*b^2")}
    assert s_pairs_reduce_to_zero(G)
    G = groebner(R, [R("x*y - z^2"), R("y^2 - x*z")])
    assert s_pairs_reduce_to_zero(G)


def test_unit_and_zero():
    assert ideal("x", "x + 1").gb.is_unit()
    assert not ideal("x*y").gb.is_unit()
    assert Ideal(R, []).is_zero()


@pytest.mark.parametrize("seed", range(12))
def test_matches_sympy(seed):
    S = Ring(["a", "b", "c", "d"], 32003)
    polys = random_quadrics(S, 3, seed)
    assert set(groebner(S, polys)) == sympy_reduced_basis(S, polys)


def test_matches_sympy_over_rationals():
    S = Ring(["a", "b", "c"], 0)
    polys = [S("a^2 - 1/2*b*c"), S("a*b + 3*c^2"), S("b^2 - a*c")]
    assert set(groebner(S, polys)) == sympy_reduced_basis(S, polys)


@given(st.integers(0, 10 ** 6), st.permutations(range(4)))
def test_reduced_basis_is_unique_under_permutation(seed, perm):
    polys = random_quadrics(R, 4, seed)
    assert groebner(R, polys) == groebner(R, [polys[i] for i in perm])


@given(st.integers(0, 10 ** 6))
def test_normal_form_properties(seed):
    rng = random.Random(seed)
    I = Ideal(R, random_quadrics(R, 3, seed))
    f = random_quadrics(R, 1, seed + 1, terms=5)[0] * R.var(rng.randrange(4))
    r = I.normal_form(f)
    assert I.contains(f - r)
    assert I.normal_form(r) == r
    lms = I.gb.leading_monomials
    assert not any(R.divides(m, t) for t, _ in r.terms for m in lms)


def test_membership_and_equality():
    I = ideal("x^2", "y^2")
    assert I.contains(R("x^2*z + 3*y^2*w"))
    assert not I.contains(R("x*y"))
    assert ideal("x + y", "x - y") == ideal("x", "y")
    assert ideal("x^2", "x*y") <= ideal("x")


def test_colon_examples():
    I = ideal("x*y", "x*z")
    assert element_quotient(I, x) == ideal("y", "z")
    assert ideal_quotient(ideal("x^2", "y^2"), ideal("x", "y")) == ideal("x^2", "y^2", "x*y")
    with pytest.raises(IdealError):
        ideal_quotient(I, Ideal(R, []))


def test_intersection_examples():
    assert ideal_intersect(ideal("x"), ideal("y")) == ideal("x*y")
    assert ideal_intersect(ideal("x", "y"), ideal("x", "z")) == ideal("x", "y*z")


def test_saturation():
    I = ideal("x^2", "x*y")
    assert saturation(I, ideal("x", "y")) == ideal("x")


def test_dimension_and_height():
    assert ideal("x", "y").dimension() == 2
    assert ideal("x*y").height() == 1
    assert Ideal(R, []).dimension() == 4
    assert scroll_ideal().height() == 2
    with pytest.raises(IdealError):
        ideal("1").dimension()


def test_hilbert_examples():
    S = Ring(["x", "y"])
    h = Ideal(S, [S("x^2"), S("x*y"), S("y^2")]).hilbert()
    assert (h.numerator, h.dimension) == ((1, 2), 0)
    assert scroll_ideal().hilbert().numerator == (1, 2)
    assert scroll_ideal().multiplicity() == 3
    assert Ideal(R, []).multiplicity() == 1


def test_complete_intersection_multiplicity_is_product_of_degrees():
    assert ideal("x^2 + y*z", "y^2 - z*w").multiplicity() == 4
    assert ideal("x^2", "y^3", "z").multiplicity() == 6


def test_tight_family_multiplicity():
    assert tight_family(3).multiplicity() == 2
    for n in (4, 5, 6):
        assert tight_family(n).multiplicity() == 1


@given(st.integers(0, 10 ** 6), st.integers(1, 4))
def test_hilbert_series_matches_linear_algebra(seed, k):
    I = Ideal(R, random_quadrics(R, k, seed))
    series = I.hilbert().series(5)
    assert series == [hilbert_function_by_linear_algebra(I, d) for d in range(5)]


def test_regular_sequences():
    assert is_regular_sequence([x * x, y * y, z])
    assert not is_regular_sequence([x * y, x * z])
    assert is_regular_sequence([R("x*y - z^2"), R("x^2 + w^2")])


@given(st.integers(0, 10 ** 6))
def test_colon_by_product_identity(seed):
    # (I + (x f)) : x = I : x + (f)
    rng = random.Random(seed)
    I = Ideal(R, random_quadrics(R, 2, seed))
    f = R.var(rng.randrange(4)) + R.var(rng.randrange(4))
    lhs = ideal_quotient(I + Ideal(R, [x * f]), x)
    rhs = ideal_quotient(I, x) + Ideal(R, [f])
    assert lhs == rhs


@given(st.integers(0, 10 ** 6))
def test_colon_times_element_lies_in_ideal(seed):
    I = Ideal(R, random_quadrics(R, 3, seed))
    g = random_quadrics(R, 1, seed + 3, terms=2)[0]
    Q = ideal_quotient(I, g)
    assert all(I.contains(q * g) for q in Q.generators)
    assert Q.contains_ideal(I)
