from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from signedmoments.moments import (
    MomentSequence,
    Polynomial,
    SignedAtomicMeasure,
    affine_substitute,
    basis_size,
    enumerate_basis,
    eval_poly,
    integrate,
    measure_from_json,
    measure_to_json,
    moments_from_json,
    moments_of,
    moments_to_json,
    polynomial_from_json,
    polynomial_to_json,
)
from signedmoments.numeric import EXACT, FLOAT, mode_of, parse_scalar, format_scalar

from oracles import monomial_moments

small = st.fractions(min_value=-5, max_value=5, max_denominator=6)


def test_basis_order_d2():
    assert enumerate_basis(2, 2) == [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)]


@pytest.mark.parametrize("d,N", [(1, 0), (1, 5), (2, 4), (3, 6)])
def test_basis_size_matches_enumeration(d, N):
    basis = enumerate_basis(d, N)
    assert len(basis) == basis_size(d, N) == len(set(basis))
    assert all(sum(a) <= N for a in basis)


def test_basis_rejects_bad_arguments():
    with pytest.raises(ValueError):
        enumerate_basis(0, 2)
    with pytest.raises(ValueError):
        enumerate_basis(2, -1)


def test_zero_polynomial_degree():
    z = Polynomial(2, {(1, 0): 0})
    assert z.is_zero() and z.degree == float("-inf")


def test_polynomial_str():
    p = Polynomial.coordinate(2, 0) * Polynomial.coordinate(2, 1)
    assert str(p) == "x1*x2"


def test_eval_dimension_mismatch():
    with pytest.raises(ValueError):
        eval_poly(Polynomial.coordinate(2, 0), (1,))


def _to_sympy(p, xs):
    return sum((sympy.Rational(str(c)) * sympy.prod([x**k for x, k in zip(xs, a)]) for a, c in p.terms.items()), sympy.Integer(0))


polys = st.dictionaries(
    st.tuples(st.integers(0, 3), st.integers(0, 3)), st.integers(-4, 4), max_size=5
).map(lambda t: Polynomial(2, {a: Fraction(c) for a, c in t.items()}))


@settings(max_examples=60, deadline=None)
@given(polys, polys)
def test_product_matches_sympy(p, q):
    xs = sympy.symbols("x1 x2")
    assert sympy.expand(_to_sympy(p * q, xs) - _to_sympy(p, xs) * _to_sympy(q, xs)) == 0
    assert sympy.expand(_to_sympy(p - q, xs) - (_to_sympy(p, xs) - _to_sympy(q, xs))) == 0


@settings(max_examples=40, deadline=None)
@given(polys, small, small, st.integers(1, 3), st.integers(1, 3))
def test_affine_substitute_matches_sympy(p, c1, c2, h1, h2):
    xs = sympy.symbols("x1 x2")
    P = affine_substitute(p, (c1, c2), (Fraction(h1), Fraction(h2)))
    sub = _to_sympy(p, xs).subs(
        {xs[0]: (xs[0] - sympy.Rational(str(c1))) / h1, xs[1]: (xs[1] - sympy.Rational(str(c2))) / h2},
        simultaneous=True,
    )
    assert sympy.expand(_to_sympy(P, xs) - sub) == 0


def test_weight_polynomial():
    w = Polynomial.weight(2, 2)
    assert w((Fraction(1), Fraction(2))) == 36


atoms2 = st.lists(st.tuples(st.tuples(small, small), small), max_size=6, unique_by=lambda t: t[0])


@settings(max_examples=60, deadline=None)
@given(atoms2, st.integers(0, 4))
def test_moments_of_matches_direct_sum(atoms, N):
    mu = SignedAtomicMeasure(2, tuple(atoms))
    s = moments_of(mu, N)
    basis = enumerate_basis(2, N)
    expected = monomial_moments([p for p, _ in atoms], [w for _, w in atoms], basis)
    assert s.vector() == expected


def test_moments_of_empty_is_zero_exact():
    s = moments_of(SignedAtomicMeasure.empty(2), 3)
    assert s.mode == EXACT and all(v == 0 for v in s.vector())


def test_integrate_linear():
    mu = SignedAtomicMeasure.from_lists([(1,), (2,)], [Fraction(2), Fraction(-3)])
    assert integrate(mu, Polynomial.coordinate(1, 0, 2)) == 2 - 12


def test_measure_rejects_duplicates_and_drops_zeros():
    with pytest.raises(ValueError):
        SignedAtomicMeasure.from_lists([(1,), (1,)], [1, 2])
    mu = SignedAtomicMeasure.from_lists([(1,), (2,)], [Fraction(0), Fraction(1)])
    assert mu.points == [(2,)]


def test_measure_totals():
    mu = SignedAtomicMeasure.from_lists([(1,), (2,)], [Fraction(2), Fraction(-3)])
    assert mu.total_variation == 5 and mu.total_mass == -1


def test_moment_sequence_requires_all_entries():
    with pytest.raises(ValueError):
        MomentSequence(1, 2, {(0,): Fraction(1), (1,): Fraction(0)})


def test_moment_sequence_rejects_mixed_modes():
    with pytest.raises(ValueError):
        MomentSequence(1, 1, {(0,): Fraction(1), (1,): 0.5})


def test_mode_of():
    assert mode_of([]) is None
    assert mode_of([Fraction(1), 2]) == EXACT
    assert mode_of([1.0]) == FLOAT


def test_scalar_json():
    assert format_scalar(Fraction(-3, 4)) == "-3/4"
    assert parse_scalar("-3/4") == Fraction(-3, 4)
    assert parse_scalar(0.5) == 0.5
    with pytest.raises(ValueError):
        parse_scalar(True)


@settings(max_examples=40, deadline=None)
@given(atoms2, st.integers(0, 3))
def test_json_round_trips(atoms, N):
    mu = SignedAtomicMeasure(2, tuple(atoms))
    assert measure_from_json(measure_to_json(mu)) == mu
    s = moments_of(mu, N)
    assert moments_from_json(moments_to_json(s)) == s
    p = Polynomial(2, {a: w for a, w in zip(enumerate_basis(2, 2), [w for _, w in atoms])})
    assert polynomial_from_json(polynomial_to_json(p)) == p


def test_float_round_trip():
    s = MomentSequence.from_vector(1, 1, [0.25, -1.5])
    assert moments_from_json(moments_to_json(s)).vector() == [0.25, -1.5]
