import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from signedmoments.construct import (
    MatchProblem,
    Objective,
    RankDeficientError,
    construct_signed_measure,
    jordan_decompose,
    polya_construct_1d,
    verify_match,
)
from signedmoments.linalg import SingularSystemError
from signedmoments.moments import MomentSequence, SignedAtomicMeasure, basis_size, enumerate_basis, moments_of
from signedmoments.numeric import EXACT, FLOAT
from signedmoments.support import PointSequence1D, SampledSet, contains, sample

from catalog import CATALOG, GRID5, NATURALS, SQUARES
from oracles import brute_force_min_l1, highs_min_l1, monomial_moments, rational_solve

F = Fraction


def _target(d, N, values):
    return MomentSequence.from_vector(d, N, [F(v) for v in values])


def test_polya_three_nodes_matches_rational_oracle():
    r = polya_construct_1d(_target(1, 2, [1, 0, 0]), [1, 2, 3])
    A = [[F(x) ** k for x in (1, 2, 3)] for k in range(3)]
    assert r.measure.weights == rational_solve(A, [1, 0, 0]) == [3, -3, 1]
    assert r.measure.points == [(1,), (2,), (3,)]


def test_polya_realizable_target_drops_zero_weights():
    delta = moments_of(SignedAtomicMeasure.from_lists([(F(4),)], [F(1)]), 3)
    r = polya_construct_1d(delta, [4, 5, 6, 7])
    assert r.measure.atoms == (((4,), 1),)


def test_polya_zero_target_is_empty():
    r = polya_construct_1d(_target(1, 3, [0, 0, 0, 0]), SQUARES)
    assert len(r.measure) == 0 and r.total_variation == 0


def test_polya_duplicate_nodes_report_pair():
    with pytest.raises(SingularSystemError) as exc:
        polya_construct_1d(_target(1, 2, [1, 0, 0]), [1, 2, 1])
    assert exc.value.pair == (0, 2)


def test_polya_too_few_nodes():
    with pytest.raises(ValueError):
        polya_construct_1d(_target(1, 3, [1, 0, 0, 0]), [1, 2, 3])


def test_polya_float_mode():
    r = polya_construct_1d(MomentSequence.from_vector(1, 2, [1.0, 0.0, 0.0]), [1, 2, 3])
    assert r.measure.weights == pytest.approx([3.0, -3.0, 1.0])


def test_grid_delta_min_tv_single_atom():
    delta = moments_of(SignedAtomicMeasure.from_lists([(1, 1)], [F(1)]), 2)
    prob = MatchProblem(delta, GRID5, 25, Objective.MIN_TV)
    r = construct_signed_measure(prob)
    assert r.total_variation == 1 and r.measure.points == [(1, 1)]
    A = [[F(x) ** a[0] * F(y) ** a[1] for x, y in sample(GRID5, 25)] for a in enumerate_basis(2, 2)]
    assert abs(highs_min_l1(A, delta.vector()) - 1.0) < 1e-9


def test_zero_target_gives_empty_measure():
    r = construct_signed_measure(MatchProblem(_target(2, 4, [0] * 15), CATALOG["full2"]))
    assert len(r.measure) == 0 and r.total_variation == 0


def test_naturals_min_tv_default_budget():
    r = construct_signed_measure(MatchProblem(_target(1, 1, [0, 1]), NATURALS, objective=Objective.MIN_TV))
    assert r.measure.atoms == (((1,), -1), ((2,), 1)) and r.total_variation == 2


def test_rank_deficient_samples_raise_with_certificate():
    K = SampledSet(2, tuple((F(t), F(0)) for t in range(1, 11)))
    with pytest.raises(RankDeficientError) as exc:
        construct_signed_measure(MatchProblem(_target(2, 1, [1, 0, 0]), K))
    cert = exc.value.certificate
    assert cert is not None and all(cert(p) == 0 for p in K.points)


def test_dimension_mismatch_rejected():
    with pytest.raises(ValueError):
        MatchProblem(_target(1, 1, [1, 0]), GRID5)


SUPPORTS = ["full1", "full2", "full3", "orthant2", "orthant3", "grid5", "grid_inf", "strip", "strip3", "box2", "squares", "cone", "cone_wide", "sampled"]


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(SUPPORTS), st.data())
def test_exact_residuals_vanish_and_atoms_stay_in_support(name, data):
    K = CATALOG[name]
    d = K.dimension
    N = data.draw(st.integers(0, {1: 6, 2: 4, 3: 3}[d]))
    if K.max_points() is not None and K.max_points() < basis_size(d, N):
        N = 1
    M = basis_size(d, N)
    s = _target(d, N, data.draw(st.lists(st.integers(-20, 20), min_size=M, max_size=M)))
    prob = MatchProblem(s, K)
    r = construct_signed_measure(prob, seed=data.draw(st.integers(0, 10**6)))
    assert all(v == 0 for v in r.residuals.values())
    assert all(contains(K, p) for p in r.measure.points)
    assert monomial_moments(r.measure.points, r.measure.weights, s.basis) == s.vector()
    assert verify_match(r, prob).ok


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(["full1", "full2", "orthant2", "grid5", "squares", "strip"]), st.data())
def test_float_solutions_meet_residual_contract(name, data):
    K = CATALOG[name]
    d = K.dimension
    N = data.draw(st.integers(0, 4))
    M = basis_size(d, N)
    s = MomentSequence.from_vector(d, N, data.draw(st.lists(st.floats(-10, 10), min_size=M, max_size=M)))
    prob = MatchProblem(s, K)
    r = construct_signed_measure(prob, FLOAT)
    v = verify_match(r, prob)
    assert v.max_rel_residual <= 1e-9 and v.ok
    assert all(contains(K, p) for p in r.measure.points)


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 3), st.integers(3, 12), st.data())
def test_min_tv_matches_brute_force_and_beats_any(m, n, data):
    nodes = data.draw(st.lists(st.integers(-6, 12), min_size=max(n, m), max_size=max(n, m), unique=True))
    K = SampledSet(1, tuple((F(x),) for x in nodes))
    s = _target(1, m - 1, data.draw(st.lists(st.integers(-5, 5), min_size=m, max_size=m)))
    prob = MatchProblem(s, K, len(nodes), Objective.MIN_TV)
    r = construct_signed_measure(prob)
    pts = sample(K, len(nodes), None)
    A = [[F(p[0]) ** k for p in pts] for k in range(m)]
    assert r.total_variation == brute_force_min_l1(A, s.vector())
    any_tv = construct_signed_measure(MatchProblem(s, K, len(nodes))).total_variation
    assert r.total_variation <= any_tv
    assert all(v == 0 for v in r.residuals.values())


def test_min_tv_float_large_instance_uses_float_simplex():
    rng = random.Random(3)
    s = MomentSequence.from_vector(2, 2, [rng.uniform(-1, 1) for _ in range(6)])
    prob = MatchProblem(s, CATALOG["full2"], 120, Objective.MIN_TV)
    r = construct_signed_measure(prob, FLOAT)
    assert r.diagnostics["solver"] == "simplex-float"
    assert verify_match(r, prob).max_rel_residual <= 1e-9


atoms = st.lists(
    st.tuples(st.tuples(st.integers(-5, 5), st.integers(-5, 5)), st.fractions(-5, 5, max_denominator=4)),
    max_size=8,
    unique_by=lambda t: t[0],
)


@settings(max_examples=60, deadline=None)
@given(atoms, st.integers(0, 4))
def test_jordan_consistency(at, N):
    mu = SignedAtomicMeasure(2, tuple(at))
    plus, minus = jordan_decompose(mu)
    assert all(w > 0 for w in plus.weights) and all(w > 0 for w in minus.weights)
    mp, mm, m = moments_of(plus, N), moments_of(minus, N), moments_of(mu, N)
    assert all(m[a] == mp[a] - mm[a] for a in m.basis)


def test_jordan_examples():
    mu = SignedAtomicMeasure.from_lists([(1,), (2,)], [F(2), F(-3)])
    plus, minus = jordan_decompose(mu)
    assert plus.atoms == (((1,), 2),) and minus.atoms == (((2,), 3),)
    empty = SignedAtomicMeasure.empty(1)
    assert jordan_decompose(empty) == (empty, empty)
    pos = SignedAtomicMeasure.from_lists([(1,)], [F(1)])
    assert jordan_decompose(pos) == (pos, empty)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 8), st.data())
def test_polya_agrees_with_general_solver(N, data):
    s = _target(1, N, data.draw(st.lists(st.integers(-10, 10), min_size=N + 1, max_size=N + 1)))
    a = polya_construct_1d(s, SQUARES)
    b = construct_signed_measure(MatchProblem(s, SQUARES))
    assert a.measure == b.measure


def test_verify_flags_corrupted_weight():
    s = _target(2, 2, [1, 2, 3, 4, 5, 6])
    prob = MatchProblem(s, GRID5)
    r = construct_signed_measure(prob)
    assert verify_match(r, prob).max_abs_residual == 0
    (p0, w0), *rest = r.measure.atoms
    bad = SignedAtomicMeasure(2, ((p0, w0 + F(1, 1000)), *rest))
    v = verify_match(bad, prob)
    assert not v.ok and v.max_abs_residual > 0


def test_verify_flags_atom_outside_support():
    s = moments_of(SignedAtomicMeasure.from_lists([(F(9), F(9))], [F(1)]), 1)
    v = verify_match(SignedAtomicMeasure.from_lists([(F(9), F(9))], [F(1)]), MatchProblem(s, GRID5))
    assert v.max_abs_residual == 0 and v.outside_support == [(9, 9)] and not v.ok


def test_construct_is_deterministic():
    s = MomentSequence.from_vector(2, 3, [float(i) for i in range(10)])
    prob = MatchProblem(s, CATALOG["orthant2"])
    assert construct_signed_measure(prob, FLOAT).measure == construct_signed_measure(prob, FLOAT).measure
