"""Signed atomic measures on K with prescribed moments up to degree N."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Sequence

import numpy as np

from .analysis import rank_profile
from .linalg import (
    SingularSystemError,
    least_norm_solve,
    select_independent_rows,
    solve_dual_vandermonde,
    solve_exact,
)
from .moments import (
    MomentSequence,
    Polynomial,
    SignedAtomicMeasure,
    affine_substitute,
    basis_size,
    monomial_row,
    monomial_value,
    moments_of,
)
from .numeric import EXACT, FLOAT, check_mode, coerce, safe_float, to_fraction
from .simplex import OPTIMAL, solve_lp
from .support import DEFAULT_SEED, PointSequence1D, SupportSpec, contains, sample

RETRIES = 3
EXACT_LP_LIMIT = 200  # LP variables up to which the simplex runs on rationals
DEFAULT_RESIDUAL_TOL = 1e-9
_SEED_STRIDE = 7919


class Objective(str, Enum):
    ANY = "any"
    MIN_TV = "min-tv"


class RankDeficientError(ValueError):
    """Sampled nodes never reached full column rank; carries the null certificate."""

    def __init__(self, message: str, certificate: Polynomial | None):
        super().__init__(message)
        self.certificate = certificate


@dataclass(frozen=True)
class MatchProblem:
    target: MomentSequence
    support: SupportSpec
    node_budget: int | None = None
    objective: Objective = Objective.ANY

    def __post_init__(self):
        if self.target.dimension != self.support.dimension:
            raise ValueError("target and support dimensions differ")
        object.__setattr__(self, "objective", Objective(self.objective))
        if self.node_budget is not None and self.node_budget < 1:
            raise ValueError("node_budget must be positive")

    @property
    def columns(self) -> int:
        return basis_size(self.target.dimension, self.target.max_degree)

    @property
    def budget(self) -> int:
        return self.node_budget if self.node_budget is not None else self.columns


@dataclass
class MatchResult:
    measure: SignedAtomicMeasure
    residuals: dict
    total_variation: object
    diagnostics: dict = field(default_factory=dict)

    @property
    def max_abs_residual(self) -> float:
        return max((abs(float(r)) for r in self.residuals.values()), default=0.0)


def _residuals(mu: SignedAtomicMeasure, target: MomentSequence, mode: str) -> dict:
    got = moments_of(mu, target.max_degree, mode)
    return {a: got[a] - coerce(target[a], mode) for a in target.basis}


def polya_construct_1d(target: MomentSequence, nodes, mode: str | None = None) -> MatchResult:
    """Weights on the first N+1 nodes reproducing moments 0..N.

    ``nodes`` is a PointSequence1D or a plain sequence of numbers.  The square
    Vandermonde system is solved by Bjorck-Pereyra, exactly on rationals.
    """
    if target.dimension != 1:
        raise ValueError("polya_construct_1d needs a one-dimensional target")
    mode = check_mode(mode or target.mode)
    N = target.max_degree
    if isinstance(nodes, PointSequence1D):
        xs = [p[0] for p in sample(nodes, N + 1, "prefix")]
    else:
        xs = list(nodes)[: N + 1]
    if len(xs) < N + 1:
        raise ValueError(f"need {N + 1} nodes, got {len(xs)}")
    xs = [coerce(x, mode) for x in xs]
    rhs = [coerce(v, mode) for v in target.vector()]
    w = solve_dual_vandermonde(xs, rhs)
    mu = SignedAtomicMeasure(1, tuple(((x,), wi) for x, wi in zip(xs, w)))
    return MatchResult(
        mu,
        _residuals(mu, target, mode),
        mu.total_variation,
        {"mode": mode, "solver": "bjorck-pereyra", "nodes": len(xs), "rank": N + 1, "columns": N + 1},
    )


def _select_nodes(prob: MatchProblem, seed: int):
    K, target = prob.support, prob.target
    d, N, M = K.dimension, target.max_degree, prob.columns
    pool_size = max(prob.budget, 3 * M)
    cap = K.max_points()
    if cap is not None:
        pool_size = min(pool_size, cap)
    basis = target.basis
    certificate = None
    for attempt in range(RETRIES + 1):
        s = seed + attempt * _SEED_STRIDE
        pool = sample(K, pool_size, None, s)
        exact_pool = [tuple(to_fraction(c) for c in p) for p in pool]
        rows = [monomial_row(p, basis) for p in exact_pool]
        chosen = select_independent_rows(rows, M)
        if len(chosen) == M:
            taken = set(chosen)
            extra = [i for i in range(len(pool)) if i not in taken][: max(0, prob.budget - M)]
            idx = sorted(chosen + extra)
            return [pool[i] for i in idx], {"attempts": attempt + 1, "seed": s, "pool": len(pool)}
        certificate = rank_profile(exact_pool, N, EXACT).null_certificate
        if cap is not None and cap <= pool_size:
            break  # the whole support was sampled; resampling cannot help
    raise RankDeficientError(
        f"sampled nodes do not reach rank {M} at degree {N}; they lie on the zero set of {certificate}",
        certificate,
    )


def _scaled_system(nodes, target: MomentSequence):
    """Evaluation matrix and moments in coordinates scaled to [-1, 1]^d."""
    d = target.dimension
    shift, scale = [], []
    for j in range(d):
        col = [float(p[j]) for p in nodes]
        lo, hi = min(col), max(col)
        shift.append((lo + hi) / 2)
        scale.append((hi - lo) / 2 or 1.0)
    basis = target.basis
    z = [tuple((float(x) - c) / h for x, c, h in zip(p, shift, scale)) for p in nodes]
    A = np.array([monomial_row(p, basis) for p in z], dtype=float).T
    s = [float(v) for v in target.vector()]
    pos = {a: i for i, a in enumerate(basis)}
    t = []
    for beta in basis:
        P = affine_substitute(Polynomial.monomial(beta, 1.0), shift, scale)
        t.append(math.fsum(c * s[pos[a]] for a, c in P.terms.items()))
    return A, np.array(t)


def _min_tv_weights(A_rows, rhs, exact: bool):
    n = len(A_rows[0])
    A = [list(row) + [-v for v in row] for row in A_rows]
    res = solve_lp([1] * (2 * n), A, rhs, exact=exact)
    if res.status != OPTIMAL:
        raise RuntimeError(f"internal error: total-variation LP reported {res.status} on a full-rank system")
    return [res.x[i] - res.x[n + i] for i in range(n)], res.iterations


def construct_signed_measure(
    prob: MatchProblem, mode: str | None = None, seed: int = DEFAULT_SEED
) -> MatchResult:
    """Place node_budget atoms in K and solve V^T w = s on them.

    ANY: exact elimination with free weights zero (exact mode) or a refined
    least-norm solve in scaled coordinates (float mode).  MIN_TV: minimise the
    total variation by the simplex method on w = u - v.
    """
    target = prob.target
    mode = check_mode(mode or target.mode)
    nodes, diag = _select_nodes(prob, seed)
    basis = target.basis
    M = prob.columns
    diag.update({"mode": mode, "columns": M, "nodes": len(nodes), "rank": M, "objective": prob.objective.value})

    A_float, t = _scaled_system(nodes, target)
    diag["condition"] = safe_float(float(np.linalg.cond(A_float)))

    if prob.objective is Objective.MIN_TV:
        exact_lp = mode == EXACT or 2 * len(nodes) <= EXACT_LP_LIMIT
        if exact_lp:
            xs = [tuple(to_fraction(c) for c in p) for p in nodes]
            A = [[monomial_value(p, a) for p in xs] for a in basis]
            rhs = [to_fraction(v) for v in target.vector()]
        else:
            A, rhs = A_float.tolist(), t.tolist()
        w, iters = _min_tv_weights(A, rhs, exact_lp)
        diag.update({"solver": "simplex-exact" if exact_lp else "simplex-float", "iterations": iters})
    elif mode == EXACT:
        xs = [tuple(to_fraction(c) for c in p) for p in nodes]
        A = [[monomial_value(p, a) for p in xs] for a in basis]
        try:
            w = solve_exact(A, [to_fraction(v) for v in target.vector()])
        except SingularSystemError as exc:  # pragma: no cover - rank was checked
            raise RuntimeError(f"internal error: {exc}") from exc
        diag["solver"] = "bareiss"
    else:
        w = least_norm_solve(A_float, t).tolist()
        diag["solver"] = "least-norm"

    if mode == EXACT:
        points = [tuple(to_fraction(c) for c in p) for p in nodes]
    else:
        points = [tuple(float(c) for c in p) for p in nodes]
    mu = SignedAtomicMeasure(target.dimension, tuple((p, coerce(wi, mode)) for p, wi in zip(points, w)))
    return MatchResult(mu, _residuals(mu, target, mode), mu.total_variation, diag)


def jordan_decompose(mu: SignedAtomicMeasure) -> tuple[SignedAtomicMeasure, SignedAtomicMeasure]:
    return mu.positive_part(), mu.negative_part()


@dataclass
class MatchVerification:
    max_abs_residual: float
    max_rel_residual: float
    outside_support: list
    exact: bool
    ok: bool

    def to_json(self) -> dict:
        return {
            "max_abs_residual": self.max_abs_residual,
            "max_rel_residual": self.max_rel_residual,
            "outside_support": [[str(c) for c in p] for p in self.outside_support],
            "exact": self.exact,
            "ok": self.ok,
        }


def verify_match(
    result: MatchResult | SignedAtomicMeasure, prob: MatchProblem, tol: float = DEFAULT_RESIDUAL_TOL
) -> MatchVerification:
    """Recompute the moments of the measure and diff them against the target.

    The relative residual is normwise: max |r_alpha| / max |s_alpha|.  Exact
    measures against exact targets must match identically.
    """
    mu = result.measure if isinstance(result, MatchResult) else result
    target = prob.target
    exact = mu.mode in (EXACT, None) and target.mode == EXACT
    worst_abs, worst_s = 0.0, 0.0
    for a in target.basis:
        terms = [w * math.prod(x**k for x, k in zip(p, a)) for p, w in mu.atoms]
        if exact:
            r = abs(sum(terms, Fraction(0)) - target[a])
            worst_abs = max(worst_abs, r) if r else worst_abs
        else:
            r = abs(math.fsum(float(v) for v in terms) - float(target[a]))
            worst_abs = max(worst_abs, r)
        worst_s = max(worst_s, abs(float(target[a])))
    worst_abs = safe_float(worst_abs) if isinstance(worst_abs, Fraction) else float(worst_abs)
    rel = worst_abs / worst_s if worst_s else worst_abs
    outside = [p for p in mu.points if not contains(prob.support, p)]
    ok = not outside and (worst_abs == 0 if exact else rel <= tol)
    return MatchVerification(worst_abs, rel, outside, exact, ok)
