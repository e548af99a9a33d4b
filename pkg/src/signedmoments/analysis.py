"""Deciding, for a support K, whether every linear functional on R[x_1..x_d]
is integration against a signed measure supported in K.

The criterion has two halves: K must be Zariski dense, and every growth space
N_n(K) = {p : |p| <= lambda_p (1 + |x|^2)^n on K} must be finite-dimensional.
Both are infinite statements; the checks here are finite evidence up to a
degree, reported as such.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Sequence

import numpy as np

from .linalg import FLOAT_RANK_RTOL, bareiss_echelon, _back_substitute, primitive, rank_float, select_independent_rows
from .moments import (
    Polynomial,
    affine_substitute,
    basis_size,
    enumerate_basis,
    eval_poly,
    monomial_row,
    polynomial_to_json,
)
from .numeric import EXACT, FLOAT, check_mode, format_scalar, is_exact, safe_float, to_fraction
from .support import (
    DEFAULT_SEED,
    AffineCone,
    FullSpace,
    Orthant,
    SampledSet,
    Strip,
    SupportSpec,
    UnionOfRays,
    escape_sequences,
    sample,
)

DEFAULT_DEGREE = 6
BLOWUP_THRESHOLD = 1e3
GROWTH_FACTOR = 2.0  # envelope growth over the last quarter that counts as escape
FLAT_TOL = 1e-2  # envelope growth over the second half that still counts as bounded
MIN_ROUNDS = 8


class Verdict(str, Enum):
    REPRESENTABLE = "Representable"
    NOT_REPRESENTABLE = "NotRepresentable"
    UNKNOWN = "Unknown"


class GrowthVerdict(str, Enum):
    BOUNDED = "BoundedWitnessed"
    UNBOUNDED = "UnboundedWitnessed"
    INCONCLUSIVE = "Inconclusive"


# -- Zariski density ------------------------------------------------------------


@dataclass
class EvaluationMatrix:
    """V[i, alpha] = x_i^alpha over sample points and the degree-<=N basis."""

    points: list
    basis: list
    entries: list
    rank: int
    mode: str
    ranks_by_degree: dict
    null_certificate: Polynomial | None = None

    @property
    def degree(self) -> int:
        return max(sum(a) for a in self.basis)

    @property
    def dense(self) -> bool:
        """Full column rank: no nonzero polynomial of degree <= N vanishes on the samples."""
        return self.rank == len(self.basis)

    def to_json(self) -> dict:
        return {
            "mode": self.mode,
            "samples": len(self.points),
            "columns": len(self.basis),
            "rank": self.rank,
            "ranks_by_degree": {str(k): v for k, v in self.ranks_by_degree.items()},
            "dense_up_to_degree": self.dense,
            "null_certificate": None if self.null_certificate is None else polynomial_to_json(self.null_certificate),
        }


def evaluation_rows(points: Sequence, basis: Sequence) -> list[list]:
    return [monomial_row(p, basis) for p in points]


def _affine_box(points):
    d = len(points[0])
    shift, scale = [], []
    for j in range(d):
        col = [float(p[j]) for p in points]
        lo, hi = min(col), max(col)
        shift.append((lo + hi) / 2)
        scale.append((hi - lo) / 2 or 1.0)
    return shift, scale


def _normalise_float(p: Polynomial) -> Polynomial:
    if p.is_zero():
        return p
    big = max(abs(c) for c in p.terms.values())
    terms = {a: c / big for a, c in p.terms.items() if abs(c) > FLOAT_RANK_RTOL * big}
    order = {a: i for i, a in enumerate(enumerate_basis(p.dimension, int(p.degree)))}
    sign = 1.0 if terms[min(terms, key=order.get)] > 0 else -1.0
    return Polynomial(p.dimension, {a: sign * c for a, c in terms.items()})


def rank_profile(points: Sequence, N: int, mode: str = EXACT) -> EvaluationMatrix:
    """Rank of the evaluation matrix at every degree <= N plus a null certificate.

    The certificate comes from the lowest degree at which rank drops, so it is
    the lowest-degree polynomial the method can exhibit.
    """
    check_mode(mode)
    d = len(points[0])
    basis = enumerate_basis(d, N)
    sizes = [basis_size(d, k) for k in range(N + 1)]
    if mode == EXACT:
        pts = [tuple(to_fraction(c) for c in p) for p in points]
        rows = evaluation_rows(pts, basis)
        E, pivots = bareiss_echelon(rows)
        ranks = {k: sum(1 for c in pivots if c < sizes[k]) for k in range(N + 1)}
        cert = None
        free = [c for c in range(len(basis)) if c not in set(pivots)]
        if free:
            f = free[0]
            vec = _back_substitute(E, [c for c in pivots if c < f], f + 1, {f: Fraction(1)})
            vec = primitive(vec)
            cert = Polynomial(d, {basis[i]: v for i, v in enumerate(vec) if v})
        return EvaluationMatrix(pts, basis, rows, len(pivots), EXACT, ranks, cert)

    pts = [tuple(float(c) for c in p) for p in points]
    shift, scale = _affine_box(pts)
    scaled = [tuple((x - s) / h for x, s, h in zip(p, shift, scale)) for p in pts]
    Z = np.array(evaluation_rows(scaled, basis), dtype=float)
    ranks, cert = {}, None
    for k in range(N + 1):
        r, _, vt = rank_float(Z[:, : sizes[k]])
        ranks[k] = r
        if cert is None and r < sizes[k]:
            q = Polynomial(d, {basis[i]: float(v) for i, v in enumerate(vt[-1])})
            cert = _normalise_float(affine_substitute(q, shift, scale))
    rows = evaluation_rows(pts, basis)
    return EvaluationMatrix(pts, basis, rows, ranks[N], FLOAT, ranks, cert)


def default_sample_count(K: SupportSpec, N: int) -> int:
    # grid samplers fill complete shells; (N+1)^d points make a full tensor
    # grid, which is unisolvent for total degree N
    want = max(2 * basis_size(K.dimension, N), (N + 1) ** K.dimension)
    cap = K.max_points()
    return want if cap is None else max(1, min(want, cap))


def zariski_density_check(
    K: SupportSpec,
    N: int,
    sample_count: int | None = None,
    mode: str = EXACT,
    seed: int = DEFAULT_SEED,
    strategy: str | None = None,
) -> EvaluationMatrix:
    """Sample K and test whether the samples are dense up to degree N."""
    m = sample_count or default_sample_count(K, N)
    points = sample(K, m, strategy, seed)
    return rank_profile(points, N, mode)


# -- growth ------------------------------------------------------------------------


@dataclass
class GrowthReport:
    """Observed ratios |p(x)| / (1 + |x|^2)^n along an escape schedule.

    ``trace[k]`` is the largest ratio seen in round k (the sampled stand-in
    for the smallest admissible lambda_p).  Verdicts are evidence, not proof.
    """

    polynomial: Polynomial
    weight_exponent: int
    samples_used: int
    trace: list
    scales: list
    verdict: GrowthVerdict
    bound: float | None = None
    reason: str = ""

    def to_json(self) -> dict:
        return {
            "polynomial": polynomial_to_json(self.polynomial),
            "weight_exponent": self.weight_exponent,
            "samples_used": self.samples_used,
            "verdict": self.verdict.value,
            "bound": self.bound,
            "reason": self.reason,
            "evidence_only": True,
            "trace": [{"radius": s, "ratio": r} for s, r in zip(self.scales, self.trace)],
        }

    def csv_rows(self) -> list[tuple]:
        return [(k, s, r) for k, (s, r) in enumerate(zip(self.scales, self.trace))]


def _ratio(p: Polynomial, n: int, x) -> float:
    w = 1 + sum(c * c for c in x)
    v = abs(eval_poly(p, x))
    if all(is_exact(c) for c in x) and is_exact(v):
        return safe_float(Fraction(v) / Fraction(w) ** n)
    try:
        return float(v) / float(w) ** n
    except OverflowError:
        return safe_float(Fraction(v) / Fraction(w) ** n)


def growth_test(
    p: Polynomial,
    n: int,
    K: SupportSpec,
    samples: int = 4096,
    rounds: int = 64,
    seed: int = DEFAULT_SEED,
    threshold: float = BLOWUP_THRESHOLD,
    growth_factor: float = GROWTH_FACTOR,
    flat_tol: float = FLAT_TOL,
) -> GrowthReport:
    """Watch |p| / (1+|x|^2)^n on radial rounds of K escaping to infinity.

    UnboundedWitnessed: the final round exceeds ``threshold`` and the running
    supremum grew by ``growth_factor`` over the last quarter of the schedule.
    BoundedWitnessed: the running supremum grew by at most ``flat_tol``
    (relative) over the second half; ``bound`` is the largest ratio seen.
    """
    if p.dimension != K.dimension:
        raise ValueError("polynomial and support dimensions differ")
    cap = K.max_points()
    if K.is_bounded() is True and cap is not None and cap <= samples:
        return _growth_on_finite(p, n, K, cap)
    per_round = max(1, math.ceil(samples / rounds))
    trace, scales = [], []
    used = 0
    for rnd in K.radial_rounds(per_round, seed):
        if len(trace) == rounds:
            break
        if not rnd:
            continue
        trace.append(max(_ratio(p, n, x) for x in rnd))
        scales.append(max(math.hypot(*(safe_float(c) for c in x)) for x in rnd))
        used += len(rnd)
    report = GrowthReport(p, n, used, trace, scales, GrowthVerdict.INCONCLUSIVE)
    if len(trace) < MIN_ROUNDS:
        report.reason = f"only {len(trace)} rounds of escape samples available"
        return report
    envelope = list(np.maximum.accumulate(trace))
    q = max(1, len(trace) // 4)
    start_last = envelope[-q - 1]
    if math.isinf(trace[-1]):
        report.verdict = GrowthVerdict.UNBOUNDED
        report.reason = "ratio exceeded the double range on the final round"
        return report
    if trace[-1] > threshold and envelope[-1] >= growth_factor * start_last and trace[-1] > trace[-q]:
        report.verdict = GrowthVerdict.UNBOUNDED
        report.reason = f"ratio reached {trace[-1]:.3g} and grew x{envelope[-1] / max(start_last, 1e-300):.3g} over the last quarter"
        return report
    half = envelope[len(envelope) // 2]
    if envelope[-1] <= half * (1 + flat_tol):
        report.verdict = GrowthVerdict.BOUNDED
        report.bound = float(envelope[-1])
        report.reason = "running supremum flat over the second half of the schedule"
        return report
    report.reason = "trace neither flat nor clearly escaping"
    return report


def _growth_on_finite(p: Polynomial, n: int, K: SupportSpec, count: int) -> GrowthReport:
    pts = sample(K, count)
    ratios = [_ratio(p, n, x) for x in pts]
    return GrowthReport(
        p,
        n,
        count,
        [max(ratios)],
        [max(math.hypot(*(safe_float(c) for c in x)) for x in pts)],
        GrowthVerdict.BOUNDED,
        max(ratios),
        "evaluated on every point of the finite set K",
    )


# -- growth spaces ------------------------------------------------------------------


@dataclass
class GrowthSpaceDimension:
    """What is known about dim N_n(K).

    kind is "finite", "infinite" or "unknown".  For "finite", ``dim`` is set
    when the exact dimension is known and ``dim_upper`` bounds it otherwise.
    """

    kind: str
    n: int
    dim: int | None = None
    dim_upper: int | None = None
    basis: str = ""
    witness: Polynomial | None = None
    family: str = ""
    notes: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "n": self.n,
            "dim": self.dim,
            "dim_upper": self.dim_upper,
            "basis": self.basis,
            "witness": None if self.witness is None else polynomial_to_json(self.witness),
            "family": self.family,
            "notes": list(self.notes),
        }


def _vanishing_on_rays(K: UnionOfRays) -> Polynomial:
    """Product over rays of an affine form vanishing on the ray's line."""
    from .linalg import nullspace_exact

    d = K.dimension
    out = Polynomial.constant(d, Fraction(1))
    for o, v in zip(K.offsets, K.directions):
        a = nullspace_exact([list(v)], d)[0] if any(v) else [Fraction(int(j == 0)) for j in range(d)]
        b = -sum(ai * oi for ai, oi in zip(a, o))
        form = Polynomial(d, {tuple(int(i == j) for i in range(d)): a[j] for j in range(d)}) + Polynomial.constant(d, b)
        out = out * form
    return out


def _contains_open_cone(K: SupportSpec) -> bool:
    if isinstance(K, (FullSpace, Orthant)):
        return True
    if isinstance(K, AffineCone):
        return K.full_dimensional_cone()
    if isinstance(K, Strip):
        return not K.bounded_axes()
    return False


def nn_dimension(K: SupportSpec, n: int, up_to_degree: int | None = None) -> GrowthSpaceDimension:
    """Dimension information for N_n(K)."""
    d = K.dimension
    if d == 1:
        bounded = K.is_bounded()
        if bounded is False:
            return GrowthSpaceDimension("finite", n, dim=2 * n + 1, dim_upper=2 * n + 1, basis=f"monomials of degree <= {2 * n}")
        if bounded:
            x = Polynomial.coordinate(1, 0)
            return GrowthSpaceDimension("infinite", n, witness=x, family="x1^m for every m (bounded on K)")
        return GrowthSpaceDimension("unknown", n, notes=["boundedness of the sampled set is not known"])

    if isinstance(K, SampledSet):
        return GrowthSpaceDimension("unknown", n, notes=["sampled set: growth spaces cannot be determined"])
    bounded = K.bounded_axes() or []
    if bounded:
        j = bounded[0]
        x = Polynomial.coordinate(d, j)
        return GrowthSpaceDimension("infinite", n, witness=x, family=f"x{j + 1}^m for every m (x{j + 1} is bounded on K)")
    if isinstance(K, UnionOfRays):
        P = _vanishing_on_rays(K)
        return GrowthSpaceDimension("infinite", n, witness=P, family="P^m for every m (P vanishes on K)")
    cs = condition_star_check(K, up_to_degree if up_to_degree is not None else max(n, 1))
    if cs.status == "holds":
        out = GrowthSpaceDimension(
            "finite",
            n,
            dim_upper=(2 * n + 1) ** d,
            basis=f"contained in monomials of degree <= {2 * n} in each variable",
        )
        if _contains_open_cone(K):
            out.dim = basis_size(d, 2 * n)
            out.basis = f"monomials of total degree <= {2 * n}"
        return out
    return GrowthSpaceDimension("unknown", n, notes=[f"condition (*) {cs.status}: {cs.reason}"])


# -- condition (*) ------------------------------------------------------------------


@dataclass
class ConditionStar:
    status: str  # "holds" | "fails" | "unknown"
    axis: int | None = None
    evidence: dict = field(default_factory=dict)
    reason: str = ""

    def to_json(self) -> dict:
        return {"status": self.status, "axis": self.axis, "evidence": self.evidence, "reason": self.reason}


def _base_count(d: int, N: int) -> int:
    # the (2N+1)^(d-1) lattice cube is unisolvent for degree 2N in d-1 variables
    return min((2 * N + 1) ** (d - 1), 4 * basis_size(d - 1, 2 * N))


def condition_star_check(K: SupportSpec, up_to_degree: int, length: int = 16) -> ConditionStar:
    """Is K unbounded along every axis over a base set dense up to degree 2N?

    For d = 2 an infinite base set is enough; the catalog classes know when
    theirs is infinite, otherwise 2N+1 distinct bases are demanded.  A
    full-dimensional affine cone passes after an affine change of coordinates
    even when no literal axis escape exists.
    """
    d = K.dimension
    if d < 2:
        raise ValueError("condition (*) is stated for d >= 2")
    N = up_to_degree
    evidence: dict = {"certified_degree": 2 * N, "axes": {}}
    literal = _literal_condition_star(K, N, length, evidence)
    if literal.status == "fails" and isinstance(K, AffineCone) and K.full_dimensional_cone():
        evidence["adapted_coordinates"] = "cone generators taken as coordinate axes; image contains an orthant"
        return ConditionStar("holds", None, evidence, "holds after an affine change of coordinates")
    return literal


def _literal_condition_star(K, N, length, evidence) -> ConditionStar:
    d = K.dimension
    need = _base_count(d, N)
    for j in range(d):
        seqs = escape_sequences(K, j, need, length)
        if seqs is None:
            return ConditionStar("unknown", j, evidence, f"no escape information for axis x{j + 1}")
        if not seqs:
            return ConditionStar("fails", j, evidence, f"x{j + 1} admits no escape sequence in K")
        for s in seqs:
            problems = s.problems(K)
            if problems:
                return ConditionStar("fails", j, evidence, f"escape sequence on x{j + 1} invalid: {problems[0]}")
        bases = list(dict.fromkeys(s.base for s in seqs))
        info = {"bases": len(bases), "sequence_length": len(seqs[0].values)}
        if d == 2:
            infinite = K.escape_bases_infinite(j)
            info["base_set_infinite"] = infinite
            if not infinite and len(bases) < 2 * N + 1:
                evidence["axes"][str(j)] = info
                return ConditionStar("fails", j, evidence, f"only {len(bases)} base points for x{j + 1}")
        else:
            target = basis_size(d - 1, 2 * N)
            rows = evaluation_rows(bases, enumerate_basis(d - 1, 2 * N))
            r = len(select_independent_rows(rows, target))
            info["base_rank"] = r
            info["base_rank_needed"] = target
            if r < target:
                evidence["axes"][str(j)] = info
                return ConditionStar("fails", j, evidence, f"bases for x{j + 1} not dense up to degree {2 * N}")
        evidence["axes"][str(j)] = info
    return ConditionStar("holds", None, evidence, "escape sequences on every axis")


# -- classification -------------------------------------------------------------------


@dataclass
class Witness:
    kind: str  # "null-certificate" | "bounded-polynomial"
    polynomial: Polynomial
    family: str = ""

    def to_json(self) -> dict:
        return {"kind": self.kind, "polynomial": polynomial_to_json(self.polynomial), "family": self.family}


@dataclass
class AnalysisReport:
    verdict: Verdict
    degree_checked: int
    witness: Witness | None = None
    condition: str | None = None
    notes: list = field(default_factory=list)
    evidence: dict = field(default_factory=dict)
    growth: GrowthReport | None = None

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict.value,
            "degree_checked": self.degree_checked,
            "condition": self.condition,
            "witness": None if self.witness is None else self.witness.to_json(),
            "notes": list(self.notes),
            "evidence": self.evidence,
        }


def classify(
    K: SupportSpec,
    up_to_degree: int = DEFAULT_DEGREE,
    mode: str = EXACT,
    seed: int = DEFAULT_SEED,
    sample_count: int | None = None,
) -> AnalysisReport:
    N = up_to_degree
    d = K.dimension
    em = zariski_density_check(K, N, sample_count, mode, seed)
    report = AnalysisReport(Verdict.UNKNOWN, N, evidence={"support": K.to_json(), "density": em.to_json()})

    if not em.dense:
        report.verdict = Verdict.NOT_REPRESENTABLE
        report.witness = Witness("null-certificate", em.null_certificate, "vanishes on every sample point")
        report.notes.append(f"samples lie on the zero set of a nonzero polynomial of degree <= {N}")
        if isinstance(K, SampledSet):
            report.notes.append("the certificate is checked on the supplied samples only")
        return report
    report.notes.append(f"samples are dense up to degree {N} ({em.mode} rank {em.rank})")

    def bounded_witness(gd: GrowthSpaceDimension) -> AnalysisReport:
        report.verdict = Verdict.NOT_REPRESENTABLE
        report.witness = Witness("bounded-polynomial", gd.witness, gd.family)
        report.growth = growth_test(gd.witness, 0, K, seed=seed)
        report.evidence["witness_growth"] = report.growth.to_json()
        report.notes.append("N_0(K) is infinite-dimensional")
        return report

    if d == 1:
        gd = nn_dimension(K, 0)
        if gd.kind == "finite":
            report.verdict = Verdict.REPRESENTABLE
            report.condition = "d=1 unbounded"
            return report
        if gd.kind == "infinite":
            return bounded_witness(gd)
        report.notes.extend(gd.notes)
        return report

    if isinstance(K, SampledSet) and K.certified:
        report.verdict = Verdict.REPRESENTABLE
        report.condition = "user-certified"
        return report

    cs = condition_star_check(K, N)
    report.evidence["condition_star"] = cs.to_json()
    if cs.status == "holds":
        report.verdict = Verdict.REPRESENTABLE
        report.condition = "condition (*)"
        return report

    gd = nn_dimension(K, 0, up_to_degree=N)
    report.evidence["growth_space"] = gd.to_json()
    if gd.kind == "infinite":
        return bounded_witness(gd)
    report.notes.append(f"condition (*) {cs.status} ({cs.reason}); growth spaces undetermined at degree {N}")
    return report
