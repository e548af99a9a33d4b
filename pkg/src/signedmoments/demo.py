"""Self-hosted fixtures, one per acceptance criterion, for the ``demo`` command."""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .analysis import GrowthVerdict, Verdict, classify, growth_test, nn_dimension, zariski_density_check
from .construct import MatchProblem, Objective, construct_signed_measure, polya_construct_1d, verify_match
from .numeric import EXACT, FLOAT
from .moments import MomentSequence, Polynomial, SignedAtomicMeasure, basis_size, moments_of
from .support import (
    BoundedBox,
    FullSpace,
    Grid,
    Orthant,
    PointSequence1D,
    SampledSet,
    SequenceRule,
    Strip,
    sample,
)


@dataclass
class FixtureResult:
    criterion: int
    name: str
    passed: bool
    detail: str
    seconds: float


def _squares() -> PointSequence1D:
    return PointSequence1D.of(rule=SequenceRule("power", exponent=2, start=1))


def polya(seed: int) -> tuple[bool, str]:
    rng = random.Random(seed)
    nodes = [Fraction(k * k) for k in range(1, 12)]
    worst = Fraction(0)
    for _ in range(100):
        s = MomentSequence.from_vector(1, 10, [Fraction(rng.randint(-10, 10)) for _ in range(11)])
        r = polya_construct_1d(s, nodes)
        check = [sum((w * x[0] ** k for x, w in r.measure.atoms), Fraction(0)) - s[(k,)] for k in range(11)]
        worst = max(worst, max(abs(c) for c in check))
    return worst == 0, f"100 targets on k^2, max residual {worst}"


def grid(seed: int) -> tuple[bool, str]:
    rng = random.Random(seed)
    K = Grid((tuple(range(1, 6)),) * 2)
    worst, ranks, exact_ok = 0.0, set(), True
    for _ in range(20):
        s = MomentSequence.from_vector(2, 4, [rng.uniform(-1, 1) for _ in range(15)])
        prob = MatchProblem(s, K)
        r = construct_signed_measure(prob, FLOAT, seed)
        worst = max(worst, verify_match(r, prob).max_rel_residual)
        ranks.add(r.diagnostics["rank"])
        rx = construct_signed_measure(prob, EXACT, seed)
        exact_ok &= all(v == 0 for v in rx.residuals.values())
    ok = worst <= 1e-9 and exact_ok and ranks == {15}
    return ok, f"float max rel residual {worst:.2e}, exact residual zero: {exact_ok}, ranks {sorted(ranks)}"


def strip(seed: int) -> tuple[bool, str]:
    K = Strip(((0, 1), None))
    rep = classify(K, seed=seed)
    witness = rep.witness.polynomial if rep.witness else None
    x1 = Polynomial.coordinate(2, 0)
    bounds = []
    for m in range(1, 11):
        g = growth_test(x1**m, 0, K, samples=10_000, seed=seed)
        bounds.append(g.bound if g.verdict is GrowthVerdict.BOUNDED and g.samples_used >= 10_000 else None)
    ok = rep.verdict is Verdict.NOT_REPRESENTABLE and witness == x1 and all(b is not None and b <= 1 + 1e-12 for b in bounds)
    return ok, f"{rep.verdict.value}, witness {witness}, largest lambda {max((b or float('inf')) for b in bounds)}"


def density(seed: int) -> tuple[bool, str]:
    pts = [(Fraction(t), Fraction(0)) for t in range(1, 11)] + [(Fraction(0), Fraction(t)) for t in range(1, 11)]
    em = zariski_density_check(SampledSet(2, tuple(pts)), 2, sample_count=20, seed=seed)
    cert = em.null_certificate
    ok = em.rank == 5 and cert is not None and set(cert.terms) == {(1, 1)} and all(cert(p) == 0 for p in pts)
    return ok, f"rank {em.rank} of 6, certificate {cert}"


def growth1d(seed: int) -> tuple[bool, str]:
    K = _squares()
    parts, ok = [], True
    for n in range(4):
        dim = nn_dimension(K, n).dim
        up = growth_test(Polynomial.coordinate(1, 0, 2 * n + 1), n, K, seed=seed).verdict
        flat = growth_test(Polynomial.coordinate(1, 0, 2 * n), n, K, seed=seed).verdict
        ok &= dim == 2 * n + 1 and up is GrowthVerdict.UNBOUNDED and flat is not GrowthVerdict.UNBOUNDED
        parts.append(f"n={n}: dim {dim}")
    return ok, ", ".join(parts)


def _generic_samples() -> SampledSet:
    pts = tuple((Fraction(i), Fraction(i * i * i % 97, 7)) for i in range(1, 61))
    return SampledSet(2, pts)


def classifier(seed: int) -> tuple[bool, str]:
    table = [
        (BoundedBox(((0, 1),)), Verdict.NOT_REPRESENTABLE, None),
        (_squares(), Verdict.REPRESENTABLE, "d=1 unbounded"),
        (FullSpace(2), Verdict.REPRESENTABLE, "condition (*)"),
        (Orthant(2), Verdict.REPRESENTABLE, None),
        (Strip(((0, 1), None)), Verdict.NOT_REPRESENTABLE, None),
        (_generic_samples(), Verdict.UNKNOWN, None),
    ]
    hits = 0
    for K, verdict, condition in table:
        rep = classify(K, seed=seed)
        hits += rep.verdict is verdict and (condition is None or rep.condition == condition)
    return hits == len(table), f"{hits}/{len(table)} fixtures match"


def min_tv(seed: int) -> tuple[bool, str]:
    target = MomentSequence.from_vector(1, 1, [Fraction(0), Fraction(1)])
    nodes = PointSequence1D.of(values=tuple(range(1, 11)))
    r1 = construct_signed_measure(MatchProblem(target, nodes, 10, Objective.MIN_TV), EXACT, seed)
    delta = moments_of(SignedAtomicMeasure.from_lists([(1, 1)], [Fraction(1)]), 2)
    K = Grid((tuple(range(1, 6)),) * 2)
    r2 = construct_signed_measure(MatchProblem(delta, K, 25, Objective.MIN_TV), EXACT, seed)
    single = r2.measure.points == [(1, 1)] and r2.total_variation == 1
    ok = r1.total_variation == 2 and single
    return ok, f"TV on {{1..10}} = {r1.total_variation} (required 2); grid TV = {r2.total_variation}, single atom: {single}"


def roundtrip(seed: int) -> tuple[bool, str]:
    rng = random.Random(seed)
    supports = [FullSpace(1), FullSpace(2), Orthant(2), Grid((tuple(range(1, 6)),) * 2), Strip(((0, 1), None)), _squares()]
    worst, exact_ok = 0.0, True
    for i in range(200):
        K = supports[i % len(supports)]
        N = rng.randint(0, 4)
        pool = sample(K, min(40, K.max_points() or 40), None, seed + i)
        atoms = rng.sample(pool, rng.randint(1, 8))
        mu = SignedAtomicMeasure.from_lists(atoms, [Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in atoms])
        if i % 2:
            s = moments_of(mu, N, EXACT)
            r = construct_signed_measure(MatchProblem(s, K), EXACT, seed + i)
            exact_ok &= moments_of(r.measure, N, EXACT) == s
        else:
            s = moments_of(mu, N, FLOAT)
            r = construct_signed_measure(MatchProblem(s, K), FLOAT, seed + i)
            worst = max(worst, verify_match(r, MatchProblem(s, K)).max_rel_residual)
    return exact_ok and worst <= 1e-9, f"200 measures, exact equal: {exact_ok}, float max rel residual {worst:.2e}"


FIXTURES: dict[str, tuple[int, Callable[[int], tuple[bool, str]]]] = {
    "polya": (1, polya),
    "grid": (2, grid),
    "strip": (3, strip),
    "density": (4, density),
    "growth1d": (5, growth1d),
    "classifier": (6, classifier),
    "min-tv": (7, min_tv),
    "roundtrip": (8, roundtrip),
}


def run_fixture(name: str, seed: int) -> FixtureResult:
    criterion, fn = FIXTURES[name]
    t = time.perf_counter()
    passed, detail = fn(seed)
    return FixtureResult(criterion, name, bool(passed), detail, time.perf_counter() - t)
