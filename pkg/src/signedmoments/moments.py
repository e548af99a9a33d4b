"""Multi-indices, moment sequences, sparse polynomials and atomic signed measures.

Monomials are ordered graded-lexicographically: by total degree first, then
lexicographically with larger powers of earlier variables first, e.g. for two
variables ``1, x1, x2, x1^2, x1 x2, x2^2, ...``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Mapping, Sequence

from .numeric import (
    EXACT,
    FLOAT,
    Scalar,
    check_mode,
    coerce,
    format_scalar,
    is_exact,
    mode_of,
    parse_scalar,
)

MultiIndex = tuple  # tuple[int, ...] of non-negative exponents

ZERO_DEGREE = -math.inf  # degree of the zero polynomial


def multi_index(exponents: Iterable[int]) -> MultiIndex:
    alpha = tuple(int(a) for a in exponents)
    if not alpha:
        raise ValueError("a multi-index needs at least one exponent")
    if any(a < 0 for a in alpha):
        raise ValueError(f"negative exponent in {alpha}")
    return alpha


def basis_size(d: int, N: int) -> int:
    """Number of monomials of degree <= N in d variables, C(N+d, d)."""
    return math.comb(N + d, d)


def _compositions(d: int, k: int):
    # exponent tuples of total degree k, first variable's power descending
    if d == 1:
        yield (k,)
        return
    for first in range(k, -1, -1):
        for rest in _compositions(d - 1, k - first):
            yield (first,) + rest


@lru_cache(maxsize=256)
def _basis(d: int, N: int) -> tuple:
    return tuple(alpha for k in range(N + 1) for alpha in _compositions(d, k))


def enumerate_basis(d: int, N: int) -> list[MultiIndex]:
    """All multi-indices with |alpha| <= N in graded lexicographic order."""
    if d < 1:
        raise ValueError("dimension must be >= 1")
    if N < 0:
        raise ValueError("degree must be >= 0")
    return list(_basis(d, N))


def basis_position(d: int, N: int) -> dict:
    return {alpha: i for i, alpha in enumerate(_basis(d, N))}


def monomial_value(point: Sequence, alpha: MultiIndex):
    v = 1
    for x, a in zip(point, alpha):
        if a:
            v *= x**a
    return v


def monomial_row(point: Sequence, basis: Sequence[MultiIndex]) -> list:
    """Values of every monomial in ``basis`` at ``point``.

    Built incrementally (each monomial is x_j times a lower one) so that a
    degree-N row costs one multiplication per entry.
    """
    cache = {}
    row = []
    for alpha in basis:
        if sum(alpha) == 0:
            v = 1
        else:
            j = next(i for i, a in enumerate(alpha) if a)
            lower = alpha[:j] + (alpha[j] - 1,) + alpha[j + 1 :]
            v = cache[lower] * point[j] if lower in cache else monomial_value(point, alpha)
        cache[alpha] = v
        row.append(v)
    return row


@dataclass(frozen=True)
class Polynomial:
    """Sparse real polynomial in ``dimension`` variables.

    ``terms`` maps multi-indices to nonzero coefficients; zero coefficients are
    discarded on construction.
    """

    dimension: int
    terms: Mapping[MultiIndex, Scalar] = field(default_factory=dict)

    def __post_init__(self):
        if self.dimension < 1:
            raise ValueError("dimension must be >= 1")
        clean = {}
        for alpha, c in self.terms.items():
            alpha = multi_index(alpha)
            if len(alpha) != self.dimension:
                raise ValueError(f"multi-index {alpha} does not match dimension {self.dimension}")
            if c != 0:
                clean[alpha] = clean.get(alpha, 0) + c
        clean = {a: c for a, c in clean.items() if c != 0}
        object.__setattr__(self, "terms", clean)

    @classmethod
    def monomial(cls, alpha: Sequence[int], coeff: Scalar = 1) -> "Polynomial":
        alpha = multi_index(alpha)
        return cls(len(alpha), {alpha: coeff})

    @classmethod
    def coordinate(cls, d: int, j: int, power: int = 1) -> "Polynomial":
        """The monomial x_j**power (j is 0-based)."""
        alpha = [0] * d
        alpha[j] = power
        return cls.monomial(alpha, Fraction(1))

    @classmethod
    def constant(cls, d: int, c: Scalar) -> "Polynomial":
        return cls(d, {(0,) * d: c})

    @classmethod
    def weight(cls, d: int, n: int) -> "Polynomial":
        """(1 + x_1^2 + ... + x_d^2)**n."""
        terms = {(0,) * d: Fraction(1)}
        for j in range(d):
            terms[tuple(2 if i == j else 0 for i in range(d))] = Fraction(1)
        return cls(d, terms) ** n

    @property
    def degree(self):
        if not self.terms:
            return ZERO_DEGREE
        return max(sum(a) for a in self.terms)

    def degree_in(self, j: int):
        if not self.terms:
            return ZERO_DEGREE
        return max(a[j] for a in self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __call__(self, x: Sequence) -> Scalar:
        return eval_poly(self, x)

    def __add__(self, other: "Polynomial") -> "Polynomial":
        _same_dim(self.dimension, other.dimension)
        terms = dict(self.terms)
        for a, c in other.terms.items():
            terms[a] = terms.get(a, 0) + c
        return Polynomial(self.dimension, terms)

    def __neg__(self) -> "Polynomial":
        return Polynomial(self.dimension, {a: -c for a, c in self.terms.items()})

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def __mul__(self, other) -> "Polynomial":
        if not isinstance(other, Polynomial):
            return Polynomial(self.dimension, {a: c * other for a, c in self.terms.items()})
        _same_dim(self.dimension, other.dimension)
        terms: dict = {}
        for a, c in self.terms.items():
            for b, e in other.terms.items():
                ab = tuple(i + j for i, j in zip(a, b))
                terms[ab] = terms.get(ab, 0) + c * e
        return Polynomial(self.dimension, terms)

    __rmul__ = __mul__

    def __pow__(self, m: int) -> "Polynomial":
        out = Polynomial.constant(self.dimension, Fraction(1))
        for _ in range(m):
            out = out * self
        return out

    def coefficient_norm(self) -> float:
        return math.sqrt(sum(float(c) ** 2 for c in self.terms.values()))

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for alpha in sorted(self.terms, key=lambda a: (sum(a), [-e for e in a])):
            c = self.terms[alpha]
            mono = "*".join(
                f"x{j + 1}" if e == 1 else f"x{j + 1}^{e}" for j, e in enumerate(alpha) if e
            )
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append(f"-{mono}")
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


def _same_dim(a: int, b: int) -> None:
    if a != b:
        raise ValueError(f"dimension mismatch: {a} != {b}")


def eval_poly(p: Polynomial, x: Sequence) -> Scalar:
    """Evaluate ``p`` at ``x``; exact when both coefficients and point are exact."""
    _same_dim(p.dimension, len(x))
    total = 0
    for alpha, c in p.terms.items():
        total += c * monomial_value(x, alpha)
    return total


def affine_substitute(p: Polynomial, shift: Sequence, scale: Sequence) -> Polynomial:
    """Return P with P(x) = p((x - shift) / scale), expanded in x."""
    d = p.dimension
    out: dict = {}
    for alpha, c in p.terms.items():
        # product over coordinates of sum_b C(a,b) x^b (-shift)^(a-b) / scale^a
        partial = {(): c}
        for j, a in enumerate(alpha):
            nxt: dict = {}
            for prefix, v in partial.items():
                for b in range(a + 1):
                    coeff = math.comb(a, b) * (-shift[j]) ** (a - b) / scale[j] ** a
                    key = prefix + (b,)
                    nxt[key] = nxt.get(key, 0) + v * coeff
            partial = nxt
        for beta, v in partial.items():
            out[beta] = out.get(beta, 0) + v
    return Polynomial(d, out)


@dataclass(frozen=True)
class MomentSequence:
    """Prescribed moments s_alpha for every |alpha| <= max_degree."""

    dimension: int
    max_degree: int
    values: Mapping[MultiIndex, Scalar]

    def __post_init__(self):
        d, N = self.dimension, self.max_degree
        if d < 1 or N < 0:
            raise ValueError("need dimension >= 1 and max_degree >= 0")
        basis = _basis(d, N)
        values = {multi_index(a): v for a, v in self.values.items()}
        missing = [a for a in basis if a not in values]
        if missing:
            raise ValueError(f"moment sequence incomplete, missing {missing[:3]}")
        extra = [a for a in values if len(a) != d or sum(a) > N]
        if extra:
            raise ValueError(f"moment entries outside the basis: {extra[:3]}")
        if mode_of(values.values()) is None:
            raise ValueError("empty moment sequence")
        object.__setattr__(self, "values", {a: values[a] for a in basis})

    @property
    def mode(self) -> str:
        return mode_of(self.values.values())

    @property
    def basis(self) -> list[MultiIndex]:
        return list(_basis(self.dimension, self.max_degree))

    def vector(self) -> list:
        return list(self.values.values())

    def __getitem__(self, alpha) -> Scalar:
        return self.values[tuple(alpha)]

    def __len__(self) -> int:
        return len(self.values)

    @classmethod
    def from_vector(cls, d: int, N: int, vector: Sequence) -> "MomentSequence":
        basis = _basis(d, N)
        if len(vector) != len(basis):
            raise ValueError(f"expected {len(basis)} values, got {len(vector)}")
        return cls(d, N, dict(zip(basis, vector)))

    @classmethod
    def from_function(cls, d: int, N: int, fn: Callable[[MultiIndex], Scalar]) -> "MomentSequence":
        return cls(d, N, {a: fn(a) for a in _basis(d, N)})

    def to_mode(self, mode: str) -> "MomentSequence":
        check_mode(mode)
        return MomentSequence(self.dimension, self.max_degree, {a: coerce(v, mode) for a, v in self.values.items()})

    def truncate(self, N: int) -> "MomentSequence":
        return MomentSequence(self.dimension, N, {a: v for a, v in self.values.items() if sum(a) <= N})


@dataclass(frozen=True)
class SignedAtomicMeasure:
    """Finitely many atoms with signed weights; mu = mu_plus - mu_minus.

    Zero-weight atoms are dropped.  Atom points must be pairwise distinct.
    """

    dimension: int
    atoms: tuple = ()

    def __post_init__(self):
        if self.dimension < 1:
            raise ValueError("dimension must be >= 1")
        clean = []
        seen = set()
        for point, weight in self.atoms:
            point = tuple(point)
            if len(point) != self.dimension:
                raise ValueError(f"atom {point} does not have dimension {self.dimension}")
            if point in seen:
                raise ValueError(f"duplicate atom at {point}")
            seen.add(point)
            if weight != 0:
                clean.append((point, weight))
        object.__setattr__(self, "atoms", tuple(clean))

    @classmethod
    def from_lists(cls, points: Sequence[Sequence], weights: Sequence) -> "SignedAtomicMeasure":
        points = [tuple(p) for p in points]
        if len(points) != len(weights):
            raise ValueError("points and weights differ in length")
        d = len(points[0]) if points else 1
        return cls(d, tuple(zip(points, weights)))

    @classmethod
    def empty(cls, d: int) -> "SignedAtomicMeasure":
        return cls(d, ())

    @property
    def points(self) -> list[tuple]:
        return [p for p, _ in self.atoms]

    @property
    def weights(self) -> list:
        return [w for _, w in self.atoms]

    @property
    def mode(self) -> str | None:
        scalars = list(self.weights) + [x for p in self.points for x in p]
        if not scalars:
            return None
        return EXACT if all(is_exact(s) for s in scalars) else FLOAT

    def __len__(self) -> int:
        return len(self.atoms)

    @property
    def total_variation(self) -> Scalar:
        return sum((abs(w) for w in self.weights), 0)

    @property
    def total_mass(self) -> Scalar:
        return sum(self.weights, 0)

    def positive_part(self) -> "SignedAtomicMeasure":
        return SignedAtomicMeasure(self.dimension, tuple((p, w) for p, w in self.atoms if w > 0))

    def negative_part(self) -> "SignedAtomicMeasure":
        return SignedAtomicMeasure(self.dimension, tuple((p, -w) for p, w in self.atoms if w < 0))

    def to_mode(self, mode: str) -> "SignedAtomicMeasure":
        return SignedAtomicMeasure(
            self.dimension,
            tuple((tuple(coerce(x, mode) for x in p), coerce(w, mode)) for p, w in self.atoms),
        )


def integrate(mu: SignedAtomicMeasure, p: Polynomial) -> Scalar:
    """sum_i w_i p(x_i)."""
    _same_dim(mu.dimension, p.dimension)
    return sum((w * eval_poly(p, x) for x, w in mu.atoms), 0)


def moments_of(mu: SignedAtomicMeasure, N: int, mode: str | None = None) -> MomentSequence:
    """Moments of ``mu`` for every |alpha| <= N.

    The mode defaults to exact when every point and weight is exact (and for
    the empty measure), float otherwise.
    """
    if N < 0:
        raise ValueError("degree must be >= 0")
    if mode is None:
        mode = mu.mode or EXACT
    check_mode(mode)
    basis = _basis(mu.dimension, N)
    totals = [0] * len(basis)
    for x, w in mu.atoms:
        if mode == EXACT:
            x, w = tuple(coerce(c, EXACT) for c in x), coerce(w, EXACT)
        for i, v in enumerate(monomial_row(x, basis)):
            totals[i] += w * v
    return MomentSequence(mu.dimension, N, {a: coerce(t, mode) for a, t in zip(basis, totals)})


# -- JSON ---------------------------------------------------------------------


def moments_to_json(s: MomentSequence) -> dict:
    return {
        "dimension": s.dimension,
        "max_degree": s.max_degree,
        "entries": [{"alpha": list(a), "value": format_scalar(v)} for a, v in s.values.items()],
    }


def moments_from_json(obj: Mapping) -> MomentSequence:
    try:
        d, N = int(obj["dimension"]), int(obj["max_degree"])
        values = {tuple(e["alpha"]): parse_scalar(e["value"]) for e in obj["entries"]}
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed moment sequence: {exc}") from exc
    return MomentSequence(d, N, values)


def measure_to_json(mu: SignedAtomicMeasure) -> dict:
    return {
        "dimension": mu.dimension,
        "atoms": [
            {"point": [format_scalar(x) for x in p], "weight": format_scalar(w)} for p, w in mu.atoms
        ],
    }


def measure_from_json(obj: Mapping) -> SignedAtomicMeasure:
    try:
        atoms = [
            (tuple(parse_scalar(x) for x in a["point"]), parse_scalar(a["weight"])) for a in obj["atoms"]
        ]
        d = int(obj["dimension"]) if "dimension" in obj else (len(atoms[0][0]) if atoms else 1)
    except (KeyError, TypeError, IndexError) as exc:
        raise ValueError(f"malformed measure: {exc}") from exc
    return SignedAtomicMeasure(d, tuple(atoms))


def polynomial_to_json(p: Polynomial) -> dict:
    order = basis_position(p.dimension, max(0, int(p.degree))) if p.terms else {}
    return {
        "dimension": p.dimension,
        "terms": [
            {"alpha": list(a), "coeff": format_scalar(c)}
            for a, c in sorted(p.terms.items(), key=lambda t: order[t[0]])
        ],
        "text": str(p),
    }


def polynomial_from_json(obj: Mapping) -> Polynomial:
    return Polynomial(int(obj["dimension"]), {tuple(t["alpha"]): parse_scalar(t["coeff"]) for t in obj["terms"]})
