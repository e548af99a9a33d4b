"""Closed supports K in R^d: a small catalog of classes, deterministic samplers,
and escape sequences (points of K running to infinity along one axis while the
other coordinates stay fixed).

All geometry is stored as Fractions and every sampler returns points with
Fraction coordinates, so downstream exact arithmetic never sees rounding.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from statistics import NormalDist
from typing import Iterator, Mapping, Sequence

from .numeric import decimal_fraction, format_scalar, is_exact, to_fraction

DEFAULT_SEED = 20240521

MEMBERSHIP_TOL = 1e-12  # slack for float points only
RADIAL_GRANULARITY = 64  # radial points are rounded to multiples of 1/64
ESCAPE_RATIO = 4  # |x_last| / |x_first| required of an escape prefix

STRATEGIES = ("grid", "radial", "prefix")


class SamplingError(ValueError):
    """The support cannot supply the requested points."""


def _frac(x) -> Fraction:
    return decimal_fraction(x)


def _slack(point) -> Fraction | float:
    return 0 if all(is_exact(c) for c in point) else MEMBERSHIP_TOL


def _halton(i: int, base: int) -> Fraction:
    f, denom = Fraction(0), 1
    while i:
        denom *= base
        i, digit = divmod(i, base)
        f += Fraction(digit, denom)
    return f


_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
_GOLDEN = (math.sqrt(5) - 1) / 2
_NORMAL = NormalDist()


def radial_radius(k: int) -> Fraction:
    """Radius of radial round k: 2**(k/4) rounded to the radial granularity."""
    return Fraction(round(2 ** (k / 4) * RADIAL_GRANULARITY), RADIAL_GRANULARITY)


def direction(d: int, index: int) -> tuple[float, ...]:
    """Low-discrepancy unit direction number ``index`` in R^d."""
    if d == 1:
        return (1.0,) if index % 2 == 0 else (-1.0,)
    if d == 2:
        theta = 2 * math.pi * ((index * _GOLDEN) % 1.0)
        return (math.cos(theta), math.sin(theta))
    g = [_NORMAL.inv_cdf(min(max(float(_halton(index + 1, _PRIMES[j])), 1e-9), 1 - 1e-9)) for j in range(d)]
    norm = math.sqrt(sum(v * v for v in g)) or 1.0
    return tuple(v / norm for v in g)


def _round(v: float) -> Fraction:
    return Fraction(round(v * RADIAL_GRANULARITY), RADIAL_GRANULARITY)


def _shell(lengths: Sequence[int | None], s: int) -> Iterator[tuple[int, ...]]:
    """Index tuples with max entry exactly s, each entry below its length."""
    ranges = [range(min(s + 1, L) if L is not None else s + 1) for L in lengths]
    for idx in itertools.product(*ranges):
        if max(idx, default=0) == s:
            yield idx


def _shells(lengths: Sequence[int | None], seed: int) -> Iterator[list[tuple[int, ...]]]:
    rng = random.Random(seed) if seed else None
    finite = all(L is not None for L in lengths)
    top = max(lengths) if finite and lengths else None
    s = 0
    while top is None or s < top:
        shell = list(_shell(lengths, s))
        if rng is not None:
            rng.shuffle(shell)
        yield shell
        s += 1


# -- one-dimensional sequences ------------------------------------------------


def _log_abs(f: Fraction) -> float:
    # math.log accepts arbitrarily large ints, float(f) would overflow
    return math.log(abs(f.numerator)) - math.log(f.denominator)


@dataclass(frozen=True)
class SequenceRule:
    """Closed-form unbounded sequence, term k = 0, 1, 2, ...

    ``power``: scale * (start + k)**exponent
    ``linear``: start + step * k
    ``geometric``: start * ratio**k
    """

    kind: str
    scale: Fraction = Fraction(1)
    exponent: int = 1
    start: Fraction = Fraction(1)
    step: Fraction = Fraction(1)
    ratio: Fraction = Fraction(2)

    def __post_init__(self):
        for name in ("scale", "start", "step", "ratio"):
            object.__setattr__(self, name, _frac(getattr(self, name)))
        if self.kind == "power":
            if self.exponent < 1 or self.scale == 0 or self.start < 0 or self.start.denominator != 1:
                raise ValueError("power rule needs exponent >= 1, scale != 0, integer start >= 0")
        elif self.kind == "linear":
            if self.step == 0 or self.start * self.step < 0:
                raise ValueError("linear rule needs step != 0 and start of the same sign as step")
        elif self.kind == "geometric":
            if self.start == 0 or abs(self.ratio) <= 1:
                raise ValueError("geometric rule needs start != 0 and |ratio| > 1")
        else:
            raise ValueError(f"unknown sequence rule {self.kind!r}")

    def term(self, k: int) -> Fraction:
        if self.kind == "power":
            return self.scale * (self.start + k) ** self.exponent
        if self.kind == "linear":
            return self.start + self.step * k
        return self.start * self.ratio**k

    def index_of(self, x, tol=0) -> int | None:
        x = to_fraction(x)
        if self.kind == "power":
            y = x / self.scale
            if y < -tol:
                return None
            root = math.exp(_log_abs(y) / self.exponent) if y > 0 else 0.0
            guess = round(root - float(self.start))
            candidates = range(max(guess - 2, 0), guess + 3)
        elif self.kind == "linear":
            k = (x - self.start) / self.step
            guess = round(k)
            candidates = range(max(guess - 1, 0), guess + 2)
        else:
            if x == 0 or abs(x) < abs(self.start) - tol:
                return None
            guess = round(_log_abs(x / self.start) / _log_abs(self.ratio))
            candidates = range(max(guess - 1, 0), guess + 2)
        for k in candidates:
            if abs(self.term(k) - x) <= tol:
                return k
        return None

    def to_json(self) -> dict:
        out = {"kind": self.kind}
        if self.kind == "power":
            out.update(scale=format_scalar(self.scale), exponent=self.exponent, start=format_scalar(self.start))
        elif self.kind == "linear":
            out.update(start=format_scalar(self.start), step=format_scalar(self.step))
        else:
            out.update(start=format_scalar(self.start), ratio=format_scalar(self.ratio))
        return out

    @classmethod
    def from_json(cls, obj: Mapping) -> "SequenceRule":
        kw = {k: v for k, v in obj.items() if k != "kind"}
        if "exponent" in kw:
            kw["exponent"] = int(kw["exponent"])
        return cls(obj["kind"], **kw)


@dataclass(frozen=True)
class Sequence1D:
    """Either an explicit finite list of values or an infinite rule."""

    values: tuple = ()
    rule: SequenceRule | None = None

    def __post_init__(self):
        if (self.rule is None) == (not self.values):
            if self.rule is None:
                raise ValueError("a sequence needs values or a rule")
            raise ValueError("give values or a rule, not both")
        object.__setattr__(self, "values", tuple(_frac(v) for v in self.values))

    @property
    def length(self) -> int | None:
        return None if self.rule is not None else len(self.values)

    def term(self, k: int) -> Fraction:
        if self.rule is not None:
            return self.rule.term(k)
        return self.values[k]

    def prefix(self, n: int) -> list[Fraction]:
        if self.rule is None and n > len(self.values):
            raise SamplingError(f"sequence has only {len(self.values)} terms, {n} requested")
        return [self.term(k) for k in range(n)]

    def contains(self, x, tol=0) -> bool:
        if self.rule is not None:
            return self.rule.index_of(x, tol) is not None
        return any(abs(v - x) <= tol for v in self.values)

    def to_json(self) -> dict:
        if self.rule is not None:
            return {"rule": self.rule.to_json()}
        return {"values": [format_scalar(v) for v in self.values]}

    @classmethod
    def from_json(cls, obj: Mapping) -> "Sequence1D":
        if "rule" in obj:
            return cls(rule=SequenceRule.from_json(obj["rule"]))
        return cls(values=tuple(obj["values"]))


def _geometric_levels(length: int | None) -> Iterator[int]:
    """Strictly increasing indices ~ 2**(k/4) - 1, capped at ``length``."""
    last = -1
    k = 0
    while True:
        idx = max(last + 1, math.ceil(2 ** (k / 4)) - 1)
        if length is not None and idx >= length:
            return
        yield idx
        last = idx
        k += 1


# -- coordinate value sequences used by the grid strategy ----------------------


def _free_value(i: int) -> Fraction:
    # 0, 1, -1, 2, -2, ...
    return Fraction((i + 1) // 2 if i % 2 else -(i // 2))


def _interval_value(lo: Fraction, hi: Fraction, i: int, base: int = 2) -> Fraction:
    # endpoints first, then a van der Corput fill of the interval
    if i == 0:
        return lo
    if i == 1:
        return hi
    return lo + (hi - lo) * _halton(i - 1, base)


# -- escape sequences -----------------------------------------------------------


@dataclass(frozen=True)
class EscapeSequence:
    """Points (y_1..y_{j-1}, x_n, y_{j+1}..y_d) of K with |x_n| increasing."""

    axis: int
    base: tuple
    values: tuple

    def point(self, n: int) -> tuple:
        return self.base[: self.axis] + (self.values[n],) + self.base[self.axis :]

    def points(self) -> list[tuple]:
        return [self.point(n) for n in range(len(self.values))]

    def problems(self, K: "SupportSpec", factor: float = ESCAPE_RATIO) -> list[str]:
        out = []
        mags = [abs(v) for v in self.values]
        if len(mags) < 2:
            out.append("escape prefix shorter than two terms")
        if any(b <= a for a, b in zip(mags, mags[1:])):
            out.append("|x_n| not strictly increasing")
        if mags and mags[0] > 0 and mags[-1] / mags[0] < factor:
            out.append(f"|x_last|/|x_first| below {factor}")
        bad = [p for p in self.points() if not K.contains(p)]
        if bad:
            out.append(f"{len(bad)} composed points outside K, e.g. {bad[0]}")
        return out


def _increasing_abs(values, length: int) -> tuple:
    out = []
    for v in values:
        if not out or abs(v) > abs(out[-1]):
            out.append(v)
            if len(out) == length:
                break
    return tuple(out)


# -- the catalog -------------------------------------------------------------------


class SupportSpec:
    """Base class; see the concrete catalog classes below."""

    dimension: int
    kind = "abstract"
    default_strategy = "grid"

    # geometry ----------------------------------------------------------------
    def contains(self, x) -> bool:
        raise NotImplementedError

    def max_points(self) -> int | None:
        return None

    def is_bounded(self) -> bool | None:
        """True/False when known, None when the class cannot tell."""
        return False

    def bounded_axes(self) -> list[int] | None:
        """Axes j with x_j bounded on K (None if unknown)."""
        return []

    def escape_bases_infinite(self, axis: int) -> bool:
        return True

    def full_dimensional_cone(self) -> bool:
        return False

    # sampling ----------------------------------------------------------------
    def candidates(self, strategy: str, seed: int) -> Iterator[tuple]:
        if strategy == "radial":
            for rnd in self.radial_rounds(per_round=max(4, 2**self.dimension), seed=seed):
                yield from rnd
        elif strategy == "grid":
            yield from self._grid(seed)
        elif strategy == "prefix":
            yield from self._prefix(seed)
        else:
            raise ValueError(f"unknown sampling strategy {strategy!r}")

    def _grid(self, seed: int) -> Iterator[tuple]:
        raise NotImplementedError

    def _prefix(self, seed: int) -> Iterator[tuple]:
        return self._grid(seed)

    def radial_rounds(self, per_round: int, seed: int) -> Iterator[list[tuple]]:
        raise NotImplementedError

    def escape(self, axis: int, bases: int, length: int) -> list[EscapeSequence] | None:
        raise NotImplementedError

    # serialisation -------------------------------------------------------------
    def to_json(self) -> dict:
        raise NotImplementedError

    def _check_point(self, x) -> None:
        if len(x) != self.dimension:
            raise ValueError(f"point of dimension {len(x)} for a support of dimension {self.dimension}")


def _coord_grid(value_fns, lengths, seed):
    for shell in _shells(lengths, seed):
        for idx in shell:
            yield tuple(fn(i) for fn, i in zip(value_fns, idx))


def _bases_from_grid(value_fns, lengths, count):
    if not value_fns:
        return [()]
    out = []
    for p in _coord_grid(value_fns, lengths, 0):
        out.append(p)
        if len(out) == count:
            break
    return out


@dataclass(frozen=True)
class FullSpace(SupportSpec):
    dimension: int
    kind = "FullSpace"

    def __post_init__(self):
        if self.dimension < 1:
            raise ValueError("dimension must be >= 1")

    def contains(self, x) -> bool:
        self._check_point(x)
        return True

    def _grid(self, seed):
        return _coord_grid([_free_value] * self.dimension, [None] * self.dimension, seed)

    def radial_rounds(self, per_round, seed):
        d = self.dimension
        index = seed * 104729
        k = 0
        while True:
            r = radial_radius(k)
            rnd = []
            for _ in range(per_round):
                u = direction(d, index)
                index += 1
                rnd.append(tuple(_round(float(r) * c) for c in u))
            yield rnd
            k += 1

    def escape(self, axis, bases, length):
        d = self.dimension
        ys = _bases_from_grid([_free_value] * (d - 1), [None] * (d - 1), bases)
        vals = tuple(Fraction(n) for n in range(1, length + 1))
        return [EscapeSequence(axis, y, vals) for y in ys]

    def to_json(self):
        return {"class": self.kind, "dimension": self.dimension}


@dataclass(frozen=True)
class Orthant(SupportSpec):
    """[0, +inf)^d."""

    dimension: int
    kind = "Orthant"

    def __post_init__(self):
        if self.dimension < 1:
            raise ValueError("dimension must be >= 1")

    def contains(self, x) -> bool:
        self._check_point(x)
        tol = _slack(x)
        return all(c >= -tol for c in x)

    def _grid(self, seed):
        return _coord_grid([Fraction] * self.dimension, [None] * self.dimension, seed)

    def radial_rounds(self, per_round, seed):
        for rnd in FullSpace(self.dimension).radial_rounds(per_round, seed):
            yield [tuple(abs(c) for c in p) for p in rnd]

    def escape(self, axis, bases, length):
        d = self.dimension
        ys = _bases_from_grid([Fraction] * (d - 1), [None] * (d - 1), bases)
        vals = tuple(Fraction(n) for n in range(1, length + 1))
        return [EscapeSequence(axis, y, vals) for y in ys]

    def to_json(self):
        return {"class": self.kind, "dimension": self.dimension}


@dataclass(frozen=True)
class Grid(SupportSpec):
    """Product of one-dimensional sequences, one per axis (strictly increasing)."""

    axes: tuple
    kind = "Grid"

    def __post_init__(self):
        axes = tuple(a if isinstance(a, Sequence1D) else Sequence1D(values=tuple(a)) for a in self.axes)
        if not axes:
            raise ValueError("a grid needs at least one axis")
        for a in axes:
            if a.rule is None and any(y <= x for x, y in zip(a.values, a.values[1:])):
                raise ValueError("grid axis values must be strictly increasing")
        object.__setattr__(self, "axes", axes)

    @property
    def dimension(self) -> int:
        return len(self.axes)

    def contains(self, x) -> bool:
        self._check_point(x)
        tol = _slack(x)
        return all(a.contains(c, tol) for a, c in zip(self.axes, x))

    def max_points(self):
        lengths = [a.length for a in self.axes]
        return math.prod(lengths) if all(L is not None for L in lengths) else None

    def is_bounded(self):
        return all(a.length is not None for a in self.axes)

    def bounded_axes(self):
        return [j for j, a in enumerate(self.axes) if a.length is not None]

    def escape_bases_infinite(self, axis):
        return all(a.length is None for j, a in enumerate(self.axes) if j != axis)

    def _grid(self, seed):
        return _coord_grid([a.term for a in self.axes], [a.length for a in self.axes], seed)

    def radial_rounds(self, per_round, seed):
        levels = [list(_take(_geometric_levels(a.length), 4096)) for a in self.axes]
        rng = random.Random(seed)
        depth = max(len(lv) for lv in levels)
        for k in range(depth):
            rnd = [
                tuple(a.term(lv[i]) for a, lv, i in zip(self.axes, levels, idx))
                for idx in _shell([len(lv) for lv in levels], k)
            ]
            if len(rnd) > per_round:
                keep = sorted(rng.sample(range(len(rnd)), per_round))
                rnd = [rnd[i] for i in keep]
            if rnd:
                yield rnd

    def escape(self, axis, bases, length):
        ax = self.axes[axis]
        if ax.length is not None:
            return []
        others = [a for j, a in enumerate(self.axes) if j != axis]
        ys = _bases_from_grid([a.term for a in others], [a.length for a in others], bases)
        vals = _increasing_abs((ax.term(k) for k in itertools.count()), length)
        return [EscapeSequence(axis, y, vals) for y in ys]

    def to_json(self):
        return {"class": self.kind, "axes": [a.to_json() for a in self.axes]}


def _take(it, n):
    return itertools.islice(it, n)


@dataclass(frozen=True)
class Strip(SupportSpec):
    """Product of closed intervals (bounded coordinates) and copies of R.

    ``bounds[j]`` is ``(lo, hi)`` for a bounded coordinate and ``None`` for a
    free one; ``Strip(((0, 1), None))`` is [0,1] x R.
    """

    bounds: tuple
    kind = "Strip"

    def __post_init__(self):
        clean = []
        for b in self.bounds:
            if b is None:
                clean.append(None)
            else:
                lo, hi = _frac(b[0]), _frac(b[1])
                if lo > hi:
                    raise ValueError(f"empty interval [{lo}, {hi}]")
                clean.append((lo, hi))
        if not clean:
            raise ValueError("a strip needs at least one coordinate")
        object.__setattr__(self, "bounds", tuple(clean))

    @property
    def dimension(self) -> int:
        return len(self.bounds)

    @property
    def free_axes(self) -> list[int]:
        return [j for j, b in enumerate(self.bounds) if b is None]

    def contains(self, x) -> bool:
        self._check_point(x)
        tol = _slack(x)
        return all(b is None or b[0] - tol <= c <= b[1] + tol for b, c in zip(self.bounds, x))

    def is_bounded(self):
        return not self.free_axes

    def bounded_axes(self):
        return [j for j, b in enumerate(self.bounds) if b is not None]

    def escape_bases_infinite(self, axis):
        return all(b is None or b[0] < b[1] for j, b in enumerate(self.bounds) if j != axis)

    def _value_fns(self, axes=None):
        fns = []
        for j, b in enumerate(self.bounds):
            if axes is not None and j not in axes:
                continue
            if b is None:
                fns.append(_free_value)
            else:
                fns.append(lambda i, lo=b[0], hi=b[1], base=_PRIMES[j % len(_PRIMES)]: _interval_value(lo, hi, i, base))
        return fns

    def _lengths(self, axes=None):
        out = []
        for j, b in enumerate(self.bounds):
            if axes is not None and j not in axes:
                continue
            out.append(1 if b is not None and b[0] == b[1] else None)
        return out

    def _grid(self, seed):
        return _coord_grid(self._value_fns(), self._lengths(), seed)

    def radial_rounds(self, per_round, seed):
        free = self.free_axes
        counter = itertools.count()
        free_rounds = FullSpace(len(free)).radial_rounds(per_round, seed) if free else None
        while True:
            rnd = next(free_rounds) if free_rounds is not None else [()] * per_round
            out = []
            for fp in rnd:
                i = next(counter)
                it = iter(fp)
                point = []
                for j, b in enumerate(self.bounds):
                    if b is None:
                        point.append(next(it))
                    else:
                        point.append(_interval_value(b[0], b[1], i, _PRIMES[j % len(_PRIMES)]))
                out.append(tuple(point))
            yield out

    def escape(self, axis, bases, length):
        if self.bounds[axis] is not None:
            return []
        others = [j for j in range(self.dimension) if j != axis]
        ys = _bases_from_grid(self._value_fns(others), self._lengths(others), bases)
        vals = tuple(Fraction(n) for n in range(1, length + 1))
        return [EscapeSequence(axis, y, vals) for y in ys]

    def to_json(self):
        return {
            "class": self.kind,
            "bounds": [None if b is None else [format_scalar(b[0]), format_scalar(b[1])] for b in self.bounds],
        }


@dataclass(frozen=True)
class BoundedBox(Strip):
    """Product of closed intervals."""

    kind = "BoundedBox"

    def __post_init__(self):
        if any(b is None for b in self.bounds):
            raise ValueError("every coordinate of a box needs an interval")
        super().__post_init__()

    @property
    def intervals(self):
        return self.bounds

    def to_json(self):
        return {"class": self.kind, "intervals": [[format_scalar(a), format_scalar(b)] for a, b in self.bounds]}


@dataclass(frozen=True)
class PointSequence1D(SupportSpec):
    """A discrete closed subset of R given by an unbounded sequence.

    With explicit ``values`` only that prefix is known (sampling and membership
    are limited to it); a ``rule`` describes the whole sequence.  Absolute
    values must be strictly increasing, which rules out finite cluster points.
    """

    sequence: Sequence1D
    kind = "PointSequence1D"
    default_strategy = "prefix"

    def __post_init__(self):
        seq = self.sequence
        if not isinstance(seq, Sequence1D):
            seq = Sequence1D(values=tuple(seq))
            object.__setattr__(self, "sequence", seq)
        if seq.rule is None:
            mags = [abs(v) for v in seq.values]
            if any(b <= a for a, b in zip(mags, mags[1:])):
                raise ValueError("PointSequence1D values need strictly increasing absolute values")

    @classmethod
    def of(cls, values=None, rule: SequenceRule | None = None) -> "PointSequence1D":
        return cls(Sequence1D(values=tuple(values or ()), rule=rule))

    @property
    def dimension(self) -> int:
        return 1

    def contains(self, x) -> bool:
        self._check_point(x)
        return self.sequence.contains(x[0], _slack(x))

    def max_points(self):
        return self.sequence.length

    def _grid(self, seed):
        for k in itertools.count() if self.sequence.length is None else range(self.sequence.length):
            yield (self.sequence.term(k),)

    def radial_rounds(self, per_round, seed):
        for idx in _geometric_levels(self.sequence.length):
            yield [(self.sequence.term(idx),)]

    def escape(self, axis, bases, length):
        if axis != 0:
            raise ValueError("axis out of range")
        n = length if self.sequence.length is None else min(length, self.sequence.length)
        return [EscapeSequence(0, (), _increasing_abs(self.sequence.prefix(n), n))]

    def to_json(self):
        return {"class": self.kind, **self.sequence.to_json()}


@dataclass(frozen=True)
class UnionOfRays(SupportSpec):
    """Union of closed rays {offset + t * direction : t >= 0}."""

    offsets: tuple
    directions: tuple
    kind = "UnionOfRays"

    def __post_init__(self):
        offs = tuple(tuple(_frac(c) for c in o) for o in self.offsets)
        dirs = tuple(tuple(_frac(c) for c in v) for v in self.directions)
        if not offs or len(offs) != len(dirs):
            raise ValueError("need matching, non-empty offsets and directions")
        d = len(offs[0])
        if any(len(p) != d for p in offs + dirs):
            raise ValueError("ray dimensions differ")
        object.__setattr__(self, "offsets", offs)
        object.__setattr__(self, "directions", dirs)

    @property
    def dimension(self) -> int:
        return len(self.offsets[0])

    def contains(self, x) -> bool:
        self._check_point(x)
        tol = _slack(x)
        for o, v in zip(self.offsets, self.directions):
            vv = sum(c * c for c in v)
            diff = [a - b for a, b in zip(x, o)]
            if vv == 0:
                if all(abs(c) <= tol for c in diff):
                    return True
                continue
            t = sum(a * b for a, b in zip(diff, v)) / vv
            if t < -tol:
                continue
            if all(abs(a - t * b) <= tol for a, b in zip(diff, v)):
                return True
        return False

    def is_bounded(self):
        return all(all(c == 0 for c in v) for v in self.directions)

    def bounded_axes(self):
        return [j for j in range(self.dimension) if all(v[j] == 0 for v in self.directions)]

    def escape_bases_infinite(self, axis):
        return False

    def _ray_point(self, i, t):
        return tuple(a + t * b for a, b in zip(self.offsets[i], self.directions[i]))

    def _grid(self, seed):
        for t in itertools.count():
            for i in range(len(self.offsets)):
                yield self._ray_point(i, Fraction(t))

    def radial_rounds(self, per_round, seed):
        for k in itertools.count():
            r = radial_radius(k)
            yield [self._ray_point(i, r) for i in range(len(self.offsets))]

    def escape(self, axis, bases, length):
        out = []
        for o, v in zip(self.offsets, self.directions):
            if v[axis] != 0 and all(c == 0 for j, c in enumerate(v) if j != axis):
                vals = _increasing_abs((o[axis] + t * v[axis] for t in itertools.count(1)), length)
                out.append(EscapeSequence(axis, o[:axis] + o[axis + 1 :], vals))
        return out[:bases]

    def to_json(self):
        return {
            "class": self.kind,
            "rays": [
                {"offset": [format_scalar(c) for c in o], "direction": [format_scalar(c) for c in v]}
                for o, v in zip(self.offsets, self.directions)
            ],
        }


@dataclass(frozen=True)
class AffineCone(SupportSpec):
    """vertex + {sum_i t_i g_i : t_i >= 0} for generators g_i."""

    vertex: tuple
    generators: tuple
    kind = "AffineCone"

    def __post_init__(self):
        v = tuple(_frac(c) for c in self.vertex)
        gens = tuple(tuple(_frac(c) for c in g) for g in self.generators)
        if not gens or any(len(g) != len(v) for g in gens):
            raise ValueError("generators must be non-empty and match the vertex dimension")
        object.__setattr__(self, "vertex", v)
        object.__setattr__(self, "generators", gens)

    @property
    def dimension(self) -> int:
        return len(self.vertex)

    def _in_cone(self, y) -> bool:
        # float points are taken at their exact binary value
        from .simplex import feasible

        A = [[g[i] for g in self.generators] for i in range(self.dimension)]
        return feasible(A, [to_fraction(c) for c in y], exact=True) is not None

    def contains(self, x) -> bool:
        self._check_point(x)
        return self._in_cone([to_fraction(a) - b for a, b in zip(x, self.vertex)])

    def recession_contains(self, u) -> bool:
        return self._in_cone(u)

    def full_dimensional_cone(self) -> bool:
        from .linalg import rank_exact

        return rank_exact([list(g) for g in self.generators]) == self.dimension

    def is_bounded(self):
        return all(all(c == 0 for c in g) for g in self.generators)

    def bounded_axes(self):
        return [j for j in range(self.dimension) if all(g[j] == 0 for g in self.generators)]

    def escape_bases_infinite(self, axis):
        return self.full_dimensional_cone()

    def _combo(self, coeffs):
        return tuple(
            v + sum((c * g[i] for c, g in zip(coeffs, self.generators)), Fraction(0))
            for i, v in enumerate(self.vertex)
        )

    def _grid(self, seed):
        k = len(self.generators)
        for shell in _shells([None] * k, seed):
            for idx in shell:
                yield self._combo([Fraction(i) for i in idx])

    def radial_rounds(self, per_round, seed):
        k = len(self.generators)
        index = seed * 104729
        for j in itertools.count():
            r = radial_radius(j)
            rnd = []
            for _ in range(per_round):
                index += 1
                w = [_halton(index, _PRIMES[i]) + Fraction(1, 64) for i in range(k)]
                total = sum(w)
                rnd.append(self._combo([_round(float(r * c / total)) for c in w]))
            yield rnd

    def escape(self, axis, bases, length):
        e = [Fraction(0)] * self.dimension
        for sign in (1, -1):
            e[axis] = Fraction(sign)
            if self.recession_contains(e):
                break
        else:
            return []
        ys, starts = [], []
        for p in self._grid(0):
            y = p[:axis] + p[axis + 1 :]
            if y in ys:
                continue
            ys.append(y)
            starts.append(p[axis])
            if len(ys) == bases or len(ys) > 64 * bases:
                break
        return [
            EscapeSequence(axis, y, _increasing_abs((s + sign * n for n in itertools.count(1)), length))
            for y, s in zip(ys, starts)
        ]

    def to_json(self):
        return {
            "class": self.kind,
            "vertex": [format_scalar(c) for c in self.vertex],
            "generators": [[format_scalar(c) for c in g] for g in self.generators],
        }


@dataclass(frozen=True)
class EscapeFamily:
    """Data-driven escape generator for a SampledSet: base point + rule on one axis."""

    axis: int
    base: tuple
    rule: SequenceRule

    def __post_init__(self):
        object.__setattr__(self, "base", tuple(_frac(c) for c in self.base))

    def point(self, k: int) -> tuple:
        return self.base[: self.axis] + (self.rule.term(k),) + self.base[self.axis :]

    def to_json(self):
        return {"axis": self.axis, "base": [format_scalar(c) for c in self.base], "rule": self.rule.to_json()}


@dataclass(frozen=True)
class SampledSet(SupportSpec):
    """A user-supplied point list standing in for an otherwise unknown closed set.

    ``escapes`` optionally adds escape families; their points belong to the set.
    ``certified`` records that the user vouches for representability.
    """

    dimension: int
    points: tuple = ()
    escapes: tuple = ()
    certified: bool = False
    kind = "SampledSet"
    default_strategy = "prefix"

    def __post_init__(self):
        pts = tuple(tuple(_frac(c) for c in p) for p in self.points)
        if any(len(p) != self.dimension for p in pts):
            raise ValueError("sample point dimension mismatch")
        if len(set(pts)) != len(pts):
            raise ValueError("duplicate sample points")
        for f in self.escapes:
            if len(f.base) != self.dimension - 1 or not 0 <= f.axis < self.dimension:
                raise ValueError("escape family does not fit the dimension")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "escapes", tuple(self.escapes))

    def contains(self, x) -> bool:
        self._check_point(x)
        tol = _slack(x)
        if tuple(x) in set(self.points):
            return True
        if tol and any(all(abs(a - b) <= tol for a, b in zip(x, p)) for p in self.points):
            return True
        for f in self.escapes:
            y = tuple(x[: f.axis]) + tuple(x[f.axis + 1 :])
            if all(abs(a - b) <= tol for a, b in zip(y, f.base)) and f.rule.index_of(x[f.axis], tol) is not None:
                return True
        return False

    def max_points(self):
        return None if self.escapes else len(self.points)

    def is_bounded(self):
        return False if self.escapes else None

    def bounded_axes(self):
        return None

    def escape_bases_infinite(self, axis):
        return False

    def _escape_points(self):
        for k in itertools.count():
            for f in self.escapes:
                yield f.point(k)

    def _grid(self, seed):
        yield from self.points
        if self.escapes:
            yield from self._escape_points()

    def radial_rounds(self, per_round, seed):
        if self.points:
            yield list(self.points)
        if not self.escapes:
            return
        for idx in _geometric_levels(None):
            yield [f.point(idx) for f in self.escapes]

    def escape(self, axis, bases, length):
        if not self.escapes:
            return None
        return [
            EscapeSequence(axis, f.base, _increasing_abs((f.rule.term(k) for k in itertools.count()), length))
            for f in self.escapes
            if f.axis == axis
        ][:bases]

    def to_json(self):
        out = {
            "class": self.kind,
            "dimension": self.dimension,
            "points": [[format_scalar(c) for c in p] for p in self.points],
        }
        if self.escapes:
            out["escapes"] = [f.to_json() for f in self.escapes]
        if self.certified:
            out["certified"] = True
        return out


# -- operations ------------------------------------------------------------------


def contains(K: SupportSpec, x) -> bool:
    return K.contains(tuple(x))


def sample(K: SupportSpec, n: int, strategy: str | None = None, seed: int = DEFAULT_SEED) -> list[tuple]:
    """``n`` distinct points of K, deterministic in (K, n, strategy, seed).

    ``grid`` walks a lattice adapted to K shell by shell, ``radial`` uses radii
    2**(k/4) with low-discrepancy directions, ``prefix`` takes sequence or list
    order.  Raises SamplingError when K cannot supply n distinct points.
    """
    if n < 1:
        raise ValueError("need n >= 1")
    strategy = strategy or K.default_strategy
    cap = K.max_points()
    if cap is not None and cap < n:
        raise SamplingError(f"{K.kind} has only {cap} points, {n} requested")
    out: list[tuple] = []
    seen: set = set()
    misses = 0
    for p in K.candidates(strategy, seed):
        if p in seen or not K.contains(p):
            misses += 1
            if misses > 1000 * n + 100000:
                break
            continue
        seen.add(p)
        out.append(p)
        if len(out) == n:
            return out
    raise SamplingError(f"{K.kind} produced only {len(out)} distinct points, {n} requested")


def escape_sequences(K: SupportSpec, axis: int, bases: int, length: int = 16) -> list[EscapeSequence] | None:
    """Escape sequences along ``axis`` (0-based) at up to ``bases`` base points.

    Returns [] when K provably has none on that axis and None when the class
    cannot tell (a SampledSet without escape families).
    """
    if not 0 <= axis < K.dimension:
        raise ValueError(f"axis {axis} out of range for dimension {K.dimension}")
    return K.escape(axis, bases, length)


# -- JSON ----------------------------------------------------------------------------


def support_from_json(obj: Mapping) -> SupportSpec:
    try:
        cls = obj["class"]
        if cls == "FullSpace":
            return FullSpace(int(obj["dimension"]))
        if cls == "Orthant":
            return Orthant(int(obj["dimension"]))
        if cls == "Grid":
            return Grid(tuple(Sequence1D.from_json(a) for a in obj["axes"]))
        if cls == "Strip":
            return Strip(tuple(None if b is None else tuple(b) for b in obj["bounds"]))
        if cls == "BoundedBox":
            return BoundedBox(tuple(tuple(b) for b in obj["intervals"]))
        if cls == "PointSequence1D":
            return PointSequence1D(Sequence1D.from_json(obj))
        if cls == "UnionOfRays":
            rays = obj["rays"]
            return UnionOfRays(tuple(r["offset"] for r in rays), tuple(r["direction"] for r in rays))
        if cls == "AffineCone":
            return AffineCone(tuple(obj["vertex"]), tuple(tuple(g) for g in obj["generators"]))
        if cls == "SampledSet":
            escapes = tuple(
                EscapeFamily(int(e["axis"]), tuple(e["base"]), SequenceRule.from_json(e["rule"]))
                for e in obj.get("escapes", [])
            )
            return SampledSet(int(obj["dimension"]), tuple(tuple(p) for p in obj.get("points", [])), escapes, bool(obj.get("certified", False)))
    except (KeyError, TypeError, IndexError) as exc:
        raise ValueError(f"malformed support spec: {exc!r}") from exc
    raise ValueError(f"unknown support class {obj.get('class')!r}")
