"""Shared support fixtures."""

from fractions import Fraction

from signedmoments.support import (
    AffineCone,
    BoundedBox,
    EscapeFamily,
    FullSpace,
    Grid,
    Orthant,
    PointSequence1D,
    SampledSet,
    Sequence1D,
    SequenceRule,
    Strip,
    UnionOfRays,
)

SQUARES = PointSequence1D.of(rule=SequenceRule("power", exponent=2, start=1))
NATURALS = PointSequence1D.of(rule=SequenceRule("linear", start=1, step=1))
GRID5 = Grid((tuple(range(1, 6)),) * 2)
INFINITE_GRID = Grid((Sequence1D(rule=SequenceRule("linear", start=1, step=1)), Sequence1D(rule=SequenceRule("power", exponent=2, start=0))))
STRIP = Strip(((0, 1), None))


def generic_samples(n: int = 60) -> SampledSet:
    return SampledSet(2, tuple((Fraction(i), Fraction(i * i * i % 97, 7)) for i in range(1, n + 1)))


CATALOG = {
    "full1": FullSpace(1),
    "full2": FullSpace(2),
    "full3": FullSpace(3),
    "orthant2": Orthant(2),
    "orthant3": Orthant(3),
    "grid5": GRID5,
    "grid_inf": INFINITE_GRID,
    "strip": STRIP,
    "strip3": Strip((None, (-1, 2), None)),
    "box1": BoundedBox(((0, 1),)),
    "box2": BoundedBox(((0, 1), (Fraction(-1, 2), 3))),
    "squares": SQUARES,
    "naturals": NATURALS,
    "geometric": PointSequence1D.of(rule=SequenceRule("geometric", start=-1, ratio=-3)),
    "listed": PointSequence1D.of(values=(1, -2, 4, -8, 16)),
    "rays": UnionOfRays(((0, 0), (1, 1)), ((1, 0), (0, 1))),
    "cone": AffineCone((0, 0), ((1, 1), (1, 2))),
    "cone_wide": AffineCone((1, -1), ((1, 0), (0, 1), (-1, 1))),
    "sampled": generic_samples(),
    "sampled_escapes": SampledSet(
        2,
        ((Fraction(0), Fraction(0)), (Fraction(1), Fraction(3))),
        (EscapeFamily(0, (Fraction(2),), SequenceRule("linear", start=1, step=1)),),
    ),
}
