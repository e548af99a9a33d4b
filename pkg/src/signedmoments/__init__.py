"""Signed-measure moment problems on closed subsets of R^d.

Every linear functional on R[x_1..x_d] is integration against a signed
measure supported in K exactly when K is Zariski dense and each growth space
N_n(K) is finite-dimensional.  ``analysis`` turns that into finite checks,
``construct`` builds signed atomic measures with prescribed moments.
"""

from .analysis import (
    AnalysisReport,
    EvaluationMatrix,
    GrowthReport,
    GrowthVerdict,
    Verdict,
    classify,
    condition_star_check,
    growth_test,
    nn_dimension,
    zariski_density_check,
)
from .construct import (
    MatchProblem,
    MatchResult,
    Objective,
    RankDeficientError,
    construct_signed_measure,
    jordan_decompose,
    polya_construct_1d,
    verify_match,
)
from .moments import (
    MomentSequence,
    Polynomial,
    SignedAtomicMeasure,
    basis_size,
    enumerate_basis,
    eval_poly,
    integrate,
    moments_of,
)
from .numeric import EXACT, FLOAT
from .support import (
    AffineCone,
    BoundedBox,
    FullSpace,
    Grid,
    Orthant,
    PointSequence1D,
    SampledSet,
    SequenceRule,
    Strip,
    SupportSpec,
    UnionOfRays,
    contains,
    escape_sequences,
    sample,
)

__version__ = "0.1.0"
