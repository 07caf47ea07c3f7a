"""Poisson and tail boundaries of abelian random walks, and exactness of
Rokhlin skew products built over them."""

__version__ = "0.1.0"

from .errors import InputError, ResourceLimitError, UnsupportedOracleError, WalkboundError
from .groups import (
    GroupElement,
    GroupSpec,
    QuotientStructure,
    Subgroup,
    is_finite,
    member,
    quotient,
    subgroup_generated,
)
from .walks import (
    JumpMeasure,
    WalkAnalysis,
    analyze,
    convolution_power,
    poisson_subgroup,
    tail_subgroup,
)
from .rokhlin import (
    Angle,
    Branch,
    DichotomyResult,
    RokhlinSystem,
    TargetAction,
    declare_irrational,
    decide_ergodic,
    decide_exact,
    image_closure_is_full,
    is_weakly_mixing_quotient,
    meilijson_check,
    reducibility_dichotomy,
)
from .spectral import (
    SpectrumReport,
    TrajectorySample,
    character_spectrum,
    mixing_profile,
    simulate,
    transfer_iterate,
)
