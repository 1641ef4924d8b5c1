"""Kochen-Specker contextuality and the 18-vector pseudo-telepathy game."""

from .coloring import (
    CtxAssignment,
    ParityCertificate,
    min_contextuality,
    parity_certificate,
    satisfies,
    search_noncontextual,
)
from .harness import (
    Question,
    Transcript,
    draw_question,
    evaluate_win,
    exact_win_probability,
    play_rounds,
)
from .hvt2d import UnitVec3, born_prob, hvt_prob_analytic, hvt_prob_mc, hvt_value
from .ks_core import (
    Basis,
    IntVec4,
    KsSet,
    cabello_set,
    canonicalize,
    dot,
    load_ks_set,
    parse_ks_set,
    validate_ks_set,
)
from .quantum import (
    JointDistribution,
    completeness_check,
    joint_distribution,
    overlap_prob,
    sample_joint,
)
from .rng import RandomSource
from .strategies import (
    best_classical,
    deterministic_strategy,
    one_cbit_strategy,
    quantum_strategy,
    shared_randomness_strategy,
)

__version__ = "0.1.0"
