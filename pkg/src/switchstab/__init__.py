"""
Stabilization of discrete-time switched linear systems whose active mode is
observed only at random instants.

The controller applies a per-mode feedback gain keyed to the most recently
observed mode. Stability is certified through growth factors zeta_{i,j}
bounding the expansion of a common quadratic function when subsystem i runs
under gain j, averaged along the mode chain and the observation-gap
distribution. The package covers the analysis side (sequence-valued chain,
certificate conditions, relaxed bounded-gap conditions), gain synthesis via
LMI feasibility, and closed-loop Monte Carlo validation, with a compiled
extension for the simulation hot loops and a pure-NumPy fallback.
"""

from ._backend import backend_name
from .errors import (
    BadInitialMode,
    BadTheta,
    DimensionMismatch,
    ExplosionGuard,
    NoFeasiblePoint,
    NonFiniteState,
    NonPositiveZeta,
    NotAperiodic,
    NotIrreducible,
    NotStochastic,
    NumericalFailure,
    OutOfHorizon,
    ParseError,
    PathTooShort,
    SingularResolvent,
    SingularRtilde,
    SolverStall,
    SupportExceedsMaxLen,
    SwitchStabError,
    UnknownExample,
    UnsupportedParameter,
    ValidationError,
)
from .markov import (
    ModeChain,
    ModePath,
    invariant_distribution,
    l_step,
    new_mode_chain,
    sample_path,
)
from .modeseq import (
    ModeSequence,
    TruncatedSequenceSpace,
    build_space,
    enumerate_sequences,
    initial_distribution,
    invariant_distribution_phi,
    segment_path,
    stationarity_residual,
    transition_probability,
)
from .problems import Problem, builtin_problem
from .renewal import (
    IntervalDistribution,
    ObservationTimes,
    counting_process,
    explicit_distribution,
    geometric_distribution,
    periodic_distribution,
    sample_observation_times,
    uniform_distribution,
)
from .simulate import (
    MonteCarloReport,
    Trajectory,
    closed_loop_run,
    eta_exponent,
    export_trajectory,
    monte_carlo,
)
from .stability import (
    CondpReport,
    MonotonicityReport,
    SwitchedSystem,
    Theorem2Report,
    ZetaCertificate,
    check_condp,
    check_theorem2,
    condzeta_lhs_general,
    condzeta_lhs_geometric,
    condzeta_lhs_periodic,
    ergodic_rate,
    monotonicity_check,
    new_certificate,
    new_switched_system,
)
from .synthesis import (
    FixedGainReport,
    GainProvenance,
    GainSet,
    SynthesisConfig,
    fixed_gain_feasibility,
    gains_from,
    lmi_feasible,
    synthesize,
)

__version__ = "0.1.0"

__all__ = [
    "BadInitialMode",
    "BadTheta",
    "CondpReport",
    "DimensionMismatch",
    "ExplosionGuard",
    "FixedGainReport",
    "GainProvenance",
    "GainSet",
    "IntervalDistribution",
    "ModeChain",
    "ModePath",
    "ModeSequence",
    "MonotonicityReport",
    "MonteCarloReport",
    "NoFeasiblePoint",
    "NonFiniteState",
    "NonPositiveZeta",
    "NotAperiodic",
    "NotIrreducible",
    "NotStochastic",
    "NumericalFailure",
    "ObservationTimes",
    "OutOfHorizon",
    "ParseError",
    "PathTooShort",
    "Problem",
    "SingularResolvent",
    "SingularRtilde",
    "SolverStall",
    "SupportExceedsMaxLen",
    "SwitchStabError",
    "SwitchedSystem",
    "SynthesisConfig",
    "Theorem2Report",
    "Trajectory",
    "TruncatedSequenceSpace",
    "UnknownExample",
    "UnsupportedParameter",
    "ValidationError",
    "ZetaCertificate",
    "backend_name",
    "build_space",
    "builtin_problem",
    "check_condp",
    "check_theorem2",
    "closed_loop_run",
    "condzeta_lhs_general",
    "condzeta_lhs_geometric",
    "condzeta_lhs_periodic",
    "counting_process",
    "enumerate_sequences",
    "ergodic_rate",
    "eta_exponent",
    "explicit_distribution",
    "export_trajectory",
    "fixed_gain_feasibility",
    "gains_from",
    "geometric_distribution",
    "initial_distribution",
    "invariant_distribution",
    "invariant_distribution_phi",
    "l_step",
    "lmi_feasible",
    "monotonicity_check",
    "monte_carlo",
    "new_certificate",
    "new_mode_chain",
    "new_switched_system",
    "periodic_distribution",
    "sample_observation_times",
    "sample_path",
    "segment_path",
    "stationarity_residual",
    "synthesize",
    "transition_probability",
    "uniform_distribution",
]
