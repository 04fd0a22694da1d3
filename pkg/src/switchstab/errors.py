"""Exception taxonomy for the library.

Every error raised by the public API derives from SwitchStabError, so callers
can catch one base class. Input-validation failures and numerical failures are
kept distinct: the former mean the problem statement is malformed, the latter
mean a verdict could not be reached.
"""


class SwitchStabError(Exception):
    """Base class for all library errors."""


# ---------------------------------------------------------------- mode chain

class NotStochastic(SwitchStabError):
    """Transition matrix has a negative entry or a row not summing to 1."""


class NotIrreducible(SwitchStabError):
    """Some mode cannot reach some other mode."""


class NotAperiodic(SwitchStabError):
    """The transition graph has period greater than 1."""


class BadInitialMode(SwitchStabError):
    """Initial mode index outside {1..M}."""


class NumericalFailure(SwitchStabError):
    """A linear-algebra computation did not meet its residual tolerance."""


# ------------------------------------------------------- interval distribution

class EmptySupport(SwitchStabError):
    """Distribution constructor received no support points."""


class NegativeProbability(SwitchStabError):
    """A probability mass was negative."""


class ZeroTotalMass(SwitchStabError):
    """All probability masses were zero; nothing to normalize."""


class BadSupport(SwitchStabError):
    """Support points must be positive integers."""


class BadBounds(SwitchStabError):
    """Invalid bounds for the uniform constructor."""


class BadTheta(SwitchStabError):
    """Observation probability or truncation tolerance out of range."""


class OutOfHorizon(SwitchStabError):
    """Counting-process query beyond the covered horizon."""


# ------------------------------------------------------------- sequence space

class SupportExceedsMaxLen(SwitchStabError):
    """Requested max sequence length is below the distribution's support."""


class ExplosionGuard(SwitchStabError):
    """Sequence enumeration would exceed the configured cap."""


class PathTooShort(SwitchStabError):
    """Mode path does not cover the observation times to segment."""


# ------------------------------------------------------------------ stability

class DimensionMismatch(SwitchStabError):
    """Inconsistent matrix dimensions across a system or certificate."""


class NonPositiveZeta(SwitchStabError):
    """A growth factor was below the positivity floor."""


class SingularResolvent(SwitchStabError):
    """The resolvent (I - (1-theta)P) could not be inverted."""


# ------------------------------------------------------------------ synthesis

class SolverStall(SwitchStabError):
    """Iteration cap reached with neither a feasible point nor an
    infeasibility certificate."""


class NoFeasiblePoint(SwitchStabError):
    """Gain search exhausted its grid without a feasible candidate."""


class SingularRtilde(SwitchStabError):
    """Certificate factor R_tilde is numerically singular."""


# ------------------------------------------------------------------- simulate

class NonFiniteState(SwitchStabError):
    """State norm exceeded the divergence clamp during simulation."""


class IoFailure(SwitchStabError):
    """Trajectory export could not write its output."""


# ------------------------------------------------------------------------ cli

class ParseError(SwitchStabError):
    """Problem or certificate file is not valid JSON or misses a field."""


class ValidationError(SwitchStabError):
    """Problem file parsed but violated an invariant."""


class UnsupportedParameter(SwitchStabError):
    """Sweep requested over a parameter that is not sweepable."""


class UnknownExample(SwitchStabError):
    """Built-in example id is not one of the provided problems."""
