"""Exception hierarchy shared by all parabolica modules.

Three families map onto the CLI exit codes: validation problems (bad or
inconsistent input, exit 1), numerical failures (a solver could not deliver
its contract, exit 2), and invariant violations (a computed object failed a
structural self-check, exit 3).
"""


class ParabolicaError(Exception):
    """Base class for all errors raised by this package."""

    exit_code = 2


class ValidationError(ParabolicaError):
    """Input rejected before any numerics ran."""

    exit_code = 1


class NumericalError(ParabolicaError):
    """A numerical routine could not meet its contract."""

    exit_code = 2


class InvariantViolation(ParabolicaError):
    """A computed object failed one of its structural invariants."""

    exit_code = 3


# --- circle combinatorics -------------------------------------------------

class DuplicatePoint(ValidationError):
    pass


class ClassTooLarge(ValidationError):
    pass


class Intermingled(ValidationError):
    pass


class InvalidPartition(ValidationError):
    pass


class SizeMismatch(ValidationError):
    pass


class SynchronizedInput(ValidationError):
    pass


# --- germ normalization ---------------------------------------------------

class NotNormalized(ValidationError):
    pass


class OutOfDomain(ValidationError):
    pass


class NonMonotone(NumericalError):
    pass


class DecayViolation(NumericalError):
    pass


class SlowOrbit(NumericalError):
    pass


class FlowMismatch(NumericalError):
    pass


class SignMismatch(ValidationError):
    pass


class SingularIntegrand(ValidationError):
    pass


# --- unfolding analysis ---------------------------------------------------

class NonpositiveEpsilon(ValidationError):
    pass


class NoBracket(NumericalError):
    pass


class MultipleRoots(NumericalError):
    pass


class ZeroTau(ValidationError):
    pass


class PivotOutOfRange(ValidationError):
    pass


# --- annulus simulation ---------------------------------------------------

class NoCrossing(NumericalError):
    pass


class Stuck(ValidationError):
    pass


class GridTooCoarse(NumericalError):
    pass
