"""Exception hierarchy shared by every module."""


class FermatError(Exception):
    """Base class for all domain errors raised by this package."""


class BackendMismatch(FermatError):
    """Two values built over different scalar backends were combined."""


class RootNotExact(FermatError):
    """An m-th root has no exact representation in the current backend."""


class ExactBackendRootNeeded(RootNotExact):
    """Evaluating a fractional power of a rational produced an irrational."""


class NoRealRoot(FermatError):
    """An even-order root of a negative quantity was requested."""


class NotInSliceImage(FermatError):
    """The target value is not attained on the requested slice."""


class StepCapExceeded(FermatError):
    """The leading-term solver ran past its step cap (algorithm bug signal)."""


class SolverDiverged(FermatError):
    """Solver step exponents stopped increasing; no fundamental solution."""


class UnresolvedClassification(FermatError):
    """Derivative search hit its cap without a nonzero value or a flatness
    declaration."""


class NoFiniteM(FermatError):
    """No nonvanishing derivative order within the degree bound."""


class NoRealPreimage(FermatError):
    """No real candidate point yields the requested value."""


class ComparisonUndecided(FermatError):
    """Interval refinement could not separate two algebraic quantities."""


class UnknownName(FermatError):
    """Catalog lookup failed."""


class ParseError(FermatError):
    """DSL input is malformed.

    Carries the character offset and the set of token kinds that would have
    been accepted at that position.
    """

    def __init__(self, message: str, pos: int, expected: set[str] | None = None):
        super().__init__(message)
        self.pos = pos
        self.expected = expected or set()

    def __str__(self) -> str:
        base = super().__str__()
        if self.expected:
            opts = ", ".join(sorted(self.expected))
            return f"{base} at position {self.pos} (expected: {opts})"
        return f"{base} at position {self.pos}"
