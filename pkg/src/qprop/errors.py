"""Exception hierarchy shared across the package."""

from __future__ import annotations


class QpropError(Exception):
    """Base class for all library errors."""


class DimensionMismatch(QpropError):
    """Operands live in Hilbert spaces of different dimensions."""


class NotAProjector(QpropError):
    """Matrix fails the Hermiticity or idempotence requirement."""


class NotOrthogonal(QpropError):
    """Projectors or subspaces that must annihilate each other do not."""


class Incomplete(QpropError):
    """Projector family does not sum to the identity."""


class TrivialMember(QpropError):
    """Context member is the zero or identity projector."""


class InvalidSpectralDecomposition(QpropError):
    """Spectral family of an observable fails the context conditions."""


class UnknownLabel(QpropError):
    """Referenced lattice or context label does not exist."""


class NotAnElement(QpropError):
    """Subspace is not an element of the given lattice structure."""


class TooLarge(QpropError):
    """Construction would exceed the configured size cap."""


class InvalidInput(QpropError):
    """Valuation input violates its invariants (state outside home, homeless state)."""


class HomeNotInContext(QpropError):
    """The state's home subspace is not a range of the given context."""


class TruthTableError(QpropError):
    """One or more propositions of a batch evaluation failed.

    Carries the per-proposition errors in ``errors`` (name -> exception).
    """

    def __init__(self, errors: dict):
        self.errors = dict(errors)
        lines = ", ".join(f"{name}: {exc}" for name, exc in self.errors.items())
        super().__init__(f"{len(self.errors)} proposition(s) failed: {lines}")


class InvalidSplice(QpropError):
    """Splice index outside the environment chain, or unspliceable context set."""


class MissingContext(QpropError):
    """Scenario lacks the composite context required by the inference."""


class MissingEnvProp(QpropError):
    """Environment proposition is not a declared preferred-basis range."""


class DuplicateElements(QpropError):
    """Element list for a diagram contains equal subspaces."""


class UnknownName(QpropError):
    """Valuation name does not resolve to a diagram vertex."""


class ScenarioSyntaxError(QpropError):
    """Scenario file is not syntactically well formed."""


class UnknownReference(QpropError):
    """Scenario references a name that is never defined."""


class ValidationFailed(QpropError):
    """Scenario object failed construction; wraps the underlying module error."""

    def __init__(self, path: str, cause: Exception):
        self.path = path
        self.cause = cause
        super().__init__(f"{path}: {type(cause).__name__}: {cause}")
