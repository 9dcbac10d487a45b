"""Exception hierarchy shared across the package."""


class HyperfinError(Exception):
    """Base class for all package errors."""


class FieldMismatch(HyperfinError):
    """Operands live over different exact fields."""


class NonIntegralDefect(HyperfinError):
    """<h, x> is not divisible by the defect normalizer r."""


class ZeroVector(HyperfinError):
    """A nonzero lattice vector was required."""


class ReduciblePolynomial(HyperfinError):
    """A regular point must be a monic irreducible polynomial."""


class NotInjective(HyperfinError):
    """A morphism required to be injective has a kernel."""


class TargetMismatch(HyperfinError):
    """Pullback legs must share a target."""


class NoLift(HyperfinError):
    """No extension through the claimed injective module exists."""


class SearchExhausted(HyperfinError):
    """A witness search ran out of its trial budget."""


class EpsilonOutOfRange(HyperfinError):
    """epsilon must satisfy 0 < epsilon < 1."""


class CyclicQuiver(HyperfinError):
    """Quiver input contains an oriented cycle."""


class NotTame(HyperfinError):
    """Euler form is not semidefinite with one-dimensional radical."""


class KOutOfRange(HyperfinError):
    """Index parameter outside the valid range."""


class CertificateInvalid(HyperfinError):
    """A certificate failed construction-time invariants."""
