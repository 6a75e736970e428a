"""Exception types shared across the package.

Every failure mode that callers are expected to branch on gets its own class.
Errors that point at a step in a sequence carry the offending index as ``.index``.
"""

from __future__ import annotations


class RiorthoError(Exception):
    """Base class for all package-specific errors."""


class IndexedError(RiorthoError):
    """Error tied to a specific step of a sequence computation."""

    def __init__(self, index: int, message: str = ""):
        self.index = index
        super().__init__(message or f"failure at index {index}")


# polynomial layer

class InvalidDegree(RiorthoError):
    """Requested degree is incompatible with the polynomial (e.g. star below actual degree)."""


class InvalidInput(RiorthoError):
    """Operation undefined for the given value (e.g. self-inversive test on the zero polynomial)."""


class RootFindFailure(RiorthoError):
    """Root iteration did not converge; carries the best iterate seen."""

    def __init__(self, best_roots, residuals, message="root iteration did not converge"):
        self.best_roots = list(best_roots)
        self.residuals = list(residuals)
        super().__init__(message)


# moment functionals

class MomentDepthExceeded(RiorthoError):
    """A moment beyond the generated table was requested."""


class DivisionByZeta(RiorthoError):
    """zeta = 0 where a recursion divides by it."""


class IndeterminateOrthogonality(RiorthoError):
    """A tested value fell in the dead zone between the zero and nonzero thresholds."""


# three-term machinery

class InvalidTau(IndexedError):
    """tau_n = 0 where the recurrence requires it nonzero."""


class InvalidSeed(RiorthoError):
    """Seed values incompatible with the requested construction."""


class OmegaBreakdown(IndexedError):
    """omega_n = 0 while advancing the recursive omega sequence."""


class RBreakdown(IndexedError):
    """r_n = 0 while forming the ratio-defined omega sequence."""


class DegenerateStep(IndexedError):
    """u_n = v_n = 0: the mixed recurrence step carries no information."""


# continued fractions / correspondence

class BranchRequired(IndexedError):
    """u_i = 0 at a step where the generic continued-fraction build assumes it nonzero."""


class CorrespondenceFailure(IndexedError):
    """Series coefficient did not stabilize across successive approximants."""


class TailBreakdown(IndexedError):
    """Backward tail evaluation hit a vanishing denominator."""


# Toeplitz layer

class MinorBreakdown(IndexedError):
    """Leading principal minor (determinant ratio) vanished at step k."""


class GuardViolation(RiorthoError):
    """A denominator guard tripped (quantity smaller than tolerance times scale)."""


# para-orthogonal pairs

class LambdaCollapse(RiorthoError):
    """1 - rho_hat*rho_tilde = 0: the determinant ratio cannot advance."""


class InvalidParameter(RiorthoError):
    """Parameter outside the defined range for the operation."""


# self-inversive constructions

class InvalidBeta(IndexedError):
    """beta_k outside the open unit disk."""


class EscapedDisk(IndexedError):
    """Generated beta_n left the closed unit disk; carries the partial sequence."""

    def __init__(self, index: int, partial):
        self.partial = list(partial)
        super().__init__(index, f"generated sequence left the unit disk at index {index}")


class OutOfDomain(RiorthoError):
    """Argument outside the domain of the transform (e.g. |x| >= 1)."""


# hypergeometric family

class InvalidParameters(RiorthoError):
    """Family parameters hit a pole or violate a constraint."""


class QuadratureWarning(UserWarning):
    """Successive grid doublings of a quadrature disagreed beyond tolerance."""
