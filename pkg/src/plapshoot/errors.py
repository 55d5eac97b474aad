"""Exception taxonomy shared across the package.

Validation problems (bad parameters, malformed domains) raise
:class:`SpecError`; failures of the numerical machinery at runtime raise
subclasses of :class:`NumericsError`.  The CLI maps the former to exit
code 2 and the latter to exit code 1.
"""

from __future__ import annotations


class PlapshootError(Exception):
    """Base class for every error raised by this package."""


class SpecError(PlapshootError, ValueError):
    """A problem description or configuration value is invalid."""


class NumericsError(PlapshootError, ArithmeticError):
    """A numerical routine could not complete its contract."""


class IntegrationError(NumericsError):
    """The ODE integrator stopped before reaching the end of the interval.

    ``last_r`` records the largest abscissa that was reached with a valid
    state, so callers can report how far the integration got.
    """

    def __init__(self, message: str, last_r: float):
        super().__init__(f"{message} (integration reached r={last_r!r})")
        self.last_r = last_r


class NearConstantShotError(NumericsError):
    """A shot collapsed onto the constant equilibrium.

    Raised when the squared phase-plane radius drops below the configured
    floor, at which point the phase angle is no longer trustworthy.
    """

    def __init__(self, d: float, r: float, rho_sq: float):
        super().__init__(
            f"shot from d={d!r} collapsed near the constant state at r={r!r}"
            f" (rho_sq={rho_sq:.3e})"
        )
        self.d = d
        self.r = r
        self.rho_sq = rho_sq


class SearchError(NumericsError):
    """A bracketing or bisection search failed to isolate its target."""
