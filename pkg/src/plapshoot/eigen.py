"""Radial Neumann eigenvalues of the p-Laplacian on balls and annuli.

The eigenvalue problem

    -(r^(N-1) phi_p(w'))' = lam r^(N-1) phi_p(w),   w'(boundary) = 0,

is solved by a phase-angle method.  With the same generalized polar
coordinates as the shooting module, the angle of ``(w, flux)`` obeys a
first order equation that does not involve the amplitude:

    angle' = (p-1) (|sin_p| r^(-(N-1)/p))^p' + lam |cos_p|^p r^(N-1),

and lam is an eigenvalue exactly when the angle sweeps a whole number
of half-periods across the domain.  The k-th eigenvalue (k = 1 is the
constant eigenfunction, lam = 0) is found by bisecting lam against the
terminal angle, which is strictly increasing in lam.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .config import SolverConfig
from .errors import SearchError, SpecError
from .odeint import IvpSpec, integrate
from .ptrig import get_context, phi_p, phi_p_inv
from .radial import ProblemSpec

# The bisection bracket for eigenvalues is grown by doubling until the
# angle overshoots; past this multiple of R^-p something is wrong.
LAMBDA_CAP_FACTOR = 1e8

_BISECT_REL_TOL = 1e-10
_BISECT_MAX_ITERS = 200


@dataclass(frozen=True)
class EigenResult:
    """Eigenvalue ``lam`` of index ``k`` with its phase residual.

    ``residual`` is how far the terminal angle at ``lam`` is from the
    exact multiple of the half-period; it is an a-posteriori quality
    measure in angle units.
    """

    k: int
    lam: float
    residual: float


def eigen_angle(lam: float, spec: ProblemSpec, cfg: SolverConfig | None = None) -> float:
    """Terminal phase angle of the eigenvalue equation at parameter ``lam``.

    Starts one half-period up on a ball (the eigenfunction is taken
    negative at the center) and integrates the amplitude-free angle
    equation outward.  Strictly increasing in ``lam``.
    """
    if not (math.isfinite(lam) and lam >= 0.0):
        raise SpecError(f"lam must be finite and >= 0, got {lam!r}")
    cfg = cfg or SolverConfig()
    p = spec.p
    pp = spec.exponent.pprime
    n = spec.dim
    ctx = get_context(p)
    pip = ctx.pi_p

    if spec.is_ball:
        eps0 = cfg.eps0_for(spec.r_outer)
        r0 = eps0
        th0 = pip + lam * eps0**n / n
    else:
        r0 = spec.domain.r_inner
        th0 = pip

    def rhs(r, y):
        c, s = ctx.pair(y[0])
        if n > 1:
            stretch = (abs(s) * r ** (-(n - 1) / p)) ** pp
        else:
            stretch = abs(s) ** pp
        return ((p - 1.0) * stretch + lam * abs(c) ** p * r ** (n - 1),)

    sol = integrate(
        IvpSpec(
            rhs=rhs,
            r_start=r0,
            r_end=spec.r_outer,
            y0=(th0,),
            rel_tol=cfg.rel_tol,
            abs_tol=cfg.abs_tol,
            max_steps=cfg.max_steps,
        )
    )
    return sol.y_end[0]


def eigenvalue(k: int, spec: ProblemSpec, cfg: SolverConfig | None = None) -> EigenResult:
    """The k-th radial Neumann eigenvalue, k = 1 being the trivial zero.

    For k >= 2 the bracket is grown by doubling and then bisected on
    the terminal angle until the relative width is below 1e-10 (or 200
    iterations).  Raises :class:`SearchError` if the bracket cannot be
    established below the safety cap.
    """
    if not (isinstance(k, int) and k >= 1):
        raise SpecError(f"eigenvalue index must be an integer >= 1, got {k!r}")
    cfg = cfg or SolverConfig()
    pip = get_context(spec.p).pi_p
    if k == 1:
        residual = abs(eigen_angle(0.0, spec, cfg) - pip)
        return EigenResult(k=1, lam=0.0, residual=residual)

    target = k * pip
    cap = LAMBDA_CAP_FACTOR * spec.r_outer ** (-spec.p)
    lo = 0.0
    hi = 1.0
    while eigen_angle(hi, spec, cfg) < target:
        lo = hi
        hi *= 2.0
        if hi > cap:
            raise SearchError(
                f"no angle crossing for k={k} below lam={cap:.3e}"
            )
    for _ in range(_BISECT_MAX_ITERS):
        if hi - lo <= _BISECT_REL_TOL * hi:
            break
        mid = 0.5 * (lo + hi)
        if eigen_angle(mid, spec, cfg) < target:
            lo = mid
        else:
            hi = mid
    lam = 0.5 * (lo + hi)
    residual = abs(eigen_angle(lam, spec, cfg) - target)
    return EigenResult(k=k, lam=lam, residual=residual)


def eigenfunction(
    lam: float,
    spec: ProblemSpec,
    cfg: SolverConfig | None = None,
    n_nodes: int = 400,
) -> tuple[list[float], list[float], list[float]]:
    """Radial eigenfunction profile ``(r, w, flux)`` at parameter ``lam``.

    Integrates the amplitude equation in Cartesian form, normalized to
    ``w = -1`` with zero slope at the inner end; useful for inspecting
    the profile behind an :class:`EigenResult`.  The flux column is
    ``r^(N-1) phi_p(w')``.
    """
    if not (math.isfinite(lam) and lam >= 0.0):
        raise SpecError(f"lam must be finite and >= 0, got {lam!r}")
    cfg = cfg or SolverConfig()
    p = spec.p
    pp = spec.exponent.pprime
    n = spec.dim

    if spec.is_ball:
        eps0 = cfg.eps0_for(spec.r_outer)
        r0 = eps0
        w0 = -1.0 + phi_p_inv(lam / n, p) * eps0**pp / pp
        flux0 = lam * eps0**n / n
    else:
        r0 = spec.domain.r_inner
        w0 = -1.0
        flux0 = 0.0

    def rhs(r, y):
        w, flux = y
        rn = r ** (n - 1) if n > 1 else 1.0
        slope = phi_p_inv(flux / rn, p) if flux != 0.0 else 0.0
        return (slope, -lam * rn * phi_p(w, p))

    sol = integrate(
        IvpSpec(
            rhs=rhs,
            r_start=r0,
            r_end=spec.r_outer,
            y0=(w0, flux0),
            rel_tol=cfg.rel_tol,
            abs_tol=cfg.abs_tol,
            max_steps=cfg.max_steps,
        )
    )
    rs = [r0 + (spec.r_outer - r0) * i / (n_nodes - 1) for i in range(n_nodes)]
    ws = []
    fluxes = []
    for r in rs:
        w, flux = sol.eval(r)
        ws.append(w)
        fluxes.append(flux)
    return rs, ws, fluxes
