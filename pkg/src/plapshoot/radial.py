"""Radial shooting for quasilinear Neumann problems on balls and annuli.

The equation under study is

    -(r^(N-1) phi_p(u'))' = r^(N-1) (g(u) - phi_p(u)),   u'(boundary) = 0,

written here as the first order system in ``(u, v)`` with the flux
``v = r^(N-1) phi_p(u')``.  A shot launches the solution from the
center value ``u = d`` with zero slope and integrates outward.  On a
ball the center ``r = 0`` is a singular point of the system, so shots
start at a small ``eps0 > 0`` from a series expansion; on an annulus
they start exactly at the inner boundary.

Alongside ``(u, v)`` every shot carries the phase angle ``theta`` of
the point ``(u - 1, v)`` measured in generalized polar coordinates
around the constant equilibrium ``u = 1``:

    u - 1 = rho^(2/p) cos_p(theta),     v = -rho^(2/p') sin_p(theta),
    rho^2 = |u - 1|^p + (p - 1) |v|^p'.

The angle never decreases, increases by one half-period per interior
zero of ``u - 1``, and its terminal value is the quantity every root
search in this package brackets and bisects on.
"""

from __future__ import annotations

import math
from bisect import insort
from dataclasses import dataclass, field

from .config import SolverConfig
from .errors import NearConstantShotError, SpecError
from .odeint import IvpSpec, crossings, integrate
from .ptrig import PExponent, phi_p_inv, pi_p


@dataclass(frozen=True)
class Ball:
    """Ball of radius ``radius`` centered at the origin."""

    radius: float

    def __post_init__(self):
        if not (math.isfinite(self.radius) and self.radius > 0.0):
            raise SpecError(f"ball radius must be positive, got {self.radius!r}")

    @property
    def r_outer(self) -> float:
        return self.radius


@dataclass(frozen=True)
class Annulus:
    """Annulus with inner radius ``r_inner`` and outer radius ``r_outer``."""

    r_inner: float
    r_outer: float

    def __post_init__(self):
        ok = (
            math.isfinite(self.r_inner)
            and math.isfinite(self.r_outer)
            and 0.0 < self.r_inner < self.r_outer
        )
        if not ok:
            raise SpecError(
                f"need 0 < r_inner < r_outer, got ({self.r_inner!r}, "
                f"{self.r_outer!r})"
            )


@dataclass(frozen=True)
class Nonlinearity:
    """Reaction term ``g`` of the problem, described by its exponents.

    Two families are supported.  The pure power ``g(s) = s^(q-1)``
    requires ``q > p``; the combination
    ``g(s) = s^(q-1) + s^(p-1) - s^(r-1)`` requires ``p <= r < q``.
    Both make ``f(s) = g(s) - s^(p-1)`` vanish exactly at the constant
    state ``s = 1`` and give it the sign of ``s - 1`` elsewhere, which
    is what keeps the phase angle monotone.
    """

    q: float
    r_exp: float | None = None

    @classmethod
    def pure_power(cls, q: float) -> "Nonlinearity":
        return cls(q=q)

    @classmethod
    def power_combo(cls, q: float, r_exp: float) -> "Nonlinearity":
        return cls(q=q, r_exp=r_exp)

    def __post_init__(self):
        if not (math.isfinite(self.q) and self.q > 1.0):
            raise SpecError(f"exponent q must be finite and > 1, got {self.q!r}")
        if self.r_exp is not None and not (
            math.isfinite(self.r_exp) and self.r_exp > 1.0
        ):
            raise SpecError(
                f"exponent r must be finite and > 1, got {self.r_exp!r}"
            )

    def validate_for(self, p: float) -> None:
        if self.r_exp is None:
            if not self.q > p:
                raise SpecError(
                    f"pure power needs q > p, got q={self.q!r}, p={p!r}"
                )
        else:
            if not p <= self.r_exp < self.q:
                raise SpecError(
                    f"power combination needs p <= r < q, got p={p!r},"
                    f" r={self.r_exp!r}, q={self.q!r}"
                )

    def f(self, s: float, p: float) -> float:
        """``g(s) - s^(p-1)``, extended by zero to ``s < 0``.

        Overflow saturates to +inf (the top exponent dominates), which
        the integrator treats as a step into forbidden territory.
        """
        if s <= 0.0:
            return 0.0
        try:
            if self.r_exp is None:
                return s ** (self.q - 1.0) - s ** (p - 1.0)
            return s ** (self.q - 1.0) - s ** (self.r_exp - 1.0)
        except OverflowError:
            return math.inf

    def fprime_at_one(self, p: float) -> float:
        if self.r_exp is None:
            return self.q - p
        return self.q - self.r_exp

    def label(self) -> str:
        if self.r_exp is None:
            return f"pow:{self.q:g}"
        return f"combo:{self.q:g},{self.r_exp:g}"


@dataclass(frozen=True)
class ProblemSpec:
    """One radial Neumann problem: exponent, dimension, domain, reaction.

    ``g`` may be ``None`` for purely linear work (the eigenvalue solver
    ignores the reaction); shooting requires it.
    """

    p: float
    dim: int
    domain: Ball | Annulus
    g: Nonlinearity | None = None
    exponent: PExponent = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "exponent", PExponent(self.p))
        if not (isinstance(self.dim, int) and self.dim >= 1):
            raise SpecError(f"dimension must be an integer >= 1, got {self.dim!r}")
        if self.g is not None:
            self.g.validate_for(self.p)

    @property
    def is_ball(self) -> bool:
        return isinstance(self.domain, Ball)

    @property
    def r_outer(self) -> float:
        return self.domain.r_outer

    @property
    def pi_p(self) -> float:
        return pi_p(self.p)

    @property
    def c1(self) -> float:
        """Phase-limit coefficient of shots approaching the constant state.

        Equals ``f'(1)`` when p = 2; degenerates to 0 for p < 2 and to
        infinity for p > 2, which is what separates the three
        existence regimes.
        """
        self._require_g()
        if self.p > 2.0:
            return math.inf
        if self.p < 2.0:
            return 0.0
        return self.g.fprime_at_one(self.p)

    def _require_g(self) -> None:
        if self.g is None:
            raise SpecError("this operation needs a nonlinearity g")

    def with_outer_radius(self, r_outer: float) -> "ProblemSpec":
        """Same problem on the domain rescaled to the given outer radius.

        Balls keep their shape; annuli keep their radius ratio.
        """
        if isinstance(self.domain, Ball):
            dom: Ball | Annulus = Ball(r_outer)
        else:
            ratio = self.domain.r_inner / self.domain.r_outer
            dom = Annulus(ratio * r_outer, r_outer)
        return ProblemSpec(p=self.p, dim=self.dim, domain=dom, g=self.g)


def f_eval(s: float, spec: ProblemSpec) -> float:
    """Shifted reaction ``f(s) = g(s) - s^(p-1)`` for this problem."""
    spec._require_g()
    return spec.g.f(s, spec.p)


@dataclass
class Trajectory:
    """Sampled radial profile of one shot.

    Nodes are the union of the integrator's accepted mesh and a uniform
    grid, so plots stay faithful even where steps are long.  ``rho_sq``
    is recomputed algebraically from ``(u, v)`` at every node.
    """

    r: list[float]
    u: list[float]
    v: list[float]
    theta: list[float]
    rho_sq: list[float]


@dataclass(frozen=True)
class ShotSummary:
    """Scalar outcome of one shot."""

    d: float
    theta_start: float
    theta_end: float
    u_end: float
    v_end: float
    zeros: int
    zero_radii: tuple[float, ...]
    min_u: float
    max_u: float
    n_steps: int


def startup_state(d: float, spec: ProblemSpec, eps0: float) -> tuple[float, float, float]:
    """State ``(u, v, theta)`` at the start of a shot from ``u = d``.

    On a ball this is the series expansion at ``r = eps0``: the flux
    grows like ``-f(d) r^N / N`` and the angle leaves its anchor
    (one half-period below ``d = 1``, zero above) at rate set by the
    leading phase-plane drift.  On an annulus the boundary condition is
    imposed exactly at the inner radius and ``eps0`` is ignored.
    """
    spec._require_g()
    if not (math.isfinite(d) and d >= 0.0):
        raise SpecError(f"shot value d must be finite and >= 0, got {d!r}")
    if d == 1.0:
        raise SpecError("d = 1 is the constant solution; shots need d != 1")
    pip = spec.pi_p
    anchor = pip if d < 1.0 else 0.0
    if not spec.is_ball:
        return (d, 0.0, anchor)
    if not 0.0 < eps0 < spec.r_outer / 2.0:
        raise SpecError(f"eps0 must lie in (0, R/2), got {eps0!r}")
    p = spec.p
    pp = spec.exponent.pprime
    n = spec.dim
    fd = f_eval(d, spec)
    v = -fd * eps0**n / n
    u = d - phi_p_inv(fd / n, p) * eps0**pp / pp
    theta = anchor + fd * math.copysign(1.0, d - 1.0) * eps0**n / (
        n * abs(d - 1.0) ** (p - 1.0)
    )
    return (u, v, theta)


def _pow_abs(x: float, e: float) -> float:
    """``|x|**e`` saturating to inf instead of raising on overflow."""
    try:
        return abs(x) ** e
    except OverflowError:
        return math.inf


def _make_rhs(spec: ProblemSpec, rho_floor: float, d: float):
    p = spec.p
    pp = spec.exponent.pprime
    n = spec.dim
    g = spec.g

    def rhs(r, y):
        u, v, _ = y
        rn = r ** (n - 1) if n > 1 else 1.0
        w = v / rn
        fu = g.f(u, p)
        um1 = u - 1.0
        rho2 = _pow_abs(um1, p) + (p - 1.0) * _pow_abs(v, pp)
        if rho2 < rho_floor:
            raise NearConstantShotError(d, r, rho2)
        du = math.copysign(_pow_abs(w, pp - 1.0), w) if w != 0.0 else 0.0
        dv = -rn * fu
        dth = rn * ((p - 1.0) * _pow_abs(w, pp) + um1 * fu) / rho2
        return (du, dv, dth)

    return rhs


def _rho_sq(u: float, v: float, p: float, pp: float) -> float:
    return _pow_abs(u - 1.0, p) + (p - 1.0) * _pow_abs(v, pp)


def shoot(
    d: float, spec: ProblemSpec, cfg: SolverConfig | None = None
) -> tuple[Trajectory, ShotSummary]:
    """Integrate one shot from ``u = d`` across the whole domain.

    Raises :class:`NearConstantShotError` if the phase-plane radius
    collapses below ``cfg.rho_floor`` along the way, and
    :class:`IntegrationError` if the integrator gives up.
    """
    cfg = cfg or SolverConfig()
    if spec.is_ball:
        eps0 = cfg.eps0_for(spec.r_outer)
        r0 = eps0
    else:
        eps0 = 0.0
        r0 = spec.domain.r_inner
    y0 = startup_state(d, spec, eps0)
    p = spec.p
    pp = spec.exponent.pprime
    if _rho_sq(y0[0], y0[1], p, pp) < cfg.rho_floor:
        raise NearConstantShotError(d, r0, _rho_sq(y0[0], y0[1], p, pp))

    sol = integrate(
        IvpSpec(
            rhs=_make_rhs(spec, cfg.rho_floor, d),
            r_start=r0,
            r_end=spec.r_outer,
            y0=y0,
            rel_tol=cfg.rel_tol,
            abs_tol=cfg.abs_tol,
            max_steps=cfg.max_steps,
        )
    )

    # Node set: accepted mesh plus a uniform grid for plotting.
    rs = list(sol.rs)
    span = sol.r_end - sol.r_start
    for i in range(1, cfg.profile_nodes - 1):
        insort(rs, sol.r_start + span * i / (cfg.profile_nodes - 1))
    nodes_r: list[float] = []
    nodes_u: list[float] = []
    nodes_v: list[float] = []
    nodes_th: list[float] = []
    nodes_rho: list[float] = []
    prev = None
    for r in rs:
        if r == prev:
            continue
        prev = r
        u, v, th = sol.eval(r)
        nodes_r.append(r)
        nodes_u.append(u)
        nodes_v.append(v)
        nodes_th.append(th)
        nodes_rho.append(_rho_sq(u, v, p, pp))
    traj = Trajectory(nodes_r, nodes_u, nodes_v, nodes_th, nodes_rho)

    # The angle is monotone, so interior zeros of u - 1 are counted by
    # how many odd quarter-period levels the angle sweeps through.
    pip = spec.pi_p
    th_start = y0[2]
    th_end = sol.y_end[2]
    half = 0.5 * pip
    m_lo = math.ceil((th_start - half) / pip)
    m_hi = math.floor((th_end - half) / pip)
    zero_radii: list[float] = []
    if m_hi >= m_lo:
        levels = [half + m * pip for m in range(m_lo, m_hi + 1)]
        zero_radii = [hit[0] for hit in crossings(sol, 2, levels)]
    summary = ShotSummary(
        d=d,
        theta_start=th_start,
        theta_end=th_end,
        u_end=sol.y_end[0],
        v_end=sol.y_end[1],
        zeros=len(zero_radii),
        zero_radii=tuple(zero_radii),
        min_u=min(nodes_u),
        max_u=max(nodes_u),
        n_steps=sol.n_steps,
    )
    return traj, summary
