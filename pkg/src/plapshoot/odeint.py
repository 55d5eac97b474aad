"""Adaptive explicit Runge-Kutta integrator with dense output.

Implements the Dormand-Prince 5(4) pair with a PI step-size controller
and a quartic interpolant on every accepted step.  The integrator is
deliberately self-contained and operates on plain float tuples: the
systems in this package are tiny (two to four components), the right
hand sides are scalar math, and repeated runs must be bit-for-bit
deterministic across processes and thread counts.

The dense output is what the rest of the package builds on: event
location (:func:`crossings`) and profile sampling both evaluate the
stored interpolants rather than re-integrating.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .errors import IntegrationError, SpecError

RhsFunc = Callable[[float, tuple[float, ...]], Sequence[float]]

# Dormand-Prince 5(4) tableau.  Stage seven evaluates the right hand
# side at the accepted endpoint, so it doubles as stage one of the next
# step (FSAL).
_C = (0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0)
_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
# Difference between the fifth and fourth order weights.
_E = (
    71 / 57600,
    0.0,
    -71 / 16695,
    71 / 1920,
    -17253 / 339200,
    22 / 525,
    -1 / 40,
)
# Interpolant weights: column j of row i multiplies stage i in the
# coefficient of x**(j+1) of the scaled dense polynomial.
_P = (
    (1.0, -8048581381 / 2820520608, 8663915743 / 2820520608,
     -12715105075 / 11282082432),
    (0.0, 0.0, 0.0, 0.0),
    (0.0, 131558114200 / 32700410799, -68118460800 / 10900136933,
     87487479700 / 32700410799),
    (0.0, -1754552775 / 470086768, 14199869525 / 1410260304,
     -10690763975 / 1880347072),
    (0.0, 127303824393 / 49829197408, -318862633887 / 49829197408,
     701980252875 / 199316789632),
    (0.0, -282668133 / 205662961, 2019193451 / 616988883,
     -1453857185 / 822651844),
    (0.0, 40617522 / 29380423, -110615467 / 29380423,
     69997945 / 29380423),
)

# PI controller constants (classic dopri5 settings).
_SAFETY = 0.9
_BETA = 0.04
_EXPO = 0.2 - 0.75 * _BETA
_FAC_MIN = 0.2
_FAC_MAX = 10.0


@dataclass(frozen=True)
class IvpSpec:
    """Initial value problem on a forward interval.

    ``rhs(r, y)`` must return one derivative per component of ``y`` and
    must be free of side effects; the integrator may evaluate it at
    trial points that are later discarded.
    """

    rhs: RhsFunc
    r_start: float
    r_end: float
    y0: tuple[float, ...]
    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    max_steps: int = 1_000_000
    first_step: float | None = None

    def __post_init__(self):
        if not (math.isfinite(self.r_start) and math.isfinite(self.r_end)):
            raise SpecError("integration interval must be finite")
        if not self.r_end > self.r_start:
            raise SpecError(
                f"need r_end > r_start, got [{self.r_start}, {self.r_end}]"
            )
        if len(self.y0) == 0 or not all(math.isfinite(c) for c in self.y0):
            raise SpecError("initial state must be non-empty and finite")
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise SpecError("tolerances must be positive")
        if self.max_steps < 1:
            raise SpecError("max_steps must be at least 1")
        if self.first_step is not None and not 0 < self.first_step:
            raise SpecError("first_step must be positive when given")


@dataclass
class DenseSolution:
    """Accepted mesh plus a quartic interpolant on every interval.

    ``coeffs[i]`` holds, for each component, the four polynomial
    weights of the interpolant on ``[rs[i], rs[i+1]]``; see
    :meth:`eval`.  Instances are built by :func:`integrate` and treated
    as immutable afterwards.
    """

    rs: list[float]
    ys: list[tuple[float, ...]]
    coeffs: list[tuple[tuple[float, float, float, float], ...]]
    n_rhs_evals: int = field(default=0, compare=False)

    @property
    def r_start(self) -> float:
        return self.rs[0]

    @property
    def r_end(self) -> float:
        return self.rs[-1]

    @property
    def y_end(self) -> tuple[float, ...]:
        return self.ys[-1]

    @property
    def n_steps(self) -> int:
        return len(self.rs) - 1

    def eval(self, r: float) -> tuple[float, ...]:
        """Interpolated state at ``r``, which must lie on the mesh span.

        Stored knots are returned exactly; a slack of a few ulp beyond
        either end is clamped rather than rejected so that callers can
        feed back endpoint values they obtained from floating point
        arithmetic.
        """
        rs = self.rs
        if r == rs[-1]:
            return self.ys[-1]
        slack = 1e-12 * max(1.0, abs(rs[0]), abs(rs[-1]))
        if r < rs[0] - slack or r > rs[-1] + slack:
            raise SpecError(
                f"r={r!r} outside solution range [{rs[0]!r}, {rs[-1]!r}]"
            )
        r = min(max(r, rs[0]), rs[-1])
        i = bisect_right(rs, r) - 1
        if i >= len(self.coeffs):
            i = len(self.coeffs) - 1
        h = rs[i + 1] - rs[i]
        x = (r - rs[i]) / h
        y_lo = self.ys[i]
        out = []
        for d, q in enumerate(self.coeffs[i]):
            acc = q[3]
            acc = q[2] + x * acc
            acc = q[1] + x * acc
            acc = q[0] + x * acc
            out.append(y_lo[d] + h * x * acc)
        return tuple(out)


def _error_norm(err, y_old, y_new, rel_tol, abs_tol) -> float:
    acc = 0.0
    for d in range(len(err)):
        scale = abs_tol + rel_tol * max(abs(y_old[d]), abs(y_new[d]))
        q = err[d] / scale
        acc += q * q
    return math.sqrt(acc / len(err))


def _call_rhs(rhs, r, y, dim) -> tuple[float, ...]:
    f = tuple(rhs(r, y))
    if len(f) != dim:
        raise SpecError(
            f"rhs returned {len(f)} components for a state of dimension {dim}"
        )
    return f


def _initial_step(ivp: IvpSpec, f0) -> tuple[float, int]:
    """Cheap two-evaluation guess for the first step size."""
    y0 = ivp.y0
    dim = len(y0)
    span = ivp.r_end - ivp.r_start
    scale = [ivp.abs_tol + ivp.rel_tol * abs(c) for c in y0]
    d0 = math.sqrt(sum((y0[d] / scale[d]) ** 2 for d in range(dim)) / dim)
    d1 = math.sqrt(sum((f0[d] / scale[d]) ** 2 for d in range(dim)) / dim)
    h0 = 1e-6 if (d0 < 1e-5 or d1 < 1e-5) else 0.01 * d0 / d1
    h0 = min(h0, span)
    y1 = tuple(y0[d] + h0 * f0[d] for d in range(dim))
    f1 = _call_rhs(ivp.rhs, ivp.r_start + h0, y1, dim)
    if not all(math.isfinite(c) for c in f1):
        raise IntegrationError(
            "right hand side not finite while probing the first step",
            ivp.r_start,
        )
    d2 = math.sqrt(
        sum(((f1[d] - f0[d]) / scale[d]) ** 2 for d in range(dim)) / dim
    ) / h0
    if max(d1, d2) <= 1e-15:
        h1 = max(1e-6, h0 * 1e-3)
    else:
        h1 = (0.01 / max(d1, d2)) ** 0.2
    return min(100 * h0, h1, span), 1


def _probe_first_step(ivp: IvpSpec, f0) -> tuple[float, int]:
    try:
        return _initial_step(ivp, f0)
    except IntegrationError:
        # The probe point exploded; start conservatively instead.
        return 1e-6 * (ivp.r_end - ivp.r_start), 1


def integrate(ivp: IvpSpec) -> DenseSolution:
    """Integrate ``ivp`` over its full interval.

    Raises :class:`IntegrationError` when the step budget runs out or
    the right hand side stops returning finite values; the exception
    carries the last abscissa that held a valid state.
    """
    rhs = ivp.rhs
    dim = len(ivp.y0)
    r_end = ivp.r_end

    r = ivp.r_start
    y = ivp.y0
    f = _call_rhs(rhs, r, y, dim)
    if not all(math.isfinite(c) for c in f):
        raise IntegrationError("right hand side not finite at the start", r)
    n_evals = 1

    if ivp.first_step is not None:
        h = min(ivp.first_step, r_end - r)
    else:
        h, extra = _probe_first_step(ivp, f)
        n_evals += extra

    rs = [r]
    ys = [y]
    coeffs: list[tuple[tuple[float, float, float, float], ...]] = []
    k = [f] + [(0.0,) * dim] * 6
    facold = 1e-4
    step_rejected = False
    attempts = 0

    while r < r_end:
        if attempts >= ivp.max_steps:
            raise IntegrationError(
                f"exceeded max_steps={ivp.max_steps}", r
            )
        attempts += 1
        h = min(h, r_end - r)
        if h <= max(abs(r) * 1e-15, 1e-300):
            raise IntegrationError("step size underflow", r)

        # Stages 2..6, then the candidate endpoint and its slope (k7).
        # A non-finite value anywhere means the trial step left the
        # region where the right hand side makes sense; shrink and
        # retry rather than give up.
        ok = True
        for s in range(1, 6):
            a = _A[s]
            ys_stage = tuple(
                y[d] + h * sum(a[j] * k[j][d] for j in range(s))
                for d in range(dim)
            )
            ks = _call_rhs(rhs, r + _C[s] * h, ys_stage, dim)
            n_evals += 1
            if not all(math.isfinite(c) for c in ks):
                ok = False
                break
            k[s] = ks
        if ok:
            a = _A[6]
            y_new = tuple(
                y[d] + h * sum(a[j] * k[j][d] for j in range(6))
                for d in range(dim)
            )
            ok = all(math.isfinite(c) for c in y_new)
        if ok:
            k7 = _call_rhs(rhs, r + h, y_new, dim)
            n_evals += 1
            ok = all(math.isfinite(c) for c in k7)
        if not ok:
            h *= 0.25
            step_rejected = True
            continue
        k[6] = k7

        err_vec = tuple(
            h * sum(_E[j] * k[j][d] for j in range(7)) for d in range(dim)
        )
        err = _error_norm(err_vec, y, y_new, ivp.rel_tol, ivp.abs_tol)
        if not math.isfinite(err):
            h *= 0.25
            step_rejected = True
            continue

        fac11 = err ** _EXPO if err > 0 else 0.0
        if err <= 1.0:
            # Accepted: freeze the interpolant for this interval.
            q_step = tuple(
                (
                    sum(k[i][d] * _P[i][0] for i in range(7)),
                    sum(k[i][d] * _P[i][1] for i in range(7)),
                    sum(k[i][d] * _P[i][2] for i in range(7)),
                    sum(k[i][d] * _P[i][3] for i in range(7)),
                )
                for d in range(dim)
            )
            coeffs.append(q_step)
            r_new = r_end if h >= (r_end - r) else r + h
            rs.append(r_new)
            ys.append(y_new)

            fac = fac11 / facold ** _BETA if err > 0 else 1.0 / _FAC_MAX
            fac = max(1.0 / _FAC_MAX, min(1.0 / _FAC_MIN, fac / _SAFETY))
            h_new = h / fac
            if step_rejected:
                h_new = min(h_new, h)
            facold = max(err, 1e-4)
            step_rejected = False

            r = r_new
            y = y_new
            k[0] = k7
            h = h_new
        else:
            h = h / min(1.0 / _FAC_MIN, fac11 / _SAFETY)
            step_rejected = True

    return DenseSolution(rs=rs, ys=ys, coeffs=coeffs, n_rhs_evals=n_evals)


def crossings(
    sol: DenseSolution,
    component: int,
    levels: Sequence[float],
    refine_tol: float = 1e-12,
) -> list[tuple[float, float, int]]:
    """Locate where one solution component crosses the given levels.

    Returns ``(r, level, direction)`` triples sorted by ``r``, with
    ``direction`` +1 for an upward crossing and -1 for a downward one.
    Each mesh interval is searched per level by bisecting the dense
    interpolant, so crossings are found even where accepted steps are
    long, as long as the component meets each level at most once per
    step.  A crossing sitting exactly on an interior knot is reported
    once.
    """
    if not 0 <= component < len(sol.ys[0]):
        raise SpecError(f"component {component} out of range")
    out: list[tuple[float, float, int]] = []
    rs, ys = sol.rs, sol.ys
    for i in range(len(rs) - 1):
        va = ys[i][component]
        vb = ys[i + 1][component]
        for level in levels:
            ga = va - level
            gb = vb - level
            if ga == 0.0:
                if i == 0:
                    direction = 1 if gb > 0 else -1
                    out.append((rs[0], level, direction))
                continue
            if gb == 0.0:
                out.append((rs[i + 1], level, 1 if ga < 0 else -1))
                continue
            if ga * gb > 0.0:
                continue
            lo, hi = rs[i], rs[i + 1]
            glo = ga
            tol = refine_tol * max(1.0, abs(hi))
            for _ in range(200):
                if hi - lo <= tol:
                    break
                mid = 0.5 * (lo + hi)
                gm = sol.eval(mid)[component] - level
                if gm == 0.0:
                    lo = hi = mid
                    break
                if (glo < 0) == (gm < 0):
                    lo, glo = mid, gm
                else:
                    hi = mid
            out.append((0.5 * (lo + hi), level, 1 if ga < 0 else -1))
    out.sort(key=lambda t: t[0])
    return out
