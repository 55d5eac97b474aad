"""Root searches over the shooting parameter.

A non-constant solution with j interior zeros corresponds to a center
value ``d`` whose shot lands with terminal angle exactly ``(j+1)``
half-periods (starting below the constant state) or ``j`` half-periods
(starting above).  This module scans the terminal angle over a grid of
``d``, brackets the target levels, bisects each bracket down to the
configured width, and re-validates every candidate with a full-accuracy
shot before reporting it.

Shots that collapse onto the constant state are recorded as gaps in
the scan rather than failures: near ``d = 1`` the phase-plane radius
legitimately falls under the floor (most visibly for p > 2), and the
scan simply cannot bracket inside such a gap.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

from .config import SolverConfig
from .errors import NumericsError, SearchError, SpecError
from .ptrig import pi_p
from .radial import ProblemSpec, ShotSummary, Trajectory, shoot

logger = logging.getLogger(__name__)

_SIDES = ("lower", "upper")


@dataclass(frozen=True)
class SolutionRecord:
    """One validated non-constant solution found by shooting.

    ``residual`` is the terminal flux relative to the largest flux along
    the shot, so it measures how well the outer Neumann condition is
    met independently of the solution's scale.
    """

    d: float
    side: str
    zeros: int
    theta_end: float
    residual: float
    trajectory: Trajectory
    summary: ShotSummary


def d_grid(cfg: SolverConfig, side: str = "lower") -> list[float]:
    """Scan grid for the chosen side of the constant state.

    The lower grid mixes uniform coverage of ``(d_min, d_max)`` with
    points spaced geometrically toward ``d = 1``, where the terminal
    angle moves fastest; the upper grid is geometric in ``d - 1``.
    """
    if side not in _SIDES:
        raise SpecError(f"side must be one of {_SIDES}, got {side!r}")
    if side == "upper":
        lo = cfg.d_min_upper - 1.0
        hi = cfg.d_max_upper - 1.0
        n = cfg.d_grid_size
        step = (math.log(hi) - math.log(lo)) / (n - 1)
        return [1.0 + math.exp(math.log(lo) + step * i) for i in range(n)]
    n_geo = round(cfg.d_grid_size * cfg.refine_fraction)
    n_uni = cfg.d_grid_size - n_geo
    pts: set[float] = set()
    if n_uni >= 2:
        for i in range(n_uni):
            pts.add(cfg.d_min + (cfg.d_max - cfg.d_min) * i / (n_uni - 1))
    if n_geo >= 2:
        gap_near = 1.0 - cfg.d_max
        gap_far = min(0.5, 1.0 - cfg.d_min)
        step = (math.log(gap_far) - math.log(gap_near)) / (n_geo - 1)
        for i in range(n_geo):
            pts.add(1.0 - math.exp(math.log(gap_near) + step * i))
    return sorted(pts)


def theta_scan(
    spec: ProblemSpec, cfg: SolverConfig | None = None, side: str = "lower"
) -> list[tuple[float, float]]:
    """Terminal angle over the scan grid; collapsed shots give NaN.

    With ``cfg.threads > 1`` the shots run on a thread pool; the result
    order and values are identical either way.
    """
    cfg = cfg or SolverConfig()
    grid = d_grid(cfg, side)
    scan_cfg = replace(cfg, profile_nodes=2)

    def one(d: float) -> float:
        try:
            return shoot(d, spec, scan_cfg)[1].theta_end
        except NumericsError:
            return math.nan

    if cfg.threads > 1:
        with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
            thetas = list(pool.map(one, grid))
    else:
        thetas = [one(d) for d in grid]
    return list(zip(grid, thetas))


def _brackets(
    scan: list[tuple[float, float]], target: float
) -> list[tuple[float, float, float, float]]:
    # Sign changes between consecutive valid scan nodes; NaN nodes break
    # adjacency because the angle is unknown across a collapsed region.
    out = []
    for (d_a, t_a), (d_b, t_b) in zip(scan, scan[1:]):
        if math.isnan(t_a) or math.isnan(t_b):
            continue
        if (t_a - target) * (t_b - target) < 0.0:
            out.append((d_a, d_b, t_a, t_b))
    return out


def _bisect_on_angle(
    spec: ProblemSpec,
    cfg: SolverConfig,
    d_lo: float,
    d_hi: float,
    t_lo: float,
    target: float,
) -> float:
    scan_cfg = replace(cfg, profile_nodes=2)
    lo, hi = d_lo, d_hi
    g_lo = t_lo - target
    while hi - lo > cfg.bisect_tol_d:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        try:
            th = shoot(mid, spec, scan_cfg)[1].theta_end
        except NumericsError as exc:
            raise SearchError(
                f"shot failed at d={mid!r} while bisecting a bracket"
            ) from exc
        g_mid = th - target
        if g_mid == 0.0:
            return mid
        if (g_lo < 0.0) == (g_mid < 0.0):
            lo, g_lo = mid, g_mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _validated_record(
    spec: ProblemSpec,
    cfg: SolverConfig,
    d_root: float,
    side: str,
    zeros: int,
    target: float,
    phase_tol: float,
) -> SolutionRecord | None:
    try:
        traj, summ = shoot(d_root, spec, cfg)
    except NumericsError as exc:
        logger.warning("full shot failed at candidate d=%.17g: %s", d_root, exc)
        return None
    v_scale = max(abs(v) for v in traj.v)
    residual = abs(summ.v_end) / v_scale if v_scale > 0.0 else math.inf
    problems = []
    if abs(summ.theta_end - target) > phase_tol:
        problems.append(
            f"terminal angle off target by {abs(summ.theta_end - target):.3e}"
        )
    if summ.zeros != zeros:
        problems.append(f"zero count {summ.zeros} != {zeros}")
    if not summ.min_u > 0.0:
        problems.append(f"profile not positive (min u = {summ.min_u:.3e})")
    if residual > cfg.residual_tol:
        problems.append(f"flux residual {residual:.3e}")
    if not summ.max_u - summ.min_u > 1e-6:
        problems.append("profile indistinguishable from constant")
    if problems:
        logger.warning(
            "rejecting candidate d=%.17g (side=%s, zeros=%d): %s",
            d_root,
            side,
            zeros,
            "; ".join(problems),
        )
        return None
    return SolutionRecord(
        d=d_root,
        side=side,
        zeros=zeros,
        theta_end=summ.theta_end,
        residual=residual,
        trajectory=traj,
        summary=summ,
    )


def _records_for_side(
    spec: ProblemSpec,
    cfg: SolverConfig,
    side: str,
    zero_counts: list[int],
    scan: list[tuple[float, float]] | None = None,
) -> list[SolutionRecord]:
    pip = pi_p(spec.p)
    phase_tol = cfg.phase_tol_factor * pip
    if scan is None:
        scan = theta_scan(spec, cfg, side)
    records = []
    for j in zero_counts:
        target = (j + 1) * pip if side == "lower" else j * pip
        for d_a, d_b, t_a, _ in _brackets(scan, target):
            try:
                d_root = _bisect_on_angle(spec, cfg, d_a, d_b, t_a, target)
            except SearchError as exc:
                logger.warning("%s", exc)
                continue
            rec = _validated_record(
                spec, cfg, d_root, side, j, target, phase_tol
            )
            if rec is not None:
                records.append(rec)
    return records


def find_solutions(
    spec: ProblemSpec,
    cfg: SolverConfig | None = None,
    max_zeros: int = 3,
    sides: tuple[str, ...] = ("lower",),
) -> list[SolutionRecord]:
    """All validated solutions with 1..max_zeros interior zeros.

    Scans each requested side once, then brackets and bisects every
    target angle.  Candidates that fail re-validation (wrong zero
    count, poor Neumann residual, loss of positivity) are logged and
    dropped rather than reported.  Records are sorted by zero count,
    then side, then ``d``.
    """
    cfg = cfg or SolverConfig()
    if not (isinstance(max_zeros, int) and max_zeros >= 1):
        raise SpecError(f"max_zeros must be an integer >= 1, got {max_zeros!r}")
    for side in sides:
        if side not in _SIDES:
            raise SpecError(f"side must be one of {_SIDES}, got {side!r}")
    records = []
    for side in sides:
        records.extend(
            _records_for_side(spec, cfg, side, list(range(1, max_zeros + 1)))
        )
    records.sort(key=lambda rec: (rec.zeros, rec.side, rec.d))
    return records


def rstar(
    k: int,
    spec: ProblemSpec,
    cfg: SolverConfig | None = None,
    r_cap: float = 1e4,
) -> float:
    """Smallest outer radius at which k-zero solutions appear.

    Only meaningful in the regime where the terminal angle of shots
    near the constant state flattens out (p < 2): there, solutions with
    k interior zeros exist precisely beyond a threshold radius.  The
    domain shape of ``spec`` is kept (annuli keep their radius ratio)
    and the outer radius is bisected on the predicate "the scanned
    angle exceeds (k+1) half-periods somewhere".  The result has
    relative uncertainty below about 1e-3.
    """
    cfg = cfg or SolverConfig()
    if not (isinstance(k, int) and k >= 1):
        raise SpecError(f"zero count must be an integer >= 1, got {k!r}")
    if spec.c1 != 0.0:
        raise SpecError(
            "threshold radius requires a vanishing phase limit (p < 2);"
            f" this problem has c1={spec.c1!r}"
        )
    pip = pi_p(spec.p)
    target = (k + 1) * pip

    def pred(r_outer: float) -> bool:
        scan = theta_scan(spec.with_outer_radius(r_outer), cfg, "lower")
        best = max(
            (t for _, t in scan if not math.isnan(t)), default=-math.inf
        )
        return best > target

    r0 = spec.r_outer
    if pred(r0):
        hi, lo = r0, 0.5 * r0
        while pred(lo):
            hi, lo = lo, 0.5 * lo
            if lo < 1e-6 * r0:
                raise SearchError(
                    f"{k}-zero solutions persist down to R={lo!r};"
                    " no threshold in range"
                )
    else:
        lo, hi = r0, 2.0 * r0
        while not pred(hi):
            lo, hi = hi, 2.0 * hi
            if hi > r_cap:
                raise SearchError(
                    f"no {k}-zero solutions found up to outer radius {r_cap}"
                )
    while hi - lo > 1.5e-3 * lo:
        mid = 0.5 * (lo + hi)
        if pred(mid):
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)
