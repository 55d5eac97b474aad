"""Solution branches under parameter sweeps, and where they begin.

A branch is the set of roots ``d`` of the angle condition followed as
one parameter (the reaction exponent q or the outer radius R) varies.
:func:`branch_sweep` tabulates every validated solution across a sweep
and flags apparent folds, where the root jumps by more than a branch
would move continuously.  :func:`bifurcation_onset` locates, for the
p = 2 family, the exponent at which a branch with a given zero count
detaches from the constant solution; at that point the phase limit
``f'(1)`` crosses the corresponding Neumann eigenvalue, so the onset
has an independent eigenvalue characterization to test against.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

from .config import SolverConfig
from .errors import SearchError, SpecError
from .radial import Nonlinearity, ProblemSpec
from .solver import _records_for_side, find_solutions

logger = logging.getLogger(__name__)

# A root moving more than this between adjacent sweep values is not
# treated as continuous branch motion.
_FOLD_JUMP = 0.2

_PARAMS = ("q", "R")


@dataclass(frozen=True)
class BranchPoint:
    """One solution on one branch at one parameter value."""

    param: float
    d: float
    side: str
    zeros: int
    theta_end: float
    residual: float
    fold: bool


@dataclass
class BranchTable:
    """All branch points of a sweep, sorted by (zeros, side, param, d)."""

    param_name: str
    rows: list[BranchPoint]
    metadata: dict = field(default_factory=dict)

    def group(self, zeros: int, side: str) -> list[BranchPoint]:
        """Points of one branch family, in sweep order."""
        return [
            row
            for row in self.rows
            if row.zeros == zeros and row.side == side
        ]


def _spec_with_param(spec: ProblemSpec, name: str, value: float) -> ProblemSpec:
    if name == "q":
        g = Nonlinearity(q=value, r_exp=spec.g.r_exp)
        return ProblemSpec(p=spec.p, dim=spec.dim, domain=spec.domain, g=g)
    return spec.with_outer_radius(value)


def branch_sweep(
    spec: ProblemSpec,
    param_name: str,
    values: list[float],
    cfg: SolverConfig | None = None,
    max_zeros: int = 3,
    sides: tuple[str, ...] = ("lower", "upper"),
) -> BranchTable:
    """Solve the problem at every parameter value and tabulate the roots.

    Values are processed in increasing order.  Within each branch
    family (fixed zero count and side), a point whose ``d`` is farther
    than 0.2 from every root at the previous parameter value is marked
    ``fold=True``: either a second root appeared (folded branch) or the
    branch moved discontinuously, and both deserve a closer look.
    """
    cfg = cfg or SolverConfig()
    if param_name not in _PARAMS:
        raise SpecError(f"param_name must be one of {_PARAMS}, got {param_name!r}")
    if not values:
        raise SpecError("parameter sweep needs at least one value")
    if any(not math.isfinite(v) for v in values):
        raise SpecError("parameter values must be finite")
    spec._require_g()

    per_param: list[tuple[float, list]] = []
    for value in sorted(values):
        recs = find_solutions(
            _spec_with_param(spec, param_name, value), cfg, max_zeros, sides
        )
        per_param.append((value, recs))

    rows: list[BranchPoint] = []
    for zeros in range(1, max_zeros + 1):
        for side in sides:
            prev_ds: list[float] = []
            for value, recs in per_param:
                ds = [r.d for r in recs if r.zeros == zeros and r.side == side]
                for rec in recs:
                    if rec.zeros != zeros or rec.side != side:
                        continue
                    fold = bool(prev_ds) and all(
                        abs(rec.d - pd) > _FOLD_JUMP for pd in prev_ds
                    )
                    rows.append(
                        BranchPoint(
                            param=value,
                            d=rec.d,
                            side=side,
                            zeros=zeros,
                            theta_end=rec.theta_end,
                            residual=rec.residual,
                            fold=fold,
                        )
                    )
                if ds:
                    prev_ds = ds
    rows.sort(key=lambda row: (row.zeros, row.side, row.param, row.d))
    return BranchTable(
        param_name=param_name,
        rows=rows,
        metadata={
            "p": spec.p,
            "dim": spec.dim,
            "domain": repr(spec.domain),
            "g": spec.g.label(),
            "param_name": param_name,
            "n_values": len(values),
            "max_zeros": max_zeros,
            "sides": list(sides),
        },
    )


def bifurcation_onset(
    spec: ProblemSpec,
    zeros: int,
    cfg: SolverConfig | None = None,
    q_lo: float | None = None,
    q_hi: float | None = None,
) -> float:
    """Exponent q at which the branch with this zero count appears.

    Requires a finite nonzero phase limit, so p = 2: only there does
    the branch detach at a finite exponent.  Bisects q on "a validated
    lower-side solution with the requested zero count exists" to a
    relative width of 1e-3; raises :class:`SearchError` when the
    endpoints do not straddle the onset.
    """
    cfg = cfg or SolverConfig()
    spec._require_g()
    if not (isinstance(zeros, int) and zeros >= 1):
        raise SpecError(f"zero count must be an integer >= 1, got {zeros!r}")
    c1 = spec.c1
    if not (math.isfinite(c1) and c1 != 0.0):
        raise SpecError(
            "onset in q requires a finite nonzero phase limit (p = 2);"
            f" this problem has c1={c1!r}"
        )
    floor = spec.p if spec.g.r_exp is None else max(spec.p, spec.g.r_exp)
    lo = q_lo if q_lo is not None else floor + 0.05
    hi = q_hi if q_hi is not None else 200.0
    if not floor < lo < hi:
        raise SpecError(f"need {floor} < q_lo < q_hi, got ({lo!r}, {hi!r})")

    def pred(q: float) -> bool:
        spec_q = _spec_with_param(spec, "q", q)
        return bool(_records_for_side(spec_q, cfg, "lower", [zeros]))

    if pred(lo):
        raise SearchError(
            f"solutions with {zeros} zeros already exist at q={lo}; "
            "lower the starting exponent"
        )
    if not pred(hi):
        raise SearchError(
            f"no solutions with {zeros} zeros up to q={hi}; "
            "raise the ending exponent"
        )
    while hi - lo > 1e-3 * lo:
        mid = 0.5 * (lo + hi)
        if pred(mid):
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)
