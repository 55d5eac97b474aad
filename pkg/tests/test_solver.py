"""Root-search tests: scans, bracketing, validation, threshold radii."""

import logging
import math

import pytest

from plapshoot.config import SolverConfig
from plapshoot.eigen import eigen_angle
from plapshoot.errors import SpecError
from plapshoot.ptrig import pi_p
from plapshoot.radial import Annulus, Ball, Nonlinearity, ProblemSpec, shoot
from plapshoot.solver import d_grid, find_solutions, rstar, theta_scan

CFG = SolverConfig(d_grid_size=400, rel_tol=1e-10, abs_tol=1e-12)
CFG_COARSE = SolverConfig(d_grid_size=200, rel_tol=1e-9, abs_tol=1e-11)


def ball(p=2.0, dim=1, radius=1.0, q=15.0):
    return ProblemSpec(p=p, dim=dim, domain=Ball(radius), g=Nonlinearity(q=q))


@pytest.fixture(scope="module")
def q100_lower():
    return find_solutions(ball(q=100.0), CFG, max_zeros=3, sides=("lower",))


@pytest.fixture(scope="module")
def q100_upper():
    return find_solutions(ball(q=100.0), CFG, max_zeros=2, sides=("upper",))


def test_d_grid_lower_refines_toward_one():
    cfg = SolverConfig(d_grid_size=100)
    grid = d_grid(cfg, "lower")
    assert grid == sorted(grid)
    assert grid[0] == cfg.d_min
    assert grid[-1] == pytest.approx(cfg.d_max, abs=1e-15)
    # Geometric tail: several points within 1e-4 of d = 1.
    assert sum(1 for d in grid if d > 1.0 - 1e-4) >= 10
    assert len(grid) <= cfg.d_grid_size


def test_d_grid_upper_is_geometric():
    cfg = SolverConfig(d_grid_size=50)
    grid = d_grid(cfg, "upper")
    assert grid[0] == pytest.approx(cfg.d_min_upper)
    assert grid[-1] == pytest.approx(cfg.d_max_upper)
    gaps = [b - a for a, b in zip(grid, grid[1:])]
    assert all(g > 0 for g in gaps)
    assert gaps[-1] > gaps[0] * 100


def test_d_grid_rejects_bad_side():
    with pytest.raises(SpecError):
        d_grid(SolverConfig(), "middle")


def test_theta_scan_subcritical_stays_under_target():
    spec = ball(q=5.0)
    cfg = SolverConfig(d_grid_size=100)
    scan = theta_scan(spec, cfg, "lower")
    pip = pi_p(2.0)
    assert len(scan) == len(d_grid(cfg, "lower"))
    for d, th in scan:
        assert not math.isnan(th)
        assert pip - 1e-9 <= th < 2 * pip


def test_theta_scan_threads_match_serial():
    spec = ball(q=15.0)
    cfg1 = SolverConfig(d_grid_size=60, threads=1)
    cfg4 = SolverConfig(d_grid_size=60, threads=4)
    assert theta_scan(spec, cfg1) == theta_scan(spec, cfg4)


def test_no_solutions_below_onset():
    recs = find_solutions(
        ball(q=5.0), CFG, max_zeros=2, sides=("lower", "upper")
    )
    assert recs == []


def test_q100_lower_multiplicity(q100_lower):
    assert [r.zeros for r in q100_lower] == [1, 2, 3]
    ds = [r.d for r in q100_lower]
    assert ds == sorted(ds)
    pip = pi_p(2.0)
    for rec in q100_lower:
        assert rec.side == "lower"
        assert 0.0 < rec.d < 1.0
        assert rec.theta_end == pytest.approx(
            (rec.zeros + 1) * pip, abs=1e-8 * pip
        )
        assert rec.residual <= 1e-7
        assert rec.summary.min_u > 0.0
        assert rec.summary.zeros == rec.zeros


def test_q100_j1_profile_is_monotone(q100_lower):
    rec = q100_lower[0]
    u = rec.trajectory.u
    assert all(b >= a - 1e-10 for a, b in zip(u, u[1:]))
    assert u[0] == pytest.approx(rec.d, abs=1e-6)


def test_q100_upper_records(q100_upper):
    assert [r.zeros for r in q100_upper] == [1, 2]
    for rec in q100_upper:
        assert rec.side == "upper"
        assert rec.d > 1.0
        assert rec.summary.min_u > 0.0
    # The one-zero profile starts above 1 and decreases.
    u = q100_upper[0].trajectory.u
    assert all(b <= a + 1e-10 for a, b in zip(u, u[1:]))


def test_upper_scan_discontinuity_is_rejected_not_reported(caplog):
    # Above the one-zero root the upper scan jumps discontinuously
    # (profiles dive below zero); bisection converges onto the jump and
    # re-validation must throw the candidate away.
    with caplog.at_level(logging.WARNING, logger="plapshoot.solver"):
        recs = find_solutions(ball(q=100.0), CFG, max_zeros=1, sides=("upper",))
    assert len(recs) == 1
    assert any("rejecting candidate" in msg for msg in caplog.messages)


def test_root_stable_under_tighter_tolerance(q100_lower):
    tight = SolverConfig(d_grid_size=400, rel_tol=1e-11, abs_tol=1e-13)
    recs = find_solutions(ball(q=100.0), tight, max_zeros=1, sides=("lower",))
    assert len(recs) == 1
    assert recs[0].d == pytest.approx(q100_lower[0].d, abs=1e-8)


def test_shot_limit_matches_eigen_angle_at_phase_limit():
    # Shots approaching the constant state wind like the eigenvalue
    # flow at lam = f'(1) when p = 2; here f'(1) = q - 2 = 13.
    spec = ball(q=15.0)
    th_shot = shoot(1.0 - 1e-5, spec)[1].theta_end
    th_eig = eigen_angle(13.0, spec)
    assert th_shot == pytest.approx(th_eig, abs=1e-3)
    assert abs(th_shot - th_eig) > 0.0


def test_scan_has_floor_gap_but_roots_survive_p3():
    # For p = 3 the squared radius near d = 1 drops under the floor, so
    # the top of the scan is NaN; roots farther out must still be found.
    spec = ball(p=3.0, q=4.0)
    scan = theta_scan(spec, CFG, "lower")
    assert any(math.isnan(th) for d, th in scan if d > 1.0 - 1e-5)
    recs = find_solutions(spec, CFG, max_zeros=1, sides=("lower", "upper"))
    assert [(r.side, r.zeros) for r in recs] == [("lower", 1), ("upper", 1)]
    assert recs[0].d == pytest.approx(0.9556, abs=2e-3)
    assert recs[1].d == pytest.approx(1.0419, abs=2e-3)


def test_rstar_brackets_the_threshold():
    spec = ball(p=1.8, q=3.0)
    r_hat = rstar(1, spec, CFG_COARSE)
    assert 2.0 < r_hat < 8.0
    pip = pi_p(1.8)
    for radius, expect in ((r_hat * 0.99, False), (r_hat * 1.01, True)):
        scan = theta_scan(spec.with_outer_radius(radius), CFG_COARSE, "lower")
        best = max(th for _, th in scan if not math.isnan(th))
        assert (best > 2 * pip) is expect, radius


def test_rstar_increases_with_zero_count():
    spec = ball(p=1.8, q=3.0)
    r1 = rstar(1, spec, CFG_COARSE)
    r2 = rstar(2, spec, CFG_COARSE)
    assert r2 > r1 * 1.5


def test_rstar_requires_vanishing_phase_limit():
    with pytest.raises(SpecError):
        rstar(1, ball(p=2.0, q=5.0), CFG_COARSE)
    with pytest.raises(SpecError):
        rstar(1, ball(p=3.0, q=5.0), CFG_COARSE)


def test_find_solutions_validates_arguments():
    with pytest.raises(SpecError):
        find_solutions(ball(), CFG, max_zeros=0)
    with pytest.raises(SpecError):
        find_solutions(ball(), CFG, sides=("sideways",))


def test_annulus_solutions_exist_when_wide_enough():
    # A comfortably wide annulus carries one-zero solutions for p < 2.
    spec = ProblemSpec(
        p=1.8, dim=2, domain=Annulus(0.5, 5.0), g=Nonlinearity(q=3.0)
    )
    recs = find_solutions(spec, CFG_COARSE, max_zeros=1, sides=("lower",))
    assert len(recs) >= 1
    for rec in recs:
        assert rec.summary.min_u > 0.0
        assert rec.zeros == 1
