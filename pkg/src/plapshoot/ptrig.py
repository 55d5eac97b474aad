"""Generalized trigonometric functions for the p-Laplacian.

The pair ``(cos_p, sin_p)`` is defined by the initial value problem

    C' = -phi_q(S),   S' = phi_p(C),   C(0) = 1,  S(0) = 0,

where ``phi_p(s) = |s|^(p-2) s`` and ``q = p/(p-1)`` is the conjugate
exponent.  The pair satisfies the pythagorean-type identity

    (p-1) |S|^q + |C|^p = 1

and is periodic with period ``2 pi_p``, where ``pi_p`` has a closed
form in terms of the sine function.  For p = 2 everything collapses to
the ordinary cosine and sine.

Evaluation goes through a cached per-exponent context: one quarter
period is tabulated once by the adaptive integrator and every angle is
folded into it by the reflection and antiperiodicity symmetries.  A
short series handles angles near zero where the table would lose
relative accuracy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

from .errors import NumericsError, SpecError
from .odeint import IvpSpec, integrate

# Below this angle the truncated series is used instead of the table;
# its omitted terms are O(delta**(2q)) <= 1e-16 for the p range allowed.
_SERIES_CUTOFF = 1e-6


def _check_p(p: float) -> None:
    if not (isinstance(p, (int, float)) and math.isfinite(p) and p > 1.0):
        raise SpecError(f"exponent p must be a finite number > 1, got {p!r}")


@dataclass(frozen=True)
class PExponent:
    """An exponent p > 1 paired with its conjugate p' = p/(p-1)."""

    p: float
    pprime: float = field(init=False)

    def __post_init__(self):
        _check_p(self.p)
        object.__setattr__(self, "pprime", self.p / (self.p - 1.0))


def phi_p(s: float, p: float) -> float:
    """The odd power map ``|s|**(p-2) * s``.

    Written as ``sign(s) * |s|**(p-1)`` so that fractional exponents
    never see a negative base and p < 2 causes no blow-up at s = 0.
    """
    _check_p(p)
    if s == 0.0:
        return 0.0
    return math.copysign(abs(s) ** (p - 1.0), s)


def phi_p_inv(s: float, p: float) -> float:
    """Inverse of :func:`phi_p`, which is the power map of the conjugate."""
    _check_p(p)
    return phi_p(s, p / (p - 1.0))


def pi_p(p: float) -> float:
    """Half-period of the generalized trigonometric pair."""
    _check_p(p)
    return 2.0 * math.pi * (p - 1.0) ** (1.0 / p) / (p * math.sin(math.pi / p))


class PTrigContext:
    """Tabulated quarter period of ``(cos_p, sin_p)`` for one exponent.

    Build through :func:`get_context`, which caches per ``p``; direct
    construction integrates the defining system at tight tolerance and
    is comparatively expensive.  ``eval_tol`` is a measured bound on
    the identity defect of values returned by :meth:`pair`.
    """

    def __init__(self, p: float):
        self.exponent = PExponent(p)
        self.pi_p = pi_p(p)
        self.half_pi_p = 0.5 * self.pi_p
        # Largest value of sin_p, attained at the quarter period.
        self.sin_p_max = (1.0 / (p - 1.0)) ** (1.0 / self.exponent.pprime)
        self._delta = min(_SERIES_CUTOFF, self.half_pi_p / 8.0)

        pp = self.exponent.pprime

        def rhs(t, y):
            c, s = y
            return (
                -math.copysign(abs(s) ** (pp - 1.0), s),
                math.copysign(abs(c) ** (p - 1.0), c),
            )

        self._quarter = integrate(
            IvpSpec(
                rhs=rhs,
                r_start=self._delta,
                r_end=self.half_pi_p,
                y0=self._series_pair(self._delta),
                rel_tol=1e-12,
                abs_tol=1e-14,
            )
        )
        c_end, s_end = self._quarter.y_end
        if abs(c_end) > 1e-9 or abs(s_end - self.sin_p_max) > 1e-9:
            raise NumericsError(
                f"quarter-period table for p={p} failed its endpoint check:"
                f" C={c_end:.3e}, S-S_max={s_end - self.sin_p_max:.3e}"
            )
        self.eval_tol = self._measure_eval_tol()

    def _series_pair(self, t: float) -> tuple[float, float]:
        # Two-term expansions around the C = 1, S = 0 corner.
        p = self.exponent.p
        pp = self.exponent.pprime
        tq = t**pp
        c = 1.0 - tq / pp + (p - 1.0) * (pp - 1.0) * tq * tq / (
            2.0 * pp * pp * (pp + 1.0)
        )
        s = t - (p - 1.0) * tq * t / (pp * (pp + 1.0))
        return (c, s)

    def _quarter_pair(self, t: float) -> tuple[float, float]:
        # t is an angle folded into [0, pi_p/2]; fold arithmetic can
        # land a few ulp outside, which the table eval clamps.
        if t <= self._delta:
            return self._series_pair(max(t, 0.0))
        c, s = self._quarter.eval(min(t, self.half_pi_p))
        return (c, s)

    def pair(self, theta: float) -> tuple[float, float]:
        """``(cos_p(theta), sin_p(theta))`` for any finite angle."""
        if not math.isfinite(theta):
            raise SpecError(f"angle must be finite, got {theta!r}")
        two = 2.0 * self.pi_p
        t = math.fmod(theta, two)
        if t < 0.0:
            t += two
        if t >= self.pi_p:
            sign = -1.0
            t -= self.pi_p
        else:
            sign = 1.0
        if t > self.half_pi_p:
            c, s = self._quarter_pair(self.pi_p - t)
            c = -c
        else:
            c, s = self._quarter_pair(t)
        return (sign * c, sign * s)

    def _measure_eval_tol(self) -> float:
        p = self.exponent.p
        pp = self.exponent.pprime
        worst = 0.0
        n = 257
        for i in range(n):
            c, s = self.pair(2.0 * self.pi_p * i / (n - 1))
            defect = abs((p - 1.0) * abs(s) ** pp + abs(c) ** p - 1.0)
            worst = max(worst, defect)
        return max(10.0 * worst, 1e-13)


@lru_cache(maxsize=64)
def get_context(p: float) -> PTrigContext:
    """Shared per-exponent context; building one is the slow part."""
    return PTrigContext(float(p))


def ptrig_pair(theta: float, ctx: PTrigContext) -> tuple[float, float]:
    """Evaluate ``(cos_p, sin_p)`` at ``theta`` using a prepared context."""
    return ctx.pair(theta)
