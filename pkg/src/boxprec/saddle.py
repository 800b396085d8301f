"""Scalar saddle-point characterization of the asymptotic precoder.

In the large-system limit (antennas ``n`` and users ``m`` growing with
``m/n -> user_ratio``) the box-constrained regularized least-squares
precoder is governed by a two-variable scalar problem.  Its saddle point
``(tau, beta)`` satisfies the coupled fixed-point system::

    tau^2 * user_ratio = target_power + E[X^2]
    beta               = 2 tau user_ratio - 2 E[H X]

with ``X = clamp(H / alpha, [-amp, amp])`` and
``alpha = 1/tau + 2 reg / beta``.  Every asymptotic performance metric in
:mod:`boxprec.theory` is a closed-form function of this pair.

The solver is a nested bisection: the inner level resolves ``beta`` for a
given ``tau`` (the defining equation is strictly increasing in ``beta``),
the outer level drives the power residual ``tau^2 user_ratio -
target_power - E[X^2]`` to zero.  Existence and uniqueness hold whenever
``reg > 0``, or ``reg = 0`` with ``user_ratio >= 1``; the constructor of
:class:`SystemParams` enforces exactly that.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError, SolverError
from .moments import ClipMoments, _e_xh, clip_moments

__all__ = ["SaddlePoint", "SystemParams", "phi_value", "solve_saddle"]

_TOL = 1e-12
_MAX_ITER = 200


@dataclass(frozen=True, slots=True)
class SystemParams:
    """Operating point of the downlink precoding problem.

    Parameters
    ----------
    user_ratio : float
        Asymptotic ratio of users to transmit antennas, ``m / n``.
    reg : float
        Ridge regularization weight of the precoder objective.
    amp : float
        Per-antenna amplitude limit; ``math.inf`` removes the box.
    level : float
        Output level of the one-bit quantizer (entries of ``x_q`` are
        ``+-level``).
    noise_var : float
        Receiver noise variance.
    target_power : float
        Squared amplitude of the target constellation point the precoder
        steers each user to.
    n_antennas : int
        Number of transmit antennas for finite-size experiments.

    Notes
    -----
    The constructor enforces the uniqueness condition of the asymptotic
    analysis: ``reg > 0``, or ``reg = 0`` with ``user_ratio >= 1``.
    """

    user_ratio: float
    reg: float
    amp: float
    level: float = 1.0
    noise_var: float = 0.1
    target_power: float = 1.0
    n_antennas: int = 1000

    def __post_init__(self) -> None:
        if not (math.isfinite(self.user_ratio) and self.user_ratio > 0.0):
            raise DomainError(f"user_ratio must be positive, got {self.user_ratio!r}")
        if not (math.isfinite(self.reg) and self.reg >= 0.0):
            raise DomainError(f"reg must be nonnegative, got {self.reg!r}")
        if math.isnan(self.amp) or not self.amp > 0.0:
            raise DomainError(f"amp must be positive or inf, got {self.amp!r}")
        if not (math.isfinite(self.level) and self.level > 0.0):
            raise DomainError(f"level must be positive, got {self.level!r}")
        if not (math.isfinite(self.noise_var) and self.noise_var >= 0.0):
            raise DomainError(f"noise_var must be nonnegative, got {self.noise_var!r}")
        if not (math.isfinite(self.target_power) and self.target_power > 0.0):
            raise DomainError(
                f"target_power must be positive, got {self.target_power!r}"
            )
        if not (isinstance(self.n_antennas, int) and self.n_antennas >= 1):
            raise DomainError(f"n_antennas must be a positive int, got {self.n_antennas!r}")
        if self.reg == 0.0 and self.user_ratio < 1.0:
            raise DomainError(
                "reg = 0 requires user_ratio >= 1 for the asymptotic problem "
                f"to be well posed (got user_ratio={self.user_ratio})"
            )
        if self.n_users < 1:
            raise DomainError(
                f"user_ratio * n_antennas rounds to zero users "
                f"({self.user_ratio} * {self.n_antennas})"
            )

    @property
    def n_users(self) -> int:
        """Number of users, ``round(user_ratio * n_antennas)``."""
        return int(round(self.user_ratio * self.n_antennas))

    @property
    def boundary_regime(self) -> bool:
        """True on the uniqueness boundary ``reg = 0, user_ratio = 1``.

        Accepted with a finite box, but downstream limits degrade slowly
        there; callers may want to surface the flag.
        """
        return self.reg == 0.0 and self.user_ratio == 1.0


@dataclass(frozen=True, slots=True)
class SaddlePoint:
    """Solution of the scalar saddle-point system.

    Attributes
    ----------
    tau : float
        Scale variable; ``tau^2 user_ratio - target_power`` is the
        asymptotic per-antenna transmit power.
    beta : float
        Dual variable of the max side.
    alpha : float
        Effective inverse gain ``1/tau + 2 reg / beta`` of the clipped
        response.
    phi : float
        Saddle value of the scalar objective.
    moments : ClipMoments
        Moments of the clipped response at ``alpha``.
    residual_power : float
        ``tau^2 user_ratio - target_power - E[X^2]`` at the solution.
    residual_beta : float
        ``beta - 2 tau user_ratio + 2 E[H X]`` at the solution.
    """

    tau: float
    beta: float
    alpha: float
    phi: float
    moments: ClipMoments
    residual_power: float
    residual_beta: float


def _beta_for_tau(tau: float, p: SystemParams) -> float:
    """Solve ``beta = 2 tau user_ratio - 2 E[H X]`` for fixed ``tau``.

    The right-hand side is decreasing in ``beta`` (larger ``beta`` lowers
    ``alpha`` and raises ``E[H X]``), so the defining residual is strictly
    increasing and a plain bisection is safe.
    """
    two_td = 2.0 * tau * p.user_ratio
    if p.reg == 0.0:
        return two_td - 2.0 * _e_xh(1.0 / tau, p.amp)
    inv_tau = 1.0 / tau
    two_reg = 2.0 * p.reg

    def res(beta: float) -> float:
        return beta - two_td + 2.0 * _e_xh(inv_tau + two_reg / beta, p.amp)

    lo, hi = two_td * 1e-300, two_td
    # res(lo) ~ -two_td < 0, res(hi) = 2 E[H X] > 0
    tol = _TOL * max(1.0, two_td)
    for _ in range(_MAX_ITER):
        mid = 0.5 * (lo + hi)
        if res(mid) < 0.0:
            lo = mid
        else:
            hi = mid
        if hi - lo <= tol:
            break
    return 0.5 * (lo + hi)


def _alpha_of(tau: float, beta: float, p: SystemParams) -> float:
    if p.reg == 0.0:
        return 1.0 / tau
    return 1.0 / tau + 2.0 * p.reg / beta


def solve_saddle(params: SystemParams) -> SaddlePoint:
    """Solve the scalar saddle-point system for ``params``.

    Raises
    ------
    DomainError
        For the degenerate point ``reg = 0, user_ratio = 1, amp = inf``
        where the saddle point is not unique.
    SolverError
        If bracketing or bisection fails; the message carries the last
        residuals.
    """
    if params.reg == 0.0 and params.user_ratio == 1.0 and math.isinf(params.amp):
        raise DomainError(
            "reg = 0, user_ratio = 1, amp = inf has no unique saddle point"
        )
    delta = params.user_ratio
    rho = params.target_power

    def power_residual(tau: float) -> tuple[float, float]:
        beta = _beta_for_tau(tau, params)
        mom_sq = clip_moments(_alpha_of(tau, beta, params), params.amp).e_sq
        return tau * tau * delta - rho - mom_sq, beta

    floor = math.sqrt(rho / delta)
    lo = floor * (1.0 + 1e-12)
    r_lo, _ = power_residual(lo)
    if r_lo > 0.0:
        # E[X^2] below bracketing resolution: solution sits at the floor.
        if r_lo < 1e-9:
            return _assemble(lo, params)
        raise SolverError(
            f"power residual positive at lower bracket: {r_lo:.3e}"
        )
    hi = 2.0 * lo
    for _ in range(_MAX_ITER):
        r_hi, _ = power_residual(hi)
        if r_hi > 0.0:
            break
        hi *= 2.0
    else:
        raise SolverError(f"failed to bracket tau; residual at {hi:.3e} still negative")
    tol = _TOL * max(1.0, hi)
    for _ in range(_MAX_ITER):
        mid = 0.5 * (lo + hi)
        r_mid, _ = power_residual(mid)
        if r_mid < 0.0:
            lo = mid
        else:
            hi = mid
        if hi - lo <= tol:
            break
    return _assemble(0.5 * (lo + hi), params)


def _assemble(tau: float, params: SystemParams) -> SaddlePoint:
    beta = _beta_for_tau(tau, params)
    alpha = _alpha_of(tau, beta, params)
    moments = clip_moments(alpha, params.amp)
    delta = params.user_ratio
    res_power = tau * tau * delta - params.target_power - moments.e_sq
    res_beta = beta - 2.0 * tau * delta + 2.0 * moments.e_xh
    return SaddlePoint(
        tau=tau,
        beta=beta,
        alpha=alpha,
        phi=phi_value(tau, beta, params),
        moments=moments,
        residual_power=res_power,
        residual_beta=res_beta,
    )


def phi_value(tau: float, beta: float, params: SystemParams) -> float:
    """Scalar saddle objective at ``(tau, beta)``.

    The expectation over the clipped response is evaluated in closed form:
    the inner minimizer is ``X = clamp(H / alpha, [-amp, amp])`` with
    ``alpha = 1/tau + 2 reg / beta``, so the expected inner value equals
    ``(beta alpha / 2) E[X^2] - beta E[H X]``.
    """
    if not tau > 0.0:
        raise DomainError(f"tau must be positive, got {tau!r}")
    if not beta > 0.0:
        raise DomainError(f"beta must be positive, got {beta!r}")
    alpha = _alpha_of(tau, beta, params)
    mom = clip_moments(alpha, params.amp)
    delta = params.user_ratio
    rho = params.target_power
    expected_inner = 0.5 * beta * alpha * mom.e_sq - beta * mom.e_xh
    return (
        0.5 * tau * beta * delta
        + 0.5 * rho * beta / tau
        - 0.25 * beta * beta
        + expected_inner
    )
