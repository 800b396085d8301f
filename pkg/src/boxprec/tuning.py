"""Operating-point tuning: power control and grid search over (reg, amp).

``tune_target_power`` inverts the monotone map from the target
constellation power to the asymptotic per-antenna transmit power.
``optimize_box`` and ``optimize_quant`` are deliberately exhaustive,
deterministic grid searches (closed-form theory is cheap); ties resolve
to the smallest parameter by visiting grids in ascending order with a
strict improvement rule.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.optimize import brentq

from .errors import DomainError, SolverError
from .saddle import SystemParams, solve_saddle
from .theory import box_theory, quant_theory

__all__ = [
    "TuneResult",
    "optimize_box",
    "optimize_quant",
    "tune_level_for_snr",
    "tune_target_power",
]

_POWER_TOL = 1e-8
_MAX_EXPAND = 200
_DEFAULT_REG_GRID = tuple(np.logspace(-3.0, 2.0, 15))
_DEFAULT_AMP_GRID = tuple(np.logspace(math.log10(5e-2), math.log10(2e1), 25))


@dataclass(frozen=True, slots=True)
class TuneResult:
    """A tuned operating point.

    ``grid_trace`` records every evaluated point as ``(value, metric)``
    pairs, in evaluation order for grid searches and sorted by the tuned
    parameter for root finding, so curve shapes can be read straight off
    the trace.
    """

    params: SystemParams
    objective: float
    grid_trace: tuple[tuple, ...]


def tune_level_for_snr(noise_var: float, snr_tx_db: float) -> float:
    """Quantizer level achieving a transmit SNR of ``snr_tx_db`` dB.

    The quantized pipeline transmits ``level^2`` per antenna, so
    ``level = sqrt(noise_var * 10^(dB/10))``.
    """
    if not noise_var > 0.0:
        raise DomainError(f"noise_var must be positive, got {noise_var!r}")
    return math.sqrt(noise_var * 10.0 ** (snr_tx_db / 10.0))


def tune_target_power(params: SystemParams, power: float) -> TuneResult:
    """Find the target constellation power reaching transmit power ``power``.

    Solves ``user_ratio * tau(rho)^2 - rho = power`` for
    ``rho = target_power`` by bracketed Brent iteration; the residual of
    the returned point is below 1e-8.  With a finite box the transmit
    power saturates at ``amp^2``, so ``power`` must stay below it.
    """
    if not (math.isfinite(power) and power > 0.0):
        raise DomainError(f"power must be positive and finite, got {power!r}")
    if math.isfinite(params.amp) and power >= params.amp * params.amp:
        raise DomainError(
            f"requested power {power} is not reachable under amp={params.amp} "
            f"(per-antenna power saturates at {params.amp ** 2})"
        )
    evals: list[tuple[float, float]] = []

    def achieved(rho: float) -> float:
        p = replace(params, target_power=rho)
        sp = solve_saddle(p)
        got = p.user_ratio * sp.tau * sp.tau - rho
        evals.append((rho, got))
        return got

    lo = min(power, 1.0)
    for _ in range(_MAX_EXPAND):
        if achieved(lo) < power:
            break
        lo *= 0.5
    else:
        raise SolverError("failed to bracket target power from below")
    hi = max(power, 1.0)
    for _ in range(_MAX_EXPAND):
        if achieved(hi) > power:
            break
        hi *= 2.0
    else:
        raise SolverError(
            f"failed to bracket target power from above (amp={params.amp})"
        )
    root = float(
        brentq(
            lambda rho: achieved(rho) - power,
            lo,
            hi,
            xtol=1e-12 * max(1.0, hi),
            rtol=1e-14,
            maxiter=200,
        )
    )
    tuned = replace(params, target_power=root)
    got = tuned.user_ratio * solve_saddle(tuned).tau ** 2 - root
    if abs(got - power) > _POWER_TOL:
        raise SolverError(
            f"power residual {got - power:.3e} exceeds {_POWER_TOL} at rho={root}"
        )
    evals.append((root, got))
    trace = tuple(sorted(dict(evals).items()))
    return TuneResult(params=tuned, objective=got, grid_trace=trace)


def optimize_box(
    params: SystemParams,
    snr_tx_db: float,
    reg_grid: tuple[float, ...] | None = None,
) -> TuneResult:
    """Pick the ridge weight minimizing box-precoder BER at fixed SNR.

    For every grid value the target power is re-tuned so the transmit SNR
    stays at ``snr_tx_db``; infeasible grid points enter the trace with a
    NaN metric.  Ties break to the smallest reg.
    """
    grid = _DEFAULT_REG_GRID if reg_grid is None else tuple(reg_grid)
    if not grid:
        raise DomainError("empty reg grid")
    power = params.noise_var * 10.0 ** (snr_tx_db / 10.0)
    trace: list[tuple[float, float]] = []
    best: tuple[float, SystemParams] | None = None
    for reg in grid:
        try:
            tuned = tune_target_power(replace(params, reg=reg), power).params
            ber = box_theory(tuned, solve_saddle(tuned)).ber
        except (DomainError, SolverError):
            trace.append((reg, math.nan))
            continue
        trace.append((reg, ber))
        if best is None or ber < best[0]:
            best = (ber, tuned)
    if best is None:
        raise SolverError("no feasible point on the reg grid")
    return TuneResult(params=best[1], objective=best[0], grid_trace=tuple(trace))


def optimize_quant(
    params: SystemParams,
    snr_tx_db: float,
    reg_grid: tuple[float, ...] | None = None,
    amp_grid: tuple[float, ...] | None = None,
) -> TuneResult:
    """Grid-search (reg, amp) minimizing quantized-precoder BER.

    The quantizer level is set from the SNR target and ``target_power``
    pinned to 1 (the quantized characterization's normalization).  The
    trace holds ``((reg, amp), ber)`` in grid order; ties break to the
    smallest (reg, amp).
    """
    regs = _DEFAULT_REG_GRID if reg_grid is None else tuple(reg_grid)
    amps = _DEFAULT_AMP_GRID if amp_grid is None else tuple(amp_grid)
    if not regs or not amps:
        raise DomainError("empty tuning grid")
    level = tune_level_for_snr(params.noise_var, snr_tx_db)
    trace: list[tuple[tuple[float, float], float]] = []
    best: tuple[float, SystemParams] | None = None
    for reg in regs:
        for amp in amps:
            candidate = replace(
                params, reg=reg, amp=amp, level=level, target_power=1.0
            )
            try:
                ber = quant_theory(candidate, solve_saddle(candidate)).ber
            except (DomainError, SolverError):
                trace.append(((reg, amp), math.nan))
                continue
            trace.append(((reg, amp), ber))
            if best is None or ber < best[0]:
                best = (ber, candidate)
    if best is None:
        raise SolverError("no feasible point on the (reg, amp) grid")
    return TuneResult(params=best[1], objective=best[0], grid_trace=tuple(trace))
