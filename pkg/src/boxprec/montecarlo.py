"""Seeded Monte Carlo validation of the asymptotic predictions.

Each trial draws a fresh realization (seed = ``base_seed + trial index``),
solves the box QP, quantizes, and measures error rates, per-user
distortion, transmit power, and the Wasserstein-2 distance between the
empirical distortion-symbol law and its predicted Gaussian mixture.
Trials run on a bounded worker pool; aggregation is a deterministic fold
in trial order, so a (params, trials, base_seed) triple always produces
the same report bit for bit.

The pool size comes from the ``BOXPREC_WORKERS`` environment variable and
defaults to the available parallelism; one worker short-circuits to a
serial loop.
"""

from __future__ import annotations

import math
import os
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.special import ndtri

from .errors import DomainError
from .precoder import PrecoderSolution, Realization, generate_realization, solve_box_qp
from .saddle import SystemParams, solve_saddle
from .theory import BoxTheory, QuantTheory, box_theory, quant_theory

__all__ = [
    "EmpiricalReport",
    "TrialMetrics",
    "empirical_metrics",
    "run_experiment",
    "wasserstein2_to_theory",
]


@dataclass(frozen=True, slots=True)
class TrialMetrics:
    """Raw per-trial measurements (quant fields None when not evaluated)."""

    err_box: int
    sq_box: np.ndarray
    power_box: float
    w2_box: float
    err_quant: int | None
    sq_quant: np.ndarray | None
    w2_quant: float | None
    iterations: int


@dataclass(frozen=True, slots=True)
class EmpiricalReport:
    """Aggregated Monte Carlo metrics.

    BER standard errors use the binomial formula
    ``sqrt(p (1-p) / (trials * n_users))``.  SDNR comes in two flavors:
    ``sdnr_lb_*`` pools the distortion over users before inverting (the
    quantity the theory lower-bounds), ``sdnr_avg_*`` averages per-user
    inverses and so dominates it by Jensen's inequality.  ``power_quant``
    is ``level^2`` by construction of the one-bit DAC.  Quantized fields
    are None when ``target_power != 1`` (no quantized characterization
    there).
    """

    trials: int
    base_seed: int
    ber_box: float
    ber_box_se: float
    sdnr_lb_box: float
    sdnr_avg_box: float
    power_box: float
    w2_box: float
    ber_quant: float | None
    ber_quant_se: float | None
    sdnr_lb_quant: float | None
    sdnr_avg_quant: float | None
    power_quant: float | None
    w2_quant: float | None


def wasserstein2_to_theory(
    values: np.ndarray,
    symbols: np.ndarray,
    mean_plus: float,
    std: float,
) -> float:
    """W2 distance from an empirical distortion-symbol law to its target.

    The target is the balanced Gaussian mixture with class means
    ``+-mean_plus`` (indexed by the symbol) and common std ``std``.  Each
    class is compared by the midpoint-quantile coupling: sorted samples
    against the class quantile function at ``(i + 1/2) / k``; the squared
    class distances are combined with the empirical class weights.  An
    empty class falls back to prior weights (1/2 each) and contributes the
    class variance ``std^2``; that degenerate case is warned about.
    """
    values = np.asarray(values, dtype=float)
    symbols = np.asarray(symbols, dtype=float)
    if values.shape != symbols.shape or values.ndim != 1:
        raise DomainError("values and symbols must be 1-D arrays of equal length")
    if values.size == 0:
        raise DomainError("empty sample")
    total = values.size
    empty = False
    contrib: list[tuple[float, float]] = []
    for sign in (1.0, -1.0):
        cls = np.sort(values[symbols == sign])
        k = cls.size
        if k == 0:
            empty = True
            contrib.append((0.5, std * std))
            continue
        grid = (np.arange(k) + 0.5) / k
        quantiles = sign * mean_plus + std * ndtri(grid)
        contrib.append((k / total, float(np.mean((cls - quantiles) ** 2))))
    if empty:
        warnings.warn(
            "a symbol class is empty; using prior class weights", stacklevel=2
        )
        contrib = [(0.5, sq) for _, sq in contrib]
    return math.sqrt(sum(w * sq for w, sq in contrib))


def empirical_metrics(
    real: Realization,
    sol: PrecoderSolution,
    params: SystemParams,
    box: BoxTheory,
    quant: QuantTheory | None = None,
) -> TrialMetrics:
    """Measure one solved realization against the asymptotic scalings.

    Distortion observables are noise-free (``channel @ x``); receiver
    noise enters the error counts through the detected signs and the SDNR
    denominators analytically as ``rx_scale^2 * noise_var``.
    """
    channel, symbols, noise = real.channel, real.symbols, real.noise
    n = channel.shape[1]
    d_box = channel @ sol.x_hat
    det = np.where(box.rx_scale * (d_box + noise) >= 0.0, 1.0, -1.0)
    err_box = int(np.sum(det != symbols))
    sq_box = (box.rx_scale * d_box - symbols) ** 2
    w2_box = wasserstein2_to_theory(d_box, symbols, box.sig_coef, box.dist_std)
    power_box = float(sol.x_hat @ sol.x_hat) / n
    err_quant = sq_quant = w2_quant = None
    if quant is not None:
        d_q = channel @ sol.x_quant
        det_q = np.where(quant.rx_scale * (d_q + noise) >= 0.0, 1.0, -1.0)
        err_quant = int(np.sum(det_q != symbols))
        sq_quant = (quant.rx_scale * d_q - symbols) ** 2
        w2_quant = wasserstein2_to_theory(
            d_q, symbols, quant.sig_coef, math.sqrt(quant.dist_var)
        )
    return TrialMetrics(
        err_box=err_box,
        sq_box=sq_box,
        power_box=power_box,
        w2_box=w2_box,
        err_quant=err_quant,
        sq_quant=sq_quant,
        w2_quant=w2_quant,
        iterations=sol.iterations,
    )


def _run_trial(task) -> TrialMetrics:
    params, seed, box, quant = task
    real = generate_realization(params, seed)
    sol = solve_box_qp(real, params)
    return empirical_metrics(real, sol, params, box, quant)


def _worker_count(workers: int | None) -> int:
    if workers is not None:
        return max(1, int(workers))
    env = os.environ.get("BOXPREC_WORKERS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def run_experiment(
    params: SystemParams,
    trials: int,
    base_seed: int,
    workers: int | None = None,
) -> EmpiricalReport:
    """Run ``trials`` seeded realizations and aggregate the metrics."""
    if trials < 1:
        raise DomainError(f"trials must be >= 1, got {trials}")
    sp = solve_saddle(params)
    box = box_theory(params, sp)
    quant = quant_theory(params, sp) if params.target_power == 1.0 else None
    tasks = [(params, base_seed + i, box, quant) for i in range(trials)]
    nworkers = _worker_count(workers)
    if nworkers == 1 or trials == 1:
        results = [_run_trial(t) for t in tasks]
    else:
        chunk = max(1, trials // (4 * nworkers))
        with ProcessPoolExecutor(max_workers=min(nworkers, trials)) as pool:
            results = list(pool.map(_run_trial, tasks, chunksize=chunk))
    m = params.n_users
    bits = trials * m
    err_box = sum(r.err_box for r in results)
    sq_box = np.zeros(m)
    for r in results:
        sq_box += r.sq_box
    sq_box /= trials
    ber_box = err_box / bits
    scale2_noise = box.rx_scale * box.rx_scale * params.noise_var
    report_quant: dict[str, float | None] = dict.fromkeys(
        (
            "ber_quant",
            "ber_quant_se",
            "sdnr_lb_quant",
            "sdnr_avg_quant",
            "power_quant",
            "w2_quant",
        )
    )
    if quant is not None:
        err_q = sum(r.err_quant for r in results)
        sq_q = np.zeros(m)
        for r in results:
            sq_q += r.sq_quant
        sq_q /= trials
        ber_q = err_q / bits
        qscale2_noise = quant.rx_scale * quant.rx_scale * params.noise_var
        report_quant = {
            "ber_quant": ber_q,
            "ber_quant_se": math.sqrt(ber_q * (1.0 - ber_q) / bits),
            "sdnr_lb_quant": 1.0 / (float(np.mean(sq_q)) + qscale2_noise),
            "sdnr_avg_quant": float(np.mean(1.0 / (sq_q + qscale2_noise))),
            "power_quant": params.level * params.level,
            "w2_quant": float(np.mean([r.w2_quant for r in results])),
        }
    return EmpiricalReport(
        trials=trials,
        base_seed=base_seed,
        ber_box=ber_box,
        ber_box_se=math.sqrt(ber_box * (1.0 - ber_box) / bits),
        sdnr_lb_box=1.0 / (float(np.mean(sq_box)) + scale2_noise),
        sdnr_avg_box=float(np.mean(1.0 / (sq_box + scale2_noise))),
        power_box=float(np.mean([r.power_box for r in results])),
        w2_box=float(np.mean([r.w2_box for r in results])),
        **report_quant,
    )
