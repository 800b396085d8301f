"""Asymptotics and simulation of box-constrained one-bit precoding.

Library layout:

- :mod:`boxprec.moments`: moments of the clipped Gaussian response.
- :mod:`boxprec.saddle`: the scalar saddle-point system and its solver.
- :mod:`boxprec.theory`: closed-form performance of the box-constrained,
  one-bit quantized, and Bussgang-approximated pipelines.
- :mod:`boxprec.precoder`: finite-dimensional QP solver and quantizer.
- :mod:`boxprec.montecarlo`: seeded experiments validating the theory.
- :mod:`boxprec.tuning`: power control and (reg, amp) grid search.
- :mod:`boxprec.config` / :mod:`boxprec.cli`: JSON-driven experiment
  runner behind the ``boxprec`` command.
"""

from .config import ExperimentConfig, parse_config, serialize_config
from .errors import BoxprecError, ConfigError, DomainError, SolverError
from .moments import ClipMoments, clip_moments, normal_pdf, q_tail
from .montecarlo import (
    EmpiricalReport,
    TrialMetrics,
    empirical_metrics,
    run_experiment,
    wasserstein2_to_theory,
)
from .precoder import (
    PrecoderSolution,
    Realization,
    generate_realization,
    quantize,
    solve_box_qp,
)
from .saddle import SaddlePoint, SystemParams, phi_value, solve_saddle
from .theory import (
    BoxTheory,
    BussgangTheory,
    QuantTheory,
    box_theory,
    bussgang_theory,
    quant_theory,
    snr_tx,
)
from .tuning import (
    TuneResult,
    optimize_box,
    optimize_quant,
    tune_level_for_snr,
    tune_target_power,
)

__version__ = "0.1.0"

__all__ = [
    "BoxprecError",
    "BoxTheory",
    "BussgangTheory",
    "ClipMoments",
    "ConfigError",
    "DomainError",
    "EmpiricalReport",
    "ExperimentConfig",
    "PrecoderSolution",
    "QuantTheory",
    "Realization",
    "SaddlePoint",
    "SolverError",
    "SystemParams",
    "TrialMetrics",
    "TuneResult",
    "box_theory",
    "bussgang_theory",
    "clip_moments",
    "empirical_metrics",
    "generate_realization",
    "normal_pdf",
    "optimize_box",
    "optimize_quant",
    "parse_config",
    "phi_value",
    "q_tail",
    "quant_theory",
    "quantize",
    "run_experiment",
    "serialize_config",
    "snr_tx",
    "solve_box_qp",
    "solve_saddle",
    "tune_level_for_snr",
    "tune_target_power",
    "wasserstein2_to_theory",
    "__version__",
]
