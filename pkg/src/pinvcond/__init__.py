"""Moore-Penrose inversion and condition numbers of noisy rectangular
matrices: a Golub-Kahan SVD core, closed-form tail and expectation bounds,
seeded Monte Carlo experiments that check every bound, and a conjugate
gradient benchmark tying kappa to iteration counts."""

from .bounds import (
    BoundContext,
    GammaHelper,
    LemmaCheck,
    analytic_lemma_checks,
    c_lambda,
    cg_cost_and_breakeven,
    cg_iteration_bound,
    chen_dongarra_bounds,
    edelman_limit,
    expectation_bound,
    expectation_bound_log,
    lop_bound,
    mu_cdw,
    pinv_directional_tail_bound,
    pinv_tail_bound,
    q_analytic_bounds,
    q_limit,
    theorem_tail_bound,
    z_of_eps,
    zeta,
)
from .cg import CgRunStats, cg_experiment, cg_solve
from .errors import (
    ConfigError,
    DegenerateSpanError,
    DimensionError,
    DomainError,
    ExtrapolationWarning,
    HeavyTailWarning,
    HypothesisViolationError,
    IndefiniteMatrixError,
    MultiplicityWarning,
    RankDeficiencyError,
    SvdConvergenceError,
)
from .experiments import (
    REFERENCE_TABLES,
    TableReproduction,
    TableRow,
    TailEstimate,
    TailPoint,
    TrialRecord,
    collect_trials,
    empirical_expectation,
    empirical_tail,
    estimate_q,
    expectation_experiment,
    make_ones_center,
    q_experiment,
    reproduce_tables,
    run_trials,
    tail_experiment,
    verify_inequality_suite,
    write_trials_csv,
)
from .linalg import (
    BidiagonalForm,
    SvdFactors,
    as_matrix,
    bidiagonal_singular_values,
    bidiagonalize,
    condition_number,
    pseudo_inverse,
    rank_tolerance,
    read_matrix_csv,
    row_complement,
    sharpest_direction,
    singular_values,
    solve_least_squares,
    solve_min_norm,
    spectral_norm,
    svd,
    svd_tolerance,
    write_matrix_csv,
)
from .reports import (
    Z_95,
    ExperimentReport,
    Verdict,
    format_float,
    wilson_interval,
    wilson_lower,
    wilson_upper,
)
from .sampling import (
    GaussianEnsemble,
    Seed,
    sample_bidiagonal_model,
    sample_chi,
    sample_gaussian_matrix,
    sample_unit_sphere,
    standard_normals,
)

__version__ = "0.1.0"

__all__ = [
    "BidiagonalForm",
    "BoundContext",
    "CgRunStats",
    "ConfigError",
    "DegenerateSpanError",
    "DimensionError",
    "DomainError",
    "ExperimentReport",
    "ExtrapolationWarning",
    "GammaHelper",
    "GaussianEnsemble",
    "HeavyTailWarning",
    "HypothesisViolationError",
    "IndefiniteMatrixError",
    "LemmaCheck",
    "MultiplicityWarning",
    "RankDeficiencyError",
    "REFERENCE_TABLES",
    "Seed",
    "SvdConvergenceError",
    "SvdFactors",
    "TableReproduction",
    "TableRow",
    "TailEstimate",
    "TailPoint",
    "TrialRecord",
    "Verdict",
    "Z_95",
    "analytic_lemma_checks",
    "as_matrix",
    "bidiagonal_singular_values",
    "bidiagonalize",
    "c_lambda",
    "cg_cost_and_breakeven",
    "cg_experiment",
    "cg_iteration_bound",
    "cg_solve",
    "chen_dongarra_bounds",
    "collect_trials",
    "condition_number",
    "edelman_limit",
    "empirical_expectation",
    "empirical_tail",
    "estimate_q",
    "expectation_bound",
    "expectation_bound_log",
    "expectation_experiment",
    "format_float",
    "lop_bound",
    "make_ones_center",
    "mu_cdw",
    "pinv_directional_tail_bound",
    "pinv_tail_bound",
    "pseudo_inverse",
    "q_analytic_bounds",
    "q_experiment",
    "q_limit",
    "rank_tolerance",
    "read_matrix_csv",
    "reproduce_tables",
    "row_complement",
    "run_trials",
    "sample_bidiagonal_model",
    "sample_chi",
    "sample_gaussian_matrix",
    "sample_unit_sphere",
    "sharpest_direction",
    "singular_values",
    "solve_least_squares",
    "solve_min_norm",
    "spectral_norm",
    "standard_normals",
    "svd",
    "svd_tolerance",
    "tail_experiment",
    "theorem_tail_bound",
    "verify_inequality_suite",
    "wilson_interval",
    "wilson_lower",
    "wilson_upper",
    "write_matrix_csv",
    "write_trials_csv",
    "z_of_eps",
    "zeta",
    "__version__",
]
