"""Penalized linear regression with the concave bridge penalty.

The toolkit fits the bridge estimator (penalty lambda * sum |beta_j|^gamma
with 0 < gamma < 1) by smoothed gradient descent, offers the closed-form
marginal zero test for fast screening on wide designs, and ships a
replicated benchmark harness plus baseline solvers (OLS, ridge, lasso,
elastic net) for comparison.
"""

from .bench import (
    METHODS,
    MethodSummary,
    ReplicationReport,
    TuneResult,
    bench_config,
    default_enet_grids,
    default_lambda_grid,
    emse,
    lower_median,
    pmse,
    run_benchmark,
    sample_sd,
    selection_stats,
    tune_enet,
    tune_lambda,
    validation_mse,
)
from .data import Dataset, load_csv, predict, standardize
from .errors import (
    BridgexError,
    ConstantColumn,
    DataError,
    DimensionMismatch,
    InvalidGamma,
    InvalidSpec,
    NoSelection,
    NonFiniteInput,
    NotStandardized,
    SingularDesign,
    SingularSelectedGram,
    TooManySelected,
    UsageError,
)
from .inference import (
    EigenDiagnostics,
    StdErrReport,
    eigen_diagnostics,
    standard_errors,
    symmetric_eigenvalues,
)
from .scenarios import (
    ScenarioSpec,
    ar1_cholesky,
    ar1_covariance,
    fixed_design,
    generate_scenario,
    scenario,
)
from .screening import (
    ScreenResult,
    c_gamma,
    marginal_screen,
    two_step_fit,
    univariate_argmin_is_zero,
)
from .solvers import (
    CoefficientPartition,
    FitResult,
    PenaltySpec,
    SolverConfig,
    bridge_fit,
    enet_fit,
    lasso_fit,
    objective,
    ols_fit,
    ridge_fit,
)

__version__ = "0.1.0"
