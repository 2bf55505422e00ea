"""Truncated Euler-Maruyama simulation of mean-field interacting particles.

The package simulates McKean-Vlasov dynamics with super-linearly growing
coefficients by propagating an interacting particle system whose empirical
measure replaces the law, projecting each explicit step onto a step-size
dependent ball.  Experiment drivers measure strong convergence, long-time
stability, moment bounds, invariant measures, and propagation of chaos, and
write delimited reports plus rendered figures.
"""

from ._version import __version__
from .errors import (
    ConfigurationError,
    DegenerateGrowthError,
    DimensionMismatchError,
    InputDataError,
    MVTEMError,
    NonDyadicStepError,
    NumericOverflowError,
    StepSizeTooLargeError,
    UnknownModelError,
    UnsupportedSizeError,
)
from .measures import (
    EmpiricalMeasure,
    FournierProbeResult,
    W2Result,
    fournier_rate_probe,
    w2_assignment,
    w2_matched,
    w2_sorted_1d,
    w2_to_dirac,
    wq_quantile_1d,
)
from .models import (
    MarginReport,
    ModelSpec,
    builtin_double_well,
    builtin_vol32,
    check_contraction,
    check_dissipativity,
    get_model,
    list_models,
    register_model,
    zero_equilibrium,
)
from .noise import NoisePlan
from .scheme import (
    CoupledRmseResult,
    ObserverConfig,
    ParticleEnsemble,
    SimulationResult,
    coupled_rmse,
    draw_initial,
    em_step,
    simulate,
    tem_step,
)
from .truncation import (
    TruncationRule,
    polynomial_rule,
    project,
    radius,
    rate_tuned_kappa,
)
from .experiments import (
    ExperimentReport,
    PowerLawFit,
    Table,
    chaos_experiment,
    child_seed,
    convergence_experiment,
    fit_power_law,
    fournier_experiment,
    invariant_measure_experiment,
    moment_bound_experiment,
    read_report,
    simulate_experiment,
    stability_experiment,
)
from .config import (
    BUILTIN_TRUNCATION,
    ResolvedRun,
    build_rule,
    is_dyadic,
    resolve_config,
    run,
)
from .figures import (
    plot_convergence,
    plot_density,
    plot_paths,
    plot_stability,
    render_report,
)

__all__ = [name for name in dir() if not name.startswith("_")]
