"""Parametric bootstrap for spectral statistics of elliptical data."""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    ConfigurationError,
    DataError,
    DegenerateInputError,
    DimensionError,
    DomainError,
    InsufficientDataError,
    ReplicateError,
    SolverError,
    SpecbootError,
)
from .spectra import (  # noqa: E402
    CovarianceSpec,
    SpectrumModel,
    make_covariance_setting,
    rescaled_s1,
    s1_scale_for_ratio,
    spectral_distribution,
)
from .sampling import (  # noqa: E402
    Dataset,
    EllipticalLaw,
    load_dataset,
    paper_law,
    sample_dataset,
    sample_unit_sphere,
    sample_xi_squared,
)
from .estimators import (  # noqa: E402
    EstimatorBundle,
    eigenvalue_cap,
    estimate_all,
    estimate_moments,
    estimate_varsigma_sq,
    sample_covariance_eigs,
    stable_rank_hat,
)
from .mp import (  # noqa: E402
    MPDistribution,
    centering_moments,
    centering_parameter,
    centering_parameter_mc,
    esd_grid,
    solve_stieltjes,
)
from .quest import (  # noqa: E402
    SpectrumEstimate,
    estimate_population_spectrum,
    forward_sample_spectrum,
)
from .bootstrap import (  # noqa: E402
    EIGEN_GAP,
    LARGEST_EIG,
    STABLE_RANK_STAR,
    BootstrapConfig,
    BootstrapDraws,
    StatisticSpec,
    bootstrap_distribution,
    bootstrap_replicate,
    config_from_data,
    evaluate_statistic,
    gamma_xi_params,
    lss,
)
from .inference import (  # noqa: E402
    LimitMoments,
    RankInferenceResult,
    empirical_quantile,
    limiting_rank_variance,
    sphericity_test,
    stable_rank_ci,
    stable_rank_test,
)
