"""Monte Carlo laboratory for nodal tangency statistics of Gaussian random waves."""

from ._tanglab import (  # noqa: F401
    FieldEvaluator,
    FieldRealization,
    RunConfig,
    SpectralModel,
    Vec2,
    __version__,
    covariance,
    covariance_lag,
    kac_rice_critical_density,
    kac_rice_tangency_density,
    lattice_points,
    moment,
    run_estimate,
    sample_field,
    tv_distance,
)
