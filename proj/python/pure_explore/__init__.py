from ._pure_explore import (
    __version__,
    chernoff,
    chernoff_crn,
    chernoff_unknown_variance,
    glrt,
    kl,
    kl_gaussian_two_param,
    normal_quantile,
    run_experiment,
    solve,
    stopping_threshold,
)

__all__ = [
    "__version__",
    "chernoff",
    "chernoff_crn",
    "chernoff_unknown_variance",
    "glrt",
    "kl",
    "kl_gaussian_two_param",
    "normal_quantile",
    "run_experiment",
    "solve",
    "stopping_threshold",
]
