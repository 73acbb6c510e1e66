"""Nonnegative latent factor learning with swarm-adapted ADMM."""

from ._core import (  # noqa: F401
    AdaptiveResult,
    ConfigError,
    DatasetSplit,
    FactorState,
    HdiMatrix,
    HyperParams,
    NumericError,
    ParseError,
    RatingData,
    Swarm,
    SwarmConfig,
    TerminationPolicy,
    TrainReport,
    adaptive_train,
    check_termination,
    density,
    evaluate_model,
    evolve_particle,
    init_state,
    init_swarm,
    load_model,
    mae,
    measure_and_update,
    parse_ratings_file,
    parse_ratings_text,
    predict,
    project_a_column,
    project_x_column,
    rmse,
    run_cross_validation,
    ten_fold_splits,
    train_fixed,
    train_iteration,
    update_h_column,
    update_p_column,
    update_w_column,
    update_z_column,
)
