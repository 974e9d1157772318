"""Basis-function ILC: lifted models, NOILC gains and the actor-critic learner."""

from ._core import (
    __version__,
    ActorState,
    BasisMatrix,
    ExperimentConfig,
    LiftedSystem,
    NoilcGains,
    ReferenceProfile,
    SegmentSpec,
    TransferFunction,
    Weighting,
    build_basis,
    closed_loop_maps,
    convergence_margin,
    identity_basis,
    load_config,
    log_policy_gradient,
    noilc_update,
    parse_config,
    policy_mean,
    preset_text,
    run_experiment,
    simulate_trial,
    spectral_norm,
    synthesize_gains,
    third_order_reference,
    trial_cost,
)

__all__ = [name for name in dir() if not name.startswith("_")]
