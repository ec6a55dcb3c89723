"""Link-level simulation of pattern-reconfigurable antenna arrays under
directional jamming: pattern-bank synthesis, sparse spectral storage,
arrival-direction estimation from per-pattern snapshots, and pattern /
combiner / beamformer link design."""

from ._core import (
    build_bank,
    compress_reconstruct,
    estimate_controller,
    jammer_angle,
    rayleigh_max,
    run_montecarlo,
    run_trial,
    steering_vector,
    water_filling,
)

__all__ = [
    "build_bank",
    "compress_reconstruct",
    "estimate_controller",
    "jammer_angle",
    "rayleigh_max",
    "run_montecarlo",
    "run_trial",
    "steering_vector",
    "water_filling",
]
