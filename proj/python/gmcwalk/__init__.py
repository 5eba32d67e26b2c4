"""Chaos time-changed random walks, their Green's functions and Skorokhod metrics."""

from ._core import (
    CadlagPath,
    Clock,
    ConfigError,
    Error,
    KernelSpec,
    LatticeWindow,
    build_covariance,
    clock_inverse,
    d_j1,
    d_m1,
    experiments,
    green_continuum,
    green_lattice,
    green_stable,
    heat_kernel,
    l1_distance,
    lattice_snap,
    log_remainder,
    osc_v,
    osc_w,
    pcaf_from_density,
    run,
    sample_field,
    simulate_flip,
    simulate_rw,
    simulate_stable,
    stable_density,
    time_change,
)

__all__ = [name for name in dir() if not name.startswith("_")]
