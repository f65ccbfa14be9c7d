"""Sampling on the flat torus [-pi, pi)^2 by a precomputed transport map."""

from ._core import (
    DegenerateInput,
    Error,
    FormatError,
    InvalidInput,
    NumericalError,
    TransportMap,
    build_transport_map,
    chi_square_survival,
    chi_squared_gof,
    density,
    draw_uniform,
    expected_bin_mass,
    gradient,
    histogram,
    load_map,
    rejection_sample_oracle,
    solve_poisson,
    theta,
    two_sample_chi_squared,
)

__all__ = [
    "DegenerateInput",
    "Error",
    "FormatError",
    "InvalidInput",
    "NumericalError",
    "TransportMap",
    "build_transport_map",
    "chi_square_survival",
    "chi_squared_gof",
    "density",
    "draw_uniform",
    "expected_bin_mass",
    "gradient",
    "histogram",
    "load_map",
    "rejection_sample_oracle",
    "solve_poisson",
    "theta",
    "two_sample_chi_squared",
]
