"""Magnitude profiles and embedding-quality measures."""

from ._core import (
    MagnifyError,
    Profile,
    circles,
    continuity,
    convergence_scale,
    distances,
    gaussian_blobs,
    magnitude,
    magnitude_function,
    neighbourhood_loss,
    per_point_deviation,
    planets,
    profile,
    profile_difference,
    rmse,
    spearman,
    swiss_roll,
    trustworthiness,
    weight_difference,
)

__all__ = [
    "MagnifyError",
    "Profile",
    "circles",
    "continuity",
    "convergence_scale",
    "distances",
    "gaussian_blobs",
    "magnitude",
    "magnitude_function",
    "neighbourhood_loss",
    "per_point_deviation",
    "planets",
    "profile",
    "profile_difference",
    "rmse",
    "spearman",
    "swiss_roll",
    "trustworthiness",
    "weight_difference",
]
