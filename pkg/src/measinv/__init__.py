"""Inversion in convolution algebras of atomic measures on abelian groups."""

__version__ = "0.1.0"

from .groups import GroupSpec, parse_group
from .measures import DiscreteMeasure, convolve, involute, translate, tv_norm
from .spectra import transform, transform_grid, spectral_min
from .inversion import dense_invert, neumann_invert, nikolski_invert

__all__ = [
    "GroupSpec", "parse_group", "DiscreteMeasure", "convolve", "involute",
    "translate", "tv_norm", "transform", "transform_grid", "spectral_min",
    "dense_invert", "neumann_invert", "nikolski_invert",
]
