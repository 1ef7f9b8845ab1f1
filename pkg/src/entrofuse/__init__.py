"""Exposure fusion driven by Rayleigh CLAHE, local entropy and Laplacian pyramids."""

__version__ = "0.1.0"

from .clahe import ClaheParams, apply_clahe
from .errors import ConfigError, DimensionMismatchError, FusionError, ImageFormatError
from .fileio import read_image, write_image
from .pipeline import FusionConfig, fuse_exposures, mean_fusion
from .pyramid import PyramidParams

__all__ = [
    "ClaheParams", "ConfigError", "DimensionMismatchError", "FusionConfig", "FusionError",
    "ImageFormatError", "PyramidParams", "apply_clahe", "fuse_exposures", "mean_fusion",
    "read_image", "write_image",
]
