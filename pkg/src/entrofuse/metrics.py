"""Scalar quality measures for fused images."""

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, FusionError
from .imagecore import quantize_to_levels


@dataclass(frozen=True)
class MetricReport:
    global_entropy: float
    saturation_fraction: float
    average_gradient: float


def global_entropy(plane, levels=256):
    """Shannon entropy in bits of the whole-image histogram."""
    bins = quantize_to_levels(plane, levels)
    if bins.size == 0:
        raise FusionError("empty plane")
    p = np.bincount(bins.ravel(), minlength=levels) / bins.size
    p = p[p > 0]
    return float(max(-(p * np.log2(p)).sum(), 0.0))


def saturation_fraction(plane, low=0.02, high=0.98):
    """Fraction of pixels darker than ``low`` or brighter than ``high``."""
    if not 0.0 <= low < high <= 1.0:
        raise ConfigError(f"need 0 <= low < high <= 1, got low={low}, high={high}")
    x = np.asarray(plane, dtype=np.float64)
    return float(np.mean((x < low) | (x > high)))


def average_gradient(plane):
    """Mean of ``sqrt((dx^2 + dy^2) / 2)`` over pixels with both forward differences."""
    x = np.asarray(plane, dtype=np.float64)
    if x.ndim != 2 or x.shape[0] < 2 or x.shape[1] < 2:
        raise FusionError(f"average_gradient needs a plane of at least 2x2, got {x.shape}")
    dx = x[:-1, 1:] - x[:-1, :-1]
    dy = x[1:, :-1] - x[:-1, :-1]
    return float(np.mean(np.sqrt((dx * dx + dy * dy) / 2.0)))


def report(plane):
    return MetricReport(global_entropy(plane), saturation_fraction(plane), average_gradient(plane))
