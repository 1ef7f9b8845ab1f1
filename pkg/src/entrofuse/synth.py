"""Synthetic radiance fields and a gamma camera for bracketed stacks."""

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError
from .imagecore import normalize_from_8bit, quantize_to_levels

SCENES = ("horizontal-gradient", "gaussian-blobs", "checker-hdr")


@dataclass(frozen=True)
class SceneSpec:
    kind: str = "horizontal-gradient"
    width: int = 256
    height: int = 256
    dynamic_range: float = 1000.0

    def __post_init__(self):
        if self.kind not in SCENES:
            raise ConfigError(f"unknown scene {self.kind!r}; choose from {', '.join(SCENES)}")
        if self.width < 16 or self.height < 16:
            raise ConfigError("scene dimensions must be at least 16x16")
        if not self.dynamic_range > 1.0:
            raise ConfigError("dynamic_range must exceed 1")


@dataclass(frozen=True)
class ExposureSpec:
    exposure_time: float
    gamma: float = 2.2

    def __post_init__(self):
        if not self.exposure_time > 0:
            raise ConfigError("exposure_time must be positive")
        if not self.gamma > 0:
            raise ConfigError("gamma must be positive")


def _log_span(u, dynamic_range):
    """Map ``u`` in [0, 1] log-linearly onto [1, dynamic_range]."""
    return np.exp(np.clip(u, 0.0, 1.0) * np.log(dynamic_range))


def synth_radiance(spec):
    """Deterministic positive radiance field of shape ``(height, width)``."""
    h, w = spec.height, spec.width
    yy, xx = np.mgrid[0:h, 0:w].astype(np.float64)
    if spec.kind == "horizontal-gradient":
        u = np.broadcast_to(np.arange(w) / (w - 1), (h, w))
        return _log_span(u, spec.dynamic_range).copy()
    if spec.kind == "gaussian-blobs":
        # bright blobs on a dim textured floor
        centers = [(0.3, 0.3, 0.12), (0.7, 0.6, 0.18), (0.4, 0.8, 0.08)]
        u = np.zeros((h, w))
        for cy, cx, s in centers:
            d2 = ((yy / (h - 1) - cy) ** 2 + (xx / (w - 1) - cx) ** 2) / (2 * s * s)
            u = np.maximum(u, np.exp(-d2))
        u = 0.9 * u + 0.1 * (0.5 + 0.5 * np.sin(xx * 0.7) * np.sin(yy * 0.7))
        return _log_span(u, spec.dynamic_range)
    # checker-hdr: cells stepping through the range, each with fine texture
    cells = 4
    ci = np.minimum((yy * cells // h), cells - 1)
    cj = np.minimum((xx * cells // w), cells - 1)
    level = (ci * cells + cj) / (cells * cells - 1)
    order = np.where((ci + cj) % 2 == 0, level, 1.0 - level)
    texture = 0.03 * np.sin(xx * 0.9) * np.cos(yy * 1.3)
    return _log_span(order * 0.94 + 0.03 + texture, spec.dynamic_range)


def expose(radiance, spec):
    """Gamma camera: ``clamp((radiance * t) ** (1 / gamma), 0, 1)`` quantized to 8 bits."""
    e = np.asarray(radiance, dtype=np.float64) * spec.exposure_time
    if np.any(e < 0):
        raise ConfigError("radiance must be non-negative")
    signal = np.clip(e ** (1.0 / spec.gamma), 0.0, 1.0)
    return normalize_from_8bit(quantize_to_levels(signal, 256))


def synth_stack(scene, times, gamma=2.2):
    radiance = synth_radiance(scene)
    return [expose(radiance, ExposureSpec(t, gamma)) for t in times]
