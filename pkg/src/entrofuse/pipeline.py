"""End-to-end exposure fusion and the arithmetic-mean baseline."""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .clahe import ClaheParams, apply_clahe
from .entropy import local_entropy, normalize_weights
from .errors import ConfigError
from .imagecore import as_stack, luminance
from .pyramid import PyramidParams, build_gaussian, build_laplacian, collapse, fuse_pyramids

COLOR_MODES = ("grayscale", "shared-weight-rgb")


@dataclass(frozen=True)
class FusionConfig:
    clahe: ClaheParams = field(default_factory=ClaheParams)
    window: int = 3
    pyramid: PyramidParams = field(default_factory=PyramidParams)
    color_mode: str = "shared-weight-rgb"
    clamp_output: bool = True
    enable_clahe: bool = True

    def __post_init__(self):
        if self.window < 3 or self.window % 2 == 0:
            raise ConfigError(f"window must be odd and >= 3, got {self.window}")
        if self.color_mode not in COLOR_MODES:
            raise ConfigError(
                f"color_mode must be one of {', '.join(COLOR_MODES)}, got {self.color_mode!r}")


def _map(fn, items, workers):
    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(fn, items))
    return [fn(item) for item in items]


def preprocess(image, config):
    """CLAHE one exposure (each channel independently for RGB)."""
    if not config.enable_clahe:
        return np.asarray(image, dtype=np.float64)
    if image.ndim == 2:
        return apply_clahe(image, config.clahe)
    return np.stack([apply_clahe(image[..., c], config.clahe) for c in range(3)], axis=-1)


def entropy_weights(images, config):
    """Normalized local-entropy weights, ``(N, H, W)``, from preprocessed exposures."""
    entropies = [local_entropy(im if im.ndim == 2 else luminance(im), config.window)
                 for im in images]
    return normalize_weights(entropies)


def fuse_exposures(stack, config=None, workers=1, return_weights=False):
    """Fuse an aligned exposure stack into one image.

    Parameters
    ----------
    stack : sequence of array_like
        ``N`` planes ``(H, W)`` or RGB images ``(H, W, 3)`` in ``[0, 1]``.
    config : FusionConfig, optional
    workers : int
        Threads used for the per-exposure stages. The result does not
        depend on this value.
    return_weights : bool
        Also return the ``(N, H, W)`` weight stack.

    Returns
    -------
    fused : ndarray
        Same shape as one stack member. RGB input in ``grayscale`` mode is
        reduced to its luminance first and yields a plane.
    """
    config = config or FusionConfig()
    images = as_stack(stack)
    if images.ndim == 4 and config.color_mode == "grayscale":
        images = luminance(images)

    pre = _map(lambda im: preprocess(im, config), list(images), workers)
    weights = entropy_weights(pre, config)

    shape = images.shape[1:3]
    n_levels = config.pyramid.resolve(shape)
    params = PyramidParams(n_levels, config.pyramid.kernel_a)
    laps = _map(lambda im: build_laplacian(im, params), pre, workers)
    gauss = _map(lambda w: build_gaussian(w, params), list(weights), workers)

    fused = collapse(fuse_pyramids(laps, gauss), params.kernel_a)
    if config.clamp_output:
        fused = np.clip(fused, 0.0, 1.0)
    if return_weights:
        return fused, weights
    return fused


def mean_fusion(stack):
    """Per-pixel arithmetic mean of the stack (equal weights, zero offset)."""
    return as_stack(stack).mean(axis=0)
