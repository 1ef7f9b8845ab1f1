"""Gaussian and Laplacian pyramids with the 5-tap generating kernel."""

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DimensionMismatchError, FusionError


@dataclass(frozen=True)
class PyramidParams:
    """``n_levels`` is a positive int or ``"auto"``."""

    n_levels: int | str = "auto"
    kernel_a: float = 0.4

    def __post_init__(self):
        if self.n_levels != "auto":
            if isinstance(self.n_levels, bool) or not isinstance(self.n_levels, int):
                raise ConfigError(f"n_levels must be an int or 'auto', got {self.n_levels!r}")
            if self.n_levels < 1:
                raise ConfigError(f"n_levels must be >= 1, got {self.n_levels}")

    def resolve(self, shape):
        """Concrete level count for a plane of ``shape``."""
        if self.n_levels == "auto":
            return auto_levels(shape)
        return self.n_levels


def auto_levels(shape):
    return max(1, int(math.floor(math.log2(min(shape[:2])))) - 2)


def max_levels(shape):
    """Largest level count for which every reduce sees a plane of at least 2x2."""
    h, w = shape[:2]
    count = 1
    while h >= 2 and w >= 2:
        h, w = (h + 1) // 2, (w + 1) // 2
        count += 1
    return count


def kernel(a=0.4):
    return np.array([0.25 - a / 2, 0.25, a, 0.25, 0.25 - a / 2])


def _filter_axis(x, taps, axis, step=1):
    """Correlate ``x`` with 5 ``taps`` along ``axis`` (mirror borders), keep every ``step``-th."""
    n = x.shape[axis]
    pad = [(0, 0)] * x.ndim
    pad[axis] = (2, 2)
    xp = np.pad(x, pad, mode="reflect")
    idx = [slice(None)] * x.ndim
    out = None
    for t, c in enumerate(taps):
        idx[axis] = slice(t, t + n, step)
        term = c * xp[tuple(idx)]
        out = term if out is None else out + term
    return out


def reduce(plane, kernel_a=0.4):
    """Blur separably and keep even rows/columns; output is ``ceil(h/2) x ceil(w/2)``."""
    plane = np.asarray(plane, dtype=np.float64)
    if plane.shape[0] < 2 or plane.shape[1] < 2:
        raise FusionError(f"cannot reduce a {plane.shape[0]}x{plane.shape[1]} plane")
    taps = kernel(kernel_a)
    out = _filter_axis(plane, taps, 0, step=2)
    return _filter_axis(out, taps, 1, step=2)


def expand(plane, target_h, target_w, kernel_a=0.4):
    """Zero-insert up to ``target_h x target_w`` and interpolate with the doubled kernel."""
    plane = np.asarray(plane, dtype=np.float64)
    h, w = plane.shape[:2]
    if (target_h + 1) // 2 != h or (target_w + 1) // 2 != w or target_h < 1 or target_w < 1:
        raise DimensionMismatchError(
            f"{target_h}x{target_w} does not reduce to {h}x{w}")
    up = np.zeros((target_h, target_w) + plane.shape[2:])
    up[::2, ::2] = plane
    taps = 2.0 * kernel(kernel_a)
    return _filter_axis(_filter_axis(up, taps, 0), taps, 1)


def _check_levels(shape, n_levels):
    limit = max_levels(shape)
    if n_levels > limit:
        raise ConfigError(
            f"{n_levels} levels requested for a {shape[0]}x{shape[1]} plane; "
            f"at most {limit} are feasible")


def build_gaussian(plane, params=None):
    """Level 0 is the input; each further level is ``reduce`` of the previous."""
    params = params or PyramidParams()
    plane = np.asarray(plane, dtype=np.float64)
    n = params.resolve(plane.shape)
    _check_levels(plane.shape, n)
    levels = [plane]
    for _ in range(n - 1):
        levels.append(reduce(levels[-1], params.kernel_a))
    return levels


def build_laplacian(plane, params=None):
    """Band-pass levels ``G_l - expand(G_{l+1})`` topped by the low-pass residual."""
    params = params or PyramidParams()
    gauss = build_gaussian(plane, params)
    bands = []
    for fine, coarse in zip(gauss[:-1], gauss[1:]):
        bands.append(fine - expand(coarse, fine.shape[0], fine.shape[1], params.kernel_a))
    bands.append(gauss[-1])
    return bands


def fuse_pyramids(laplacians, weight_gaussians):
    """Per-level sum over the stack of ``L_k * W_k``."""
    if len(laplacians) != len(weight_gaussians) or not laplacians:
        raise DimensionMismatchError("need matching, non-empty lists of pyramids")
    depth = len(laplacians[0])
    for pyr in list(laplacians) + list(weight_gaussians):
        if len(pyr) != depth:
            raise DimensionMismatchError("pyramids differ in level count")
    fused = []
    for lvl in range(depth):
        shape = laplacians[0][lvl].shape
        acc = np.zeros(shape)
        for lap, wgt in zip(laplacians, weight_gaussians):
            band, weight = lap[lvl], wgt[lvl]
            if band.shape != shape or weight.shape != shape[:2]:
                raise DimensionMismatchError(f"shape mismatch at level {lvl}")
            if band.ndim == 3:
                weight = weight[..., None]
            acc += band * weight
        fused.append(acc)
    return fused


def collapse(pyramid, kernel_a=0.4):
    """Rebuild the finest level by expanding upward from the residual."""
    acc = np.asarray(pyramid[-1], dtype=np.float64)
    for band in reversed(pyramid[:-1]):
        acc = expand(acc, band.shape[0], band.shape[1], kernel_a) + band
    return acc
