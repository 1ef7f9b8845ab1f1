"""Contrast limited adaptive histogram equalization with a Rayleigh target.

Each tile of a regular grid gets its own clipped histogram and Rayleigh
transfer curve; pixels blend the curves of the four surrounding tile
centers bilinearly.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError
from .imagecore import check_plane, quantize_to_levels

CDF_CEILING = 1.0 - 1e-6


@dataclass(frozen=True)
class ClaheParams:
    """Tunables for :func:`apply_clahe`.

    ``clip_limit`` is a multiple of the uniform bin height
    ``total / n_bins``; ``math.inf`` disables clipping.
    """

    tile_rows: int = 8
    tile_cols: int = 8
    clip_limit: float = 4.0
    alpha: float = 0.4
    y_min: float = 0.0
    n_bins: int = 256

    def __post_init__(self):
        if self.tile_rows < 1 or self.tile_cols < 1:
            raise ConfigError("tile grid must be at least 1x1")
        if not self.clip_limit >= 1.0:
            raise ConfigError(f"clip_limit must be >= 1, got {self.clip_limit}")
        if not self.alpha > 0.0:
            raise ConfigError(f"alpha must be positive, got {self.alpha}")
        if not 0.0 <= self.y_min < 1.0:
            raise ConfigError(f"y_min must lie in [0, 1), got {self.y_min}")
        if self.n_bins < 2:
            raise ConfigError(f"n_bins must be >= 2, got {self.n_bins}")


def tile_histogram(plane, region, n_bins=256):
    """Histogram of bin codes inside ``region = (row0, row1, col0, col1)``.

    Bounds are half-open. Bin assignment follows :func:`quantize_to_levels`.
    """
    r0, r1, c0, c1 = region
    h, w = np.shape(plane)
    if not (0 <= r0 < r1 <= h and 0 <= c0 < c1 <= w):
        raise ConfigError(f"tile region {region} is empty or outside a {h}x{w} plane")
    bins = quantize_to_levels(np.asarray(plane)[r0:r1, c0:c1], n_bins)
    return np.bincount(bins.ravel(), minlength=n_bins).astype(np.int64)


def clip_histogram(hist, clip_limit):
    """Cap bins at ``ceil(clip_limit * total / n_bins)`` and hand the excess back.

    The excess is spread evenly over all bins in a single pass; the
    remainder of that division goes one count per bin starting at bin 0.
    The total count is preserved exactly. Bins may end slightly above the
    cap after redistribution.
    """
    if not clip_limit >= 1.0:
        raise ConfigError(f"clip_limit must be >= 1, got {clip_limit}")
    hist = np.asarray(hist, dtype=np.int64)
    total = int(hist.sum())
    n_bins = hist.size
    if math.isinf(clip_limit):
        return hist.copy()
    cap = math.ceil(clip_limit * total / n_bins)
    if cap >= total or hist.max(initial=0) <= cap:
        return hist.copy()
    excess = int(np.maximum(hist - cap, 0).sum())
    out = np.minimum(hist, cap)
    share, residual = divmod(excess, n_bins)
    out += share
    out[:residual] += 1
    return out


def rayleigh_transfer(cdf, alpha, y_min=0.0):
    """Unscaled Rayleigh mapping ``y_min + sqrt(2 alpha^2 ln(1 / (1 - cdf)))``.

    ``cdf`` is clamped to ``1 - 1e-6`` so the top bin stays finite.
    """
    cdf = np.minimum(np.asarray(cdf, dtype=np.float64), CDF_CEILING)
    # -log1p(-c) == ln(1 / (1 - c)), accurate for small c
    return y_min + np.sqrt(2.0 * alpha * alpha * -np.log1p(-cdf))


def rayleigh_lut(hist, params):
    """Per-bin output intensities for one (already clipped) histogram.

    The raw Rayleigh curve is rescaled affinely onto ``[y_min, 1]``; a flat
    curve maps everything to the midpoint ``(y_min + 1) / 2``.
    """
    hist = np.asarray(hist, dtype=np.float64)
    total = hist.sum()
    if total <= 0:
        raise ConfigError("cannot build a mapping from an empty histogram")
    cdf = np.cumsum(hist) / total
    raw = rayleigh_transfer(cdf, params.alpha, params.y_min)
    lo, hi = raw.min(), raw.max()
    if hi == lo:
        return np.full(hist.size, 0.5 * (params.y_min + 1.0))
    lut = params.y_min + (raw - lo) * ((1.0 - params.y_min) / (hi - lo))
    return np.clip(lut, params.y_min, 1.0)


def global_rayleigh_equalize(plane, params):
    """Equalize against one whole-image clipped histogram, no tiling."""
    bins = quantize_to_levels(plane, params.n_bins)
    hist = np.bincount(bins.ravel(), minlength=params.n_bins)
    lut = rayleigh_lut(clip_histogram(hist, params.clip_limit), params)
    return lut[bins]


def _tile_edges(length, n_tiles):
    return (np.arange(n_tiles + 1) * length) // n_tiles


def _interp_coords(length, edges):
    """Fractional tile coordinate for every pixel along one axis.

    Returns lower tile index and the weight of the upper neighbour.
    Outside the outermost centers the coordinate saturates, which is the
    same as replicating the border tiles.
    """
    n = edges.size - 1
    centers = (edges[:-1] + edges[1:] - 1) / 2.0
    if n == 1:
        return np.zeros(length, dtype=np.intp), np.zeros(length)
    t = np.interp(np.arange(length, dtype=np.float64), centers, np.arange(n, dtype=np.float64))
    lower = np.minimum(np.floor(t).astype(np.intp), n - 2)
    return lower, t - lower


def tile_luts(plane, params):
    """Stack of mappings, shape ``(tile_rows, tile_cols, n_bins)``."""
    plane = check_plane(plane)
    h, w = plane.shape
    if h < params.tile_rows or w < params.tile_cols:
        raise ConfigError(
            f"a {h}x{w} plane cannot be split into a "
            f"{params.tile_rows}x{params.tile_cols} tile grid")
    redges = _tile_edges(h, params.tile_rows)
    cedges = _tile_edges(w, params.tile_cols)
    luts = np.empty((params.tile_rows, params.tile_cols, params.n_bins))
    for i in range(params.tile_rows):
        for j in range(params.tile_cols):
            hist = tile_histogram(plane, (redges[i], redges[i + 1], cedges[j], cedges[j + 1]),
                                  params.n_bins)
            luts[i, j] = rayleigh_lut(clip_histogram(hist, params.clip_limit), params)
    return luts


def apply_clahe(plane, params=None):
    """Rayleigh CLAHE of a single plane; output lies in ``[y_min, 1]``."""
    params = params or ClaheParams()
    plane = check_plane(plane)
    h, w = plane.shape
    luts = tile_luts(plane, params)
    bins = quantize_to_levels(plane, params.n_bins)

    r0, fy = _interp_coords(h, _tile_edges(h, params.tile_rows))
    c0, fx = _interp_coords(w, _tile_edges(w, params.tile_cols))
    r1 = np.minimum(r0 + 1, params.tile_rows - 1)
    c1 = np.minimum(c0 + 1, params.tile_cols - 1)

    R0, R1 = r0[:, None], r1[:, None]
    C0, C1 = c0[None, :], c1[None, :]
    fy, fx = fy[:, None], fx[None, :]
    # lerp form is exact when neighbouring mappings agree
    top = luts[R0, C0, bins]
    top = top + fx * (luts[R0, C1, bins] - top)
    bottom = luts[R1, C0, bins]
    bottom = bottom + fx * (luts[R1, C1, bins] - bottom)
    out = top + fy * (bottom - top)
    return np.clip(out, params.y_min, 1.0)
