"""Image containers and intensity conversions.

Planes are 2-D ``float64`` arrays with samples in ``[0, 1]``; RGB images
are ``(H, W, 3)`` arrays. Stacks are ordered sequences of either.
"""

import numpy as np

from .errors import ConfigError, DimensionMismatchError, FusionError

LUMA_WEIGHTS = (0.299, 0.587, 0.114)


def normalize_from_8bit(raw):
    """Map integer codes 0..255 onto ``[0, 1]`` as ``code / 255``."""
    codes = np.asarray(raw)
    if codes.size and (codes.min() < 0 or codes.max() > 255):
        raise FusionError("8-bit codes must lie in [0, 255]")
    if not np.issubdtype(codes.dtype, np.integer):
        if not np.all(np.equal(np.floor(codes), codes)):
            raise FusionError("8-bit codes must be integers")
    return codes.astype(np.float64) / 255.0


def quantize_to_levels(plane, levels=256):
    """Bin samples in ``[0, 1]`` into ``levels`` integer codes.

    Uses round-half-up, ``floor(x * (levels - 1) + 0.5)``, so that
    ``quantize_to_levels(normalize_from_8bit(c)) == c`` for every code.
    """
    if levels < 2:
        raise ConfigError(f"levels must be >= 2, got {levels}")
    x = np.asarray(plane, dtype=np.float64)
    bins = np.floor(x * (levels - 1) + 0.5)
    return np.clip(bins, 0, levels - 1).astype(np.intp)


def luminance(rgb):
    """Rec.601 luma of an ``(..., 3)`` RGB array, clamped to ``[0, 1]``."""
    rgb = np.asarray(rgb, dtype=np.float64)
    if rgb.shape[-1] != 3:
        raise DimensionMismatchError(f"expected trailing RGB axis, got shape {rgb.shape}")
    r, g, b = LUMA_WEIGHTS
    y = r * rgb[..., 0] + g * rgb[..., 1] + b * rgb[..., 2]
    return np.clip(y, 0.0, 1.0)


def check_plane(plane, name="plane"):
    """Return ``plane`` as a finite 2-D float array within ``[0, 1]``."""
    arr = np.asarray(plane, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise FusionError(f"{name} must be a non-empty 2-D array, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise FusionError(f"{name} contains non-finite samples")
    if arr.min() < 0.0 or arr.max() > 1.0:
        raise FusionError(f"{name} samples must lie in [0, 1]")
    return arr


def as_stack(images):
    """Validate an exposure stack and return it as one ``(N, H, W[, 3])`` array."""
    images = [np.asarray(im, dtype=np.float64) for im in images]
    if not images:
        raise FusionError("exposure stack is empty")
    first = images[0].shape
    if len(first) not in (2, 3) or (len(first) == 3 and first[2] != 3):
        raise FusionError(f"unsupported image shape {first}")
    for k, im in enumerate(images[1:], start=1):
        if im.shape != first:
            raise DimensionMismatchError(
                f"image {k} has shape {im.shape}, expected {first}")
    stack = np.stack(images)
    if not np.all(np.isfinite(stack)):
        raise FusionError("exposure stack contains non-finite samples")
    if stack.min() < 0.0 or stack.max() > 1.0:
        raise FusionError("exposure stack samples must lie in [0, 1]")
    return stack
