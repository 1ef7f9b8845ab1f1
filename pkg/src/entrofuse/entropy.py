"""Local Shannon entropy and entropy-normalized weight maps."""

import numpy as np

from .errors import ConfigError, DimensionMismatchError, FusionError
from .imagecore import quantize_to_levels

DEGENERATE_SUM = 1e-12


def local_entropy(plane, window=3, levels=256):
    """Shannon entropy (bits) of the 256-bin histogram in a sliding window.

    Borders use replicate padding so every window holds ``window**2``
    samples and the result stays within ``[0, log2(window**2)]``.

    Only the multiset of bin counts matters. For a window of ``n`` samples
    with per-sample bin multiplicities ``m_s``,
    ``H = -(1/n) * sum_s log2(m_s / n)``, which is evaluated directly from
    pairwise equality of the shifted bin planes.
    """
    if window < 3 or window % 2 == 0:
        raise ConfigError(f"window must be odd and >= 3, got {window}")
    plane = np.asarray(plane, dtype=np.float64)
    if plane.ndim != 2:
        raise FusionError(f"expected a 2-D plane, got shape {plane.shape}")
    bins = quantize_to_levels(plane, levels).astype(np.int16 if levels <= 32768 else np.int64)
    r = window // 2
    padded = np.pad(bins, r, mode="edge")
    h, w = plane.shape
    shifts = [padded[dy:dy + h, dx:dx + w] for dy in range(window) for dx in range(window)]

    n = len(shifts)
    counts = np.empty((h, w), dtype=np.int32)
    acc = np.zeros((h, w))
    for a in range(n):
        counts.fill(0)
        for b in range(n):
            counts += shifts[a] == shifts[b]
        acc += np.log2(counts)
    # -(1/n) sum log2(m/n) == log2(n) - (1/n) sum log2(m)
    return np.maximum(np.log2(n) - acc / n, 0.0)


def normalize_weights(entropies):
    """Divide each entropy map by the per-pixel sum across the stack.

    Pixels whose entropy sum is below ``1e-12`` get uniform weights ``1/N``.
    Returns an ``(N, H, W)`` array.
    """
    maps = [np.asarray(m, dtype=np.float64) for m in entropies]
    if not maps:
        raise FusionError("need at least one entropy map")
    shape = maps[0].shape
    for k, m in enumerate(maps):
        if m.shape != shape:
            raise DimensionMismatchError(f"entropy map {k} has shape {m.shape}, expected {shape}")
    stack = np.stack(maps)
    if np.any(stack < 0):
        raise FusionError("entropy maps must be non-negative")
    total = stack.sum(axis=0)
    flat = total < DEGENERATE_SUM
    safe = np.where(flat, 1.0, total)
    weights = stack / safe
    weights[:, flat] = 1.0 / len(maps)
    return weights
