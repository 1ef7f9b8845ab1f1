"""Binary Netpbm (P5/P6, maxval 255) codec plus optional 8-bit PNG via Pillow."""

import os

import numpy as np

from .errors import FusionError, MaxvalError, TruncatedFileError, UnsupportedFormatError
from .imagecore import normalize_from_8bit, quantize_to_levels

PNG_SIGNATURE = b"\x89PNG\r\n\x1a\n"
_WHITESPACE = b" \t\r\n\v\f"


def _header_tokens(data, count):
    """Read ``count`` whitespace-separated header tokens, skipping ``#`` comments.

    Returns the tokens and the offset of the single whitespace byte that
    ends the last one.
    """
    tokens = []
    pos = 0
    n = len(data)
    while len(tokens) < count:
        while pos < n and data[pos] in _WHITESPACE:
            pos += 1
        if pos < n and data[pos] == ord("#"):
            while pos < n and data[pos] not in b"\r\n":
                pos += 1
            continue
        start = pos
        while pos < n and data[pos] not in _WHITESPACE and data[pos] != ord("#"):
            pos += 1
        if start == pos:
            raise TruncatedFileError("Netpbm header ended early")
        tokens.append(data[start:pos])
    if pos >= n:
        raise TruncatedFileError("Netpbm header is not followed by pixel data")
    return tokens, pos


def decode_netpbm(data):
    """Decode P5/P6 bytes into a normalized plane or ``(H, W, 3)`` array."""
    magic = data[:2]
    if magic not in (b"P5", b"P6"):
        raise UnsupportedFormatError(f"unsupported Netpbm magic {magic!r}")
    tokens, pos = _header_tokens(data, 4)
    try:
        width, height, maxval = (int(t) for t in tokens[1:])
    except ValueError:
        raise UnsupportedFormatError("malformed Netpbm header") from None
    if width < 1 or height < 1:
        raise UnsupportedFormatError(f"bad Netpbm dimensions {width}x{height}")
    if maxval != 255:
        raise MaxvalError(f"only maxval 255 is supported, got {maxval}")
    channels = 3 if magic == b"P6" else 1
    expected = width * height * channels
    raster = data[pos + 1:pos + 1 + expected]
    if len(raster) < expected:
        raise TruncatedFileError(f"expected {expected} pixel bytes, found {len(raster)}")
    codes = np.frombuffer(raster, dtype=np.uint8)
    shape = (height, width, 3) if channels == 3 else (height, width)
    return normalize_from_8bit(codes.reshape(shape))


def encode_netpbm(image):
    """Encode a normalized plane as P5 or an RGB array as P6."""
    image = _checked(image)
    codes = quantize_to_levels(image, 256).astype(np.uint8)
    magic = b"P6" if image.ndim == 3 else b"P5"
    h, w = image.shape[:2]
    return magic + f"\n{w} {h}\n255\n".encode("ascii") + codes.tobytes()


def _checked(image):
    image = np.asarray(image, dtype=np.float64)
    if image.ndim not in (2, 3) or (image.ndim == 3 and image.shape[2] != 3):
        raise FusionError(f"cannot encode an array of shape {image.shape}")
    if not np.all(np.isfinite(image)) or image.min() < 0.0 or image.max() > 1.0:
        raise FusionError("image samples must be finite and within [0, 1]")
    return image


def _read_png(path):
    try:
        from PIL import Image
    except ImportError:
        raise UnsupportedFormatError("PNG support needs Pillow (pip install artifact[png])") from None
    with Image.open(path) as im:
        if im.mode not in ("1", "L", "P", "RGB", "RGBA", "LA"):
            raise UnsupportedFormatError(f"only 8-bit PNG is supported, got mode {im.mode}")
        rgb = np.asarray(im.convert("RGB"))
    return normalize_from_8bit(rgb)


def read_image(path):
    """Load a PGM (plane), PPM or PNG (RGB) file normalized to ``[0, 1]``."""
    with open(path, "rb") as fh:
        data = fh.read()
    if data.startswith(PNG_SIGNATURE):
        return _read_png(path)
    return decode_netpbm(data)


def write_image(image, path):
    """Write by extension: ``.pgm``, ``.ppm`` or ``.png``.

    A plane written as ``.ppm`` is replicated into three channels. Samples
    are validated before the file is opened.
    """
    image = _checked(image)
    ext = os.path.splitext(str(path))[1].lower()
    if ext == ".ppm" and image.ndim == 2:
        image = np.repeat(image[..., None], 3, axis=2)
    if ext == ".pgm" and image.ndim == 3:
        raise FusionError("an RGB image cannot be written as PGM")
    if ext in (".pgm", ".ppm"):
        payload = encode_netpbm(image)
        with open(path, "wb") as fh:
            fh.write(payload)
    elif ext == ".png":
        try:
            from PIL import Image
        except ImportError:
            raise UnsupportedFormatError("PNG support needs Pillow") from None
        codes = quantize_to_levels(image, 256).astype(np.uint8)
        Image.fromarray(codes).save(path, format="PNG")
    else:
        raise UnsupportedFormatError(f"unsupported output extension {ext!r}")
