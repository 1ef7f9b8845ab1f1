"""Exception hierarchy shared by every stage."""


class FusionError(ValueError):
    """Base class for rejected inputs and configurations."""


class ConfigError(FusionError):
    """A parameter lies outside its allowed domain."""


class DimensionMismatchError(FusionError):
    """Images or pyramids that must share a shape do not."""


class ImageFormatError(FusionError):
    """An image file could not be decoded."""


class UnsupportedFormatError(ImageFormatError):
    pass


class MaxvalError(ImageFormatError):
    pass


class TruncatedFileError(ImageFormatError):
    pass
