class NadsError(Exception):
    """Base class for errors raised by this package."""


class SpaceMismatchError(NadsError, TypeError):
    pass


class UnsupportedOperationError(NadsError):
    pass


class InvalidConjugacyError(NadsError):
    pass


class InvalidModulusError(NadsError):
    pass


class InvalidHyperCertificateError(NadsError):
    pass


class SpecError(NadsError, ValueError):
    """A SegmentSpec (or certificate) violates its structural constraints."""


class ConfigError(NadsError, ValueError):
    def __init__(self, message: str, path: str = "$"):
        super().__init__(f"{path}: {message}")
        self.path = path
