"""Exception types shared across the package."""


class CapkitError(Exception):
    """Base class for all capkit errors."""


class GroupSpecError(CapkitError):
    """A group / subgroup / variety spec string failed to parse."""


class OrderCapExceeded(CapkitError):
    """A construction would exceed the configured maximum group order."""


class NotNormalError(CapkitError):
    """Operation requires a normal subgroup."""


class NotCentralError(CapkitError):
    """Operation requires a central subgroup."""


class EngineUnavailableError(CapkitError):
    """No multiplier engine can handle the requested group."""


class EngineDisagreementError(CapkitError):
    """The bar-resolution and exterior-square engines disagree (hard error)."""
