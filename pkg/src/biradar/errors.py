"""Exception types shared across the package."""


class ConfigError(ValueError):
    """Invalid configuration: bad key, bad value, or violated invariant."""


class DataError(ValueError):
    """Malformed or inconsistent input data (scene, frames, CSV records)."""
