class RdsMetricError(Exception):
    """Base class for errors raised by rdsmetric."""


class ConfigError(RdsMetricError, ValueError):
    """Invalid parameters or configuration (CLI exit code 2)."""


class DataError(RdsMetricError, ValueError):
    """Malformed or inconsistent input data (CLI exit code 3)."""


class CostCeilingError(ConfigError):
    """Exact enumeration would exceed the configured cost ceiling."""
