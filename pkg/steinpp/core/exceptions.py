"""
Custom exceptions for steinpp.
"""

class SteinppError(Exception):
    """Base exception for all steinpp errors."""
    pass

class ValidationError(SteinppError, ValueError):
    """Exception for invalid parameters or malformed inputs."""
    pass

class ConfigError(SteinppError):
    """Exception for configuration-related errors."""
    pass

class ModelError(SteinppError):
    """Exception for incomplete model descriptions (missing coupling, moment or sampler)."""
    pass

class SolverError(SteinppError):
    """Exception for renewal solver failures."""
    pass

class FiniteMeanError(ValidationError):
    """Exception for inter-arrival laws whose mean cannot be resolved on the grid."""
    pass

class VerificationError(SteinppError):
    """Exception for failed verification runs."""
    pass
