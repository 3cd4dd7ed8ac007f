"""Exception types shared across the package.

The CLI maps these onto process exit codes; library callers can catch the
plain ValueError / RuntimeError bases instead.
"""


class PreconditionError(ValueError):
    """An operation was called with arguments outside its stated domain."""


class ConfigError(ValueError):
    """A config document or CLI argument set is malformed or inconsistent."""


class QuadratureError(RuntimeError):
    """Panel refinement failed to reach the requested tolerance."""


class ResourceLimitError(RuntimeError):
    """A requested computation exceeds the built-in desk-scale caps."""
