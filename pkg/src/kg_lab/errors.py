"""Error types shared across the package.

Everything derives from ValueError so callers that only care about
"bad input" can catch one class; the CLI maps the subtypes to exit codes.
"""


class BandwidthError(ValueError):
    """Spectral content violates the grid's bandwidth or support rules.

    Raised when the Nyquist mode carries non-negligible amplitude, when a
    packet does not fit the periodic box, or when a requested mode sits
    outside the resolvable lattice.
    """


class BranchError(ValueError):
    """The negative-frequency branch was passed where physics requires
    the positive one."""


class KindError(ValueError):
    """A state's dispersion kind does not match the requested operation."""


class ConfigError(ValueError):
    """A scenario configuration failed schema or invariant validation."""
