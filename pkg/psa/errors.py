# psa/errors.py
"""Exception hierarchy shared by the library and the CLI."""


class PsaError(Exception):
    """Base class for every error raised by the psa package."""


class InputError(PsaError, ValueError):
    """Invalid user input: bad shapes, non-finite entries, malformed files."""


class KernelError(PsaError, RuntimeError):
    """A dense decomposition failed or produced unusable output."""


class AmbiguousMatchError(KernelError):
    """A perturbed eigenvalue could not be matched unambiguously to its origin."""


class DegenerateError(PsaError, ValueError):
    """Vanishing weight function or a multiple smallest singular value."""


class OracleError(PsaError, RuntimeError):
    """A reference computation found no boundary intersection."""
