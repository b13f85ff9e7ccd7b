"""Exception taxonomy shared by the library and the CLI.

Each class carries the process exit code the CLI maps it to, so command
wrappers never need a lookup table.
"""

from __future__ import annotations


class AsymkitError(Exception):
    """Base class for all asymkit errors."""

    exit_code = 1


class ValidationError(AsymkitError):
    """Malformed input: bad shapes, non-Hermitian data, unnormalized states."""

    exit_code = 2


class PreconditionError(AsymkitError):
    """Well-formed input outside an operation's domain (e.g. rate below one)."""

    exit_code = 3


class ResourceCapError(AsymkitError):
    """A tensor-power request would exceed the configured dimension cap."""

    exit_code = 4
