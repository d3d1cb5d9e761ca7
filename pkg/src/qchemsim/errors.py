"""Exception types shared across the package."""

from __future__ import annotations


class DomainError(ValueError):
    """An argument lies outside the domain an operation is defined on."""


class ContainmentError(DomainError):
    """A grid wavepacket leaks to the box boundary."""


class ResourceError(RuntimeError):
    """A dense oracle or enumeration was asked to exceed its size cap."""


class ParseError(ValueError):
    """Malformed input text. ``lineno`` is 1-based, or None for whole-file errors."""

    def __init__(self, message: str, lineno: int | None = None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)
