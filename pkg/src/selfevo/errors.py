"""Exception types shared across the package."""

from __future__ import annotations


class SelfEvoError(Exception):
    """Base class for all package errors."""


class ValidationError(SelfEvoError, ValueError):
    """Input failed validation; `fields` lists (field, problem) pairs."""

    def __init__(self, fields: list[tuple[str, str]] | None = None, message: str | None = None):
        self.fields = list(fields or [])
        if message is None:
            message = "; ".join(f"{name}: {problem}" for name, problem in self.fields) or "invalid input"
        super().__init__(message)


class ConflictError(SelfEvoError):
    """An identifier that must be fresh already exists."""


class NotFoundError(SelfEvoError):
    """A referenced entity does not exist."""


class IntegrityError(SelfEvoError):
    """Stored data does not match its recorded checksum."""


class EnactmentError(SelfEvoError):
    """An element could not be installed or enacted; state is unchanged."""
