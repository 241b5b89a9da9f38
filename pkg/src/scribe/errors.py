"""Exception types and diagnostics shared across the scribe pipeline."""

from __future__ import annotations

from dataclasses import dataclass


class ScribeError(Exception):
    """Base class for all scribe failures."""


class ConfigError(ScribeError):
    """Invalid configuration: bad scribe.toml, missing template, unindexed tree."""


class TemplateError(ScribeError):
    """Chat template failed to load or validate."""


class PayloadCollisionError(ScribeError):
    """A prompt payload contains a closing tag literal; assembly is refused."""


class BackendError(ScribeError):
    """A completion backend failed (transport, status, or malformed body)."""


class ExtractionError(ScribeError):
    """The model response carried no <csource> block; raw text kept for salvage."""

    def __init__(self, message: str, raw_response: str = ""):
        super().__init__(message)
        self.raw_response = raw_response


class OutputExistsError(ScribeError):
    """Refusing to overwrite an existing output file without --force."""


@dataclass
class Diagnostic:
    """One reportable problem found while scanning or indexing."""

    severity: str  # "error" or "warning"
    path: str
    line: int | None
    message: str

    def __str__(self) -> str:
        where = f"{self.path}:{self.line}" if self.line is not None else self.path
        return f"{self.severity}: {where}: {self.message}"
