"""Exception hierarchy with stable machine-readable error codes.

Every error the engine surfaces carries a short ``code`` string. The HTTP
layer maps these into the ``{"error": {...}}`` envelope and the CLI prints
them; the code strings are part of the wire contract and must not change.
"""

from __future__ import annotations

from typing import Any, Optional


class LitkgError(Exception):
    code = "InternalError"
    http_status = 500

    def __init__(self, message: str, detail: Any = None):
        super().__init__(message)
        self.detail = detail

    @property
    def message(self) -> str:
        return str(self)

    def envelope(self) -> dict:
        err: dict = {"code": self.code, "message": self.message}
        if self.detail is not None:
            err["detail"] = self.detail
        return {"error": err}


# --- identifier / entity errors ------------------------------------------

class MalformedId(LitkgError):
    code = "MalformedId"
    http_status = 422


class EmptyIdentifier(LitkgError):
    code = "EmptyIdentifier"
    http_status = 422


class UnknownEntity(LitkgError):
    code = "UnknownEntity"
    http_status = 404


# --- graph store errors ----------------------------------------------------

class UnknownSubtype(LitkgError):
    code = "UnknownSubtype"
    http_status = 422


class EmptyProvenance(LitkgError):
    code = "EmptyProvenance"
    http_status = 422


class UnknownEdge(LitkgError):
    code = "UnknownEdge"
    http_status = 404


class FrozenSnapshot(LitkgError):
    code = "FrozenSnapshot"
    http_status = 500


# --- ingestion errors -------------------------------------------------------

class SchemaError(LitkgError):
    code = "SchemaError"
    http_status = 422


class SpanOutOfRange(LitkgError):
    code = "SpanOutOfRange"
    http_status = 422


class NonDenseSentenceIndex(LitkgError):
    code = "NonDenseSentenceIndex"
    http_status = 422


class DuplicatePaper(LitkgError):
    code = "DuplicatePaper"
    http_status = 409


class MalformedRow(LitkgError):
    code = "MalformedRow"
    http_status = 422

    def __init__(self, message: str, line: Optional[int] = None):
        super().__init__(message, detail={"line": line} if line is not None else None)
        self.line = line


class OverlappingLists(LitkgError):
    code = "OverlappingLists"
    http_status = 422


# --- query errors ------------------------------------------------------------

class InvalidQuery(LitkgError):
    code = "InvalidQuery"
    http_status = 422


class NoPathFound(LitkgError):
    code = "NoPathFound"
    http_status = 404


class UnknownSentence(LitkgError):
    code = "UnknownSentence"
    http_status = 404


class EmptyQuery(LitkgError):
    code = "EmptyQuery"
    http_status = 422


class UnknownPlaceholder(LitkgError):
    code = "UnknownPlaceholder"
    http_status = 422


class MissingVector(LitkgError):
    code = "MissingVector"
    http_status = 422


# --- facet / export / config errors ------------------------------------------

class UnknownFacet(LitkgError):
    code = "UnknownFacet"
    http_status = 422


class UnknownFormat(LitkgError):
    code = "UnknownFormat"
    http_status = 422


class ConfigError(LitkgError):
    code = "ConfigError"
    http_status = 422
