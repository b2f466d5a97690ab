from __future__ import annotations

from typing import Optional

from pydantic import BaseModel


class ErrorResponse(BaseModel):
    error_code: str
    message: str
    details: Optional[str] = None
    position: Optional[int] = None


class AppError(Exception):
    """Base class for application errors."""

    error_code: str = "APP_ERROR"

    def __init__(self, message: str, details: Optional[str] = None):
        self.message = message
        self.details = details
        super().__init__(message)

    def to_response(self) -> ErrorResponse:
        return ErrorResponse(
            error_code=self.error_code,
            message=self.message,
            details=self.details,
            position=getattr(self, "position", None),
        )


class InputError(AppError):
    error_code = "INPUT_ERROR"


class ParseError(InputError):
    """Malformed group specification; ``position`` is a 0-based character offset."""

    error_code = "PARSE_ERROR"

    def __init__(self, message: str, position: int, details: Optional[str] = None):
        self.position = position
        super().__init__(f"{message} (at position {position})", details)


class PreconditionError(AppError):
    error_code = "PRECONDITION_FAILED"


class NoWitnessError(PreconditionError):
    error_code = "NO_WITNESS"


class DomainError(AppError):
    """Evaluation left the defined region; a deeper ambient tree is needed."""

    error_code = "DOMAIN_ERROR"


class ResourceError(AppError):
    error_code = "RESOURCE_LIMIT"


class ConstructionError(AppError):
    error_code = "CONSTRUCTION_FAILED"


__all__ = [
    "ErrorResponse",
    "AppError",
    "InputError",
    "ParseError",
    "PreconditionError",
    "NoWitnessError",
    "DomainError",
    "ResourceError",
    "ConstructionError",
]
