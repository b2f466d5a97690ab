"""Result wrapper shared by the verification battery and the CLI."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Generic, Optional, TypeVar

T = TypeVar("T")


@dataclass
class OperationResult(Generic[T]):
    """Outcome of one check or command; failures are values, not exceptions."""

    success: bool
    data: Optional[T] = None
    error: Optional[str] = None


__all__ = ["OperationResult"]
