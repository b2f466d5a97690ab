import hashlib
from typing import Optional

from pydantic import BaseModel, field_validator, model_validator

from config import DEFAULT_BATTERY, DEFAULT_DEPTH, DEFAULT_MARGIN, DEFAULT_SEED


class JobSpec(BaseModel):
    """Everything one CLI invocation needs; two equal specs give identical reports."""

    m_spec: str = "3; (1 2); (1 2 3)"
    n_spec: str = "2; (1 2)"
    depth: int = DEFAULT_DEPTH
    margin: int = DEFAULT_MARGIN
    seed: int = DEFAULT_SEED
    battery: int = DEFAULT_BATTERY
    out: Optional[str] = None
    output_format: str = "json"

    @field_validator("depth")
    @classmethod
    def validate_depth(cls, value: int) -> int:
        if value < 1:
            raise ValueError("depth must be at least 1")
        return value

    @field_validator("margin")
    @classmethod
    def validate_margin(cls, value: int) -> int:
        if value < 0:
            raise ValueError("margin must not be negative")
        return value

    @field_validator("battery")
    @classmethod
    def validate_battery(cls, value: int) -> int:
        if value < 1:
            raise ValueError("battery must be at least 1")
        return value

    @field_validator("output_format")
    @classmethod
    def validate_format(cls, value: str) -> str:
        if value not in ("json", "text"):
            raise ValueError("format must be json or text")
        return value

    @model_validator(mode="after")
    def check_depth_margin(self) -> "JobSpec":
        if self.depth < 2 * self.margin:
            raise ValueError(f"depth {self.depth} is less than twice the margin {self.margin}")
        return self

    @property
    def job_id(self) -> str:
        """Short digest of the fields that determine the report."""
        key = f"{self.m_spec}|{self.n_spec}|{self.depth}|{self.margin}|{self.seed}|{self.battery}"
        return hashlib.sha1(key.encode()).hexdigest()[:8]
