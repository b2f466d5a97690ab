from typing import List

from pydantic import BaseModel, ConfigDict, field_validator


class GroupSpecIn(BaseModel):
    """JSON group specification with 1-based cycles."""

    degree: int
    generators: List[List[List[int]]] = []

    @field_validator("degree")
    @classmethod
    def validate_degree(cls, value: int) -> int:
        if value < 1:
            raise ValueError("degree must be at least 1")
        return value


class ClassificationOut(BaseModel):
    transitive: bool
    primitive: bool
    regular: bool
    semiregular: bool
    generated_by_point_stabilisers: bool

    model_config = ConfigDict(from_attributes=True)


class PermGroupOut(BaseModel):
    degree: int
    order: int
    spec: str
    orbit_count: int
    classification: ClassificationOut
