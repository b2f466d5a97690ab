from typing import List, Optional, Dict

from pydantic import BaseModel, ConfigDict


class ColouringCheck(BaseModel):
    """Outcome of validating a colouring; a failure is a value, not an error."""

    is_valid: bool
    violated_condition: Optional[int] = None
    vertex: Optional[str] = None
    blocking_errors: List[str] = []
    warnings: List[str] = []


class ColouringOut(BaseModel):
    m: int
    n: int
    depth: int
    # "origin->terminus" address pair to colour
    arcs: Dict[str, int]

    model_config = ConfigDict(from_attributes=True)
