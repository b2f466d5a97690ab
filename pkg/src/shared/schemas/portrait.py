from typing import Dict, List

from pydantic import BaseModel


class PortraitOut(BaseModel):
    """A portrait: base, base image and local permutations keyed by address."""

    base: str
    base_image: str
    domain_depth: int
    local: Dict[str, List[int]]
