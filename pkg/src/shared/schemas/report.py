from typing import Dict, List, Optional, Union

from pydantic import BaseModel, ConfigDict

from .group import ClassificationOut, PermGroupOut
from .portrait import PortraitOut


class Verdict(BaseModel):
    """One predicted property and the criterion it was decided by.

    ``value`` is a bool, a cardinality label, or the no-verdict marker.
    """

    value: Union[bool, str]
    citation: str
    witness_ref: Optional[str] = None
    note: Optional[str] = None


class QuotientOut(BaseModel):
    x_orbits: int
    y_orbits: int
    vertices: List[str]
    edges: List[List[str]]


class WitnessOut(BaseModel):
    """An imprimitivity or non-discreteness witness together with its check result."""

    ref: str
    kind: str
    verified: bool
    cells: Optional[List[List[str]]] = None
    element: Optional[PortraitOut] = None
    note: Optional[str] = None


class CertificateStepOut(BaseModel):
    kind: str
    detail: str
    vertices: List[str] = []
    element: Optional[PortraitOut] = None
    verified: bool


class CertificateOut(BaseModel):
    ref: str
    pair: List[str]
    steps: List[CertificateStepOut]
    verified: bool


class AmalgamOut(BaseModel):
    """Orders of the root-edge stabilisers restricted to balls of one radius."""

    radius: int
    hypothesis_met: bool
    vertex_stabiliser_orders: Dict[str, int] = {}
    edge_stabiliser_orders: Dict[str, int] = {}
    indices: Dict[str, int] = {}
    exhaustive: Optional[Dict[str, int]] = None
    consistent: bool = False


class WreathComparisonOut(BaseModel):
    wreath_degree: int
    wreath_order: int
    wreath_primitive: bool
    box_primitive: Union[bool, str]
    box_discrete: bool
    box_cardinality: str
    criteria_agree: bool
    orbital_graph_vertices: int
    orbital_graph_edges: int


class VerificationOut(BaseModel):
    name: str
    citation: str
    passed: bool
    cases: int
    failures: List[str] = []

    model_config = ConfigDict(from_attributes=True)


class AnalysisReport(BaseModel):
    m_group: PermGroupOut
    n_group: PermGroupOut
    classification_m: ClassificationOut
    classification_n: ClassificationOut
    verdicts: Dict[str, Verdict]
    quotient: QuotientOut
    suborbits: Dict[str, List[int]]
    witnesses: List[WitnessOut] = []
    certificates: List[CertificateOut] = []
    verification: List[VerificationOut] = []
    job_id: Optional[str] = None
