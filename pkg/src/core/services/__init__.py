"""Services for the box product of two finite permutation groups."""

from .operation_result import OperationResult
from .permgroup import PermGroup, Perm, classify
from .tree import TruncatedTree, TreeParams, Vertex, Arc, Part
from .colouring import LegalColouring, canonical_colouring, random_colouring, validate
from .portrait import Portrait, rigid_element, half_tree_surgery, path_decompose
from .boxgroup import predict, vertex_orbits, quotient_graph, suborbits_box
from .witnesses import imprimitivity_witness, primitivity_certificate, nondiscreteness_witness
from .verification import run_battery

__all__ = [
    "OperationResult",
    "PermGroup",
    "Perm",
    "classify",
    "TruncatedTree",
    "TreeParams",
    "Vertex",
    "Arc",
    "Part",
    "LegalColouring",
    "canonical_colouring",
    "random_colouring",
    "validate",
    "Portrait",
    "rigid_element",
    "half_tree_surgery",
    "path_decompose",
    "predict",
    "vertex_orbits",
    "quotient_graph",
    "suborbits_box",
    "imprimitivity_witness",
    "primitivity_certificate",
    "nondiscreteness_witness",
    "run_battery",
]
