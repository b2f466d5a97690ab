"""Core constants: verdict citations and report labels."""

CARDINALITY_COUNTABLE = "<= aleph_0"
CARDINALITY_CONTINUUM = "2^aleph_0"

NO_VERDICT = "out-of-hypothesis"
DELEGATED = "imprimitive (delegated)"

# Each verdict in an AnalysisReport names the criterion it was decided by.
CITE_ORBITS = "orbit criterion: in-colours in the same local orbit"
CITE_EDGE_ORBITS = "edge orbits: pair of endpoint orbits"
CITE_QUOTIENT = "quotient graph is complete bipartite on the orbit counts"
CITE_TRANSITIVE = "transitive iff M transitive"
CITE_PRIMITIVE = "primitive iff M primitive and not regular and N transitive"
CITE_SIMPLE = (
    "simple if M and N are generated by point stabilisers, one is nontrivial, "
    "and one is transitive"
)
CITE_DISCRETE = "discrete iff M and N are semi-regular"
CITE_SUBDEGREE = "subdegree-finite iff M subdegree-finite and N orbits finite"
CITE_COMPACT = "point stabilisers compact when N and M point stabilisers are compact"
CITE_COMPACTLY_GENERATED = "compactly generated when M and N transitive and finite"
CITE_CARDINALITY = "countable iff discrete (closed subgroup dichotomy, external)"
CITE_LOCAL_ACTION = "local action at every vertex is M or N"
CITE_RIGID = "rigid subgroups are anti-isomorphic copies of M and N"
CITE_UNIQUE_LIFT = "unique automorphism between two colourings"
CITE_INDEPENDENCE = "independence property along paths"
CITE_RECOVERY = "locally-(M,N) groups embed in a universal group"
CITE_CONSTRUCTION = "construction checklist for simple non-discrete groups"
CITE_AMALGAM = "amalgam over the root edge"
CITE_SUBORBITS = "suborbit sizes from the stabiliser recursion along paths"

__all__ = [
    "CARDINALITY_COUNTABLE",
    "CARDINALITY_CONTINUUM",
    "NO_VERDICT",
    "DELEGATED",
    "CITE_ORBITS",
    "CITE_EDGE_ORBITS",
    "CITE_QUOTIENT",
    "CITE_TRANSITIVE",
    "CITE_PRIMITIVE",
    "CITE_SIMPLE",
    "CITE_DISCRETE",
    "CITE_SUBDEGREE",
    "CITE_COMPACT",
    "CITE_COMPACTLY_GENERATED",
    "CITE_CARDINALITY",
    "CITE_LOCAL_ACTION",
    "CITE_RIGID",
    "CITE_UNIQUE_LIFT",
    "CITE_INDEPENDENCE",
    "CITE_RECOVERY",
    "CITE_CONSTRUCTION",
    "CITE_AMALGAM",
    "CITE_SUBORBITS",
]
