"""Signed-graph clusterability testing toolkit.

Implements and stress-tests a sublinear clusterability tester for signed
graphs in the bounded-degree query model (positive-edge random walks plus
collision finding, with classical and quantum-model backends), together with
the hard instance families and lazy oracle processes used to measure the
classical query-complexity floor.
"""

from .collision import (
    CollisionBackend,
    CollisionReport,
    PairSetRelation,
    Relation,
    exhaustive_collide,
    quantum_cost_collide,
    quantum_walk_simulate,
)
from .errors import (
    BadN,
    ClustertestError,
    ConfigError,
    DuplicateEdge,
    FormatError,
    IdOutOfRange,
    InfeasibleHistory,
    InvalidK,
    NotInSupport,
    PortConflict,
    SelfLoop,
    TooFewVertices,
    TooLarge,
    UnevenLabelCounts,
    WorkBudgetExceeded,
)
from .families import (
    FamilyInstance,
    LabelPermutation,
    gen_g1,
    gen_g2,
    generate,
    load_instance,
    sample_cycle_union,
    save_instance,
    validate_family_membership,
)
from .graph import (
    Neighbor,
    QuerySession,
    Sign,
    SignedGraph,
    build_graph,
    parse_graph,
    serialize_graph,
)
from .kwise import CoinValue, KWiseSource, coin, new_kwise_source
from .oracle import (
    BadCycle,
    ClusterWitness,
    check_bad_cycle,
    check_witness,
    distance_to_clusterable,
    find_bad_cycle,
    is_clusterable,
)
from .processes import (
    DistinguishConfig,
    DistinguishReport,
    ProcessState,
    complete,
    distinguish_experiment,
)
from .walks import (
    CollisionWitness,
    EndpointRecord,
    NegativeEdgeRelation,
    TesterParams,
    Verdict,
    run_tester,
    walk_endpoint,
)

__version__ = "0.1.0"
