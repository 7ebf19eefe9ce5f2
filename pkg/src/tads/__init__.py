"""Exact decision-structure models of ReLU networks.

A ReLU network is symbolically executed into a semantically equivalent
decision structure whose inner nodes test halfspaces of the input space and
whose leaves are affine maps. The structures form a linear algebra (pointwise
add/subtract/scale/equality) and a typed monoid under composition, which is
what the global analyses (equivalence, epsilon-similarity, classification,
class characterization) are built from.
"""

from .affine import (
    AffineFunction,
    DimensionError,
    constant,
    defect_matrix,
    identity,
)
from .feasibility import (
    Halfspace,
    PathCondition,
    Sense,
    box_halfspaces,
    feasible_witness,
    implies,
    interior_point,
    is_feasible,
    is_full_dimensional,
)
from .network import (
    AffineStep,
    ConcreteConfig,
    Network,
    ParseError,
    PartialReluStep,
    net_eval,
    net_eval_batch,
    parse_network,
    sos_run,
    sos_step,
)
from .structure import (
    Inner,
    Leaf,
    SymbolicConfig,
    Tads,
    TadsFormatError,
    count_paths,
    deserialize_tads,
    enumerate_regions,
    initial_config,
    net_to_tads,
    semantic_reduce,
    serialize_tads,
    sym_step,
    tads_eval,
    tads_eval_batch,
    vacuity_reduce,
)
from .algebra import (
    atomic_tads,
    constant_tads,
    fold_network,
    identity_tads,
    map_leaves,
    tads_add,
    tads_compose,
    tads_eq,
    tads_scale,
    tads_sub,
    tads_zip,
)
from .analysis import (
    EquivalenceReport,
    SimilarityReport,
    ViolationRegion,
    WitnessRegion,
    check_epsilon_similarity,
    check_equivalence,
    class_characterization,
    compare_classifiers,
    grid_dump,
    indicator_tads,
    make_threshold_classifier,
    region_sample_point,
)
from .dot import to_dot

__version__ = "0.1.0"
