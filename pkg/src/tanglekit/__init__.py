"""Tanglegram layouts, exact crossing numbers and one-crossing certificates."""

from .construct import OneCrossCertificate, insert_leaf_order, one_crossing_layout
from .detect import (
    CrossResponsibleSet,
    ScarType,
    associated_graph,
    cross_responsible_sets,
    is_planar_graph,
    is_safe_pair,
    scar_type,
    unsafe_pairs,
    validate_unique,
)
from .errors import (
    BudgetExhausted,
    ConsistencyError,
    ParseError,
    PreconditionError,
    RefusalError,
    TanglegramError,
)
from .gen import build_family, enumerate_tanglegrams, random_tanglegram
from .io import parse_layout, parse_tanglegram, render_svg, serialize_layout, serialize_tanglegram
from .layout import (
    CrtResult,
    LayoutRep,
    crossing_count,
    exact_crt,
    is_consistent,
    optimize_one_side,
    planar_layout,
    restrict_layout,
)
from .model import (
    InducedSubtree,
    RootedBinaryTree,
    ScarRecord,
    Tanglegram,
    induce_subtanglegram,
    induce_subtree,
    meet,
    scar_of,
    tanglegram_isomorphic,
)

__version__ = "0.1.0"
