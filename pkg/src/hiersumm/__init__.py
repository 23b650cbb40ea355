"""Explain metric changes with a few non-overlapping segments of a product of trees."""

from .core import (
    DimensionTree,
    ProductNode,
    ProductSpace,
    children_along,
    in_subspace,
    overlap,
    total_depth,
    tree_overlap,
)
from .errors import (
    CapacityError,
    ConfigError,
    InputError,
    ParseError,
    StructureError,
    SummarizeError,
)
from .solver import Solution, SolverConfig, combine_children, node_recurrence, solve
from .weights import (
    AggregateTable,
    CellTable,
    WeightFunction,
    WeightMap,
    aggregate,
    build_weight_map,
    weight_absdiff,
    weight_boxcox,
    weight_composition,
)

__version__ = "0.1.0"
