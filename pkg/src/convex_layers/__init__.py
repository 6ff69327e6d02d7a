"""Convex layers (onion peeling) with hull trees."""
from .geometry import Chain, Node, Point, above, dominates, make_points, orientation
from .hulltree import (
    HullTree,
    InvariantError,
    ScanCounters,
    below,
    build_tree,
    delete,
    extract_hull,
    get_bridge,
    insert,
    purge_marked,
    tangents,
    validate,
)
from .layers import LayerSet, Orientation, counterexample_fixture, depth, peel_layers

__all__ = [
    "Chain", "Node", "Point", "above", "dominates", "make_points", "orientation",
    "HullTree", "InvariantError", "ScanCounters", "below", "build_tree", "delete",
    "extract_hull", "get_bridge", "insert", "purge_marked", "tangents", "validate",
    "LayerSet", "Orientation", "counterexample_fixture", "depth", "peel_layers",
]
