"""Convex layers from four orientation hull trees.

Each tree holds the point set rotated so that one quadrant chain of the
convex hull (NW, SW, SE, NE) becomes a northwest chain.  Every round pulls
the root chain out of all four trees, marks its points with the current
layer and stitches the four chains back into a counterclockwise polygon.
"""
from __future__ import annotations

import enum
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

from .geometry import Point
from .hulltree import HullTree, InvariantError, ScanCounters, build_tree, extract_hull, purge_marked, validate


class Orientation(enum.Enum):
    """Number of clockwise quarter turns that maps the quadrant onto NW."""

    NW = 0
    SW = 1
    SE = 2
    NE = 3

    def forward(self, x: int, y: int) -> tuple[int, int]:
        for _ in range(self.value):
            x, y = y, -x
        return x, y

    def inverse(self, x: int, y: int) -> tuple[int, int]:
        for _ in range(self.value):
            x, y = -y, x
        return x, y


# counterclockwise order of the quadrant chains, starting at the leftmost point
CCW_ORDER = (Orientation.SW, Orientation.SE, Orientation.NE, Orientation.NW)


@dataclass
class LayerSet:
    layers: list[list[Point]]
    depth_of: dict[int, int] = field(default_factory=dict)

    @property
    def depth(self) -> dict[int, int]:
        return self.depth_of

    @property
    def k(self) -> int:
        return len(self.layers)

    def depth_for(self, pid: int) -> int:
        try:
            return self.depth_of[pid]
        except KeyError:
            raise KeyError(f"unknown point id {pid}") from None

    def coords(self) -> list[list[tuple[int, int]]]:
        return [[(p.x, p.y) for p in layer] for layer in self.layers]


def depth(ls: LayerSet, pid: int) -> int:
    """1-based layer index of a point."""
    return ls.depth_for(pid)


def canonical_start(layer: Sequence[Point]) -> list[Point]:
    """Rotate a cyclic vertex list to begin at its lexicographic minimum."""
    if not layer:
        return []
    i = min(range(len(layer)), key=lambda j: (layer[j].x, layer[j].y))
    return list(layer[i:]) + list(layer[:i])


class MarkSet:
    """Layer assignment shared by the four trees."""

    def __init__(self, n: int):
        self.layer = [0] * n
        self.count = 0

    def is_marked(self, pid: int) -> bool:
        return self.layer[pid] != 0

    def mark(self, pid: int, layer: int) -> None:
        if self.layer[pid]:
            raise InvariantError(f"point {pid} marked twice")
        self.layer[pid] = layer
        self.count += 1


def counterexample_fixture() -> list[Point]:
    """Ten points on which the literal extract-then-filter merge misfiles (20, 50)."""
    coords = [(-100, 0), (0, 100), (10, 99), (100, -3), (5, -100),
              (-50, 5), (20, 50), (25, 52), (30, 4), (-2, -50)]
    return [Point(i, x, y) for i, (x, y) in enumerate(coords)]


class _Rotated:
    __slots__ = ("id", "x", "y")

    def __init__(self, pid, x, y):
        self.id = pid
        self.x = x
        self.y = y


@dataclass
class PeelStats:
    build: ScanCounters = field(default_factory=ScanCounters)
    peel: ScanCounters = field(default_factory=ScanCounters)
    purged: int = 0
    build_nodes: int = 0
    census_seconds: float = 0.0
    checkpoints: list[tuple[int, int]] = field(default_factory=list)


def build_trees(points: Sequence[Point], debug: bool = False, parallel: bool = False,
                case_rule: str = "geometric") -> dict[Orientation, HullTree]:
    def one(o: Orientation) -> HullTree:
        rot = [_Rotated(p.id, *o.forward(p.x, p.y)) for p in points]
        return build_tree(rot, debug=debug, case_rule=case_rule)

    if parallel:
        with ThreadPoolExecutor(max_workers=4) as ex:
            trees = list(ex.map(one, Orientation))
    else:
        trees = [one(o) for o in Orientation]
    return dict(zip(Orientation, trees))


def _stitch(chains: dict[Orientation, list[Point]]) -> list[Point]:
    out: list[Point] = []
    seen: set[int] = set()
    for o in CCW_ORDER:
        for p in reversed(chains.get(o, [])):
            if p.id not in seen:
                seen.add(p.id)
                out.append(p)
    return canonical_start(out)


def peel_layers(points: Sequence[Point], mode: str = "purge", max_layers: int | None = None,
                debug: bool = False, parallel: bool = False, stats: PeelStats | None = None,
                case_rule: str = "geometric", checkpoint_every: int = 0) -> LayerSet:
    """Convex layers of ``points`` (ids must be 0..n-1).

    ``mode="purge"`` strips already-marked points off every root chain
    before extracting it; ``mode="literal"`` extracts first and drops marked
    points afterwards.  ``max_layers`` stops early.
    """
    if mode not in ("purge", "literal"):
        raise ValueError(f"unknown mode {mode!r}")
    pts = list(points)
    n = len(pts)
    by_id = {p.id: p for p in pts}
    if sorted(by_id) != list(range(n)):
        raise ValueError("point ids must be 0..n-1")
    trees = build_trees(pts, debug=debug, parallel=parallel, case_rule=case_rule)
    if stats is not None:
        for t in trees.values():
            stats.build.add(t.counters)
            t.counters.reset()
        stats.build_nodes = _census(trees)[0]
    marks = MarkSet(n)
    layers: list[list[Point]] = []
    depth_of: dict[int, int] = {}
    pool = ThreadPoolExecutor(max_workers=4) if parallel else None

    def step(o: Orientation) -> tuple[list[int], int]:
        t = trees[o]
        purged = purge_marked(t, marks.is_marked) if mode == "purge" else 0
        if t.is_empty:
            return [], purged
        return extract_hull(t).ids(), purged

    rounds = 0
    try:
        while marks.count < n and (max_layers is None or len(layers) < max_layers):
            rounds += 1
            results = list(pool.map(step, Orientation)) if pool else [step(o) for o in Orientation]
            chains: dict[Orientation, list[Point]] = {}
            fresh: list[int] = []
            for o, (ids, purged) in zip(Orientation, results):
                if stats is not None:
                    stats.purged += purged
                kept = [by_id[i] for i in ids if not marks.is_marked(i)]
                if mode == "purge" and len(kept) != len(ids):
                    raise InvariantError("marked point survived the purge")
                chains[o] = kept
                fresh.extend(p.id for p in kept)
            if not fresh:
                if all(t.is_empty for t in trees.values()):
                    raise InvariantError("trees drained with unmarked points left")
                continue
            layer_no = len(layers) + 1
            for pid in dict.fromkeys(fresh):
                marks.mark(pid, layer_no)
                depth_of[pid] = layer_no
            layers.append(_stitch(chains))
            if checkpoint_every and stats is not None and rounds % checkpoint_every == 0:
                t0 = time.perf_counter()
                stats.checkpoints.append(_census(trees))
                stats.census_seconds += time.perf_counter() - t0
            if debug:
                for t in trees.values():
                    validate(t).raise_if_failed()
    finally:
        if pool:
            pool.shutdown()
    if stats is not None:
        for t in trees.values():
            stats.peel.add(t.counters)
    return LayerSet(layers, depth_of)


def _census(trees: dict[Orientation, HullTree]) -> tuple[int, int]:
    nodes = sum(t.chain_node_count() for t in trees.values())
    live = sum(t.live for t in trees.values())
    return nodes, live
