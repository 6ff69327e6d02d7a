"""Brute-force oracles, instance generators and scaling analysis.

Nothing here touches the hull tree; these are the independent references
the tree and the layer engine are checked against.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .geometry import COORD_LIMIT, Point, make_points
from .layers import LayerSet, canonical_start

_FAR = 1 << 200


def _cross(o, a, b) -> int:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def hull_ccw(pts: Sequence) -> list:
    """Vertex-strict convex hull, counterclockwise from the lexicographic minimum."""
    pts = sorted(pts, key=lambda p: (p.x, p.y))
    if len(pts) <= 2:
        return pts
    lower: list = []
    for p in pts:
        while len(lower) >= 2 and _cross((lower[-2].x, lower[-2].y), (lower[-1].x, lower[-1].y), (p.x, p.y)) <= 0:
            lower.pop()
        lower.append(p)
    upper: list = []
    for p in reversed(pts):
        while len(upper) >= 2 and _cross((upper[-2].x, upper[-2].y), (upper[-1].x, upper[-1].y), (p.x, p.y)) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def oracle_layers(points: Sequence[Point]) -> LayerSet:
    """Peel one vertex-strict hull at a time."""
    remaining = sorted(points, key=lambda p: (p.x, p.y))
    layers = []
    depth = {}
    while remaining:
        h = hull_ccw(remaining)
        layers.append(h)
        ids = {p.id for p in h}
        for p in h:
            depth[p.id] = len(layers)
        remaining = [p for p in remaining if p.id not in ids]
    return LayerSet(layers, depth)


def oracle_nw_hull(points: Sequence) -> list[tuple[int, int]]:
    """Northwest hull chain as coordinates, left to right.

    Upper hull of the set plus two far points standing in for the sentinels
    (x_min, -inf) and (+inf, y_max); collinear points are dropped.
    """
    pts = [(p.x, p.y) if hasattr(p, "x") else tuple(p) for p in points]
    if not pts:
        return []
    xmin = min(x for x, _ in pts)
    ymax = max(y for _, y in pts)
    seq = [(xmin, -_FAR)] + sorted(pts) + [(_FAR, ymax)]
    up: list = []
    for p in seq:
        while len(up) >= 2 and _cross(up[-2], up[-1], p) >= 0:
            up.pop()
        up.append(p)
    return up[1:-1]


def oracle_bridge(left: Sequence[tuple[int, int]], right: Sequence[tuple[int, int]]):
    """Exhaustive bridge between two NW chains, left preceding right.

    Returns a pair of coordinates; degenerate cases mirror ``get_bridge``:
    ``(None, head(right))`` for an empty left chain (or one whose only
    vertex lies straight under head(right)) and ``(tail(left), None)``
    when ``tail(left).y >= tail(right).y``.
    """
    if not left:
        return None, right[0]
    if not right or left[-1][1] >= right[-1][1]:
        return left[-1], None
    allp = list(left) + list(right)
    best = None
    for p in left:
        for q in right:
            if q[0] == p[0]:
                continue
            s = (q[0] > p[0]) - (q[0] < p[0])
            if any(s * _cross(p, q, v) > 0 for v in allp):
                continue
            # right sentinel ray must stay under the line
            if (q[1] - p[1]) * s < 0:
                continue
            cand = (p, q)
            if best is None or (p[0] < best[0][0]) or (p == best[0] and q[0] > best[1][0]):
                best = cand
    if best is None and left[-1][0] == right[0][0]:
        # the only left vertex sits straight under head(right)
        return None, right[0]
    return best


# -- generators --------------------------------------------------------------

KINDS = ("uniform-square", "uniform-disk", "circle", "grid", "collinear", "nested-rings", "mixed", "fixture")


@dataclass
class Instance:
    points: list[Point]
    kind: str
    seed: int
    n: int
    general_position: bool
    meta: dict = field(default_factory=dict)


def general_position(points: Sequence[Point]) -> bool:
    """No shared x, no shared y, no three collinear."""
    if len({p.x for p in points}) < len(points) or len({p.y for p in points}) < len(points):
        return False
    n = len(points)
    if n < 3:
        return True
    xy = np.array([(p.x, p.y) for p in points], dtype=np.int64)
    for i in range(n - 2):
        d = xy[i + 1:] - xy[i]
        g = np.gcd(d[:, 0], d[:, 1])
        d = d // g[:, None]
        flip = (d[:, 0] < 0) | ((d[:, 0] == 0) & (d[:, 1] < 0))
        d[flip] *= -1
        # |dx|, |dy| < 2^31, so one int64 holds the reduced direction
        key = np.sort((d[:, 0] << 32) + (d[:, 1] + (1 << 31)))
        if np.any(key[1:] == key[:-1]):
            return False
    return True


def _dedup(coords, rng, n, fill: Callable) -> list[tuple[int, int]]:
    seen = set()
    out = []
    for c in coords:
        if c not in seen:
            seen.add(c)
            out.append(c)
    tries = 0
    while len(out) < n:
        c = fill(rng)
        tries += 1
        if tries > 100 * n + 1000:
            raise ValueError("could not draw enough distinct points")
        if c not in seen:
            seen.add(c)
            out.append(c)
    return out[:n]


def _square(rng, r):
    return (rng.randint(-r, r), rng.randint(-r, r))


def _disk(rng, r):
    while True:
        x, y = rng.randint(-r, r), rng.randint(-r, r)
        if x * x + y * y <= r * r:
            return (x, y)


def generate(kind: str, n: int, seed: int = 0, general: bool = False, radius: int = COORD_LIMIT >> 1) -> Instance:
    """Deterministic instance for (kind, n, seed).

    ``general=True`` redraws uniform instances until they are in general
    position; grid, collinear and mixed are degenerate on purpose.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    rng = random.Random(f"{kind}:{n}:{seed}")
    meta: dict = {}
    if kind in ("uniform-square", "uniform-disk"):
        draw = _square if kind == "uniform-square" else _disk
        for attempt in range(50):
            coords = _dedup((draw(rng, radius) for _ in range(n)), rng, n, lambda g: draw(g, radius))
            pts = make_points(coords)
            if not general:
                break
            if general_position(pts):
                meta["general_position"] = True
                break
        else:
            raise ValueError("no general-position draw found")
    elif kind == "circle":
        R = COORD_LIMIT >> 1
        if n > 20000:
            raise ValueError("circle kind supports at most 20000 points")
        phase = rng.random()
        coords = []
        for i in range(n):
            t = 2 * math.pi * (i + phase) / max(n, 1)
            coords.append((round(R * math.cos(t)), round(R * math.sin(t))))
        if len(set(coords)) < n:
            raise ValueError("circle points collided after rounding")
        pts = make_points(coords)
    elif kind == "grid":
        k = math.isqrt(n)
        if k * k != n:
            raise ValueError("grid kind needs a perfect square n")
        pts = make_points([(i, j) for i in range(k) for j in range(k)])
    elif kind == "collinear":
        dx, dy = rng.choice([(1, 0), (0, 1), (1, 1), (2, -3), (5, 7)])
        pts = make_points([(i * dx, i * dy) for i in range(n)])
    elif kind == "nested-rings":
        if n % 8:
            raise ValueError("nested-rings needs n divisible by 8")
        k = n // 8
        A, B = 3 * k + 16, k + 8
        coords = []
        for j in range(k):
            a, b = A - j, B - j
            coords += [(a, b), (b, a), (-b, a), (-a, b), (-a, -b), (-b, -a), (b, -a), (a, -b)]
        pts = make_points(coords)
        meta["layers"] = k
    elif kind == "mixed":
        side = max(2, math.isqrt(2 * n) + 1)
        if n > side * side:
            raise ValueError("too many points for the mixed grid")
        cells = [(x, y) for x in range(side) for y in range(side)]
        pts = make_points(rng.sample(cells, n))
    elif kind == "fixture":
        from .layers import counterexample_fixture
        pts = counterexample_fixture()
        n = len(pts)
    else:
        raise ValueError(f"unknown kind {kind!r}")
    gp = meta.pop("general_position", None)
    if gp is None:
        gp = general_position(pts) if n <= 4096 else False
    return Instance(pts, kind, seed, n, gp, meta)


# -- comparison and shrinking ------------------------------------------------

def same_layers(a: LayerSet, b: LayerSet) -> bool:
    """Identical partition and identical cyclic orders (up to rotation)."""
    if len(a.layers) != len(b.layers):
        return False
    for la, lb in zip(a.layers, b.layers):
        if [p.id for p in canonical_start(la)] != [p.id for p in canonical_start(lb)]:
            return False
    return True


def first_disagreement(a: LayerSet, b: LayerSet) -> int | None:
    """Smallest point id whose depth differs, or None."""
    bad = [i for i in a.depth if a.depth.get(i) != b.depth.get(i)]
    return min(bad) if bad else None


def shrink(points: Sequence[Point], fails: Callable[[list[Point]], bool]) -> list[Point]:
    """Greedy one-at-a-time removal keeping ``fails`` true."""
    cur = list(points)
    changed = True
    while changed:
        changed = False
        i = 0
        while i < len(cur):
            cand = cur[:i] + cur[i + 1:]
            if cand and fails(cand):
                cur = cand
                changed = True
            else:
                i += 1
    return cur


# -- scaling -----------------------------------------------------------------

@dataclass
class CounterReport:
    sizes: list[int]
    scan_events: list[int]
    evictions: list[int] = field(default_factory=list)
    promotions: list[int] = field(default_factory=list)

    @property
    def ratios(self) -> list[float]:
        return [s / (n * math.log2(n)) for n, s in zip(self.sizes, self.scan_events)]


@dataclass
class ScalingVerdict:
    passed: bool
    spread: float
    table: list[tuple[int, int, float]]

    def format(self) -> str:
        rows = [f"{'n':>9} {'scans':>12} {'scans/(n lg n)':>15}"]
        rows += [f"{n:>9} {s:>12} {r:>15.4f}" for n, s, r in self.table]
        rows.append(f"max/min = {self.spread:.3f} -> {'pass' if self.passed else 'FAIL'}")
        return "\n".join(rows)


def fit_scaling(report: CounterReport, limit: float = 2.0) -> ScalingVerdict:
    """Pass iff the n lg n-normalised counts stay within ``limit``x of each other."""
    if len(report.sizes) < 4:
        raise ValueError("need at least four sizes")
    ratios = report.ratios
    spread = max(ratios) / min(ratios)
    table = list(zip(report.sizes, report.scan_events, ratios))
    return ScalingVerdict(spread <= limit, spread, table)
