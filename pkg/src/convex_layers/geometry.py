"""Exact planar primitives: points, sentinel-framed chains and predicates.

All coordinates are Python ints, so every predicate is exact.  Chains are
intrusive doubly-linked lists framed by two sentinel nodes whose infinite
coordinate is symbolic; the finite coordinate of a sentinel is read off its
neighbour (``head.x`` for the left sentinel, ``tail.y`` for the right one).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

COORD_LIMIT = 1 << 30

REAL = 0
LEFT = -1   # (head.x, -inf)
RIGHT = 1   # (+inf, tail.y)
CORNER_LEFT = -2   # (-inf, -inf), degenerate bridge endpoint
CORNER_RIGHT = 2   # (+inf, -inf), degenerate bridge endpoint

INF = float("inf")


@dataclass(frozen=True, slots=True)
class Point:
    id: int
    x: int
    y: int

    def xy(self) -> tuple[int, int]:
        return (self.x, self.y)


def x_key(p) -> tuple[int, int]:
    return (p.x, p.y)


def y_key(p) -> tuple[int, int]:
    return (p.y, p.x)


class Node:
    """One chain slot.  Real nodes carry a point; sentinels carry ``kind``."""

    __slots__ = ("x", "y", "id", "rank", "kind", "prev", "next")

    def __init__(self, x=0, y=0, id=-1, rank=-1, kind=REAL):
        self.x = x
        self.y = y
        self.id = id
        self.rank = rank
        self.kind = kind
        self.prev: Node | None = None
        self.next: Node | None = None

    @property
    def is_real(self) -> bool:
        return self.kind == REAL

    def ext(self) -> tuple[float, float]:
        """Coordinates with the symbolic infinities spelled out."""
        if self.kind == REAL:
            return (self.x, self.y)
        if self.kind == LEFT:
            return (self.next.x if self.next and self.next.kind == REAL else -INF, -INF)
        if self.kind == RIGHT:
            return (INF, self.prev.y if self.prev and self.prev.kind == REAL else -INF)
        if self.kind == CORNER_LEFT:
            return (-INF, -INF)
        return (INF, -INF)

    def __repr__(self) -> str:
        if self.kind == REAL:
            return f"Node({self.x}, {self.y}, id={self.id})"
        return f"Sentinel{self.ext()}"


CORNER_NEG = Node(kind=CORNER_LEFT)
CORNER_POS = Node(kind=CORNER_RIGHT)


def orientation(p, q, r) -> int:
    """Sign of (q - p) x (r - p): +1 when r is left of p->q, 0 collinear."""
    d = (q.x - p.x) * (r.y - p.y) - (q.y - p.y) * (r.x - p.x)
    return (d > 0) - (d < 0)


def above(p: Node, q: Node, r) -> bool:
    """True iff real point ``r`` lies strictly above the line through p and q.

    Sentinel endpoints use limit semantics: a left sentinel paired with a
    finite point f makes the line vertical at f.x (above = left of it); a
    right sentinel paired with f makes it horizontal at f.y.
    """
    pk, qk = p.kind, q.kind
    if pk != REAL or qk != REAL:
        if pk != REAL and qk != REAL:
            raise AssertionError("above() called with two sentinels")
        f, s = (q, pk) if pk != REAL else (p, qk)
        if s == LEFT:
            return r.x < f.x
        if s == RIGHT:
            return r.y > f.y
        raise AssertionError("above() called with a bridge corner")
    d = (q.x - p.x) * (r.y - p.y) - (q.y - p.y) * (r.x - p.x)
    if q.x > p.x:
        return d > 0
    if q.x < p.x:
        return d < 0
    # vertical: read as the limit of an increasing steep line
    return r.x < p.x if q.y > p.y else r.x > p.x


class Chain:
    """Doubly-linked northwest chain with two sentinel nodes."""

    __slots__ = ("lo", "hi", "size")

    def __init__(self, nodes: Iterable[Node] = ()):
        self.lo = Node(kind=LEFT)
        self.hi = Node(kind=RIGHT)
        self.lo.next = self.hi
        self.hi.prev = self.lo
        self.size = 0
        for n in nodes:
            self.append(n)

    @classmethod
    def from_points(cls, pts: Iterable) -> "Chain":
        return cls(Node(p.x, p.y, getattr(p, "id", -1)) for p in pts)

    def __len__(self) -> int:
        return self.size

    def __bool__(self) -> bool:
        return self.size > 0

    def __iter__(self) -> Iterator[Node]:
        n = self.lo.next
        while n.kind == REAL:
            yield n
            n = n.next

    @property
    def head(self) -> Node | None:
        n = self.lo.next
        return n if n.kind == REAL else None

    @property
    def tail(self) -> Node | None:
        n = self.hi.prev
        return n if n.kind == REAL else None

    def append(self, node: Node) -> None:
        last = self.hi.prev
        last.next = node
        node.prev = last
        node.next = self.hi
        self.hi.prev = node
        self.size += 1

    def coords(self) -> list[tuple[int, int]]:
        return [(n.x, n.y) for n in self]

    def ids(self) -> list[int]:
        return [n.id for n in self]

    def __repr__(self) -> str:
        return f"Chain({self.coords()})"


def pred(n: Node) -> Node:
    return n.prev


def succ(n: Node) -> Node:
    return n.next


def cut(first: Node, last: Node) -> tuple[Node, Node]:
    """Unlink the run first..last; returns its former neighbours."""
    a, b = first.prev, last.next
    a.next = b
    b.prev = a
    first.prev = None
    last.next = None
    return a, b


def link_between(a: Node, b: Node, first: Node | None, last: Node | None) -> None:
    """Place the detached run first..last between adjacent nodes a and b."""
    if first is None:
        a.next = b
        b.prev = a
        return
    a.next = first
    first.prev = a
    last.next = b
    b.prev = last


def split_at(chain: Chain, node: Node) -> tuple[Chain, Chain]:
    """Split so that ``node`` is the tail of the left part."""
    right = Chain()
    count = 0
    n = chain.lo.next
    while n is not node:
        count += 1
        n = n.next
    count += 1
    first, last = node.next, chain.hi.prev
    if first.kind == REAL:
        node.next = chain.hi
        chain.hi.prev = node
        link_between(right.lo, right.hi, first, last)
        right.size = chain.size - count
        chain.size = count
    return chain, right


def splice_replace(chain: Chain, a: Node, b: Node, repl: Chain) -> list[Node]:
    """Replace everything strictly between a and b by ``repl``'s nodes.

    Returns the removed nodes in order; ``repl`` is left empty.
    """
    removed = []
    n = a.next
    while n is not b:
        removed.append(n)
        n = n.next
    first, last = repl.head, repl.tail
    moved = repl.size
    repl.lo.next = repl.hi
    repl.hi.prev = repl.lo
    repl.size = 0
    link_between(a, b, first, last)
    chain.size += moved - len(removed)
    for r in removed:
        r.prev = r.next = None
    return removed


def concat(c1: Chain, c2: Chain) -> Chain:
    """Append c2's nodes to c1 (c2 is emptied)."""
    if c2.size:
        first, last = c2.head, c2.tail
        c2.lo.next = c2.hi
        c2.hi.prev = c2.lo
        link_between(c1.hi.prev, c1.hi, first, last)
        c1.size += c2.size
        c2.size = 0
    return c1


def dominates(chain: Chain, r) -> bool:
    """True iff r is on or below a segment of the full chain.

    The left-sentinel segment is excluded; the right-sentinel ray counts.
    The chain's own vertices are never dominated.
    """
    h = chain.head
    if h is None or r.x < h.x:
        return False
    prev = None
    for v in chain:
        if v.x == r.x and v.y == r.y:
            return False
        if prev is not None and prev.x <= r.x <= v.x:
            if orientation(prev, v, r) <= 0:
                return True
        prev = v
    if r.x == h.x and r.y <= h.y:
        return True
    t = chain.tail
    return r.x >= t.x and r.y <= t.y


def chain_violation(chain: Chain) -> str | None:
    """Return a reason string if the chain breaks monotonicity/convexity/links."""
    lo, hi = chain.lo, chain.hi
    if lo.kind != LEFT or hi.kind != RIGHT:
        return "sentinel"
    count = 0
    n = lo.next
    back = lo
    a = b = None
    while n is not hi:
        if n is None or n.kind != REAL:
            return "links"
        if n.prev is not back:
            return "links"
        if b is not None and not (b.x < n.x and b.y < n.y):
            return "monotonicity"
        if a is not None and orientation(a, b, n) >= 0:
            return "convexity"
        a, b = b, n
        back = n
        n = n.next
        count += 1
    if hi.prev is not back:
        return "links"
    if count != chain.size:
        return "size"
    return None


def check_bounds(x: int, y: int) -> None:
    if abs(x) > COORD_LIMIT or abs(y) > COORD_LIMIT:
        raise ValueError(f"coordinate ({x}, {y}) exceeds the 2^30 bound")


def make_points(coords: Iterable[tuple[int, int]]) -> list[Point]:
    """Assign dense ids in input order; rejects duplicates and out-of-range values."""
    pts = []
    seen: dict[tuple[int, int], int] = {}
    for i, (x, y) in enumerate(coords):
        if not isinstance(x, int) or not isinstance(y, int):
            raise TypeError("coordinates must be integers")
        check_bounds(x, y)
        if (x, y) in seen:
            raise ValueError(f"duplicate point ({x}, {y}) at ids {seen[(x, y)]} and {i}")
        seen[(x, y)] = i
        pts.append(Point(i, x, y))
    return pts
