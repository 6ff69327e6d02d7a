"""Hull tree: a rank-routed binary tree of northwest monotone convex chains.

Every node stores the northwest hull of the points in its subtree as a full
chain, plus two cursors ``l`` (left, drifts rightwards) and ``r`` (right,
drifts leftwards).  Non-hull points live in the children, routed by the bit
of their x-rank at the node's depth.  Points enter through ``insert`` in a
plane sweep and leave through ``delete``/``extract_hull``.
"""
from __future__ import annotations

from dataclasses import dataclass, fields
from typing import Callable, Iterable

from .geometry import (
    CORNER_NEG,
    CORNER_POS,
    REAL,
    Chain,
    Node,
    above,
    chain_violation,
    cut,
    link_between,
    orientation,
    x_key,
)


class InvariantError(AssertionError):
    """A hull-tree or chain invariant was found broken."""


@dataclass
class ScanCounters:
    scan_events: int = 0
    evictions: int = 0
    promotions: int = 0
    delete_calls: int = 0
    insert_calls: int = 0

    def reset(self) -> None:
        for f in fields(self):
            setattr(self, f.name, 0)

    def as_dict(self) -> dict[str, int]:
        return {f.name: getattr(self, f.name) for f in fields(self)}

    def as_record(self) -> str:
        return "\n".join(f"{k}={v}" for k, v in self.as_dict().items())

    def add(self, other: "ScanCounters") -> None:
        for f in fields(self):
            setattr(self, f.name, getattr(self, f.name) + getattr(other, f.name))


class _Shared:
    __slots__ = ("bits", "counters", "debug", "dirty", "live", "case_rule", "max_depth")

    def __init__(self, bits: int, debug: bool, case_rule: str):
        if case_rule not in ("geometric", "literal"):
            raise ValueError(f"unknown case rule {case_rule!r}")
        self.bits = bits
        self.counters = ScanCounters()
        self.debug = debug
        self.dirty: set = set()
        self.live = 0
        self.case_rule = case_rule
        self.max_depth = 0


class HullTree:
    __slots__ = ("hull", "l", "r", "left", "right", "parent", "depth", "prefix", "shared")

    def __init__(self, depth: int, shared: _Shared, parent: "HullTree | None" = None, prefix: int = 0):
        self.hull = Chain()
        self.l: Node | None = None
        self.r: Node | None = None
        self.left: HullTree | None = None
        self.right: HullTree | None = None
        self.parent = parent
        self.depth = depth
        self.prefix = prefix
        self.shared = shared
        if depth > shared.max_depth:
            shared.max_depth = depth

    @classmethod
    def empty(cls, n_points: int, debug: bool = False, case_rule: str = "geometric") -> "HullTree":
        return cls(0, _Shared(max(0, (n_points - 1).bit_length()), debug, case_rule))

    @property
    def counters(self) -> ScanCounters:
        return self.shared.counters

    @property
    def is_empty(self) -> bool:
        return self.hull.size == 0

    @property
    def live(self) -> int:
        return self.shared.live

    def child(self, bit: int) -> "HullTree":
        c = self.right if bit else self.left
        if c is None:
            c = HullTree(self.depth + 1, self.shared, self, (self.prefix << 1) | bit)
            if bit:
                self.right = c
            else:
                self.left = c
        return c

    def subtrees(self) -> Iterable["HullTree"]:
        stack = [self]
        while stack:
            t = stack.pop()
            yield t
            if t.right is not None:
                stack.append(t.right)
            if t.left is not None:
                stack.append(t.left)

    def chain_node_count(self) -> int:
        return sum(t.hull.size for t in self.subtrees())

    def __repr__(self) -> str:
        return f"HullTree(depth={self.depth}, hull={self.hull.coords()})"


def _nonempty(t: HullTree | None) -> bool:
    return t is not None and t.hull.size > 0


def _fix_cursor_order(T: HullTree, moved_left: bool) -> None:
    # chain x strictly increases, so x order is chain order
    if T.l is not None and T.r is not None and T.l.x > T.r.x:
        if moved_left:
            T.r = T.l
        else:
            T.l = T.r


# -- tangent walks -----------------------------------------------------------

def _left_tangent(a, v: Node, counters: ScanCounters) -> Node:
    """Vertex left of ``a`` with least slope towards ``a``; ties go leftmost."""
    steps = 0
    while v.x >= a.x:
        v = v.prev
        if v.kind != REAL:
            raise InvariantError("left tangent: no vertex left of the apex")
        steps += 1
    ax, ay = a.x, a.y
    moved = False
    while True:
        p = v.prev
        if p.kind == REAL and (ax - v.x) * (p.y - v.y) - (ay - v.y) * (p.x - v.x) >= 0:
            v = p
            steps += 1
            moved = True
        else:
            break
    if not moved:
        while True:
            n = v.next
            if n.kind == REAL and n.x < ax and (ax - v.x) * (n.y - v.y) - (ay - v.y) * (n.x - v.x) > 0:
                v = n
                steps += 1
            else:
                break
    counters.scan_events += steps
    return v


def _right_tangent(a, v: Node, counters: ScanCounters) -> Node:
    """Vertex right of ``a`` with greatest slope from ``a``; ties go rightmost."""
    steps = 0
    while v.x <= a.x:
        v = v.next
        if v.kind != REAL:
            raise InvariantError("right tangent: no vertex right of the apex")
        steps += 1
    ax, ay = a.x, a.y
    moved = False
    while True:
        n = v.next
        if n.kind == REAL and (v.x - ax) * (n.y - ay) - (v.y - ay) * (n.x - ax) >= 0:
            v = n
            steps += 1
            moved = True
        else:
            break
    if not moved:
        while True:
            p = v.prev
            if p.kind == REAL and p.x > ax and (v.x - ax) * (p.y - ay) - (v.y - ay) * (p.x - ax) > 0:
                v = p
                steps += 1
            else:
                break
    counters.scan_events += steps
    return v


def tangents(a_l, a_r, T: HullTree) -> tuple[Node, Node]:
    """Attachment points on ``T.hull`` for a chain running from a_l to a_r.

    ``q_l`` is the leftward tangent point from a_l (the left sentinel when
    T's head is not strictly south-west of a_l); ``q_r`` likewise from a_r
    to the right.  Cursors start the scans and are left on the results.
    """
    hull = T.hull
    h1, hk = hull.head, hull.tail
    if h1 is None:
        raise ValueError("tangents() on an empty hull tree")
    c = T.shared.counters
    if h1.x < a_l.x and h1.y < a_l.y:
        q_l = _left_tangent(a_l, T.l, c)
        T.l = q_l
        _fix_cursor_order(T, True)
    else:
        q_l = hull.lo
    if a_r.x < hk.x and a_r.y < hk.y:
        q_r = _right_tangent(a_r, T.r, c)
        T.r = q_r
        _fix_cursor_order(T, False)
    else:
        q_r = hull.hi
    return q_l, q_r


# -- construction ------------------------------------------------------------

def _insert(first: Node, last: Node, k: int, T: HullTree) -> None:
    """Insert the detached run first..last (k nodes) into T."""
    sh = T.shared
    c = sh.counters
    c.insert_calls += 1
    if sh.debug:
        sh.dirty.add(T)
    hull = T.hull
    lo, hi = hull.lo, hull.hi
    if hull.size == 0:
        link_between(lo, hi, first, last)
        hull.size = k
        T.l, T.r = first, last
        return
    h1, hk = lo.next, hi.prev
    if h1.x < first.x and h1.y < first.y:
        q_l = _left_tangent(first, T.l, c)
    else:
        q_l = lo
    if last.x < hk.x and last.y < hk.y:
        q_r = _right_tangent(last, T.r, c)
    else:
        q_r = hi
    e1 = q_l.next
    e2 = q_r.prev
    q_l.next = first
    first.prev = q_l
    last.next = q_r
    q_r.prev = last
    T.l = q_l if q_l.kind == REAL else first
    T.r = q_r if q_r.kind == REAL else last
    if e1 is q_r:
        hull.size += k
        return
    shift = sh.bits - 1 - T.depth
    if shift < 0:
        raise InvariantError("eviction below the rank skeleton")
    # split the evicted run by rank bit into two linked runs
    lf = ll = rf = rl = None
    nl = nr = 0
    v = e1
    stop = e2.next
    while v is not stop:
        nxt = v.next
        if (v.rank >> shift) & 1:
            if rf is None:
                rf = v
                v.prev = None
            else:
                rl.next = v
                v.prev = rl
            rl = v
            nr += 1
        else:
            if lf is None:
                lf = v
                v.prev = None
            else:
                ll.next = v
                v.prev = ll
            ll = v
            nl += 1
        v = nxt
    hull.size += k - nl - nr
    c.evictions += nl + nr
    if nl:
        ll.next = None
        _insert(lf, ll, nl, T.child(0))
    if nr:
        rl.next = None
        _insert(rf, rl, nr, T.child(1))


def insert(C: Chain, T: HullTree) -> HullTree:
    """Insert a chain no point of which is dominated by ``T.hull``."""
    if C.size == 0:
        raise ValueError("insert() needs a nonempty chain")
    first, last, k = C.head, C.tail, C.size
    C.lo.next, C.hi.prev, C.size = C.hi, C.lo, 0
    first.prev = last.next = None
    _insert(first, last, k, T)
    T.shared.live += k
    if T.shared.debug:
        _check_dirty(T.shared)
    return T


def build_tree(points, debug: bool = False, case_rule: str = "geometric") -> HullTree:
    """Plane-sweep construction: rank by x, insert one by one by rising y.

    Ties in y are inserted right to left so that every new point is the
    unique top of what has been inserted so far.
    """
    pts = list(points)
    T = HullTree.empty(len(pts), debug=debug, case_rule=case_rule)
    by_x = sorted(pts, key=x_key)
    nodes = [Node(p.x, p.y, p.id, rank) for rank, p in enumerate(by_x)]
    nodes.sort(key=lambda n: (n.y, -n.x))
    sh = T.shared
    for node in nodes:
        _insert(node, node, 1, T)
        sh.live += 1
        if debug:
            if T.hull.tail is not node:
                raise InvariantError(f"tail property broken after inserting {node}")
            _check_dirty(sh)
    if debug:
        validate(T).raise_if_failed()
    return T


# -- peeling -----------------------------------------------------------------

def below(T: HullTree | None, p_l: Node, p_r: Node) -> bool:
    """True iff no vertex of ``T.hull`` is strictly above the line p_l p_r.

    A sentinel endpoint answers False outright.  On a False answer the
    cursor that moved rests on a vertex above the line.
    """
    if T is None or T.hull.size == 0:
        return True
    if p_l.kind != REAL or p_r.kind != REAL:
        return False
    c = T.shared.counters
    px, py = p_l.x, p_l.y
    dx, dy = p_r.x - px, p_r.y - py
    r = T.r
    p = r.prev
    steps = 0
    if p.kind != REAL or dx * (r.y - p.y) - dy * (r.x - p.x) >= 0:
        # the highest vertex is at or right of T.r: sweep T.l rightwards
        v = T.l
        while dx * (v.y - py) - dy * (v.x - px) <= 0:
            n = v.next
            if n.kind != REAL or dx * (n.y - v.y) - dy * (n.x - v.x) <= 0:
                break
            if T.r is v:
                T.r = n
            v = n
            steps += 1
        T.l = v
    else:
        v = r
        while dx * (v.y - py) - dy * (v.x - px) <= 0:
            p = v.prev
            if p.kind != REAL or dx * (v.y - p.y) - dy * (v.x - p.x) >= 0:
                break
            if T.l is v:
                T.l = p
            v = p
            steps += 1
        T.r = v
    c.scan_events += steps
    return dx * (v.y - py) - dy * (v.x - px) <= 0


def _side(p: Node, q: Node, s: Node) -> int:
    """+1 above, 0 on, -1 below the line through real p and q."""
    d = (q.x - p.x) * (s.y - p.y) - (q.y - p.y) * (s.x - p.x)
    sgn = (d > 0) - (d < 0)
    if q.x > p.x:
        return sgn
    if q.x < p.x:
        return -sgn
    if s.x == p.x:
        return 0
    return 1 if (s.x < p.x) == (q.y > p.y) else -1


def get_bridge(TL: HullTree | None, TR: HullTree | None) -> tuple[Node, Node]:
    """Bridge between the hulls of two trees where TL precedes TR.

    Degenerate outcomes: an empty TL, or a TL whose hull is one point right
    under head(TR), gives ``(CORNER_NEG, head(TR))``; an empty TR or ``tail(TL).y >= tail(TR).y`` gives ``(tail(TL), CORNER_POS)``.
    Otherwise TL.l and TR.r walk to the bridge points; on the bridge line
    the outermost vertices are chosen.
    """
    l_ok, r_ok = _nonempty(TL), _nonempty(TR)
    if not l_ok and not r_ok:
        raise ValueError("get_bridge() on two empty trees")
    if not l_ok:
        return CORNER_NEG, TR.hull.head
    if not r_ok or TL.hull.tail.y >= TR.hull.tail.y:
        return TL.hull.tail, CORNER_POS
    c = TL.shared.counters
    p, q = TL.l, TR.r
    budget = 4 * (TL.hull.size + TR.hull.size) + 8
    steps = 0
    while True:
        if steps > budget:
            raise InvariantError("get_bridge failed to converge")
        n = p.next
        if n.kind == REAL and _side(p, q, n) > 0:
            p = n
            steps += 1
            continue
        n = p.prev
        if n.kind == REAL and _side(p, q, n) >= 0:
            p = n
            steps += 1
            continue
        n = q.next
        if n.kind == REAL and _side(p, q, n) >= 0:
            q = n
            steps += 1
            continue
        n = q.prev
        if n.kind == REAL and _side(p, q, n) > 0:
            q = n
            steps += 1
            continue
        break
    c.scan_events += steps
    if p.x == q.x:
        # the left hull is one point straight under head(TR): it adds nothing
        TR.r = q
        _fix_cursor_order(TR, False)
        return CORNER_NEG, q
    TL.l = p
    _fix_cursor_order(TL, True)
    TR.r = q
    _fix_cursor_order(TR, False)
    return p, q


def _breaches_roof(T: HullTree | None, a_l: Node, a_r: Node) -> bool:
    """Does any vertex of T.hull rise strictly above the roof a_l a_r?"""
    if not _nonempty(T):
        return False
    use = not below(T, a_l, a_r)
    if use and (a_l.kind != REAL or a_r.kind != REAL):
        # sentinel roofs: vertical line at a_r.x or horizontal line at a_l.y
        if a_l.kind != REAL and a_r.kind != REAL:
            return True
        if a_l.kind != REAL:
            return T.hull.head.x < a_r.x
        return T.hull.tail.y > a_l.y
    return use


def _roof_tangents(T: HullTree, a_l: Node, a_r: Node) -> tuple[Node, Node]:
    """Ends of the run of T.hull that the roof a_l a_r will rest on."""
    c = T.shared.counters
    hull = T.hull
    if a_l.kind == REAL:
        t_l = _right_tangent(a_l, T.l, c)
    else:
        t_l = hull.head
    T.l = t_l
    _fix_cursor_order(T, True)
    if a_r.kind == REAL:
        t_r = _left_tangent(a_r, T.r, c)
    else:
        t_r = hull.tail
    T.r = t_r
    _fix_cursor_order(T, False)
    if t_l.x > t_r.x:
        raise InvariantError("roof tangents out of order")
    return t_l, t_r


def _take_run(T: HullTree, first: Node, last: Node) -> tuple[Node, Node, int]:
    """Detach first..last from T.hull; returns the hole's neighbours and size."""
    count = 1
    n = first
    while n is not last:
        n = n.next
        count += 1
        if n is None or n.kind != REAL:
            raise InvariantError("run is not a subchain of the hull")
    a, b = cut(first, last)
    T.hull.size -= count
    return a, b, count


def _repair(T: HullTree, a_l: Node, a_r: Node) -> None:
    """Rebuild T.hull after the run between a_l and a_r has been cut out."""
    sh = T.shared
    c = sh.counters
    c.delete_calls += 1
    if sh.debug:
        sh.dirty.add(T)
    L, R = T.left, T.right
    use_l = _breaches_roof(L, a_l, a_r)
    use_r = _breaches_roof(R, a_l, a_r)
    if use_l:
        L_l, L_r = _roof_tangents(L, a_l, a_r)
    if use_r:
        R_l, R_r = _roof_tangents(R, a_l, a_r)

    if use_l and use_r:
        if sh.case_rule == "literal":
            only_r = above(a_r, L_l, R_l)
            only_l = above(R_l, a_l, L_r)
        else:
            only_r = not above(a_l, R_l, L_l)
            only_l = not above(L_r, a_r, R_r)
    else:
        only_r = only_l = False

    hull = T.hull
    if not use_l and not use_r:
        pass
    elif use_r and (not use_l or only_r):
        ra, rb, k = _take_run(R, R_l, R_r)
        c.promotions += k
        link_between(a_l, a_r, R_l, R_r)
        hull.size += k
        _repair(R, ra, rb)
    elif use_l and (not use_r or only_l):
        la, lb, k = _take_run(L, L_l, L_r)
        c.promotions += k
        link_between(a_l, a_r, L_l, L_r)
        hull.size += k
        _repair(L, la, lb)
    else:
        q_l, q_r = get_bridge(L, R)
        if q_l.kind != REAL or q_r.kind != REAL:
            raise InvariantError("degenerate bridge while both subtrees rise")
        if q_l.x < L_l.x or q_r.x > R_r.x:
            raise InvariantError("bridge outside the roof tangents")
        la, lb, kl = _take_run(L, L_l, q_l)
        ra, rb, kr = _take_run(R, q_r, R_r)
        c.promotions += kl + kr
        q_l.next = q_r
        q_r.prev = q_l
        link_between(a_l, a_r, L_l, R_r)
        hull.size += kl + kr
        _repair(L, la, lb)
        _repair(R, ra, rb)

    T.l = a_l if a_l.kind == REAL else hull.head
    T.r = a_r if a_r.kind == REAL else hull.tail


def delete(T: HullTree, first: Node, last: Node) -> Chain:
    """Remove the subchain first..last of T.hull; returns it as a chain."""
    a_l, a_r, k = _take_run(T, first, last)
    T.shared.live -= k
    out = Chain()
    link_between(out.lo, out.hi, first, last)
    out.size = k
    _repair(T, a_l, a_r)
    if T.shared.debug:
        _check_dirty(T.shared)
    return out


def extract_hull(T: HullTree) -> Chain:
    """Remove and return the root hull chain."""
    if T.hull.size == 0:
        raise LookupError("nothing to extract")
    return delete(T, T.hull.head, T.hull.tail)


def purge_marked(T: HullTree, is_marked: Callable[[int], bool]) -> int:
    """Delete marked points from the root hull until it holds none.

    Only nodes promoted into a repaired gap are rescanned.
    """
    purged = 0
    hull = T.hull
    v = hull.lo.next
    while v.kind == REAL:
        if not is_marked(v.id):
            v = v.next
            continue
        end = v
        while end.next.kind == REAL and is_marked(end.next.id):
            end = end.next
        a_l, a_r, k = _take_run(T, v, end)
        purged += k
        T.shared.live -= k
        _repair(T, a_l, a_r)
        v = a_l.next if a_l.kind == REAL else hull.lo.next
    if T.shared.debug and purged:
        _check_dirty(T.shared)
    return purged


# -- validation --------------------------------------------------------------

@dataclass
class ValidationReport:
    ok: bool
    code: str = ""
    path: str = ""
    detail: str = ""

    def raise_if_failed(self) -> None:
        if not self.ok:
            raise InvariantError(f"{self.code} at {self.path or 'root'}: {self.detail}")


def _path(T: HullTree) -> str:
    return format(T.prefix, f"0{T.depth}b") if T.depth else ""


def _dominated_all(parent: Chain, child: Chain) -> bool:
    if child.size == 0:
        return True
    h = parent.head
    if h is None:
        return False
    seg = h
    for v in child:
        if v.x < h.x:
            return False
        while seg.next.kind == REAL and seg.next.x < v.x:
            seg = seg.next
        n = seg.next
        if n.kind != REAL:
            if v.y > seg.y:
                return False
        elif orientation(seg, n, v) > 0:
            return False
    return True


def _check_node(T: HullTree) -> tuple[str, str] | None:
    hull = T.hull
    why = chain_violation(hull)
    if why:
        return why, str(hull.coords()[:8])
    sh = T.shared
    shift = sh.bits - T.depth
    seen_l = seen_r = False
    for n in hull:
        if shift >= 0 and (n.rank >> shift) != T.prefix:
            return "rank", f"{n} does not belong at this node"
        if shift < 0:
            return "rank", f"{n} below the rank skeleton"
        seen_l = seen_l or n is T.l
        seen_r = seen_r or n is T.r
    if hull.size:
        if not (seen_l and seen_r):
            return "cursor", "cursor off the chain"
        if T.l.x > T.r.x:
            return "cursor", f"l={T.l} right of r={T.r}"
    for ch in (T.left, T.right):
        if ch is None:
            continue
        if not _dominated_all(hull, ch.hull):
            return "hull", f"child {_path(ch)} rises above the node's hull"
    return None


def _check_dirty(sh: _Shared) -> None:
    todo = set(sh.dirty)
    for t in sh.dirty:
        if t.parent is not None:
            todo.add(t.parent)
    sh.dirty.clear()
    for t in todo:
        bad = _check_node(t)
        if bad:
            raise InvariantError(f"{bad[0]} at {_path(t) or 'root'}: {bad[1]}")


def validate(T: HullTree) -> ValidationReport:
    """Full check: chains, cursors, child domination, rank residency, census."""
    ids: set[int] = set()
    total = 0
    for t in T.subtrees():
        bad = _check_node(t)
        if bad:
            return ValidationReport(False, bad[0], _path(t), bad[1])
        for n in t.hull:
            if n.id in ids:
                return ValidationReport(False, "census", _path(t), f"point {n.id} on two chains")
            ids.add(n.id)
        total += t.hull.size
    if total != T.shared.live:
        return ValidationReport(False, "census", "", f"{total} chain nodes for {T.shared.live} live points")
    return ValidationReport(True)


def tree_points(T: HullTree) -> list[Node]:
    return [n for t in T.subtrees() for n in t.hull]
