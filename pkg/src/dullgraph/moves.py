"""Orientation moves and chain surgery on oriented dull graphs.

Two orientations of the same dull graph differ by at most one opposite
orientation followed by partial flips along free chains.  A partial flip
is realised geometrically by blowing a free chain down to a free point and
blowing it back up upside down; ``invert_chain`` performs that surgery on
the graph and checks that it lands on the flipped orientation.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import NamedTuple, Sequence

from .errors import NotExceptionalError, StructuralError, SurgeryError
from .graph import (
    DullGraph,
    Edge,
    FreeChain,
    Orientation,
    Vertex,
    _chains,
    _require_valid,
    chain_containing,
    chain_upward,
    find_isomorphism,
    validate_orientation,
)


# --------------------------------------------------------------------------
# move scripts


@dataclass(frozen=True)
class Opposite:
    def to_json(self):
        return {"op": "opposite"}


@dataclass(frozen=True)
class PartialFlip:
    chain: str  # any vertex of the chain

    def to_json(self):
        return {"op": "partial_flip", "chain": self.chain}


@dataclass(frozen=True)
class Blowup:
    vertex: str | int  # vertex id, or corner index when acting on a polytope
    size: Fraction | None = None

    def to_json(self):
        out = {"op": "blowup", "vertex": self.vertex}
        if self.size is not None:
            out["size"] = str(self.size)
        return out


@dataclass(frozen=True)
class Blowdown:
    edge: tuple[str, str]

    def to_json(self):
        return {"op": "blowdown", "edge": list(self.edge)}


Move = Opposite | PartialFlip | Blowup | Blowdown
MoveScript = tuple  # of Move


class Surgery(NamedTuple):
    graph: DullGraph
    orientation: Orientation
    created: tuple[str, ...]


def apply_moves(g: DullGraph, o: Orientation, script: Sequence[Move]) -> tuple[DullGraph, Orientation]:
    """Replay a move script, checking each move against the current state."""
    for move in script:
        if isinstance(move, Opposite):
            o = opposite(g, o)
        elif isinstance(move, PartialFlip):
            o = partial_flip(g, o, move.chain)
        elif isinstance(move, Blowup):
            g, o, _ = chain_blowup(g, o, str(move.vertex))
        elif isinstance(move, Blowdown):
            g, o, _ = chain_blowdown(g, o, move.edge)
        else:
            raise StructuralError(f"unknown move {move!r}")
    return g, o


def _check(g, o):
    _require_valid(g)
    validate_orientation(g, o).raise_if_invalid("orientation")


# --------------------------------------------------------------------------
# orientation moves


def opposite(g: DullGraph, o: Orientation) -> Orientation:
    _check(g, o)
    return Orientation(o.max_vertex, o.min_vertex, frozenset((h, t) for t, h in o.arcs))


def partial_flip(g: DullGraph, o: Orientation, chain: FreeChain | str) -> Orientation:
    _check(g, o)
    c = chain_containing(g, chain) if isinstance(chain, str) else chain
    if c.is_point:
        raise SurgeryError("partial flip undefined on trivial chains (free points)")
    if not set(c.vertices) <= set(g.by_id) or c not in _chains(g) and c.reversed() not in _chains(g):
        raise StructuralError("chain is not a free chain of this graph")
    ends = {frozenset(p) for p in c.edges()}
    arcs = {(h, t) if frozenset((t, h)) in ends else (t, h) for t, h in o.arcs}
    return Orientation(o.min_vertex, o.max_vertex, frozenset(arcs))


def _forced_arcs(g: DullGraph, lo: str, hi: str) -> set[tuple[str, str]]:
    """Directions on components that contain an extremal vertex.

    Edges run away from the minimum and towards the maximum; between the
    two they run from minimum to maximum.
    """
    arcs = set()
    for comp in g.components():
        if lo not in comp and hi not in comp:
            continue
        i = comp.index(lo) if lo in comp else None
        j = comp.index(hi) if hi in comp else None
        if i is not None and j is not None and i > j:
            comp = comp[::-1]
            i, j = len(comp) - 1 - i, len(comp) - 1 - j
        for p in range(len(comp) - 1):
            up = (comp[p], comp[p + 1])
            down = (comp[p + 1], comp[p])
            if i is not None and j is not None:
                arcs.add(up if i <= p < j else down)
            elif i is not None:
                arcs.add(up if p >= i else down)
            else:
                arcs.add(up if p < j else down)
    return arcs


def enumerate_orientations(g: DullGraph) -> list[Orientation]:
    """Every valid orientation: 2 * 2**(number of free chains with an edge)."""
    _require_valid(g)
    a, b = g.extremal_ids
    chains = [c for c in _chains(g) if not c.is_point]
    out = []
    for lo, hi in ((a, b), (b, a)):
        forced = _forced_arcs(g, lo, hi)
        for flips in product((False, True), repeat=len(chains)):
            arcs = set(forced)
            for c, flip in zip(chains, flips):
                arcs.update((h, t) if flip else (t, h) for t, h in c.edges())
            out.append(Orientation(lo, hi, frozenset(arcs)))
    return out


def orientation_path(g: DullGraph, o1: Orientation, o2: Orientation) -> MoveScript:
    """At most one Opposite, then one PartialFlip per chain that disagrees."""
    _check(g, o1)
    _check(g, o2)
    script = []
    cur = o1
    if cur.min_vertex != o2.min_vertex:
        script.append(Opposite())
        cur = opposite(g, cur)
    for c in _chains(g):
        if c.is_point:
            continue
        e = g.edge_between(*c.vertices[:2])
        if cur.head(e) != o2.head(e):
            script.append(PartialFlip(min(c.vertices)))
    return tuple(script)


# --------------------------------------------------------------------------
# chain surgery


def find_exceptional_edge(chain: FreeChain | Sequence[int]) -> int:
    """1-based index of the sphere of self-intersection -1 in a chain.

    Labels are read in chain order with the convention that both ends carry
    an extra weight 1.  The largest label (first one on ties) must equal the
    sum of its neighbours.
    """
    labels = tuple(chain.labels if isinstance(chain, FreeChain) else chain)
    if not labels:
        raise NotExceptionalError("a free point has no edges")
    m = (1,) + labels + (1,)
    j = max(range(1, len(m) - 1), key=lambda i: (m[i], -i))
    if m[j - 1] + m[j + 1] != m[j]:
        raise NotExceptionalError(
            f"chain {labels} is not realizable: largest label {m[j]} != {m[j - 1]} + {m[j + 1]}")
    return j


def _fresh_ids(g: DullGraph, count: int) -> list[str]:
    used = set(g.by_id)
    out, i = [], 0
    while len(out) < count:
        cand = f"v{i}"
        if cand not in used:
            out.append(cand)
            used.add(cand)
        i += 1
    return out


def chain_blowdown(g: DullGraph, o: Orientation, edge) -> Surgery:
    """Collapse an exceptional sphere of a free chain to one fixed point."""
    _check(g, o)
    a, b = tuple(edge) if not isinstance(edge, Edge) else (edge.a, edge.b)
    target = g.edge_between(a, b)
    c = chain_containing(g, a)
    up = chain_upward(g, o, c)
    pairs = [frozenset(p) for p in up.edges()]
    j = pairs.index(target.ends) + 1
    m = (1,) + up.labels + (1,)
    if m[j] != m[j - 1] + m[j + 1]:
        raise NotExceptionalError(
            f"edge {a}-{b} with label {m[j]} is not exceptional ({m[j - 1]} + {m[j + 1]} != {m[j]})")

    t, h = o.tail(target), o.head(target)
    (w,) = _fresh_ids(g, 1)
    verts = [v for v in g.vertices if v.id not in (t, h)] + [Vertex(w)]
    edges, arcs = [], set()
    for e in g.edges:
        if e is target or e == target:
            continue
        x, y = o.tail(e), o.head(e)
        x = w if x in (t, h) else x
        y = w if y in (t, h) else y
        edges.append(Edge(x, y, e.k))
        arcs.add((x, y))
    g2 = DullGraph.build(verts, edges)
    o2 = Orientation(o.min_vertex, o.max_vertex, frozenset(arcs))
    return Surgery(g2, o2, (w,))


def chain_blowup(g: DullGraph, o: Orientation, v: str) -> Surgery:
    """Blow up a non-extremal fixed point of a free chain.

    With weights ``(m2, -m1)`` at ``v`` the point is replaced by two points
    joined by a new sphere labelled ``m1 + m2``; the incoming edge stays
    with the lower point and the outgoing edge with the upper one.
    """
    _check(g, o)
    vert = g.vertex(v)
    if vert.is_fat or vert.is_extremal:
        raise SurgeryError(f"blowup is only supported at non-extremal isolated points, not {v!r}")
    chain_containing(g, v)
    inc = g.incident[v]
    into = [e for e in inc if o.head(e) == v]
    out = [e for e in inc if o.tail(e) == v]
    m1 = into[0].k if into else 1
    m2 = out[0].k if out else 1
    lo, hi = _fresh_ids(g, 2)
    verts = [x for x in g.vertices if x.id != v] + [Vertex(lo), Vertex(hi)]
    edges, arcs = [Edge(lo, hi, m1 + m2)], {(lo, hi)}
    for e in g.edges:
        x, y = o.tail(e), o.head(e)
        if y == v:
            y = lo
        if x == v:
            x = hi
        edges.append(Edge(x, y, e.k))
        arcs.add((x, y))
    g2 = DullGraph.build(verts, edges)
    o2 = Orientation(o.min_vertex, o.max_vertex, frozenset(arcs))
    return Surgery(g2, o2, (lo, hi))


def blowdown_positions(labels: Sequence[int]) -> list[int]:
    """Positions of the blowup points that build a chain from a free point.

    Entry ``j`` is the number of fixed points of the j-th intermediate chain
    whose moment value is at most that of the point blown up at step ``j``
    (i.e. its 1-based position from the bottom).
    """
    labels = list(labels)
    rec = []
    while labels:
        j = find_exceptional_edge(labels)
        del labels[j - 1]
        rec.append(j)
    return rec[::-1]


class InvertedChain(NamedTuple):
    graph: DullGraph
    orientation: Orientation
    script: MoveScript


def invert_chain(g: DullGraph, o: Orientation, chain: FreeChain | str) -> InvertedChain:
    """Blow a free chain down to a free point and back up upside down.

    The blown-up chain is renamed onto the ids of the original chain (read in
    the opposite direction), so the returned graph equals ``g`` and the
    orientation equals the partial flip of ``o`` along the chain.  Replaying
    ``script`` reproduces the same state up to that renaming.
    """
    _check(g, o)
    start = chain_upward(g, o, chain)
    if start.is_point:
        return InvertedChain(g, o, ())

    script: list[Move] = []
    cur_g, cur_o, anchor = g, o, start.vertices[0]
    ranks = []
    while True:
        up = chain_upward(cur_g, cur_o, anchor)
        if up.is_point:
            break
        j = find_exceptional_edge(up.labels)
        edge = (up.vertices[j - 1], up.vertices[j])
        script.append(Blowdown(edge))
        cur_g, cur_o, (anchor,) = chain_blowdown(cur_g, cur_o, edge)
        ranks.append(chain_upward(cur_g, cur_o, anchor).vertices.index(anchor) + 1)

    for r in reversed(ranks):
        up = chain_upward(cur_g, cur_o, anchor)
        v = up.vertices[len(up.vertices) - r]
        script.append(Blowup(v))
        cur_g, cur_o, (anchor, _) = chain_blowup(cur_g, cur_o, v)

    new = chain_upward(cur_g, cur_o, anchor)
    rename = dict(zip(new.vertices, start.vertices[::-1]))
    out_g = cur_g.relabel(rename)
    out_o = cur_o.relabel(rename)
    if out_g != g or out_o != partial_flip(g, o, start):
        raise AssertionError("inverted chain blowup did not reproduce the partial flip")
    return InvertedChain(out_g, out_o, tuple(script))


# --------------------------------------------------------------------------
# deciding equivariant diffeomorphism


class Verdict(enum.Enum):
    NO = "no"
    YES_ORIENTATION_PRESERVING = "yes-orientation-preserving"
    YES_BOTH_ORIENTATIONS = "yes-both-orientations"

    @property
    def diffeomorphic(self) -> bool:
        return self is not Verdict.NO


def decide_equivariant_diffeo(g1: DullGraph, g2: DullGraph) -> Verdict:
    """Equivariantly diffeomorphic exactly when the dull graphs are isomorphic.

    An orientation-reversing equivariant diffeomorphism exists as well
    exactly when the second Betti number is 2.
    """
    from .cohomology import betti

    if find_isomorphism(g1, g2) is None:
        return Verdict.NO
    if betti(g1)[2] == 2:
        return Verdict.YES_BOTH_ORIENTATIONS
    return Verdict.YES_ORIENTATION_PRESERVING
