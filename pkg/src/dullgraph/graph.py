"""Dull graphs, orientations and decorated graphs.

A dull graph has one vertex per fixed component of a Hamiltonian circle
action on a compact symplectic four-manifold.  Thin vertices are isolated
fixed points, fat vertices are fixed surfaces (labelled by genus and
self-intersection), and an edge labelled ``k`` records a sphere with
stabilizer Z/k joining two isolated fixed points.

Every object here is an immutable value; all functions are pure.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import gcd
from typing import Iterable, Mapping

from .errors import (
    DegenerateInputError,
    InvalidGraphError,
    StructuralError,
    ValidationReport,
    Violation,
)

THIN = "thin"
FAT = "fat"
EXTREMAL_VALUES = ("none", "min", "max", "extremal")


@dataclass(frozen=True)
class Vertex:
    id: str
    kind: str = THIN
    extremal: str = "none"
    genus: int | None = None
    e: int | None = None

    @property
    def is_fat(self) -> bool:
        return self.kind == FAT

    @property
    def is_extremal(self) -> bool:
        return self.extremal != "none"

    def label(self) -> tuple:
        """Label used for isomorphism testing; the vertex id is not part of it.

        Frozen order: thin < fat, thin ordered by the extremal flag, fat by (g, e).
        """
        if self.is_fat:
            return (1, self.genus or 0, self.e or 0)
        return (0, int(self.is_extremal))


@dataclass(frozen=True)
class Edge:
    a: str
    b: str
    k: int

    def __post_init__(self):
        if self.b < self.a:
            a, b = self.b, self.a
            object.__setattr__(self, "a", a)
            object.__setattr__(self, "b", b)

    @property
    def ends(self) -> frozenset:
        return frozenset((self.a, self.b))

    def other(self, v: str) -> str:
        return self.b if v == self.a else self.a


def thin(id, extremal="none"):
    return Vertex(str(id), THIN, extremal)


def fat(id, genus=0, e=0, extremal="extremal"):
    return Vertex(str(id), FAT, extremal, genus, e)


@dataclass(frozen=True)
class DullGraph:
    vertices: tuple[Vertex, ...]
    edges: tuple[Edge, ...] = ()

    def __post_init__(self):
        # normalized ordering so that equal graphs compare equal
        object.__setattr__(self, "vertices", tuple(sorted(self.vertices, key=lambda v: v.id)))
        edges = [e if isinstance(e, Edge) else Edge(str(e[0]), str(e[1]), int(e[2])) for e in self.edges]
        object.__setattr__(self, "edges", tuple(sorted(edges, key=lambda e: (e.a, e.b, e.k))))

    @classmethod
    def build(cls, vertices: Iterable[Vertex], edges: Iterable = ()) -> "DullGraph":
        return cls(tuple(vertices), tuple(edges))

    @cached_property
    def by_id(self) -> dict[str, Vertex]:
        return {v.id: v for v in self.vertices}

    @cached_property
    def incident(self) -> dict[str, tuple[Edge, ...]]:
        inc: dict[str, list[Edge]] = {v.id: [] for v in self.vertices}
        for e in self.edges:
            for end in (e.a, e.b):
                inc.setdefault(end, []).append(e)
        return {k: tuple(v) for k, v in inc.items()}

    def vertex(self, vid: str) -> Vertex:
        try:
            return self.by_id[vid]
        except KeyError:
            raise StructuralError(f"unknown vertex {vid!r}") from None

    def degree(self, vid: str) -> int:
        return len(self.incident.get(vid, ()))

    def edge_between(self, a: str, b: str) -> Edge:
        for e in self.incident.get(a, ()):
            if e.other(a) == b:
                return e
        raise StructuralError(f"no edge between {a!r} and {b!r}")

    @property
    def extremal_ids(self) -> tuple[str, ...]:
        return tuple(v.id for v in self.vertices if v.is_extremal)

    def components(self) -> list[list[str]]:
        """Connected components, each listed end to end when it is a path."""
        return [list(c) for c in self._components]

    @cached_property
    def _components(self) -> tuple[tuple[str, ...], ...]:
        seen: set[str] = set()
        out = []
        for v in self.vertices:
            if v.id in seen:
                continue
            comp = self._reach(v.id)
            seen.update(comp)
            ends = sorted(x for x in comp if self.degree(x) <= 1)
            start = ends[0] if ends else min(comp)
            out.append(tuple(self._walk(start, comp)))
        return tuple(out)

    @cached_property
    def report(self) -> ValidationReport:
        """Cached result of ``validate_dull``."""
        return validate_dull(self)

    def _reach(self, start):
        stack, comp = [start], {start}
        while stack:
            x = stack.pop()
            for e in self.incident.get(x, ()):
                y = e.other(x)
                if y not in comp:
                    comp.add(y)
                    stack.append(y)
        return comp

    def _walk(self, start, comp):
        order, prev, cur = [start], None, start
        while True:
            nxt = [e.other(cur) for e in self.incident.get(cur, ()) if e.other(cur) != prev]
            nxt = [y for y in nxt if y not in order]
            if not nxt:
                break
            prev, cur = cur, nxt[0]
            order.append(cur)
        # cycles or branching leave vertices unvisited; keep them so nothing is lost
        order.extend(sorted(comp - set(order)))
        return order

    def relabel(self, mapping: Mapping[str, str]) -> "DullGraph":
        m = lambda x: mapping.get(x, x)
        verts = [Vertex(m(v.id), v.kind, v.extremal, v.genus, v.e) for v in self.vertices]
        edges = [Edge(m(e.a), m(e.b), e.k) for e in self.edges]
        return DullGraph.build(verts, edges)


@dataclass(frozen=True)
class Orientation:
    min_vertex: str
    max_vertex: str
    arcs: frozenset = field(default_factory=frozenset)  # (tail, head) pairs

    def __post_init__(self):
        object.__setattr__(self, "arcs", frozenset((str(t), str(h)) for t, h in self.arcs))

    def head(self, edge: Edge) -> str:
        if (edge.a, edge.b) in self.arcs:
            return edge.b
        if (edge.b, edge.a) in self.arcs:
            return edge.a
        raise StructuralError(f"edge {edge.a}-{edge.b} has no direction")

    def tail(self, edge: Edge) -> str:
        return edge.other(self.head(edge))

    def relabel(self, mapping: Mapping[str, str]) -> "Orientation":
        m = lambda x: mapping.get(x, x)
        return Orientation(m(self.min_vertex), m(self.max_vertex), frozenset((m(t), m(h)) for t, h in self.arcs))


@dataclass(frozen=True)
class DecoratedGraph:
    graph: DullGraph
    moment: Mapping[str, Fraction]
    area: Mapping[str, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "moment", {str(k): Fraction(v) for k, v in self.moment.items()})
        object.__setattr__(self, "area", {str(k): Fraction(v) for k, v in self.area.items()})

    def __hash__(self):
        return hash((self.graph, tuple(sorted(self.moment.items())), tuple(sorted(self.area.items()))))


@dataclass(frozen=True)
class FreeChain:
    vertices: tuple[str, ...]
    labels: tuple[int, ...]

    @property
    def is_point(self) -> bool:
        return not self.labels

    def reversed(self) -> "FreeChain":
        return FreeChain(self.vertices[::-1], self.labels[::-1])

    def edges(self) -> list[tuple[str, str]]:
        return list(zip(self.vertices, self.vertices[1:]))


# --------------------------------------------------------------------------
# validation


def validate_dull(g: DullGraph) -> ValidationReport:
    bad: list[Violation] = []
    ids = [v.id for v in g.vertices]
    if len(set(ids)) != len(ids):
        dupes = sorted({i for i in ids if ids.count(i) > 1})
        bad.append(Violation("duplicate-id", "vertex ids must be unique", tuple(dupes)))
    known = set(ids)

    for v in g.vertices:
        if v.kind not in (THIN, FAT):
            bad.append(Violation("kind", f"unknown vertex kind {v.kind!r}", (v.id,)))
        if v.extremal not in EXTREMAL_VALUES:
            bad.append(Violation("extremal-label", f"unknown extremal label {v.extremal!r}", (v.id,)))
        if v.is_fat:
            if not v.is_extremal:
                bad.append(Violation("fat-not-extremal", "fixed surfaces are always extremal", (v.id,)))
            if v.genus is None or v.e is None:
                bad.append(Violation("fat-labels", "fat vertex needs genus and self-intersection", (v.id,)))
            elif v.genus < 0:
                bad.append(Violation("fat-labels", "genus must be nonnegative", (v.id,)))
        elif v.genus is not None or v.e is not None:
            bad.append(Violation("thin-labels", "thin vertices carry no genus or self-intersection", (v.id,)))

    pairs = set()
    for e in g.edges:
        if e.a not in known or e.b not in known:
            bad.append(Violation("unknown-vertex", "edge refers to an unknown vertex", (e.a, e.b)))
            continue
        if e.a == e.b:
            bad.append(Violation("self-loop", "edge joins a vertex to itself", (e.a,)))
        if e.ends in pairs:
            bad.append(Violation("cycle", "two edges join the same pair of vertices", (e.a, e.b)))
        pairs.add(e.ends)
        if e.k < 2:
            bad.append(Violation("edge-label", f"edge label {e.k} is below 2", (e.a, e.b)))
        for end in (e.a, e.b):
            if g.by_id[end].is_fat:
                bad.append(Violation("fat-edge", "fat vertices have no edges", (end, e.a, e.b)))

    n_ext = len(g.extremal_ids)
    if n_ext != 2:
        bad.append(Violation("extremal-count", f"need exactly two extremal vertices, found {n_ext}", g.extremal_ids))

    for v in g.vertices:
        if g.degree(v.id) > 2:
            bad.append(Violation("degree", f"degree {g.degree(v.id)} exceeds 2", (v.id,)))

    if bad and any(x.code in ("unknown-vertex", "duplicate-id") for x in bad):
        return ValidationReport(tuple(bad))

    for comp in g.components():
        n_edges = len({e for x in comp for e in g.incident[x]})
        if n_edges != len(comp) - 1:
            bad.append(Violation("cycle", "component is not a simple path", tuple(comp)))

    fats = [v for v in g.vertices if v.is_fat]
    if len(fats) > 2:
        bad.append(Violation("fat-count", "at most two fixed surfaces", tuple(v.id for v in fats)))
    if any((v.genus or 0) > 0 for v in fats):
        if len(fats) != 2 or fats[0].genus != fats[1].genus:
            bad.append(Violation(
                "genus", "a positive-genus surface needs a second surface of the same genus",
                tuple(v.id for v in fats)))

    for v in g.vertices:
        if v.is_fat:
            continue
        labels = [e.k for e in g.incident[v.id]] + [1, 1]
        if gcd(labels[0], labels[1]) != 1:
            bad.append(Violation("coprime", f"adjacent labels {labels[0]}, {labels[1]} are not coprime", (v.id,)))

    if not any(x.code in ("cycle", "degree") for x in bad):
        for chain in _chains(g):
            m = (1,) + chain.labels + (1,)
            for j in range(1, len(m) - 1):
                if (m[j - 1] + m[j + 1]) % m[j]:
                    ends = chain.vertices[j - 1], chain.vertices[j]
                    bad.append(Violation(
                        "divisibility",
                        f"label {m[j]} does not divide {m[j - 1]} + {m[j + 1]}", ends))
    return ValidationReport(tuple(bad))


def _require_valid(g: DullGraph):
    g.report.raise_if_invalid("dull graph")


def validate_orientation(g: DullGraph, o: Orientation) -> ValidationReport:
    known = set(g.by_id)
    mentioned = {o.min_vertex, o.max_vertex} | {x for arc in o.arcs for x in arc}
    unknown = sorted(mentioned - known)
    if unknown:
        raise StructuralError(f"orientation refers to unknown vertices {unknown}")

    bad: list[Violation] = []
    ext = set(g.extremal_ids)
    if o.min_vertex == o.max_vertex:
        bad.append(Violation("min-max", "minimum and maximum must be distinct", (o.min_vertex,)))
    if {o.min_vertex, o.max_vertex} != ext:
        bad.append(Violation("min-max", "minimum and maximum must be the extremal vertices",
                             (o.min_vertex, o.max_vertex)))

    edge_ends = {e.ends for e in g.edges}
    covered = {}
    for t, h in o.arcs:
        key = frozenset((t, h))
        if key not in edge_ends:
            bad.append(Violation("arc", "direction given for a non-edge", (t, h)))
        elif key in covered:
            bad.append(Violation("arc", "edge directed twice", (t, h)))
        covered[key] = h
    for e in g.edges:
        if e.ends not in covered:
            bad.append(Violation("arc", "edge has no direction", (e.a, e.b)))

    heads: dict[str, int] = {}
    tails: dict[str, int] = {}
    for t, h in o.arcs:
        tails[t] = tails.get(t, 0) + 1
        heads[h] = heads.get(h, 0) + 1
    if heads.get(o.min_vertex):
        bad.append(Violation("min-head", "the minimum is the head of an edge", (o.min_vertex,)))
    if tails.get(o.max_vertex):
        bad.append(Violation("max-tail", "the maximum is the tail of an edge", (o.max_vertex,)))
    for v in g.vertices:
        if v.id in (o.min_vertex, o.max_vertex):
            continue
        if heads.get(v.id, 0) > 1:
            bad.append(Violation("in-degree", "non-extremal vertex is the head of two edges", (v.id,)))
        if tails.get(v.id, 0) > 1:
            bad.append(Violation("out-degree", "non-extremal vertex is the tail of two edges", (v.id,)))
    return ValidationReport(tuple(bad))


def validate_decorated(d: DecoratedGraph) -> ValidationReport:
    g = d.graph
    bad = list(validate_dull(g).violations)
    for v in g.vertices:
        if v.id not in d.moment:
            bad.append(Violation("moment", "missing moment value", (v.id,)))
        if v.is_fat:
            a = d.area.get(v.id)
            if a is None or a <= 0:
                bad.append(Violation("area", "fixed surface needs a positive area", (v.id,)))
        elif v.id in d.area:
            bad.append(Violation("area", "only fixed surfaces carry an area", (v.id,)))
    if bad:
        return ValidationReport(tuple(bad))

    mu = d.moment
    lo, hi = min(mu.values()), max(mu.values())
    lows = [v for v in mu if mu[v] == lo]
    highs = [v for v in mu if mu[v] == hi]
    ext = set(g.extremal_ids)
    if len(lows) != 1 or len(highs) != 1 or {lows[0], highs[0]} != ext:
        bad.append(Violation("moment-extremal",
                             "extremal vertices must attain the strict minimum and maximum moment",
                             tuple(sorted(ext))))
    for e in g.edges:
        if mu[e.a] == mu[e.b]:
            bad.append(Violation("moment-edge", "edge endpoints share a moment value", (e.a, e.b)))
    if not bad:
        bad.extend(validate_orientation(g, _orient_by_moment(d)).violations)
    return ValidationReport(tuple(bad))


def dull_of(d: DecoratedGraph) -> DullGraph:
    validate_decorated(d).raise_if_invalid("decorated graph")
    return d.graph


def _orient_by_moment(d: DecoratedGraph) -> Orientation:
    mu = d.moment
    ext = d.graph.extremal_ids
    a, b = sorted(ext, key=lambda v: mu[v])
    arcs = {(e.a, e.b) if mu[e.a] < mu[e.b] else (e.b, e.a) for e in d.graph.edges}
    return Orientation(a, b, frozenset(arcs))


def induced_orientation(d: DecoratedGraph) -> Orientation:
    g = d.graph
    ext = g.extremal_ids
    if len(ext) == 2 and all(v in d.moment for v in ext) and d.moment[ext[0]] == d.moment[ext[1]]:
        raise DegenerateInputError("extremal vertices have equal moment values")
    dull_of(d)
    return _orient_by_moment(d)


# --------------------------------------------------------------------------
# weights and chains


def weights_at(g: DullGraph, o: Orientation, v: str) -> tuple[int, int]:
    """Isotropy weights at the isolated fixed point ``v``.

    A missing edge contributes a weight of magnitude 1.  The minimum has two
    positive weights and the maximum two negative ones, listed by decreasing
    magnitude; any other point has one of each sign, ``(+out, -in)``.
    """
    vert = g.vertex(v)
    if vert.is_fat:
        raise StructuralError(f"{v!r} is a fixed surface; weights are only defined at isolated points")
    inc = g.incident[v]
    if v in (o.min_vertex, o.max_vertex):
        ks = sorted([e.k for e in inc] + [1] * (2 - len(inc)), reverse=True)
        sign = 1 if v == o.min_vertex else -1
        return sign * ks[0], sign * ks[1]
    out = [e.k for e in inc if o.tail(e) == v]
    into = [e.k for e in inc if o.head(e) == v]
    return (out[0] if out else 1), -(into[0] if into else 1)


def _chains(g: DullGraph) -> list[FreeChain]:
    chains = []
    for comp in g.components():
        if any(g.by_id[x].is_extremal for x in comp):
            continue
        labels = tuple(g.edge_between(a, b).k for a, b in zip(comp, comp[1:]))
        fwd = FreeChain(tuple(comp), labels)
        rev = fwd.reversed()
        chains.append(min(fwd, rev, key=lambda c: (c.labels, c.vertices)))
    return sorted(chains, key=lambda c: min(c.vertices))


def free_chains(g: DullGraph) -> list[FreeChain]:
    """Components containing neither extremal vertex, free points included."""
    _require_valid(g)
    return _chains(g)


def chain_containing(g: DullGraph, v: str) -> FreeChain:
    g.vertex(v)
    for c in _chains(g):
        if v in c.vertices:
            return c
    raise StructuralError(f"{v!r} is not in a free chain")


def chain_upward(g: DullGraph, o: Orientation, chain: FreeChain | str) -> FreeChain:
    """The chain listed bottom to top, i.e. along the directions of ``o``."""
    c = chain_containing(g, chain) if isinstance(chain, str) else chain
    if c.is_point:
        return c
    first = g.edge_between(c.vertices[0], c.vertices[1])
    return c if o.tail(first) == c.vertices[0] else c.reversed()


# --------------------------------------------------------------------------
# canonical form and isomorphism


def _component_codes(g: DullGraph):
    out = []
    for comp in g.components():
        seqs = []
        for order in (comp, comp[::-1]):
            code = []
            for i, x in enumerate(order):
                if i:
                    code.append(g.edge_between(order[i - 1], x).k)
                code.append(g.by_id[x].label())
            seqs.append((tuple(code), order))
        out.append(min(seqs, key=lambda s: s[0]))
    return out


def canonical_key(g: DullGraph) -> tuple:
    """Sorted multiset of per-component label sequences.

    Each path is written as vertex label, edge label, vertex label, ...
    and the smaller of the two reading directions is kept.  Equal keys mean
    the graphs are isomorphic as labeled graphs.
    """
    _require_valid(g)
    return tuple(sorted(code for code, _ in _component_codes(g)))


@dataclass(frozen=True)
class Isomorphism:
    vertex_map: Mapping[str, str]
    edge_map: Mapping[frozenset, frozenset]

    def __hash__(self):
        return hash(tuple(sorted(self.vertex_map.items())))

    def to_json(self):
        return {
            "vertices": dict(sorted(self.vertex_map.items())),
            "edges": [[sorted(a), sorted(b)] for a, b in sorted(self.edge_map.items(), key=lambda kv: sorted(kv[0]))],
        }


def find_isomorphism(g1: DullGraph, g2: DullGraph) -> Isomorphism | None:
    _require_valid(g1)
    _require_valid(g2)
    if len(g1.vertices) != len(g2.vertices) or len(g1.edges) != len(g2.edges):
        return None
    pool: dict[tuple, list] = {}
    for code, order in _component_codes(g2):
        pool.setdefault(code, []).append(order)
    vmap: dict[str, str] = {}
    for code, order in _component_codes(g1):
        bucket = pool.get(code)
        if not bucket:
            return None
        target = bucket.pop()
        vmap.update(zip(order, target))
    emap = {e.ends: frozenset((vmap[e.a], vmap[e.b])) for e in g1.edges}
    return Isomorphism(vmap, emap)


def is_isomorphism(g1: DullGraph, g2: DullGraph, vmap: Mapping[str, str]) -> bool:
    """Check that ``vmap`` is a label-preserving bijection taking g1 onto g2."""
    if sorted(vmap) != sorted(g1.by_id) or sorted(vmap.values()) != sorted(g2.by_id):
        return False
    if any(g1.by_id[a].label() != g2.by_id[b].label() for a, b in vmap.items()):
        return False
    image = {(frozenset((vmap[e.a], vmap[e.b])), e.k) for e in g1.edges}
    return image == {(e.ends, e.k) for e in g2.edges}


def nontrivial_chains(g: DullGraph) -> list[FreeChain]:
    return [c for c in free_chains(g) if not c.is_point]

