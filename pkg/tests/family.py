"""Exhaustive families of small dull graphs, plus brute-force oracles.

Validity here is decided from the definitions directly (coprime labels at
every isolated point, the divisibility rule along free chains, at most two
fixed surfaces, exactly two extremal components); nothing from the
package's validator is used to build the family.
"""

from __future__ import annotations

import itertools
import random
from math import gcd

from dullgraph.graph import DullGraph, Edge, Vertex

T, X = ("T",), ("X",)  # isolated non-extremal / isolated extremal vertex labels


def F(g, e):
    return ("F", g, e)


def _coprime_ok(labels):
    return all(gcd(a, b) == 1 for a, b in zip(labels, labels[1:]))


def valid_free_chain(labels) -> bool:
    m = (1,) + tuple(labels) + (1,)
    return _coprime_ok(m) and all((m[j - 1] + m[j + 1]) % m[j] == 0 for j in range(1, len(m) - 1))


def free_chains_upto(max_label, max_len):
    """All valid free-chain label sequences (both reading directions)."""
    out = [()]
    frontier = [()]
    for _ in range(max_len):
        nxt = []
        for seq in frontier:
            m = (1,) + seq
            # the last fixed sphere needs its next neighbour k with k = -m[-2] mod m[-1]
            start = 2 if not seq else (-m[-2]) % m[-1] or m[-1]
            step = 1 if not seq else m[-1]
            for k in range(start, max_label + 1, step):
                if k >= 2 and gcd(k, m[-1]) == 1:
                    nxt.append(seq + (k,))
        frontier = nxt
        out.extend(c for c in nxt if valid_free_chain(c))
    return out


def _canon(seq):
    return min(seq, seq[::-1])


def component_catalogue(max_vertices, max_edges, max_label, fat_labels):
    """Every valid component shape, one reading direction each."""
    comps = set()
    for lab in fat_labels:
        comps.add((F(*lab),))
    for n in range(1, max_vertices + 1):
        if n - 1 > max_edges:
            break
        for kinds in itertools.product((T, X), repeat=n):
            if kinds.count(X) > 2:
                continue
            for labels in itertools.product(range(2, max_label + 1), repeat=n - 1):
                if not _coprime_ok(labels):
                    continue
                if X not in kinds and not valid_free_chain(labels):
                    continue
                seq = [kinds[0]]
                for k, v in zip(labels, kinds[1:]):
                    seq += [k, v]
                comps.add(_canon(tuple(seq)))
    return sorted(comps, key=repr)


def _stats(comp):
    verts = comp[::2]
    return len(verts), len(comp) // 2, sum(v in (X,) or v[0] == "F" for v in verts), sum(v[0] == "F" for v in verts)


def abstract_family(max_vertices=8, max_edges=3, max_label=7, fat_labels=None):
    """Multisets of components forming a valid dull graph."""
    fat_labels = fat_labels or [(g, e) for g in (0, 1) for e in (-1, 0, 1)]
    cat = component_catalogue(max_vertices, max_edges, max_label, fat_labels)
    stats = [_stats(c) for c in cat]
    out = []

    def rec(start, chosen, nv, ne, nx):
        if nx == 2:
            fats = [v for c in chosen for v in c[::2] if v[0] == "F"]
            if not (len(fats) in (0, 1) and all(f[1] == 0 for f in fats)) and not (
                    len(fats) == 2 and fats[0][1] == fats[1][1]):
                pass
            else:
                out.append(tuple(chosen))
        for i in range(start, len(cat)):
            v, e, x, _ = stats[i]
            if nv + v > max_vertices or ne + e > max_edges or nx + x > 2:
                continue
            chosen.append(cat[i])
            rec(i, chosen, nv + v, ne + e, nx + x)
            chosen.pop()

    rec(0, [], 0, 0, 0)
    return out


def materialize(abstract, rng: random.Random | None = None) -> DullGraph:
    """Concrete graph with (optionally shuffled) ids and reading directions."""
    comps = list(abstract)
    n = sum(len(c[::2]) for c in comps)
    ids = [f"v{i}" for i in range(n)]
    if rng is not None:
        rng.shuffle(ids)
        rng.shuffle(comps)
        comps = [c[::-1] if rng.random() < 0.5 else c for c in comps]
    it = iter(ids)
    verts, edges = [], []
    for c in comps:
        prev = None
        for pos, item in enumerate(c):
            if pos % 2:
                k = item
                continue
            vid = next(it)
            if item[0] == "F":
                verts.append(Vertex(vid, "fat", "extremal", item[1], item[2]))
            else:
                verts.append(Vertex(vid, "thin", "extremal" if item == X else "none"))
            if prev is not None:
                edges.append(Edge(prev, vid, k))
            prev = vid
    return DullGraph.build(verts, edges)


# --------------------------------------------------------------------------
# brute-force oracles


def _vlabel(v: Vertex):
    return ("F", v.genus, v.e) if v.is_fat else ("T", v.is_extremal)


def brute_isomorphic(g1: DullGraph, g2: DullGraph) -> bool:
    """Backtracking search for a label-preserving bijection."""
    if len(g1.vertices) != len(g2.vertices) or len(g1.edges) != len(g2.edges):
        return False
    e1 = {e.ends: e.k for e in g1.edges}
    e2 = {e.ends: e.k for e in g2.edges}
    v1 = [v.id for v in g1.vertices]
    lab1 = {v.id: _vlabel(v) for v in g1.vertices}
    lab2 = {v.id: _vlabel(v) for v in g2.vertices}
    adj1 = {v: {} for v in v1}
    for ends, k in e1.items():
        a, b = tuple(ends)
        adj1[a][b] = adj1[b][a] = k
    used, image = set(), {}

    def ok(a, b):
        for nb, k in adj1[a].items():
            if nb in image and e2.get(frozenset((b, image[nb]))) != k:
                return False
        deg2 = sum(1 for ends in e2 if b in ends)
        return deg2 == len(adj1[a])

    def rec(i):
        if i == len(v1):
            return True
        a = v1[i]
        for b in lab2:
            if b in used or lab2[b] != lab1[a] or not ok(a, b):
                continue
            used.add(b)
            image[a] = b
            if rec(i + 1):
                return True
            used.discard(b)
            del image[a]
        return False

    return rec(0)


def cheap_invariant(g: DullGraph):
    """Isomorphism invariant: per component, the multiset of (vertex label, incident edge labels).

    Components are found with a union-find of our own; the reading order
    inside a component is not part of the invariant.
    """
    parent = {v.id: v.id for v in g.vertices}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    incident = {v.id: [] for v in g.vertices}
    for e in g.edges:
        parent[find(e.a)] = find(e.b)
        incident[e.a].append(e.k)
        incident[e.b].append(e.k)
    comps: dict[str, list] = {}
    for v in g.vertices:
        comps.setdefault(find(v.id), []).append((repr(_vlabel(v)), tuple(sorted(incident[v.id]))))
    return tuple(sorted(tuple(sorted(c)) for c in comps.values()))


def brute_orientations(g: DullGraph):
    """All orientations by trying every min/max choice and every edge direction."""
    ext = [v.id for v in g.vertices if v.is_extremal]
    out = set()
    for lo, hi in ((ext[0], ext[1]), (ext[1], ext[0])):
        for dirs in itertools.product((0, 1), repeat=len(g.edges)):
            arcs = [(e.a, e.b) if d == 0 else (e.b, e.a) for e, d in zip(g.edges, dirs)]
            heads = [h for _, h in arcs]
            tails = [t for t, _ in arcs]
            if lo in heads or hi in tails:
                continue
            if any(heads.count(v) > 1 or tails.count(v) > 1
                   for v in g.by_id if v not in (lo, hi)):
                continue
            out.add((lo, hi, frozenset(arcs)))
    return out



def delzant_fans(max_normals, cap=64):
    """Normal sequences (1,0), ..., (0,1) with consecutive determinants 1 and
    interior normals in the open quadrant, found by direct search.

    ``cap`` bounds the interior coordinates; callers check completeness by
    comparing counts with the Catalan numbers.
    """
    out = []

    def rec(seq):
        u = seq[-1]
        if u == (0, 1):
            out.append(tuple(seq))
            return
        if len(seq) == max_normals:
            return
        if u[0] == 1:  # det(u, (0,1)) = 1 closes the fan
            rec(seq + [(0, 1)])
        for a in range(1, cap + 1):
            b, r = divmod(1 + u[1] * a, u[0])  # u0 b - u1 a = 1
            if not r and 1 <= b <= cap:
                rec(seq + [(a, b)])

    rec([(1, 0)])
    return out
