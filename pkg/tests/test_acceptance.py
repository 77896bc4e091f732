"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run alone with ``pytest tests/test_acceptance.py -v`` (the lines are repeated
in the terminal summary) or as a script: ``python tests/test_acceptance.py``.
"""

from __future__ import annotations

import itertools
import random
import sys
import time
from fractions import Fraction as Q
from math import comb
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from conftest import chain_graph, graph_fixtures, load, oriented  # noqa: E402
from family import (  # noqa: E402
    abstract_family, brute_isomorphic, brute_orientations, cheap_invariant, delzant_fans,
    free_chains_upto, materialize,
)

from dullgraph.cohomology import (  # noqa: E402
    EquivariantClass, Isolated, Restriction, Surface, betti, check_fixed_data, diffeotype,
    fixed_data_of, integrate_abbv, localization_consistency, orientation_reversing_exists,
)
from dullgraph.corner import (  # noqa: E402
    CornerPolytope, blowdown_facet, blowup_at_corner, find_exceptional_facets, max_blowup_size, mirror,
    realize_chain, stabilizer_labels, validate_polytope,
)
from dullgraph.graph import (  # noqa: E402
    DullGraph, Orientation, canonical_key, chain_upward, find_isomorphism, nontrivial_chains, thin,
)
from dullgraph.maps import ToleranceConfig, run_verification_suite  # noqa: E402
from dullgraph.moves import (  # noqa: E402
    apply_moves, blowdown_positions, chain_blowdown, chain_blowup, decide_equivariant_diffeo,
    enumerate_orientations, find_exceptional_edge, invert_chain, orientation_path, partial_flip,
)

pytestmark = pytest.mark.acceptance

# family bounds for criteria 1 and 2: at most 8 vertices, edge labels at most 7,
# at most 4 edges, fixed surfaces of genus 0 or 1 with e in {-1, 0, 1}
FAMILY = dict(max_vertices=8, max_edges=4, max_label=7)
RESULTS: list[str] = []


def record(n: int, ok: bool, detail: str):
    line = f"{'PASS' if ok else 'FAIL'} criterion {n}: {detail}"
    RESULTS.append(line)
    print(line)
    assert ok, line


def catalan(n):
    return comb(2 * n, n) // (n + 1)


_family_cache: dict = {}


def family_graphs():
    if not _family_cache:
        abstract = abstract_family(**FAMILY)
        rng = random.Random(2024)
        _family_cache["plain"] = [materialize(a) for a in abstract]
        _family_cache["shuffled"] = [materialize(a, rng) for a in abstract]
    return _family_cache["plain"], _family_cache["shuffled"]


# --------------------------------------------------------------------------


def test_criterion_1_isomorphism_oracle():
    t0 = time.perf_counter()
    plain, shuffled = family_graphs()
    graphs = plain + shuffled
    keys = [canonical_key(g) for g in graphs]

    buckets: dict = {}
    for i, g in enumerate(graphs):
        buckets.setdefault(cheap_invariant(g), []).append(i)
    # graphs in different buckets are not isomorphic, so their keys must differ
    owner = {}
    cross = 0
    for b, members in buckets.items():
        for i in members:
            if owner.setdefault(keys[i], b) != b:
                cross += 1
    checked = mismatches = 0
    for members in buckets.values():
        for i, j in itertools.combinations(members, 2):
            checked += 1
            if (keys[i] == keys[j]) != brute_isomorphic(graphs[i], graphs[j]):
                mismatches += 1
    elapsed = time.perf_counter() - t0
    n = len(graphs)
    record(1, cross == 0 and mismatches == 0 and elapsed < 60,
           f"{n} graphs, {comb(n, 2)} pairs ({checked} brute-forced within invariant buckets), "
           f"{mismatches + cross} mismatches, {elapsed:.1f}s (< 60s)")


def _nontrivial_free_components(g: DullGraph) -> int:
    """Components with an edge and no extremal vertex, counted from scratch."""
    seen, count = set(), 0
    nbrs = {v.id: set() for v in g.vertices}
    for e in g.edges:
        nbrs[e.a].add(e.b)
        nbrs[e.b].add(e.a)
    for v in g.vertices:
        if v.id in seen:
            continue
        stack, comp = [v.id], []
        seen.add(v.id)
        while stack:
            x = stack.pop()
            comp.append(x)
            for y in nbrs[x] - seen:
                seen.add(y)
                stack.append(y)
        if len(comp) > 1 and not any(g.by_id[x].is_extremal for x in comp):
            count += 1
    return count


def test_criterion_2_orientations():
    t0 = time.perf_counter()
    plain, _ = family_graphs()
    bad_count = bad_brute = bad_path = pairs = 0
    for g in plain:
        found = enumerate_orientations(g)
        if len(found) != 2 * 2 ** _nontrivial_free_components(g):
            bad_count += 1
        if {(o.min_vertex, o.max_vertex, o.arcs) for o in found} != brute_orientations(g):
            bad_brute += 1
        targets = found if len(found) <= 8 else found[:2] + found[-2:]
        for o1 in targets:
            for o2 in found:
                pairs += 1
                if apply_moves(g, o1, orientation_path(g, o1, o2))[1] != o2:
                    bad_path += 1
    elapsed = time.perf_counter() - t0
    record(2, not (bad_count or bad_brute or bad_path),
           f"{len(plain)} graphs: count failures {bad_count}, brute-force mismatches {bad_brute}, "
           f"{pairs} orientation paths replayed with {bad_path} failures, {elapsed:.1f}s")


def _cp2_with_free_point(ids):
    lo, mid, hi = ids
    g = DullGraph.build([thin(lo, "min"), thin(mid), thin(hi, "max")], [(lo, hi, 2)])
    return g, Orientation(lo, hi, frozenset({(lo, hi)}))


def test_criterion_3_figure_four():
    t0 = time.perf_counter()
    g, o = _cp2_with_free_point(("a", "b", "c"))
    g, o, (lo, hi) = chain_blowup(g, o, "b")
    g, o, (_, top) = chain_blowup(g, o, hi)
    left = (g, o)
    left_labels = chain_upward(g, o, lo).labels

    # built independently, with other ids, blowing up the bottom point instead
    h, p = _cp2_with_free_point(("m", "f", "M"))
    h, p, (lo2, hi2) = chain_blowup(h, p, "f")
    h, p, (bottom, _) = chain_blowup(h, p, lo2)
    right_labels = chain_upward(h, p, hi2).labels

    iso = find_isomorphism(left[0], h)
    reversed_chain = iso is not None and iso.vertex_map[lo] == hi2 and iso.vertex_map[top] == bottom
    verdict = decide_equivariant_diffeo(left[0], h)
    inverted = invert_chain(*left, lo)
    inverted_labels = chain_upward(inverted.graph, inverted.orientation, lo).labels
    elapsed = time.perf_counter() - t0
    ok = (left_labels == (2, 3) and right_labels == (3, 2) and reversed_chain
          and verdict.diffeomorphic and inverted_labels == (3, 2)
          and inverted.orientation == partial_flip(*left, lo) and elapsed < 1)
    record(3, ok, f"chains {left_labels} and {right_labels}, isomorphic with the chain reversed: "
                  f"{reversed_chain}, verdict {verdict.value}, inverted chain {inverted_labels}, "
                  f"{elapsed * 1000:.0f}ms (< 1s)")


def test_criterion_4_exceptional_reduction():
    t0 = time.perf_counter()
    # completeness of the enumeration is checked without the label bound
    complete = [c for c in free_chains_upto(89, 8) if c]
    by_len = {L: sum(len(c) == L for c in complete) for L in range(1, 9)}
    catalan_ok = all(by_len[L] == catalan(L) for L in by_len)
    chains = [c for c in complete if max(c) <= 50]
    failed_chains = 0
    for labels in chains:
        g, o = chain_graph(list(labels))
        try:
            while nontrivial_chains(g):
                (c,) = nontrivial_chains(g)
                j = find_exceptional_edge(c)
                g, o, _ = chain_blowdown(g, o, c.vertices[j - 1:j + 1])
        except Exception:
            failed_chains += 1

    fans = delzant_fans(8)
    fans_by_n = {n: sum(len(f) == n for f in fans) for n in range(2, 9)}
    fans_ok = all(fans_by_n[n] == catalan(n - 2) for n in fans_by_n)
    rng = random.Random(7)
    failed_polys = polys = 0
    for fan in fans:
        labels = [a + b for a, b in fan[1:-1]]
        for trial in range(3):
            sizes = None
            if trial:
                sizes, p = [], CornerPolytope.quadrant()
                for r in blowdown_positions(labels):
                    bound = max_blowup_size(p, r)
                    eps = (bound or Q(3)) * Q(rng.randint(1, 99), 100)
                    sizes.append(eps)
                    p = blowup_at_corner(p, r, eps)
            p, _ = realize_chain(labels, sizes)
            polys += 1
            if p.normals != fan or not validate_polytope(p).ok:
                failed_polys += 1
                continue
            try:
                while p.n > 2:
                    p = blowdown_facet(p, find_exceptional_facets(p)[0])
                if p != CornerPolytope.quadrant():
                    failed_polys += 1
            except Exception:
                failed_polys += 1
    elapsed = time.perf_counter() - t0
    record(4, catalan_ok and fans_ok and not failed_chains and not failed_polys and elapsed < 30,
           f"{len(chains)} chains (labels <= 50, length <= 8), {failed_chains} failed; "
           f"{len(fans)} fans with n <= 8 and {polys} polytopes, {failed_polys} failed; "
           f"counts match Catalan numbers: {catalan_ok and fans_ok}; {elapsed:.1f}s (< 30s)")


def test_criterion_5_mirror_and_flip():
    chains = [c for c in free_chains_upto(50, 8) if c]
    bad = 0
    for labels in chains:
        p, _ = realize_chain(labels)
        mirrored = stabilizer_labels(mirror(p))
        g, o = chain_graph(list(labels))
        flipped = chain_upward(g, partial_flip(g, o, "c0"), "c0").labels
        if not (mirrored == stabilizer_labels(p)[::-1] == list(flipped) == list(labels[::-1])):
            bad += 1
    record(5, bad == 0, f"{len(chains)} chains: mirror labels equal reversed labels equal "
                        f"partial-flip labels, {bad} failures")


ACCEPTANCE_CONFIG = ToleranceConfig(tol_level=1e-12, tol_identity=1e-9, tol_fd=1e-6, rng_seed=0,
                                    samples=100)


def test_criterion_6_map_identities():
    t0 = time.perf_counter()
    worst = {}
    ok = True
    names = ["quadrant", "poly_one_blowup", "poly_two_blowups", "poly_three_blowups"]
    for name in names:
        rep = run_verification_suite(load(name).polytope, ACCEPTANCE_CONFIG)
        ok &= rep.ok
        for c in rep.checks:
            ok &= c.samples >= ACCEPTANCE_CONFIG.samples or c.name.startswith(("psi o psi_inverse",
                                                                                 "blowdown"))
            worst[c.name] = max(worst.get(c.name, 0.0), c.max_defect)
    elapsed = time.perf_counter() - t0
    ok &= elapsed < 60
    summary = ", ".join(f"{k} {v:.1e}" for k, v in worst.items() if k in (
        "psi K-invariance", "blowdown round trip", "blowdown symplectic slice",
        "F conjugates to (-conj z2, conj z1)", "phi_t norm", "g inner case", "H seam agreement"))
    record(6, ok, f"{len(worst)} identities on {len(names)} polytopes, worst defects: {summary}; "
                  f"{elapsed:.1f}s (< 60s)")


def test_criterion_7_localization():
    fixtures_ok = all(localization_consistency(*oriented(n)).ok for n in graph_fixtures())
    g, o = oriented("g_cp2")
    fd = fixed_data_of(g, o)
    residues = [integrate_abbv(fd, EquivariantClass({v: Restriction((1,))})).get(-2, 0) for v in "abc"]
    cp2_ok = residues == [Q(1, 2), Q(-1), Q(1, 2)] and sum(residues) == 0
    perturbed = [
        {"a": Isolated(1, 2), "b": Isolated(1, -2), "c": Isolated(-1, -2)},
        {"a": Isolated(1, 3), "b": Isolated(1, -1), "c": Isolated(-1, -2)},
        {"lo": Surface(0, 1, 1), "hi": Surface(0, 1, -1)},
        {"lo": Surface(0, 2, 1), "hi": Surface(0, -1, -1)},
    ]
    rejected = sum(not check_fixed_data(fd).ok for fd in perturbed)
    record(7, fixtures_ok and cp2_ok and rejected == len(perturbed),
           f"{len(graph_fixtures())} fixtures consistent: {fixtures_ok}; residues "
           f"{' + '.join(map(str, residues))} = {sum(residues)}; "
           f"{rejected}/{len(perturbed)} perturbed inputs rejected")


def test_criterion_8_classification():
    table = [
        ((0, 1, None), "CP^2"),
        ((0, 2, "even"), "S^2 x S^2"),
        ((0, 2, "odd"), "nontrivial S^2-bundle over S^2"),
        ((2, 2, "even"), "S^2 x Sigma_1"),
        ((2, 2, "odd"), "nontrivial S^2-bundle over Sigma_1"),
        ((0, 3, None), "1-fold blowup of S^2 x S^2"),
        ((0, 5, None), "3-fold blowup of S^2 x S^2"),
        ((4, 4, None), "2-fold blowup of S^2 x Sigma_2"),
    ]
    table_ok = all(diffeotype(*args).name == name for args, name in table)
    names = graph_fixtures()
    reversal_ok = all(orientation_reversing_exists(g) == (betti(g)[2] == 2)
                      for g, _ in map(oriented, names))
    record(8, table_ok and reversal_ok,
           f"{len(table)} table cases reproduced: {table_ok}; orientation reversal iff b2 = 2 "
           f"on {len(names)} fixtures: {reversal_ok}")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-s"]))
