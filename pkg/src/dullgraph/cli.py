"""Command line for dull graphs and corner polytopes.

Exit codes: 0 for success or a positive verdict, 1 for a negative verdict
(invalid input, non-isomorphic graphs, failed checks), 2 for errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from fractions import Fraction

from . import cohomology, corner, graph, io, maps, moves
from .errors import DullGraphError

OK, NO, ERROR = 0, 1, 2


class Result:
    def __init__(self, code=OK, payload=None, text=None, doc=None):
        self.code = code
        self.payload = payload if payload is not None else (doc.to_json() if doc else {})
        self.text = text
        self.doc = doc


def _doc(path, check=True) -> io.Document:
    return io.load(path, check)


def _need(value, what, path):
    if value is None:
        raise DullGraphError(f"{path}: document has no {what} section")
    return value


def _graph(path):
    d = _doc(path)
    return _need(d.graph, "dull_graph or decorated_graph", path), d


def _oriented(path):
    """Graph and orientation; a decorated graph supplies its own orientation."""
    g, d = _graph(path)
    o = d.orientation
    if o is None and d.decorated_graph is not None:
        o = graph.induced_orientation(d.decorated_graph)
    return g, _need(o, "orientation", path), d


def _poly(path):
    d = _doc(path)
    return _need(d.polytope, "polytope", path)


def _chain_json(c):
    return {"vertices": list(c.vertices), "labels": list(c.labels)}


# --------------------------------------------------------------------------
# subcommands


def cmd_validate(a):
    d = _doc(a.file, check=False)
    reports = {}
    if d.dull_graph is not None:
        reports["dull_graph"] = graph.validate_dull(d.dull_graph)
    if d.decorated_graph is not None:
        reports["decorated_graph"] = graph.validate_decorated(d.decorated_graph)
    if d.orientation is not None and d.graph is not None:
        reports["orientation"] = graph.validate_orientation(d.graph, d.orientation)
    if d.polytope is not None:
        reports["polytope"] = corner.validate_polytope(d.polytope)
    ok = all(r.ok for r in reports.values())
    lines = [f"{k}: {'valid' if r.ok else 'INVALID'}" + "".join(f"\n  {v}" for v in r)
             for k, r in reports.items()]
    return Result(OK if ok else NO, {"valid": ok, **{k: r.to_json() for k, r in reports.items()}},
                  "\n".join(lines) or "nothing to validate")


def cmd_dull(a):
    d = _doc(a.file)
    deco = _need(d.decorated_graph, "decorated_graph", a.file)
    return Result(doc=io.Document(dull_graph=graph.dull_of(deco)))


def cmd_canon(a):
    g, _ = _graph(a.file)
    key = graph.canonical_key(g)
    return Result(payload={"canonical_key": json.loads(json.dumps(key))}, text=repr(key))


def cmd_iso(a):
    g1, _ = _graph(a.first)
    g2, _ = _graph(a.second)
    iso = graph.find_isomorphism(g1, g2)
    if iso is None:
        return Result(NO, {"isomorphic": False}, "not isomorphic")
    text = "isomorphic\n" + "\n".join(f"  {k} -> {v}" for k, v in sorted(iso.vertex_map.items()))
    return Result(OK, {"isomorphic": True, "bijection": iso.to_json()}, text)


def cmd_chains(a):
    g, _ = _graph(a.file)
    cs = graph.free_chains(g)
    text = "\n".join(" -".join(f"{v}" if i == 0 else f"{k}- {v}" for i, (v, k) in
                                enumerate(zip(c.vertices, (None,) + c.labels))) for c in cs)
    return Result(payload={"free_chains": [_chain_json(c) for c in cs]}, text=text or "no free chains")


def cmd_orient_list(a):
    g, _ = _graph(a.file)
    os_ = moves.enumerate_orientations(g)
    payload = {"count": len(os_), "orientations": [io.orientation_to_json(o) for o in os_]}
    text = f"{len(os_)} orientations\n" + "\n".join(
        f"  min={o.min_vertex} max={o.max_vertex} " + " ".join(f"{t}->{h}" for t, h in sorted(o.arcs))
        for o in os_)
    return Result(payload=payload, text=text)


def cmd_flip(a):
    g, o, _ = _oriented(a.file)
    return Result(doc=io.Document(dull_graph=g, orientation=moves.partial_flip(g, o, a.chain)))


def cmd_opposite(a):
    g, o, _ = _oriented(a.file)
    return Result(doc=io.Document(dull_graph=g, orientation=moves.opposite(g, o)))


def cmd_blowup(a):
    d = _doc(a.file)
    if d.polytope is not None:
        if a.corner is None:
            raise DullGraphError("blowup on a polytope needs --corner")
        size = Fraction(a.size) if a.size is not None else None
        if size is None:
            bound = corner.max_blowup_size(d.polytope, a.corner)
            size = Fraction(1) if bound is None else bound / 2
        p = corner.blowup_at_corner(d.polytope, a.corner, size)
        return Result(doc=io.Document(polytope=p, move_script=(moves.Blowup(a.corner, size),)))
    if a.vertex is None:
        raise DullGraphError("blowup on a graph needs --vertex")
    g, o, _ = _oriented(a.file)
    s = moves.chain_blowup(g, o, a.vertex)
    return Result(doc=io.Document(dull_graph=s.graph, orientation=s.orientation,
                                  report={"created": list(s.created)}))


def cmd_blowdown(a):
    d = _doc(a.file)
    if d.polytope is not None:
        if a.facet is None:
            raise DullGraphError("blowdown on a polytope needs --facet")
        return Result(doc=io.Document(polytope=corner.blowdown_facet(d.polytope, a.facet)))
    if not a.edge:
        raise DullGraphError("blowdown on a graph needs --edge A B")
    g, o, _ = _oriented(a.file)
    s = moves.chain_blowdown(g, o, tuple(a.edge))
    return Result(doc=io.Document(dull_graph=s.graph, orientation=s.orientation,
                                  report={"created": list(s.created)}))


def cmd_invert_chain(a):
    g, o, _ = _oriented(a.file)
    r = moves.invert_chain(g, o, a.chain)
    return Result(doc=io.Document(dull_graph=r.graph, orientation=r.orientation, move_script=r.script))


def _int_list(s):
    return [int(x) for x in s.split(",") if x.strip()] if s else []


def cmd_realize(a):
    if a.file:
        g, o, _ = _oriented(a.file)
        if a.chain is None:
            raise DullGraphError("realize from a graph needs --chain")
        labels = graph.chain_upward(g, o, a.chain).labels
    else:
        labels = tuple(_int_list(a.labels))
    sizes = [Fraction(s) for s in a.sizes.split(",")] if a.sizes else None
    p, script = corner.realize_chain(labels, sizes)
    return Result(doc=io.Document(polytope=p, move_script=script,
                                  report={"labels": corner.stabilizer_labels(p)}))


def cmd_mirror(a):
    return Result(doc=io.Document(polytope=corner.mirror(_poly(a.file))))


def cmd_labels(a):
    labels = corner.stabilizer_labels(_poly(a.file))
    return Result(payload={"labels": labels}, text=" ".join(map(str, labels)) or "(none)")


def cmd_verify_maps(a):
    cfg = maps.ToleranceConfig(rng_seed=a.seed)
    if a.tol is not None:
        cfg = replace(cfg, tol_identity=a.tol)
    if a.samples is not None:
        cfg = replace(cfg, samples=a.samples)
    rep = maps.run_verification_suite(_poly(a.file), cfg)
    text = "\n".join(f"{'PASS' if c.passed else 'FAIL'} {c.name}: max defect {c.max_defect:.2e} "
                     f"(tol {c.tolerance:.0e}, {c.samples} samples)" for c in rep.checks)
    return Result(OK if rep.ok else NO, rep.to_json(), text)


def cmd_localize(a):
    g, d = _graph(a.file)
    o = d.orientation
    if o is None:
        o = (graph.induced_orientation(d.decorated_graph) if d.decorated_graph is not None
             else moves.enumerate_orientations(g)[0])
    rep = cohomology.localization_consistency(g, o)
    text = "\n".join(f"{'PASS' if c.ok else 'FAIL'} {c.name} = {cohomology.format_laurent(c.value)}"
                     for c in rep.checks)
    return Result(OK if rep.ok else NO, rep.to_json(), text)


def cmd_betti(a):
    g, _ = _graph(a.file)
    b = cohomology.betti(g)
    return Result(payload={"betti": list(b)}, text=" ".join(map(str, b)))


def cmd_classify(a):
    g, _ = _graph(a.file)
    desc = cohomology.classify(g, a.parity)
    b = cohomology.betti(g)
    return Result(payload={"diffeotype": desc.name, "betti": list(b),
                           "parity": cohomology.parity_from_graph(g).value,
                           "orientation_reversing": cohomology.orientation_reversing_exists(g)},
                  text=desc.name)


def cmd_diffeo_decide(a):
    g1, _ = _graph(a.first)
    g2, _ = _graph(a.second)
    v = moves.decide_equivariant_diffeo(g1, g2)
    return Result(OK if v.diffeomorphic else NO, {"verdict": v.value}, v.value)


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="random seed for sampled checks")
    common.add_argument("--tol", type=float, default=None, help="identity tolerance for numeric checks")
    common.add_argument("--json", action="store_true", help="print the JSON result")
    common.add_argument("--out", help="write the resulting document here")

    p = argparse.ArgumentParser(prog="dullgraph", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, *files, help=None):
        sp = sub.add_parser(name, parents=[common], help=help)
        for f in files:
            sp.add_argument(f)
        sp.set_defaults(fn=fn)
        return sp

    add("validate", cmd_validate, "file", help="check every section of a document")
    add("dull", cmd_dull, "file", help="forget the moment data of a decorated graph")
    add("canon", cmd_canon, "file", help="canonical isomorphism key")
    add("iso", cmd_iso, "first", "second", help="find an isomorphism of dull graphs")
    add("chains", cmd_chains, "file", help="list free chains")
    add("orient-list", cmd_orient_list, "file", help="enumerate orientations")
    add("flip", cmd_flip, "file", help="partial flip along a free chain").add_argument("--chain", required=True)
    add("opposite", cmd_opposite, "file", help="opposite orientation")
    sp = add("blowup", cmd_blowup, "file", help="chain blowup (graph) or corner blowup (polytope)")
    sp.add_argument("--vertex")
    sp.add_argument("--corner", type=int)
    sp.add_argument("--size")
    sp = add("blowdown", cmd_blowdown, "file", help="blow down an exceptional edge or facet")
    sp.add_argument("--edge", nargs=2, metavar=("A", "B"))
    sp.add_argument("--facet", type=int)
    add("invert-chain", cmd_invert_chain, "file",
        help="blow a chain down and back up upside down").add_argument("--chain", required=True)
    sp = add("realize", cmd_realize, help="corner polytope realizing a free chain")
    sp.add_argument("file", nargs="?")
    sp.add_argument("--chain")
    sp.add_argument("--labels", help="comma-separated labels, bottom to top")
    sp.add_argument("--sizes", help="comma-separated blowup sizes")
    add("mirror", cmd_mirror, "file", help="reflect a polytope across the diagonal")
    add("labels", cmd_labels, "file", help="stabilizer labels of a polytope")
    add("verify-maps", cmd_verify_maps, "file",
        help="numerically check the map identities").add_argument("--samples", type=int)
    add("localize", cmd_localize, "file", help="localization consistency checks")
    add("betti", cmd_betti, "file", help="Betti numbers")
    add("classify", cmd_classify, "file", help="diffeomorphism type").add_argument(
        "--parity", choices=["even", "odd"])
    add("diffeo-decide", cmd_diffeo_decide, "first", "second",
        help="decide equivariant diffeomorphism")
    return p


def run(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        res = args.fn(args)
    except (DullGraphError, OSError) as exc:
        if args.json:
            print(json.dumps({"error": type(exc).__name__, "message": str(exc)}, indent=2), file=stdout)
        else:
            print(f"error: {exc}", file=sys.stderr)
        return ERROR
    if args.out:
        io.save(res.doc if res.doc is not None else {"format_version": io.FORMAT_VERSION,
                                                     "report": res.payload}, args.out)
    if args.json or res.text is None:
        print(io.dumps(res.payload), end="", file=stdout)
    else:
        print(res.text, file=stdout)
    return res.code


def main(argv=None):
    sys.exit(run(argv))
