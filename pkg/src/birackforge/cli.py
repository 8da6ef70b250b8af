"""Command-line interface: ``birackforge <noun> <verb> ...``.

Exit status is 0 on success, 1 on domain errors (including failed
verifications) and 2 on parse, I/O or usage errors.
"""

from __future__ import annotations

import argparse
import json
import random
import re
import sys
from io import StringIO

from . import __version__
from .birack import birack_maps, constant_action, perm_from_cycles, tsr_birack
from .bweight import phi_mw, phi_w_polynomial, verify_braid_weight
from .errors import AxiomViolation, BirackForgeError, ParseError
from .labeling import count_labelings, enumerate_labelings, phi_integral
from .loaders import load_birack, load_braid, load_braid_weight, load_diagram, load_weight
from .qweight import (
    classify_weight,
    evaluate,
    normalize,
    phi_q_polynomial,
    phi_qm,
    render_scalar_or_matrix,
    verify_weight,
)
from .search import default_workers, enumerate_biracks, search_braid_weights, search_quantum_weights, write_jsonl
from .tangle import apply_framed_move, insert_kinks, random_framed_moves, trace_components


class Failed(Exception):
    """Command ran but the answer is negative (exit 1, payload still printed)."""


# -- output ----------------------------------------------------------------------


def _table(rows, header=None):
    rows = [[str(c) for c in r] for r in rows]
    if header:
        rows.insert(0, list(header))
    if not rows:
        return ""
    widths = [max(len(r[i]) for r in rows if i < len(r)) for i in range(max(len(r) for r in rows))]
    lines = ["  ".join(c.ljust(widths[i]) for i, c in enumerate(r)).rstrip() for r in rows]
    if header:
        lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines)


def _emit(args, doc, text):
    if args.format == "json":
        print(json.dumps(doc, sort_keys=True))
    else:
        print(text)


def _kv(pairs):
    return _table([(k, v) for k, v in pairs])


def _ints(text):
    return tuple(int(t) for t in re.split(r"[,\s]+", text.strip()) if t)


def _perm_arg(text, n):
    """``2,1,3`` (image list) or cycle notation ``(1 2)(3)``."""
    text = text.strip()
    if text.startswith("("):
        cycles = []
        for body in re.findall(r"\(([^)]*)\)", text):
            parts = [t for t in re.split(r"[,\s]+", body.strip()) if t]
            if len(parts) == 1 and n < 10:
                parts = list(parts[0])  # "(12)" shorthand
            cycles.append(tuple(int(t) for t in parts))
        return perm_from_cycles(n, [c for c in cycles if len(c) > 1])
    if text in ("id", ""):
        return tuple(range(1, n + 1))
    return _ints(text)


# -- birack ---------------------------------------------------------------------


def _birack_summary(b):
    return {
        "n": b.n,
        "rank": b.rank,
        "pi": list(b.pi),
        "alpha": list(b.alpha),
        "bikei": b.is_bikei,
        "kei": b.is_kei,
        "sideways_bijective": b.is_sideways_bijective,
    }


def cmd_birack_validate(args):
    try:
        b = load_birack(args.file)
    except AxiomViolation as exc:
        doc = {"valid": False, "axiom": exc.which, "witness": list(exc.witness), "detail": str(exc)}
        _emit(args, doc, f"invalid: {exc}")
        raise Failed
    doc = {"valid": True, **_birack_summary(b)}
    _emit(args, doc, _kv([("valid", "yes"), ("n", b.n), ("rank", b.rank)]))


def cmd_birack_info(args):
    b = load_birack(args.file)
    maps = birack_maps(b)
    doc = {**_birack_summary(b), "matrix": b.block_matrix(),
           "S": {f"{x},{y}": list(v) for (x, y), v in sorted(maps["S"].items())}}
    rows = [("n", b.n), ("rank", b.rank), ("pi", " ".join(map(str, b.pi))),
            ("alpha", " ".join(map(str, b.alpha))), ("bikei", b.is_bikei), ("kei", b.is_kei),
            ("sideways bijective", b.is_sideways_bijective)]
    mat = _table(b.block_matrix())
    _emit(args, doc, _kv(rows) + "\n\n[U | L]\n" + mat)


def cmd_birack_make(args):
    if args.kind == "constant-action":
        b = constant_action(args.n, _perm_arg(args.sigma, args.n), _perm_arg(args.tau, args.n))
    else:
        b = tsr_birack(args.n, args.t, args.s, args.r)
    doc = b.to_json()
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(doc, fh, indent=1)
            fh.write("\n")
    _emit(args, doc, json.dumps(doc))


# -- tangle --------------------------------------------------------------------------


def _diagram_doc(d):
    tr = trace_components(d)
    return {
        "diagram": d.render(),
        "boundary_in": d.boundary_in,
        "boundary_out": d.boundary_out,
        "slices": len(d.slices),
        "crossings": d.crossing_count(),
        "components": tr.count,
        "framing": list(tr.framing),
        "closed": list(tr.closed),
        "semiarcs": tr.semiarc_count,
    }


def _diagram_text(doc):
    return _kv([(k, " ".join(map(str, v)) if isinstance(v, list) else v) for k, v in doc.items()])


def cmd_tangle_parse(args):
    d = load_diagram(args.diagram, args.boundary_in)
    doc = {"diagram": d.render(), "boundary_in": d.boundary_in, "boundary_out": d.boundary_out,
           "widths": list(d.widths), "json": d.to_json()}
    _emit(args, doc, d.render())


def cmd_tangle_components(args):
    d = load_diagram(args.diagram, args.boundary_in)
    doc = _diagram_doc(d)
    _emit(args, doc, _diagram_text(doc))


def cmd_tangle_kink(args):
    d = load_diagram(args.diagram, args.boundary_in)
    d2 = insert_kinks(d, _ints(args.r))
    doc = _diagram_doc(d2)
    _emit(args, doc, _diagram_text(doc))


def cmd_tangle_move(args):
    d = load_diagram(args.diagram, args.boundary_in)
    if args.random is not None:
        d2, log = random_framed_moves(d, random.Random(args.seed), args.random, rank=args.rank)
    else:
        if not args.move or not args.site:
            raise ParseError("give --move and --site, or --random STEPS")
        opts = {}
        if args.order:
            opts["order"] = args.order
        if args.kinks:
            opts["kinks"] = tuple(args.kinks.split(","))
        if args.n is not None:
            opts["n"] = args.n
        if args.kind:
            opts["kind"] = args.kind
        if args.variant:
            opts["variant"] = args.variant
        level, pos = _ints(args.site)
        d2 = apply_framed_move(d, args.move, (level, pos), args.direction, **opts)
        log = [(args.move, (level, pos), args.direction, opts)]
    doc = _diagram_doc(d2)
    doc["moves"] = [{"move": m, "site": list(s), "direction": dr, "options": {k: list(v) if isinstance(v, tuple) else v
                                                                            for k, v in o.items()}}
                    for m, s, dr, o in log]
    text = _diagram_text({k: v for k, v in doc.items() if k != "moves"})
    text += "\n\n" + _table([(m, f"{s[0]},{s[1]}", dr, " ".join(f"{k}={v}" for k, v in o.items()))
                             for m, s, dr, o in log], header=("move", "site", "direction", "options"))
    _emit(args, doc, text)


# -- counting ------------------------------------------------------------------------


def cmd_count(args):
    d = load_diagram(args.diagram)
    b = load_birack(args.birack)
    if args.framing:
        d = insert_kinks(d, _ints(args.framing))
    k = count_labelings(d, b)
    framing = list(trace_components(d).framing)
    _emit(args, {"count": k, "framing": framing}, _kv([("framing", " ".join(map(str, framing))), ("count", k)]))


def cmd_phi_z(args):
    d = load_diagram(args.diagram)
    b = load_birack(args.birack)
    res = phi_integral(d, b)
    rows = sorted(res.by_framing.items())
    doc = {"total": res.total, "rank": res.rank,
           "by_framing": [{"framing": list(r), "count": c} for r, c in rows]}
    text = _table([(",".join(map(str, r)), c) for r, c in rows], header=("framing mod N", "labelings"))
    _emit(args, doc, text + f"\n\ntotal {res.total}")


# -- quantum weights -------------------------------------------------------------------


def cmd_qweight_verify(args):
    q = load_weight(args.file)
    rep = verify_weight(q)
    doc = {"ok": rep.ok, "axioms": rep.to_json()}
    rows = []
    for name, r in rep.results.items():
        rows.append((name, "ok" if r.ok else f"FAIL at {r.witness}"))
    _emit(args, doc, _table(rows, header=("axiom", "result")))
    if not rep.ok:
        raise Failed


def _labeling_arg(d, q, choice):
    if choice is None or choice == "all":
        return list(enumerate_labelings(d, q.birack))
    free = _ints(choice)
    # rebuild the level snapshots from the free choices
    for f in enumerate_labelings(d, q.birack, bottom=free[:d.boundary_in]):
        if f.free == free:
            return [f]
    raise BirackForgeError(f"no valid labeling with free labels {list(free)}")


def cmd_qweight_eval(args):
    d = load_diagram(args.diagram)
    q = load_weight(args.weight)
    framing = trace_components(d).framing
    out = []
    for f in _labeling_arg(d, q, args.labeling):
        v = evaluate(d, f, q)
        out.append((f, v, normalize(v, framing, q)))
    doc = {"framing": list(framing), "labelings": [
        {"free": list(f.free), "value": v.to_json(), "normalized": nv.to_json()} for f, v, nv in out]}
    text = _table([(" ".join(map(str, f.free)), render_scalar_or_matrix(v), render_scalar_or_matrix(nv))
                   for f, v, nv in out], header=("free labels", "value", "normalized"))
    _emit(args, doc, text)


def cmd_qweight_phi(args):
    d = load_diagram(args.diagram)
    q = load_weight(args.weight)
    ms = phi_qm(d, q)
    doc = {"multiset": ms.to_json(), "size": ms.total}
    lines = [ms.render(), f"size {ms.total}"]
    if d.is_closed:
        poly = phi_q_polynomial(ms)
        doc["polynomial"] = poly
        lines.append(f"polynomial {poly}")
    _emit(args, doc, "\n".join(lines))


def cmd_qweight_classify(args):
    q = load_weight(args.file)
    c = classify_weight(q)
    doc = {k: v for k, v in c.items() if k != "ybe"}
    doc["ybe"] = {f"{x},{y}": ok for (x, y), ok in c["ybe"].items()}
    rows = [(k, v) for k, v in doc.items() if k != "ybe"]
    rows += [(f"ybe X[{k}]", v) for k, v in doc["ybe"].items()]
    _emit(args, doc, _kv(rows))


# -- braid weights ---------------------------------------------------------------------


def cmd_bweight_verify(args):
    w = load_braid_weight(args.file)
    rep = verify_braid_weight(w)
    doc = rep.to_json()
    _emit(args, doc, _kv([(k, v) for k, v in doc.items() if k != "witnesses"]
                         + [(f"witness {k}", v) for k, v in doc["witnesses"].items()]))
    if not rep.ok:
        raise Failed


def cmd_bweight_phi(args):
    w = load_braid_weight(args.file)
    b = load_braid(args.braid, w.strands)
    ms = phi_mw(b, w)
    poly = phi_w_polynomial(ms)
    doc = {"multiset": ms.to_json(), "size": ms.total, "polynomial": poly}
    _emit(args, doc, f"{ms.render()}\nsize {ms.total}\npolynomial {poly}")


# -- search ----------------------------------------------------------------------------


def _search_output(args, items, render_row, header):
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            write_jsonl(items, fh)
        _emit(args, {"count": len(items), "out": args.out}, f"{len(items)} results written to {args.out}")
        return
    if args.format == "json":
        buf = StringIO()
        write_jsonl(items, buf)
        docs = [json.loads(line) for line in buf.getvalue().splitlines()]
        print(json.dumps({"count": len(items), "results": docs}, sort_keys=True))
    else:
        print(_table([render_row(i, x) for i, x in enumerate(items, 1)], header=header))
        print(f"\n{len(items)} results")


def cmd_search_biracks(args):
    found = enumerate_biracks(args.n, dedup=args.dedup, sideways_only=args.sideways)
    _search_output(args, found, lambda i, b: (i, b.rank, " | ".join(" ".join(map(str, r)) for r in b.block_matrix())),
                   ("#", "rank", "[U | L] rows"))


def cmd_search_bweights(args):
    from .search import TEMPLATES

    b = load_birack(args.birack)
    dim = TEMPLATES[args.template][0]
    if args.dim is not None and args.dim != dim:
        raise ParseError(f"template {args.template} has dimension {dim}, not {args.dim}")
    found = search_braid_weights(b, args.strands, args.template, tuple(args.variables.split(",")),
                                 signed=args.signed, include_one=not args.no_one, limit=args.limit)

    def row(i, w):
        cells = [f"s{j}^{x}{y}={m[1, 0] if m.rows > 1 else m[0, 0]}" for (j, x, y), m in sorted(w.sigma.items())]
        return (i, " ".join(cells))

    _search_output(args, found, row, ("#", "sigma entries"))


def cmd_search_qweights(args):
    b = load_birack(args.birack)
    found = search_quantum_weights(b, args.dim, args.mod, budget=args.budget,
                                   fix_unit_caps=args.unit_caps, workers=args.workers)

    def row(i, q):
        xs = " ".join(f"{x}{y}:{m.render(compact=True)}" for (x, y), m in sorted(q.X.items()))
        ns = " ".join(f"{x}:{m.render(compact=True)}" for x, m in sorted(q.N.items()))
        return (i, xs, ns, q.delta)

    _search_output(args, found, row, ("#", "X", "N", "delta"))


# -- parser ----------------------------------------------------------------------------


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default=argparse.SUPPRESS,
                        help="output format (default text)")
    common.add_argument("--workers", type=int, default=argparse.SUPPRESS,
                        help="worker processes for searches (default $BIRACKFORGE_WORKERS or 1)")

    p = argparse.ArgumentParser(prog="birackforge", parents=[common],
                                description="Involutory biracks, counting invariants and quantum enhancements.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, metavar="command")

    def add(parent, name, func, help_):
        sp = parent.add_parser(name, parents=[common], help=help_, description=help_)
        sp.set_defaults(func=func)
        return sp

    # birack
    bp = sub.add_parser("birack", help="validate, inspect and build biracks")
    bsub = bp.add_subparsers(dest="verb", required=True, metavar="verb")
    add(bsub, "validate", cmd_birack_validate, "check the birack axioms").add_argument("file")
    add(bsub, "info", cmd_birack_info, "rank, kink map and flags").add_argument("file")
    mk = bsub.add_parser("make", help="construct a birack family member")
    msub = mk.add_subparsers(dest="kind", required=True, metavar="kind")
    ca = add(msub, "constant-action", cmd_birack_make, "B(x, y) = (sigma(y), tau(x))")
    ca.add_argument("--n", "-n", type=int, required=True)
    ca.add_argument("--sigma", required=True, help="image list '2,1,3' or cycles '(1 2)'")
    ca.add_argument("--tau", required=True)
    ca.add_argument("--out")
    ts = add(msub, "tsr", cmd_birack_make, "B(x, y) = (t y + s x, r x) on Z_n")
    for flag in ("--n", "--t", "--s", "--r"):
        ts.add_argument(flag, type=int, required=True)
    ts.add_argument("--out")

    # tangle
    tp = sub.add_parser("tangle", help="parse, trace and rewrite sliced diagrams")
    tsub = tp.add_subparsers(dest="verb", required=True, metavar="verb")
    for name, func, help_ in (("parse", cmd_tangle_parse, "normalize a diagram"),
                              ("components", cmd_tangle_components, "components, framing and semiarcs")):
        sp = add(tsub, name, func, help_)
        sp.add_argument("diagram")
        sp.add_argument("--boundary-in", type=int)
    kp = add(tsub, "kink", cmd_tangle_kink, "insert positive kinks per component")
    kp.add_argument("diagram")
    kp.add_argument("--r", "--framing", dest="r", required=True, help="kinks per component, e.g. 0,1")
    kp.add_argument("--boundary-in", type=int)
    mv = add(tsub, "move", cmd_tangle_move, "apply a framed Reidemeister or phone-cord move")
    mv.add_argument("diagram")
    mv.add_argument("--boundary-in", type=int)
    mv.add_argument("--move", choices=("RII", "RIII", "framed-RI", "phone-cord", "planar"))
    mv.add_argument("--site", help="level,position")
    mv.add_argument("--direction", default="insert", choices=("insert", "delete", "rewrite"))
    mv.add_argument("--order", choices=("+-", "-+"))
    mv.add_argument("--kinks", help="pair such as L+,R-")
    mv.add_argument("--n", type=int)
    mv.add_argument("--kind")
    mv.add_argument("--variant", choices=("S", "Z"))
    mv.add_argument("--random", type=int, metavar="STEPS", help="apply STEPS random moves instead")
    mv.add_argument("--seed", type=int, default=0)
    mv.add_argument("--rank", type=int, default=1, help="N for random phone-cord moves")

    cp = add(sub, "count", cmd_count, "number of labelings of the framed diagram")
    cp.add_argument("diagram")
    cp.add_argument("birack")
    cp.add_argument("--framing", help="kinks to add per component before counting")
    zp = add(sub, "phi-z", cmd_phi_z, "integral counting invariant with per-framing table")
    zp.add_argument("diagram")
    zp.add_argument("birack")

    # quantum weights
    qp = sub.add_parser("qweight", help="quantum weights")
    qsub = qp.add_subparsers(dest="verb", required=True, metavar="verb")
    add(qsub, "verify", cmd_qweight_verify, "check axioms I-VI").add_argument("file")
    ev = add(qsub, "eval", cmd_qweight_eval, "evaluate labeled diagrams")
    ev.add_argument("diagram")
    ev.add_argument("weight")
    ev.add_argument("--labeling", help="free labels (bottom then cups), e.g. 1,2; default all")
    ph = add(qsub, "phi", cmd_qweight_phi, "quantum enhanced multiset (and polynomial for links)")
    ph.add_argument("diagram")
    ph.add_argument("weight")
    add(qsub, "classify", cmd_qweight_classify, "homogeneity and Yang-Baxter flags").add_argument("file")

    # braid weights
    wp = sub.add_parser("bweight", help="braid weights")
    wsub = wp.add_subparsers(dest="verb", required=True, metavar="verb")
    add(wsub, "verify", cmd_bweight_verify, "check labeled braid relations").add_argument("file")
    bw = add(wsub, "phi", cmd_bweight_phi, "trace multiset of a braid")
    bw.add_argument("braid", help="word such as '1 1 -2'")
    bw.add_argument("file")

    # search
    sp = sub.add_parser("search", help="exhaustive searches")
    ssub = sp.add_subparsers(dest="verb", required=True, metavar="verb")
    sb = add(ssub, "biracks", cmd_search_biracks, "all involutory biracks of size n")
    sb.add_argument("-n", type=int, required=True)
    sb.add_argument("--dedup", action="store_true", help="one per isomorphism class")
    sb.add_argument("--sideways", action="store_true", help="only sideways-bijective biracks")
    sb.add_argument("--out", help="JSON-lines output file")
    sw = add(ssub, "bweights", cmd_search_bweights, "braid weights over a matrix template")
    sw.add_argument("--birack", required=True)
    sw.add_argument("--strands", type=int, required=True)
    sw.add_argument("--dim", type=int)
    sw.add_argument("--template", default="antidiag", choices=("antidiag", "diag", "scalar"))
    sw.add_argument("--variables", default="x,y,z,w")
    sw.add_argument("--signed", action="store_true")
    sw.add_argument("--no-one", action="store_true", help="exclude the constant 1 from the value pool")
    sw.add_argument("--limit", type=int)
    sw.add_argument("--out")
    sq = add(ssub, "qweights", cmd_search_qweights, "quantum weights over Z_p")
    sq.add_argument("--birack", required=True)
    sq.add_argument("--dim", type=int, default=1)
    sq.add_argument("--mod", type=int, default=5)
    sq.add_argument("--budget", type=int, default=10 ** 6)
    sq.add_argument("--unit-caps", action="store_true", help="require N = U = delta = 1")
    sq.add_argument("--out")
    return p


def run(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if not hasattr(args, "format"):
        args.format = "text"
    if not hasattr(args, "workers"):
        args.workers = default_workers()
    try:
        args.func(args)
    except Failed:
        return 1
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except BirackForgeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (OSError, json.JSONDecodeError, KeyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
