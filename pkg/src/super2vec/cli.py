"""Command-line interface over workspace documents.

Every subcommand reads a workspace file, operates on named entries, prints
a human-readable report followed by a fenced JSON result block, and exits
0 on success, 1 on a validation failure, 2 on an input error.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys

from . import workspace as wsmod
from .bundles import (
    BundleError,
    bundle_direct_sum,
    invariant_triple,
    refine,
    tensor,
    triples_equal,
    validate_bundle,
    validate_morphism,
)
from .clifford import bw_class
from .crossedmodule import (
    TransportError,
    UnitCochain,
    csa_invariants,
    butterfly_transport,
    validate_cocycle,
)
from .lifting import (
    ExtensionError,
    canonical_morphism,
    lifting_gerbe,
    murray_lift,
    pin_extension_d1,
    pin_implementation_d1,
    validate_implementation,
)
from .nerve import AbelianCochain, cohomology, cup_product
from .picard import picard_surjectify
from .scalars import format_scalar
from .superalgebra import hh1, is_central_simple
from .workspace import WorkspaceError

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_INPUT = 2


def _lookup(table, name, what):
    if name not in table:
        raise WorkspaceError(name, f"no {what} with this name")
    return table[name]


def _bw_json(b):
    return {"residue": b.residue, "modulus": b.modulus}


def _epsilon_json(eps):
    vec = eps.vector()
    return [[list(e), int(v)] for e, v in zip(eps.nerve.edges(), vec)]


def _x_json(x):
    return [[list(t), format_scalar(v)] for t, v in sorted(x.values.items())]


def _triple_json(t):
    return {
        "bw": [_bw_json(b) for b in t.bw],
        "epsilon": _epsilon_json(t.epsilon),
        "x": _x_json(t.x),
    }


def _report_lines(report):
    return [f"  - {f}" for f in report.failures]


# ---------------------------------------------------------------------------
# subcommands: each returns (exit code, human lines, result dict)


def cmd_validate(ws, args, rng):
    name = args.name
    for kind, table in (("bundle", ws.bundles), ("cocycle", ws.cocycles),
                        ("morphism", ws.morphisms),
                        ("implementation", ws.implementations)):
        if name not in table:
            continue
        obj = table[name]
        if kind == "bundle":
            report = validate_bundle(obj, rng)
            ok, failures = report.ok, report.failures
        elif kind == "cocycle":
            report = validate_cocycle(obj)
            ok, failures = report.ok, report.failures
        elif kind == "morphism":
            report = validate_morphism(obj)
            ok, failures = report.ok, report.failures
        else:
            report, cert = validate_implementation(obj, rng)
            failures = list(report.failures)
            if report.ok and cert is None:
                failures.append("module is not an invertible bimodule")
            ok = not failures
        lines = [f"validate {kind} {name!r}: {'PASS' if ok else 'FAIL'}"]
        lines += _report_lines(report)
        result = {"command": "validate", "target": name, "kind": kind,
                  "ok": ok, "failures": failures}
        return (EXIT_OK if ok else EXIT_FAIL), lines, result
    raise WorkspaceError(
        name, "no bundle, cocycle, morphism, or implementation has this name")


def _triple_or_fail(V, rng):
    try:
        return invariant_triple(V, rng), None
    except BundleError as exc:
        return None, str(exc)


def cmd_invariants(ws, args, rng):
    V = _lookup(ws.bundles, args.bundle, "bundle")
    t, err = _triple_or_fail(V, rng)
    if t is None:
        return EXIT_FAIL, [f"invariants {args.bundle!r}: FAIL ({err})"], {
            "command": "invariants", "bundle": args.bundle, "ok": False,
            "error": err}
    bwtxt = ", ".join(f"{b.residue} (mod {b.modulus})" for b in t.bw)
    lines = [
        f"invariants {args.bundle!r}:",
        f"  bw: {bwtxt}",
        f"  epsilon: {t.epsilon.vector()} on edges {V.nerve.edges()}",
        f"  x: {_x_json(t.x)}",
    ]
    result = {"command": "invariants", "bundle": args.bundle, "ok": True,
              "triple": _triple_json(t)}
    return EXIT_OK, lines, result


def cmd_classify(ws, args, rng):
    V = _lookup(ws.bundles, args.first, "bundle")
    W = _lookup(ws.bundles, args.second, "bundle")
    t1, e1 = _triple_or_fail(V, rng)
    t2, e2 = _triple_or_fail(W, rng)
    if t1 is None or t2 is None:
        err = e1 or e2
        return EXIT_FAIL, [f"classify: FAIL ({err})"], {
            "command": "classify", "ok": False, "error": err}
    if V.nerve != W.nerve:
        raise WorkspaceError(args.second,
                             "bundles live over different nerves")
    H1 = cohomology(V.nerve, 1, 2)
    bw_eq = len(t1.bw) == len(t2.bw) and all(
        a.residue == b.residue and a.modulus == b.modulus
        for a, b in zip(t1.bw, t2.bw))
    eps_eq = H1.same_class(t1.epsilon.vector(), t2.epsilon.vector())
    x_eq = t1.x.same_class(t2.x)
    equal = triples_equal(t1, t2)
    verdict = "EQUAL" if equal else "DIFFERENT"
    lines = [
        f"classify {args.first!r} vs {args.second!r}: {verdict}",
        f"  bw: {'equal' if bw_eq else 'different'}",
        f"  epsilon class: {'equal' if eps_eq else 'different'}",
        f"  x class: {'equal' if x_eq else 'different'}",
    ]
    result = {"command": "classify", "ok": True, "equal": equal,
              "components": {"bw": bw_eq, "epsilon": eps_eq, "x": x_eq},
              "triples": [_triple_json(t1), _triple_json(t2)]}
    return EXIT_OK, lines, result


def _emit_derived(ws, args, name, spec, V, rng, command):
    report = validate_bundle(V, rng)
    dims = {str(e): V.module(e).dim for e in V.nerve.edges()}
    lines = [f"{command} -> bundle {name!r}:"
             f" {'PASS' if report.ok else 'FAIL'}"]
    lines += _report_lines(report)
    out = None
    if report.ok and args.out:
        raw = json.loads(json.dumps(ws.raw))
        raw.setdefault("bundles", {})[name] = spec
        text = json.dumps(raw, indent=2, sort_keys=True) + "\n"
        wsmod.parse_text(text)
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
        out = args.out
        lines.append(f"  wrote workspace with {name!r} to {args.out}")
    result = {"command": command, "name": name, "ok": report.ok,
              "failures": report.failures, "module_dims": dims, "out": out}
    return (EXIT_OK if report.ok else EXIT_FAIL), lines, result


def cmd_tensor(ws, args, rng):
    V = _lookup(ws.bundles, args.first, "bundle")
    W = _lookup(ws.bundles, args.second, "bundle")
    name = args.name or f"tensor_{args.first}_{args.second}"
    VW = tensor(V, W, rng)
    return _emit_derived(ws, args, name,
                         {"tensor": [args.first, args.second]},
                         VW, rng, "tensor")


def cmd_dsum(ws, args, rng):
    V = _lookup(ws.bundles, args.first, "bundle")
    W = _lookup(ws.bundles, args.second, "bundle")
    name = args.name or f"dsum_{args.first}_{args.second}"
    VW = bundle_direct_sum(V, W)
    return _emit_derived(ws, args, name,
                         {"dsum": [args.first, args.second]},
                         VW, rng, "dsum")


def cmd_refine(ws, args, rng):
    V = _lookup(ws.bundles, args.bundle, "bundle")
    fine = _lookup(ws.nerves, args.nerve, "nerve")
    if args.map:
        vmap = {}
        for part in args.map.split(","):
            try:
                f, c = part.split(":")
                vmap[int(f)] = int(c)
            except ValueError:
                raise WorkspaceError(
                    "map", "vertex map entries must look like fine:coarse")
    else:
        vmap = {v: v for v in fine.vertices}
    R = refine(V, fine, vmap)
    report = validate_bundle(R, rng)
    lines = [f"refine {args.bundle!r} over {args.nerve!r}:"
             f" {'PASS' if report.ok else 'FAIL'}"]
    lines += _report_lines(report)
    result = {"command": "refine", "bundle": args.bundle,
              "nerve": args.nerve, "ok": report.ok,
              "failures": report.failures}
    return (EXIT_OK if report.ok else EXIT_FAIL), lines, result


def cmd_hh1(ws, args, rng):
    A = _lookup(ws.algebras, args.algebra, "algebra")
    count, _reps = hh1(A)
    lines = [f"hh1({args.algebra}) = {count}"]
    return EXIT_OK, lines, {"command": "hh1", "algebra": args.algebra,
                            "dimension": count}


def cmd_csa(ws, args, rng):
    A = _lookup(ws.algebras, args.algebra, "algebra")
    ok, witness = is_central_simple(A)
    lines = [f"central simple: {'yes' if ok else 'no'}"]
    result = {"command": "csa", "algebra": args.algebra,
              "central_simple": ok}
    if ok:
        b = bw_class(A, rng)
        lines.append(f"bw class: {b.residue} (mod {b.modulus})")
        result["bw"] = _bw_json(b)
    else:
        w = _format_nested(witness)
        lines.append(f"  witness: {w}")
        result["witness"] = w
    return EXIT_OK, lines, result


def _format_nested(obj):
    if isinstance(obj, (list, tuple)):
        return [_format_nested(v) for v in obj]
    try:
        return format_scalar(obj)
    except (AttributeError, TypeError):
        return str(obj)


def cmd_bw(ws, args, rng):
    A = _lookup(ws.algebras, args.algebra, "algebra")
    try:
        b = bw_class(A, rng)
    except (AssertionError, ValueError) as exc:
        return EXIT_FAIL, [f"bw({args.algebra}): FAIL ({exc})"], {
            "command": "bw", "algebra": args.algebra, "ok": False,
            "error": str(exc)}
    lines = [f"{b.residue} (mod {b.modulus})"]
    return EXIT_OK, lines, {"command": "bw", "algebra": args.algebra,
                            "ok": True, "bw": _bw_json(b)}


def cmd_picard_surjectify(ws, args, rng):
    A = _lookup(ws.algebras, args.algebra, "algebra")
    res = picard_surjectify(A, rng)
    certified = res.certificate is not None
    lines = [
        f"picard-surjectify({args.algebra}):"
        f" hull dimension {res.algebra.dim},"
        f" Morita equivalence {'certified' if certified else 'NOT certified'}"
    ]
    result = {"command": "picard-surjectify", "algebra": args.algebra,
              "dimension": res.algebra.dim, "certified": certified}
    return (EXIT_OK if certified else EXIT_FAIL), lines, result


def cmd_transport(ws, args, rng):
    bf = _lookup(ws.butterflies, args.butterfly, "butterfly")
    c = _lookup(ws.cocycles, args.cocycle, "cocycle")
    c2, _lifts = butterfly_transport(bf, c)
    report = validate_cocycle(c2)
    nerve = c2.nerve
    if c2.cm.algebra is None:
        # scalar crossed module: g is already a Z2 cochain, a a unit cochain
        eps = AbelianCochain(nerve, 1, 2,
                             {e: int(c2.g[e]) % 2 for e in nerve.edges()})
        x = UnitCochain(nerve, 2, c2.cm.field,
                        {t: c2.a[t] for t in nerve.triangles()})
    else:
        inv = csa_invariants(c2, rng)
        eps, x = inv.epsilon, inv.x
    lines = [
        f"transport {args.cocycle!r} along {args.butterfly!r}:"
        f" {'PASS' if report.ok else 'FAIL'}",
        f"  epsilon: {eps.vector()}",
        f"  x: {_x_json(x)}",
    ]
    lines += _report_lines(report)
    result = {"command": "transport", "ok": report.ok,
              "failures": report.failures,
              "epsilon": _epsilon_json(eps), "x": _x_json(x)}
    return (EXIT_OK if report.ok else EXIT_FAIL), lines, result


def cmd_lift(ws, args, rng):
    ext = _lookup(ws.extensions, args.extension, "extension")
    nerve_name, labels = _lookup(ws.group_cocycles, args.cocycle,
                                 "group cocycle")
    nerve = ws.nerves[nerve_name]
    gerbe = lifting_gerbe(ext, nerve, labels, rng)
    lifts = murray_lift(ext, nerve, labels)
    trivial = lifts is not None
    lines = [f"obstruction class vanishes: {'yes' if trivial else 'no'}"]
    result = {"command": "lift", "extension": args.extension,
              "cocycle": args.cocycle, "obstruction_trivial": trivial,
              "z": _x_json(gerbe.z)}
    if trivial:
        result["lift"] = [
            [list(e), i, ext.proj[i]] for e, i in sorted(lifts.items())]
        lines.append("  strict cocycle lift exhibited")
    else:
        lines.append("  no lift exists; the gerbe class is the obstruction")
    return EXIT_OK, lines, result


def _class_name(nerve, eps, eps_g, H1):
    if H1.same_class(eps.vector(), AbelianCochain(nerve, 1, 2).vector()):
        return "0"
    if H1.same_class(eps.vector(), eps_g.vector()):
        return "[w1]"
    return f"[{eps.vector()}]"


def _x_class_name(nerve, x, eps_g, field):
    one = UnitCochain(nerve, 2, field, {})
    if x.same_class(one):
        return "0"
    cup = cup_product(eps_g, eps_g)
    if x.same_class(UnitCochain.from_additive(cup, field)):
        return "[w1^2]"
    return f"[{_x_json(x)}]"


def cmd_pipeline(ws, args, rng):
    if args.kind != "pin1":
        raise WorkspaceError("pipeline", f"unknown pipeline {args.kind!r}")
    nerve = _lookup(ws.nerves, args.nerve, "nerve")
    nerve_name, labels = _lookup(ws.group_cocycles, args.cocycle,
                                 "group cocycle")
    if ws.nerves.get(nerve_name) is not nerve:
        raise WorkspaceError(args.cocycle,
                             f"group cocycle lives over {nerve_name!r},"
                             f" not {args.nerve!r}")
    ext = pin_extension_d1(ws.field)
    impl = pin_implementation_d1(ws.field)
    res = canonical_morphism(ext, impl, nerve, labels, rng)
    verdict_ok = res.verdict == "isomorphism"
    t = invariant_triple(res.gerbe.bundle, rng)
    ta = invariant_triple(res.algebra_bundle, rng)
    agree = triples_equal(t, ta)
    eps_g = AbelianCochain(nerve, 1, 2,
                           {e: ext.grading[labels[e]] for e in nerve.edges()})
    H1 = cohomology(nerve, 1, 2)
    eps_name = _class_name(nerve, t.epsilon, eps_g, H1)
    x_name = _x_class_name(nerve, t.x, eps_g, ws.field)
    bw_res = t.bw[0].residue if t.bw else 0
    lifts = murray_lift(ext, nerve, labels)
    ok = verdict_ok and agree
    lines = [
        f"isomorphism verdict: {'YES' if verdict_ok else 'NO'};"
        f" triple ({bw_res}, {eps_name}, {x_name})",
        f"  gerbe and algebra-bundle triples agree: {'yes' if agree else 'no'}",
        f"  obstruction class vanishes: {'yes' if lifts is not None else 'no'}",
    ]
    result = {"command": "pipeline", "pipeline": "pin1",
              "nerve": args.nerve, "cocycle": args.cocycle, "ok": ok,
              "verdict": res.verdict,
              "triple": _triple_json(t),
              "triple_names": [bw_res, eps_name, x_name],
              "triples_agree": agree,
              "obstruction_trivial": lifts is not None}
    return (EXIT_OK if ok else EXIT_FAIL), lines, result


# ---------------------------------------------------------------------------


def build_parser():
    p = argparse.ArgumentParser(
        prog="super2vec",
        description="Exact invariants of super 2-vector bundles over"
                    " combinatorial nerves.")
    p.add_argument("-w", "--workspace", default="workspace.json",
                   help="workspace document (default: workspace.json)")
    p.add_argument("--seed", type=int, default=None,
                   help="RNG seed (fallback: env SUPER2VEC_SEED, then 0)")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("validate", help="validate a named entry")
    s.add_argument("name")
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("invariants", help="classification triple of a bundle")
    s.add_argument("bundle")
    s.set_defaults(func=cmd_invariants)

    s = sub.add_parser("classify", help="compare two bundles by triple")
    s.add_argument("first")
    s.add_argument("second")
    s.set_defaults(func=cmd_classify)

    for name, fn in (("tensor", cmd_tensor), ("dsum", cmd_dsum)):
        s = sub.add_parser(name, help=f"{name} of two bundles")
        s.add_argument("first")
        s.add_argument("second")
        s.add_argument("--name", default=None,
                       help="name for the derived bundle")
        s.add_argument("--out", default=None,
                       help="write a workspace including the derived bundle")
        s.set_defaults(func=fn)

    s = sub.add_parser("refine", help="pull a bundle back along a refinement")
    s.add_argument("bundle")
    s.add_argument("nerve")
    s.add_argument("--map", default=None,
                   help="comma-separated fine:coarse vertex pairs")
    s.set_defaults(func=cmd_refine)

    for name, fn, h in (("hh1", cmd_hh1, "outer-derivation dimension"),
                        ("csa", cmd_csa, "central-simplicity check"),
                        ("bw", cmd_bw, "Brauer-Wall class"),
                        ("picard-surjectify", cmd_picard_surjectify,
                         "Picard-surjective Morita hull")):
        s = sub.add_parser(name, help=h)
        s.add_argument("algebra")
        s.set_defaults(func=fn)

    s = sub.add_parser("transport", help="move a cocycle along a butterfly")
    s.add_argument("butterfly")
    s.add_argument("cocycle")
    s.set_defaults(func=cmd_transport)

    s = sub.add_parser("lift", help="lifting obstruction of a group cocycle")
    s.add_argument("extension")
    s.add_argument("cocycle")
    s.set_defaults(func=cmd_lift)

    s = sub.add_parser("pipeline", help="end-to-end named pipelines")
    s.add_argument("kind", choices=["pin1"])
    s.add_argument("nerve")
    s.add_argument("cocycle")
    s.set_defaults(func=cmd_pipeline)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    seed = args.seed
    if seed is None:
        seed = int(os.environ.get("SUPER2VEC_SEED", "0"))
    rng = random.Random(seed)
    try:
        ws = wsmod.parse_file(args.workspace)
        code, lines, result = args.func(ws, args, rng)
    except WorkspaceError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except TransportError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ExtensionError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    for line in lines:
        print(line)
    print("```json")
    print(json.dumps(result, indent=2, sort_keys=True))
    print("```")
    return code


if __name__ == "__main__":
    sys.exit(main())
