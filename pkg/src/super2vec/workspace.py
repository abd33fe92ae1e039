"""Workspace documents: a single JSON file declaring a scalar field and
named algebras, nerves, cocycles, bundles, extensions, and implementations.

Scalars are written exactly: "p/q" strings over the rationals,
["p/q", "r/s"] pairs over the Gaussian rationals.  Simplices are strictly
increasing integer arrays.  Parsing is deterministic; the first error is
reported with its document path (and line/column for raw syntax errors).
"""

from __future__ import annotations

import json
import random

from .bimodule import SuperBimodule
from .bundles import (
    TwoVectorBundle,
    algebra_bundle,
    bundle_direct_sum,
    gerbe_bundle,
    identity_morphism,
    reconstruct,
    tensor,
    trivial_bundle,
)
from .clifford import clifford, complex_clifford
from .crossedmodule import CMCocycle, UnitCochain, aut_crossed_module
from .lifting import (
    Implementation,
    pin_extension_d1,
    pin_implementation_d1,
    split_extension,
)
from .nerve import Nerve, circle_nerve, rp2_nerve, sphere_nerve, torus_nerve
from .scalars import QI, QQ, format_scalar, parse_scalar
from .superalgebra import (
    AlgebraHom,
    SuperAlgebra,
    dual_numbers,
    graded_tensor,
    ground_field,
    make_algebra,
    parity_hom,
)
from .supervect import SuperVectorSpace


class WorkspaceError(ValueError):
    """Input errors: malformed syntax, bad data, unresolved references."""

    def __init__(self, path, message):
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)


class Workspace:
    __slots__ = ("raw", "field", "algebras", "nerves", "cocycles",
                 "group_cocycles", "bundles", "extensions",
                 "implementations", "morphisms", "butterflies")

    def __init__(self, raw, field):
        self.raw = raw
        self.field = field
        self.algebras = {}
        self.nerves = {}
        self.cocycles = {}
        self.group_cocycles = {}
        self.bundles = {}
        self.extensions = {}
        self.implementations = {}
        self.morphisms = {}
        self.butterflies = {}


def _require(cond, path, message):
    if not cond:
        raise WorkspaceError(path, message)


def _edge_key(lst, path):
    _require(isinstance(lst, list) and len(lst) == 2, path,
             "edge must be a two-element array")
    a, b = lst
    _require(isinstance(a, int) and isinstance(b, int) and a < b, path,
             "edge vertices must be increasing integers")
    return (a, b)


def _tri_key(lst, path):
    _require(isinstance(lst, list) and len(lst) == 3, path,
             "triangle must be a three-element array")
    a, b, c = lst
    _require(all(isinstance(x, int) for x in lst) and a < b < c, path,
             "triangle vertices must be increasing integers")
    return (a, b, c)


def _parse_algebra(ws, name, spec, path):
    field = ws.field
    if not isinstance(spec, dict):
        raise WorkspaceError(path, "algebra spec must be an object")
    if "clifford" in spec:
        pq = spec["clifford"]
        _require(isinstance(pq, list) and len(pq) == 2
                 and all(isinstance(x, int) and x >= 0 for x in pq),
                 path, "clifford signature must be [p, q]")
        return clifford(pq[0], pq[1], field=field)
    if "complex_clifford" in spec:
        n = spec["complex_clifford"]
        _require(isinstance(n, int) and n >= 0, path,
                 "complex clifford rank must be a nonnegative integer")
        _require(field.is_complex, path,
                 "complex clifford algebras need the field Qi")
        return complex_clifford(n)
    if "ground" in spec:
        return ground_field(field)
    if "dual_numbers" in spec:
        return dual_numbers(field)
    if "tensor" in spec:
        pair = spec["tensor"]
        _require(isinstance(pair, list) and len(pair) == 2, path,
                 "tensor spec must name two algebras")
        for other in pair:
            _require(other in ws.algebras, path,
                     f"unknown algebra {other!r}")
        return graded_tensor(ws.algebras[pair[0]], ws.algebras[pair[1]])
    if "table" in spec:
        parities = spec.get("parities")
        table = spec["table"]
        unit = spec.get("unit")
        _require(isinstance(parities, list) and isinstance(table, list)
                 and isinstance(unit, list), path,
                 "table algebras need parities, table, and unit")
        n = len(parities)
        _require(len(table) == n and all(len(r) == n for r in table), path,
                 "structure table must be n x n")
        _require(all(p in (0, 1) for p in parities)
                 and parities == sorted(parities), path,
                 "parities must be 0/1 with even basis vectors first")
        try:
            even = [f"e{i}" for i, p in enumerate(parities) if p == 0]
            odd = [f"e{i}" for i, p in enumerate(parities) if p == 1]
            carrier = SuperVectorSpace.make(field, even, odd)
            rows = [
                [
                    {
                        k: parse_scalar(x, field)
                        for k, x in enumerate(cell)
                        if parse_scalar(x, field)
                    }
                    for cell in row
                ]
                for row in table
            ]
            uvec = [parse_scalar(x, field) for x in unit]
            return make_algebra(carrier, rows, uvec)
        except WorkspaceError:
            raise
        except (ValueError, AssertionError) as exc:
            raise WorkspaceError(path, f"invalid structure table: {exc}")
    raise WorkspaceError(path, f"unrecognized algebra spec for {name!r}")


def _parse_nerve(spec, path):
    if not isinstance(spec, dict):
        raise WorkspaceError(path, "nerve spec must be an object")
    if "rp2" in spec:
        return rp2_nerve()
    if "torus" in spec:
        return torus_nerve()
    if "circle" in spec:
        n = spec["circle"]
        _require(isinstance(n, int) and n >= 3, path,
                 "circle nerve needs at least 3 vertices")
        return circle_nerve(n)
    if "sphere" in spec:
        n = spec["sphere"]
        _require(isinstance(n, int) and n >= 2, path,
                 "sphere nerve dimension must be at least 2")
        return sphere_nerve(n)
    if "simplices" in spec:
        simp = spec["simplices"]
        _require(isinstance(simp, list) and simp, path,
                 "simplices must be a nonempty array")
        for s in simp:
            _require(isinstance(s, list)
                     and all(isinstance(v, int) for v in s), path,
                     "each simplex must be an integer array")
            _require(all(s[i] < s[i + 1] for i in range(len(s) - 1)), path,
                     f"vertices not increasing in simplex {s}")
        try:
            return Nerve(tuple(tuple(s) for s in simp))
        except Exception as exc:
            raise WorkspaceError(path, f"invalid nerve: {exc}")
    raise WorkspaceError(path, "unrecognized nerve spec")


def _parse_automorphism(ws, A, spec, path):
    if spec == "id":
        return AlgebraHom.identity(A)
    if spec == "parity":
        return parity_hom(A)
    if isinstance(spec, list):
        try:
            rows = [[parse_scalar(x, ws.field) for x in row] for row in spec]
            from .linalg import Matrix
            return AlgebraHom(A, A, Matrix(ws.field, rows), check=True)
        except (ValueError, AssertionError) as exc:
            raise WorkspaceError(path, f"invalid automorphism matrix: {exc}")
        except Exception as exc:
            raise WorkspaceError(path, f"invalid automorphism: {exc}")
    raise WorkspaceError(path, "automorphism must be 'id', 'parity', or a matrix")


def _parse_cocycle(ws, name, spec, path):
    _require(isinstance(spec, dict), path, "cocycle spec must be an object")
    _require("nerve" in spec and "algebra" in spec, path,
             "cocycle needs 'nerve' and 'algebra'")
    _require(spec["nerve"] in ws.nerves, path,
             f"unknown nerve {spec['nerve']!r}")
    _require(spec["algebra"] in ws.algebras, path,
             f"unknown algebra {spec['algebra']!r}")
    nerve = ws.nerves[spec["nerve"]]
    A = ws.algebras[spec["algebra"]]
    cm = aut_crossed_module(A)
    g = {e: cm.G_id for e in nerve.edges()}
    for item in spec.get("g", []):
        _require(isinstance(item, list) and len(item) == 2, path,
                 "each g entry must be [edge, automorphism]")
        e = _edge_key(item[0], path)
        _require(e in set(nerve.edges()), path, f"edge {e} not in the nerve")
        g[e] = _parse_automorphism(ws, A, item[1], path)
    a = {t: cm.H_one for t in nerve.triangles()}
    from .superalgebra import UnitElement
    for item in spec.get("a", []):
        _require(isinstance(item, list) and len(item) == 2, path,
                 "each a entry must be [triangle, vector]")
        t = _tri_key(item[0], path)
        _require(t in set(nerve.triangles()), path,
                 f"triangle {t} not in the nerve")
        try:
            vec = [parse_scalar(x, ws.field) for x in item[1]]
        except ValueError as exc:
            raise WorkspaceError(path, f"invalid unit vector: {exc}")
        u = UnitElement.from_vector(A, vec)
        _require(u is not None and u.parity == 0, path,
                 f"a-value on {t} is not an even unit")
        a[t] = u
    return CMCocycle(nerve, cm, g, a)


def _parse_group_cocycle(ws, spec, path):
    _require(isinstance(spec, dict), path,
             "group cocycle spec must be an object")
    _require("nerve" in spec and "labels" in spec, path,
             "group cocycle needs 'nerve' and 'labels'")
    _require(spec["nerve"] in ws.nerves, path,
             f"unknown nerve {spec['nerve']!r}")
    nerve = ws.nerves[spec["nerve"]]
    labels = {e: "1" for e in nerve.edges()}
    for item in spec["labels"]:
        _require(isinstance(item, list) and len(item) == 2, path,
                 "each label entry must be [edge, label]")
        e = _edge_key(item[0], path)
        _require(e in set(nerve.edges()), path, f"edge {e} not in the nerve")
        _require(isinstance(item[1], str), path, "label must be a string")
        labels[e] = item[1]
    return (spec["nerve"], labels)


def _parse_bundle(ws, name, spec, path):
    _require(isinstance(spec, dict), path, "bundle spec must be an object")
    rng = random.Random(0)
    if "reconstruct" in spec:
        sub = spec["reconstruct"]
        _require(isinstance(sub, dict) and "cocycle" in sub, path,
                 "reconstruct needs a 'cocycle' reference")
        _require(sub["cocycle"] in ws.cocycles, path,
                 f"unknown cocycle {sub['cocycle']!r}")
        c = ws.cocycles[sub["cocycle"]]
        return reconstruct(c.nerve, c.cm.algebra, c, rng,
                           certify=bool(sub.get("certify", False)))
    if "trivial" in spec:
        n = spec["trivial"]
        _require(n in ws.nerves, path, f"unknown nerve {n!r}")
        return trivial_bundle(ws.nerves[n], ws.field)
    if "algebra_bundle" in spec:
        sub = spec["algebra_bundle"]
        _require(isinstance(sub, dict) and "nerve" in sub
                 and "algebra" in sub, path,
                 "algebra_bundle needs 'nerve' and 'algebra'")
        _require(sub["nerve"] in ws.nerves, path,
                 f"unknown nerve {sub['nerve']!r}")
        _require(sub["algebra"] in ws.algebras, path,
                 f"unknown algebra {sub['algebra']!r}")
        return algebra_bundle(ws.nerves[sub["nerve"]],
                              ws.algebras[sub["algebra"]], rng,
                              certify=False)
    if "gerbe" in spec:
        sub = spec["gerbe"]
        _require(isinstance(sub, dict) and "nerve" in sub and "x" in sub,
                 path, "gerbe needs 'nerve' and 'x'")
        _require(sub["nerve"] in ws.nerves, path,
                 f"unknown nerve {sub['nerve']!r}")
        nerve = ws.nerves[sub["nerve"]]
        vals = {t: ws.field.one() for t in nerve.triangles()}
        for item in sub["x"]:
            t = _tri_key(item[0], path)
            try:
                v = parse_scalar(item[1], ws.field)
            except ValueError as exc:
                raise WorkspaceError(path, f"invalid scalar: {exc}")
            _require(bool(v), path, f"gerbe scalar on {t} must be nonzero")
            vals[t] = v
        x = UnitCochain(nerve, 2, ws.field, vals)
        _require(x.is_cocycle(), path, "gerbe scalars are not a 2-cocycle")
        return gerbe_bundle(nerve, ws.field, x)
    if "tensor" in spec:
        pair = spec["tensor"]
        _require(isinstance(pair, list) and len(pair) == 2
                 and all(p in ws.bundles for p in pair), path,
                 "tensor must name two existing bundles")
        return tensor(ws.bundles[pair[0]], ws.bundles[pair[1]], rng)
    if "dsum" in spec:
        pair = spec["dsum"]
        _require(isinstance(pair, list) and len(pair) == 2
                 and all(p in ws.bundles for p in pair), path,
                 "dsum must name two existing bundles")
        return bundle_direct_sum(ws.bundles[pair[0]], ws.bundles[pair[1]])
    raise WorkspaceError(path, f"unrecognized bundle spec for {name!r}")


def _parse_extension(ws, spec, path):
    _require(isinstance(spec, dict), path, "extension spec must be an object")
    if "pin1" in spec:
        return pin_extension_d1(ws.field)
    if "split" in spec:
        sub = spec["split"]
        _require(isinstance(sub, dict), path, "split spec must be an object")
        try:
            zs = [parse_scalar(z, ws.field) for z in sub["z"]]
            labels = list(sub["labels"])
            mul = {(i[0], i[1]): i[2] for i in sub["mul"]}
            grading = {k: int(v) for k, v in sub["grading"].items()}
            return split_extension(ws.field, zs, labels, mul, grading)
        except WorkspaceError:
            raise
        except Exception as exc:
            raise WorkspaceError(path, f"invalid split extension: {exc}")
    raise WorkspaceError(path, "unrecognized extension spec")


def _parse_implementation(ws, spec, path):
    _require(isinstance(spec, dict), path,
             "implementation spec must be an object")
    if "pin1" in spec:
        return pin_implementation_d1(ws.field)
    raise WorkspaceError(path, "unrecognized implementation spec")


def _parse_morphism(ws, spec, path):
    _require(isinstance(spec, dict), path, "morphism spec must be an object")
    if "identity_of" in spec:
        n = spec["identity_of"]
        _require(n in ws.bundles, path, f"unknown bundle {n!r}")
        return identity_morphism(ws.bundles[n])
    raise WorkspaceError(path, "unrecognized morphism spec")


def _parse_butterfly(ws, spec, path):
    _require(isinstance(spec, dict), path, "butterfly spec must be an object")
    if "csa_of" in spec:
        n = spec["csa_of"]
        _require(n in ws.algebras, path, f"unknown algebra {n!r}")
        from .crossedmodule import csa_butterfly
        return csa_butterfly(ws.algebras[n], random.Random(0))
    raise WorkspaceError(path, "unrecognized butterfly spec")


_SECTIONS = ("field", "algebras", "nerves", "cocycles", "group_cocycles",
             "bundles", "extensions", "implementations", "morphisms",
             "butterflies")


def _resolve_section(specs, out, section, build, deps):
    """Build named entries, deferring ones whose same-section references
    are not resolved yet; reference cycles surface as unresolved names."""
    pending = dict(specs or {})
    while pending:
        progressed = False
        for name in list(pending):
            spec = pending[name]
            if any(d in pending for d in deps(spec)):
                continue
            out[name] = build(name, spec, f"{section}.{name}")
            del pending[name]
            progressed = True
        if not progressed:
            name = sorted(pending)[0]
            raise WorkspaceError(
                f"{section}.{name}", "unresolved or circular reference")


def parse_text(text):
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise WorkspaceError(
            None, f"syntax error at line {exc.lineno}, column {exc.colno}:"
                  f" {exc.msg}"
        )
    if not isinstance(raw, dict):
        raise WorkspaceError(None, "workspace must be a JSON object")
    for key in raw:
        if key not in _SECTIONS:
            raise WorkspaceError(key, "unknown workspace section")
    ftag = raw.get("field", "Q")
    if ftag == "Q":
        field = QQ
    elif ftag == "Qi":
        field = QI
    else:
        raise WorkspaceError("field", f"unknown field {ftag!r} (use Q or Qi)")
    ws = Workspace(raw, field)
    _resolve_section(raw.get("algebras"), ws.algebras, "algebras",
                     lambda name, spec, path:
                     _parse_algebra(ws, name, spec, path),
                     lambda spec: spec.get("tensor", [])
                     if isinstance(spec, dict) else [])
    for name, spec in (raw.get("nerves") or {}).items():
        ws.nerves[name] = _parse_nerve(spec, f"nerves.{name}")
    for name, spec in (raw.get("cocycles") or {}).items():
        ws.cocycles[name] = _parse_cocycle(ws, name, spec,
                                           f"cocycles.{name}")
    for name, spec in (raw.get("extensions") or {}).items():
        ws.extensions[name] = _parse_extension(ws, spec,
                                               f"extensions.{name}")
    for name, spec in (raw.get("implementations") or {}).items():
        ws.implementations[name] = _parse_implementation(
            ws, spec, f"implementations.{name}")
    for name, spec in (raw.get("group_cocycles") or {}).items():
        ws.group_cocycles[name] = _parse_group_cocycle(
            ws, spec, f"group_cocycles.{name}")
    _resolve_section(raw.get("bundles"), ws.bundles, "bundles",
                     lambda name, spec, path:
                     _parse_bundle(ws, name, spec, path),
                     lambda spec: (spec.get("tensor", [])
                                   + spec.get("dsum", []))
                     if isinstance(spec, dict) else [])
    for name, spec in (raw.get("morphisms") or {}).items():
        ws.morphisms[name] = _parse_morphism(ws, spec, f"morphisms.{name}")
    for name, spec in (raw.get("butterflies") or {}).items():
        ws.butterflies[name] = _parse_butterfly(ws, spec,
                                                f"butterflies.{name}")
    return ws


def parse_file(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return parse_text(fh.read())
    except OSError as exc:
        raise WorkspaceError(None, f"cannot read {path}: {exc}")


def emit(ws: Workspace) -> str:
    """Canonical serialization; parse(emit(ws)) rebuilds the same document."""
    return json.dumps(ws.raw, indent=2, sort_keys=True) + "\n"
