"""JSON documents, DOT output, and the ``ordcorners`` command line.

Exit codes: 0 when the command ran and its verdict is positive, 2 when it
ran and the verdict is negative (violations, NotSmooth, no lift, ...), and
1 when the input could not be processed.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import random
import re
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path

import jsonschema

from . import corners as C
from . import frames, manybody, products
from .bmaps import BMap, lift_through_blowup, psub_lift, sigma_lift
from .corners import ZERO, CornersSpace, FacePoset, RefinedSpace
from .labels import label_key, label_str, sort_labels
from .monoid_fan import MonoidVector, vector_name

SCHEMA_VERSION = 1
OUT_DIR_ENV = "ORDCORNERS_OUT_DIR"


class InputError(Exception):
    """Input could not be read or violates a schema or invariant."""


# -- documents ---------------------------------------------------------------


def _schema(name: str) -> dict:
    text = resources.files("ordcorners").joinpath("schemas", f"{name}.schema.json").read_text(encoding="utf-8")
    return json.loads(text)


def check_schema(doc, name: str) -> None:
    try:
        jsonschema.validate(doc, _schema(name))
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "(top level)"
        raise InputError(f"{name} document violates its schema at {where}: {exc.message}") from None


@dataclass
class SpaceDoc:
    space: CornersSpace
    blowups: list = field(default_factory=list)  # list of centers, each a list of MonoidVectors
    fibered: dict = field(default_factory=dict)


def _gen_from_json(g) -> MonoidVector:
    return MonoidVector.unit(g) if isinstance(g, str) else MonoidVector(g)


def _gen_to_json(v: MonoidVector):
    items = v.items()
    if len(items) == 1 and items[0][1] == 1:
        return label_str(items[0][0])
    return {label_str(k): c for k, c in items}


def load_space(doc: dict) -> SpaceDoc:
    check_schema(doc, "space")
    try:
        space = CornersSpace(doc["interior"], doc["hypersurfaces"], [tuple(e) for e in doc.get("order", [])], doc.get("corners", []))
    except ValueError as exc:
        raise InputError(str(exc)) from None
    known = set(space.mtot())
    for pair in doc.get("order", []):
        for x in pair:
            if x not in known:
                raise InputError(f"order mentions unknown label {x}")
    for c in doc.get("corners", []):
        for x in c:
            if x not in space.hypersurfaces:
                raise InputError(f"corner mentions unknown label {x}")
    blowups = [[_gen_from_json(g) for g in center] for center in doc.get("blowups", [])]
    return SpaceDoc(space, blowups, dict(doc.get("fibered", {})))


def dump_space(space: CornersSpace, blowups=(), fibered=None) -> dict:
    doc = {
        "schema_version": SCHEMA_VERSION,
        "interior": label_str(space.interior),
        "hypersurfaces": [label_str(h) for h in space.hypersurfaces],
        "order": [[label_str(a), label_str(b)] for a, b in space.covering_edges()],
        "corners": [[label_str(x) for x in sort_labels(f)] for f in space.facets],
    }
    if blowups:
        doc["blowups"] = [sorted((_gen_to_json(v) for v in c), key=lambda g: json.dumps(g, sort_keys=True)) for c in blowups]
    if fibered:
        doc["fibered"] = {k: {s: sorted(v) for s, v in sorted(d.items())} for k, d in sorted(fibered.items())}
    return doc


def refined_from_doc(sd: SpaceDoc) -> RefinedSpace:
    try:
        r = C.initial_refinement(sd.space)
        for center in sd.blowups:
            r = C.blow_up_face(r, center)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    return r


def load_bmap(doc: dict) -> BMap:
    check_schema(doc, "bmap")
    dom = load_space(doc["domain"]).space
    cod = load_space(doc["codomain"]).space
    exps = {(g, h): e for g, row in doc["exponents"].items() for h, e in row.items()}
    try:
        return BMap(dom, cod, exps)
    except ValueError as exc:
        raise InputError(str(exc)) from None


def dump_bmap(f: BMap) -> dict:
    rows: dict = {}
    for (g, h), e in f.exponents().items():
        rows.setdefault(label_str(g), {})[label_str(h)] = e
    return {
        "schema_version": SCHEMA_VERSION,
        "domain": dump_space(f.domain),
        "codomain": dump_space(f.codomain),
        "exponents": rows,
    }


def load_arrangement(doc: dict) -> manybody.SubspaceArrangement:
    check_schema(doc, "arrangement")
    n = doc["ambient_dim"]
    raw = [[[Fraction(x) for x in row] for row in sub] for sub in doc["subspaces"]]
    for sub in raw:
        for row in sub:
            if len(row) != n:
                raise InputError(f"row of length {len(row)} in ambient dimension {n}")
    return manybody.close_arrangement(n, raw)


def dump_arrangement(A: manybody.SubspaceArrangement) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "ambient_dim": A.ambient_dim,
        "subspaces": [[list(r) for r in s.rows] for s in A.subspaces],
    }


# -- rational combinations ----------------------------------------------------

_ATOM = re.compile(r"\s*\*?\s*r(\d+|[A-Za-z_][A-Za-z0-9_]*)(?:\^(-?\d+))?\s*")


def _parse_side(text: str, sign: int, out: dict) -> None:
    text = text.strip()
    if text in ("", "1"):
        return
    pos = 0
    while pos < len(text):
        m = _ATOM.match(text, pos)
        if not m or m.end() == pos:
            raise InputError(f"cannot parse {text[pos:]!r} in a rational combination")
        lab, exp = m.group(1), int(m.group(2) or 1)
        out[lab] = out.get(lab, 0) + sign * exp
        pos = m.end()


def parse_sigma(text: str) -> MonoidVector:
    """Parse ``r1^2/r2`` style products of defining functions into exponents."""
    if text.count("/") > 1:
        raise InputError(f"more than one '/' in {text!r}")
    num, _, den = text.partition("/")
    if not num.strip() and den:
        raise InputError(f"empty numerator in {text!r}")
    out: dict = {}
    _parse_side(num, 1, out)
    _parse_side(den, -1, out)
    return MonoidVector(out)


def parse_sigmas(text: str) -> list[MonoidVector]:
    return [parse_sigma(part) for part in text.split(",") if part.strip()]


# -- emitters -----------------------------------------------------------------


def coordinate_label(v: MonoidVector, ambient) -> str:
    return "(" + ",".join(str(x) for x in v.coords(ambient)) + ")"


def _q(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def emit_dot(fp: FacePoset, ambient=None) -> str:
    """DOT text: nodes by ray, solid arrows for covering relations, dashed
    undirected edges for incident pairs with no order relation."""
    names = dict(fp.names)
    if ambient is None:
        ambient = sort_labels({k for v in fp.rays for k, _ in v.items()})
    nodes = sorted(fp.rays, key=lambda v: label_key(names[v]))
    lines = ["digraph faces {"]
    for v in nodes:
        lines.append(f"  {_q(label_str(names[v]))} [label={_q(coordinate_label(v, ambient))}];")
    order = fp.order or frozenset()
    rays = set(fp.rays)
    edges = []
    for a, b in order:
        if a in rays and b in rays and not any((a, c) in order and (c, b) in order for c in rays):
            edges.append((label_str(names[a]), label_str(names[b])))
    for a, b in sorted(edges):
        lines.append(f"  {_q(a)} -> {_q(b)};")
    dashed = []
    for a, b in fp.incidence_edges():
        if (a, b) not in order and (b, a) not in order:
            x, y = sorted((label_str(names[a]), label_str(names[b])))
            dashed.append((x, y))
    for a, b in sorted(set(dashed)):
        lines.append(f"  {_q(a)} -> {_q(b)} [style=dashed, dir=none];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def refined_report(r: RefinedSpace) -> dict:
    fp = C.face_poset(r)
    names = dict(fp.names)
    amb = r.base.hypersurfaces
    rays = {label_str(names[v]): {label_str(k): c for k, c in v.items()} for v in fp.rays}
    fans = []
    for facet in r.base.facets:
        cones = sorted(sorted(label_str(r.name(g)) for g in c.generators) for c in r.fans[facet].cones)
        fans.append({"corner": [label_str(x) for x in sort_labels(facet)], "cones": cones})
    out = {
        "rays": rays,
        "coordinates": {label_str(names[v]): coordinate_label(v, amb) for v in fp.rays},
        "ambient": [label_str(x) for x in amb],
        "fans": fans,
        "incidence": sorted(sorted(label_str(names[v]) for v in f) for f in fp.facets),
    }
    if fp.order is not None:
        edges = []
        order = fp.order
        rayset = set(fp.rays)
        for a, b in order:
            if a in rayset and b in rayset and not any((a, c) in order and (c, b) in order for c in rayset):
                edges.append([label_str(names[a]), label_str(names[b])])
        out["poset_edges"] = sorted(edges)
    return out


def _verdict(v) -> dict:
    return {
        "sign": v.sign.value,
        "positive": sorted(vector_name(g) for g in v.positive),
        "negative": sorted(vector_name(g) for g in v.negative),
    }


# -- commands -------------------------------------------------------------------


def _read_json(path: str):
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc.msg} at line {exc.lineno}") from None


def replace_interior(space: CornersSpace, variant: str) -> CornersSpace:
    """Move the interior to the bottom (min) or top (max); keep the rest of the order."""
    if variant == "relative":
        return space
    x0 = space.interior
    inner = [(a, b) for a, b in space.less if x0 not in (a, b)]
    if variant == "min":
        extra = [(x0, h) for h in space.hypersurfaces]
    elif variant == "max":
        extra = [(h, x0) for h in space.hypersurfaces]
    else:
        raise InputError(f"unknown variant {variant!r}")
    return CornersSpace(x0, space.hypersurfaces, inner + extra, space.facets)


def _space_arg(path):
    sd = load_space(_read_json(path))
    problems = C.validate(sd.space)
    return sd, problems


def _valid_space(path) -> SpaceDoc:
    sd, problems = _space_arg(path)
    if problems:
        raise InputError(f"{path}: " + "; ".join(problems))
    return sd


def cmd_validate(args):
    sd, problems = _space_arg(args.inputs[0])
    out = {"violations": problems, "valid": not problems, "space": dump_space(sd.space, sd.blowups, sd.fibered)}
    return (0 if not problems else 2), out, None


def cmd_product(args):
    X = replace_interior(_valid_space(args.inputs[0]).space, args.variant)
    Y = replace_interior(_valid_space(args.inputs[1]).space, args.variant)
    r = products.ordered_product_fan(X, Y)
    b = products.ordered_product_blowup(X, Y, rng=random.Random(args.seed))
    agrees = products.same_refinement(r, b)
    out = refined_report(r)
    out["space"] = dump_space(C.blown_space(r))
    out["blowup_agrees"] = agrees
    dot = emit_dot(C.face_poset(r), r.base.hypersurfaces)
    return (0 if agrees else 2), out, dot


def cmd_cone(args):
    X = _valid_space(args.inputs[0]).space
    space, xi = products.relative_cone(X, args.variant, principal=args.principal)
    return 0, {"principal": xi, "space": dump_space(space), "violations": C.validate(space)}, None


def cmd_join(args):
    X = _valid_space(args.inputs[0]).space
    Y = _valid_space(args.inputs[1]).space
    principal = args.principal if args.variant == "relative" else None
    j = products.join(X, Y, args.variant, principal)
    direct = products.join_matches_direct(X, Y, args.variant, principal)
    out = {
        "space": dump_space(j.space),
        "principal": [j.xi, j.eta],
        "quotient_rays": {label_str(p): {label_str(k): c for k, c in v.items()} for p, v in j.quotient.items()},
        "direct_agrees": direct,
    }
    if args.variant != "relative":
        eq = products.join_equivalence(X, Y)
        out["equivalence"] = {"ok": eq.ok, "bijection": {label_str(a): label_str(b) for a, b in eq.bijection.items()}, "problems": list(eq.problems)}
        direct = direct and eq.ok
    return (0 if direct else 2), out, None


def cmd_blowup(args):
    sd = _valid_space(args.inputs[0])
    r = refined_from_doc(sd)
    out = refined_report(r)
    out["blowups"] = dump_space(sd.space, sd.blowups).get("blowups", [])
    return 0, out, emit_dot(C.face_poset(r), sd.space.hypersurfaces)


def cmd_lift_check(args):
    f = load_bmap(_read_json(args.inputs[0]))
    sd = _valid_space(args.inputs[1])
    if sd.space != f.codomain:
        raise InputError("refined space is not the map's codomain")
    r = refined_from_doc(sd)
    lift = lift_through_blowup(f, r)
    out = {"exists": lift is not None}
    if lift is not None:
        out["lift"] = dump_bmap(lift)["exponents"]
    return (0 if lift is not None else 2), out, None


def _sigmas(args):
    if not args.sigmas:
        raise InputError("--sigmas is required")
    return parse_sigmas(args.sigmas)


def cmd_sigma_check(args):
    sd = _valid_space(args.inputs[0])
    r = refined_from_doc(sd)
    results = []
    smooth = True
    for text, s in zip([t.strip() for t in args.sigmas.split(",") if t.strip()], _sigmas(args)):
        try:
            rep = sigma_lift(r, s)
        except ValueError as exc:
            raise InputError(str(exc)) from None
        smooth &= rep.overall.value != "NotSmooth"
        results.append({
            "sigma": text,
            "overall": rep.overall.value,
            "vanishing": sorted(label_str(r.name(v)) for v in rep.vanishing),
            "vanishing_inverse": sorted(label_str(r.name(v)) for v in rep.vanishing_inverse),
            "cones": [
                {"corner": [label_str(x) for x in facet], "cone": sorted(label_str(r.name(g)) for g in c.generators), "verdict": _verdict(v)}
                for facet, c, v in rep.cones
            ],
        })
    return (0 if smooth else 2), {"results": results}, None


def cmd_psub_check(args):
    sd = _valid_space(args.inputs[0])
    r = refined_from_doc(sd)
    try:
        ok = psub_lift(r, _sigmas(args))
    except ValueError as exc:
        raise InputError(str(exc)) from None
    return (0 if ok else 2), {"sigmas": args.sigmas, "psub": ok}, None


def cmd_fiber_product(args):
    f = load_bmap(_read_json(args.inputs[0]))
    g = load_bmap(_read_json(args.inputs[1]))
    try:
        fp = products.fiber_product(f, g)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    out = {
        "elements": [label_str(p) for p in fp.elements],
        "order": sorted([label_str(a), label_str(b)] for a, b in fp.order),
        "tags": {label_str(p): t for p, t in fp.tags.items()},
        "functionals": {label_str(e): {label_str(k): c for k, c in v.items()} for e, v in fp.functionals.items()},
        "psub_ok": fp.psub_ok,
    }
    return (0 if fp.psub_ok else 2), out, None


def cmd_manybody(args):
    A = load_arrangement(_read_json(args.inputs[0]))
    mb = manybody.mb_space(A)
    out = {
        "arrangement": dump_arrangement(A),
        "space": dump_space(mb.space),
        "fibrations": {
            lab: {"fiber": dump_arrangement(mb.fibers[lab]), "base_index": list(mb.base_index[lab])}
            for lab in mb.space.hypersurfaces
        },
        "violations": C.validate(mb.space),
    }
    fp = C.face_poset(C.RefinedSpace(mb.space, {f: _orthant(f) for f in mb.space.facets}, _unit_names(mb.space), _unit_order(mb.space)))
    return 0, out, emit_dot(fp, mb.space.hypersurfaces)


def _orthant(f):
    from .monoid_fan import Fan

    return Fan.orthant(f)


def _unit_names(space):
    names = {MonoidVector.unit(h): h for h in space.hypersurfaces}
    names[ZERO] = space.interior
    return names


def _unit_order(space):
    u = lambda x: ZERO if x == space.interior else MonoidVector.unit(x)
    return [(u(a), u(b)) for a, b in space.less]


def cmd_mb_product_check(args):
    A = load_arrangement(_read_json(args.inputs[0]))
    B = load_arrangement(_read_json(args.inputs[1]))
    chk = manybody.mb_product_check(A, B)
    out = {
        "iso": chk.iso,
        "hypersurfaces": len(chk.witness) - 1,
        "witness": {k: label_str(v) for k, v in sorted(chk.witness.items())},
        "problems": list(chk.problems),
    }
    return (0 if chk.iso else 2), out, None


def cmd_frames_verify(args):
    if args.n is None or args.k is None:
        raise InputError("--n and --k are required")
    try:
        s = frames.verify_splitting(args.kind, args.n, args.k)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    ok = s.table_ok and s.kernel_ok and s.image_ok
    out = {
        "kind": args.kind,
        "n": args.n,
        "k": args.k,
        "table_ok": s.table_ok,
        "kernel_ok": s.kernel_ok,
        "image_ok": s.image_ok,
        "images": [repr(f) for f in s.images],
        "kernel_frame": [repr(f) for f in s.kernel_frame],
        "image_frame": [repr(f) for f in s.image_frame],
    }
    if args.kind == "phi":
        out["second_order"] = frames.total_bdf_second_order(args.n)
        ok = ok and out["second_order"]
    return (0 if ok else 2), out, None


COMMANDS = {
    "validate": (cmd_validate, 1),
    "product": (cmd_product, 2),
    "join": (cmd_join, 2),
    "cone": (cmd_cone, 1),
    "blowup": (cmd_blowup, 1),
    "lift-check": (cmd_lift_check, 2),
    "sigma-check": (cmd_sigma_check, 1),
    "psub-check": (cmd_psub_check, 1),
    "fiber-product": (cmd_fiber_product, 2),
    "manybody": (cmd_manybody, 1),
    "mb-product-check": (cmd_mb_product_check, 2),
    "frames-verify": (cmd_frames_verify, 0),
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="ordcorners", description="Exact combinatorics of manifolds with ordered corners.")
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("inputs", nargs="*", help="input JSON documents")
    p.add_argument("--variant", choices=["min", "max", "relative"], default="relative")
    p.add_argument("--principal", choices=["min", "max"], default="min", help="placement of the new face for relative cones and joins")
    p.add_argument("--out", help="report path ('-' for stdout)")
    p.add_argument("--format", choices=["json", "dot"], default="json")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--sigmas", help='comma-separated rational combinations, e.g. "r1/r2,r1^2/r3"')
    p.add_argument("--kind", choices=["phi", "wedge"], default="phi")
    p.add_argument("--n", type=int)
    p.add_argument("--k", type=int)
    return p


def inputs_digest(args) -> str:
    h = hashlib.sha256()
    for path in args.inputs:
        h.update(Path(path).read_bytes())
        h.update(b"\0")
    params = {k: getattr(args, k) for k in ("command", "variant", "principal", "seed", "sigmas", "kind", "n", "k")}
    h.update(json.dumps(params, sort_keys=True).encode("utf-8"))
    return h.hexdigest()


def render_report(command: str, digest: str, outputs: dict) -> str:
    doc = {"schema_version": SCHEMA_VERSION, "operation": command, "inputs_sha256": digest, "outputs": outputs}
    return json.dumps(doc, sort_keys=True, ensure_ascii=False, indent=2) + "\n"


def _destination(args) -> Path | None:
    if args.out == "-":
        return None
    if args.out:
        return Path(args.out)
    out_dir = os.environ.get(OUT_DIR_ENV)
    if out_dir:
        ext = "dot" if args.format == "dot" else "json"
        return Path(out_dir) / f"{args.command}.{ext}"
    return None


def run_cli(argv=None) -> int:
    args = build_parser().parse_intermixed_args(argv)
    fn, arity = COMMANDS[args.command]
    try:
        if len(args.inputs) != arity:
            raise InputError(f"{args.command} takes {arity} input file(s), got {len(args.inputs)}")
        code, outputs, dot = fn(args)
        if args.format == "dot":
            if dot is None:
                raise InputError(f"{args.command} has no DOT output")
            text = dot
        else:
            text = render_report(args.command, inputs_digest(args), outputs)
    except InputError as exc:
        print(f"ordcorners {args.command}: {exc}", file=sys.stderr)
        return 1
    dest = _destination(args)
    if dest is None:
        sys.stdout.write(text)
    else:
        dest.parent.mkdir(parents=True, exist_ok=True)
        dest.write_text(text, encoding="utf-8")
    return code


def main() -> None:
    raise SystemExit(run_cli())
