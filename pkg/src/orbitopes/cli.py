"""Command-line front end: describe, member, export, verify."""
from __future__ import annotations

import argparse
import json
import sys

from .catalog import (
    MembershipResult,
    OrbitopeSpec,
    load_spec,
    matrix_from_json,
    membership,
    scalar_to_json,
)
from .coorbitope import (
    extreme_orbits,
    has_rational_coordinates,
    is_biorbitope,
    polar_membership,
    polar_pencil,
)
from .errors import (
    NotFullDimensional,
    OrbitopeError,
    ShapeMismatch,
    SizeCapExceeded,
    SpecError,
    SymmetryViolation,
    UnsupportedWeight,
)
from .momentum_polytope import MomentumPolytope, treated_as_zero
from .pencil import export_sdpa, orbitope_pencil, realify
from .root_system import Family
from .verify import verify_suite

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_OUTSIDE = 2
EXIT_INPUT = 3
EXIT_NOT_FULL = 4
EXIT_UNSUPPORTED = 5


def _chamber(fam: Family, n: int) -> str:
    if fam is Family.A:
        return f"x_1 >= ... >= x_{n + 1} (coordinate sum 0)"
    if fam is Family.D:
        return f"x_1 >= ... >= x_{n - 1} >= |x_{n}|"
    return f"x_1 >= ... >= x_{n} >= 0"


def _vec(v) -> list:
    return [scalar_to_json(t) for t in v]


def describe(spec: OrbitopeSpec) -> dict:
    fam, sys_ = spec.family, spec.system
    P = MomentumPolytope(sys_, spec.x)
    out = {
        "family": fam.tag.value, "field": fam.field.value, "m": fam.m, "n": fam.n,
        "group": fam.group, "action": fam.action,
        "root_system": sys_.label, "chamber": _chamber(sys_.family, sys_.rank),
        "trace_form_scale": fam.scale,
        "x_dominant": _vec(spec.x.dominant),
        "beta": _vec(P.beta),
        "beta_treated_as_zero": [j + 1 for j in treated_as_zero(P)],
        "full_dimensional": P.is_full_dimensional(),
    }
    if fam.is_hermitian:
        out["shift"] = scalar_to_json(spec.shift)
    if spec.base is not None:
        out["reduced_from_matrix"] = True
    if P.is_full_dimensional():
        out["facet_indices"] = [i + 1 for i in P.facet_indices()]
        out["polar_extreme_points"] = [e.to_json() for e in extreme_orbits(spec)]
        out["biorbitope"] = is_biorbitope(spec).to_json() if any(
            t != 0 for t in spec.x.dominant) else None
    out["rational_coordinates"] = has_rational_coordinates(spec).to_json()
    try:
        out["orbitope_pencil"] = orbitope_pencil(spec).metadata()["blocks"]
    except OrbitopeError as exc:
        out["orbitope_pencil"] = {"error": str(exc)}
    try:
        out["polar_pencil"] = polar_pencil(spec).metadata()["blocks"]
    except OrbitopeError as exc:
        out["polar_pencil"] = {"error": str(exc)}
    return out


def _describe_text(d: dict) -> str:
    lines = [f"{d['family']} over {d['field']} ({d['m']}x{d['n']}), {d['group']} acting by "
             f"{d['action']}",
             f"root system {d['root_system']}; chamber {d['chamber']}; trace-form scale "
             f"{d['trace_form_scale']}",
             f"x (dominant) = {d['x_dominant']}",
             f"beta(x) = {d['beta']}"]
    if d["beta_treated_as_zero"]:
        lines.append(f"beta values treated as zero: {d['beta_treated_as_zero']}")
    if d["full_dimensional"]:
        lines.append(f"facet indices I(x) = {d['facet_indices']}")
        for e in d["polar_extreme_points"]:
            lines.append(f"polar extreme orbit z_{e['index']} = {e['z']}")
        if d.get("biorbitope"):
            b = d["biorbitope"]
            lines.append(f"biorbitope: {b['theorem']} ({b['explanation']}); single facet class: "
                         f"{b['single_facet_class']}")
    else:
        lines.append("O_x is not full-dimensional")
    r = d["rational_coordinates"]
    lines.append(f"rational coordinates: {r['rational']}")
    for key in ("orbitope_pencil", "polar_pencil"):
        val = d[key]
        if isinstance(val, dict):
            lines.append(f"{key}: unavailable ({val['error']})")
        else:
            sizes = ", ".join(f"{b['kind']}:{b['size']}" for b in val)
            lines.append(f"{key} block sizes: {sizes}")
    return "\n".join(lines)


def _load_matrix(path, spec: OrbitopeSpec):
    with open(path) as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SpecError(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}") from exc
    return matrix_from_json(obj, spec.family.field)


def _emit(args, payload: dict, text: str) -> None:
    if args.output_format == "json":
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(text)


def cmd_describe(args) -> int:
    spec = load_spec(args.spec)
    d = describe(spec)
    _emit(args, d, _describe_text(d))
    return EXIT_OK


def cmd_member(args) -> int:
    spec = load_spec(args.spec)
    y = _load_matrix(args.y, spec)
    if args.which == "orbitope":
        res: MembershipResult = membership(spec, y, eps=args.tol)
    elif args.which == "polar":
        res = polar_membership(spec, y) if args.tol is None else \
            polar_membership(spec, y, eps=args.tol)
    else:
        res = orbitope_pencil(spec).membership(y, eps=args.tol)
    payload = {"which": args.which, **res.to_json()}
    _emit(args, payload, f"{res.verdict.value} (worst constraint {res.constraint}, "
                         f"slack {res.slack:.12g})")
    return EXIT_OUTSIDE if not res.verdict.feasible else EXIT_OK


def cmd_export(args) -> int:
    spec = load_spec(args.spec)
    pencil = orbitope_pencil(spec) if args.target == "orbitope" else polar_pencil(spec)
    if args.format == "json":
        meta = pencil.metadata()
        with open(args.out, "w") as fh:
            json.dump(meta, fh, indent=2)
    else:
        pencil = realify(pencil).materialize()
        export_sdpa(pencil, args.out)
        meta = pencil.metadata()
    summary = ", ".join(f"{b['kind']}:{b['size']}" for b in meta["blocks"])
    _emit(args, {"out": args.out, "format": args.format, "dim": meta["dim"],
                 "blocks": meta["blocks"]},
          f"wrote {args.out}: {len(meta['blocks'])} block(s) [{summary}], "
          f"{meta['dim']} variables")
    return EXIT_OK


def cmd_verify(args) -> int:
    spec = load_spec(args.spec)
    reports = verify_suite(spec, args.suite, args.samples, args.seed)
    ok = all(r.passed for r in reports)
    _emit(args, {"passed": ok, "reports": [r.to_json() for r in reports]},
          "\n".join(r.to_text() for r in reports))
    return EXIT_OK if ok else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="orbitopes",
                                     description="Polar orbitopes: oracles, LMIs, verification")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--spec", required=True, help="orbitope spec JSON file")
        p.add_argument("--output-format", choices=("text", "json"), default="text")

    p = sub.add_parser("describe", help="summarize a spec")
    common(p)
    p.set_defaults(func=cmd_describe)

    p = sub.add_parser("member", help="membership verdict for a matrix")
    common(p)
    p.add_argument("--y", required=True, help="matrix JSON file")
    p.add_argument("--which", choices=("orbitope", "polar", "pencil"), default="orbitope")
    p.add_argument("--tol", type=float, default=None, help="boundary band")
    p.set_defaults(func=cmd_member)

    p = sub.add_parser("export", help="write an LMI for the orbitope or its polar")
    common(p)
    p.add_argument("--target", choices=("orbitope", "polar"), default="orbitope")
    p.add_argument("--format", choices=("sdpa", "json"), default="sdpa")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("verify", help="run verification suites")
    common(p)
    p.add_argument("--suite", choices=("kostant", "duality", "faces", "all"), default="all")
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except NotFullDimensional as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NOT_FULL
    except (UnsupportedWeight, SizeCapExceeded) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except (SpecError, ShapeMismatch, SymmetryViolation, OrbitopeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    raise SystemExit(main())
