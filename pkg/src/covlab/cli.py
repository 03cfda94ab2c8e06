"""Command-line front end.

Exit codes: 0 success, 1 a check failed or the geometry was rejected,
2 usage or input errors.  Rationals print as ``p/q``; ``--float`` prints
decimals with 17 significant digits.
"""
from __future__ import annotations

import argparse
import json
import re
import sys
from pathlib import Path

from . import conetomo as ct
from . import verify as vf
from .covariogram import cov, cov_grid, cross_cov, cross_cov_grid
from .exactgeom import (
    GeometryError, Polytope, fmt_vec, load_polytope, parse_vec, polytope_to_json, rat, reflect,
)
from .facerecovery import classify_antipodal, parallel_facet_data
from .faces import exposed_face, faces_summary
from .gallery import FAMILIES, ParameterConstraintViolated, SymmetricFactor, parse_params
from .syniso import synisothetic_with_witness

_NEGATIVE_VALUE = re.compile(r"^-[\d./]")


class UsageError(Exception):
    pass


def _num(q, as_float: bool) -> str:
    if isinstance(q, float) or as_float:
        return format(float(q), ".17g")
    return str(rat(q))


def _vec_arg(text: str):
    try:
        return parse_vec(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"cannot parse vector {text!r}") from exc


def _polytope_arg(path: str) -> Polytope:
    try:
        return load_polytope(path)
    except (OSError, json.JSONDecodeError, KeyError, ValueError) as exc:
        raise UsageError(f"cannot read polytope {path}: {exc}") from exc


def _cone_arg(path: str) -> ct.ConvexCone:
    try:
        return ct.load_cone(path)
    except (OSError, json.JSONDecodeError, KeyError, ValueError) as exc:
        raise UsageError(f"cannot read cone {path}: {exc}") from exc


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2)


# ---------------------------------------------------------------------------
# verbs


def cmd_cov(args) -> int:
    K = _polytope_arg(args.k)
    L = _polytope_arg(args.l) if args.l else None
    if args.action == "eval":
        if args.x is None:
            raise UsageError("cov eval needs --x")
        x = _vec_arg(args.x)
        if len(x) != K.dim:
            raise UsageError("x has the wrong dimension")
        val = cov(K, x) if L is None else cross_cov(K, L, x)
        print(_num(val, args.float))
        return 0
    if args.res is None or args.out is None:
        raise UsageError("cov grid needs --res and --out")
    field = cov_grid(K, args.res) if L is None else cross_cov_grid(K, L, args.res)
    field.to_csv(args.out, as_float=args.float)
    print(f"wrote {len(field.values)} rows to {args.out}")
    return 0


def cmd_faces(args) -> int:
    P = _polytope_arg(args.polytope)
    if args.action == "lattice":
        print(_dump(faces_summary(P)))
        return 0
    if args.w is None:
        raise UsageError(f"faces {args.action} needs --w")
    w = _vec_arg(args.w)
    if args.action == "classify":
        r = classify_antipodal(P, w)
        print(_dump({"case": r.case_id, "exponent": r.leading_exponent, "dim_DPw": r.dim_DPw,
                     "sum_vanishes": r.sum_vanishes}))
        return 0
    data = parallel_facet_data(P, w)
    out = {
        "w": fmt_vec(w),
        "face": [fmt_vec(v) for v in exposed_face(P, w).vertices],
        "opposite_face": [fmt_vec(v) for v in exposed_face(P, tuple(-c for c in w)).vertices],
        "chart_coordinates": list(data.coords),
        "projected_face": polytope_to_json(data.F0)["vertices"] if data.F0 else None,
        "projected_opposite_face": polytope_to_json(data.G0)["vertices"] if data.G0 else None,
        "width": _num(data.gap, args.float),
    }
    if args.x is not None:
        x = _vec_arg(args.x)
        out["sum_field"] = _num(data.sum_field(x), args.float)
        out["cross_field"] = _num(data.cross_field(x), args.float)
    print(_dump(out))
    return 0


def cmd_syniso(args) -> int:
    P, Q = _polytope_arg(args.p), _polytope_arg(args.q)
    P2 = _polytope_arg(args.p2) if args.p2 else reflect(P)
    Q2 = _polytope_arg(args.q2) if args.q2 else reflect(Q)
    ok, witness = synisothetic_with_witness(P, P2, Q, Q2)
    rows = []
    for (side, idx, ids), matches in sorted(witness.items()):
        rows.append({"side": "pq"[side], "polytope": idx, "vertex_ids": list(ids),
                     "matches": [{"polytope": m[1], "vertex_ids": list(m[2])} for m in matches]})
    print(_dump({"synisothetic": ok, "witness": rows}))
    return 0


def cmd_xray(args) -> int:
    A = _cone_arg(args.cone)
    clip = _polytope_arg(args.clip) if args.clip else None
    try:
        val = ct.xray_cone(A, _vec_arg(args.d), _vec_arg(args.y), clip=clip)
    except ct.InfiniteChord:
        print("InfiniteChord")
        return 0
    print(_num(val, args.float))
    return 0


def cmd_chord(args) -> int:
    K = _polytope_arg(args.polygon)
    try:
        val = ct.minus_one_chord(K, _vec_arg(args.p), _vec_arg(args.d))
    except ct.PInsideBody:
        print("PInsideBody")
        return 1
    print(_num(val, args.float))
    return 0


def cmd_gallery(args) -> int:
    family = FAMILIES.get(args.family)
    if family is None:
        raise UsageError(f"unknown family {args.family!r}; choose from {', '.join(sorted(FAMILIES))}")
    try:
        params = parse_params(family, args.params)
    except KeyError as exc:
        raise UsageError(str(exc)) from exc
    try:
        bodies = family.build(params)
    except (ParameterConstraintViolated, SymmetricFactor) as exc:
        raise UsageError(f"{type(exc).__name__}: {exc}") from exc
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    entries = {}
    for name, body in bodies.items():
        if isinstance(body, Polytope):
            obj, kind = polytope_to_json(body), "polytope"
        else:
            obj, kind = ct.cone_to_json(body), "cone"
        (out / f"{name}.json").write_text(_dump(obj) + "\n")
        entries[name] = {"file": f"{name}.json", "kind": kind}
    manifest = {
        "family": family.name,
        "params": params,
        "bodies": entries,
        "probes": 400,
        "relations": [{"kind": k, "bodies": list(b), "expected": e} for k, b, e in family.relations],
    }
    (out / "expectations.json").write_text(_dump(manifest) + "\n")
    print(f"wrote {len(entries)} bodies and expectations.json to {out}")
    return 0


def cmd_verify(args) -> int:
    if args.manifest:
        reports = [vf.manifest_checks(args.manifest, args.seed)]
    else:
        reports = vf.run(args.suite, args.seed, vf.FULL if args.full else vf.QUICK)
    sys.stdout.write(vf.render(reports, args.seed))
    return 0 if all(r.passed for r in reports) else 1


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--float", action="store_true", help="print decimals instead of p/q")

    parser = argparse.ArgumentParser(prog="covlab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("cov", parents=[common], help="evaluate covariograms")
    p.add_argument("action", choices=["eval", "grid"])
    p.add_argument("--k", required=True, help="polytope JSON")
    p.add_argument("--l", help="second polytope JSON (cross covariogram)")
    p.add_argument("--x", help="point, e.g. '1/4,1/4,1/4'")
    p.add_argument("--res", type=int, help="grid nodes per axis")
    p.add_argument("--out", help="CSV output path")
    p.set_defaults(func=cmd_cov)

    p = sub.add_parser("faces", parents=[common], help="face data")
    p.add_argument("action", choices=["classify", "recover", "lattice"])
    p.add_argument("--polytope", required=True)
    p.add_argument("--w", help="direction")
    p.add_argument("--x", help="point orthogonal to w for 'recover'")
    p.set_defaults(func=cmd_faces)

    p = sub.add_parser("syniso", parents=[common], help="synisothesis of (P,-P) and (Q,-Q)")
    p.add_argument("action", choices=["check"])
    p.add_argument("--p", required=True)
    p.add_argument("--q", required=True)
    p.add_argument("--p2", help="second polytope of the first pair (default -P)")
    p.add_argument("--q2", help="second polytope of the second pair (default -Q)")
    p.set_defaults(func=cmd_syniso)

    p = sub.add_parser("xray", parents=[common], help="X-ray of a cone")
    p.add_argument("--cone", required=True)
    p.add_argument("--d", required=True)
    p.add_argument("--y", required=True, help="ambient point or coordinates on d's hyperplane")
    p.add_argument("--clip", help="polytope JSON intersected with the cone")
    p.set_defaults(func=cmd_xray)

    p = sub.add_parser("chord", parents=[common], help="-1-chord function of a polygon")
    p.add_argument("--polygon", required=True)
    p.add_argument("--p", required=True)
    p.add_argument("--d", required=True)
    p.set_defaults(func=cmd_chord)

    p = sub.add_parser("gallery", parents=[common], help="build example families")
    p.add_argument("action", choices=["build"])
    p.add_argument("family", help=", ".join(sorted(FAMILIES)))
    p.add_argument("--params", help="overrides like 'alpha=2;y=1,0'")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gallery)

    p = sub.add_parser("verify", parents=[common], help="run verification suites")
    p.add_argument("--suite", default="all", choices=["all", *sorted(vf.SUITES)])
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--full", action="store_true", help="acceptance-size workloads")
    p.add_argument("--manifest", help="check a gallery expectations manifest instead")
    p.set_defaults(func=cmd_verify)
    return parser


def _glue_negative_values(argv: list[str]) -> list[str]:
    """Turn ``--d -1,0`` into ``--d=-1,0`` so vectors may start with a minus sign."""
    out = []
    for tok in argv:
        if out and out[-1].startswith("--") and "=" not in out[-1] and _NEGATIVE_VALUE.match(tok):
            out[-1] = f"{out[-1]}={tok}"
        else:
            out.append(tok)
    return out


def main(argv=None) -> int:
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    args = parser.parse_args(_glue_negative_values(argv))
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"covlab: error: {exc}", file=sys.stderr)
        return 2
    except (GeometryError, ArithmeticError) as exc:
        print(f"covlab: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
