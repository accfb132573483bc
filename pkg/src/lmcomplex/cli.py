"""Command-line front end.

Exit status is 0 on success, 1 on a domain error and 2 on a usage error.
"""

from __future__ import annotations

import argparse
import csv
import io as _io
import json
import secrets
import sys
from pathlib import Path

from . import __version__, linalg
from .complex import ComplexError, classify_surface
from .invariants import betti_numbers, degree_report, density_report, mu_tilde
from .io import (dumps, format_complex, load_forbidden_list, read_complex,
                 save_forbidden_list, to_jsonable)
from .patterns import (build_forbidden_list, certify_asphericable, find_embedding,
                       low_degree_configuration)
from .stochastic import betti_experiment, collapse_experiment, threshold_experiment
from .surfaces import (CATALOG_NAMES, catalog, collapse, enumerate_regular_quotients,
                       grid_torus_triangulation, random_sphere_triangulation)


class UsageError(Exception):
    pass


def _seed(args) -> int:
    if args.seed is None:
        args.seed = secrets.randbelow(2**31)
        print(f"seed: {args.seed}", file=sys.stderr)
    return args.seed


def _emit(args, payload: dict, rows: list[dict] | None = None) -> None:
    payload = {"command": args.command, "version": __version__, **payload}
    if getattr(args, "format", "json") == "csv":
        text = _to_csv(rows if rows is not None else [payload])
    else:
        text = dumps(payload)
    out = getattr(args, "out", None)
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _to_csv(rows: list[dict]) -> str:
    flat_rows = []
    for r in rows:
        flat = {}
        for k, v in to_jsonable(r).items():
            if isinstance(v, dict):
                for k2, v2 in v.items():
                    if not isinstance(v2, (dict, list)):
                        flat[f"{k}.{k2}"] = v2
            elif not isinstance(v, list):
                flat[k] = v
        flat_rows.append(flat)
    fields: list[str] = []
    for r in flat_rows:
        fields += [k for k in r if k not in fields]
    buf = _io.StringIO()
    w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    w.writeheader()
    w.writerows(flat_rows)
    return buf.getvalue()


def _pattern(spec: str):
    if spec in CATALOG_NAMES:
        return catalog(spec)
    return read_complex(spec)


# -- handlers ----------------------------------------------------------------------

def cmd_gen(args) -> None:
    if args.kind == "sphere":
        S = random_sphere_triangulation(args.vertices, _seed(args), args.flips_per_vertex)
        header = f"# sphere v={args.vertices} seed={args.seed} version={__version__}\n"
    elif args.kind == "torus":
        S = grid_torus_triangulation(args.m, args.k)
        header = ""
    else:
        S = catalog(args.name)
        header = ""
    text = header + format_complex(S)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_inv(args) -> None:
    S = read_complex(args.file)
    rep = density_report(S)
    info = classify_surface(S)
    deg = degree_report(S)
    _emit(args, {**to_jsonable(rep), "surface": to_jsonable(info),
                 "degrees": to_jsonable(deg), "e": S.e})


def cmd_mutilde(args) -> None:
    S = read_complex(args.file)
    res = mu_tilde(S, args.mode, args.cap)
    _emit(args, {**to_jsonable(res), "mode": args.mode})


def cmd_betti(args) -> None:
    S = read_complex(args.file)
    _emit(args, {**to_jsonable(betti_numbers(S, args.field)), "backend": linalg.BACKEND})


def cmd_collapse(args) -> None:
    S = read_complex(args.file)
    res = collapse(S, args.seed)
    _emit(args, {"outcome": res.outcome, "core": to_jsonable(res.core),
                 "removed": [[list(e), list(f)] for e, f in res.removed],
                 "residual_graph": [list(e) for e in res.residual_graph]})


def cmd_contains(args) -> None:
    P, H = _pattern(args.pattern), read_complex(args.host)
    if args.count:
        _emit(args, {"count": find_embedding(P, H, "count")})
    else:
        emb = find_embedding(P, H, "first")
        _emit(args, {"found": emb is not None,
                     "vertex_map": None if emb is None else {str(k): v for k, v in emb.vertex_map.items()}})


def cmd_config(args) -> None:
    M = read_complex(args.file)
    cfg = low_degree_configuration(M, args.bound)
    _emit(args, {"found": cfg is not None, "configuration": to_jsonable(cfg)})


def cmd_quotients(args) -> None:
    S = read_complex(args.file)
    specs = enumerate_regular_quotients(S, args.max_merges, cap=args.cap, with_specs=True)
    _emit(args, {"count": len(specs),
                 "quotients": [{"partition": [list(c) for c in s.partition],
                                "quotient": to_jsonable(s.quotient),
                                "edge_image_collisions": s.edge_image_collisions}
                               for s in specs]})


def cmd_list(args) -> None:
    budget = {"count": args.spheres, "max_vertices": args.max_vertices, "seed": _seed(args)}
    fl = build_forbidden_list(args.degree, args.faces, budget, args.max_merges, args.max_members)
    save_forbidden_list(fl, args.out)
    print(json.dumps({"command": "list", "version": __version__, "out": str(args.out),
                      "seed": args.seed, "counts": {"L1": len(fl.members_L1),
                                                    "Lprime": len(fl.members_Lprime),
                                                    "L2": len(fl.members_L2)},
                      "complete": fl.complete, "partial": fl.partial}, indent=2, sort_keys=True))


def cmd_certify(args) -> None:
    Y = read_complex(args.file)
    fl = load_forbidden_list(args.list)
    cert = certify_asphericable(Y, fl)
    witness = None
    if cert.witness is not None:
        witness = {"pattern": to_jsonable(cert.witness.pattern),
                   "vertex_map": {str(k): v for k, v in cert.witness.vertex_map.items()}}
    _emit(args, {"verdict": cert.verdict, "tetrahedra": [list(t) for t in cert.tetrahedra],
                 "pairwise_face_disjoint": cert.pairwise_face_disjoint,
                 "sigma_free": cert.sigma_free, "l2_free": cert.l2_free,
                 "witness": witness, "note": cert.note,
                 "list_parameters": {"degree_bound": fl.degree_bound, "face_cap": fl.face_cap,
                                     "complete": fl.complete}})


def cmd_experiment(args) -> None:
    seed = _seed(args)
    if args.kind == "threshold":
        if not args.alpha:
            raise UsageError("threshold experiments need --alpha")
        rep = threshold_experiment(_pattern(args.pattern), args.n, args.alpha, args.c,
                                   args.trials, seed)
    elif args.kind == "betti":
        if len(args.n) != 1:
            raise UsageError("betti experiments take a single --n")
        rep = betti_experiment(args.n[0], args.c, args.epsilon, args.trials, seed, p=args.p)
    else:
        if len(args.n) != 1:
            raise UsageError("collapse experiments take a single --n")
        rule = {"p": args.p} if args.p is not None else {"c": args.c, "delta": args.delta}
        rep = collapse_experiment(args.n[0], rule, args.trials, seed)
    if args.timing:
        print(f"wall time: {rep.wall_time:.3f}s", file=sys.stderr)
    body = rep.to_dict()
    body.pop("version")
    if args.csv:
        Path(args.csv).write_text(_to_csv(rep.cells))
    rows = [{k: v for k, v in c.items() if k != "per_trial"} for c in rep.cells]
    _emit(args, body, rows)


# -- parser ----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["json", "csv"], default="json")
    common.add_argument("--out", help="write output to this file instead of stdout")

    p = argparse.ArgumentParser(prog="lmcomplex", description=__doc__)
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a complex in face-list format")
    gsub = g.add_subparsers(dest="kind", required=True)
    gs = gsub.add_parser("sphere")
    gs.add_argument("--vertices", type=int, required=True)
    gs.add_argument("--seed", type=int)
    gs.add_argument("--flips-per-vertex", type=int, default=3)
    gs.add_argument("--out")
    gt = gsub.add_parser("torus")
    gt.add_argument("--m", type=int, required=True)
    gt.add_argument("--k", type=int, required=True)
    gt.add_argument("--out")
    gc = gsub.add_parser("catalog")
    gc.add_argument("name", choices=CATALOG_NAMES)
    gc.add_argument("--out")
    g.set_defaults(func=cmd_gen)

    s = sub.add_parser("inv", parents=[common], help="density and degree invariants")
    s.add_argument("file")
    s.set_defaults(func=cmd_inv)

    s = sub.add_parser("mutilde", parents=[common], help="minimum density over pure subcomplexes")
    s.add_argument("file")
    s.add_argument("--mode", choices=["branch_and_bound", "brute"], default="branch_and_bound")
    s.add_argument("--cap", type=int, default=20)
    s.set_defaults(func=cmd_mutilde)

    s = sub.add_parser("betti", parents=[common], help="Betti numbers")
    s.add_argument("file")
    s.add_argument("--field", choices=[linalg.RATIONALS, linalg.GF2], default=linalg.RATIONALS)
    s.set_defaults(func=cmd_betti)

    s = sub.add_parser("collapse", parents=[common], help="collapse free edges")
    s.add_argument("file")
    s.add_argument("--seed", type=int, help="random collapse order (default: lexicographic)")
    s.set_defaults(func=cmd_collapse)

    s = sub.add_parser("contains", parents=[common], help="search for a subcomplex")
    s.add_argument("pattern", help="face-list file or catalog name")
    s.add_argument("host")
    s.add_argument("--count", action="store_true")
    s.set_defaults(func=cmd_contains)

    s = sub.add_parser("config", parents=[common], help="low-degree configuration on a surface")
    s.add_argument("file")
    s.add_argument("--bound", type=int, default=17)
    s.set_defaults(func=cmd_config)

    s = sub.add_parser("quotients", parents=[common], help="regular quotients up to isomorphism")
    s.add_argument("file")
    s.add_argument("--max-merges", type=int, default=2)
    s.add_argument("--cap", type=int, default=30, help="refuse complexes with more faces")
    s.set_defaults(func=cmd_quotients)

    lst = sub.add_parser("list", help="forbidden lists")
    lsub = lst.add_subparsers(dest="action", required=True)
    lb = lsub.add_parser("build")
    lb.add_argument("--degree", type=int, required=True)
    lb.add_argument("--faces", type=int, required=True)
    lb.add_argument("--spheres", type=int, default=50)
    lb.add_argument("--max-vertices", type=int, default=20)
    lb.add_argument("--max-merges", type=int, default=2)
    lb.add_argument("--max-members", type=int)
    lb.add_argument("--seed", type=int)
    lb.add_argument("--out", required=True)
    lst.set_defaults(func=cmd_list)

    s = sub.add_parser("certify", parents=[common], help="asphericability certificate")
    s.add_argument("file")
    s.add_argument("--list", required=True, help="directory written by 'list build'")
    s.set_defaults(func=cmd_certify)

    ex = sub.add_parser("experiment", parents=[common], help="Monte Carlo experiments")
    ex.add_argument("kind", choices=["threshold", "betti", "collapse"])
    ex.add_argument("--n", type=int, nargs="+", required=True)
    ex.add_argument("--alpha", type=float, nargs="+")
    ex.add_argument("--c", type=float, default=1.0)
    ex.add_argument("--p", type=float)
    ex.add_argument("--delta", type=float, default=0.0)
    ex.add_argument("--epsilon", type=float, default=0.02)
    ex.add_argument("--trials", type=int, default=100)
    ex.add_argument("--seed", type=int)
    ex.add_argument("--pattern", default="tetrahedron")
    ex.add_argument("--csv", help="also write one CSV row per grid cell here")
    ex.add_argument("--timing", action="store_true", help="print wall time to stderr")
    ex.set_defaults(func=cmd_experiment)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except (ComplexError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
