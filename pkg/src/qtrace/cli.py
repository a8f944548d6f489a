"""Command line entry point: analyze, verify and normal_form.

Exit codes: 0 on success, 1 when a verified identity fails, 2 for bad input
or a library error raised before any check could run.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import warnings
from concurrent.futures import ProcessPoolExecutor
from math import isqrt
from pathlib import Path

from . import cohomology, reduced, torus, trace
from .errors import DimensionCapExceeded, NotTriangulable, QtraceError
from .lattice import ambient_index, antisym_normal_form, matmul, transpose
from .ntriang import n_triangulation
from .surface import attach_triangles, classify, load_surface, parse_surface
from .unity import derive_params

SCHEMA = 1
DEFAULT_SEED = 0
DEFAULT_MAX_DIM = 2000


def max_dim() -> int:
    return int(os.environ.get("QTRACE_MAX_DIM", DEFAULT_MAX_DIM))


def _check_dim(tri, n: int) -> int:
    dim = len(n_triangulation(attach_triangles(tri).tri, n).vertices)
    if dim > max_dim():
        raise DimensionCapExceeded(f"{dim} small vertices exceed QTRACE_MAX_DIM={max_dim()}")
    return dim


def _nf_report(P, pattern) -> dict:
    nf = antisym_normal_form(P)
    return {"invariants": list(nf.invariants), "zero_count": nf.zero_count,
            "pattern": pattern(nf.invariants, nf.zero_count)}


def _checks_json(checks) -> list[dict]:
    return [c.to_json() for c in checks]


def analyze(source: str, n: int, order: int, use_reduced: bool = False,
            seed: int = DEFAULT_SEED) -> dict:
    spec = load_surface(source)
    tri = parse_surface(spec)
    inv = classify(tri)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        params = derive_params(n, order)
    report = {"schema": SCHEMA, "surface": spec.name, "n": n, "order": order,
              "reduced": use_reduced, "seed": seed, "invariants": inv.to_json(),
              "params": params.to_json(), "warnings": [str(w.message) for w in caught],
              "skipped": []}
    report["dimension"] = _check_dim(tri, n)
    if not inv.no_interior_punctures:
        report["skipped"].append("trace: surface has interior punctures")
        return report
    if use_reduced:
        _analyze_reduced(tri, n, params, report)
    else:
        _analyze_plain(tri, n, params, report)
    checks = report.get("checks", [])
    report["ok"] = all(c["ok"] for c in checks) and all(
        report.get(k, True) for k in ("center_equal", "rank_match"))
    return report


def _theorem_part(report, params, P, center, formula):
    if not params.odd_order:
        report["skipped"].append("center and rank: order is even")
        return
    rank = ambient_index(center)
    report["center_basis"] = center.to_json()
    report["rank"] = rank
    report["rank_formula"] = formula
    report["rank_match"] = rank == formula
    report["pi_degree"] = isqrt(rank) if isqrt(rank) ** 2 == rank else None
    if report["pi_degree"] is not None:
        report["pi_degree_invariants"] = torus.pi_degree_from_invariants(
            report["normal_form"]["invariants"], params.m2)


def _analyze_plain(tri, n, params, report):
    ext = attach_triangles(tri)
    checks = trace.identity_checks(ext, n) + trace.verify_blocks(ext, n).checks
    report["checks"] = _checks_json(checks)
    P = trace.p_lambda(ext, n)
    report["matrix_dims"] = {"V": len(P.rows), "Vbar_ext": len(trace.kbar_matrix(ext, n).rows)}
    report["normal_form"] = _nf_report(P.data.tolist(),
                                       lambda h, z: torus.nonreduced_pattern(tri, n, h, z))
    if params.odd_order:
        res = torus.center_theorem_check(tri, n, params)
        report["center_equal"] = res["equal"]
        report["boundary_central"] = res["boundary_central"]
        _theorem_part(report, params, P, res["center"], res["rank_formula"])
    else:
        _theorem_part(report, params, P, None, None)


def _analyze_reduced(tri, n, params, report):
    mu = reduced.mu_triangulation(tri)
    report["mu"] = mu.note
    _, rep = reduced.reduced_blocks(mu, n)
    report["checks"] = _checks_json(rep.checks)
    P = trace.p_bar(mu.tri, n)
    report["matrix_dims"] = {"Vbar": len(P.rows)}
    report["normal_form"] = _nf_report(P.data.tolist(),
                                       lambda h, z: reduced.reduced_pattern(mu.tri, n, h, z))
    if params.odd_order:
        res = reduced.reduced_center_report(mu, n, params)
        report["center_equal"] = res["equal"]
        report["boundary_central"] = res["boundary_in_center"]
        _theorem_part(report, params, P, res["center"],
                      reduced.reduced_rank_formula(mu.tri, params))
    else:
        _theorem_part(report, params, P, None, None)


# ---------------------------------------------------------------- verify

def _verify_one(source: str, n: int, order: int, seed: int) -> list[dict]:
    """Every applicable invariant for one (n, m″); returns failure records."""
    tri = parse_surface(load_surface(source))
    inv = classify(tri)
    params = derive_params(n, order, warn=False)
    out = []

    def record(name, ok, detail=None):
        out.append({"n": n, "order": order, "check": name, "ok": bool(ok),
                    "detail": detail})

    for d in (1, 2, 3, 5):
        record(f"cocycles d={d}", cohomology.cocycle_count(tri, d) == d ** inv.r)
    record("delta1 delta0 = 0", cohomology.cochain_complex(tri).is_complex())
    if not inv.no_interior_punctures:
        record("trace", True, "skipped: surface has interior punctures")
        return out
    _check_dim(tri, n)
    ext = attach_triangles(tri)
    for c in trace.identity_checks(ext, n) + trace.verify_blocks(ext, n).checks:
        record(c.lemma, c.ok, None if c.ok else str(c.where))
    P = trace.p_lambda(ext, n).data.tolist()
    nf = antisym_normal_form(P)
    record("normal form", nf is not None)
    record("commutation", torus.commutation_check(P, order, samples=200, seed=seed)["ok"])
    for red in (False, True):
        r = cohomology.exact_sequence_check(tri, n, order, reduced=red)
        record(f"exact sequence{' (reduced)' if red else ''}", r["equal"], r)
    if not params.odd_order:
        record("theorems", True, "skipped: order is even")
        return out
    res = torus.center_theorem_check(tri, n, params)
    record("center theorem", res["equal"])
    record("rank formula", res["rank_match"], [res["rank"], res["rank_formula"]])
    pat = torus.nonreduced_pattern(tri, n, nf.invariants, nf.zero_count)
    record("odd-part pattern", pat["ok"], pat)
    try:
        mu = reduced.mu_triangulation(tri)
    except NotTriangulable as e:
        record("reduced", True, f"skipped: {e}")
        return out
    _, rep = reduced.reduced_blocks(mu, n)
    for c in rep.checks:
        record(f"reduced {c.lemma}", c.ok, None if c.ok else str(c.where))
    record("reduced center theorem", reduced.reduced_center_check(mu, n, params))
    rk = reduced.reduced_rank(mu, n, params, strict=False)
    record("reduced rank formula", rk == reduced.reduced_rank_formula(mu.tri, params), rk)
    return out


def parse_grid(text: str) -> tuple[list[int], list[int]]:
    """'n=2,3;order=3,5,9' -> ([2, 3], [3, 5, 9])."""
    vals = {}
    for part in text.split(";"):
        if not part.strip():
            continue
        key, _, rhs = part.partition("=")
        vals[key.strip()] = [int(x) for x in rhs.split(",") if x.strip()]
    if set(vals) - {"n", "order"} or not vals.get("n") or not vals.get("order"):
        raise ValueError(f"bad grid {text!r}")
    return vals["n"], vals["order"]


def verify(source: str, ns, orders, seed: int = DEFAULT_SEED, jobs: int = 1) -> dict:
    tasks = [(source, n, o, seed) for n in ns for o in orders]
    if jobs > 1:
        with ProcessPoolExecutor(jobs) as pool:
            results = list(pool.map(_verify_one, *zip(*tasks)))
    else:
        results = [_verify_one(*t) for t in tasks]
    records = [r for res in results for r in res]
    failures = [r for r in records if not r["ok"]]
    return {"schema": SCHEMA, "surface": source, "seed": seed, "checks": len(records),
            "failures": failures, "ok": not failures}


# ---------------------------------------------------------------- normal form

def normal_form(P) -> dict:
    nf = antisym_normal_form(P)
    X = [list(r) for r in nf.X]
    ok = matmul(matmul(transpose(X), P), X) == nf.block_matrix()
    return {"schema": SCHEMA, "X": X, "invariants": list(nf.invariants),
            "zero_count": nf.zero_count, "blocks": nf.block_matrix(), "verified": ok}


def _load_matrix(path: str):
    data = json.loads(Path(path).read_text())
    return data["data"] if isinstance(data, dict) else data


# ---------------------------------------------------------------- main

def _emit(report: dict, path: str | None) -> None:
    text = json.dumps(report, indent=2, sort_keys=True, default=str)
    if path:
        Path(path).write_text(text + "\n")


def _summary(rep: dict) -> str:
    lines = [f"surface {rep['surface']}  n={rep['n']}  m''={rep['order']}"
             f"{'  reduced' if rep['reduced'] else ''}"]
    inv = rep["invariants"]
    lines.append(f"r={inv['r']} b={inv['b']} t={inv['t']} r_i={inv['r_i']}")
    if "checks" in rep:
        bad = [c["lemma"] for c in rep["checks"] if not c["ok"]]
        lines.append(f"checks: {len(rep['checks']) - len(bad)}/{len(rep['checks'])} pass"
                     + (f"; failing: {', '.join(bad)}" if bad else ""))
    if "rank" in rep:
        lines.append(f"rank {rep['rank']} (formula {rep['rank_formula']}), "
                     f"PI-degree {rep['pi_degree']}, center equality {rep['center_equal']}")
    for s in rep["skipped"]:
        lines.append(f"skipped: {s}")
    for w in rep["warnings"]:
        lines.append(f"warning: {w}")
    return "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qtrace", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="cmd", required=True)

    a = sub.add_parser("analyze", help="run the full pipeline on one surface")
    a.add_argument("--surface", required=True, help="builtin name or JSON file")
    a.add_argument("--n", type=int, required=True)
    a.add_argument("--order", type=int, required=True, help="m'', the order of q^2")
    a.add_argument("--reduced", action="store_true")
    a.add_argument("--json", metavar="PATH")
    a.add_argument("--seed", type=int, default=DEFAULT_SEED)

    v = sub.add_parser("verify", help="run the invariant suite")
    v.add_argument("--surface", required=True)
    v.add_argument("--n", type=int, nargs="+", default=None)
    v.add_argument("--orders", type=int, nargs="+", default=[3, 5])
    v.add_argument("--grid", help='e.g. "n=2,3;order=3,5,9,15"')
    v.add_argument("--json", metavar="PATH")
    v.add_argument("--seed", type=int, default=DEFAULT_SEED)
    v.add_argument("--jobs", type=int, default=1)

    f = sub.add_parser("normal_form", help="anti-symmetric normal form of a matrix")
    src = f.add_mutually_exclusive_group(required=True)
    src.add_argument("--matrix", help="JSON file with a square anti-symmetric matrix")
    src.add_argument("--surface", help="use P for this surface")
    f.add_argument("--n", type=int, default=2)
    f.add_argument("--reduced", action="store_true")
    f.add_argument("--json", metavar="PATH")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.cmd == "analyze":
            rep = analyze(args.surface, args.n, args.order, args.reduced, args.seed)
            _emit(rep, args.json)
            print(_summary(rep))
            return 0 if rep.get("ok", True) else 1
        if args.cmd == "verify":
            if args.grid:
                ns, orders = parse_grid(args.grid)
            else:
                ns, orders = args.n or [2], args.orders
            rep = verify(args.surface, ns, orders, args.seed, args.jobs)
            _emit(rep, args.json)
            print(json.dumps({"ok": rep["ok"], "checks": rep["checks"],
                              "failures": rep["failures"]}, default=str))
            return 0 if rep["ok"] else 1
        if args.matrix:
            P = _load_matrix(args.matrix)
        else:
            tri = parse_surface(load_surface(args.surface))
            P = (trace.p_bar(reduced.mu_triangulation(tri).tri, args.n) if args.reduced
                 else trace.p_lambda(attach_triangles(tri), args.n)).data.tolist()
        rep = normal_form(P)
        _emit(rep, args.json)
        print(f"invariants {rep['invariants']}  zeros {rep['zero_count']}  "
              f"verified {rep['verified']}")
        return 0 if rep["verified"] else 1
    except (QtraceError, ValueError, OSError, json.JSONDecodeError) as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
