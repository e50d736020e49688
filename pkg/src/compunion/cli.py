"""Command-line front end.

Exit codes: 0 success, 1 invariant or hard-assertion failure, 2 bad input.
"""
from __future__ import annotations

import argparse
import json
import sys
from typing import Any

import numpy as np

from . import __version__
from .errors import CompUnionError
from .experiments import (
    AUDIT_LIMIT,
    audit_grid,
    audit_ranked,
    balls_into_bins,
    derive_seed,
    run_grid_experiment,
    run_ranked_experiment,
)
from .grid import GridConstruction, GridParams, build_grid, grid_params_from_n
from .instance import (
    InstanceFile,
    MalformedInstance,
    from_grid,
    from_ranked,
    load,
    orders_of,
    ranked_edges,
    rebuild,
    to_dimacs,
    to_dot,
)
from .oracles import (
    BICLIQUE_LIMIT,
    CLIQUE_LIMIT,
    certify_biclique,
    certify_clique,
    certify_independent,
    max_balanced_biclique_exact,
    max_clique_exact,
    max_independent_exact,
)
from .poset import extract_homogeneous, homogeneous_bound, is_partial_order, union_graphs
from .ranked import RankedConstruction, RankedParams, build_ranked, degree_bound, max_degree, ranked_params_from_n

MAX_EXPORT_EDGES = 5_000_000


class UsageError(Exception):
    """Invalid parameters; maps to exit status 2."""


def _write(text: str, out: str | None):
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w") as fh:
            fh.write(text)


# gen


def cmd_gen(args) -> int:
    if args.kind == "grid":
        if args.n is not None:
            params = grid_params_from_n(args.n, seed=args.seed)
        else:
            if args.a is None or args.b is None:
                raise UsageError("grid needs --a and --b, or --n")
            params = GridParams(args.a, args.b, args.seed)
        if params.n > AUDIT_LIMIT:
            raise UsageError(f"grid instance with n={params.n} is too dense to serialize")
        gc = build_grid(params)
        inst = from_grid(gc, requested_n=args.n)
        maxdeg = int(gc.graph.degrees().max(initial=0))
    else:
        if args.n is not None:
            if args.epsilon is None or args.r is None:
                raise UsageError("ranked --n needs --epsilon and --r")
            params = ranked_params_from_n(args.n, args.epsilon, args.r, d=args.d,
                                          seed=args.seed, variant=args.variant)
        else:
            if args.r is None or args.b is None or args.a is None:
                raise UsageError("ranked needs --r, --b and --a, or --n/--epsilon/--r")
            params = RankedParams(r=args.r, b=args.b, a=args.a, d=args.d, seed=args.seed,
                                  variant=args.variant, epsilon=args.epsilon)
        rc = build_ranked(params)
        if rc.edge_count() > MAX_EXPORT_EDGES:
            raise UsageError(f"{rc.edge_count()} edges exceed the export cap")
        inst = from_ranked(rc, requested_n=args.n, explicit=rc.n <= AUDIT_LIMIT)
        maxdeg = max_degree(rc)
    _write(inst.dumps(deterministic=args.deterministic), args.out)
    summary = {"kind": inst.kind, "n": inst.n, "edges": len(inst.edges), "max_degree": maxdeg}
    target = sys.stderr if args.out in (None, "-") else sys.stdout
    print(json.dumps(summary, sort_keys=True), file=target)
    return 0


# verify


def verify_instance(inst: InstanceFile) -> list[tuple[str, bool, str]]:
    """Run every invariant suite applicable to the instance kind."""
    results: list[tuple[str, bool, str]] = []

    def add(name, ok, detail=""):
        results.append((name, bool(ok), detail))

    keys = [(u, v) for u, v, _ in inst.edges]
    add("edge_endpoints_ordered", all(u < v for u, v in keys))
    add("edges_sorted_unique", keys == sorted(set(keys)))
    add("labels_sorted_nonempty",
        all(ls and list(ls) == sorted(set(ls)) and all(1 <= s <= inst.r for s in ls)
            for _, _, ls in inst.edges))
    if not all(ok for _, ok, _ in results):
        return results

    built = rebuild(inst)
    if built is not None:
        add("vertex_count_matches", built.n == inst.n, f"{built.n} vs {inst.n}")
        if built.n != inst.n:
            return results
        if built.n > AUDIT_LIMIT:
            if not isinstance(built, RankedConstruction):
                add("size_within_audit_limit", False, f"n={built.n}")
                return results
            # too big for dense audits: compare with the structural edge list
            expected = ranked_edges(built)
            got = sorted(inst.edges)
            add("edge_labels_match_construction", expected == got,
                f"{len(expected)} expected edges, {len(got)} in file")
            add("edge_count_formula", len(expected) == built.edge_count())
            deg = np.bincount(np.array([e[:2] for e in expected], dtype=np.int64).ravel(),
                              minlength=built.n) if expected else np.zeros(1, dtype=np.int64)
            add("max_degree_formula", int(deg.max()) == max_degree(built))
            if built.params.d == 3:
                add("degree_lemma", max_degree(built) <= degree_bound(built))
            return results
        g = built.graph
        expected = {(u, v): tuple(sorted(ls)) for (u, v), ls in g.edges_labeled.items()}
        got = {(u, v): tuple(ls) for u, v, ls in inst.edges}
        diff = sorted(set(expected.items()) ^ set(got.items()))
        add("edge_labels_match_construction", not diff,
            f"first mismatch {diff[0]}" if diff else "")
        audits = audit_grid(built) if isinstance(built, GridConstruction) else audit_ranked(built)
        for name, ok in audits.items():
            add(name, ok)
        if isinstance(built, GridConstruction) and built.n <= CLIQUE_LIMIT:
            alpha = max_independent_exact(g).value
            add("alpha_equals_a", alpha == built.a, f"alpha={alpha}, a={built.a}")
        if isinstance(built, RankedConstruction) and built.params.d == 3:
            add("degree_lemma", max_degree(built) <= degree_bound(built))
    elif inst.orders is not None:
        if len(inst.orders) != inst.r:
            add("orders_count_matches_r", False, f"{len(inst.orders)} orders, r={inst.r}")
            return results
        try:
            closed = orders_of(inst)
        except CompUnionError as exc:
            add("orders_acyclic", False, str(exc))
            return results
        for s, o in enumerate(closed, 1):
            add(f"order{s}_partial_order", is_partial_order(o).ok)
        g = union_graphs(closed, inst.n)
        expected = {(u, v): tuple(sorted(ls)) for (u, v), ls in g.edges_labeled.items()}
        got = {(u, v): tuple(ls) for u, v, ls in inst.edges}
        add("edge_labels_match_orders", expected == got)
    return results


def cmd_verify(args) -> int:
    inst = load(args.file)
    results = verify_instance(inst)
    for name, ok, detail in results:
        line = f"{'PASS' if ok else 'FAIL'} {name}"
        if detail and not ok:
            line += f" ({detail})"
        print(line)
    return 0 if all(ok for _, ok, _ in results) else 1


# analyze


def cmd_analyze(args) -> int:
    inst = load(args.file)
    g = inst.graph()
    n = inst.n
    report: dict[str, Any] = {"kind": inst.kind, "n": n, "r": inst.r, "edges": len(inst.edges)}

    def node_budget(limit: int) -> int | None:
        if n <= limit:
            return None
        if args.budget is None:
            raise UsageError(f"n={n} exceeds oracle limit {limit}; pass --budget to override")
        return args.budget

    if args.omega:
        res = max_clique_exact(g, node_budget(CLIQUE_LIMIT))
        report["omega"] = {"value": res.value, "witness": list(res.witness), "exact": res.exact,
                           "explored": res.explored,
                           "certified": certify_clique(g, res.witness)}
    if args.alpha:
        res = max_independent_exact(g, node_budget(CLIQUE_LIMIT))
        report["alpha"] = {"value": res.value, "witness": list(res.witness), "exact": res.exact,
                           "explored": res.explored,
                           "certified": certify_independent(g, res.witness)}
    if args.biclique:
        budget = node_budget(BICLIQUE_LIMIT)
        res = max_balanced_biclique_exact(g, limit=max(n, BICLIQUE_LIMIT), node_budget=budget)
        report["biclique"] = {"value": res.value, "witness": [list(x) for x in res.witness],
                              "exact": res.exact, "explored": res.explored,
                              "certified": certify_biclique(g, *res.witness)}
    if args.homogeneous:
        orders = orders_of(inst)
        if not orders:
            raise UsageError("instance carries no orders to extract a homogeneous set from")
        hs = extract_homogeneous(orders)
        ug = union_graphs(orders)
        bound = homogeneous_bound(n, len(orders))
        report["homogeneous"] = {"kind": hs.kind, "size": len(hs), "vertices": list(hs.vertices),
                                 "bound": bound, "verified": hs.verify(ug)
                                 and len(hs) + 1e-9 >= bound}
    _write(json.dumps(report, sort_keys=True, indent=2) + "\n", args.out)
    return 0


# experiment


def _seed_list(master: int, count: int) -> list[int]:
    return [derive_seed(master, i) for i in range(count)]


def _as_list(x):
    return x if isinstance(x, list) else [x]


def run_experiment_spec(spec: dict) -> dict:
    """Run an experiment description; returns a JSON-ready summary."""
    kind = spec.get("kind")
    if "seed" not in spec:
        raise UsageError("experiment needs a master seed")
    master = int(spec["seed"])
    if kind == "balls":
        rep = balls_into_bins(int(spec["a"]), int(spec["b"]), int(spec.get("trials", 1)), master)
        return {"kind": kind, "passed": rep.passed, "reports": [rep.to_dict()]}
    seeds = _seed_list(master, int(spec.get("seeds", 1)))
    reports = []
    if kind == "grid":
        for a in _as_list(spec["a"]):
            for b in _as_list(spec["b"]):
                reports.append(run_grid_experiment(int(a), int(b), seeds))
    elif kind == "ranked":
        points = []
        for r in _as_list(spec["r"]):
            for b in _as_list(spec["b"]):
                for a in _as_list(spec["a"]):
                    points.append(RankedParams(
                        r=int(r), b=int(b), a=int(a), d=int(spec.get("d", 3)),
                        variant=spec.get("variant", "overlapping"), epsilon=spec.get("epsilon"),
                    ))
        reports.append(run_ranked_experiment(points, seeds))
    else:
        raise UsageError(f"unknown experiment kind {kind!r}")
    return {"kind": kind, "passed": all(r.passed for r in reports),
            "reports": [r.to_dict() for r in reports]}


def cmd_experiment(args) -> int:
    if args.spec:
        try:
            with open(args.spec) as fh:
                spec = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read experiment spec: {exc}") from exc
        if not isinstance(spec, dict):
            raise UsageError("experiment spec must be a JSON object")
    else:
        if args.kind is None:
            raise UsageError("give an experiment kind or --spec")
        spec = {"kind": args.kind, "seed": args.seed, "seeds": args.seeds, "trials": args.trials,
                "variant": args.variant, "d": args.d, "epsilon": args.epsilon}
        for key in ("a", "b", "r"):
            val = getattr(args, key)
            if val is not None:
                spec[key] = val if len(val) > 1 else val[0]
        if spec["seed"] is None:
            raise UsageError("--seed is required")
    try:
        result = run_experiment_spec(spec)
    except KeyError as exc:
        raise UsageError(f"experiment spec lacks {exc}") from exc
    _write(json.dumps(result, sort_keys=True, indent=2) + "\n", args.out)
    return 0 if result["passed"] else 1


# export


def cmd_export(args) -> int:
    inst = load(args.file)
    text = to_dimacs(inst, args.complement) if args.format == "dimacs" else to_dot(inst, args.complement)
    _write(text, args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="compunion", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a construction instance")
    g.add_argument("kind", choices=["grid", "ranked"])
    g.add_argument("--a", type=int)
    g.add_argument("--b", type=int)
    g.add_argument("--r", type=int)
    g.add_argument("--d", type=int, default=3)
    g.add_argument("--n", type=int, help="target vertex count (parameters derived from n)")
    g.add_argument("--epsilon", type=float)
    g.add_argument("--variant", choices=["overlapping", "disjoint"], default="overlapping")
    g.add_argument("--seed", type=int, required=True)
    g.add_argument("--out")
    g.add_argument("--deterministic", action="store_true", help="omit the creation timestamp")
    g.set_defaults(func=cmd_gen)

    v = sub.add_parser("verify", help="check every invariant of an instance file")
    v.add_argument("file")
    v.set_defaults(func=cmd_verify)

    an = sub.add_parser("analyze", help="run exact oracles on an instance file")
    an.add_argument("file")
    an.add_argument("--omega", action="store_true")
    an.add_argument("--alpha", action="store_true")
    an.add_argument("--biclique", action="store_true")
    an.add_argument("--homogeneous", action="store_true")
    an.add_argument("--budget", type=int, help="search-node budget for oversized instances")
    an.add_argument("--out")
    an.set_defaults(func=cmd_analyze)

    ex = sub.add_parser("experiment", help="seeded experiments")
    ex.add_argument("kind", nargs="?", choices=["grid", "ranked", "balls"])
    ex.add_argument("--spec", help="JSON experiment description")
    ex.add_argument("--a", type=int, nargs="+")
    ex.add_argument("--b", type=int, nargs="+")
    ex.add_argument("--r", type=int, nargs="+")
    ex.add_argument("--d", type=int, default=3)
    ex.add_argument("--epsilon", type=float)
    ex.add_argument("--variant", choices=["overlapping", "disjoint"], default="overlapping")
    ex.add_argument("--seeds", type=int, default=1, help="number of derived seeds")
    ex.add_argument("--trials", type=int, default=1)
    ex.add_argument("--seed", type=int, help="master seed")
    ex.add_argument("--out")
    ex.set_defaults(func=cmd_experiment)

    e = sub.add_parser("export", help="write DIMACS or DOT")
    e.add_argument("file")
    e.add_argument("--format", choices=["dimacs", "dot"], default="dimacs")
    e.add_argument("--complement", action="store_true")
    e.add_argument("--out")
    e.set_defaults(func=cmd_export)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, MalformedInstance, CompUnionError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
