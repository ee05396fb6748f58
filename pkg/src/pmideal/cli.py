"""Command-line front end: ``pmideal <command> ...``.

Exit codes: 0 success, 2 usage, 3 budget, 4 invariant violation,
5 verification failure.  Commands that write files also write
``run-manifest.json`` beside them with SHA-256 digests of every output.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from datetime import datetime, timezone
from pathlib import Path

from . import census, graphs, loci
from .errors import BudgetExceeded, InvariantViolation, NotPermissibleError

EXIT_OK, EXIT_USAGE, EXIT_BUDGET, EXIT_INVARIANT, EXIT_VERIFY = 0, 2, 3, 4, 5
MANIFEST = "run-manifest.json"


class UsageError(Exception):
    pass


def _now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


class Outputs:
    """Collects written files for the manifest."""

    def __init__(self, argv: list[str], args: argparse.Namespace):
        self.argv = argv
        self.config = {k: v for k, v in sorted(vars(args).items()) if k != "func"}
        self.started = _now()
        self.files: dict[Path, str] = {}

    def write(self, path: Path, text: str) -> None:
        path.parent.mkdir(parents=True, exist_ok=True)
        data = text.encode("utf-8")
        path.write_bytes(data)
        self.files[path] = hashlib.sha256(data).hexdigest()

    def finish(self) -> None:
        if not self.files:
            return
        dirs = {p.parent for p in self.files}
        base = min(dirs, key=lambda d: len(d.parts))
        manifest = {
            "argv": self.argv,
            "config": self.config,
            "started": self.started,
            "finished": _now(),
            "outputs": {str(p.relative_to(base)) if p.is_relative_to(base) else str(p): h
                        for p, h in sorted(self.files.items())},
        }
        (base / MANIFEST).write_text(canonical_json(manifest), encoding="utf-8")


def _graph_arg(args) -> graphs.SimpleGraph:
    try:
        return graphs.parse_edges(args.n, args.edges or "")
    except ValueError as e:
        raise UsageError(f"bad edge list: {e}") from None


# ---------------------------------------------------------------------------
# graphs


def cmd_graphs(args, out: Outputs) -> int:
    sub = args.graphs_cmd
    if sub == "enumerate":
        gs = list(graphs.enumerate_permissible(args.n))
        _write_graphs(out, Path(args.out), gs, {"n": args.n, "command": "enumerate"})
        print(f"{len(gs)} permissible graphs on {args.n} vertices -> {args.out}")
        return EXIT_OK
    g = _graph_arg(args)
    if sub == "check":
        w = graphs.permissibility_witness(g)
        print(f"permissible: {'true' if w is None else 'false'}")
        if w is not None and w[0] == "complete":
            print("witness: complete graph")
        elif w is not None:
            u, v, x = w[1]
            print(f"witness: induced path {u}-{v}-{x}")
        return EXIT_OK
    if sub == "codim":
        try:
            b = graphs.codim_breakdown(g)
        except NotPermissibleError as e:
            raise UsageError(str(e)) from None
        print(f"codim {b['codim']}")
        print(f"kind={b['kind']} m={b['m']} c={b['c']} l={b['l']} orders={b['orders']}")
        return EXIT_OK
    if sub == "complement":
        print(graphs.complement(g))
        return EXIT_OK
    if sub == "supergraphs":
        try:
            gs = sorted(graphs.minimal_permissible_supergraphs(g, args.n),
                        key=lambda h: h.edge_mask())
        except NotPermissibleError as e:
            raise UsageError(str(e)) from None
        _write_graphs(out, Path(args.out), gs,
                      {"n": args.n, "command": "supergraphs", "edges": str(g)})
        print(f"{len(gs)} minimal permissible supergraphs -> {args.out}")
        return EXIT_OK
    raise UsageError(f"unknown graphs subcommand {sub!r}")


def _write_graphs(out: Outputs, folder: Path, gs, header: dict) -> None:
    index = []
    for k, g in enumerate(gs):
        name = f"graph_{k:04d}.dot"
        out.write(folder / name, graphs.to_dot(g, f"G{k}"))
        index.append({"file": name, "edges": graphs.format_edge_list(g),
                      "codim": graphs.codim(g)})
    out.write(folder / "index.json", canonical_json({**header, "graphs": index}))


# ---------------------------------------------------------------------------
# pairs and dim Y


def cmd_pairs(args, out: Outputs) -> int:
    pairs = sorted(graphs.minimal_cover_pairs(args.n),
                   key=lambda p: (p.clique_order, sorted(p.clique)))
    if args.types:
        seen: dict[tuple, graphs.PermissiblePair] = {}
        for p in pairs:
            seen.setdefault(graphs.canonical_form(p.s_graph), p)
        pairs = list(seen.values())
    per_a: dict[str, int] = {}
    entries = []
    folder = Path(args.out) if args.out else None
    for k, p in enumerate(pairs):
        # reconstructing runs every pair invariant again before anything is written
        p = graphs.PermissiblePair(p.s_graph, p.t_graph, p.clique_order)
        per_a[str(p.clique_order)] = per_a.get(str(p.clique_order), 0) + 1
        name = f"pair_{k:04d}.dot"
        entries.append({"file": name, "a": p.clique_order, "clique": sorted(p.clique),
                        "s_codim": graphs.codim(p.s_graph), "t_codim": graphs.codim(p.t_graph)})
        if folder:
            out.write(folder / name, graphs.to_dot(p.s_graph, f"S{k}") + graphs.to_dot(p.t_graph, f"T{k}"))
    mode = "types" if args.types else "labeled"
    summary = {"n": args.n, "mode": mode, "total": len(pairs), "per_a": per_a, "pairs": entries}
    if folder:
        out.write(folder / "pairs.json", canonical_json(summary))
    print(f"{len(pairs)} {mode} pairs on {args.n} vertices; per a: "
          + ", ".join(f"a={a}: {c}" for a, c in per_a.items()))
    return EXIT_OK


def cmd_dimy(args, out: Outputs) -> int:
    n = args.n
    try:
        value, pair = graphs.dim_Y_breakdown(n)
    except InvariantViolation as e:
        print(f"disagreement: {e}", file=sys.stderr)
        return EXIT_INVARIANT
    print(value)
    print(f"formula n^2-n-4 = {n * n - n - 4}")
    print(f"maximiser: clique {sorted(pair.clique)} (a={pair.clique_order}), "
          f"codims {graphs.codim(pair.s_graph)} + {graphs.codim(pair.t_graph)}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# census


def cmd_census(args, out: Outputs) -> int:
    try:
        spec = census.StratumSpec.parse(args.n, args.r, args.t, args.q)
    except ValueError as e:
        raise UsageError(str(e)) from None
    records: list[census.CensusRecord] = []
    verdict = None
    if args.method == "graph":
        if spec.n < 3:
            raise UsageError("graph strata need n >= 3")
        g = _graph_arg(args)
        records.append(census.count_graph_stratum(spec.n, g, spec.q))
    else:
        if args.method in ("matrix", "both"):
            records.append(census.count_Y_bruteforce(spec, jobs=args.jobs))
        if args.method in ("grassmann", "both"):
            if spec.r != spec.t:
                raise UsageError("the Grassmannian-pair count needs r == t")
            records.append(census.count_H_pairs(spec.n, spec.t, spec.q))
        if args.method == "both":
            fibre = census.gl_order(spec.t, spec.q)
            verdict = records[0].count == records[1].count * fibre
    if not args.timing:
        records = [r.without_timing() for r in records]
    for r in records:
        print(f"{r.method}: {r.count}")
    if verdict is not None:
        print(f"bundle identity: {'OK' if verdict else 'FAILED'}")
    if args.out:
        path = Path(args.out)
        if path.suffix == ".csv":
            text = census.records_to_csv(records)
        else:
            text = canonical_json([r.as_dict() for r in records])
        out.write(path, text)
    if verdict is False:
        return EXIT_VERIFY
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify


def _run_verify(args) -> list[loci.Verdict]:
    s = args.suite
    if s == "overlap":
        return [loci.verify_overlap_rule(k, args.q or 3) for k in range(3, (args.s or 4) + 1)]
    if s == "case3":
        return [loci.verify_case3(args.q or 3, seed=args.seed)]
    if s == "m2":
        return [loci.verify_m2_overlapping2(args.q or 3)]
    if s == "jacobi":
        return [loci.verify_jacobi(args.samples or 10_000, args.q or 101, args.n or 6, args.seed)]
    if s == "n5-example":
        return [loci.verify_n5_example(args.q or 7, args.samples or 1000, args.seed)]
    if s == "graph-permissible":
        return [loci.verify_graph_permissible(args.n or 5, args.q or 2)]
    if s == "var-decomp":
        return [loci.verify_var_decomp(args.n or 5, args.q or 2, args.max_edges)]
    raise UsageError(f"unknown suite {s!r}")


def cmd_verify(args, out: Outputs) -> int:
    verdicts = _run_verify(args)
    for v in verdicts:
        print(v.summary())
    return EXIT_OK if all(verdicts) else EXIT_VERIFY


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="pmideal",
                                description="Principal-minor loci: graphs, pairs and point counts.")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("graphs", help="permissible graph tools")
    g.add_argument("graphs_cmd", choices=["check", "enumerate", "codim", "supergraphs", "complement"])
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--edges", default="", help='edge list such as "1-2,2-3"')
    g.add_argument("--out", default="graphs-out", help="output folder for DOT files")
    g.set_defaults(func=cmd_graphs)

    pr = sub.add_parser("pairs", help="minimal cover pairs")
    pr.add_argument("--n", type=int, required=True)
    mode = pr.add_mutually_exclusive_group()
    mode.add_argument("--labeled", action="store_true", default=True)
    mode.add_argument("--types", action="store_true")
    pr.add_argument("--out", default=None)
    pr.set_defaults(func=cmd_pairs)

    d = sub.add_parser("dimy", help="dimension of the rank n-2 locus")
    d.add_argument("--n", type=int, required=True)
    d.set_defaults(func=cmd_dimy)

    c = sub.add_parser("census", help="exact point counts")
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--r", default="any")
    c.add_argument("--t", type=int, required=True)
    c.add_argument("--q", type=int, required=True)
    c.add_argument("--method", choices=["matrix", "grassmann", "both", "graph"], default="matrix")
    c.add_argument("--edges", default="", help="graph for --method graph")
    c.add_argument("--jobs", type=int, default=1)
    c.add_argument("--out", default=None, help="write records to FILE (.json or .csv)")
    c.add_argument("--timing", action="store_true", help="keep elapsed_ms in written records")
    c.set_defaults(func=cmd_census)

    v = sub.add_parser("verify", help="exhaustive and sampled checks")
    v.add_argument("suite", choices=["overlap", "case3", "m2", "jacobi", "n5-example",
                                     "graph-permissible", "var-decomp"])
    v.add_argument("--q", type=int, default=None)
    v.add_argument("--n", type=int, default=None)
    v.add_argument("--s", type=int, default=None, help="largest column count for overlap")
    v.add_argument("--samples", type=int, default=None)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--max-edges", type=int, default=3)
    v.set_defaults(func=cmd_verify)
    return p


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    out = Outputs(argv, args)
    try:
        code = args.func(args, out)
    except (UsageError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetExceeded as e:
        print(f"budget: {e}", file=sys.stderr)
        return EXIT_BUDGET
    except InvariantViolation as e:
        print(f"invariant violated: {e}", file=sys.stderr)
        return EXIT_INVARIANT
    out.finish()
    return code


if __name__ == "__main__":
    sys.exit(main())
