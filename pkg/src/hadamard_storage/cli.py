"""
Command-line front end.

Exit status is 0 on success, 1 on a domain error (intolerable failures,
insufficient access, bad chunk files, I/O) and 2 on a usage error. Reports go
to stdout; diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import hadamard, lattice
from .cluster import ClusterState, cluster_init, fail_node, run_reconstruct, run_repair
from .code import NodeId, make_code, repair_matrix
from .exceptions import HadamardStorageError, IntolerableError, UnsupportedKError
from .repair import interference_rank_report

log = logging.getLogger("hadamard_storage")

EXHAUSTIVE_MAX_K = 8


def _node(spec: str) -> NodeId:
    try:
        return NodeId.parse(spec)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _node_list(spec: str) -> list[NodeId]:
    return [_node(s) for s in spec.split(",") if s.strip()]


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _delta(text: str) -> int:
    value = int(text)
    if value < 2:
        raise argparse.ArgumentTypeError(f"delta must be at least 2, got {text}")
    return value


def cmd_encode(args) -> int:
    try:
        state = cluster_init(args.k, Path(args.input).read_bytes(), args.outdir)
    except UnsupportedKError:
        print(f"error: unsupported k={args.k}", file=sys.stderr)
        return 1
    print(f"k={state.k} stripes={state.stripes} byte_length={state.byte_length}")
    for node in state.params.nodes():
        e = state.roster[node]
        print(f"{node} {e.filename} {e.status}")
    return 0


def cmd_fail(args) -> int:
    state = ClusterState.load(args.dir)
    fail_node(state, args.node)
    print(f"failed {args.node}")
    return 0


def cmd_repair(args) -> int:
    state = ClusterState.load(args.dir)
    try:
        state, transcript = run_repair(state, args.node)
    except IntolerableError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if args.report:
        for line in transcript.report_lines():
            print(line)
    else:
        print(f"repaired {args.node}")
    return 0


def cmd_reconstruct(args) -> int:
    state = ClusterState.load(args.dir)
    result = run_reconstruct(state, args.exclude, args.output)
    print(f"downloaded={result.downloaded_per_stripe}")
    print(f"stripes={state.stripes}")
    print(f"total={result.total_downloaded}")
    print(f"bytes={result.byte_count}")
    return 0


def _check(label: str, ok: bool) -> bool:
    print(f"{label}: {'PASS' if ok else 'FAIL'}")
    return ok


def _verify_ranks(k: int) -> bool:
    params = make_code(k)
    ok = True
    for i in range(1, k + 1):
        try:
            rows = interference_rank_report(params, i)
        except HadamardStorageError as exc:
            print(f"i={i}: {exc}")
            ok = False
            continue
        for j, rank in rows:
            expected = params.N if i == j else params.N // 2
            print(f"i={i} j={j} rank={rank} predicted={lattice.predict_rank(i, j, k)}")
            ok &= rank == expected
    return _check("rank([V_i | X_j V_i]) = N if i == j else N/2", ok)


def _verify_gram(k: int) -> bool:
    h = hadamard.sylvester(k)
    cols = {c.tobytes() for c in h.columns()}
    products = {hadamard.hadamard_column(x).tobytes() for x in hadamard.exponent_tuples(k)}
    all_cols = h.columns()
    distances_ok = all(
        hadamard.column_distance(all_cols[a], all_cols[b]) == h.order // 2
        for a in range(h.order) for b in range(a + 1, h.order)
    )
    ok = _check("HᵀH = N·I", hadamard.verify_gram(h))
    ok &= _check("columns = {prod X_i^x_i w}", cols == products and len(cols) == h.order)
    ok &= _check("distinct columns differ in N/2 positions", distances_ok)
    return ok


def _verify_lattice(k: int) -> bool:
    ok = True
    for i in range(1, k + 1):
        v = lattice.repair_lattice(i, k, 2)
        for j in range(1, k + 1):
            if j != i:
                ok &= lattice.shift(v, j, wrap=True) == v
    ok = _check("wrap-around closure for all (i, j), j != i", ok)
    params = make_code(k)
    tuples_ok = all(
        {lattice.lattice_point(t) for t in repair_matrix(params, i).tuples} == lattice.repair_lattice(i, k, 2).points
        for i in range(1, k + 1)
    )
    return _check("repair-matrix tuples map onto L(V_i)", tuples_ok) and ok


def cmd_verify(args) -> int:
    if not 1 <= args.k <= EXHAUSTIVE_MAX_K:
        print(f"error: verify needs 1 <= k <= {EXHAUSTIVE_MAX_K}", file=sys.stderr)
        return 2
    selected = [name for name in ("ranks", "lattice", "gram") if getattr(args, name)]
    if not selected:
        selected = ["ranks", "lattice", "gram"]
    checks = {"ranks": _verify_ranks, "lattice": _verify_lattice, "gram": _verify_gram}
    results = [checks[name](args.k) for name in selected]
    return 0 if all(results) else 1


def cmd_analyze(args) -> int:
    if args.k < 2:
        print("error: analyze needs k >= 2", file=sys.stderr)
        return 2
    print("k,delta,i,j,union_size,ratio")
    for k, delta, i, j, size, ratio in lattice.analyze(args.k, args.delta):
        print(f"{k},{delta},{i},{j},{size},{float(ratio)!r}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hadamard-storage", description=__doc__.strip().splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging on stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("encode", help="encode a file into a new cluster directory")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--input", required=True)
    p.add_argument("--outdir", required=True)
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("fail", help="mark a node as failed")
    p.add_argument("--dir", required=True)
    p.add_argument("--node", type=_node, required=True, help="s<i>, pa or pb")
    p.set_defaults(func=cmd_fail)

    p = sub.add_parser("repair", help="repair a failed node")
    p.add_argument("--dir", required=True)
    p.add_argument("--node", type=_node, required=True, help="s<i>, pa or pb")
    p.add_argument("--report", action="store_true", help="print the download transcript")
    p.set_defaults(func=cmd_repair)

    p = sub.add_parser("reconstruct", help="decode the stored file")
    p.add_argument("--dir", required=True)
    p.add_argument("--exclude", type=_node_list, default=[], help="comma-separated nodes to avoid")
    p.add_argument("--output", required=True)
    p.set_defaults(func=cmd_reconstruct)

    p = sub.add_parser("verify", help="check the structural properties of the code")
    p.add_argument("--k", type=_positive_int, required=True)
    p.add_argument("--ranks", action="store_true")
    p.add_argument("--lattice", action="store_true")
    p.add_argument("--gram", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("analyze", help="CSV of unwrapped lattice alignment ratios")
    p.add_argument("--k", type=_positive_int, required=True)
    p.add_argument("--delta", type=_delta, required=True)
    p.set_defaults(func=cmd_analyze)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, stream=sys.stderr)
    try:
        return args.func(args)
    except (HadamardStorageError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
