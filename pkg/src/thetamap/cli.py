"""Command-line harness: graph exports and the verification batteries.

Commands
  graph             build the graph over GF(2^t), export DOT or JSON
  verify-structure  the six structural checks, one t or a range
  verify-orders     order/trace classification battery, one n or a range
  verify-dickson    Dickson / Kloosterman / curve battery, one n or a range
  sweep             verify-dickson over a range, one CSV row per field

Exit status: 0 when every check passes, 1 when at least one verification
fails (the report is still written), 2 on usage or configuration errors.

Identical arguments and seed produce byte-identical output regardless of
the worker count: jobs are distributed per field size and reassembled in
submission order.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from thetamap.dickson_curve import dickson_report
from thetamap.gf2_arith import FieldError, field_to_record, make_field, max_t_cap
from thetamap.order_dynamics import MAX_TOWER_N, make_tower, orders_report
from thetamap.theta_graph import build_graph, to_dot, to_json, verify_structure

MAX_DICKSON_N = 12

__all__ = ["RunConfig", "run", "main"]


@dataclass
class RunConfig:
    command: str
    values: list[int]          # field degrees to process, ascending
    format: str
    out: str | None
    workers: int = 1
    seed: int = 0


def _parse_values(text: str) -> list[int]:
    """An int or an inclusive range `A..B`."""
    lo, sep, hi = text.partition("..")
    try:
        if not sep:
            return [int(text)]
        values = list(range(int(lo), int(hi) + 1))
    except ValueError as exc:
        raise ValueError(f"{text!r} is not an integer or a range A..B") from exc
    if not values:
        raise ValueError(f"empty range {text!r}")
    return values


def _values(args, flag: str) -> list[int]:
    single = getattr(args, flag)
    if (single is None) == (args.range is None):
        raise ValueError(f"give exactly one of --{flag} or --range")
    return _parse_values(single if single is not None else args.range)


def _bounds(command: str) -> tuple[int, str]:
    if command == "verify-structure" or command == "graph":
        return max_t_cap(), "t"
    if command == "verify-orders":
        return MAX_TOWER_N, "n"
    return MAX_DICKSON_N, "n"


def build_config(args) -> RunConfig:
    cap, flag = _bounds(args.command)
    values = [args.t] if args.command == "graph" else _values(args, flag)
    for v in values:
        if not 1 <= v <= cap:
            raise ValueError(f"{flag}={v} outside [1, {cap}]")
    fmt = args.format or {"graph": "dot", "sweep": "csv"}.get(args.command, "text")
    allowed = {
        "graph": ("dot", "json"),
        "verify-structure": ("text", "json"),
        "verify-orders": ("text", "json"),
        "verify-dickson": ("text", "json"),
        "sweep": ("csv", "json"),
    }[args.command]
    if fmt not in allowed:
        raise ValueError(f"format {fmt!r} not supported by {args.command}")
    return RunConfig(args.command, values, fmt, args.out,
                     getattr(args, "workers", 1), getattr(args, "seed", 0))


# -- jobs run in worker processes: plain ints in, plain dicts out ------------

def _structure_job(t: int) -> dict:
    field = make_field(t)
    g = build_graph(field)
    rep = verify_structure(g)
    return {
        "t": t,
        "field": field_to_record(field),
        "vertices": len(g.succ),
        "components": len(g.components),
        "passed": rep.passed,
        "checks": [{"name": c.name, "pass": c.passed, "detail": c.detail}
                   for c in rep.checks],
    }


def _orders_job(n: int) -> dict:
    return orders_report(make_tower(n))


def _dickson_job(args: tuple[int, int]) -> dict:
    n, seed = args
    return dickson_report(make_field(n), seed=seed)


def _map_jobs(fn, inputs, workers: int) -> list[dict]:
    if workers <= 1 or len(inputs) <= 1:
        return [fn(x) for x in inputs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, inputs))


# -- assembly -----------------------------------------------------------------

def _checks_passed(doc: dict) -> bool:
    return all(c["pass"] for c in doc.get("checks", []))


def _text_lines(docs: list[dict], scope_key: str) -> tuple[list[str], bool]:
    lines = []
    ok = True
    for doc in docs:
        scope = f"{scope_key}={doc[scope_key]}"
        for c in doc["checks"]:
            mark = "PASS" if c["pass"] else "FAIL"
            ok = ok and c["pass"]
            detail = f"  {c['detail']}" if c["detail"] else ""
            lines.append(f"{mark} [{scope}] {c['name']}{detail}")
    lines.append(f"result: {'all checks passed' if ok else 'FAILURES present'}")
    return lines, ok


def run(config: RunConfig) -> int:
    """Execute one command; returns the process exit code."""
    if config.command == "graph":
        g = build_graph(make_field(config.values[0]))
        text = to_dot(g) if config.format == "dot" else to_json(g)
        return _emit(text, config.out, 0)

    if config.command == "verify-structure":
        docs = _map_jobs(_structure_job, config.values, config.workers)
        scope = "t"
    elif config.command == "verify-orders":
        docs = _map_jobs(_orders_job, config.values, config.workers)
        scope = "n"
    else:                                  # verify-dickson and sweep
        docs = _map_jobs(_dickson_job,
                         [(n, config.seed) for n in config.values],
                         config.workers)
        scope = "n"

    ok = all(_checks_passed(d) for d in docs)
    if config.format == "json":
        text = json.dumps(docs if len(docs) > 1 else docs[0], indent=2) + "\n"
    elif config.format == "csv":
        cols = ["n", "q", "m", "K", "N_pred", "S_size", "T_size",
                "E_count", "passed"]
        rows = [",".join(cols)]
        for d in docs:
            rows.append(",".join(str(d[c]).lower() if c == "passed"
                                 else str(d[c]) for c in cols))
        text = "\n".join(rows) + "\n"
    else:
        lines, _ = _text_lines(docs, scope)
        text = "\n".join(lines) + "\n"
    return _emit(text, config.out, 0 if ok else 1)


def _emit(text: str, out: str | None, code: int) -> int:
    if out is None:
        sys.stdout.write(text)
        return code
    try:
        with open(out, "w") as fh:
            fh.write(text)
    except OSError as exc:
        print(f"error: cannot write {out}: {exc}", file=sys.stderr)
        return 2
    return code


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="thetamap",
        description="graphs and verification for x -> x + 1/x over GF(2^t)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("graph", help="build one graph and export it")
    p.add_argument("--t", type=int, required=True, help="extension degree")
    p.add_argument("--format", choices=["dot", "json"])
    p.add_argument("--out")

    p = sub.add_parser("verify-structure", help="structural checks over t")
    p.add_argument("--t", help="degree or range A..B")
    p.add_argument("--range", help="A..B")
    p.add_argument("--format", choices=["text", "json"])
    p.add_argument("--out")
    p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("verify-orders", help="order/trace battery over n")
    p.add_argument("--n", help="degree or range A..B")
    p.add_argument("--range", help="A..B")
    p.add_argument("--format", choices=["text", "json"])
    p.add_argument("--out")
    p.add_argument("--workers", type=int, default=1)

    for name in ("verify-dickson", "sweep"):
        p = sub.add_parser(name, help=f"Dickson/Kloosterman battery ({name})")
        p.add_argument("--n", help="degree or range A..B")
        p.add_argument("--range", help="A..B")
        p.add_argument("--format",
                       choices=["text", "json"] if name == "verify-dickson"
                       else ["csv", "json"])
        p.add_argument("--out")
        p.add_argument("--workers", type=int, default=1)
        p.add_argument("--seed", type=int, default=0)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        config = build_config(args)
    except (ValueError, FieldError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        return run(config)
    except FieldError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
