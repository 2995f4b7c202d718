"""Command line front end.

Subcommands: `plan` (emit a plan document), `run` (execute one with exact
reporting), `graph` (DOT export), `verify` (the brute-force sweeps).
Exit codes: 0 ok, 1 verification failure, 2 bad input or malformed
document, 3 invalid plan, 4 execution error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional

from .dense import DENSE_CAP
from .graph import plan_to_dot
from .plandoc import (
    DocumentError,
    PlanBuildError,
    PlanDocument,
    approx_decimal,
    document_to_plan,
    frac_to_json,
    parse_document,
    render_document,
)
from .protocol import (
    ExecutionReport,
    PlanExecutionError,
    ProtocolPlan,
    StateRef,
    execute_plan,
    validate_plan,
)
from .verify import run_verification

__all__ = ["main", "entry", "report_to_json", "report_to_text"]

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_BAD_INPUT = 2
EXIT_INVALID_PLAN = 3
EXIT_RUNTIME = 4


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="zstates",
        description="Exact engine for symmetric-state distillation plans.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_plan = sub.add_parser("plan", help="generate a plan document on stdout")
    p_plan.add_argument("--mode", required=True,
                        choices=("exact", "incremental", "exponential"))
    p_plan.add_argument("--k", type=int, required=True,
                        help="excitations per state")
    p_plan.add_argument("--n-target", type=int, dest="n_target",
                        help="target qubit count (incremental/exponential)")
    p_plan.add_argument("--n1", type=int, help="first input size (exact mode)")
    p_plan.add_argument("--n2", type=int, help="second input size (exact mode)")

    p_run = sub.add_parser("run", help="execute a plan document")
    p_run.add_argument("plan_file")
    p_run.add_argument("--report", choices=("text", "json"), default="text",
                       help="report format (default: text)")
    p_run.add_argument("--verify-with-oracle", action="store_true",
                       help="replay each cycle on the dense expansion")
    p_run.add_argument("--dense-cap", type=int, default=None,
                       help="override the dense expansion qubit cap")

    p_graph = sub.add_parser("graph", help="emit a DOT graph of a plan")
    p_graph.add_argument("plan_file")

    p_verify = sub.add_parser("verify", help="run the verification sweeps")
    p_verify.add_argument("--max-n", type=int, default=12, dest="max_n")
    p_verify.add_argument("--max-k", type=int, default=3, dest="max_k")
    p_verify.add_argument("--seed", type=int, default=0)
    p_verify.add_argument("--dense-cap", type=int, default=DENSE_CAP,
                          dest="dense_cap")
    p_verify.add_argument("--corrupt-alpha", action="store_true",
                          help="debug: sabotage the projection weights; the "
                               "distillation sweep must then fail")
    return parser


def _state_str(ref: StateRef) -> str:
    return f"Z_{ref.k}({ref.n})"


def report_to_json(plan: ProtocolPlan, report: ExecutionReport) -> dict:
    """Machine-readable report; every probability is an exact fraction."""
    return {
        "schema_version": 1,
        "k": plan.k,
        "final": {"id": report.final.id, "k": report.final.k,
                  "n": report.final.n},
        "cycles": [
            {
                "index": i,
                "left": plan.cycles[i].left.id,
                "right": plan.cycles[i].right.id,
                "produced": {"id": r.produced.id, "k": r.produced.k,
                             "n": r.produced.n},
                "probability": frac_to_json(r.probability),
                "oracle_checked": r.oracle_checked,
            }
            for i, r in enumerate(report.cycles)
        ],
        "cumulative_probability": frac_to_json(report.cumulative_success),
        "ledger": {
            "input_qubits": report.ledger.input_qubits,
            "ancilla_qubits": report.ledger.ancilla_qubits,
            "consumed_qubits": report.ledger.consumed_qubits,
            "cycles": report.ledger.cycles,
            "output_qubits": report.ledger.output_qubits,
            "depth": report.ledger.depth,
        },
    }


def report_to_text(plan: ProtocolPlan, report: ExecutionReport) -> str:
    """Human-readable report; decimals are labelled approximate with `~`."""
    lines = [f"plan: k={plan.k} cycles={len(plan.cycles)} "
             f"target=Z_{plan.target[0]}({plan.target[1]})"]
    for i, r in enumerate(report.cycles):
        cyc = plan.cycles[i]
        oracle = "  [oracle ok]" if r.oracle_checked else ""
        lines.append(
            f"cycle {i + 1}: {_state_str(cyc.left)}[{cyc.left.id}] + "
            f"{_state_str(cyc.right)}[{cyc.right.id}] -> "
            f"{_state_str(r.produced)}[{r.produced.id}]  "
            f"p = {r.probability} (~ {approx_decimal(r.probability)}){oracle}")
    led = report.ledger
    lines.append(f"cumulative success probability: {report.cumulative_success} "
                 f"(~ {approx_decimal(report.cumulative_success)})")
    lines.append(f"ledger: input_qubits={led.input_qubits} "
                 f"ancilla_qubits={led.ancilla_qubits} "
                 f"consumed_qubits={led.consumed_qubits} cycles={led.cycles} "
                 f"output_qubits={led.output_qubits} depth={led.depth}")
    lines.append(f"final: {_state_str(report.final)}")
    return "\n".join(lines) + "\n"


def _load_plan(path_str: str):
    """Returns (exit_code, (doc, plan) or None, problem messages)."""
    try:
        text = Path(path_str).read_text(encoding="utf-8")
    except OSError as exc:
        return EXIT_BAD_INPUT, None, [f"cannot read {path_str}: {exc}"]
    try:
        doc = parse_document(text)
    except DocumentError as exc:
        return EXIT_BAD_INPUT, None, [f"malformed plan document: {exc}"]
    try:
        plan = document_to_plan(doc)
    except PlanBuildError as exc:
        return EXIT_INVALID_PLAN, None, exc.violations
    violations = validate_plan(plan)
    if violations:
        return EXIT_INVALID_PLAN, None, violations
    return EXIT_OK, (doc, plan), []


def cmd_plan(args: argparse.Namespace) -> int:
    if args.mode == "exact":
        if args.n1 is None or args.n2 is None:
            print("mode 'exact' requires --n1 and --n2", file=sys.stderr)
            return EXIT_BAD_INPUT
        if args.n_target is not None and args.n_target != args.n1 + args.n2:
            print("--n-target must equal n1 + n2 for mode 'exact'",
                  file=sys.stderr)
            return EXIT_BAD_INPUT
        doc = PlanDocument(k=args.k, target_n=args.n1 + args.n2, mode="exact",
                           n1=args.n1, n2=args.n2)
    else:
        if args.n_target is None:
            print(f"mode {args.mode!r} requires --n-target", file=sys.stderr)
            return EXIT_BAD_INPUT
        if args.n1 is not None or args.n2 is not None:
            print("--n1/--n2 are only valid for mode 'exact'", file=sys.stderr)
            return EXIT_BAD_INPUT
        doc = PlanDocument(k=args.k, target_n=args.n_target, mode=args.mode)
    try:
        document_to_plan(doc)
    except PlanBuildError as exc:
        for message in exc.violations:
            print(message, file=sys.stderr)
        return EXIT_BAD_INPUT
    sys.stdout.write(render_document(doc))
    return EXIT_OK


def cmd_run(args: argparse.Namespace) -> int:
    code, payload, problems = _load_plan(args.plan_file)
    if code != EXIT_OK:
        for message in problems:
            print(message, file=sys.stderr)
        return code
    doc, plan = payload
    verify_flag = args.verify_with_oracle or doc.verify_with_oracle
    cap = args.dense_cap if args.dense_cap is not None else \
        (doc.dense_cap if doc.dense_cap is not None else DENSE_CAP)
    try:
        report = execute_plan(plan, verify_with_oracle=verify_flag,
                              dense_cap=cap)
    except PlanExecutionError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_RUNTIME
    if args.report == "json":
        sys.stdout.write(json.dumps(report_to_json(plan, report), indent=2)
                         + "\n")
    else:
        sys.stdout.write(report_to_text(plan, report))
    return EXIT_OK


def cmd_graph(args: argparse.Namespace) -> int:
    code, payload, problems = _load_plan(args.plan_file)
    if code != EXIT_OK:
        for message in problems:
            print(message, file=sys.stderr)
        return code
    _, plan = payload
    sys.stdout.write(plan_to_dot(plan))
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    if args.dense_cap < 1:
        print("--dense-cap must be positive", file=sys.stderr)
        return EXIT_BAD_INPUT
    if args.max_n > args.dense_cap:
        print(f"--max-n {args.max_n} exceeds the dense cap {args.dense_cap}",
              file=sys.stderr)
        return EXIT_BAD_INPUT
    results = run_verification(args.max_n, args.max_k, seed=args.seed,
                               cap=args.dense_cap,
                               corrupt_alpha=args.corrupt_alpha)
    failed = False
    for res in results:
        status = "pass" if res.passed else "FAIL"
        line = f"{res.name}: {status} ({res.cells} cells"
        if res.failures:
            line += f", {len(res.failures)} failures; first: {res.failures[0]}"
        line += ")"
        print(line)
        failed = failed or not res.passed
    return EXIT_VERIFY_FAILED if failed else EXIT_OK


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.command == "plan":
        return cmd_plan(args)
    if args.command == "run":
        return cmd_run(args)
    if args.command == "graph":
        return cmd_graph(args)
    return cmd_verify(args)


def entry() -> None:
    raise SystemExit(main())
