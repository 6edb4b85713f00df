"""Command-line front end.

Exit codes: 0 ok, 1 unreadable or malformed input, 2 invalid sequence or
plan, 3 verification failed.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from contextlib import contextmanager

import numpy as np

from . import formats
from .core import DegenerateSequenceError, DiagSynthError, PhaseVector
from .diagram import gap_stats, render_svg, render_text
from .rmatrix import build_r, to_csv
from .sequences import FAMILIES, family_sequence, validate
from .simulate import evaluate, max_phase_error
from .synthesis import (
    DEFAULT_TOL,
    decompose,
    export_qasm,
    family_plan,
    gate_counts,
    plan_with,
    wrap_circuit,
)

EXIT_OK, EXIT_IO, EXIT_SEQUENCE, EXIT_VERIFY = 0, 1, 2, 3


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


@contextmanager
def _failing_with(code: int, what: str):
    try:
        yield
    except CliError:
        raise
    except (OSError, json.JSONDecodeError) as exc:
        raise CliError(EXIT_IO, f"{what}: {exc}") from exc
    except (DiagSynthError, KeyError, TypeError, ValueError) as exc:
        raise CliError(code, f"{what}: {exc}") from exc


def default_tol() -> float:
    raw = os.environ.get("DIAGSYNTH_TOL")
    if raw is None:
        return DEFAULT_TOL
    try:
        return float(raw)
    except ValueError:
        raise CliError(EXIT_IO, f"DIAGSYNTH_TOL is not a number: {raw!r}")


def _num(x: float) -> str:
    return format(float(x), ".17g")


def _emit(text: str, out_path: str | None) -> None:
    if out_path:
        with _failing_with(EXIT_IO, f"writing {out_path}"):
            with open(out_path, "w") as fh:
                fh.write(text)
    else:
        sys.stdout.write(text)


def _resolve_sequence(source: str | None, family: str | None, n: int | None):
    """A sequence from ``family:n``, a JSON file, or --family/--n."""
    if source and ":" in source and source.split(":", 1)[0] in FAMILIES:
        family, raw_n = source.split(":", 1)
        with _failing_with(EXIT_SEQUENCE, "sequence"):
            return family_sequence(family, int(raw_n))
    if source:
        with _failing_with(EXIT_IO, f"reading {source}"):
            with open(source) as fh:
                data = json.load(fh)
        with _failing_with(EXIT_SEQUENCE, f"sequence in {source}"):
            return formats.sequence_from_json(data)
    if family is None or n is None:
        raise CliError(EXIT_IO, "give --seq or both --family and --n")
    with _failing_with(EXIT_SEQUENCE, "sequence"):
        return family_sequence(family, n)


def _verify_report(circuit, target: PhaseVector) -> dict:
    m = evaluate(circuit)
    if not m.is_diagonal:
        return {"diagonal": False, "max_error": None}
    return {"diagonal": True, "max_error": max_phase_error(m, target)}


def _print_report(report: dict) -> None:
    err = report["max_error"]
    print(json.dumps({"diagonal": report["diagonal"], "max_error": None if err is None else float(_num(err))}))


def cmd_synth(args) -> int:
    with _failing_with(EXIT_IO, f"reading {args.phases}"):
        target = formats.load_phases(args.phases)
    if args.seq_file:
        with _failing_with(EXIT_IO, f"reading {args.seq_file}"):
            custom = formats.load_sequences(args.seq_file)
        with _failing_with(EXIT_SEQUENCE, "custom plan"):
            plan = plan_with(target.n, {s.n: s for s in custom}, fallback=args.family)
            for k, s in plan.levels.items():
                report = validate(s)
                if not report.ok:
                    raise DegenerateSequenceError(
                        f"degenerate sequence at level {k}: parity_ok={report.parity_ok}, "
                        f"coverage_ok={report.coverage_ok}"
                    )
    else:
        with _failing_with(EXIT_SEQUENCE, "plan"):
            plan = family_plan(args.family, target.n)
    with _failing_with(EXIT_SEQUENCE, "synthesis"):
        circuit = decompose(target, plan, flip_phase=args.flip_phase)
    if args.wrap:
        circuit = wrap_circuit(circuit)

    counts = gate_counts(circuit)
    summary = {"n": target.n, **counts}
    if args.verify:
        report = _verify_report(circuit, target)
        summary.update(report)
    if args.out:
        with _failing_with(EXIT_IO, f"writing {args.out}"):
            formats.save_circuit(args.out, circuit)
    else:
        print(json.dumps(formats.circuit_to_json(circuit)))
    if args.qasm:
        with _failing_with(EXIT_IO, "qasm export"):
            _emit(export_qasm(circuit), args.qasm)
    print(json.dumps(summary), file=sys.stderr if not args.out else sys.stdout)
    if args.verify:
        tol = args.tol if args.tol is not None else default_tol()
        if not report["diagonal"] or report["max_error"] > tol:
            print(f"verification failed (tol {_num(tol)})", file=sys.stderr)
            return EXIT_VERIFY
    return EXIT_OK


def cmd_verify(args) -> int:
    with _failing_with(EXIT_IO, f"reading {args.circuit}"):
        circuit = formats.load_circuit(args.circuit)
    with _failing_with(EXIT_IO, f"reading {args.phases}"):
        target = formats.load_phases(args.phases)
    if circuit.n != target.n:
        raise CliError(EXIT_IO, f"circuit has {circuit.n} qubits, phases need {target.n}")
    tol = args.tol if args.tol is not None else default_tol()
    report = _verify_report(circuit, target)
    _print_report(report)
    ok = report["diagonal"] and report["max_error"] <= tol
    return EXIT_OK if ok else EXIT_VERIFY


def cmd_sequence(args) -> int:
    seq = _resolve_sequence(args.seq, args.family, args.n)
    report = validate(seq)
    stats = gap_stats(seq)
    out = formats.sequence_to_json(seq)
    out.update(
        parity_ok=report.parity_ok,
        coverage_ok=report.coverage_ok,
        gap_count=report.gap_count,
        per_row_gaps=list(stats.per_row_gaps),
        doubling_ok=stats.doubling_ok,
    )
    _emit(json.dumps(out) + "\n", args.out)
    return EXIT_OK if report.ok or not args.strict else EXIT_SEQUENCE


def cmd_rmatrix(args) -> int:
    seq = _resolve_sequence(args.seq, args.family, args.n)
    _emit(to_csv(build_r(seq)), args.out)
    return EXIT_OK


def cmd_diagram(args) -> int:
    seq = _resolve_sequence(args.seq, args.family, args.n)
    text = render_svg(seq) if args.format == "svg" else render_text(seq)
    _emit(text, args.out)
    return EXIT_OK


def cmd_count(args) -> int:
    with _failing_with(EXIT_SEQUENCE, "plan"):
        plan = family_plan(args.family, args.n)
    circuit = decompose(PhaseVector(args.n, (0.0,) * 2**args.n), plan)
    print(json.dumps({"n": args.n, "family": args.family, **gate_counts(circuit)}))
    return EXIT_OK


def cmd_selftest(args) -> int:
    rng = np.random.default_rng(args.seed)
    tol = args.tol if args.tol is not None else default_tol()
    worst = 0.0
    for _ in range(args.trials):
        target = PhaseVector(args.n, tuple(rng.uniform(-np.pi, np.pi, 2**args.n)))
        report = _verify_report(decompose(target, family_plan(args.family, args.n)), target)
        if not report["diagonal"]:
            print(json.dumps({"diagonal": False}))
            return EXIT_VERIFY
        worst = max(worst, report["max_error"])
    print(json.dumps({"trials": args.trials, "max_error": float(_num(worst))}))
    return EXIT_OK if worst <= tol else EXIT_VERIFY


def _add_seq_args(p) -> None:
    p.add_argument("--seq", help="sequence JSON file or FAMILY:N (e.g. pbt:4)")
    p.add_argument("--family", choices=FAMILIES)
    p.add_argument("--n", type=int)
    p.add_argument("--out", help="output path (default stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="diagsynth", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="decompose a phase file into a circuit")
    p.add_argument("phases")
    p.add_argument("--family", choices=FAMILIES, default="pbt")
    p.add_argument("--seq-file", help="custom per-level sequences (JSON); other levels use --family")
    p.add_argument("--wrap", action="store_true", help="wrap emitted angles into (-pi, pi]")
    p.add_argument("--out", help="circuit JSON output path")
    p.add_argument("--qasm", help="also write OpenQASM 3 to this path")
    p.add_argument("--flip-phase", type=float, default=0.0)
    p.add_argument("--verify", action=argparse.BooleanOptionalAction, default=True)
    p.add_argument("--tol", type=float)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("verify", help="check a circuit against a phase file")
    p.add_argument("circuit")
    p.add_argument("phases")
    p.add_argument("--tol", type=float)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sequence", help="generate or validate a control sequence")
    _add_seq_args(p)
    p.add_argument("--strict", action="store_true", help="exit 2 if the sequence is not valid")
    p.set_defaults(func=cmd_sequence)

    p = sub.add_parser("rmatrix", help="dump the sign matrix as CSV")
    _add_seq_args(p)
    p.set_defaults(func=cmd_rmatrix)

    p = sub.add_parser("diagram", help="render a gap diagram")
    _add_seq_args(p)
    p.add_argument("--format", choices=("text", "svg"), default="text")
    p.set_defaults(func=cmd_diagram)

    p = sub.add_parser("count", help="gate counts of a family plan")
    p.add_argument("--family", choices=FAMILIES, default="pbt")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("selftest", help="random reconstruction round trips")
    p.add_argument("--family", choices=FAMILIES, default="pbt")
    p.add_argument("--n", type=int, default=4)
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float)
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
