"""Command-line surface: compile, run, predict, sweep, trace and sample.

Subcommands:

* ``run``     simulate a marked-bitstring search and report probabilities,
              plane coordinates and angle; ``--trace`` adds per-step states
* ``sweep``   iteration table k = 0..kmax, simulated next to closed form
* ``predict`` closed-form only, no simulation; ``--optimal`` picks k
* ``sample``  seeded shot histogram of the final state
* ``dump``    emit the compiled circuit in the text format
* ``load``    parse a circuit text file, run it on |0...0>, report

Output is text (default), ``--format json`` or ``--format csv``. Exit codes:
0 success, 2 usage or validation error, 1 internal error. Reports go to
stdout, diagnostics to stderr. Bitstrings are msb-first (qubit 0 leftmost)
unless ``--bit-order lsb`` asks for reversed display; the internal
convention never changes. ``GROVER_KIT_SEED`` supplies the default sampling
seed.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys

from grover_kit import __version__
from grover_kit.circuit import (
    GroverSpec,
    OracleStyle,
    build_grover_circuit,
    circuit_from_text,
    circuit_to_text,
    grover_step_labels,
    op_to_text,
    run,
)
from grover_kit.geometry import (
    grover_angles,
    iteration_report,
    oblique_coords,
    optimal_iterations,
    p_each_unmarked,
    plane_angle,
    plane_decompose,
    predicted_success,
    strip_ancilla,
)
from grover_kit.sampling import MAX_SEED, measure_all
from grover_kit.statevector import MAX_QUBITS, StateVector

FORMAT_VERSION = "1"
SEED_ENV_VAR = "GROVER_KIT_SEED"
AMPLITUDE_CUTOFF = 1e-12

_STYLE_FLAGS = {"mcz": OracleStyle.MCZ_DIRECT, "mcx-ancilla": OracleStyle.MCX_ANCILLA}


class UsageError(Exception):
    """Bad flag value or inconsistent invocation; maps to exit code 2."""


def _oriented(bits: str, bit_order: str) -> str:
    return bits if bit_order == "msb" else bits[::-1]


def _validate_spec_args(args) -> GroverSpec:
    bit_order = getattr(args, "bit_order", "msb")
    if not 1 <= args.n <= MAX_QUBITS:
        raise UsageError(f"--n: must be in 1..{MAX_QUBITS}, got {args.n}")
    marked = []
    for raw in args.marked:
        bits = _oriented(raw, bit_order)
        if len(bits) != args.n:
            raise UsageError(f"--marked: {raw!r} has length {len(raw)}, expected n={args.n}")
        if any(ch not in "01" for ch in bits):
            raise UsageError(f"--marked: {raw!r} is not a string over 0 and 1")
        marked.append(bits)
    if len(set(marked)) != len(marked):
        raise UsageError(f"--marked: duplicate strings in {args.marked}")
    if len(marked) >= (1 << args.n):
        raise UsageError("--marked: the whole space cannot be marked")
    iterations = getattr(args, "iterations", 0)
    if iterations < 0:
        raise UsageError(f"--iterations: must be >= 0, got {iterations}")
    if iterations >= 1 and args.n < 2:
        raise UsageError("--n: amplification needs at least 2 data qubits")
    return GroverSpec(args.n, tuple(marked), iterations, _STYLE_FLAGS[args.style])


def _spec_echo(spec: GroverSpec, args) -> dict:
    return {
        "n": spec.n_qubits,
        "marked": [_oriented(b, args.bit_order) for b in spec.marked],
        "iterations": spec.iterations,
        "style": args.style,
        "bit_order": args.bit_order,
    }


def _document(command: str, spec_echo: dict, rows: list) -> dict:
    return {
        "command": command,
        "versions": {"tool": __version__, "format": FORMAT_VERSION},
        "spec": spec_echo,
        "rows": rows,
    }


def _r(value: float, precision: int) -> float:
    return round(float(value), precision)


def _complex_entry(z: complex, precision: int) -> dict:
    return {"re": _r(z.real, precision), "im": _r(z.imag, precision)}


def _fmt(value: float, precision: int) -> str:
    return f"{value:.{precision}f}"


def _fmt_complex(z: complex, precision: int) -> str:
    if abs(z.imag) <= AMPLITUDE_CUTOFF:
        return _fmt(z.real, precision)
    return f"{_fmt(z.real, precision)}{z.imag:+.{precision}f}j"


def _emit_csv(columns: list[str], rows: list[list]) -> None:
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(columns)
    writer.writerows(rows)


def _state_entries(state: StateVector, precision: int, bit_order: str) -> list[dict]:
    entries = []
    for i, amp in enumerate(state.amps):
        if abs(amp) <= AMPLITUDE_CUTOFF:
            continue
        bits = format(i, f"0{state.n_qubits}b")
        entries.append(
            {"bitstring": _oriented(bits, bit_order), **_complex_entry(complex(amp), precision)}
        )
    return entries


def _grouped_steps(labels: tuple[str, ...]) -> list[tuple[str, int, int]]:
    """Runs of consecutive identical labels as (label, first_op, last_op)."""
    groups: list[tuple[str, int, int]] = []
    for i, label in enumerate(labels):
        if groups and groups[-1][0] == label:
            groups[-1] = (label, groups[-1][1], i)
        else:
            groups.append((label, i, i))
    return groups


def _trace_rows(
    snapshots: list[StateVector], labels: tuple[str, ...], precision: int, bit_order: str
) -> list[dict]:
    rows = []
    for step, (label, first, last) in enumerate(_grouped_steps(labels)):
        rows.append(
            {
                "step": step,
                "label": label,
                "ops": [first, last],
                "state": _state_entries(snapshots[last], precision, bit_order),
            }
        )
    return rows


def _print_trace_text(rows: list[dict], precision: int) -> None:
    for row in rows:
        first, last = row["ops"]
        span = f"op {first}" if first == last else f"ops {first}..{last}"
        print(f"step {row['step']}  [{row['label']}]  {span}")
        for entry in row["state"]:
            z = complex(entry["re"], entry["im"])
            print(f"  |{entry['bitstring']}>  {_fmt_complex(z, precision)}")


def _trace_csv_rows(rows: list[dict]) -> list[list]:
    out = []
    for row in rows:
        for entry in row["state"]:
            out.append([row["step"], row["label"], entry["bitstring"], entry["re"], entry["im"]])
    return out


def _resolve_seed(args) -> int:
    if args.seed is not None:
        seed = args.seed
        source = "--seed"
    else:
        raw = os.environ.get(SEED_ENV_VAR)
        if raw is None:
            return 0
        try:
            seed = int(raw)
        except ValueError:
            raise UsageError(f"{SEED_ENV_VAR}: not an integer: {raw!r}") from None
        source = SEED_ENV_VAR
    if not 0 <= seed <= MAX_SEED:
        raise UsageError(f"{source}: seed must be a 64-bit non-negative integer, got {seed}")
    return seed


def _final_data_state(spec: GroverSpec, trace: bool):
    """Simulate the compiled circuit; returns (data_state, trace_snapshots)."""
    circuit = build_grover_circuit(spec)
    if trace:
        final, snapshots = run(circuit, trace=True)
    else:
        final, snapshots = run(circuit), []
    if spec.style is OracleStyle.MCX_ANCILLA:
        return strip_ancilla(final), snapshots
    return final, snapshots


def cmd_run(args) -> None:
    spec = _validate_spec_args(args)
    data, snapshots = _final_data_state(spec, args.trace)
    p = args.precision
    coords = plane_decompose(data, spec.marked)
    c_p, c_r = oblique_coords(data, spec.marked)
    angles = grover_angles(spec.n_qubits, spec.n_marked)
    per_marked = {
        _oriented(b, args.bit_order): _r(data.probability(b), p) for b in spec.marked
    }
    summary = {
        "p_marked_total": _r(sum(data.probability(b) for b in spec.marked), p),
        "p_marked_formula": _r(
            predicted_success(spec.n_qubits, spec.n_marked, spec.iterations), p
        ),
        "p_per_marked": per_marked,
        "theta_sin": _r(angles.theta_sin, p),
        "theta_cos": _r(angles.theta_cos, p),
        "plane": {
            "a_marked": _complex_entry(coords.a_marked, p),
            "a_unmarked": _complex_entry(coords.a_unmarked, p),
            "residual_norm": _r(coords.residual_norm, p),
        },
        "angle": _r(plane_angle(coords), p),
        "oblique": {"c_p": _complex_entry(c_p, p), "c_r": _complex_entry(c_r, p)},
    }
    trace_rows = []
    if args.trace:
        labels = grover_step_labels(spec)
        trace_rows = _trace_rows(snapshots, labels, p, args.bit_order)
    if args.format == "json":
        doc = _document("run", _spec_echo(spec, args), trace_rows if args.trace else [summary])
        if args.trace:
            doc["summary"] = summary
        print(json.dumps(doc, indent=2))
    elif args.format == "csv":
        if args.trace:
            _emit_csv(["step", "label", "bitstring", "re", "im"], _trace_csv_rows(trace_rows))
        else:
            rows = [
                ["p_marked_total", summary["p_marked_total"]],
                ["p_marked_formula", summary["p_marked_formula"]],
            ]
            rows += [[f"p({b})", v] for b, v in per_marked.items()]
            rows += [
                ["theta_sin", summary["theta_sin"]],
                ["theta_cos", summary["theta_cos"]],
                ["a_marked_re", summary["plane"]["a_marked"]["re"]],
                ["a_marked_im", summary["plane"]["a_marked"]["im"]],
                ["a_unmarked_re", summary["plane"]["a_unmarked"]["re"]],
                ["a_unmarked_im", summary["plane"]["a_unmarked"]["im"]],
                ["residual_norm", summary["plane"]["residual_norm"]],
                ["angle", summary["angle"]],
                ["c_p_re", summary["oblique"]["c_p"]["re"]],
                ["c_p_im", summary["oblique"]["c_p"]["im"]],
                ["c_r_re", summary["oblique"]["c_r"]["re"]],
                ["c_r_im", summary["oblique"]["c_r"]["im"]],
            ]
            _emit_csv(["quantity", "value"], rows)
    else:
        print(f"n: {spec.n_qubits}")
        print(f"marked: {' '.join(_oriented(b, args.bit_order) for b in spec.marked)}")
        print(f"iterations: {spec.iterations}")
        print(f"style: {args.style}")
        print(f"theta_sin: {_fmt(angles.theta_sin, p)}")
        print(f"theta_cos: {_fmt(angles.theta_cos, p)}")
        print(f"p_marked_total: {_fmt(summary['p_marked_total'], p)}")
        print(f"p_marked_formula: {_fmt(summary['p_marked_formula'], p)}")
        for b, v in per_marked.items():
            print(f"p({b}): {_fmt(v, p)}")
        print(f"a_marked: {_fmt_complex(coords.a_marked, p)}")
        print(f"a_unmarked: {_fmt_complex(coords.a_unmarked, p)}")
        print(f"residual_norm: {_fmt(coords.residual_norm, p)}")
        print(f"angle: {_fmt(plane_angle(coords), p)}")
        print(f"oblique: c_p={_fmt_complex(c_p, p)} c_r={_fmt_complex(c_r, p)}")
        if args.trace:
            print()
            _print_trace_text(trace_rows, p)


def cmd_sweep(args) -> None:
    if not 0 <= args.kmax <= 64:
        raise UsageError(f"--kmax: must be in 0..64, got {args.kmax}")
    args.iterations = args.kmax
    spec = _validate_spec_args(args)
    rows = iteration_report(spec, args.kmax)
    p = args.precision
    row_dicts = [
        {
            "k": row.k,
            "angle": _r(row.angle, p),
            "p_marked_sim": _r(row.p_marked_sim, p),
            "p_marked_formula": _r(row.p_marked_formula, p),
            "p_each_unmarked": _r(row.p_each_unmarked, p),
        }
        for row in rows
    ]
    if args.format == "json":
        print(json.dumps(_document("sweep", _spec_echo(spec, args), row_dicts), indent=2))
    elif args.format == "csv":
        _emit_csv(
            ["k", "angle", "p_marked_sim", "p_marked_formula", "p_each_unmarked"],
            [
                [d["k"], d["angle"], d["p_marked_sim"], d["p_marked_formula"], d["p_each_unmarked"]]
                for d in row_dicts
            ],
        )
    else:
        header = f"{'k':>3}  {'angle':>{p + 4}}  {'p_marked_sim':>{p + 6}}  {'p_marked_formula':>{p + 6}}  {'p_each_unmarked':>{p + 6}}"
        print(header)
        for row in rows:
            print(
                f"{row.k:>3}  {row.angle:>{p + 4}.{p}f}  {row.p_marked_sim:>{p + 6}.{p}f}  "
                f"{row.p_marked_formula:>{p + 6}.{p}f}  {row.p_each_unmarked:>{p + 6}.{p}f}"
            )


def cmd_predict(args) -> None:
    if not 1 <= args.n <= MAX_QUBITS:
        raise UsageError(f"--n: must be in 1..{MAX_QUBITS}, got {args.n}")
    if not 1 <= args.m < (1 << args.n):
        raise UsageError(f"--m: must be in 1..2^n - 1 = {(1 << args.n) - 1}, got {args.m}")
    if args.optimal:
        k = optimal_iterations(args.n, args.m)
    else:
        if args.iterations < 0:
            raise UsageError(f"--iterations: must be >= 0, got {args.iterations}")
        k = args.iterations
    p = args.precision
    angles = grover_angles(args.n, args.m)
    result = {
        "n": args.n,
        "m": args.m,
        "iterations": k,
        "optimal": bool(args.optimal),
        "theta_sin": _r(angles.theta_sin, p),
        "theta_cos": _r(angles.theta_cos, p),
        "p_marked_formula": _r(predicted_success(args.n, args.m, k), p),
        "p_each_unmarked": _r(p_each_unmarked(args.n, args.m, k), p),
    }
    if args.format == "json":
        spec_echo = {"n": args.n, "m": args.m, "iterations": k, "optimal": bool(args.optimal)}
        print(json.dumps(_document("predict", spec_echo, [result]), indent=2))
    elif args.format == "csv":
        _emit_csv(
            ["quantity", "value"],
            [[key, value] for key, value in result.items() if key != "optimal"]
            + [["optimal", int(result["optimal"])]],
        )
    else:
        for key in ("n", "m", "iterations", "optimal"):
            print(f"{key}: {result[key]}")
        for key in ("theta_sin", "theta_cos", "p_marked_formula", "p_each_unmarked"):
            print(f"{key}: {_fmt(result[key], p)}")


def cmd_sample(args) -> None:
    spec = _validate_spec_args(args)
    if args.shots < 1:
        raise UsageError(f"--shots: must be >= 1, got {args.shots}")
    seed = _resolve_seed(args)
    circuit = build_grover_circuit(spec)
    final = run(circuit)
    n_data = spec.n_qubits if spec.style is OracleStyle.MCX_ANCILLA else None
    histogram = measure_all(final, args.shots, seed, n_data=n_data)
    items = [
        (_oriented(bits, args.bit_order), count) for bits, count in histogram.counts.items()
    ]
    items.sort(key=lambda kv: (-kv[1], kv[0]))
    if args.format == "json":
        doc = _document(
            "sample",
            _spec_echo(spec, args),
            [{"bitstring": bits, "count": count} for bits, count in items],
        )
        doc["shots"] = histogram.shots
        doc["seed"] = histogram.seed
        print(json.dumps(doc, indent=2))
    elif args.format == "csv":
        _emit_csv(["bitstring", "count"], [[bits, count] for bits, count in items])
    else:
        print(f"shots: {histogram.shots}")
        print(f"seed: {histogram.seed}")
        for bits, count in items:
            print(f"{bits}  {count}")


def cmd_dump(args) -> None:
    spec = _validate_spec_args(args)
    text = circuit_to_text(build_grover_circuit(spec))
    if args.out is None or args.out == "-":
        sys.stdout.write(text)
    else:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)


def cmd_load(args) -> None:
    if args.file is None or args.file == "-":
        text = sys.stdin.read()
        source = "<stdin>"
    else:
        try:
            with open(args.file, "r", encoding="utf-8") as fh:
                text = fh.read()
        except OSError as err:
            raise UsageError(f"--file: {err}") from None
        source = args.file
    try:
        circuit = circuit_from_text(text)
    except (ValueError, IndexError) as err:
        raise UsageError(f"--file: {err}") from None
    if args.trace:
        final, snapshots = run(circuit, trace=True)
    else:
        final, snapshots = run(circuit), []
    p = args.precision
    probs = final.probabilities()
    prob_rows = []
    for i, value in enumerate(probs):
        if value <= AMPLITUDE_CUTOFF:
            continue
        bits = format(i, f"0{circuit.n_qubits}b")
        prob_rows.append({"bitstring": _oriented(bits, args.bit_order), "p": _r(value, p)})
    prob_rows.sort(key=lambda d: (-d["p"], d["bitstring"]))
    trace_rows = []
    if args.trace:
        labels = tuple(op_to_text(op) for op in circuit.ops)
        trace_rows = _trace_rows(snapshots, labels, p, args.bit_order)
    if args.format == "json":
        doc = _document(
            "load",
            {"source": source, "n": circuit.n_qubits, "bit_order": args.bit_order},
            trace_rows if args.trace else prob_rows,
        )
        if args.trace:
            doc["summary"] = prob_rows
        print(json.dumps(doc, indent=2))
    elif args.format == "csv":
        if args.trace:
            _emit_csv(["step", "label", "bitstring", "re", "im"], _trace_csv_rows(trace_rows))
        else:
            _emit_csv(["bitstring", "p"], [[d["bitstring"], d["p"]] for d in prob_rows])
    else:
        print(f"source: {source}")
        print(f"n: {circuit.n_qubits}")
        print(f"ops: {len(circuit)}")
        for d in prob_rows:
            print(f"p({d['bitstring']}): {_fmt(d['p'], p)}")
        if args.trace:
            print()
            _print_trace_text(trace_rows, p)


def _add_output_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--format", choices=("text", "json", "csv"), default="text")
    parser.add_argument("--precision", type=int, default=6, metavar="DIGITS")
    parser.add_argument("--bit-order", choices=("msb", "lsb"), default="msb")


def _add_spec_flags(parser: argparse.ArgumentParser, *, iterations: bool = True) -> None:
    parser.add_argument("--n", type=int, required=True, help="data qubit count")
    parser.add_argument(
        "--marked", nargs="+", required=True, metavar="BITS", help="marked bitstrings"
    )
    if iterations:
        parser.add_argument("--iterations", type=int, default=1)
    parser.add_argument("--style", choices=tuple(_STYLE_FLAGS), default="mcz")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="grover-kit",
        description="Simulate and analyze Grover amplitude amplification circuits.",
    )
    parser.add_argument("--version", action="version", version=f"grover-kit {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="simulate and report probabilities and plane geometry")
    _add_spec_flags(p_run)
    p_run.add_argument("--trace", action="store_true", help="emit grouped per-step snapshots")
    _add_output_flags(p_run)
    p_run.set_defaults(func=cmd_run)

    p_sweep = sub.add_parser("sweep", help="iteration table, simulated next to closed form")
    _add_spec_flags(p_sweep, iterations=False)
    p_sweep.add_argument("--kmax", type=int, required=True)
    _add_output_flags(p_sweep)
    p_sweep.set_defaults(func=cmd_sweep)

    p_predict = sub.add_parser("predict", help="closed-form probabilities, no simulation")
    p_predict.add_argument("--n", type=int, required=True)
    p_predict.add_argument("--m", type=int, required=True, help="marked string count")
    group = p_predict.add_mutually_exclusive_group(required=True)
    group.add_argument("--iterations", type=int)
    group.add_argument("--optimal", action="store_true")
    _add_output_flags(p_predict)
    p_predict.set_defaults(func=cmd_predict)

    p_sample = sub.add_parser("sample", help="seeded shot histogram of the final state")
    _add_spec_flags(p_sample)
    p_sample.add_argument("--shots", type=int, required=True)
    p_sample.add_argument(
        "--seed", type=int, default=None, help=f"default: ${SEED_ENV_VAR} or 0"
    )
    _add_output_flags(p_sample)
    p_sample.set_defaults(func=cmd_sample)

    p_dump = sub.add_parser("dump", help="emit the compiled circuit text")
    _add_spec_flags(p_dump)
    p_dump.add_argument("--out", default=None, metavar="PATH", help="default: stdout")
    p_dump.set_defaults(func=cmd_dump)

    p_load = sub.add_parser("load", help="parse circuit text, run it on |0...0>")
    p_load.add_argument("--file", default=None, metavar="PATH", help="default: stdin")
    p_load.add_argument("--trace", action="store_true")
    _add_output_flags(p_load)
    p_load.set_defaults(func=cmd_load)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    precision = getattr(args, "precision", 6)
    if not 0 <= precision <= 17:
        print(f"error: --precision: must be in 0..17, got {precision}", file=sys.stderr)
        return 2
    try:
        args.func(args)
    except UsageError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except BrokenPipeError:
        return 1
    except Exception as err:  # anything not mapped to a flag is an internal fault
        print(f"internal error: {type(err).__name__}: {err}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
