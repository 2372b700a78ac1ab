"""Batch experiment front end.

Verbs: enumerate, measures, qk, bisect, census, predict-tau, solve, wpoly,
compile, witness, verify, decode.  Output is CSV (default) or JSON that
mirrors the CSV fields one to one; rationals print as num/den.  Exit codes:
0 success, 2 usage, 3 domain error, 4 I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import bits, codes, dioph, dprm, measures
from .errors import DomainError

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DOMAIN = 3
EXIT_IO = 4


@dataclass(frozen=True)
class ExperimentConfig:
    """One parsed invocation; numeric fields are validated positive."""

    command: str
    out: str | None = None
    fmt: str = "csv"
    max_len: int | None = None
    budget: int | None = None
    schedule: str | None = None
    omega: Fraction | None = None
    i_max: int | None = None
    k: int | None = None
    k_max: int | None = None
    base: int = 2
    horizon: int | None = None
    index: int | None = None
    mode: str = "bisect"
    family: str | None = None
    params: dict[str, int] | None = None
    param_range: dict[str, range] | None = None
    box: dict[str, tuple[int, int]] | None = None
    allow_zero: bool = False
    machine: str | None = None
    system: str | None = None
    witness: str | None = None
    input_value: int | None = None


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"{value} is not positive")
    return value


def _rational(text: str) -> Fraction:
    return Fraction(text)


def _assignment(text: str) -> dict[str, int]:
    pairs = {}
    for chunk in text.split(","):
        name, _, value = chunk.partition("=")
        if not name or not value:
            raise argparse.ArgumentTypeError(f"bad assignment chunk {chunk!r}")
        pairs[name.strip()] = int(value)
    return pairs


def _ranges(text: str) -> dict[str, tuple[int, int]]:
    spans = {}
    for chunk in text.split(","):
        name, _, bounds = chunk.partition("=")
        lo, sep, hi = bounds.partition(":")
        if not name or not sep:
            raise argparse.ArgumentTypeError(f"bad range chunk {chunk!r}")
        spans[name.strip()] = (int(lo), int(hi))
    return spans


def _emit(rows: list[dict[str, object]], header: Sequence[str], config: ExperimentConfig) -> None:
    if config.fmt == "json":
        payload = {"rows": rows}
        text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    else:
        lines = [",".join(header)]
        for row in rows:
            lines.append(",".join(str(row[col]) for col in header))
        text = "\n".join(lines) + "\n"
    if config.out is None:
        sys.stdout.write(text)
    else:
        with open(config.out, "w", encoding="utf-8") as fh:
            fh.write(text)


def _bool(flag: bool) -> str:
    return "true" if flag else "false"


def _load_schedule(config: ExperimentConfig) -> measures.HaltingSchedule:
    if config.schedule is not None:
        with open(config.schedule, encoding="utf-8") as fh:
            return measures.parse_schedule(fh.read())
    if config.max_len is not None and config.budget is not None:
        return measures.schedule_from_vm(config.max_len, config.budget)
    raise DomainError("need --schedule or both --max-len and --budget")


def cmd_enumerate(config: ExperimentConfig) -> int:
    if config.max_len is None:
        raise DomainError("enumerate needs --max-len")
    rows = []
    for n, program in enumerate(codes.enumerate_programs(config.max_len), 1):
        rows.append(
            {
                "index": n,
                "bits": program.code.bits,
                "length": len(program.code),
                "structural_halt": _bool(
                    codes.provably_halts_structurally(program.machine)
                ),
            }
        )
    _emit(rows, ["index", "bits", "length", "structural_halt"], config)
    return EXIT_OK


def cmd_measures(config: ExperimentConfig) -> int:
    if config.i_max is None:
        raise DomainError("measures needs --i-max")
    schedule = _load_schedule(config)
    tau_limit = measures.tau_exact(schedule)
    omega_limit = measures.omega_exact(schedule)
    rows = []
    for i in range(1, config.i_max + 1):
        tau_val = measures.tau_i(schedule, i)
        omega_val = measures.omega_i(schedule, i)
        rows.append(
            {
                "i": i,
                "tau_i": measures.format_rational(tau_val),
                "omega_i": measures.format_rational(omega_val),
                "exhausted": _bool(tau_val == tau_limit and omega_val == omega_limit),
            }
        )
    _emit(rows, ["i", "tau_i", "omega_i", "exhausted"], config)
    return EXIT_OK


def _ground_truth(config: ExperimentConfig) -> bits.ExactGroundTruth:
    if config.omega is not None:
        return bits.ExactGroundTruth(config.omega)
    schedule = _load_schedule(config)
    return bits.ExactGroundTruth(measures.omega_exact(schedule))


def cmd_qk(config: ExperimentConfig) -> int:
    if config.k_max is None:
        raise DomainError("qk needs --k")
    src = _ground_truth(config)
    rows = []
    for k in range(1, config.k_max + 1):
        rec = bits.threshold_count(k, src, base=config.base)
        padded = "".join(str(d) for d in bits.digits_from_count(rec))
        rows.append(
            {
                "k": k,
                "base": rec.base,
                "q": rec.q,
                "mode": rec.mode_label(),
                "parity": rec.q % rec.base,
                "digits": padded.lstrip("0") or "0",
                "padded": padded,
            }
        )
    _emit(rows, ["k", "base", "q", "mode", "parity", "digits", "padded"], config)
    return EXIT_OK


def cmd_bisect(config: ExperimentConfig) -> int:
    if config.k_max is None:
        raise DomainError("bisect needs --k")
    src = _ground_truth(config)
    rows = []
    for k in range(1, config.k_max + 1):
        oracle = bits.make_threshold_oracle(k, src)
        if config.mode == "scan":
            digits, queries = bits.scan_digits(k, oracle)
        else:
            digits, queries = bits.bisect_digits(k, oracle)
        rows.append(
            {
                "k": k,
                "q": int("".join(str(d) for d in digits), 2),
                "digits": "".join(str(d) for d in digits),
                "queries": queries,
                "mode": config.mode,
            }
        )
    _emit(rows, ["k", "q", "digits", "queries", "mode"], config)
    return EXIT_OK


def cmd_census(config: ExperimentConfig) -> int:
    if config.k is None or config.horizon is None:
        raise DomainError("census needs --k and --horizon")
    if config.omega is not None:
        src: bits.MeasureSource = bits.ExactGroundTruth(config.omega)
    else:
        src = bits.ApproximantStream(_load_schedule(config))
    census = bits.guess_census(config.k, config.horizon, src)
    rows = [
        {
            "k": census.k,
            "horizon": census.horizon,
            "ones": census.ones,
            "zeros": census.zeros,
        }
    ]
    _emit(rows, ["k", "horizon", "ones", "zeros"], config)
    return EXIT_OK


def cmd_predict_tau(config: ExperimentConfig) -> int:
    if config.max_len is None:
        raise DomainError("predict-tau needs --max-len")
    programs = codes.enumerate_programs(config.max_len)
    indices = [config.index] if config.index is not None else range(1, len(programs) + 1)
    rows = []
    for n in indices:
        prediction = bits.predict_halting_bit(n, config.max_len)
        rows.append(
            {
                "n": n,
                "bits": programs[n - 1].code.bits,
                "prediction": prediction.value,
            }
        )
    _emit(rows, ["n", "bits", "prediction"], config)
    return EXIT_OK


def _load_family(config: ExperimentConfig) -> dioph.EquationFamily:
    if config.family is None:
        raise DomainError("need --family")
    with open(config.family, encoding="utf-8") as fh:
        return dioph.parse_family(fh.read())


def _box_for(
    fam_unknowns: Sequence[str], config: ExperimentConfig
) -> dioph.Box:
    if config.box is None:
        raise DomainError("need --box with a range for every unknown")
    return dioph.box(config.box, allow_zero=config.allow_zero)


def cmd_solve(config: ExperimentConfig) -> int:
    fam = _load_family(config)
    b = _box_for(fam.unknowns, config)
    if config.param_range:
        ranges = {name: list(span) for name, span in config.param_range.items()}
        text = dioph.solvable_set_csv(fam, ranges, b)
        if config.fmt == "json":
            lines = text.strip().split("\n")
            header = lines[0].split(",")
            rows = [dict(zip(header, line.split(","))) for line in lines[1:]]
            _emit(rows, header, config)
        elif config.out is None:
            sys.stdout.write(text)
        else:
            with open(config.out, "w", encoding="utf-8") as fh:
                fh.write(text)
        return EXIT_OK
    report = dioph.solve_in_box(fam, config.params or {}, b)
    rows = [
        dict(zip(report.unknowns, solution)) for solution in report.solutions
    ]
    _emit(rows, list(report.unknowns), config)
    print(
        f"count={report.count} exhausted={_bool(report.exhausted)}",
        file=sys.stderr,
    )
    return EXIT_OK


def cmd_wpoly(config: ExperimentConfig) -> int:
    fam = _load_family(config)
    w_fam = dioph.value_set_polynomial(fam)
    if config.k is not None and config.box is not None:
        b = _box_for(w_fam.unknowns, config)
        values = sorted(dioph.positive_values(w_fam, config.k, b))
        rows = [{"value": v} for v in values]
        _emit(rows, ["value"], config)
        return EXIT_OK
    text = dioph.format_family(w_fam)
    if config.out is None:
        sys.stdout.write(text)
    else:
        with open(config.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    return EXIT_OK


def _load_machine(config: ExperimentConfig) -> codes.CounterMachine:
    if config.machine is None:
        raise DomainError("need --machine")
    with open(config.machine, encoding="utf-8") as fh:
        try:
            return codes.parse_assembly(fh.read())
        except ValueError as exc:
            raise DomainError(str(exc)) from None


def cmd_compile(config: ExperimentConfig) -> int:
    machine = _load_machine(config)
    system = dprm.compile_machine(machine)
    text = dprm.format_system(system)
    if config.out is None:
        sys.stdout.write(text)
    else:
        with open(config.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    print(
        f"unknowns={len(system.unknowns)} equations={len(system.equations)}",
        file=sys.stderr,
    )
    return EXIT_OK


def cmd_witness(config: ExperimentConfig) -> int:
    machine = _load_machine(config)
    if config.input_value is None or config.budget is None:
        raise DomainError("witness needs --input and --budget")
    report = dprm.search_witness(machine, config.input_value, config.budget)
    if report.witness is None:
        raise DomainError(
            f"no halting trace within {report.step_budget} steps "
            "(search exhausted, not a divergence proof)"
        )
    system = dprm.compile_machine(machine)
    text = dprm.format_witness(report.witness, order=system.unknowns)
    if config.out is None:
        sys.stdout.write(text)
    else:
        with open(config.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    return EXIT_OK


def _load_system(config: ExperimentConfig) -> dprm.CompiledSystem:
    if config.system is None:
        raise DomainError("need --system")
    with open(config.system, encoding="utf-8") as fh:
        return dprm.parse_system(fh.read())


def _load_witness(config: ExperimentConfig) -> dprm.Witness:
    if config.witness is None:
        raise DomainError("need --witness")
    with open(config.witness, encoding="utf-8") as fh:
        return dprm.parse_witness(fh.read())


def cmd_verify(config: ExperimentConfig) -> int:
    system = _load_system(config)
    witness = _load_witness(config)
    failing = dprm.first_failing_equation(system, witness)
    if failing is None:
        print("witness verifies: every equation is exactly zero")
        return EXIT_OK
    raise DomainError(f"equation {failing[0]} ({failing[1]}) is violated")


def cmd_decode(config: ExperimentConfig) -> int:
    system = _load_system(config)
    machine = _load_machine(config)
    witness = _load_witness(config)
    trace = dprm.decode_trace(system, machine, witness)
    rows = []
    reg_names = [f"r{r}" for r in range(1, machine.registers + 1)]
    for t in range(trace.steps + 1):
        row: dict[str, object] = {"t": t, "pc": trace.pcs[t]}
        row.update(dict(zip(reg_names, trace.registers[t])))
        rows.append(row)
    _emit(rows, ["t", "pc"] + reg_names, config)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="omegaforge",
        description="halting-measure and equation-family experiments",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--out", help="output path (default stdout)")
        p.add_argument("--format", choices=["csv", "json"], default="csv")

    p = sub.add_parser("enumerate", help="list valid programs")
    p.add_argument("--max-len", type=_positive, required=True)
    common(p)

    p = sub.add_parser("measures", help="tabulate approximants")
    p.add_argument("--schedule")
    p.add_argument("--max-len", type=_positive)
    p.add_argument("--budget", type=_positive)
    p.add_argument("--i-max", type=_positive, required=True)
    common(p)

    p = sub.add_parser("qk", help="threshold-count digit table")
    p.add_argument("--omega", type=_rational)
    p.add_argument("--schedule")
    p.add_argument("--max-len", type=_positive)
    p.add_argument("--budget", type=_positive)
    p.add_argument("--k", type=_positive, required=True, help="max k")
    p.add_argument("--base", type=_positive, default=2)
    common(p)

    p = sub.add_parser("bisect", help="digits via bisection or scan")
    p.add_argument("--omega", type=_rational)
    p.add_argument("--schedule")
    p.add_argument("--max-len", type=_positive)
    p.add_argument("--budget", type=_positive)
    p.add_argument("--k", type=_positive, required=True, help="max k")
    p.add_argument("--mode", choices=["bisect", "scan"], default="bisect")
    common(p)

    p = sub.add_parser("census", help="guess census up to a horizon")
    p.add_argument("--omega", type=_rational)
    p.add_argument("--schedule")
    p.add_argument("--max-len", type=_positive)
    p.add_argument("--budget", type=_positive)
    p.add_argument("--k", type=_positive, required=True)
    p.add_argument("--horizon", type=_positive, required=True)
    common(p)

    p = sub.add_parser("predict-tau", help="structural halting predictions")
    p.add_argument("--max-len", type=_positive, required=True)
    p.add_argument("--n", type=_positive, dest="index")
    common(p)

    p = sub.add_parser("solve", help="boxed brute-force solving")
    p.add_argument("--family", required=True)
    p.add_argument("--params", type=_assignment)
    p.add_argument("--param-range", type=_ranges)
    p.add_argument("--box", type=_ranges, required=True)
    p.add_argument("--allow-zero", action="store_true")
    common(p)

    p = sub.add_parser("wpoly", help="value-set polynomial")
    p.add_argument("--family", required=True)
    p.add_argument("--k", type=_positive)
    p.add_argument("--box", type=_ranges)
    p.add_argument("--allow-zero", action="store_true")
    common(p)

    p = sub.add_parser("compile", help="machine to equation system")
    p.add_argument("--machine", required=True)
    common(p)

    p = sub.add_parser("witness", help="search for a halting witness")
    p.add_argument("--machine", required=True)
    p.add_argument("--input", type=_positive, dest="input_value", required=True)
    p.add_argument("--budget", type=_positive, required=True)
    common(p)

    p = sub.add_parser("verify", help="check a witness against a system")
    p.add_argument("--system", required=True)
    p.add_argument("--witness", required=True)
    common(p)

    p = sub.add_parser("decode", help="witness back to a trace table")
    p.add_argument("--system", required=True)
    p.add_argument("--machine", required=True)
    p.add_argument("--witness", required=True)
    common(p)

    return parser


def _config_from(args: argparse.Namespace) -> ExperimentConfig:
    get = lambda name, default=None: getattr(args, name, default)  # noqa: E731
    pr = get("param_range")
    return ExperimentConfig(
        command=args.command,
        out=get("out"),
        fmt=get("format", "csv"),
        max_len=get("max_len"),
        budget=get("budget"),
        schedule=get("schedule"),
        omega=get("omega"),
        i_max=get("i_max"),
        k=get("k") if args.command in ("census", "wpoly") else None,
        k_max=get("k") if args.command in ("qk", "bisect") else None,
        base=get("base", 2),
        horizon=get("horizon"),
        index=get("index"),
        mode=get("mode", "bisect"),
        family=get("family"),
        params=get("params"),
        param_range={k: range(lo, hi + 1) for k, (lo, hi) in pr.items()} if pr else None,
        box=get("box"),
        allow_zero=get("allow_zero", False),
        machine=get("machine"),
        system=get("system"),
        witness=get("witness"),
        input_value=get("input_value"),
    )


_HANDLERS = {
    "enumerate": cmd_enumerate,
    "measures": cmd_measures,
    "qk": cmd_qk,
    "bisect": cmd_bisect,
    "census": cmd_census,
    "predict-tau": cmd_predict_tau,
    "solve": cmd_solve,
    "wpoly": cmd_wpoly,
    "compile": cmd_compile,
    "witness": cmd_witness,
    "verify": cmd_verify,
    "decode": cmd_decode,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    config = _config_from(args)
    try:
        return _HANDLERS[args.command](config)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except OSError as exc:
        name = getattr(exc, "filename", None)
        print(f"i/o error{f' ({name})' if name else ''}: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
