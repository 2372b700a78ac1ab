"""Compile counter-machine halting into exponential equation systems.

A halting run of s steps is arithmetized positionally in base Q = 2^w: the
per-time control flags of every instruction, the zero/fall-through branch
flags of every DECJZ, and every register's value history become single big
integers (digit streams), tied together by linear flow and update equations
plus the exponential bookkeeping q = 2^w, m = 2^e = Q^(s+1).

Digit discipline is enforced without any binomial-coefficient machinery
(whose auxiliary solution values could never be materialized): every stream
is paired with its time reversal, which satisfies the mirrored flow/update
equations, and products of a forward with a backward stream expose
correlations as one extractable middle digit.  Those correlations pin the
reversal alignment (diagonal sum = visit count) and the DECJZ zero tests
(branch flags never coincide with a nonzero register digit).  Digit sums
are extracted exactly through mod-(q-1) certificates, with w forced large
enough that no genuine sum or convolution coefficient can wrap.

Witnesses built from traces are small (a few times the encoded run) and
verify exactly; boxed searches report exhaustion, never a proof of
divergence.  Uniqueness of solutions is not guaranteed by construction and
is probed only empirically.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import codes
from .dioph import (
    EquationFamily,
    Term,
    evaluate,
    format_terms,
    parse_terms,
    poly_product,
    poly_sum,
    term,
)
from .errors import (
    FamilyFormatError,
    InvalidTrace,
    MissingVariable,
    NonVerifyingWitness,
    UnsupportedInstruction,
)

MAX_COMPILED_REGISTERS = 4
MAX_COMPILED_INSTRUCTIONS = 32
PARAMETER = "a"


@dataclass(frozen=True)
class TraceTable:
    """State rows of a halting run: one row per step plus the final row."""

    steps: int
    pcs: tuple[int, ...]
    registers: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if self.steps < 1:
            raise ValueError("a halting run executes at least one step")
        if len(self.pcs) != self.steps + 1 or len(self.registers) != self.steps + 1:
            raise ValueError("trace needs steps+1 rows")
        widths = {len(row) for row in self.registers}
        if len(widths) != 1:
            raise ValueError("register rows must have uniform arity")


@dataclass
class Witness:
    """Assignment certifying solvability, with its origin recorded."""

    assignment: dict[str, int]
    parameter_value: int
    provenance: str  # "from_trace", "from_search", or "file"


@dataclass
class CompiledSystem:
    """Conjunction of equation families over the single parameter a."""

    unknowns: tuple[str, ...]
    equations: tuple[EquationFamily, ...]
    labels: tuple[str, ...]
    roles: dict[str, str]
    combined: EquationFamily
    machine: codes.CounterMachine | None = None
    _incidence: dict[str, tuple[int, ...]] = field(default_factory=dict, repr=False)

    def equations_touching(self, name: str) -> tuple[int, ...]:
        if not self._incidence:
            incidence: dict[str, list[int]] = {u: [] for u in self.unknowns}
            incidence[PARAMETER] = []
            for idx, eq in enumerate(self.equations):
                for t in eq.terms:
                    for var in t.variables():
                        incidence[var].append(idx)
            self._incidence = {
                k: tuple(sorted(set(v))) for k, v in incidence.items()
            }
        return self._incidence.get(name, ())


@dataclass(frozen=True)
class SearchReport:
    """What a boxed witness search established (never a divergence proof)."""

    witness: Witness | None
    exhausted: bool
    step_budget: int


def build_trace(
    machine: codes.CounterMachine, input_value: int, budget: int
) -> TraceTable | None:
    """Simulate on registers (a, 0, ...); None when the budget runs out."""
    if input_value < 1:
        raise ValueError("inputs are positive integers")
    regs0 = (input_value,) + (0,) * (machine.registers - 1)
    rows, outcome = codes.simulate(machine, regs0, budget)
    if isinstance(outcome, codes.OutOfBudget):
        return None
    return TraceTable(
        steps=outcome.steps,
        pcs=tuple(pc for pc, _ in rows),
        registers=tuple(regs for _, regs in rows),
    )


def _decjz_positions(machine: codes.CounterMachine) -> list[tuple[int, int]]:
    return [
        (pos, ins.register)
        for pos, ins in enumerate(machine.instructions, 1)
        if isinstance(ins, codes.DecJz)
    ]


def _stream_pairs(machine: codes.CounterMachine) -> list[str]:
    names = [f"L{j}" for j in range(1, machine.halt_position + 1)]
    for pos, _ in _decjz_positions(machine):
        names.extend([f"z{pos}", f"f{pos}"])
    return names


def compile_machine(machine: codes.CounterMachine) -> CompiledSystem:
    """Arithmetize the machine's halting predicate over the input parameter."""
    if machine.registers > MAX_COMPILED_REGISTERS:
        raise UnsupportedInstruction(
            f"compiler handles at most {MAX_COMPILED_REGISTERS} registers"
        )
    if len(machine.instructions) > MAX_COMPILED_INSTRUCTIONS:
        raise UnsupportedInstruction(
            f"compiler handles at most {MAX_COMPILED_INSTRUCTIONS} instructions"
        )
    n = len(machine.instructions)
    halt = machine.halt_position
    rho = machine.registers
    decjz = _decjz_positions(machine)
    pairs = _stream_pairs(machine)

    roles: dict[str, str] = {
        "s": "step_count",
        "w": "block_bits",
        "w1": "block_bits_minus_one",
        "q": "block_size",
        "h": "half_block",
        "e": "top_exponent",
        "m": "top_power",
        "u": "repunit",
        "hr1": "headroom_slack",
        "hr2": "program_bound_slack",
    }
    for j in range(1, halt + 1):
        roles[f"L{j}"] = f"control_digits {j}"
        roles[f"L{j}_b"] = f"control_digits_rev {j}"
    for pos, reg in decjz:
        roles[f"z{pos}"] = f"zero_branch_digits {pos}"
        roles[f"z{pos}_b"] = f"zero_branch_digits_rev {pos}"
        roles[f"f{pos}"] = f"fall_through_digits {pos}"
        roles[f"f{pos}_b"] = f"fall_through_digits_rev {pos}"
    for r in range(1, rho + 1):
        roles[f"R{r}"] = f"register_digits r{r}"
        roles[f"R{r}_b"] = f"register_digits_rev r{r}"
        roles[f"F{r}"] = f"register_final r{r}"
        roles[f"ds_R{r}"] = f"register_digit_sum r{r}"
        roles[f"dss_R{r}"] = f"register_digit_sum_slack r{r}"
        roles[f"tq_R{r}"] = f"register_sum_quotient r{r}"
        roles[f"tqb_R{r}"] = f"register_sum_quotient_rev r{r}"
    for x in pairs:
        roles[f"c_{x}"] = f"visit_count {x}"
        roles[f"cs_{x}"] = f"visit_count_slack {x}"
        roles[f"tq_{x}"] = f"digit_sum_quotient {x}"
        roles[f"tqb_{x}"] = f"digit_sum_quotient_rev {x}"
        roles[f"ch_{x}"] = f"correlation_high {x}"
        roles[f"cl_{x}"] = f"correlation_low {x}"
        roles[f"cp_{x}"] = f"correlation_pad {x}"
    for pos, _ in decjz:
        for suffix in ("", "_b"):
            roles[f"zh{pos}{suffix}"] = f"zero_test_high {pos}{suffix}"
            roles[f"zl{pos}{suffix}"] = f"zero_test_low {pos}{suffix}"
            roles[f"zp{pos}{suffix}"] = f"zero_test_pad {pos}{suffix}"

    unknowns = tuple(roles)

    equations: list[EquationFamily] = []
    labels: list[str] = []

    def eq(label: str, terms: list[Term]) -> None:
        equations.append(
            EquationFamily(
                terms=tuple(terms), parameters=(PARAMETER,), unknowns=unknowns
            )
        )
        labels.append(label)

    v = lambda name, exp=1: term(1, {name: exp})  # noqa: E731

    # exponential bookkeeping
    eq("block_bits_successor", [v("w"), term(-1, {"w1": 1}), term(-1)])
    eq("block_size", [v("q"), term(-1, exp_factors={"w": 1})])
    eq("half_block", [v("h"), term(-1, exp_factors={"w1": 1})])
    eq("block_halves", [v("q"), term(-2, {"h": 1})])
    eq("top_exponent", [v("e"), term(-1, {"w": 1, "s": 1}), term(-1, {"w": 1})])
    eq("top_power", [v("m"), term(-1, exp_factors={"e": 1})])
    eq(
        "repunit",
        [term(1, {"q": 1, "u": 1}), term(-1, {"u": 1}), term(-1, {"m": 1}), term(1)],
    )
    # headroom: q = (s+2)(a+s+2) + hr1  and  q = (n+3) + hr2
    eq(
        "headroom",
        [
            v("q"),
            term(-1, {PARAMETER: 1, "s": 1}),
            term(-2, {PARAMETER: 1}),
            term(-1, {"s": 2}),
            term(-4, {"s": 1}),
            term(-4),
            term(-1, {"hr1": 1}),
        ],
    )
    eq("program_bound", [v("q"), term(-1, {"hr2": 1}), term(-(n + 3))])

    # control flow, forward:  L_j = [j=1] + q * (sum of inflowing streams)
    inflows: dict[int, list[str]] = {j: [] for j in range(1, halt + 1)}
    for pos, ins in enumerate(machine.instructions, 1):
        if isinstance(ins, codes.Inc):
            inflows[pos + 1].append(f"L{pos}")
        elif isinstance(ins, codes.DecJz):
            inflows[ins.target].append(f"z{pos}")
            inflows[pos + 1].append(f"f{pos}")
        else:
            inflows[halt].append(f"L{pos}")
    for j in range(1, halt + 1):
        terms = [v(f"L{j}")]
        if j == 1:
            terms.append(term(-1))
        terms.extend(term(-1, {"q": 1, src: 1}) for src in inflows[j])
        eq(f"flow_fwd_{j}", terms)
    eq("halt_anchor_fwd", [term(1, {"q": 1, f"L{halt}": 1}), term(-1, {"m": 1})])
    for pos, _ in decjz:
        eq(
            f"branch_split_fwd_{pos}",
            [v(f"z{pos}"), v(f"f{pos}"), term(-1, {f"L{pos}": 1})],
        )
    eq(
        "partition_fwd",
        [v(f"L{j}") for j in range(1, halt + 1)] + [term(-1, {"u": 1})],
    )

    # control flow, backward:  q * L~_j = [j=1] * m + sum of inflowing streams
    for j in range(1, halt + 1):
        terms = [term(1, {"q": 1, f"L{j}_b": 1})]
        if j == 1:
            terms.append(term(-1, {"m": 1}))
        terms.extend(term(-1, {f"{src}_b": 1}) for src in inflows[j])
        eq(f"flow_bwd_{j}", terms)
    eq("halt_anchor_bwd", [v(f"L{halt}_b"), term(-1)])
    for pos, _ in decjz:
        eq(
            f"branch_split_bwd_{pos}",
            [v(f"z{pos}_b"), v(f"f{pos}_b"), term(-1, {f"L{pos}_b": 1})],
        )
    eq(
        "partition_bwd",
        [v(f"L{j}_b") for j in range(1, halt + 1)] + [term(-1, {"u": 1})],
    )

    # register histories
    for r in range(1, rho + 1):
        inc_streams = [
            f"L{pos}"
            for pos, ins in enumerate(machine.instructions, 1)
            if isinstance(ins, codes.Inc) and ins.register == r
        ]
        dec_streams = [f"f{pos}" for pos, reg in decjz if reg == r]
        # forward: R + m*F + q*DEC = a_r + q*R + q*INC
        terms = [v(f"R{r}"), term(1, {"m": 1, f"F{r}": 1})]
        terms.extend(term(1, {"q": 1, d: 1}) for d in dec_streams)
        if r == 1:
            terms.append(term(-1, {PARAMETER: 1}))
        terms.append(term(-1, {"q": 1, f"R{r}": 1}))
        terms.extend(term(-1, {"q": 1, i: 1}) for i in inc_streams)
        eq(f"register_fwd_r{r}", terms)
        # backward: q*R~ + F + DEC~ = a_r*m + R~ + INC~
        terms = [term(1, {"q": 1, f"R{r}_b": 1}), v(f"F{r}")]
        terms.extend(term(1, {f"{d}_b": 1}) for d in dec_streams)
        if r == 1:
            terms.append(term(-1, {PARAMETER: 1, "m": 1}))
        terms.append(term(-1, {f"R{r}_b": 1}))
        terms.extend(term(-1, {f"{i}_b": 1}) for i in inc_streams)
        eq(f"register_bwd_r{r}", terms)

    # digit-sum certificates and reversal-alignment correlations
    for x in pairs:
        eq(
            f"digit_sum_fwd_{x}",
            [
                v(x),
                term(-1, {f"c_{x}": 1}),
                term(-1, {"q": 1, f"tq_{x}": 1}),
                term(1, {f"tq_{x}": 1}),
            ],
        )
        eq(
            f"digit_sum_bwd_{x}",
            [
                v(f"{x}_b"),
                term(-1, {f"c_{x}": 1}),
                term(-1, {"q": 1, f"tqb_{x}": 1}),
                term(1, {f"tqb_{x}": 1}),
            ],
        )
        eq(
            f"count_bound_{x}",
            [v(f"c_{x}"), v(f"cs_{x}"), term(-1, {"q": 1}), term(2)],
        )
        eq(
            f"alignment_{x}",
            [
                term(1, {"q": 1, x: 1, f"{x}_b": 1}),
                term(-1, {"q": 1, f"ch_{x}": 1, "m": 1}),
                term(-1, {f"c_{x}": 1, "m": 1}),
                term(-1, {"q": 1, f"cl_{x}": 1}),
            ],
        )
        eq(
            f"alignment_pad_{x}",
            [
                term(1, {"q": 1, f"cl_{x}": 1}),
                term(1, {"q": 1, f"cp_{x}": 1}),
                v("q"),
                term(-1, {"m": 1}),
            ],
        )
    eq(
        "visit_total",
        [v(f"c_L{j}") for j in range(1, halt + 1)]
        + [term(-1, {"s": 1}), term(-1)],
    )
    for r in range(1, rho + 1):
        eq(
            f"register_sum_fwd_r{r}",
            [
                v(f"R{r}"),
                term(-1, {f"ds_R{r}": 1}),
                term(-1, {"q": 1, f"tq_R{r}": 1}),
                term(1, {f"tq_R{r}": 1}),
            ],
        )
        eq(
            f"register_sum_bwd_r{r}",
            [
                v(f"R{r}_b"),
                term(-1, {f"ds_R{r}": 1}),
                term(-1, {"q": 1, f"tqb_R{r}": 1}),
                term(1, {f"tqb_R{r}": 1}),
            ],
        )
        eq(
            f"register_sum_bound_r{r}",
            [v(f"ds_R{r}"), v(f"dss_R{r}"), term(-1, {"q": 1}), term(2)],
        )

    # zero tests: branch flags never meet a nonzero register digit
    for pos, reg in decjz:
        eq(
            f"zero_test_fwd_{pos}",
            [
                term(1, {f"z{pos}": 1, f"R{reg}_b": 1}),
                term(-1, {f"zh{pos}": 1, "m": 1}),
                term(-1, {f"zl{pos}": 1}),
            ],
        )
        eq(
            f"zero_test_pad_fwd_{pos}",
            [
                term(1, {"q": 1, f"zl{pos}": 1}),
                term(1, {"q": 1, f"zp{pos}": 1}),
                v("q"),
                term(-1, {"m": 1}),
            ],
        )
        eq(
            f"zero_test_bwd_{pos}",
            [
                term(1, {f"z{pos}_b": 1, f"R{reg}": 1}),
                term(-1, {f"zh{pos}_b": 1, "m": 1}),
                term(-1, {f"zl{pos}_b": 1}),
            ],
        )
        eq(
            f"zero_test_pad_bwd_{pos}",
            [
                term(1, {"q": 1, f"zl{pos}_b": 1}),
                term(1, {"q": 1, f"zp{pos}_b": 1}),
                v("q"),
                term(-1, {"m": 1}),
            ],
        )

    system = CompiledSystem(
        unknowns=unknowns,
        equations=tuple(equations),
        labels=tuple(labels),
        roles=roles,
        combined=combine_families(equations, unknowns),
        machine=machine,
    )
    return system


def combine_families(
    families: list[EquationFamily] | tuple[EquationFamily, ...],
    unknowns: tuple[str, ...],
) -> EquationFamily:
    """Sum of squares: zero exactly when every member is zero."""
    squares = [poly_product(f.terms, f.terms) for f in families]
    return EquationFamily(
        terms=poly_sum(*squares) if squares else (),
        parameters=(PARAMETER,),
        unknowns=unknowns,
    )


def combine(system: CompiledSystem) -> EquationFamily:
    return combine_families(system.equations, system.unknowns)


def _reverse_stream(digit_rows: list[int], base: int) -> int:
    value = 0
    for d in digit_rows:
        value = value * base + d
    return value


def witness_from_trace(
    system: CompiledSystem,
    machine: codes.CounterMachine,
    input_value: int,
    trace: TraceTable,
) -> Witness:
    """Positional encoding of the trace columns, base 2^w, w sized to fit."""
    replay = build_trace(machine, input_value, trace.steps + 1)
    if replay != trace:
        raise InvalidTrace("trace does not replay on this machine and input")
    s = trace.steps
    n = len(machine.instructions)
    halt = machine.halt_position
    rho = machine.registers
    decjz = _decjz_positions(machine)

    need = max((s + 2) * (input_value + s + 2), n + 3)
    w = max(2, need.bit_length())
    q = 1 << w
    e = w * (s + 1)
    m = 1 << e
    top = m // q  # Q^s
    asg: dict[str, int] = {
        "s": s,
        "w": w,
        "w1": w - 1,
        "q": q,
        "h": q // 2,
        "e": e,
        "m": m,
        "u": (m - 1) // (q - 1),
        "hr1": q - (s + 2) * (input_value + s + 2),
        "hr2": q - (n + 3),
    }

    def fwd(digits: list[int]) -> int:
        return sum(d * q**t for t, d in enumerate(digits))

    streams: dict[str, list[int]] = {}
    for j in range(1, halt + 1):
        streams[f"L{j}"] = [1 if pc == j else 0 for pc in trace.pcs]
    for pos, reg in decjz:
        flags = streams[f"L{pos}"]
        zero = [
            1 if flags[t] and trace.registers[t][reg - 1] == 0 else 0
            for t in range(s + 1)
        ]
        streams[f"z{pos}"] = zero
        streams[f"f{pos}"] = [flags[t] - zero[t] for t in range(s + 1)]
    reg_digits = {
        r: [row[r - 1] for row in trace.registers] for r in range(1, rho + 1)
    }

    for name, digits in streams.items():
        asg[name] = fwd(digits)
        asg[f"{name}_b"] = _reverse_stream(digits, q)
    for r in range(1, rho + 1):
        asg[f"R{r}"] = fwd(reg_digits[r])
        asg[f"R{r}_b"] = _reverse_stream(reg_digits[r], q)
        asg[f"F{r}"] = reg_digits[r][-1]
        total = sum(reg_digits[r])
        asg[f"ds_R{r}"] = total
        asg[f"dss_R{r}"] = q - 2 - total
        asg[f"tq_R{r}"] = (asg[f"R{r}"] - total) // (q - 1)
        asg[f"tqb_R{r}"] = (asg[f"R{r}_b"] - total) // (q - 1)

    for x in streams:
        count = sum(streams[x])
        asg[f"c_{x}"] = count
        asg[f"cs_{x}"] = q - 2 - count
        asg[f"tq_{x}"] = (asg[x] - count) // (q - 1)
        asg[f"tqb_{x}"] = (asg[f"{x}_b"] - count) // (q - 1)
        product = asg[x] * asg[f"{x}_b"]
        high, rest = divmod(product, m)
        middle, low = divmod(rest, top)
        if middle != count:
            raise InvalidTrace(f"correlation digit of {x} is {middle}, not {count}")
        asg[f"ch_{x}"] = high
        asg[f"cl_{x}"] = low
        asg[f"cp_{x}"] = top - low - 1

    for pos, reg in decjz:
        for suffix, left, right in (
            ("", f"z{pos}", f"R{reg}_b"),
            ("_b", f"z{pos}_b", f"R{reg}"),
        ):
            product = asg[left] * asg[right]
            high, rest = divmod(product, m)
            middle, low = divmod(rest, top)
            if middle != 0:
                raise InvalidTrace(
                    f"zero test {pos}{suffix} sees digit {middle} at a branch flag"
                )
            asg[f"zh{pos}{suffix}"] = high
            asg[f"zl{pos}{suffix}"] = low
            asg[f"zp{pos}{suffix}"] = top - low - 1

    witness = Witness(assignment=asg, parameter_value=input_value, provenance="from_trace")
    failing = first_failing_equation(system, witness)
    if failing is not None:
        raise InvalidTrace(f"constructed witness violates {failing[1]}")
    return witness


def _full_assignment(system: CompiledSystem, witness: Witness) -> dict[str, int]:
    missing = set(system.unknowns) - set(witness.assignment)
    if missing:
        raise MissingVariable(f"witness lacks {sorted(missing)}")
    merged = dict(witness.assignment)
    merged[PARAMETER] = witness.parameter_value
    return merged


def verify_witness(system: CompiledSystem, witness: Witness) -> bool:
    """True iff every equation evaluates to exactly zero."""
    return first_failing_equation(system, witness) is None


def first_failing_equation(
    system: CompiledSystem, witness: Witness, only: tuple[int, ...] | None = None
) -> tuple[int, str] | None:
    assignment = _full_assignment(system, witness)
    indices = range(len(system.equations)) if only is None else only
    for idx in indices:
        if evaluate(system.equations[idx], assignment) != 0:
            return idx, system.labels[idx]
    return None


def decode_trace(
    system: CompiledSystem, machine: codes.CounterMachine, witness: Witness
) -> TraceTable:
    """Read the digit streams back into rows; re-simulation must agree."""
    if not verify_witness(system, witness):
        raise NonVerifyingWitness("witness does not satisfy the system")
    asg = witness.assignment
    s, q = asg["s"], asg["q"]
    halt = machine.halt_position

    def digits(value: int) -> list[int]:
        out = []
        for _ in range(s + 1):
            value, d = divmod(value, q)
            out.append(d)
        if value != 0:
            raise InvalidTrace("stream has digits beyond the final row")
        return out

    control = {j: digits(asg[f"L{j}"]) for j in range(1, halt + 1)}
    pcs = []
    for t in range(s + 1):
        hits = [j for j in control if control[j][t] == 1]
        if len(hits) != 1 or any(control[j][t] not in (0, 1) for j in control):
            raise InvalidTrace(f"control digits at time {t} are not a unit flag")
        pcs.append(hits[0])
    registers = []
    reg_streams = [digits(asg[f"R{r}"]) for r in range(1, machine.registers + 1)]
    for t in range(s + 1):
        registers.append(tuple(stream[t] for stream in reg_streams))
    decoded = TraceTable(steps=s, pcs=tuple(pcs), registers=tuple(registers))
    replay = build_trace(machine, witness.parameter_value, s + 1)
    if replay != decoded:
        raise InvalidTrace("decoded rows do not follow from the machine semantics")
    return decoded


def search_witness(
    machine: codes.CounterMachine, input_value: int, step_budget: int
) -> SearchReport:
    """Boxed search over candidate step counts via budgeted simulation.

    Finding nothing means the box is exhausted, not that the machine
    diverges.
    """
    trace = build_trace(machine, input_value, step_budget)
    if trace is None:
        return SearchReport(witness=None, exhausted=True, step_budget=step_budget)
    system = compile_machine(machine)
    witness = witness_from_trace(system, machine, input_value, trace)
    witness.provenance = "from_search"
    return SearchReport(witness=witness, exhausted=True, step_budget=step_budget)


# --- serialization -----------------------------------------------------------

def format_system(system: CompiledSystem) -> str:
    lines = [f"params: {PARAMETER}"]
    lines.append("unknowns: " + " ".join(system.unknowns))
    for name in system.unknowns:
        lines.append(f"role: {name} {system.roles[name]}")
    for label, eqf in zip(system.labels, system.equations):
        lines.append(f"equation {label}: {format_terms(eqf.terms)}")
    return "\n".join(lines) + "\n"


def parse_system(text: str) -> CompiledSystem:
    unknowns: tuple[str, ...] = ()
    roles: dict[str, str] = {}
    equations: list[EquationFamily] = []
    labels: list[str] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("params:"):
            declared = tuple(line.split(":", 1)[1].split())
            if declared != (PARAMETER,):
                raise FamilyFormatError(
                    f"line {lineno}: compiled systems have the single parameter a"
                )
        elif line.startswith("unknowns:"):
            unknowns = tuple(line.split(":", 1)[1].split())
        elif line.startswith("role:"):
            parts = line.split(None, 2)
            if len(parts) < 3:
                raise FamilyFormatError(f"line {lineno}: bad role line")
            roles[parts[1]] = parts[2]
        elif line.startswith("equation"):
            head, _, body = line.partition(":")
            label = head.split(None, 1)[1].strip() if " " in head else ""
            if not label or not body.strip():
                raise FamilyFormatError(f"line {lineno}: bad equation line")
            try:
                equations.append(
                    EquationFamily(
                        terms=parse_terms(body),
                        parameters=(PARAMETER,),
                        unknowns=unknowns,
                    )
                )
            except ValueError as exc:
                raise FamilyFormatError(f"line {lineno}: {exc}") from None
            labels.append(label)
        else:
            raise FamilyFormatError(f"line {lineno}: unrecognized line {line!r}")
    if not unknowns or not equations:
        raise FamilyFormatError("system file needs unknowns and equations")
    return CompiledSystem(
        unknowns=unknowns,
        equations=tuple(equations),
        labels=tuple(labels),
        roles=roles,
        combined=combine_families(equations, unknowns),
        machine=None,
    )


def format_witness(witness: Witness, order: tuple[str, ...] | None = None) -> str:
    """`name = value` lines; the parameter a leads."""
    lines = [f"{PARAMETER} = {witness.parameter_value}"]
    names = order if order is not None else tuple(witness.assignment)
    for name in names:
        lines.append(f"{name} = {witness.assignment[name]}")
    return "\n".join(lines) + "\n"


def parse_witness(text: str) -> Witness:
    assignment: dict[str, int] = {}
    parameter_value: int | None = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        name, sep, value = line.partition("=")
        if not sep:
            raise FamilyFormatError(f"line {lineno}: expected `name = value`")
        name = name.strip()
        try:
            number = int(value.strip())
        except ValueError:
            raise FamilyFormatError(f"line {lineno}: bad integer {value!r}") from None
        if name == PARAMETER:
            parameter_value = number
        else:
            assignment[name] = number
    if parameter_value is None:
        raise FamilyFormatError(f"witness file lacks the parameter {PARAMETER}")
    return Witness(
        assignment=assignment, parameter_value=parameter_value, provenance="file"
    )
