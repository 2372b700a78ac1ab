"""Self-delimiting program codes and the toy counter-machine VM.

The program alphabet is a prefix-free binary code: a unary length header
(L ones, then a zero) followed by an L-bit body.  The body starts with a
4-bit arity nibble (register count 1..15) followed by fixed-width
instructions:

    opcode 2 bits    00 = INC, 01 = DECJZ, 10 = HALT
    register field   ceil(log2(arity + 1)) bits; INC/DECJZ hold the 1-based
                     register index, HALT holds 0
    target field     DECJZ only: 8 bits, absolute 1-based instruction index
                     (the one-past-end position n+1 is a legal target)

Any body that does not parse exactly is simply not a program.  All
operations here are pure; nothing shares mutable state.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Iterable, Iterator

from .errors import EncodingOverflow, MalformedCode

ARITY_BITS = 4
TARGET_BITS = 8
MAX_REGISTERS = 15
MAX_TARGET = (1 << TARGET_BITS) - 1
# arity nibble + shortest instruction (HALT at arity 1: 2 + 1 bits)
MIN_BODY_BITS = ARITY_BITS + 3
MIN_CODE_BITS = 2 * MIN_BODY_BITS + 1


@functools.total_ordering
@dataclass(frozen=True)
class Bitstring:
    """Finite 0/1 string ordered lexically-by-length (shorter first)."""

    bits: str = ""

    def __post_init__(self) -> None:
        if self.bits.strip("01") != "":
            raise ValueError(f"not a bitstring: {self.bits!r}")

    def __len__(self) -> int:
        return len(self.bits)

    def __str__(self) -> str:
        return self.bits

    def __lt__(self, other: "Bitstring") -> bool:
        return (len(self.bits), self.bits) < (len(other.bits), other.bits)

    def __iter__(self) -> Iterator[int]:
        return (int(c) for c in self.bits)

    def is_proper_prefix_of(self, other: "Bitstring") -> bool:
        return len(self.bits) < len(other.bits) and other.bits.startswith(self.bits)

    def to_int(self) -> int:
        """Value when read as a base-2 numeral (empty string reads as 0)."""
        return int(self.bits, 2) if self.bits else 0

    @classmethod
    def from_int(cls, value: int) -> "Bitstring":
        if value < 0:
            raise ValueError("bitstrings encode nonnegative values")
        return cls(format(value, "b"))


@dataclass(frozen=True)
class Inc:
    register: int


@dataclass(frozen=True)
class DecJz:
    register: int
    target: int


@dataclass(frozen=True)
class Halt:
    pass


Instruction = Inc | DecJz | Halt


@dataclass(frozen=True)
class CounterMachine:
    """INC/DECJZ/HALT machine; instructions are 1-indexed, entry point 1.

    DECJZ r t: if register r is zero jump to t, else decrement r and fall
    through.  Control reaching the one-past-end position n+1 halts the run,
    as does executing HALT (which consumes a step).
    """

    instructions: tuple[Instruction, ...]
    registers: int = 1

    def __post_init__(self) -> None:
        if not self.instructions:
            raise ValueError("machine needs at least one instruction")
        if self.registers < 1:
            raise ValueError("register count must be >= 1")
        for pos, ins in enumerate(self.instructions, 1):
            if isinstance(ins, (Inc, DecJz)):
                if not 1 <= ins.register <= self.registers:
                    raise ValueError(
                        f"instruction {pos} references register {ins.register} "
                        f"outside 1..{self.registers}"
                    )
            if isinstance(ins, DecJz):
                if not 1 <= ins.target <= self.halt_position:
                    raise ValueError(
                        f"instruction {pos} jumps to {ins.target} outside "
                        f"1..{self.halt_position}"
                    )

    @property
    def halt_position(self) -> int:
        return len(self.instructions) + 1


@dataclass(frozen=True)
class ProgramCode:
    """A valid self-delimiting code word paired with its decoded machine."""

    code: Bitstring
    machine: CounterMachine

    @property
    def header(self) -> Bitstring:
        body_len = (len(self.code) - 1) // 2
        return Bitstring(self.code.bits[: body_len + 1])

    @property
    def body(self) -> Bitstring:
        body_len = (len(self.code) - 1) // 2
        return Bitstring(self.code.bits[body_len + 1 :])


@dataclass(frozen=True)
class Halted:
    steps: int
    output: Bitstring


@dataclass(frozen=True)
class OutOfBudget:
    budget: int


RunOutcome = Halted | OutOfBudget


def register_field_bits(arity: int) -> int:
    """Width of the register field: ceil(log2(arity+1))."""
    return arity.bit_length()


def encode(machine: CounterMachine) -> ProgramCode:
    """Encode a machine as its (unique) self-delimiting code word."""
    if machine.registers > MAX_REGISTERS:
        raise EncodingOverflow(
            f"{machine.registers} registers exceed the {MAX_REGISTERS}-register nibble"
        )
    width = register_field_bits(machine.registers)
    pieces = [format(machine.registers, f"0{ARITY_BITS}b")]
    for ins in machine.instructions:
        if isinstance(ins, Inc):
            pieces.append("00" + format(ins.register, f"0{width}b"))
        elif isinstance(ins, DecJz):
            if ins.target > MAX_TARGET:
                raise EncodingOverflow(
                    f"jump target {ins.target} exceeds the {TARGET_BITS}-bit field"
                )
            pieces.append(
                "01" + format(ins.register, f"0{width}b") + format(ins.target, f"0{TARGET_BITS}b")
            )
        else:
            pieces.append("10" + "0" * width)
    body = "".join(pieces)
    code = Bitstring("1" * len(body) + "0" + body)
    return ProgramCode(code=code, machine=machine)


def _parse_body(body: str) -> CounterMachine:
    if len(body) < ARITY_BITS:
        raise MalformedCode("body shorter than the arity nibble")
    arity = int(body[:ARITY_BITS], 2)
    if arity == 0:
        raise MalformedCode("arity nibble is zero")
    width = register_field_bits(arity)
    pos = ARITY_BITS
    instructions: list[Instruction] = []
    while pos < len(body):
        opcode = body[pos : pos + 2]
        if len(opcode) < 2:
            raise MalformedCode("truncated opcode")
        pos += 2
        reg_bits = body[pos : pos + width]
        if len(reg_bits) < width:
            raise MalformedCode("truncated register field")
        pos += width
        reg = int(reg_bits, 2)
        if opcode == "00":
            if not 1 <= reg <= arity:
                raise MalformedCode(f"INC register {reg} outside 1..{arity}")
            instructions.append(Inc(reg))
        elif opcode == "01":
            if not 1 <= reg <= arity:
                raise MalformedCode(f"DECJZ register {reg} outside 1..{arity}")
            target_bits = body[pos : pos + TARGET_BITS]
            if len(target_bits) < TARGET_BITS:
                raise MalformedCode("truncated target field")
            pos += TARGET_BITS
            instructions.append(DecJz(reg, int(target_bits, 2)))
        elif opcode == "10":
            if reg != 0:
                raise MalformedCode("HALT register field must be zero")
            instructions.append(Halt())
        else:
            raise MalformedCode(f"opcode {opcode} undefined")
    if not instructions:
        raise MalformedCode("body declares no instructions")
    limit = len(instructions) + 1
    for ins in instructions:
        if isinstance(ins, DecJz) and not 1 <= ins.target <= limit:
            raise MalformedCode(f"jump target {ins.target} outside 1..{limit}")
    return CounterMachine(instructions=tuple(instructions), registers=arity)


def decode(bits: Bitstring | str) -> CounterMachine:
    """Inverse of encode; raises MalformedCode on anything else."""
    s = bits.bits if isinstance(bits, Bitstring) else str(bits)
    if s.strip("01") != "":
        raise MalformedCode(f"not a bitstring: {s!r}")
    zero = s.find("0")
    if zero < 0:
        raise MalformedCode("header never terminates")
    body = s[zero + 1 :]
    if len(body) != zero:
        raise MalformedCode(f"header declares {zero} body bits, found {len(body)}")
    return _parse_body(body)


@functools.lru_cache(maxsize=16)
def enumerate_programs(max_len: int) -> tuple[ProgramCode, ...]:
    """All valid codes of total length <= max_len, lexical-by-length.

    Valid codes have odd total length 2L+1; for each body length L every
    candidate body is tried through the decoder, which keeps the order
    lexicographic within a length class.
    """
    if max_len < 1:
        raise ValueError("max_len must be >= 1")
    found: list[ProgramCode] = []
    for body_len in range(MIN_BODY_BITS, (max_len - 1) // 2 + 1):
        header = "1" * body_len + "0"
        for value in range(1 << body_len):
            body = format(value, f"0{body_len}b")
            try:
                machine = _parse_body(body)
            except MalformedCode:
                continue
            found.append(ProgramCode(code=Bitstring(header + body), machine=machine))
    return tuple(found)


def is_prefix_free(codes: Iterable[Bitstring | str]) -> bool:
    """True iff no element is a proper prefix of another."""
    words = sorted(
        {c.bits if isinstance(c, Bitstring) else str(c) for c in codes}, key=len
    )
    seen: set[str] = set()
    for word in words:
        for cut in range(len(word)):
            if word[:cut] in seen:
                return False
        seen.add(word)
    return True


def initial_registers(machine: CounterMachine, input_bits: Bitstring) -> tuple[int, ...]:
    """Blank tape for empty input; otherwise register 1 holds value(bits)+1."""
    regs = [0] * machine.registers
    if len(input_bits) > 0:
        regs[0] = input_bits.to_int() + 1
    return tuple(regs)


def simulate(
    machine: CounterMachine, registers: tuple[int, ...], budget: int
) -> tuple[list[tuple[int, tuple[int, ...]]], RunOutcome]:
    """Step the machine; returns the (pc, registers) rows and the outcome.

    Rows hold the state before each executed step plus, on halting runs, the
    final state at the halt position.  One instruction is one step and HALT
    consumes a step.
    """
    if budget < 1:
        raise ValueError("budget must be >= 1")
    if len(registers) != machine.registers:
        raise ValueError("initial register vector has the wrong arity")
    halt_pos = machine.halt_position
    pc = 1
    regs = list(registers)
    rows = [(pc, tuple(regs))]
    steps = 0
    while pc != halt_pos:
        if steps == budget:
            return rows, OutOfBudget(budget)
        ins = machine.instructions[pc - 1]
        if isinstance(ins, Inc):
            regs[ins.register - 1] += 1
            pc += 1
        elif isinstance(ins, DecJz):
            if regs[ins.register - 1] == 0:
                pc = ins.target
            else:
                regs[ins.register - 1] -= 1
                pc += 1
        else:
            pc = halt_pos
        steps += 1
        rows.append((pc, tuple(regs)))
    output = Bitstring(format(regs[0], "b"))
    return rows, Halted(steps=steps, output=output)


def run(
    machine: CounterMachine, input_bits: Bitstring = Bitstring(""), budget: int = 1
) -> RunOutcome:
    """Budgeted deterministic run; OutOfBudget is a value, not an error."""
    _, outcome = simulate(machine, initial_registers(machine, input_bits), budget)
    return outcome


def provably_halts_structurally(machine: CounterMachine) -> bool:
    """True iff the instruction control-flow graph is acyclic.

    Acyclic control flow bounds every run by the instruction count, so a
    True answer certifies halting on every input.
    """
    n = len(machine.instructions)
    successors: list[list[int]] = []
    for pos, ins in enumerate(machine.instructions, 1):
        if isinstance(ins, Inc):
            successors.append([pos + 1])
        elif isinstance(ins, DecJz):
            successors.append([ins.target, pos + 1])
        else:
            successors.append([])
    state = [0] * (n + 2)  # 0 unvisited, 1 on stack, 2 done
    for start in range(1, n + 1):
        if state[start]:
            continue
        stack: list[tuple[int, int]] = [(start, 0)]
        state[start] = 1
        while stack:
            node, idx = stack[-1]
            succ = successors[node - 1] if node <= n else []
            if idx < len(succ):
                stack[-1] = (node, idx + 1)
                nxt = succ[idx]
                if nxt > n:
                    continue
                if state[nxt] == 1:
                    return False
                if state[nxt] == 0:
                    state[nxt] = 1
                    stack.append((nxt, 0))
            else:
                state[node] = 2
                stack.pop()
    return True


def parse_assembly(text: str) -> CounterMachine:
    """Parse the one-instruction-per-line text form.

    Lines look like `L1: DECJZ r2 L4`, `INC r1`, `HALT`; labels are optional
    `L<n>:` prefixes and a trailing label-only line may name the one-past-end
    halt position.  The register count is the largest register referenced.
    """
    labels: dict[str, int] = {}
    bodies: list[tuple[int, str]] = []
    position = 1
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        while line.split(":", 1)[0].strip().startswith("L") and ":" in line:
            label, _, rest = line.partition(":")
            label = label.strip()
            if not label[1:].isdigit():
                break
            if label in labels:
                raise ValueError(f"line {lineno}: duplicate label {label}")
            labels[label] = position
            line = rest.strip()
        if line:
            bodies.append((lineno, line))
            position += 1
    instructions: list[Instruction] = []
    max_register = 1

    def reg_of(token: str, lineno: int) -> int:
        if not token.startswith("r") or not token[1:].isdigit() or int(token[1:]) < 1:
            raise ValueError(f"line {lineno}: bad register {token!r}")
        return int(token[1:])

    for lineno, line in bodies:
        parts = line.split()
        op = parts[0].upper()
        if op == "INC" and len(parts) == 2:
            reg = reg_of(parts[1], lineno)
            instructions.append(Inc(reg))
        elif op == "DECJZ" and len(parts) == 3:
            reg = reg_of(parts[1], lineno)
            if parts[2] not in labels:
                raise ValueError(f"line {lineno}: unknown label {parts[2]!r}")
            instructions.append(DecJz(reg, labels[parts[2]]))
        elif op == "HALT" and len(parts) == 1:
            instructions.append(Halt())
        else:
            raise ValueError(f"line {lineno}: cannot parse {line!r}")
        if isinstance(instructions[-1], (Inc, DecJz)):
            max_register = max(max_register, instructions[-1].register)
    if not instructions:
        raise ValueError("no instructions")
    return CounterMachine(instructions=tuple(instructions), registers=max_register)


def format_assembly(machine: CounterMachine) -> str:
    """Inverse-ish of parse_assembly (register count may widen on reparse)."""
    targeted = {
        ins.target for ins in machine.instructions if isinstance(ins, DecJz)
    }
    lines = []
    for pos, ins in enumerate(machine.instructions, 1):
        prefix = f"L{pos}: " if pos in targeted else ""
        if isinstance(ins, Inc):
            lines.append(f"{prefix}INC r{ins.register}")
        elif isinstance(ins, DecJz):
            lines.append(f"{prefix}DECJZ r{ins.register} L{ins.target}")
        else:
            lines.append(f"{prefix}HALT")
    if machine.halt_position in targeted:
        lines.append(f"L{machine.halt_position}:")
    return "\n".join(lines) + "\n"
