"""Exact halting measures and digit expansions.

Everything here is exact rational arithmetic on top of fractions.Fraction;
there is no floating point anywhere because the downstream parity results
do not survive rounding.  A HaltingSchedule is a closed, finite universe of
programs: synthetic schedules are taken as ground truth for every horizon,
while vm-sourced schedules are only decided up to their simulation budget
and refuse questions beyond it.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from . import codes
from .errors import HorizonUncovered, KraftViolation, ScheduleFormatError

ExactRational = Fraction


def format_rational(x: Fraction) -> str:
    """Wire format <numerator>/<denominator>, always with the slash."""
    return f"{x.numerator}/{x.denominator}"


def parse_rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ScheduleFormatError(f"bad rational {text!r}: {exc}") from None


@dataclass(frozen=True)
class ScheduleEntry:
    index: int
    code_length: int
    halts: bool
    halt_step: int | None = None

    def __post_init__(self) -> None:
        if self.index < 1 or self.code_length < 1:
            raise ValueError("index and code_length must be positive")
        if self.halts and (self.halt_step is None or self.halt_step < 1):
            raise ValueError("halting entries need a positive halt_step")
        if not self.halts and self.halt_step is not None:
            raise ValueError("diverging entries must not carry a halt_step")


@dataclass(frozen=True)
class ScheduleSource:
    kind: str  # "synthetic" or "vm"
    max_len: int | None = None
    budget: int | None = None

    def __post_init__(self) -> None:
        if self.kind not in ("synthetic", "vm"):
            raise ValueError(f"unknown schedule source {self.kind!r}")
        if self.kind == "vm" and (self.max_len is None or self.budget is None):
            raise ValueError("vm sources carry max_len and budget")


SYNTHETIC = ScheduleSource("synthetic")


@dataclass(frozen=True)
class HaltingSchedule:
    """Ground-truth halting data for a finite universe of programs."""

    entries: tuple[ScheduleEntry, ...]
    source: ScheduleSource = SYNTHETIC

    def __post_init__(self) -> None:
        indices = [e.index for e in self.entries]
        if any(b <= a for a, b in zip(indices, indices[1:])):
            raise ValueError("entry indices must be strictly increasing")

    @property
    def max_index(self) -> int:
        return self.entries[-1].index if self.entries else 0

    def decision_budget(self) -> int | None:
        """Horizon up to which halting is decided; None means fully decided."""
        return self.source.budget if self.source.kind == "vm" else None

    def _check_decided(self, i: int) -> None:
        budget = self.decision_budget()
        if budget is not None and i > budget:
            raise HorizonUncovered(
                f"vm schedule decides halting only up to budget {budget}, asked {i}"
            )

    def _check_index_coverage(self, i: int) -> None:
        present = {e.index for e in self.entries}
        for n in range(1, min(i, self.max_index) + 1):
            if n not in present:
                raise HorizonUncovered(f"schedule lacks index {n} <= horizon {i}")

    def kraft_sum(self) -> Fraction:
        return sum(
            (Fraction(1, 2**e.code_length) for e in self.entries), Fraction(0)
        )

    def _check_kraft(self) -> None:
        if self.kraft_sum() > 1:
            raise KraftViolation(
                f"Kraft sum {format_rational(self.kraft_sum())} exceeds 1"
            )

    def tau_horizon(self) -> int:
        """Smallest i at which tau_i attains tau_exact."""
        steps = [max(e.index, e.halt_step) for e in self.entries if e.halts]
        return max(steps, default=1)

    def omega_horizon(self) -> int:
        """Smallest i at which omega_i attains omega_exact."""
        steps = [max(e.code_length, e.halt_step) for e in self.entries if e.halts]
        return max(steps, default=1)


def tau_exact(schedule: HaltingSchedule) -> Fraction:
    """Sum of 2^-n over halting indices n; needs a gap-free schedule."""
    schedule._check_index_coverage(schedule.max_index)
    return sum(
        (Fraction(1, 2**e.index) for e in schedule.entries if e.halts), Fraction(0)
    )


def tau_i(schedule: HaltingSchedule, i: int) -> Fraction:
    """Index-limited, step-limited approximant: n <= i halting within i steps."""
    if i < 1:
        raise ValueError("horizon i must be >= 1")
    schedule._check_decided(i)
    schedule._check_index_coverage(i)
    return sum(
        (
            Fraction(1, 2**e.index)
            for e in schedule.entries
            if e.index <= i and e.halts and e.halt_step <= i
        ),
        Fraction(0),
    )


def omega_exact(schedule: HaltingSchedule) -> Fraction:
    """Sum of 2^-|p| over halting entries; rejects Kraft violations."""
    schedule._check_kraft()
    return sum(
        (Fraction(1, 2**e.code_length) for e in schedule.entries if e.halts),
        Fraction(0),
    )


def omega_i(schedule: HaltingSchedule, i: int) -> Fraction:
    """Length-limited, step-limited approximant converging from below."""
    if i < 1:
        raise ValueError("horizon i must be >= 1")
    schedule._check_decided(i)
    schedule._check_kraft()
    return sum(
        (
            Fraction(1, 2**e.code_length)
            for e in schedule.entries
            if e.code_length <= i and e.halts and e.halt_step <= i
        ),
        Fraction(0),
    )


def binary_expansion(x: Fraction, k: int) -> tuple[int, ...]:
    """First k bits of the expansion that does not end in all ones.

    Bit j is floor(x * 2^j) mod 2, which for dyadic x picks 0.100... over
    0.011... automatically.
    """
    return base_b_expansion(x, 2, k)


def base_b_expansion(x: Fraction, b: int, k: int) -> tuple[int, ...]:
    """First k base-b digits under the no-trailing-(b-1)s convention."""
    if not 0 <= x < 1:
        raise ValueError("expansions are defined on [0, 1)")
    if b < 2:
        raise ValueError("base must be >= 2")
    if k < 1:
        raise ValueError("k must be >= 1")
    digits = []
    rest = x
    for _ in range(k):
        rest *= b
        digit = rest.numerator // rest.denominator
        digits.append(digit)
        rest -= digit
    return tuple(digits)


def schedule_from_vm(max_len: int, budget: int) -> HaltingSchedule:
    """Enumerate programs up to max_len and simulate each on empty input."""
    entries = []
    for n, program in enumerate(codes.enumerate_programs(max_len), 1):
        outcome = codes.run(program.machine, codes.Bitstring(""), budget)
        if isinstance(outcome, codes.Halted):
            entries.append(
                ScheduleEntry(n, len(program.code), True, outcome.steps)
            )
        else:
            entries.append(ScheduleEntry(n, len(program.code), False))
    return HaltingSchedule(
        entries=tuple(entries),
        source=ScheduleSource("vm", max_len=max_len, budget=budget),
    )


def format_schedule(schedule: HaltingSchedule) -> str:
    """One entry per line: `<index> <code_length> H <halt_step>` or `... D`."""
    lines = []
    for e in schedule.entries:
        if e.halts:
            lines.append(f"{e.index} {e.code_length} H {e.halt_step}")
        else:
            lines.append(f"{e.index} {e.code_length} D")
    return "\n".join(lines) + ("\n" if lines else "")


def parse_schedule(text: str, source: ScheduleSource = SYNTHETIC) -> HaltingSchedule:
    entries = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        parts = line.split()
        try:
            if len(parts) == 4 and parts[2] == "H":
                entries.append(
                    ScheduleEntry(int(parts[0]), int(parts[1]), True, int(parts[3]))
                )
            elif len(parts) == 3 and parts[2] == "D":
                entries.append(ScheduleEntry(int(parts[0]), int(parts[1]), False))
            else:
                raise ValueError("expected `<i> <len> H <step>` or `<i> <len> D`")
        except ValueError as exc:
            raise ScheduleFormatError(f"line {lineno}: {exc}") from None
    try:
        return HaltingSchedule(entries=tuple(entries), source=source)
    except ValueError as exc:
        raise ScheduleFormatError(str(exc)) from None


def synthetic_schedule(
    spec: Iterable[tuple[int, int, bool, int | None]]
) -> HaltingSchedule:
    """Convenience builder from (index, length, halts, step) tuples."""
    return HaltingSchedule(
        entries=tuple(ScheduleEntry(*row) for row in spec), source=SYNTHETIC
    )


@dataclass(frozen=True)
class MeasureValue:
    """A tabulated measure: which family, at which horizon, what value."""

    value: Fraction
    kind: str  # "tau" or "omega"
    horizon: int | None  # None means exact

    def __post_init__(self) -> None:
        if self.kind not in ("tau", "omega"):
            raise ValueError(f"unknown measure kind {self.kind!r}")
        if not 0 <= self.value < 1:
            raise ValueError("measures live in [0, 1)")
