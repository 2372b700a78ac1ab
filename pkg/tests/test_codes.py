"""Encoding, enumeration, simulation, and structural-halting tests."""

from __future__ import annotations

import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from omegaforge import codes
from omegaforge.codes import (
    Bitstring,
    CounterMachine,
    DecJz,
    Halt,
    Halted,
    Inc,
    OutOfBudget,
)
from omegaforge.errors import EncodingOverflow, MalformedCode

from conftest import SEED


def test_halt_machine_exact_bits():
    # header 1^7 0, nibble 0001, HALT = 10 + 1-bit zero register field
    code = codes.encode(CounterMachine((Halt(),), registers=1)).code
    assert code.bits == "111111100001100"
    assert len(code) == 15


def test_inc_halt_exact_bits():
    # body: nibble 0001, INC r1 = 001, HALT = 100  -> L = 10, total 21
    machine = CounterMachine((Inc(1), Halt()), registers=1)
    code = codes.encode(machine).code
    assert code.bits == "1111111111" + "0" + "0001" + "001" + "100"
    assert codes.decode(code) == machine


def test_roundtrip_and_prefix_freeness_of_distinct_machines():
    m1 = CounterMachine((Halt(),), registers=1)
    m2 = CounterMachine((Inc(1), Halt()), registers=1)
    c1, c2 = codes.encode(m1).code, codes.encode(m2).code
    assert codes.decode(c1) == m1
    assert not c1.is_proper_prefix_of(c2)
    assert not c2.is_proper_prefix_of(c1)


def test_decode_malformed_cases():
    with pytest.raises(MalformedCode):
        codes.decode(Bitstring(""))  # no header terminator
    with pytest.raises(MalformedCode):
        codes.decode(Bitstring("1111"))  # header never ends
    with pytest.raises(MalformedCode):
        codes.decode(Bitstring("11110" + "010"))  # L=4 declared, 3 body bits
    with pytest.raises(MalformedCode):
        codes.decode(Bitstring("1" * 7 + "0" + "0000" + "100"))  # arity 0
    with pytest.raises(MalformedCode):
        codes.decode(Bitstring("1" * 7 + "0" + "0001" + "110"))  # opcode 11
    with pytest.raises(MalformedCode):
        codes.decode(Bitstring("1" * 7 + "0" + "0001" + "101"))  # HALT reg != 0
    with pytest.raises(MalformedCode):
        codes.decode(Bitstring("1" * 7 + "0" + "0001" + "000"))  # INC r0
    # DECJZ with target 3 when only targets 1..2 exist
    body = "0001" + "01" + "1" + format(3, "08b")
    with pytest.raises(MalformedCode):
        codes.decode(Bitstring("1" * len(body) + "0" + body))


def test_encode_overflow():
    wide = CounterMachine((Inc(16),), registers=16)  # legal machine, unencodable
    with pytest.raises(EncodingOverflow):
        codes.encode(wide)
    machine = CounterMachine((Inc(1),) * 300 + (DecJz(1, 301),), registers=1)
    with pytest.raises(EncodingOverflow):
        codes.encode(machine)


def _all_machines_up_to(max_code_len: int):
    """Independent oracle: generate machines combinatorially and encode.

    Enumerates every machine over arity 1..15 with instruction-bit budget
    implied by max_code_len, keeps those whose encoding fits, and returns
    the code->machine mapping.
    """
    results = {}
    max_body = (max_code_len - 1) // 2
    for arity in range(1, 16):
        width = arity.bit_length()
        budget = max_body - codes.ARITY_BITS
        if budget < 2 + width:
            continue
        per_instr = [2 + width, 2 + width + codes.TARGET_BITS]
        max_count = budget // min(per_instr)

        def gen(prefix: list, used: int):
            if prefix:
                try:
                    machine = CounterMachine(tuple(prefix), registers=arity)
                except ValueError:
                    machine = None
                if machine is not None:
                    code = codes.encode(machine).code
                    if len(code) <= max_code_len:
                        results[code.bits] = machine
            if len(prefix) >= max_count:
                return
            for reg in range(1, arity + 1):
                if used + 2 + width <= budget:
                    gen(prefix + [Inc(reg)], used + 2 + width)
                if used + 2 + width + codes.TARGET_BITS <= budget:
                    # targets validated lazily by CounterMachine; try a window
                    for target in range(1, max_count + 2):
                        gen(
                            prefix + [DecJz(reg, target)],
                            used + 2 + width + codes.TARGET_BITS,
                        )
            if used + 2 + width <= budget:
                gen(prefix + [Halt()], used + 2 + width)

        gen([], 0)
    return results


@pytest.mark.parametrize("max_len", [12, 15, 17, 19, 21])
def test_enumeration_agrees_with_machine_generation_oracle(max_len):
    enumerated = {p.code.bits: p.machine for p in codes.enumerate_programs(max_len)}
    generated = _all_machines_up_to(max_len)
    assert enumerated == generated


def test_enumeration_counts_frozen():
    # brute-force decode over all strings of length <= max_len fixed these
    assert len(codes.enumerate_programs(12)) == 0  # shortest valid code is 15
    assert len(codes.enumerate_programs(15)) == 2
    assert len(codes.enumerate_programs(17)) == 9
    assert len(codes.enumerate_programs(21)) == 139


def test_enumeration_count_via_exhaustive_string_decode():
    # the spec's oracle: try all 2^13 - 2 nonempty strings of length <= 12
    count = 0
    for length in range(1, 13):
        for value in range(1 << length):
            try:
                codes.decode(Bitstring(format(value, f"0{length}b")))
                count += 1
            except MalformedCode:
                pass
    assert count == len(codes.enumerate_programs(12)) == 0


def test_enumeration_order_and_prefix_freeness():
    programs = codes.enumerate_programs(21)
    keys = [(len(p.code), p.code.bits) for p in programs]
    assert keys == sorted(keys)
    assert codes.is_prefix_free([p.code for p in programs])


def test_is_prefix_free_basic():
    assert codes.is_prefix_free(["0", "10", "11"])
    assert not codes.is_prefix_free(["0", "01"])
    assert codes.is_prefix_free([])


def test_run_spec_examples():
    halt = CounterMachine((Halt(),), registers=1)
    assert codes.run(halt, Bitstring(""), 10) == Halted(1, Bitstring("0"))

    self_loop = CounterMachine((Inc(1), DecJz(2, 1)), registers=2)
    assert codes.run(self_loop, Bitstring(""), 100) == OutOfBudget(100)

    two_inc = CounterMachine((Inc(1), Inc(1), Halt()), registers=1)
    assert codes.run(two_inc, Bitstring(""), 2) == OutOfBudget(2)
    outcome = codes.run(two_inc, Bitstring(""), 3)
    assert isinstance(outcome, Halted) and outcome.steps == 3


def test_run_budget_monotone_stability():
    machine = CounterMachine((Inc(1), Inc(1), Halt()), registers=1)
    base = codes.run(machine, Bitstring(""), 3)
    for budget in (4, 10, 1000):
        assert codes.run(machine, Bitstring(""), budget) == base


def test_run_input_convention():
    # input bits load register 1 with value+1; empty input loads nothing
    machine = CounterMachine((Halt(),), registers=1)
    out = codes.run(machine, Bitstring("101"), 5)
    assert isinstance(out, Halted) and out.output == Bitstring("110")  # 5+1


def test_fall_off_end_halts():
    machine = CounterMachine((Inc(1),), registers=1)
    outcome = codes.run(machine, Bitstring(""), 5)
    assert outcome == Halted(1, Bitstring("1"))


def test_structural_halting_examples():
    assert codes.provably_halts_structurally(CounterMachine((Halt(),), registers=1))
    back_edge = CounterMachine((Inc(1), DecJz(1, 1)), registers=1)
    assert not codes.provably_halts_structurally(back_edge)
    forward_jump = CounterMachine((DecJz(1, 2),), registers=1)
    assert codes.provably_halts_structurally(forward_jump)


@pytest.mark.parametrize("max_len", [12, 17, 21])
def test_structurally_halting_machines_do_halt(max_len):
    for program in codes.enumerate_programs(max_len):
        if codes.provably_halts_structurally(program.machine):
            budget = len(program.machine.instructions) + 1
            outcome = codes.run(program.machine, Bitstring(""), budget)
            assert isinstance(outcome, Halted)


def _random_machine(rng: random.Random) -> CounterMachine:
    arity = rng.randint(1, 15)
    count = rng.randint(1, 6)
    instructions = []
    for _ in range(count):
        kind = rng.randrange(3)
        if kind == 0:
            instructions.append(Inc(rng.randint(1, arity)))
        elif kind == 1:
            instructions.append(DecJz(rng.randint(1, arity), rng.randint(1, count + 1)))
        else:
            instructions.append(Halt())
    return CounterMachine(tuple(instructions), registers=arity)


def test_random_machines_roundtrip():
    rng = random.Random(SEED)
    for _ in range(300):
        machine = _random_machine(rng)
        assert codes.decode(codes.encode(machine).code) == machine


@settings(max_examples=200, deadline=None)
@given(st.lists(st.text(alphabet="01", min_size=1, max_size=8), max_size=8))
def test_prefix_free_matches_quadratic_definition(words):
    quadratic = all(
        not (a != b and b.startswith(a))
        for a, b in itertools.product(set(words), repeat=2)
    )
    assert codes.is_prefix_free(words) == quadratic


def test_assembly_roundtrip():
    machine = CounterMachine(
        (DecJz(1, 5), DecJz(1, 4), DecJz(2, 1), DecJz(3, 4)), registers=3
    )
    text = codes.format_assembly(machine)
    assert codes.parse_assembly(text) == machine


def test_assembly_parse_errors():
    with pytest.raises(ValueError):
        codes.parse_assembly("BOOP r1\n")
    with pytest.raises(ValueError):
        codes.parse_assembly("DECJZ r1 L9\n")  # unknown label
    with pytest.raises(ValueError):
        codes.parse_assembly("")
