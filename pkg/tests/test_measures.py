"""Exact measure arithmetic, approximants, expansions, schedule format."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from omegaforge import codes, measures
from omegaforge.errors import HorizonUncovered, KraftViolation, ScheduleFormatError
from omegaforge.measures import (
    HaltingSchedule,
    ScheduleEntry,
    ScheduleSource,
    base_b_expansion,
    binary_expansion,
    format_rational,
    format_schedule,
    omega_exact,
    omega_i,
    parse_rational,
    parse_schedule,
    schedule_from_vm,
    synthetic_schedule,
    tau_exact,
    tau_i,
)

from conftest import SEED


def test_tau_exact_spec_examples():
    s = synthetic_schedule([(1, 1, True, 1), (2, 1, False, None), (3, 2, True, 1)])
    assert tau_exact(s) == Fraction(5, 8)
    assert tau_exact(synthetic_schedule([])) == 0
    all_halt = synthetic_schedule([(n, 1, True, 1) for n in range(1, 11)])
    assert tau_exact(all_halt) == Fraction(1023, 1024)


def test_tau_i_spec_examples():
    s = synthetic_schedule([(1, 1, True, 1), (2, 1, True, 5), (3, 1, True, 2)])
    assert tau_i(s, 2) == Fraction(1, 2)
    assert tau_i(s, 5) == tau_exact(s)
    assert tau_i(synthetic_schedule([(1, 1, True, 3)]), 1) == 0


def test_tau_i_gap_raises():
    gappy = synthetic_schedule([(1, 1, True, 1), (3, 1, True, 1)])
    with pytest.raises(HorizonUncovered):
        tau_i(gappy, 3)
    # below the gap everything is decided
    assert tau_i(gappy, 1) == Fraction(1, 2)


def test_omega_exact_spec_examples():
    s = synthetic_schedule([(1, 2, True, 1), (2, 2, True, 1), (3, 3, False, None)])
    assert omega_exact(s) == Fraction(1, 2)
    assert omega_exact(synthetic_schedule([(1, 2, False, None)])) == 0


def test_omega_i_spec_examples():
    s = synthetic_schedule([(1, 1, True, 3)])
    assert omega_i(s, 2) == 0
    assert omega_i(s, 3) == Fraction(1, 2)
    for i in range(1, 8):
        assert omega_i(s, i) <= omega_i(s, i + 1)


def test_kraft_violation():
    bad = synthetic_schedule([(n, 1, True, 1) for n in range(1, 4)])
    with pytest.raises(KraftViolation):
        omega_exact(bad)
    with pytest.raises(KraftViolation):
        omega_i(bad, 5)


def test_vm_schedule_budget_horizon():
    vm = schedule_from_vm(17, 32)
    assert vm.source == ScheduleSource("vm", max_len=17, budget=32)
    # within the budget: fine; beyond: the schedule no longer decides
    assert omega_i(vm, 32) == omega_exact(vm)
    with pytest.raises(HorizonUncovered):
        omega_i(vm, 33)
    with pytest.raises(HorizonUncovered):
        tau_i(vm, 33)


def test_vm_omega_exact_matches_budget_horizon_approximant():
    # every halt step and every length is <= budget, so the limit is attained
    vm = schedule_from_vm(21, 64)
    assert omega_i(vm, 64) == omega_exact(vm)
    assert vm.kraft_sum() <= 1


def test_vm_cross_consistency_with_runner():
    vm = schedule_from_vm(19, 32)
    total = Fraction(0)
    for n, program in enumerate(codes.enumerate_programs(19), 1):
        outcome = codes.run(program.machine, codes.Bitstring(""), 32)
        if isinstance(outcome, codes.Halted):
            total += Fraction(1, 2 ** len(program.code))
    assert total == omega_exact(vm)


def test_binary_expansion_examples():
    assert binary_expansion(Fraction(1, 3), 4) == (0, 1, 0, 1)
    assert binary_expansion(Fraction(1, 2), 3) == (1, 0, 0)
    assert binary_expansion(Fraction(5, 8), 3) == (1, 0, 1)


def test_base_b_expansion_examples():
    assert base_b_expansion(Fraction(1, 3), 10, 3) == (3, 3, 3)
    assert base_b_expansion(Fraction(1, 3), 3, 2) == (1, 0)
    assert base_b_expansion(Fraction(0), 7, 5) == (0, 0, 0, 0, 0)


@settings(max_examples=300, deadline=None)
@given(st.integers(min_value=0, max_value=2**16 - 1), st.integers(min_value=1, max_value=16))
def test_expansion_roundtrip_on_dyadics(numerator, k):
    x = Fraction(numerator % 2**k, 2**k)
    bits = binary_expansion(x, k)
    assert sum(Fraction(b, 2 ** (j + 1)) for j, b in enumerate(bits)) == x


@settings(max_examples=100, deadline=None)
@given(
    st.fractions(min_value=0, max_value=1).filter(lambda f: f < 1),
    st.integers(min_value=2, max_value=12),
    st.integers(min_value=1, max_value=10),
)
def test_expansion_digit_formula(x, b, k):
    digits = base_b_expansion(x, b, k)
    for j in range(1, k + 1):
        assert digits[j - 1] == (x * b**j).numerator // (x * b**j).denominator % b


def _random_synthetic(rng: random.Random) -> HaltingSchedule:
    # lengths from a random prefix-free code built on a binary trie
    leaves: list[str] = []
    frontier = ["0", "1"]
    while frontier and len(leaves) < 8:
        word = frontier.pop(rng.randrange(len(frontier)))
        if len(word) >= 6 or rng.random() < 0.4:
            leaves.append(word)
        else:
            frontier.extend([word + "0", word + "1"])
    entries = []
    for n, leaf in enumerate(leaves, 1):
        halts = rng.random() < 0.7
        entries.append(
            (n, len(leaf), halts, rng.randint(1, 12) if halts else None)
        )
    return synthetic_schedule(entries)


def test_monotone_and_bounded_on_random_schedules():
    rng = random.Random(SEED)
    for _ in range(25):
        s = _random_synthetic(rng)
        t_limit, o_limit = tau_exact(s), omega_exact(s)
        horizon = max(s.tau_horizon(), s.omega_horizon())
        prev_t, prev_o = Fraction(0), Fraction(0)
        for i in range(1, horizon + 1):
            t, o = tau_i(s, i), omega_i(s, i)
            assert prev_t <= t <= t_limit
            assert prev_o <= o <= o_limit
            prev_t, prev_o = t, o
        assert tau_i(s, s.tau_horizon()) == t_limit
        assert omega_i(s, s.omega_horizon()) == o_limit


def test_schedule_file_roundtrip():
    s = synthetic_schedule([(1, 2, True, 4), (2, 3, False, None), (5, 7, True, 1)])
    text = format_schedule(s)
    assert text == "1 2 H 4\n2 3 D\n5 7 H 1\n"
    assert parse_schedule(text) == s


def test_schedule_parse_errors():
    with pytest.raises(ScheduleFormatError):
        parse_schedule("1 2 X 4\n")
    with pytest.raises(ScheduleFormatError):
        parse_schedule("1 2 H\n")
    with pytest.raises(ScheduleFormatError):
        parse_schedule("2 2 H 1\n1 2 H 1\n")  # indices not increasing


def test_entry_validation():
    with pytest.raises(ValueError):
        ScheduleEntry(1, 2, True, None)
    with pytest.raises(ValueError):
        ScheduleEntry(1, 2, False, 3)
    with pytest.raises(ValueError):
        ScheduleEntry(0, 2, False, None)


def test_rational_wire_format():
    assert format_rational(Fraction(0)) == "0/1"
    assert format_rational(Fraction(5, 8)) == "5/8"
    assert parse_rational("5/8") == Fraction(5, 8)
    with pytest.raises(ScheduleFormatError):
        parse_rational("5/0")
