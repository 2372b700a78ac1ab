"""Shared fixtures: micro machines, seeded RNG, rational samplers."""

from __future__ import annotations

import os
import random
from fractions import Fraction

import pytest

from omegaforge import codes

SEED = int(os.environ.get("OMEGAFORGE_SEED", "20260810"))


@pytest.fixture
def rng() -> random.Random:
    return random.Random(SEED)


def non_dyadic_rationals(rng: random.Random, count: int) -> list[Fraction]:
    """Rationals in (0,1) that are non-b-adic for b in {2, 3, 10} at every k.

    The reduced denominator keeps a prime factor outside {2, 3, 5}, so no
    power of those bases can clear it.
    """
    out: list[Fraction] = []
    while len(out) < count:
        den = rng.randrange(7, 5000)
        num = rng.randrange(1, den)
        x = Fraction(num, den)
        rest = x.denominator
        for p in (2, 3, 5):
            while rest % p == 0:
                rest //= p
        if rest > 1:
            out.append(x)
    return out


def machine_halt() -> codes.CounterMachine:
    return codes.CounterMachine((codes.Halt(),), registers=1)


def machine_even() -> codes.CounterMachine:
    """Halts iff the input is even (repeated subtract-2 loop)."""
    return codes.CounterMachine(
        (
            codes.DecJz(1, 5),
            codes.DecJz(1, 4),
            codes.DecJz(2, 1),
            codes.DecJz(3, 4),
        ),
        registers=3,
    )


def machine_loop() -> codes.CounterMachine:
    """Diverges on every input (jump-to-self on an always-zero register)."""
    return codes.CounterMachine((codes.DecJz(2, 1),), registers=2)


def machine_countdown() -> codes.CounterMachine:
    """Halts on every input in 2a+1 steps."""
    return codes.CounterMachine(
        (codes.DecJz(1, 3), codes.DecJz(2, 1)), registers=2
    )


def machine_move() -> codes.CounterMachine:
    """Moves r1 into r2, then halts; exercises INC."""
    return codes.CounterMachine(
        (codes.DecJz(1, 4), codes.Inc(2), codes.DecJz(3, 1)), registers=3
    )


MICRO_MACHINES = {
    "halt": machine_halt,
    "even": machine_even,
    "loop": machine_loop,
    "countdown": machine_countdown,
    "move": machine_move,
}


def halts_on(name: str, a: int) -> bool:
    return {
        "halt": True,
        "even": a % 2 == 0,
        "loop": False,
        "countdown": True,
        "move": True,
    }[name]
