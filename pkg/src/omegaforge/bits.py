"""Digit extraction from halting measures via threshold counting.

Two ways to pull digits out of a measure in (0,1): ask an approximant for
its k-th bit directly (the guessing route), or count how many thresholds
N/b^k the measure exceeds (the counting route).  The count is always below
b^k, its parity is the k-th bit, and its zero-padded digits are the first k
digits; a bisection over the monotone threshold predicate recovers the
count with exactly k oracle queries.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from . import codes
from .errors import (
    DyadicGroundTruth,
    IndexOutOfRange,
    InconsistentOracle,
    NotExact,
)
from .measures import HaltingSchedule, base_b_expansion, binary_expansion, omega_i


@dataclass(frozen=True)
class ExactGroundTruth:
    """A measure known exactly; the approximant sequence sits at its limit."""

    value: Fraction

    def __post_init__(self) -> None:
        if not 0 <= self.value < 1:
            raise ValueError("ground truth must lie in [0, 1)")

    def omega_at(self, i: int) -> Fraction:
        return self.value


@dataclass(frozen=True)
class ApproximantStream:
    """Measure known only through the schedule's lower approximants."""

    schedule: HaltingSchedule

    def omega_at(self, i: int) -> Fraction:
        return omega_i(self.schedule, i)


MeasureSource = ExactGroundTruth | ApproximantStream


@dataclass(frozen=True)
class Unknown:
    """Semi-decision outcome: not settled within the inspected horizon."""

    budget: int


@dataclass(frozen=True)
class ThresholdRecord:
    """The count q of thresholds N/base^k lying strictly below the measure."""

    k: int
    base: int
    q: int
    mode: str  # "exact" or "lower_bound"
    horizon: int | None = None

    def __post_init__(self) -> None:
        if self.k < 1 or self.base < 2:
            raise ValueError("need k >= 1 and base >= 2")
        if not 0 <= self.q <= self.base**self.k - 1:
            raise ValueError("q must lie in 0 .. base^k - 1")
        if self.mode not in ("exact", "lower_bound"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if (self.mode == "lower_bound") != (self.horizon is not None):
            raise ValueError("lower_bound records carry a horizon, exact ones do not")

    def mode_label(self) -> str:
        return "exact" if self.mode == "exact" else f"lower_bound({self.horizon})"


@dataclass(frozen=True)
class BitCensus:
    """How often the guessing route answered 1 up to a finite horizon."""

    k: int
    horizon: int
    ones: int
    zeros: int

    def __post_init__(self) -> None:
        if self.ones + self.zeros != self.horizon:
            raise ValueError("ones + zeros must equal the horizon")


class Prediction(enum.Enum):
    NEXT_BIT_ONE = "next_bit_one"
    NEXT_BIT_ZERO = "next_bit_zero"
    NO_PREDICTION = "no_prediction"


def approximant_bit(k: int, n: int, src: MeasureSource) -> int:
    """Bit k of the n-th approximant: the n-th guess at bit k of the limit."""
    return binary_expansion(src.omega_at(n), k)[k - 1]


def threshold_halts(
    k: int, n: int, src: MeasureSource, i_budget: int | None = None
) -> bool | Unknown:
    """Does the measure strictly exceed n / 2^k?

    Exact sources decide; approximant streams semi-decide: True as soon as
    some inspected approximant exceeds the threshold, otherwise Unknown with
    the inspected budget, never a bare False.
    """
    if n < 1:
        raise ValueError("threshold index n must be >= 1")
    threshold = Fraction(n, 2**k)
    if isinstance(src, ExactGroundTruth):
        return src.value > threshold
    if i_budget is None or i_budget < 1:
        raise ValueError("stream mode needs a positive i_budget")
    for i in range(1, i_budget + 1):
        if src.omega_at(i) > threshold:
            return True
    return Unknown(i_budget)


def threshold_count(
    k: int, src: MeasureSource, base: int = 2, horizon: int | None = None
) -> ThresholdRecord:
    """Count positive N with N/base^k strictly below the measure.

    Exact sources must not be a multiple of base^-k, which keeps both
    inequalities of the sandwich strict.  Stream sources count against the
    approximant at `horizon`, which can only undershoot.
    """
    if k < 1 or base < 2:
        raise ValueError("need k >= 1 and base >= 2")
    scale = base**k
    if isinstance(src, ExactGroundTruth):
        scaled = src.value * scale
        if scaled.denominator == 1:
            raise DyadicGroundTruth(
                f"ground truth {src.value} is a multiple of {base}^-{k}"
            )
        return ThresholdRecord(k=k, base=base, q=scaled.numerator // scaled.denominator,
                               mode="exact")
    if horizon is None or horizon < 1:
        raise ValueError("stream mode needs a positive horizon")
    approx = src.omega_at(horizon) * scale
    if approx == 0:
        q = 0
    else:
        # largest N >= 1 with N < approx, i.e. ceil(approx) - 1
        q = -((-approx.numerator) // approx.denominator) - 1
    return ThresholdRecord(k=k, base=base, q=q, mode="lower_bound", horizon=horizon)


def digits_from_count(record: ThresholdRecord) -> tuple[int, ...]:
    """Base-b digits of q zero-padded to width k: the first k digits of the
    measure.  The last digit is q mod b; for base 2 the parity is bit k."""
    if record.mode != "exact":
        raise NotExact("digits are only meaningful for exact threshold counts")
    digits = []
    q = record.q
    for _ in range(record.k):
        q, d = divmod(q, record.base)
        digits.append(d)
    return tuple(reversed(digits))


def make_threshold_oracle(k: int, src: ExactGroundTruth) -> Callable[[int], bool]:
    """Decided solvability oracle over N for a fixed exact measure."""
    if not isinstance(src, ExactGroundTruth):
        raise ValueError("a decided oracle needs an exact ground truth")

    def oracle(n: int) -> bool:
        answer = threshold_halts(k, n, src)
        assert isinstance(answer, bool)
        return answer

    return oracle


def bisect_digits(
    k: int, oracle: Callable[[int], bool]
) -> tuple[tuple[int, ...], int]:
    """First k bits via binary search over the monotone threshold predicate.

    Exactly k queries: the search narrows [0, 2^k] by halving, relying on
    "solvable at N implies solvable at every lower N".
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    lo, hi = 0, 2**k  # lo always solvable-or-floor, hi never solvable
    queries = 0
    max_yes, min_no = 0, 2**k
    while hi - lo > 1:
        mid = (lo + hi) // 2
        answer = oracle(mid)
        queries += 1
        if answer:
            max_yes = max(max_yes, mid)
            lo = mid
        else:
            min_no = min(min_no, mid)
            hi = mid
        if max_yes >= min_no:
            raise InconsistentOracle(
                f"yes at {max_yes} contradicts no at {min_no}"
            )
    record = ThresholdRecord(k=k, base=2, q=lo, mode="exact")
    return digits_from_count(record), queries


def scan_digits(
    k: int, oracle: Callable[[int], bool]
) -> tuple[tuple[int, ...], int]:
    """Naive reference: scan N = 1, 2, ... until the first no (up to 2^k)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    queries = 0
    q = 0
    saw_no = False
    for n in range(1, 2**k):
        answer = oracle(n)
        queries += 1
        if answer:
            if saw_no:
                raise InconsistentOracle(f"yes at {n} after an earlier no")
            q = n
        else:
            saw_no = True
            break
    record = ThresholdRecord(k=k, base=2, q=q, mode="exact")
    return digits_from_count(record), queries


def guess_census(k: int, horizon: int, src: MeasureSource) -> BitCensus:
    """Tally the guessing route's answers for N = 1..horizon.

    The total count of ones over all N can be infinite and is never
    reported; only this horizon-bounded shadow is observable.
    """
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    ones = sum(approximant_bit(k, n, src) for n in range(1, horizon + 1))
    return BitCensus(k=k, horizon=horizon, ones=ones, zeros=horizon - ones)


def predict_halting_bit(n: int, max_len: int) -> Prediction:
    """Predict whether program n halts, from control-flow shape alone.

    Loop-free machines cannot diverge, so they earn a confident one;
    everything else gets no prediction.  A zero prediction is never made.
    """
    programs = codes.enumerate_programs(max_len)
    if not 1 <= n <= len(programs):
        raise IndexOutOfRange(
            f"index {n} outside 1..{len(programs)} at max_len {max_len}"
        )
    machine = programs[n - 1].machine
    if codes.provably_halts_structurally(machine):
        return Prediction.NEXT_BIT_ONE
    return Prediction.NO_PREDICTION


def qk_table_csv(records: list[ThresholdRecord]) -> str:
    """Spec wire format for threshold tables: k,base,q,mode,digits."""
    lines = ["k,base,q,mode,digits"]
    for rec in records:
        digits = (
            "".join(str(d) for d in digits_from_count(rec))
            if rec.mode == "exact"
            else ""
        )
        lines.append(f"{rec.k},{rec.base},{rec.q},{rec.mode_label()},{digits}")
    return "\n".join(lines) + "\n"
