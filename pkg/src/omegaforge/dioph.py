"""Polynomial and exponential equation families over integer variables.

A family is a multivariate polynomial in named variables, each tagged as a
parameter or an unknown, where a variable may also enter through factors
2^v (base fixed at 2).  Solving is honest brute force over finite boxes:
the point is verifying representations, not deciding solvability.

Variables range over positive integers by default; a Box may opt into the
>= 0 convention used by the compiled systems.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import FamilyFormatError, MissingVariable, UnknownParameter

_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


@dataclass(frozen=True)
class Term:
    """coefficient * prod(var^exp) * prod((2^var)^mult)."""

    coefficient: int
    powers: tuple[tuple[str, int], ...] = ()
    exp_factors: tuple[tuple[str, int], ...] = ()

    def variables(self) -> set[str]:
        return {v for v, _ in self.powers} | {v for v, _ in self.exp_factors}


def term(
    coefficient: int,
    powers: Mapping[str, int] | None = None,
    exp_factors: Mapping[str, int] | None = None,
) -> Term:
    """Normalized term constructor; zero exponents vanish."""
    pw = tuple(sorted((v, e) for v, e in (powers or {}).items() if e != 0))
    ef = tuple(sorted((v, m) for v, m in (exp_factors or {}).items() if m != 0))
    if any(e < 0 for _, e in pw) or any(m < 0 for _, m in ef):
        raise ValueError("exponents and multiplicities must be nonnegative")
    for name, _ in pw + ef:
        if not _NAME_RE.match(name):
            raise ValueError(f"bad variable name {name!r}")
    return Term(coefficient=coefficient, powers=pw, exp_factors=ef)


def _merge(terms: Iterable[Term]) -> tuple[Term, ...]:
    acc: dict[tuple, int] = {}
    for t in terms:
        key = (t.powers, t.exp_factors)
        acc[key] = acc.get(key, 0) + t.coefficient
    merged = [
        Term(coefficient=c, powers=pw, exp_factors=ef)
        for (pw, ef), c in acc.items()
        if c != 0
    ]
    merged.sort(key=lambda t: (t.powers, t.exp_factors))
    return tuple(merged)


@dataclass(frozen=True)
class EquationFamily:
    """Terms summed to zero, with an ordered parameter/unknown partition."""

    terms: tuple[Term, ...]
    parameters: tuple[str, ...] = ()
    unknowns: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "terms", _merge(self.terms))
        declared = list(self.parameters) + list(self.unknowns)
        if len(set(declared)) != len(declared):
            raise ValueError("parameter/unknown names must be distinct")
        used = set().union(*(t.variables() for t in self.terms)) if self.terms else set()
        stray = used - set(declared)
        if stray:
            raise ValueError(f"terms reference undeclared variables {sorted(stray)}")

    def variables(self) -> set[str]:
        return set(self.parameters) | set(self.unknowns)

    def degree(self) -> int:
        """Total degree of the polynomial part (2^v factors not counted)."""
        return max((sum(e for _, e in t.powers) for t in self.terms), default=0)


def family(
    terms: Iterable[Term],
    parameters: Sequence[str] = (),
    unknowns: Sequence[str] = (),
) -> EquationFamily:
    return EquationFamily(
        terms=tuple(terms), parameters=tuple(parameters), unknowns=tuple(unknowns)
    )


def evaluate(fam: EquationFamily, assignment: Mapping[str, int]) -> int:
    """Exact integer value of the family's polynomial at the assignment."""
    missing = fam.variables() - set(assignment)
    if missing:
        raise MissingVariable(f"assignment lacks {sorted(missing)}")
    total = 0
    for t in fam.terms:
        value = t.coefficient
        for var, exp in t.powers:
            value *= assignment[var] ** exp
        for var, mult in t.exp_factors:
            v = assignment[var]
            if v < 0:
                raise ValueError(f"2^{var} undefined for negative {var}={v}")
            value *= 2 ** (v * mult)
        total += value
    return total


def _mul_terms(a: Term, b: Term) -> Term:
    pw: dict[str, int] = dict(a.powers)
    for v, e in b.powers:
        pw[v] = pw.get(v, 0) + e
    ef: dict[str, int] = dict(a.exp_factors)
    for v, m in b.exp_factors:
        ef[v] = ef.get(v, 0) + m
    return term(a.coefficient * b.coefficient, pw, ef)


def poly_product(a: Iterable[Term], b: Iterable[Term]) -> tuple[Term, ...]:
    return _merge(_mul_terms(ta, tb) for ta in a for tb in b)


def poly_sum(*groups: Iterable[Term]) -> tuple[Term, ...]:
    return _merge(itertools.chain(*groups))


def poly_scale(terms: Iterable[Term], factor: int) -> tuple[Term, ...]:
    return _merge(
        Term(t.coefficient * factor, t.powers, t.exp_factors) for t in terms
    )


@dataclass(frozen=True)
class Box:
    """Per-unknown inclusive search ranges; finite by construction."""

    ranges: tuple[tuple[str, tuple[int, int]], ...]
    allow_zero: bool = False

    def __post_init__(self) -> None:
        floor = 0 if self.allow_zero else 1
        for name, (lo, hi) in self.ranges:
            if lo < floor:
                raise ValueError(
                    f"{name}: lower bound {lo} below the domain floor {floor}"
                )
            if hi < lo:
                raise ValueError(f"{name}: empty range {lo}..{hi}")

    def range_of(self, name: str) -> tuple[int, int]:
        for var, bounds in self.ranges:
            if var == name:
                return bounds
        raise MissingVariable(f"box has no range for {name!r}")

    def volume(self) -> int:
        v = 1
        for _, (lo, hi) in self.ranges:
            v *= hi - lo + 1
        return v


def box(ranges: Mapping[str, tuple[int, int]], allow_zero: bool = False) -> Box:
    return Box(ranges=tuple(ranges.items()), allow_zero=allow_zero)


@dataclass(frozen=True)
class SolutionReport:
    """All solutions found inside a box, in deterministic order."""

    unknowns: tuple[str, ...]
    solutions: tuple[tuple[int, ...], ...]
    exhausted: bool

    @property
    def count(self) -> int:
        return len(self.solutions)

    def assignments(self) -> Iterator[dict[str, int]]:
        for row in self.solutions:
            yield dict(zip(self.unknowns, row))


def _box_iter(fam: EquationFamily, b: Box) -> Iterator[tuple[int, ...]]:
    spans = []
    for name in fam.unknowns:
        lo, hi = b.range_of(name)
        spans.append(range(lo, hi + 1))
    return itertools.product(*spans)


def solve_in_box(
    fam: EquationFamily,
    params: Mapping[str, int],
    b: Box,
    stop_after: int | None = None,
) -> SolutionReport:
    """Enumerate the box lexicographically by unknown order and keep roots.

    stop_after allows early exit (reported as not exhausted) when only
    solvability matters.
    """
    missing = set(fam.parameters) - set(params)
    if missing:
        raise MissingVariable(f"parameter values missing for {sorted(missing)}")
    assignment = dict(params)
    solutions: list[tuple[int, ...]] = []
    exhausted = True
    for point in _box_iter(fam, b):
        assignment.update(zip(fam.unknowns, point))
        if evaluate(fam, assignment) == 0:
            solutions.append(point)
            if stop_after is not None and len(solutions) >= stop_after:
                exhausted = False
                break
    return SolutionReport(
        unknowns=fam.unknowns, solutions=tuple(solutions), exhausted=exhausted
    )


def solvable_set(
    fam: EquationFamily,
    param_ranges: Mapping[str, Iterable[int]],
    b: Box,
) -> set[tuple[int, ...]]:
    """Parameter tuples whose instantiated equation has a boxed solution."""
    missing = set(fam.parameters) - set(param_ranges)
    if missing:
        raise MissingVariable(f"parameter ranges missing for {sorted(missing)}")
    spans = [list(param_ranges[p]) for p in fam.parameters]
    result = set()
    for combo in itertools.product(*spans):
        report = solve_in_box(fam, dict(zip(fam.parameters, combo)), b, stop_after=1)
        if report.count >= 1:
            result.add(combo)
    return result


def promote_parameter(fam: EquationFamily, which: str) -> EquationFamily:
    """Turn a parameter into the unknown x0, inserted first in unknown order."""
    if which not in fam.parameters:
        raise UnknownParameter(f"{which!r} is not a parameter of the family")
    if "x0" in fam.variables():
        raise ValueError("family already uses the name x0")
    renamed = []
    for t in fam.terms:
        pw = {("x0" if v == which else v): e for v, e in t.powers}
        ef = {("x0" if v == which else v): m for v, m in t.exp_factors}
        renamed.append(term(t.coefficient, pw, ef))
    return EquationFamily(
        terms=tuple(renamed),
        parameters=tuple(p for p in fam.parameters if p != which),
        unknowns=("x0",) + fam.unknowns,
    )


def value_set_polynomial(fam: EquationFamily) -> EquationFamily:
    """x0 * (1 - D^2) with the second parameter promoted to x0.

    Over positive arguments the positive values of this polynomial are
    exactly the promoted-parameter values at which D = 0 is solvable.
    """
    if len(fam.parameters) != 2:
        raise ValueError("need exactly two parameters (k, N)")
    promoted = promote_parameter(fam, fam.parameters[1])
    squared = poly_product(promoted.terms, promoted.terms)
    inner = poly_sum([term(1)], poly_scale(squared, -1))
    w_terms = poly_product([term(1, {"x0": 1})], inner)
    return EquationFamily(
        terms=w_terms,
        parameters=promoted.parameters,
        unknowns=promoted.unknowns,
    )


def positive_values(
    w_fam: EquationFamily, k_value: int, b: Box
) -> set[int]:
    """All positive values the polynomial assumes over the box."""
    if len(w_fam.parameters) != 1:
        raise ValueError("value-set polynomial has exactly one parameter")
    assignment = {w_fam.parameters[0]: k_value}
    values = set()
    for point in _box_iter(w_fam, b):
        assignment.update(zip(w_fam.unknowns, point))
        v = evaluate(w_fam, assignment)
        if v > 0:
            values.add(v)
    return values


# --- serialization -----------------------------------------------------------

def format_family(fam: EquationFamily) -> str:
    """Header lines plus one s-expression: (+ (* c (^ v e) ... (exp2 v)) ...)."""
    lines = []
    if fam.parameters:
        lines.append("params: " + " ".join(fam.parameters))
    if fam.unknowns:
        lines.append("unknowns: " + " ".join(fam.unknowns))
    lines.append(format_terms(fam.terms))
    return "\n".join(lines) + "\n"


def format_terms(terms: Sequence[Term]) -> str:
    if not terms:
        return "(+ (* 0))"
    rendered = []
    for t in terms:
        parts = [str(t.coefficient)]
        for v, e in t.powers:
            parts.append(f"(^ {v} {e})")
        for v, m in t.exp_factors:
            parts.extend([f"(exp2 {v})"] * m)
        rendered.append("(* " + " ".join(parts) + ")")
    return "(+ " + " ".join(rendered) + ")"


def _tokenize(text: str) -> list[str]:
    return text.replace("(", " ( ").replace(")", " ) ").split()


def _read_sexpr(tokens: list[str], pos: int):
    if tokens[pos] != "(":
        return tokens[pos], pos + 1
    items = []
    pos += 1
    while pos < len(tokens) and tokens[pos] != ")":
        node, pos = _read_sexpr(tokens, pos)
        items.append(node)
    if pos >= len(tokens):
        raise FamilyFormatError("unbalanced parentheses")
    return items, pos + 1


def parse_terms(text: str) -> tuple[Term, ...]:
    tokens = _tokenize(text)
    if not tokens:
        raise FamilyFormatError("empty expression")
    tree, pos = _read_sexpr(tokens, 0)
    if pos != len(tokens):
        raise FamilyFormatError("trailing tokens after expression")
    if not isinstance(tree, list) or not tree or tree[0] != "+":
        raise FamilyFormatError("expression must be a (+ ...) form")
    terms = []
    for node in tree[1:]:
        if not isinstance(node, list) or not node or node[0] != "*":
            raise FamilyFormatError("terms must be (* coeff factors...) forms")
        try:
            coeff = int(node[1])
        except (IndexError, ValueError):
            raise FamilyFormatError(f"term lacks an integer coefficient: {node}")
        pw: dict[str, int] = {}
        ef: dict[str, int] = {}
        for factor in node[2:]:
            if not isinstance(factor, list):
                raise FamilyFormatError(f"bad factor {factor!r}")
            if factor[0] == "^" and len(factor) == 3:
                pw[factor[1]] = pw.get(factor[1], 0) + int(factor[2])
            elif factor[0] == "exp2" and len(factor) == 2:
                ef[factor[1]] = ef.get(factor[1], 0) + 1
            else:
                raise FamilyFormatError(f"bad factor {factor!r}")
        terms.append(term(coeff, pw, ef))
    return _merge(terms)


def parse_family(text: str) -> EquationFamily:
    params: tuple[str, ...] = ()
    unknowns: tuple[str, ...] = ()
    body_lines = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith("params:"):
            params = tuple(line.split(":", 1)[1].split())
        elif line.startswith("unknowns:"):
            unknowns = tuple(line.split(":", 1)[1].split())
        else:
            body_lines.append(line)
    if not body_lines:
        raise FamilyFormatError("no equation body")
    try:
        return EquationFamily(
            terms=parse_terms(" ".join(body_lines)),
            parameters=params,
            unknowns=unknowns,
        )
    except ValueError as exc:
        raise FamilyFormatError(str(exc)) from None


def solvable_set_csv(
    fam: EquationFamily,
    param_ranges: Mapping[str, Iterable[int]],
    b: Box,
) -> str:
    """CSV dump `params...,solvable,count,exhausted`, full counts per tuple."""
    header = ",".join(fam.parameters) + ",solvable,count,exhausted"
    lines = [header]
    spans = [list(param_ranges[p]) for p in fam.parameters]
    for combo in itertools.product(*spans):
        report = solve_in_box(fam, dict(zip(fam.parameters, combo)), b)
        solvable = "true" if report.count >= 1 else "false"
        exhausted = "true" if report.exhausted else "false"
        prefix = ",".join(str(v) for v in combo)
        lines.append(f"{prefix},{solvable},{report.count},{exhausted}")
    return "\n".join(lines) + "\n"
