"""Exact feasibility of strict and non-strict linear inequalities.

Constraints have the form ``sum(c_i * x_i) REL rhs`` with ``REL`` one of
``<`` or ``<=``. :func:`solve` runs Fourier-Motzkin elimination with
strictness carried through every combination, then back-substitutes to get
an exact rational witness. Elimination order and value selection are fixed,
so identical systems give identical witnesses.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Mapping, Optional, Tuple, Union

from .errors import MalformedSystem, MissingVariable

LT = "<"
LE = "<="


@dataclass(frozen=True)
class Constraint:
    coeffs: Tuple[Tuple[str, Fraction], ...]
    rel: str
    rhs: Fraction

    def evaluate(self, assignment: Mapping[str, Fraction]) -> bool:
        total = sum((c * assignment[v] for v, c in self.coeffs), Fraction(0))
        return total < self.rhs if self.rel == LT else total <= self.rhs

    def __str__(self):
        terms = " + ".join(f"{c}*{v}" for v, c in self.coeffs) or "0"
        return f"{terms} {self.rel} {self.rhs}"


@dataclass(frozen=True)
class LinearSystem:
    variables: Tuple[str, ...]
    constraints: Tuple[Constraint, ...]

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "constraints", tuple(self.constraints))
        declared = set(self.variables)
        if len(declared) != len(self.variables):
            raise MalformedSystem("duplicate variable names")
        for con in self.constraints:
            if con.rel not in (LT, LE):
                raise MalformedSystem(f"unknown relation {con.rel!r}")
            for v, _ in con.coeffs:
                if v not in declared:
                    raise MalformedSystem(f"undeclared variable {v!r}")


class SystemBuilder:
    """Collects constraints written as ``lhs REL rhs`` over linear terms.

    A term is a variable name, a number, or a ``{name: coeff}`` mapping with
    an optional constant under the key ``None``.
    """

    def __init__(self):
        self.variables = []
        self._seen = set()
        self.constraints = []

    def var(self, name: str) -> str:
        if name not in self._seen:
            self._seen.add(name)
            self.variables.append(name)
        return name

    @staticmethod
    def _linear(term) -> Dict[Optional[str], Fraction]:
        if isinstance(term, str):
            return {term: Fraction(1)}
        if isinstance(term, (int, Fraction)):
            return {None: Fraction(term)}
        return {k: Fraction(v) for k, v in term.items()}

    def add(self, lhs, rel: str, rhs) -> None:
        left = self._linear(lhs)
        right = self._linear(rhs)
        coeffs: Dict[Optional[str], Fraction] = {}
        for k, v in left.items():
            coeffs[k] = coeffs.get(k, 0) + v
        for k, v in right.items():
            coeffs[k] = coeffs.get(k, 0) - v
        const = coeffs.pop(None, Fraction(0))
        for k in coeffs:
            if k not in self._seen:
                raise MalformedSystem(f"undeclared variable {k!r}")
        terms = tuple((k, v) for k, v in coeffs.items() if v != 0)
        self.constraints.append(Constraint(terms, rel, -const))

    def lt(self, lhs, rhs):
        self.add(lhs, LT, rhs)

    def le(self, lhs, rhs):
        self.add(lhs, LE, rhs)

    def build(self) -> LinearSystem:
        return LinearSystem(tuple(self.variables), tuple(self.constraints))


@dataclass(frozen=True)
class Feasible:
    assignment: Dict[str, Fraction]

    def __bool__(self):
        return True


@dataclass(frozen=True)
class Infeasible:
    def __bool__(self):
        return False


FeasibilityResult = Union[Feasible, Infeasible]


def check_witness(sys: LinearSystem, assignment: Mapping[str, Fraction]) -> bool:
    for v in sys.variables:
        if v not in assignment:
            raise MissingVariable(f"no value for {v!r}")
    return all(con.evaluate(assignment) for con in sys.constraints)


# Internal row: (coeff dict var-index -> Fraction, rhs, strict). Meaning
# sum(c * x) < rhs when strict, <= otherwise.


def _normalize(coeffs: Dict[int, Fraction], rhs: Fraction, strict: bool):
    lead = abs(coeffs[min(coeffs)])
    key = tuple(sorted((i, c / lead) for i, c in coeffs.items()))
    return key, rhs / lead, strict


def _tighter(a, b):
    """Is bound (rhs, strict) ``a`` at least as strong as ``b``?"""
    return a[0] < b[0] or (a[0] == b[0] and (a[1] or not b[1]))


class _Rows:
    def __init__(self):
        self.rows: Dict[tuple, Tuple[Fraction, bool]] = {}
        self.contradiction = False

    def add(self, coeffs: Dict[int, Fraction], rhs: Fraction, strict: bool):
        coeffs = {i: c for i, c in coeffs.items() if c != 0}
        if not coeffs:
            if rhs < 0 or (strict and rhs == 0):
                self.contradiction = True
            return
        key, rhs, strict = _normalize(coeffs, rhs, strict)
        old = self.rows.get(key)
        if old is None or _tighter((rhs, strict), old):
            self.rows[key] = (rhs, strict)


def solve(sys: LinearSystem) -> FeasibilityResult:
    index = {v: i for i, v in enumerate(sys.variables)}
    rows = _Rows()
    for con in sys.constraints:
        coeffs: Dict[int, Fraction] = {}
        for v, c in con.coeffs:
            coeffs[index[v]] = coeffs.get(index[v], 0) + Fraction(c)
        rows.add(coeffs, Fraction(con.rhs), con.rel == LT)
    if rows.contradiction:
        return Infeasible()

    remaining = set(range(len(sys.variables)))
    history = []  # (var, rows mentioning var) in elimination order
    current = rows
    while remaining:
        var = _pick_variable(current.rows, remaining)
        remaining.discard(var)
        keep = _Rows()
        upper, lower = [], []
        for key, (rhs, strict) in current.rows.items():
            coeffs = dict(key)
            c = coeffs.get(var, 0)
            if c > 0:
                upper.append((coeffs, rhs, strict))
            elif c < 0:
                lower.append((coeffs, rhs, strict))
            else:
                keep.rows[key] = (rhs, strict)
        history.append((var, upper, lower))
        for cu, ru, su in upper:
            for cl, rl, sl in lower:
                fu, fl = -cl[var], cu[var]
                merged = {}
                for i, c in cu.items():
                    merged[i] = merged.get(i, 0) + fu * c
                for i, c in cl.items():
                    merged[i] = merged.get(i, 0) + fl * c
                merged.pop(var, None)
                keep.add(merged, fu * ru + fl * rl, su or sl)
                if keep.contradiction:
                    return Infeasible()
        current = keep
    if current.rows:
        # every variable eliminated, so only constant rows could remain
        raise AssertionError("unexpected residual rows")

    values: Dict[int, Fraction] = {}
    for var, upper, lower in reversed(history):
        values[var] = _choose(var, upper, lower, values)
    assignment = {v: values.get(i, Fraction(0)) for v, i in index.items()}
    return Feasible(assignment)


def _pick_variable(rows, remaining) -> int:
    counts = {v: [0, 0] for v in remaining}
    for key in rows:
        for i, c in key:
            if i in counts:
                counts[i][0 if c > 0 else 1] += 1
    return min(remaining, key=lambda v: (counts[v][0] * counts[v][1] - sum(counts[v]), v))


def _bound(coeffs, rhs, var, values):
    rest = sum((c * values[i] for i, c in coeffs.items() if i != var), Fraction(0))
    return (rhs - rest) / coeffs[var]


def _choose(var, upper, lower, values) -> Fraction:
    lo = lo_strict = None
    for coeffs, rhs, strict in lower:
        b = _bound(coeffs, rhs, var, values)
        if lo is None or b > lo or (b == lo and strict):
            lo, lo_strict = b, strict
    hi = hi_strict = None
    for coeffs, rhs, strict in upper:
        b = _bound(coeffs, rhs, var, values)
        if hi is None or b < hi or (b == hi and strict):
            hi, hi_strict = b, strict
    if lo is None and hi is None:
        return Fraction(0)
    if hi is None:
        return lo if not lo_strict else Fraction(math.floor(lo) + 1)
    if lo is None:
        return hi if not hi_strict else Fraction(math.ceil(hi) - 1)
    if not lo_strict:
        return lo
    step = Fraction(math.floor(lo) + 1)
    if step < hi or (step == hi and not hi_strict):
        return step
    return (lo + hi) / 2
