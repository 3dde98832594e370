"""Exact scalars, box designs, sorted dimensions and domination.

Every number is a :class:`fractions.Fraction`. Floats are rejected on input
because strict inequalities must be decided exactly.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Union

from .errors import (
    AmountNotLarger,
    BoundExceeded,
    DimensionMismatch,
    NoExpandSide,
    NonPositiveSide,
    TooFewSides,
)

Scalar = Fraction
ScalarLike = Union[int, str, Fraction]


def to_scalar(value: ScalarLike) -> Fraction:
    """Convert ints, Fractions and exact decimal/rational strings to a Fraction.

    ``"3.5"`` becomes ``7/2``; ``"7/2"`` is accepted as well. Floats raise
    ``TypeError``.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not side lengths")
    if isinstance(value, float):
        raise TypeError(f"float {value!r} is not exact; pass a string or Fraction")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot interpret {value!r} as an exact scalar")


def format_scalar(value: Fraction) -> str:
    """Integers print bare, everything else as ``p/q``."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


@dataclass(frozen=True)
class Dims:
    """Side lengths of a box, non-decreasing and positive."""

    sides: tuple

    def __post_init__(self):
        sides = tuple(to_scalar(v) for v in self.sides)
        if len(sides) < 2:
            raise TooFewSides(f"a box needs at least 2 sides, got {len(sides)}")
        for v in sides:
            if v <= 0:
                raise NonPositiveSide(f"side {format_scalar(v)} is not positive")
        if any(sides[i] > sides[i + 1] for i in range(len(sides) - 1)):
            raise ValueError(f"sides {sides} are not sorted; use make_dims")
        object.__setattr__(self, "sides", sides)

    def __len__(self):
        return len(self.sides)

    def __iter__(self):
        return iter(self.sides)

    def __getitem__(self, i):
        return self.sides[i]

    def __str__(self):
        return "(" + ", ".join(format_scalar(v) for v in self.sides) + ")"


def make_dims(values: Iterable[ScalarLike]) -> Dims:
    values = [to_scalar(v) for v in values]
    if len(values) < 2:
        raise TooFewSides(f"a box needs at least 2 sides, got {len(values)}")
    for v in values:
        if v <= 0:
            raise NonPositiveSide(f"side {format_scalar(v)} is not positive")
    return Dims(tuple(sorted(values)))


def _check_lengths(a, b):
    if len(a) != len(b):
        raise DimensionMismatch(f"cannot compare {len(a)}-D with {len(b)}-D")


def dominates(a: Dims, b: Dims) -> bool:
    _check_lengths(a, b)
    return all(x >= y for x, y in zip(a, b))


def strictly_dominates(a: Dims, b: Dims) -> bool:
    """True iff a closed box with dims ``b`` fits inside one with dims ``a``."""
    _check_lengths(a, b)
    return all(x > y for x, y in zip(a, b))


@dataclass(frozen=True)
class BoxDesign:
    label: str
    dims: Dims
    expand_side: Optional[int] = None  # 1-based index into dims

    def __post_init__(self):
        if not isinstance(self.dims, Dims):
            object.__setattr__(self, "dims", make_dims(self.dims))
        if self.expand_side is not None:
            if not 1 <= self.expand_side <= len(self.dims):
                raise ValueError(
                    f"box {self.label}: expand side {self.expand_side} "
                    f"outside 1..{len(self.dims)}"
                )

    @property
    def n(self) -> int:
        return len(self.dims)

    def expandable_length(self) -> Fraction:
        if self.expand_side is None:
            raise NoExpandSide(f"box {self.label} has no expandable side")
        return self.dims[self.expand_side - 1]


@dataclass(frozen=True)
class Closed:
    def __str__(self):
        return "closed"


@dataclass(frozen=True)
class Expanded:
    amount: Fraction

    def __post_init__(self):
        object.__setattr__(self, "amount", to_scalar(self.amount))

    def __str__(self):
        return f"expanded {format_scalar(self.amount)}"


CLOSED = Closed()
Presentation = Union[Closed, Expanded]


def expansion_bound_ok(box: BoxDesign, amount: ScalarLike) -> bool:
    """``dims[j] < amount <= 2 * dims[j]`` for the expandable side ``j``."""
    side = box.expandable_length()
    amount = to_scalar(amount)
    return side < amount <= 2 * side


def check_presentation(box: BoxDesign, p: Presentation, enforce_bound: bool = False):
    """Raise if ``p`` is not a legal presentation of ``box``."""
    if isinstance(p, Closed):
        return
    side = box.expandable_length()
    if p.amount <= side:
        raise AmountNotLarger(
            f"box {box.label}: amount {format_scalar(p.amount)} does not exceed "
            f"side {format_scalar(side)}"
        )
    if enforce_bound and p.amount > 2 * side:
        raise BoundExceeded(
            f"box {box.label}: amount {format_scalar(p.amount)} exceeds "
            f"2 x {format_scalar(side)}"
        )


def presented_sides(box: BoxDesign, p: Presentation, enforce_bound: bool = False):
    """Sorted ``(value, original)`` pairs; ``original`` is set only on the
    expanded side. An expanded value tied with closed sides sorts after them."""
    check_presentation(box, p, enforce_bound)
    if isinstance(p, Closed):
        return [(v, None) for v in box.dims]
    j = box.expand_side - 1
    rest = [(v, None) for i, v in enumerate(box.dims) if i != j]
    keys = [v for v, _ in rest]
    pos = bisect.bisect_right(keys, p.amount)
    rest.insert(pos, (p.amount, box.dims[j]))
    return rest


def presented_dims(box: BoxDesign, p: Presentation, enforce_bound: bool = False) -> Dims:
    return Dims(tuple(v for v, _ in presented_sides(box, p, enforce_bound)))
