"""Verification of concrete nestings, diagrams, and two-box classification."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .core import (
    BoxDesign,
    Closed,
    Dims,
    Expanded,
    Presentation,
    format_scalar,
    make_dims,
    presented_dims,
    presented_sides,
)
from .errors import (
    AdjacentEqualities,
    DimensionMismatch,
    GozintaError,
    InvalidArrangement,
    NotMutuallyNestable,
)


@dataclass(frozen=True)
class Arrangement:
    """Boxes listed innermost first, with one presentation per label."""

    order: Tuple[str, ...]
    presentation: Mapping[str, Presentation]
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "order", tuple(self.order))
        object.__setattr__(self, "presentation", dict(self.presentation))
        if not self.name:
            object.__setattr__(self, "name", "".join(self.order))
        if len(set(self.order)) != len(self.order):
            raise InvalidArrangement(f"arrangement {self.name}: repeated label")
        if set(self.presentation) != set(self.order):
            raise InvalidArrangement(
                f"arrangement {self.name}: presentations cover "
                f"{sorted(self.presentation)}, order has {sorted(self.order)}"
            )

    def state_string(self) -> str:
        return "".join(
            "C" if isinstance(self.presentation[lab], Closed) else "E"
            for lab in self.order
        )


@dataclass(frozen=True)
class TrickInstance:
    boxes: Tuple[BoxDesign, ...]
    arrangements: Tuple[Arrangement, ...] = ()
    enforce_bound: bool = True

    def __post_init__(self):
        object.__setattr__(self, "boxes", tuple(self.boxes))
        object.__setattr__(self, "arrangements", tuple(self.arrangements))
        labels = [b.label for b in self.boxes]
        if len(set(labels)) != len(labels):
            raise InvalidArrangement(f"duplicate box labels in {labels}")
        dims = {b.n for b in self.boxes}
        if len(dims) > 1:
            raise DimensionMismatch(f"boxes mix dimensions {sorted(dims)}")
        for arr in self.arrangements:
            if set(arr.order) != set(labels) or len(arr.order) != len(labels):
                raise InvalidArrangement(
                    f"arrangement {arr.name} does not cover labels {labels}"
                )

    @property
    def labels(self) -> Tuple[str, ...]:
        return tuple(b.label for b in self.boxes)

    @property
    def dim(self) -> int:
        return self.boxes[0].n if self.boxes else 0

    def box(self, label: str) -> BoxDesign:
        for b in self.boxes:
            if b.label == label:
                return b
        raise KeyError(label)

    def perm_of(self, arr: Arrangement) -> Tuple[int, ...]:
        """One-line permutation of ``arr`` relative to the box list order."""
        index = {lab: i + 1 for i, lab in enumerate(self.labels)}
        return tuple(index[lab] for lab in arr.order)

    def values(self) -> List[Fraction]:
        """Every closed side and every expanded amount."""
        out = [v for b in self.boxes for v in b.dims]
        for arr in self.arrangements:
            for p in arr.presentation.values():
                if isinstance(p, Expanded):
                    out.append(p.amount)
        return out

    def with_bound(self, enforce_bound: bool) -> "TrickInstance":
        return TrickInstance(self.boxes, self.arrangements, enforce_bound)


@dataclass(frozen=True)
class Violation:
    arrangement: int
    inner: Optional[str] = None
    outer: Optional[str] = None
    coordinate: Optional[int] = None  # 1-based
    message: str = ""

    def __str__(self):
        if self.coordinate is not None:
            return (
                f"arrangement {self.arrangement}: {self.inner} does not fit in "
                f"{self.outer} at coordinate {self.coordinate}"
            )
        return f"arrangement {self.arrangement}: {self.message}"


@dataclass(frozen=True)
class VerifyReport:
    violations: Tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.ok


def _box_map(boxes) -> Dict[str, BoxDesign]:
    return {b.label: b for b in boxes}


def verify_arrangement(boxes: Sequence[BoxDesign], arr: Arrangement,
                       enforce_bound: bool, index: int = 0) -> VerifyReport:
    """Check every adjacent (inner, outer) pair for strict domination."""
    by_label = _box_map(boxes)
    if set(arr.order) != set(by_label):
        raise InvalidArrangement(f"arrangement {arr.name} does not match the boxes")
    violations = []
    presented = {}
    for lab in arr.order:
        try:
            presented[lab] = presented_dims(by_label[lab], arr.presentation[lab], enforce_bound)
        except GozintaError as exc:
            violations.append(Violation(index, message=str(exc)))
    for inner, outer in zip(arr.order, arr.order[1:]):
        if inner not in presented or outer not in presented:
            continue
        for i, (u, w) in enumerate(zip(presented[inner], presented[outer])):
            if not w > u:
                violations.append(Violation(index, inner, outer, i + 1))
    return VerifyReport(tuple(violations))


def verify_trick(instance: TrickInstance, enforce_bound: Optional[bool] = None) -> VerifyReport:
    if enforce_bound is None:
        enforce_bound = instance.enforce_bound
    violations = []
    for i, arr in enumerate(instance.arrangements):
        violations.extend(verify_arrangement(instance.boxes, arr, enforce_bound, i).violations)
    return VerifyReport(tuple(violations))


def render_diagram(boxes: Sequence[BoxDesign], arr: Arrangement) -> str:
    """Outermost box on top; the expanded side prints as ``value(original)``."""
    by_label = _box_map(boxes)
    lines = []
    for lab in reversed(arr.order):
        parts = []
        for value, original in presented_sides(by_label[lab], arr.presentation[lab]):
            text = format_scalar(value)
            if original is not None:
                text += f"({format_scalar(original)})"
            parts.append(text)
        lines.append(f"{lab}: " + " × ".join(parts))
    return "\n".join(lines) + "\n"


def render_instance_diagrams(instance: TrickInstance) -> str:
    blocks = []
    for arr in instance.arrangements:
        blocks.append(f"[{arr.name}]\n" + render_diagram(instance.boxes, arr))
    return "\n".join(blocks)


# --- two boxes -------------------------------------------------------------

_TYPE_CHAINS = {
    1: (("a1", "b1", "a2", "b2", "a3", "b3"), ("<=", "<", "<=", "<", "<=")),
    2: (("a1", "b1", "a2", "b2", "b3", "a3"), ("<=", "<", "<=", "<=", "<")),
    3: (("a1", "b1", "b2", "a2", "a3", "b3"), ("<=", "<=", "<", "<=", "<=")),
    4: (("a1", "b1", "b2", "a2", "b3", "a3"), ("<=", "<=", "<", "<", "<")),
}


@dataclass(frozen=True)
class PairType:
    type_id: int
    chain: Tuple[Tuple[str, Fraction], ...]
    relations: Tuple[str, ...]  # instantiated: "<" or "="
    swapped: bool = False

    def __str__(self):
        out = f"{self.chain[0][0]}={format_scalar(self.chain[0][1])}"
        for rel, (name, value) in zip(self.relations, self.chain[1:]):
            out += f" {rel} {name}={format_scalar(value)}"
        return f"Type {self.type_id}: {out}"


def _best_presentation(box: Dims, other: Dims, enforce_bound: bool) -> bool:
    """Can ``box`` (closed or expanding one side) strictly contain closed ``other``?

    Presented dims grow monotonically with the amount, so the largest legal
    amount is the only one worth trying.
    """
    if all(x > y for x, y in zip(box, other)):
        return True
    n = len(box)
    unbounded = max(max(box), max(other)) + 1
    for j in range(n):
        amount = 2 * box[j] if enforce_bound else unbounded
        if amount <= box[j]:
            continue
        design = BoxDesign("X", box, j + 1)
        if all(x > y for x, y in zip(presented_dims(design, Expanded(amount)), other)):
            return True
    return False


def pair_mutually_fits(a: Dims, b: Dims, enforce_bound: bool) -> bool:
    a = a if isinstance(a, Dims) else make_dims(a)
    b = b if isinstance(b, Dims) else make_dims(b)
    if len(a) != len(b):
        raise DimensionMismatch(f"cannot pair {len(a)}-D with {len(b)}-D")
    return _best_presentation(a, b, enforce_bound) and _best_presentation(b, a, enforce_bound)


def _holds(values, rels):
    return all((x < y) if r == "<" else (x <= y) for x, y, r in zip(values, values[1:], rels))


def classify_pair(a: Dims, b: Dims, enforce_bound: bool = False) -> PairType:
    a = a if isinstance(a, Dims) else make_dims(a)
    b = b if isinstance(b, Dims) else make_dims(b)
    if len(a) != 3 or len(b) != 3:
        raise DimensionMismatch("pair classification is defined for 3-D boxes only")
    if not pair_mutually_fits(a, b, enforce_bound):
        raise NotMutuallyNestable(f"{a} and {b} cannot contain each other")
    swapped = a[0] > b[0]
    if swapped:
        a, b = b, a
    env = {"a1": a[0], "a2": a[1], "a3": a[2], "b1": b[0], "b2": b[1], "b3": b[2]}
    for type_id, (names, rels) in _TYPE_CHAINS.items():
        values = [env[nm] for nm in names]
        if not _holds(values, rels):
            continue
        inst = tuple("=" if x == y else "<" for x, y in zip(values, values[1:]))
        if any(r1 == r2 == "=" for r1, r2 in zip(inst, inst[1:])):
            raise AdjacentEqualities(f"chain for type {type_id} has adjacent equalities")
        return PairType(type_id, tuple(zip(names, values)), inst, swapped)
    raise NotMutuallyNestable(f"{a} and {b} match none of the four chains")
