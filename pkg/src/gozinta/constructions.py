"""Operations that turn valid box sets into new valid box sets.

Every operation takes and returns a :class:`~gozinta.nesting.TrickInstance`
whose box list is in natural order (box ``i`` is the ``i``-th innermost in
the identity arrangement).
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .core import CLOSED, BoxDesign, Closed, Expanded, ScalarLike, make_dims, to_scalar
from .errors import (
    DimensionMismatch,
    DimensionTooSmall,
    ElementAbsent,
    NoIsolationGap,
    NonPositiveConstant,
    UnverifiedInput,
    ValueOutsideGap,
)
from .nesting import Arrangement, TrickInstance, verify_trick
from .perms import LETTERS, Permutation, identity, perm_letters


def _require_verified(w: TrickInstance, enforce_bound: bool = False) -> None:
    report = verify_trick(w, enforce_bound=enforce_bound)
    if not report.ok:
        raise UnverifiedInput(f"input does not verify: {report.violations[0]}")


def _arrangement_for(w: TrickInstance, perm: Permutation) -> Arrangement:
    for arr in w.arrangements:
        if w.perm_of(arr) == tuple(perm):
            return arr
    raise ElementAbsent(f"instance has no arrangement for {perm_letters(perm)}")


def _only_nontrivial(w: TrickInstance) -> Permutation:
    ident = identity(len(w.boxes))
    others = sorted({w.perm_of(a) for a in w.arrangements} - {ident})
    if len(others) > 1:
        raise ValueError("instance realises several permutations; name the one to use")
    return others[0] if others else ident


def _relabelled(boxes: Sequence[BoxDesign], arrangements: Sequence[Tuple[Sequence[str], Dict]],
                enforce_bound: bool) -> TrickInstance:
    """Rename boxes A, B, C, ... in the given order; rebuild arrangements."""
    rename = {b.label: LETTERS[i] for i, b in enumerate(boxes)}
    new_boxes = tuple(BoxDesign(rename[b.label], b.dims, b.expand_side) for b in boxes)
    new_arrs = []
    for order, presentation in arrangements:
        order = tuple(rename[lab] for lab in order)
        pres = {rename[lab]: p for lab, p in presentation.items()}
        new_arrs.append(Arrangement(order, pres, "".join(order)))
    return TrickInstance(new_boxes, tuple(new_arrs), enforce_bound)


def single_box(dims, expand_side: Optional[int] = 1) -> TrickInstance:
    box = BoxDesign("A", make_dims(dims), expand_side)
    return TrickInstance((box,), (Arrangement(("A",), {"A": CLOSED}),))


def map_values(w: TrickInstance, f: Callable[[Fraction], Fraction]) -> TrickInstance:
    """Apply ``f`` to every closed side and every expanded amount."""
    boxes = tuple(BoxDesign(b.label, make_dims(f(v) for v in b.dims), b.expand_side)
                  for b in w.boxes)
    arrs = []
    for arr in w.arrangements:
        pres = {lab: (Expanded(f(p.amount)) if isinstance(p, Expanded) else p)
                for lab, p in arr.presentation.items()}
        arrs.append(Arrangement(arr.order, pres, arr.name))
    return TrickInstance(boxes, tuple(arrs), w.enforce_bound)


def scale(w: TrickInstance, c: ScalarLike) -> TrickInstance:
    c = to_scalar(c)
    if c <= 0:
        raise NonPositiveConstant(f"scale factor {c} is not positive")
    return map_values(w, lambda v: v * c)


def shift(w: TrickInstance, c: ScalarLike) -> TrickInstance:
    c = to_scalar(c)
    if c <= 0:
        raise NonPositiveConstant(f"shift {c} is not positive")
    return map_values(w, lambda v: v + c)


def restore_expansion_bound(w: TrickInstance) -> TrickInstance:
    """Shift by more than every value so each amount is within twice its side.

    With ``m > s'`` we get ``s' + m < 2m < 2(s + m)``.
    """
    _require_verified(w, enforce_bound=False)
    m = max(w.values()) + 1
    return shift(w, m).with_bound(True)


def boost_concat(w1: TrickInstance, w2: TrickInstance,
                 p1: Optional[Permutation] = None,
                 p2: Optional[Permutation] = None) -> TrickInstance:
    """Nest a shifted copy of ``w2`` around ``w1``; realises ``p1`` followed
    by ``p2 + len(p1)``."""
    if w1.dim != w2.dim:
        raise DimensionMismatch(f"cannot concatenate {w1.dim}-D and {w2.dim}-D sets")
    _require_verified(w1)
    _require_verified(w2)
    p1 = tuple(p1) if p1 is not None else _only_nontrivial(w1)
    p2 = tuple(p2) if p2 is not None else _only_nontrivial(w2)
    c = math.ceil(max(w1.values())) + 1
    outer = shift(w2, c)
    lower = {b.label: "1" + b.label for b in w1.boxes}
    upper = {b.label: "2" + b.label for b in outer.boxes}
    boxes = [BoxDesign(lower[b.label], b.dims, b.expand_side) for b in w1.boxes]
    boxes += [BoxDesign(upper[b.label], b.dims, b.expand_side) for b in outer.boxes]
    pairs = [(identity(len(w1.boxes)), identity(len(w2.boxes)))]
    if (p1, p2) != pairs[0]:
        pairs.append((p1, p2))
    arrangements = []
    for q1, q2 in pairs:
        a1 = _arrangement_for(w1, q1)
        a2 = _arrangement_for(outer, q2)
        order = [lower[lab] for lab in a1.order] + [upper[lab] for lab in a2.order]
        pres = {lower[lab]: p for lab, p in a1.presentation.items()}
        pres.update({upper[lab]: p for lab, p in a2.presentation.items()})
        arrangements.append((order, pres))
    return _relabelled(boxes, arrangements, w1.enforce_bound and w2.enforce_bound)


def smallest_gap(w: TrickInstance) -> Optional[Fraction]:
    values = sorted(set(w.values()))
    gaps = [b - a for a, b in zip(values, values[1:])]
    return min(gaps) if gaps else None


def boost_duplicate(w: TrickInstance, x: int) -> TrickInstance:
    """Add a copy of box ``x`` grown by half the smallest gap, nested right
    outside box ``x`` in every arrangement."""
    _require_verified(w)
    k = len(w.boxes)
    if not 1 <= x <= k:
        raise ElementAbsent(f"element {x} is not in 1..{k}")
    d = smallest_gap(w)
    eps = d / 2 if d is not None else Fraction(1, 2)
    src = w.boxes[x - 1]
    twin = BoxDesign(src.label + "+", make_dims(v + eps for v in src.dims), src.expand_side)
    boxes = list(w.boxes[:x]) + [twin] + list(w.boxes[x:])
    arrangements = []
    for arr in w.arrangements:
        order = []
        for lab in arr.order:
            order.append(lab)
            if lab == src.label:
                order.append(twin.label)
        pres = dict(arr.presentation)
        p = arr.presentation[src.label]
        pres[twin.label] = Expanded(p.amount + eps) if isinstance(p, Expanded) else CLOSED
        arrangements.append((order, pres))
    return _relabelled(boxes, arrangements, w.enforce_bound)


def rebase(w: TrickInstance, pivot: int) -> TrickInstance:
    """Relabel so arrangement ``pivot`` becomes the natural order."""
    by_label = {b.label: b for b in w.boxes}
    base = w.arrangements[pivot]
    boxes = [by_label[lab] for lab in base.order]
    arrs = [w.arrangements[pivot]] + [a for i, a in enumerate(w.arrangements) if i != pivot]
    return _relabelled(boxes, [(a.order, a.presentation) for a in arrs], w.enforce_bound)


def boost_inverse(w: TrickInstance, p: Optional[Permutation] = None) -> TrickInstance:
    """Same boxes, relabelled so that ``p`` becomes the identity; the old
    natural order then reads as ``p`` inverse."""
    _require_verified(w)
    p = tuple(p) if p is not None else _only_nontrivial(w)
    for i, arr in enumerate(w.arrangements):
        if w.perm_of(arr) == p:
            return rebase(w, i)
    raise ElementAbsent(f"instance has no arrangement for {perm_letters(p)}")


def reduce_dimension(w: TrickInstance) -> TrickInstance:
    """Drop the largest side of every box and of every presentation.

    A box expanded on side ``j < n`` past its largest side ``a_n`` now
    expands only to ``a_n``; a box expanding its largest side never expands.
    """
    n = w.dim
    if n < 3:
        raise DimensionTooSmall("need at least 3 dimensions to drop one")
    _require_verified(w)
    boxes = []
    new_side = {}
    for b in w.boxes:
        j = b.expand_side
        keep = j if (j is not None and j < n) else None
        new_side[b.label] = keep
        boxes.append(BoxDesign(b.label, make_dims(b.dims[:n - 1]), keep))
    arrangements = []
    for arr in w.arrangements:
        pres = {}
        for b in w.boxes:
            p = arr.presentation[b.label]
            j = new_side[b.label]
            if isinstance(p, Closed) or j is None:
                pres[b.label] = CLOSED
                continue
            amount = min(p.amount, b.dims[n - 1])
            pres[b.label] = CLOSED if amount == b.dims[j - 1] else Expanded(amount)
        arrangements.append(Arrangement(arr.order, pres, arr.name))
    return TrickInstance(tuple(boxes), tuple(arrangements), w.enforce_bound)


def _other_values(w: TrickInstance, label: str, side: int) -> List[Fraction]:
    out = []
    for b in w.boxes:
        for i, v in enumerate(b.dims, start=1):
            if not (b.label == label and i == side):
                out.append(v)
    for arr in w.arrangements:
        for p in arr.presentation.values():
            if isinstance(p, Expanded):
                out.append(p.amount)
    return out


def isolation_gap(w: TrickInstance, label: str, side: int) -> Tuple[Fraction, Optional[Fraction]]:
    """Open interval ``(low, high)`` of values no other side or amount hits.

    ``high`` is ``None`` when nothing lies above; ``low`` is 0 when nothing
    lies below.
    """
    s = w.box(label).dims[side - 1]
    others = _other_values(w, label, side)
    if s in others:
        raise NoIsolationGap(f"another side or amount equals {s}")
    below = [v for v in others if v < s]
    above = [v for v in others if v > s]
    return (max(below) if below else Fraction(0), min(above) if above else None)


def replace_gap_side(w: TrickInstance, label: str, side: int, value: ScalarLike,
                     x: Optional[ScalarLike] = None,
                     y: Optional[ScalarLike] = None) -> TrickInstance:
    """Move one side anywhere inside its isolation gap.

    With explicit ``x <= s <= y`` the replacement may be any value in the
    closed interval ``[x, y]``, provided no other value lies in it.
    """
    value = to_scalar(value)
    box = w.box(label)
    s = box.dims[side - 1]
    low, high = isolation_gap(w, label, side)
    if x is not None or y is not None:
        x = to_scalar(x) if x is not None else s
        y = to_scalar(y) if y is not None else s
        if not (x <= s <= y) or x <= low or (high is not None and y >= high):
            raise NoIsolationGap(f"[{x}, {y}] is not an isolation gap around {s}")
        if not x <= value <= y:
            raise ValueOutsideGap(f"{value} is outside [{x}, {y}]")
    elif not (low < value and (high is None or value < high)):
        raise ValueOutsideGap(f"{value} is outside the gap ({low}, {high})")
    if value <= 0:
        raise ValueOutsideGap("sides must stay positive")
    dims = list(box.dims)
    dims[side - 1] = value
    new_box = BoxDesign(label, make_dims(dims), box.expand_side)
    boxes = tuple(new_box if b.label == label else b for b in w.boxes)
    return TrickInstance(boxes, w.arrangements, w.enforce_bound)


def gen_triple(n: int) -> TrickInstance:
    """Three boxes in ``n`` dimensions nesting in natural and reverse order.

    Outer and inner boxes are ``(n, ..., 2n-1)`` expanding the smallest side
    to ``2n``; the middle box sits half a unit above them and never opens.
    """
    if n < 2:
        raise ValueError("dimension must be at least 2")
    ends = make_dims(range(n, 2 * n))
    middle = make_dims(Fraction(2 * i + 1, 2) for i in range(n, 2 * n))
    boxes = (BoxDesign("A", ends, 1), BoxDesign("B", middle, None), BoxDesign("C", ends, 1))
    full = Expanded(2 * n)
    arrs = (
        Arrangement(("A", "B", "C"), {"A": CLOSED, "B": CLOSED, "C": full}),
        Arrangement(("C", "B", "A"), {"A": full, "B": CLOSED, "C": CLOSED}),
    )
    return TrickInstance(boxes, arrs, enforce_bound=True)
