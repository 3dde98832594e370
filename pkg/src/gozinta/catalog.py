"""Named reference box sets.

Each entry lists boxes in natural order as ``(label, dims, expand_side)``
and arrangements as ``(order, {label: amount})``; boxes missing from the
amount map are closed. Every entry verifies with the expansion bound on.
"""

from __future__ import annotations

from typing import Dict, List

from .core import CLOSED, BoxDesign, Expanded, make_dims
from .nesting import Arrangement, TrickInstance

_ENTRIES = {
    "ex-3-4-5": (
        [("A", (3, 4, 5), 1), ("B", (3, 4, 5), 1)],
        [("AB", {"B": 6}), ("BA", {"A": 6})],
    ),
    "ex-6-8-10": (
        [("A", (6, 8, 10), 1), ("B", (7, 9, 11), None), ("C", (6, 8, 10), 1)],
        [("ABC", {"C": 12}), ("CBA", {"A": 12})],
    ),
    "ex-6-9-10": (
        [("A", (6, 9, 10), 1), ("B", (7, 8, 11), 1)],
        [("AB", {"B": 12}), ("BA", {"A": 12})],
    ),
    "ex-5-7-999": (
        [("A", (5, 7, 999), 1), ("B", (6, 8, 500), 3)],
        [("AB", {"B": 1000}), ("BA", {"A": 9})],
    ),
    "ex-5-7-11": (
        [("A", (5, 7, 11), 1), ("B", (6, 8, 10), 1)],
        [("AB", {"B": 12}), ("BA", {"A": 9})],
    ),
    "ex-5-11-13": (
        [("A", (5, 11, 13), 1), ("B", (7, 10, 12), 1)],
        [("AB", {"B": 14}), ("BA", {"A": 8})],
    ),
    "ex-2d-quad": (
        [("A", (8, 14), 1), ("B", (9, 15), 1), ("C", (11, 13), 2), ("D", (10, 12), 1)],
        [("ABCD", {"C": 16, "D": 20}), ("DCBA", {"B": 12, "A": 16})],
    ),
    "ex-2d-quad-sym": (
        [("A", (9, 13), 1), ("B", (11, 14), 2), ("C", (10, 15), 1), ("D", (9, 13), 1)],
        [("ABCD", {"C": 12, "D": 16}), ("DCBA", {"B": 16, "A": 17})],
    ),
    "ex-2413": (
        [("A", (12, 16, 20), 1), ("B", (13, 17, 21), None),
         ("C", (14, 18, 22), 1), ("D", (15, 19, 23), None)],
        [("ABCD", {}), ("BDAC", {"A": 24, "C": 25})],
    ),
    "ex-2431": (
        [("A", (12, 16, 20), 1), ("B", (13, 17, 21), None),
         ("C", (15, 19, 23), None), ("D", (14, 18, 22), 1)],
        [("ABCD", {"D": 24}), ("BDCA", {"A": 24})],
    ),
    "ex-3241": (
        [("A", (10, 13, 16), 1), ("B", (11, 14, 17), None),
         ("C", (10, 13, 16), 1), ("D", (12, 15, 18), 1)],
        [("ABCD", {"C": 18, "D": 19}), ("CBDA", {"A": 19})],
    ),
    "ex-butBAC": (
        [("A", (10, 13, 16), 1), ("B", (11, 14, 17), 1), ("C", (9, 12, 15), 1)],
        [("ABC", {"C": 18}), ("ACB", {"C": 17, "B": 18}), ("BCA", {"C": 18, "A": 19}),
         ("CAB", {}), ("CBA", {"A": 18})],
    ),
    "ex-butBAC-2d": (
        [("A", (10, 13), 1), ("B", (11, 14), 1), ("C", (9, 12), 1)],
        [("ABC", {"C": 15}), ("ACB", {"C": 15, "B": 17}), ("BCA", {"C": 15, "A": 16}),
         ("CAB", {}), ("CBA", {"A": 16})],
    ),
    "ex-four-joint": (
        [("A", (6, 8, 10), 1), ("B", (7, 9, 11), 1), ("C", (6, 8, 10), 1)],
        [("ABC", {"C": 12}), ("ACB", {"C": 12, "B": 14}), ("CBA", {"A": 12}),
         ("CAB", {"A": 12, "B": 14})],
    ),
    "ex-4-6-6": (
        [("A", (4, 6, 6), 1), ("B", (5, 5, 7), 1)],
        [("AB", {"B": 7}), ("BA", {"A": 8})],
    ),
}


def _build(boxes, arrangements) -> TrickInstance:
    designs = tuple(BoxDesign(lab, make_dims(d), side) for lab, d, side in boxes)
    arrs = []
    for order, amounts in arrangements:
        pres = {lab: Expanded(amounts[lab]) if lab in amounts else CLOSED for lab in order}
        arrs.append(Arrangement(tuple(order), pres, order))
    return TrickInstance(designs, tuple(arrs), enforce_bound=True)


def names() -> List[str]:
    return list(_ENTRIES)


def get(name: str) -> TrickInstance:
    try:
        boxes, arrangements = _ENTRIES[name]
    except KeyError:
        raise KeyError(f"no catalog entry {name!r}; known: {', '.join(_ENTRIES)}") from None
    return _build(boxes, arrangements)


def all_entries() -> Dict[str, TrickInstance]:
    return {name: get(name) for name in _ENTRIES}
