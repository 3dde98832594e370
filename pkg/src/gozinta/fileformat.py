"""Line-oriented text format for box sets.

::

    # comments run to end of line
    box A dims 6 8 10 expand 1
    box B dims 7 9 11
    arrangement ABC order A B C
    show ABC A closed
    show ABC C expanded 12

Numbers may be integers, ``p/q`` or exact decimals. A box without a
``show`` line in some arrangement is closed there. Files starting with the
gzip magic bytes are decompressed transparently.
"""

from __future__ import annotations

import gzip
from fractions import Fraction
from typing import Dict, List, Optional

from .core import CLOSED, BoxDesign, Expanded, format_scalar, make_dims
from .errors import DuplicateLabel, GozintaError, ParseError, UnknownLabel
from .nesting import Arrangement, TrickInstance

GZIP_MAGIC = b"\x1f\x8b"


class _Line:
    def __init__(self, number: int, text: str):
        self.number = number
        self.tokens = []
        self.columns = []
        col = 0
        for part in text.split(" "):
            if part:
                self.tokens.append(part)
                self.columns.append(col + 1)
            col += len(part) + 1

    def error(self, message: str, index: Optional[int] = None, cls=ParseError):
        column = self.columns[index] if index is not None and index < len(self.columns) else None
        return cls(message, self.number, column)

    def number_at(self, index: int) -> Fraction:
        if index >= len(self.tokens):
            raise self.error("missing number")
        try:
            value = Fraction(self.tokens[index])
        except (ValueError, ZeroDivisionError):
            raise self.error(f"bad number {self.tokens[index]!r}", index) from None
        if value <= 0:
            raise self.error(f"{self.tokens[index]} is not positive", index)
        return value

    def int_at(self, index: int) -> int:
        if index >= len(self.tokens) or not self.tokens[index].isdigit():
            raise self.error("expected a positive integer", index)
        return int(self.tokens[index])


def parse(text: str, enforce_bound: bool = True) -> TrickInstance:
    boxes: Dict[str, BoxDesign] = {}
    orders: Dict[str, tuple] = {}
    shows: Dict[str, Dict[str, object]] = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = _Line(number, raw.split("#", 1)[0].replace("\t", " ").rstrip())
        if not line.tokens:
            continue
        kind = line.tokens[0]
        if kind == "box":
            _parse_box(line, boxes)
        elif kind == "arrangement":
            _parse_arrangement(line, boxes, orders, shows)
        elif kind == "show":
            _parse_show(line, boxes, orders, shows)
        else:
            raise line.error(f"unknown directive {kind!r}", 0)
    arrangements = []
    for name, order in orders.items():
        pres = {lab: shows[name].get(lab, CLOSED) for lab in order}
        arrangements.append(Arrangement(order, pres, name))
    if not boxes:
        raise ParseError("no boxes declared")
    try:
        return TrickInstance(tuple(boxes.values()), tuple(arrangements), enforce_bound)
    except GozintaError as exc:
        raise ParseError(str(exc)) from None


def _parse_box(line: _Line, boxes):
    t = line.tokens
    if len(t) < 3 or t[2] != "dims":
        raise line.error("expected: box <label> dims <v1> <v2> ... [expand <index>]")
    label = t[1]
    if label in boxes:
        raise line.error(f"box {label} declared twice", 1, DuplicateLabel)
    end = t.index("expand") if "expand" in t else len(t)
    values = [line.number_at(i) for i in range(3, end)]
    if len(values) < 2:
        raise line.error("a box needs at least 2 sides", 2)
    expand = None
    if end < len(t):
        if end + 2 != len(t):
            raise line.error("expand takes exactly one index", end)
        expand = line.int_at(end + 1)
        if not 1 <= expand <= len(values):
            raise line.error(f"expand index {expand} is outside 1..{len(values)}", end + 1)
    boxes[label] = BoxDesign(label, make_dims(values), expand)


def _parse_arrangement(line: _Line, boxes, orders, shows):
    t = line.tokens
    if len(t) < 4 or t[2] != "order":
        raise line.error("expected: arrangement <name> order <label> ...")
    name = t[1]
    if name in orders:
        raise line.error(f"arrangement {name} declared twice", 1, DuplicateLabel)
    order = tuple(t[3:])
    for i, lab in enumerate(order, start=3):
        if lab not in boxes:
            raise line.error(f"unknown box {lab}", i, UnknownLabel)
        if order.index(lab) != i - 3:
            raise line.error(f"box {lab} repeated", i, DuplicateLabel)
    if set(order) != set(boxes):
        raise line.error(f"arrangement {name} must list every box exactly once")
    orders[name] = order
    shows[name] = {}


def _parse_show(line: _Line, boxes, orders, shows):
    t = line.tokens
    if len(t) < 4:
        raise line.error("expected: show <arrangement> <label> closed|expanded <amount>")
    name, label, state = t[1], t[2], t[3]
    if name not in orders:
        raise line.error(f"unknown arrangement {name}", 1, UnknownLabel)
    if label not in boxes:
        raise line.error(f"unknown box {label}", 2, UnknownLabel)
    if label in shows[name]:
        raise line.error(f"box {label} shown twice in {name}", 2, DuplicateLabel)
    if state == "closed" and len(t) == 4:
        shows[name][label] = CLOSED
    elif state == "expanded" and len(t) == 5:
        box = boxes[label]
        amount = line.number_at(4)
        if box.expand_side is None:
            raise line.error(f"box {label} has no expandable side", 3)
        if amount <= box.dims[box.expand_side - 1]:
            raise line.error(f"amount {t[4]} does not exceed the closed side", 4)
        shows[name][label] = Expanded(amount)
    else:
        raise line.error("expected 'closed' or 'expanded <amount>'", 3)


def render(instance: TrickInstance) -> str:
    out: List[str] = []
    for b in instance.boxes:
        line = f"box {b.label} dims " + " ".join(format_scalar(v) for v in b.dims)
        if b.expand_side is not None:
            line += f" expand {b.expand_side}"
        out.append(line)
    for arr in instance.arrangements:
        out.append(f"arrangement {arr.name} order " + " ".join(arr.order))
    for arr in instance.arrangements:
        for lab in arr.order:
            p = arr.presentation[lab]
            if isinstance(p, Expanded):
                out.append(f"show {arr.name} {lab} expanded {format_scalar(p.amount)}")
            else:
                out.append(f"show {arr.name} {lab} closed")
    return "\n".join(out) + "\n"


def decode(data: bytes) -> str:
    if data[:2] == GZIP_MAGIC:
        data = gzip.decompress(data)
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise ParseError(f"not UTF-8 text: {exc}") from None


def load(path, enforce_bound: bool = True) -> TrickInstance:
    with open(path, "rb") as fh:
        return parse(decode(fh.read()), enforce_bound)


def dump(instance: TrickInstance, path) -> None:
    data = render(instance).encode("utf-8")
    if str(path).endswith(".gz"):
        data = gzip.compress(data, mtime=0)
    with open(path, "wb") as fh:
        fh.write(data)
