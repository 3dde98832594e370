import gzip

import pytest
from hypothesis import given
from hypothesis import strategies as st

from gozinta import catalog
from gozinta.errors import DuplicateLabel, ParseError, UnknownLabel
from gozinta.fileformat import decode, dump, load, parse, render
from gozinta.nesting import verify_trick

TRIPLE = """\
# natural and reverse triple
box A dims 6 8 10 expand 1
box B dims 7 9 11
box C dims 6 8 10 expand 1
arrangement ABC order A B C
arrangement CBA order C B A
show ABC A closed
show ABC B closed
show ABC C expanded 12
show CBA C closed
show CBA B closed
show CBA A expanded 12
"""


def test_parse_triple():
    assert parse(TRIPLE) == catalog.get("ex-6-8-10")


def test_boxes_only():
    w = parse("box A dims 3 4 5\nbox B dims 1 2 3 expand 2\n")
    assert w.arrangements == ()
    assert verify_trick(w).ok


def test_missing_show_means_closed():
    w = parse("box A dims 3 4\nbox B dims 5 6\narrangement AB order A B\n")
    assert w.arrangements[0].state_string() == "CC"


def test_numbers_are_exact():
    w = parse("box A dims 3.5 9/2 5\n")
    assert render(w) == "box A dims 7/2 9/2 5\n"


@pytest.mark.parametrize("text, error, line", [
    ("box A dims 3 4 expand 3", ParseError, 1),
    ("box A dims 3 4\nbox A dims 5 6", DuplicateLabel, 2),
    ("box A dims 3 4\narrangement X order A B", UnknownLabel, 2),
    ("box A dims 3 4\nshow X A closed", UnknownLabel, 2),
    ("box A dims 3 x", ParseError, 1),
    ("box A dims 3 -4", ParseError, 1),
    ("box A dims 3", ParseError, 1),
    ("crate A", ParseError, 1),
    ("box A dims 3 4\narrangement X order A\nshow X A expanded 9", ParseError, 3),
    ("box A dims 3 4 expand 1\narrangement X order A\nshow X A expanded 3", ParseError, 3),
    ("box A dims 3 4\narrangement X order A\nshow X A closed\nshow X A closed",
     DuplicateLabel, 4),
])
def test_parse_errors(text, error, line):
    with pytest.raises(error) as info:
        parse(text)
    assert info.value.line == line


def test_error_column():
    with pytest.raises(ParseError) as info:
        parse("box A dims 3 4 expand 3")
    assert info.value.column == 23


def test_gzip_round_trip(tmp_path):
    w = catalog.get("ex-2d-quad")
    path = tmp_path / "quad.gz"
    dump(w, path)
    assert path.read_bytes()[:2] == b"\x1f\x8b"
    assert load(path) == w
    assert decode(gzip.compress(TRIPLE.encode())) == TRIPLE


@given(st.sampled_from(catalog.names()))
def test_round_trip(name):
    w = catalog.get(name)
    text = render(w)
    assert parse(text) == w
    assert render(parse(text)) == text
