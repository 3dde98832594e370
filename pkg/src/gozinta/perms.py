"""Permutations in one-line notation, as 1-based tuples."""

from __future__ import annotations

import string
from typing import Iterable, Sequence, Tuple

from .errors import InvalidPermutation

Permutation = Tuple[int, ...]
LETTERS = string.ascii_uppercase


def check_perm(p: Sequence[int]) -> Permutation:
    p = tuple(int(v) for v in p)
    if sorted(p) != list(range(1, len(p) + 1)):
        raise InvalidPermutation(f"{p} is not a permutation of 1..{len(p)}")
    return p


def parse_perm(text: str) -> Permutation:
    """Accept ``2413``, ``2,4,1,3`` or ``BDAC``."""
    text = text.strip()
    if not text:
        raise InvalidPermutation("empty permutation")
    if "," in text:
        values = [int(v) for v in text.split(",")]
    elif text.isdigit():
        values = [int(ch) for ch in text]
    elif text.isalpha() and text.isupper():
        values = [LETTERS.index(ch) + 1 for ch in text]
    else:
        raise InvalidPermutation(f"cannot parse permutation {text!r}")
    return check_perm(values)


def format_perm(p: Permutation) -> str:
    if len(p) <= 9:
        return "".join(str(v) for v in p)
    return ",".join(str(v) for v in p)


def perm_letters(p: Permutation) -> str:
    return "".join(LETTERS[v - 1] for v in p)


def identity(k: int) -> Permutation:
    return tuple(range(1, k + 1))


def reverse(k: int) -> Permutation:
    return tuple(range(k, 0, -1))


def inversions(p: Sequence[int]) -> int:
    p = check_perm(p)
    return sum(1 for i in range(len(p)) for j in range(i + 1, len(p)) if p[i] > p[j])


def inverse_perm(p: Sequence[int]) -> Permutation:
    p = check_perm(p)
    q = [0] * len(p)
    for i, v in enumerate(p, start=1):
        q[v - 1] = i
    return tuple(q)


def compose(p: Permutation, q: Permutation) -> Permutation:
    """``(p o q)(i) = p(q(i))``."""
    if len(p) != len(q):
        raise InvalidPermutation("cannot compose permutations of different sizes")
    return tuple(p[v - 1] for v in q)


def concat(p1: Permutation, p2: Permutation) -> Permutation:
    """Append ``p2`` shifted by ``len(p1)`` after ``p1``."""
    n = len(p1)
    return tuple(p1) + tuple(v + n for v in p2)


def split_insert(p: Permutation, x: int) -> Permutation:
    """Replace ``x`` by the pair ``x, x+1`` and bump every larger value."""
    if x not in p:
        raise InvalidPermutation(f"{x} does not occur in {format_perm(p)}")
    out = []
    for v in p:
        if v == x:
            out.extend((x, x + 1))
        else:
            out.append(v + 1 if v > x else v)
    return tuple(out)


def all_perms(k: int) -> Iterable[Permutation]:
    from itertools import permutations

    return permutations(range(1, k + 1))
