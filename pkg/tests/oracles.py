"""Reference deciders for strict linear systems, independent of the solver."""

import itertools
import random
from fractions import Fraction

from gozinta.feasibility import LE, LT, Constraint, LinearSystem


def interval_feasible(system):
    """One variable: intersect the half-lines."""
    (name,) = system.variables
    lo, lo_strict, hi, hi_strict = None, False, None, False
    for con in system.constraints:
        c = dict(con.coeffs).get(name, Fraction(0))
        strict = con.rel == LT
        if c == 0:
            if con.rhs < 0 or (strict and con.rhs == 0):
                return False
            continue
        bound = con.rhs / c
        if c > 0:
            if hi is None or bound < hi or (bound == hi and strict):
                hi, hi_strict = bound, strict
        else:
            if lo is None or bound > lo or (bound == lo and strict):
                lo, lo_strict = bound, strict
    if lo is None or hi is None:
        return True
    return lo < hi or (lo == hi and not lo_strict and not hi_strict)


def difference_feasible(system):
    """Every constraint is ``x - y REL c`` or ``+-x REL c``: no bad cycle.

    Path weights are pairs ``(sum of c, 0 if any edge strict else 1)``, so the
    lexicographic minimum is the tightest bound between two variables.
    """
    names = ["0"] + list(system.variables)
    idx = {v: i for i, v in enumerate(names)}
    n = len(names)
    inf = None
    dist = [[inf] * n for _ in range(n)]

    def relax(i, j, w):
        if dist[i][j] is None or w < dist[i][j]:
            dist[i][j] = w

    for con in system.constraints:
        w = (con.rhs, 0 if con.rel == LT else 1)
        pos = [v for v, c in con.coeffs if c == 1]
        neg = [v for v, c in con.coeffs if c == -1]
        if len(pos) + len(neg) != len(con.coeffs) or len(pos) > 1 or len(neg) > 1:
            raise ValueError("not a difference constraint")
        i = idx[pos[0]] if pos else 0
        j = idx[neg[0]] if neg else 0
        if i == j:
            if w < (0, 1):
                return False
            continue
        # x_i - x_j <= c is an edge j -> i of weight c
        relax(j, i, w)
    for k in range(n):
        for i in range(n):
            if dist[i][k] is None:
                continue
            for j in range(n):
                if dist[k][j] is None:
                    continue
                relax(i, j, (dist[i][k][0] + dist[k][j][0], min(dist[i][k][1], dist[k][j][1])))
    return all(dist[i][i] is None or dist[i][i] >= (0, 1) for i in range(n))


def polygon_feasible(system, box=Fraction(10 ** 4)):
    """Two variables: the strict region is non-empty iff the centroid of the
    vertices of its closure (clipped to a large box) satisfies it."""
    x, y = system.variables
    rows = []
    for con in system.constraints:
        c = dict(con.coeffs)
        rows.append((c.get(x, Fraction(0)), c.get(y, Fraction(0)), con.rhs, con.rel == LT))
    clip = [(1, 0, box, False), (-1, 0, box, False), (0, 1, box, False), (0, -1, box, False)]
    closure = [(a, b, r) for a, b, r, _ in rows + clip]
    vertices = set()
    for (a1, b1, r1), (a2, b2, r2) in itertools.combinations(closure, 2):
        det = a1 * b2 - a2 * b1
        if det == 0:
            continue
        px = (r1 * b2 - r2 * b1) / det
        py = (a1 * r2 - a2 * r1) / det
        if all(a * px + b * py <= r for a, b, r in closure):
            vertices.add((px, py))
    if not vertices:
        return False
    cx = sum(v[0] for v in vertices) / len(vertices)
    cy = sum(v[1] for v in vertices) / len(vertices)
    return all((a * cx + b * cy < r) if strict else (a * cx + b * cy <= r)
               for a, b, r, strict in rows)


def _constraint(coeffs, strict, rhs):
    return Constraint(tuple((v, Fraction(c)) for v, c in coeffs if c), LT if strict else LE,
                      Fraction(rhs))


def random_system(rng: random.Random):
    """Return ``(system, oracle)`` for one of three small system families."""
    kind = rng.choice(("interval", "difference", "plane"))
    if kind == "interval":
        cons = [_constraint([("x", rng.randint(-3, 3))], rng.random() < 0.5, rng.randint(-6, 6))
                for _ in range(rng.randint(1, 5))]
        return LinearSystem(("x",), tuple(cons)), interval_feasible
    if kind == "difference":
        names = [f"v{i}" for i in range(rng.randint(2, 5))]
        cons = []
        for _ in range(rng.randint(1, 8)):
            a, b = rng.sample(names + [None], 2)
            coeffs = [(v, s) for v, s in ((a, 1), (b, -1)) if v is not None]
            cons.append(_constraint(coeffs, rng.random() < 0.5, rng.randint(-4, 4)))
        return LinearSystem(tuple(names), tuple(cons)), difference_feasible
    cons = []
    for _ in range(rng.randint(1, 6)):
        cons.append(_constraint([("x", rng.randint(-3, 3)), ("y", rng.randint(-3, 3))],
                                rng.random() < 0.5, rng.randint(-6, 6)))
    return LinearSystem(("x", "y"), tuple(cons)), polygon_feasible
