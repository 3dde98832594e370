"""Pure-Python case search. The compiled ``_ckernel`` mirrors this file line
for line; keep the two in sync.

Variables are numbered ``box * n + (i - 1)`` for closed sides and
``k * n + t * k + box`` for the amount of ``box`` in arrangement ``t``.
Every case constraint is a difference constraint ``u < v`` or ``u <= v``,
so a system is infeasible exactly when the constraint graph has a cycle
through a strict edge. ``le[u]`` is the bitset of variables reachable from
``u``; ``lt[u]`` those reachable by a path containing a strict edge.

Decisions are taken in case order: arrangement by arrangement, position by
position (innermost first). Choice 0 means closed, ``r >= side`` means
expanded with the amount at sorted rank ``r``. The first feasible leaf in
that order is returned.
"""


def _add_edge(le, lt, a, b, strict):
    """Add ``a -> b``; return False when a strict cycle appears."""
    bit_b = 1 << b
    if strict:
        if lt[a] & bit_b:
            return True
    elif le[a] & bit_b:
        return True
    bit_a = 1 << a
    new_le = bit_b | le[b]
    lt_b = lt[b]
    for u in range(len(le)):
        if u == a:
            via_strict = strict
        elif le[u] & bit_a:
            via_strict = strict or bool(lt[u] & bit_a)
        else:
            continue
        le[u] |= new_le
        lt[u] |= (new_le | lt_b) if via_strict else lt_b
        if lt[u] >> u & 1:
            return False
    return True


def _pres(box, side, choice, i, n, evar):
    """Variable holding coordinate ``i`` (1-based) of a presented box."""
    if choice == 0 or i < side or i > choice:
        return box * n + i - 1
    if i < choice:
        return box * n + i
    return evar


def _choices(d, k, n, side, normalize, chosen, orders):
    t, pos = divmod(d, k)
    ranks = list(range(side, n + 1))
    if not normalize:
        return [0] + ranks
    if t == 0:
        if pos == 0:
            return [0]
        if pos == k - 1:
            return ranks
        return [0] + ranks
    box = orders[t][pos]
    return ranks if chosen[0][box] == 0 else [0]


def _remaining(d, k, n, T, sides, normalize, chosen, orders):
    """Number of leaves below a node whose decisions ``0..d`` are fixed."""
    total = 1
    if not normalize:
        for dd in range(d + 1, T * k):
            box = orders[dd // k][dd % k]
            total *= n - sides[box] + 2
        return total
    done0 = min(d + 1, k)
    done1 = max(d + 1 - k, 0)
    pos0 = {box: p for p, box in enumerate(orders[0])}
    pos1 = {box: p for p, box in enumerate(orders[1])}
    for box in range(k):
        m = n - sides[box] + 1
        if pos0[box] >= done0:
            total *= m if pos0[box] in (0, k - 1) else 2 * m
        elif pos1[box] >= done1:
            total *= m if chosen[0][box] == 0 else 1
    return total


def search_subtree(n, k, orders, sides, normalize):
    """Return ``(chosen, leaves, nodes)``; ``chosen`` is ``None`` when every
    leaf under this side vector is infeasible."""
    T = len(orders)
    V = k * n + T * k
    le = [0] * V
    lt = [0] * V
    for box in range(k):
        for i in range(n - 1):
            _add_edge(le, lt, box * n + i, box * n + i + 1, False)
    depth = T * k
    chosen = [[-1] * k for _ in range(T)]
    leaves = 0
    nodes = 0
    saved = [None] * (depth + 1)
    options = [None] * depth
    cursor = [0] * depth
    d = 0
    saved[0] = (le, lt)
    options[0] = _choices(0, k, n, sides[orders[0][0]], normalize, chosen, orders)
    while d >= 0:
        if cursor[d] >= len(options[d]):
            t, pos = divmod(d, k)
            chosen[t][orders[t][pos]] = -1
            d -= 1
            if d >= 0:
                cursor[d] += 1
            continue
        t, pos = divmod(d, k)
        box = orders[t][pos]
        side = sides[box]
        c = options[d][cursor[d]]
        chosen[t][box] = c
        nodes += 1
        le = list(saved[d][0])
        lt = list(saved[d][1])
        evar = k * n + t * k + box
        ok = True
        if c:
            ok = _add_edge(le, lt, box * n + side - 1, evar, True)
            if ok and c > side:
                ok = _add_edge(le, lt, box * n + c - 1, evar, False)
            if ok and c < n:
                ok = _add_edge(le, lt, evar, box * n + c, False)
        if ok and pos > 0:
            inner = orders[t][pos - 1]
            ci = chosen[t][inner]
            ievar = k * n + t * k + inner
            for i in range(1, n + 1):
                u = _pres(inner, sides[inner], ci, i, n, ievar)
                v = _pres(box, side, c, i, n, evar)
                if not _add_edge(le, lt, u, v, True):
                    ok = False
                    break
        if not ok:
            leaves += _remaining(d, k, n, T, sides, normalize, chosen, orders)
            cursor[d] += 1
            continue
        if d == depth - 1:
            return [row[:] for row in chosen], leaves + 1, nodes
        saved[d + 1] = (le, lt)
        d += 1
        cursor[d] = 0
        t2, pos2 = divmod(d, k)
        options[d] = _choices(d, k, n, sides[orders[t2][pos2]], normalize, chosen, orders)
    return None, leaves, nodes
