# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled twin of ``_pysearch``; same algorithm with 64-bit reach sets."""

from libc.stdint cimport uint64_t
from libc.stdlib cimport malloc, free
from libc.string cimport memcpy


cdef inline bint add_edge(uint64_t* le, uint64_t* lt, int V, int a, int b, bint strict) nogil:
    cdef uint64_t bit_b = (<uint64_t>1) << b
    cdef uint64_t bit_a = (<uint64_t>1) << a
    cdef uint64_t new_le, lt_b
    cdef int u
    cdef bint via
    if strict:
        if lt[a] & bit_b:
            return True
    elif le[a] & bit_b:
        return True
    new_le = bit_b | le[b]
    lt_b = lt[b]
    for u in range(V):
        if u == a:
            via = strict
        elif le[u] & bit_a:
            via = strict or (lt[u] & bit_a) != 0
        else:
            continue
        le[u] |= new_le
        if via:
            lt[u] |= new_le | lt_b
        else:
            lt[u] |= lt_b
        if (lt[u] >> u) & 1:
            return False
    return True


cdef inline int pres(int box, int side, int choice, int i, int n, int evar) nogil:
    if choice == 0 or i < side or i > choice:
        return box * n + i - 1
    if i < choice:
        return box * n + i
    return evar


def search_subtree(int n, int k, orders, sides, bint normalize):
    """See ``_pysearch.search_subtree``."""
    cdef int T = len(orders)
    cdef int V = k * n + T * k
    cdef int depth = T * k
    if V > 64:
        raise ValueError("compiled kernel handles at most 64 variables")
    cdef int* order = <int*>malloc(depth * sizeof(int))
    cdef int* side = <int*>malloc(k * sizeof(int))
    cdef int* chosen = <int*>malloc(depth * sizeof(int))       # [t * k + box]
    cdef int* opts = <int*>malloc(depth * (n + 1) * sizeof(int))
    cdef int* nopts = <int*>malloc(depth * sizeof(int))
    cdef int* cursor = <int*>malloc(depth * sizeof(int))
    cdef uint64_t* le = <uint64_t*>malloc((depth + 1) * V * sizeof(uint64_t))
    cdef uint64_t* lt = <uint64_t*>malloc((depth + 1) * V * sizeof(uint64_t))
    cdef int t, pos, box, sd, c, i, d, inner, ci, u, v, m, evar, ievar
    cdef bint ok
    cdef uint64_t* cle
    cdef uint64_t* clt
    leaves = 0
    cdef long long nodes = 0
    try:
        for t in range(T):
            for pos in range(k):
                order[t * k + pos] = orders[t][pos]
        for box in range(k):
            side[box] = sides[box]
        for i in range(depth):
            chosen[i] = -1
        for i in range(V):
            le[i] = 0
            lt[i] = 0
        for box in range(k):
            for i in range(n - 1):
                add_edge(le, lt, V, box * n + i, box * n + i + 1, False)

        d = 0
        fill_options(0, k, n, order, side, normalize, chosen, opts, nopts)
        cursor[0] = 0
        while d >= 0:
            t = d // k
            pos = d % k
            box = order[d]
            if cursor[d] >= nopts[d]:
                chosen[t * k + box] = -1
                d -= 1
                if d >= 0:
                    cursor[d] += 1
                continue
            sd = side[box]
            c = opts[d * (n + 1) + cursor[d]]
            chosen[t * k + box] = c
            nodes += 1
            cle = le + (d + 1) * V
            clt = lt + (d + 1) * V
            memcpy(cle, le + d * V, V * sizeof(uint64_t))
            memcpy(clt, lt + d * V, V * sizeof(uint64_t))
            evar = k * n + t * k + box
            ok = True
            if c:
                ok = add_edge(cle, clt, V, box * n + sd - 1, evar, True)
                if ok and c > sd:
                    ok = add_edge(cle, clt, V, box * n + c - 1, evar, False)
                if ok and c < n:
                    ok = add_edge(cle, clt, V, evar, box * n + c, False)
            if ok and pos > 0:
                inner = order[d - 1]
                ci = chosen[t * k + inner]
                ievar = k * n + t * k + inner
                for i in range(1, n + 1):
                    u = pres(inner, side[inner], ci, i, n, ievar)
                    v = pres(box, sd, c, i, n, evar)
                    if not add_edge(cle, clt, V, u, v, True):
                        ok = False
                        break
            if not ok:
                leaves += remaining(d, k, n, T, order, side, normalize, chosen)
                cursor[d] += 1
                continue
            if d == depth - 1:
                result = [[chosen[t * k + box] for box in range(k)] for t in range(T)]
                return result, leaves + 1, nodes
            d += 1
            cursor[d] = 0
            fill_options(d, k, n, order, side, normalize, chosen, opts, nopts)
        return None, leaves, nodes
    finally:
        free(order)
        free(side)
        free(chosen)
        free(opts)
        free(nopts)
        free(cursor)
        free(le)
        free(lt)


cdef void fill_options(int d, int k, int n, int* order, int* side, bint normalize,
                       int* chosen, int* opts, int* nopts) nogil:
    cdef int t = d // k
    cdef int pos = d % k
    cdef int box = order[d]
    cdef int s = side[box]
    cdef int* out = opts + d * (n + 1)
    cdef int cnt = 0
    cdef int r
    cdef bint closed = True
    cdef bint expanded = True
    if normalize:
        if t == 0:
            if pos == 0:
                expanded = False
            elif pos == k - 1:
                closed = False
        else:
            if chosen[box] == 0:
                closed = False
            else:
                expanded = False
    if closed:
        out[cnt] = 0
        cnt += 1
    if expanded:
        for r in range(s, n + 1):
            out[cnt] = r
            cnt += 1
    nopts[d] = cnt


cdef object remaining(int d, int k, int n, int T, int* order, int* side,
                      bint normalize, int* chosen):
    total = 1
    cdef int dd, box, m, p, done0, done1, pos0, pos1
    if not normalize:
        for dd in range(d + 1, T * k):
            total *= n - side[order[dd]] + 2
        return total
    done0 = d + 1 if d + 1 < k else k
    done1 = d + 1 - k if d + 1 > k else 0
    for box in range(k):
        m = n - side[box] + 1
        pos0 = 0
        pos1 = 0
        for p in range(k):
            if order[p] == box:
                pos0 = p
            if order[k + p] == box:
                pos1 = p
        if pos0 >= done0:
            if pos0 == 0 or pos0 == k - 1:
                total *= m
            else:
                total *= 2 * m
        elif pos1 >= done1:
            if chosen[box] == 0:
                total *= m
    return total
