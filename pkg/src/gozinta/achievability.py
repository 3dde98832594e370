"""Which permutation sets can one set of boxes realise?

A *case* fixes, for every box, the expandable side, and for every
(box, arrangement) whether the box is closed or expanded and, if expanded,
the sorted rank of the expanded value. Inside one case every requirement is
a linear (in fact difference) inequality, so the question becomes strict
linear feasibility. The search walks the cases in a fixed lexicographic
order, prunes every prefix whose partial system is already infeasible, and
hands the first surviving case to the exact solver for a witness.
"""

from __future__ import annotations

import bisect
import itertools
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

from . import kernel
from .core import CLOSED, BoxDesign, Dims, Expanded, make_dims
from .errors import (
    BudgetExceeded,
    EngineDisagreement,
    InconsistentCase,
    InvalidPermutation,
    NormalizeUnsupported,
    NotVerified,
)
from .feasibility import Feasible, LinearSystem, SystemBuilder, solve
from .nesting import Arrangement, TrickInstance, verify_trick
from .perms import (
    LETTERS,
    Permutation,
    check_perm,
    identity,
    perm_letters,
    reverse,
)


@dataclass(frozen=True)
class PermSpec:
    """``k`` boxes in dimension ``dim`` realising ``perms`` (identity implied)."""

    k: int
    dim: int
    perms: Tuple[Permutation, ...] = ()
    include_identity: bool = True

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("need at least one box")
        if self.dim < 2:
            raise ValueError("dimension must be at least 2")
        if self.k > len(LETTERS):
            raise ValueError(f"at most {len(LETTERS)} boxes are supported")
        perms = {check_perm(p) for p in self.perms}
        for p in perms:
            if len(p) != self.k:
                raise InvalidPermutation(f"{p} is not a permutation of {self.k} elements")
        if not self.include_identity:
            if not perms:
                raise ValueError("need at least one arrangement")
            object.__setattr__(self, "perms", tuple(sorted(perms)))
            return
        ident = identity(self.k)
        perms.discard(ident)
        object.__setattr__(self, "perms", (ident,) + tuple(sorted(perms)))

    @property
    def arrangements(self) -> Tuple[Permutation, ...]:
        return self.perms

    @property
    def labels(self) -> Tuple[str, ...]:
        return tuple(LETTERS[:self.k])

    def is_natural_reverse(self) -> bool:
        return self.k >= 2 and self.perms == (identity(self.k), reverse(self.k))


@dataclass(frozen=True)
class CaseAssignment:
    """``states[t][b]`` is 0 for closed, else the rank of the expanded value."""

    expand_side: Tuple[int, ...]
    states: Tuple[Tuple[int, ...], ...]

    def state(self, box: int, t: int) -> str:
        return "C" if self.states[t][box] == 0 else "E"

    def rank(self, box: int, t: int) -> Optional[int]:
        r = self.states[t][box]
        return r or None

    def key(self, spec: PermSpec) -> tuple:
        """Position of this case in the enumeration order."""
        out = list(self.expand_side)
        for t, perm in enumerate(spec.arrangements):
            out.extend(self.states[t][v - 1] for v in perm)
        return tuple(out)


def _choice_lists(spec: PermSpec, sides: Sequence[int]):
    n = spec.dim
    lists = []
    for perm in spec.arrangements:
        for v in perm:
            lists.append([0] + list(range(sides[v - 1], n + 1)))
    return lists


def _passes_normalization(spec: PermSpec, states) -> bool:
    k = spec.k
    natural = states[0]
    rev = states[1]
    for b in range(k):
        if (natural[b] == 0) == (rev[b] == 0):
            return False
    return natural[0] == 0 and natural[k - 1] != 0


def enumerate_cases(spec: PermSpec, normalize: bool = False) -> Iterator[CaseAssignment]:
    """Every case in the search order; ``normalize`` keeps only cases where
    each box is closed in exactly one of the two orders, the innermost box is
    closed and the outermost expanded."""
    if normalize and not spec.is_natural_reverse():
        raise NormalizeUnsupported("normalization only applies to {identity, reverse}")
    k, n = spec.k, spec.dim
    for sides in itertools.product(range(1, n + 1), repeat=k):
        for flat in itertools.product(*_choice_lists(spec, sides)):
            states = []
            for t, perm in enumerate(spec.arrangements):
                row = [0] * k
                for pos, v in enumerate(perm):
                    row[v - 1] = flat[t * k + pos]
                states.append(tuple(row))
            if normalize and not _passes_normalization(spec, states):
                continue
            yield CaseAssignment(tuple(sides), tuple(states))


def case_count(spec: PermSpec, normalize: bool = False) -> int:
    """Size of :func:`enumerate_cases` by a closed formula."""
    n, k, T = spec.dim, spec.k, len(spec.arrangements)
    if not normalize:
        per_box = sum((n - j + 2) ** T for j in range(1, n + 1))
        return per_box ** k
    if not spec.is_natural_reverse():
        raise NormalizeUnsupported("normalization only applies to {identity, reverse}")
    expanded = sum(n - j + 1 for j in range(1, n + 1))
    return expanded ** k * 2 ** (k - 2)


# --- case systems ----------------------------------------------------------


def side_var(label: str, i: int) -> str:
    return f"{label}{i}"


def amount_var(label: str, j: int, perm: Permutation) -> str:
    return f"{label}{j}'({perm_letters(perm)})"


def _presented_terms(label, side, rank, n, perm):
    """Variable names of a presented box, sorted by the case's rank."""
    if rank == 0:
        return [side_var(label, i) for i in range(1, n + 1)]
    rest = [side_var(label, i) for i in range(1, n + 1) if i != side]
    rest.insert(rank - 1, amount_var(label, side, perm))
    return rest


def case_to_system(case: CaseAssignment, spec: PermSpec, *,
                   fixed_dims: Optional[Sequence[Dims]] = None,
                   enforce_bound: bool = False,
                   lower_bound: Optional[Fraction] = Fraction(1)) -> LinearSystem:
    """Linear system whose solutions are exactly the realisations of ``case``.

    ``fixed_dims`` pins every closed side; ``enforce_bound`` adds the
    expansion bound (off by default, it never changes feasibility once the
    boxes may be shifted).
    """
    n, k = spec.dim, spec.k
    if len(case.expand_side) != k or len(case.states) != len(spec.arrangements):
        raise InconsistentCase("case shape does not match the spec")
    labels = spec.labels
    sb = SystemBuilder()
    for b, label in enumerate(labels):
        side = case.expand_side[b]
        if not 1 <= side <= n:
            raise InconsistentCase(f"box {label}: side {side} outside 1..{n}")
        for i in range(1, n + 1):
            sb.var(side_var(label, i))
        for i in range(1, n):
            sb.le(side_var(label, i), side_var(label, i + 1))
        if lower_bound is not None:
            sb.le(lower_bound, side_var(label, 1))
        if fixed_dims is not None:
            for i in range(1, n + 1):
                value = Fraction(fixed_dims[b][i - 1])
                sb.le(side_var(label, i), value)
                sb.le(value, side_var(label, i))
    for t, perm in enumerate(spec.arrangements):
        for b, label in enumerate(labels):
            rank = case.states[t][b]
            side = case.expand_side[b]
            if rank == 0:
                continue
            if not side <= rank <= n:
                raise InconsistentCase(f"box {label}: rank {rank} below side {side}")
            e = sb.var(amount_var(label, side, perm))
            sb.lt(side_var(label, side), e)
            if rank > side:
                sb.le(side_var(label, rank), e)
            if rank < n:
                sb.le(e, side_var(label, rank + 1))
            if enforce_bound:
                sb.le(e, {side_var(label, side): 2})
        for inner, outer in zip(perm, perm[1:]):
            ui, wi = inner - 1, outer - 1
            lo = _presented_terms(labels[ui], case.expand_side[ui], case.states[t][ui], n, perm)
            hi = _presented_terms(labels[wi], case.expand_side[wi], case.states[t][wi], n, perm)
            for u, w in zip(lo, hi):
                sb.lt(u, w)
    return sb.build()


def instance_from_assignment(case: CaseAssignment, spec: PermSpec,
                             assignment: Dict[str, Fraction],
                             integral: bool = True) -> TrickInstance:
    n = spec.dim
    labels = spec.labels
    values = dict(assignment)
    if integral:
        scale = 1
        for v in values.values():
            scale = math.lcm(scale, Fraction(v).denominator)
        values = {name: Fraction(v) * scale for name, v in values.items()}
    boxes = []
    for b, label in enumerate(labels):
        dims = make_dims(values[side_var(label, i)] for i in range(1, n + 1))
        boxes.append(BoxDesign(label, dims, case.expand_side[b]))
    arrangements = []
    for t, perm in enumerate(spec.arrangements):
        presentation = {}
        for b, label in enumerate(labels):
            if case.states[t][b] == 0:
                presentation[label] = CLOSED
            else:
                presentation[label] = Expanded(values[amount_var(label, case.expand_side[b], perm)])
        order = tuple(labels[v - 1] for v in perm)
        arrangements.append(Arrangement(order, presentation, perm_letters(perm)))
    return TrickInstance(tuple(boxes), tuple(arrangements), enforce_bound=False)


# --- search ----------------------------------------------------------------


@dataclass(frozen=True)
class Witness:
    instance: TrickInstance
    case: CaseAssignment
    cases_checked: int = 0
    nodes: int = 0

    def __bool__(self):
        return True


@dataclass(frozen=True)
class ProvedInfeasible:
    cases_checked: int
    nodes: int = 0

    def __bool__(self):
        return False


SearchResult = Union[Witness, ProvedInfeasible]


def _kernel_orders(spec: PermSpec):
    return [[v - 1 for v in perm] for perm in spec.arrangements]


def _subtree_job(args):
    n, k, orders, sides, normalize, backend = args
    return kernel.search_subtree(n, k, orders, list(sides), normalize, backend)


def _default_workers() -> int:
    raw = os.environ.get("GOZINTA_THREADS", "")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _search(spec: PermSpec, normalize: bool, workers: Optional[int], backend: Optional[str]):
    """Yield ``(sides, chosen, leaves, nodes)`` per side vector, in order."""
    if normalize and not spec.is_natural_reverse():
        raise NormalizeUnsupported("normalization only applies to {identity, reverse}")
    n, k = spec.dim, spec.k
    orders = _kernel_orders(spec)
    jobs = [(n, k, orders, sides, normalize, backend)
            for sides in itertools.product(range(1, n + 1), repeat=k)]
    workers = workers or _default_workers()
    if workers <= 1:
        for job in jobs:
            yield (job[3],) + tuple(_subtree_job(job))
        return
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(_subtree_job, job) for job in jobs]
        try:
            for job, fut in zip(jobs, futures):
                yield (job[3],) + tuple(fut.result())
        finally:
            for fut in futures:
                fut.cancel()


def _case_from_kernel(spec: PermSpec, sides, chosen) -> CaseAssignment:
    return CaseAssignment(tuple(sides), tuple(tuple(row) for row in chosen))


def witness_for_case(case: CaseAssignment, spec: PermSpec) -> TrickInstance:
    """Solve one case exactly and return the re-verified instance."""
    result = solve(case_to_system(case, spec))
    if not isinstance(result, Feasible):
        raise EngineDisagreement(f"kernel accepted case {case} but the solver rejects it")
    instance = instance_from_assignment(case, spec, result.assignment)
    report = verify_trick(instance, enforce_bound=False)
    if not report.ok:
        raise EngineDisagreement(
            f"witness for case {case} fails verification: {report.violations[0]}"
        )
    return instance


def jointly_achievable(spec: PermSpec, normalize: bool = False,
                       workers: Optional[int] = None,
                       backend: Optional[str] = None) -> SearchResult:
    """First feasible case as a witness, or a count of the cases refuted."""
    total = 0
    nodes = 0
    for sides, chosen, leaves, n_nodes in _search(spec, normalize, workers, backend):
        total += leaves
        nodes += n_nodes
        if chosen is not None:
            case = _case_from_kernel(spec, sides, chosen)
            return Witness(witness_for_case(case, spec), case, total, nodes)
    expected = case_count(spec, normalize)
    if total != expected:
        raise EngineDisagreement(f"refuted {total} cases, expected {expected}")
    return ProvedInfeasible(total, nodes)


def achievable(spec: PermSpec, normalize: bool = False,
               workers: Optional[int] = None,
               backend: Optional[str] = None) -> SearchResult:
    return jointly_achievable(spec, normalize, workers, backend)


@dataclass(frozen=True)
class ImpossibilityReport:
    k: int
    dim: int
    perms: Tuple[Permutation, ...]
    cases_checked: int
    cases_total: int
    nodes: int
    all_infeasible: bool
    feasible_case: Optional[CaseAssignment] = None


def verify_impossibility(k: int, dim: int, perms: Iterable[Sequence[int]] = (),
                         workers: Optional[int] = None,
                         backend: Optional[str] = None) -> ImpossibilityReport:
    """Exhaust the unnormalised case space; stop at the first feasible case."""
    perms = tuple(perms) or (reverse(k),)
    spec = PermSpec(k, dim, perms)
    checked = 0
    nodes = 0
    for sides, chosen, leaves, n_nodes in _search(spec, False, workers, backend):
        checked += leaves
        nodes += n_nodes
        if chosen is not None:
            case = _case_from_kernel(spec, sides, chosen)
            witness_for_case(case, spec)
            return ImpossibilityReport(k, dim, spec.perms, checked, case_count(spec),
                                       nodes, False, case)
    return ImpossibilityReport(k, dim, spec.perms, checked, case_count(spec), nodes,
                               checked == case_count(spec))


def naive_first_case(spec: PermSpec, normalize: bool = False) -> Optional[CaseAssignment]:
    """Reference scan: solve every case in order. Only usable on tiny specs."""
    for case in enumerate_cases(spec, normalize):
        if solve(case_to_system(case, spec)):
            return case
    return None


def pattern_report(instance: TrickInstance) -> Tuple[str, ...]:
    """C/E string per arrangement, innermost first."""
    if not verify_trick(instance).ok:
        raise NotVerified("pattern report needs a verified instance")
    return tuple(arr.state_string() for arr in instance.arrangements)


def observation_form(instance: TrickInstance) -> TrickInstance:
    """Rewrite a verified instance so that no box is expanded everywhere.

    Three moves, each keeping every nesting valid (bound off):
    the innermost box of every arrangement is closed; a box expanded in
    every arrangement is re-based on its smallest presentation; a box still
    closed everywhere opens by half the smallest gap between distinct values
    in the first arrangement where it is not innermost.
    """
    if not verify_trick(instance, enforce_bound=False).ok:
        raise NotVerified("observation form needs a verified instance")
    boxes = {b.label: b for b in instance.boxes}
    pres = [dict(arr.presentation) for arr in instance.arrangements]
    for arr, p in zip(instance.arrangements, pres):
        p[arr.order[0]] = CLOSED
    for label, box in list(boxes.items()):
        amounts = [p[label].amount for p in pres if isinstance(p[label], Expanded)]
        if not pres or len(amounts) < len(pres):
            continue
        m = min(amounts)
        rest = list(box.dims)
        del rest[box.expand_side - 1]
        side = bisect.bisect_right(rest, m) + 1
        boxes[label] = BoxDesign(label, make_dims(rest[:side - 1] + [m] + rest[side - 1:]), side)
        for p in pres:
            if p[label].amount == m:
                p[label] = CLOSED
    values = sorted({v for b in boxes.values() for v in b.dims}
                    | {q.amount for p in pres for q in p.values() if isinstance(q, Expanded)})
    gaps = [b - a for a, b in zip(values, values[1:])]
    eps = min(gaps) / 2 if gaps else Fraction(1, 2)
    for label, box in list(boxes.items()):
        if any(isinstance(p[label], Expanded) for p in pres):
            continue
        for arr, p in zip(instance.arrangements, pres):
            if arr.order[0] != label:
                side = box.expand_side or 1
                if box.expand_side is None:
                    boxes[label] = BoxDesign(label, box.dims, side)
                p[label] = Expanded(box.dims[side - 1] + eps)
                break
    out = TrickInstance(
        tuple(boxes[lab] for lab in instance.labels),
        tuple(Arrangement(arr.order, p, arr.name) for arr, p in zip(instance.arrangements, pres)),
        enforce_bound=False,
    )
    if not verify_trick(out).ok:
        raise EngineDisagreement("observation form broke a nesting")
    return out


# --- fixed dimensions ------------------------------------------------------


def realizations_at_fixed_dims(dims: Sequence[Dims], perms: Sequence[Permutation],
                               enforce_bound: bool,
                               expand_sides: Optional[Sequence[int]] = None
                               ) -> Optional[TrickInstance]:
    """Search every expansion case with the closed sides pinned.

    ``perms`` lists the arrangements to realise (no identity is implied
    here). Expand sides are shared across arrangements; amounts are free.
    Returns the first realising instance or ``None``.
    """
    dims = [d if isinstance(d, Dims) else make_dims(d) for d in dims]
    k, n = len(dims), len(dims[0])
    perms = [check_perm(p) for p in perms]
    labels = LETTERS[:k]
    side_choices = [expand_sides] if expand_sides else itertools.product(range(1, n + 1), repeat=k)
    for sides in side_choices:
        arrangements = []
        for perm in perms:
            found = _fixed_arrangement(dims, sides, perm, n, enforce_bound)
            if found is None:
                break
            arrangements.append(found)
        else:
            boxes = tuple(BoxDesign(labels[b], dims[b], sides[b]) for b in range(k))
            return TrickInstance(boxes, tuple(arrangements), enforce_bound)
    return None


def _fixed_arrangement(dims, sides, perm, n, enforce_bound):
    k = len(dims)
    single = PermSpec(k, n, (perm,), include_identity=False)
    labels = single.labels
    choice_lists = [[0] + list(range(sides[v - 1], n + 1)) for v in perm]
    for flat in itertools.product(*choice_lists):
        row = [0] * k
        for pos, v in enumerate(perm):
            row[v - 1] = flat[pos]
        case = CaseAssignment(tuple(sides), (tuple(row),))
        system = case_to_system(case, single, fixed_dims=dims,
                                enforce_bound=enforce_bound, lower_bound=None)
        result = solve(system)
        if result:
            values = result.assignment
            presentation = {}
            for b, label in enumerate(labels):
                if row[b] == 0:
                    presentation[label] = CLOSED
                else:
                    presentation[label] = Expanded(values[amount_var(label, sides[b], perm)])
            order = tuple(labels[v - 1] for v in perm)
            return Arrangement(order, presentation, perm_letters(perm))
    return None


# --- brute-force oracle ----------------------------------------------------


def _designs(dim: int, max_side: int):
    out = []
    for dims in itertools.combinations_with_replacement(range(1, max_side + 1), dim):
        for side in range(1, dim + 1):
            closed = dims
            j = side - 1
            options = [(None, closed)]
            for amount in range(dims[j] + 1, 2 * dims[j] + 1):
                rest = list(dims[:j] + dims[j + 1:])
                pos = sum(1 for v in rest if v <= amount)
                rest.insert(pos, amount)
                options.append((amount, tuple(rest)))
            out.append((dims, side, options))
    return out


def _fits(inner, outer):
    return all(w > u for u, w in zip(inner, outer))


def brute_force_witnesses(k: int, dim: int, max_side: int,
                          perms: Iterable[Sequence[int]] = (),
                          budget: Optional[int] = None) -> Iterator[TrickInstance]:
    """Every integer instance with sides in ``1..max_side`` realising the
    permutation set with the expansion bound enforced, in a fixed order.

    Arrangements are independent once the boxes are fixed, so each one is
    settled by a small chain search; the lexicographically first choice of
    presentations (closed before expanded, smaller amounts first) is kept.
    """
    if max_side < 2:
        raise ValueError("max_side must be at least 2")
    spec = PermSpec(k, dim, tuple(perms))
    orders = [[v - 1 for v in perm] for perm in spec.arrangements]
    designs = _designs(dim, max_side)
    count = len(designs)
    # inside[d]: designs that can contain design d for some presentations.
    # Closed is the smallest presentation and the largest amount the biggest.
    biggest = [opts[-1][1] for _, _, opts in designs]
    inside = [frozenset(e for e in range(count) if _fits(designs[d][0], biggest[e]))
              for d in range(count)]
    contains = [set() for _ in range(count)]
    for d in range(count):
        for e in inside[d]:
            contains[e].add(d)
    need_outer = {}
    for order in orders:
        for i in range(k):
            for j in range(i + 1, k):
                need_outer.setdefault(order[i], set()).add(order[j])
    leaves = 0
    chosen: List[int] = []

    def candidates(b):
        cand = None
        for a in range(b):
            d = chosen[a]
            if b in need_outer.get(a, ()):
                s = inside[d]
                cand = s if cand is None else cand & s
            if a in need_outer.get(b, ()):
                s = contains[d]
                cand = s if cand is None else cand & s
        if cand is None:
            return range(count)
        return sorted(cand)

    def settle():
        arrangements = []
        for t, order in enumerate(orders):
            picked = _chain(order, [designs[d][2] for d in chosen])
            if picked is None:
                return None
            presentation = {}
            for b in range(k):
                amount = picked[b]
                presentation[LETTERS[b]] = CLOSED if amount is None else Expanded(amount)
            arrangements.append(Arrangement(tuple(LETTERS[b] for b in order), presentation,
                                            perm_letters(spec.arrangements[t])))
        boxes = tuple(BoxDesign(LETTERS[b], make_dims(designs[d][0]), designs[d][1])
                      for b, d in enumerate(chosen))
        return TrickInstance(boxes, tuple(arrangements), enforce_bound=True)

    def walk(b):
        nonlocal leaves
        if b == k:
            leaves += 1
            if budget is not None and leaves > budget:
                raise BudgetExceeded(f"brute force exceeded its budget of {budget} leaves")
            found = settle()
            if found is not None:
                yield found
            return
        for d in candidates(b):
            chosen.append(d)
            yield from walk(b + 1)
            chosen.pop()

    for inst in walk(0):
        if not verify_trick(inst, enforce_bound=True).ok:
            raise EngineDisagreement("brute force produced an unverifiable instance")
        yield inst


def _chain(order, options):
    """Pick one presentation per box along ``order`` so neighbours nest."""
    k = len(order)
    ok = [None] * k
    ok[k - 1] = [True] * len(options[order[k - 1]])
    for pos in range(k - 2, -1, -1):
        here = options[order[pos]]
        nxt = options[order[pos + 1]]
        ok[pos] = [any(ok[pos + 1][j] and _fits(p[1], q[1]) for j, q in enumerate(nxt))
                   for p in here]
    picked = {}
    prev = None
    for pos in range(k):
        opts = options[order[pos]]
        for i, (amount, vec) in enumerate(opts):
            if ok[pos][i] and (prev is None or _fits(prev, vec)):
                picked[order[pos]] = amount
                prev = vec
                break
        else:
            return None
    return picked


def brute_force_search(k: int, dim: int, max_side: int,
                       perms: Iterable[Sequence[int]] = (),
                       budget: Optional[int] = None) -> Optional[TrickInstance]:
    return next(brute_force_witnesses(k, dim, max_side, perms, budget), None)
