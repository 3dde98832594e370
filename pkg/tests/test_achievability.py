import itertools
from fractions import Fraction

import pytest

from gozinta import catalog, kernel
from gozinta.achievability import (
    CaseAssignment,
    PermSpec,
    ProvedInfeasible,
    Witness,
    achievable,
    amount_var,
    brute_force_search,
    brute_force_witnesses,
    case_count,
    case_to_system,
    enumerate_cases,
    jointly_achievable,
    naive_first_case,
    observation_form,
    pattern_report,
    side_var,
    verify_impossibility,
)
from gozinta.constructions import restore_expansion_bound, single_box
from gozinta.core import CLOSED, BoxDesign, make_dims
from gozinta.errors import BudgetExceeded, NormalizeUnsupported, NotVerified
from gozinta.feasibility import LT, check_witness
from gozinta.nesting import Arrangement, TrickInstance, verify_trick
from gozinta.perms import all_perms, compose, identity, inverse_perm, parse_perm, reverse

BACKENDS = ["python"] + (["cython"] if kernel.NATIVE_AVAILABLE else [])

SMALL_SPECS = [
    PermSpec(1, 2),
    PermSpec(2, 2, ((2, 1),)),
    PermSpec(2, 3, ((2, 1),)),
    PermSpec(3, 2, ((3, 2, 1),)),
    PermSpec(3, 2, ((2, 1, 3), (1, 3, 2))),
    PermSpec(3, 2, ((2, 3, 1), (3, 2, 1))),
]


def test_single_box_case_list():
    cases = list(enumerate_cases(PermSpec(1, 2)))
    assert [(c.expand_side, c.states) for c in cases] == [
        ((1,), ((0,),)), ((1,), ((1,),)), ((1,), ((2,),)),
        ((2,), ((0,),)), ((2,), ((2,),)),
    ]


@pytest.mark.parametrize("spec", SMALL_SPECS[:4], ids=str)
def test_case_count_formula(spec):
    assert len(list(enumerate_cases(spec))) == case_count(spec)


@pytest.mark.parametrize("k, n", [(2, 2), (2, 3), (3, 2), (3, 3), (4, 2)])
def test_normalized_case_count_formula(k, n):
    spec = PermSpec(k, n, (reverse(k),))
    assert len(list(enumerate_cases(spec, normalize=True))) == case_count(spec, True)


def test_normalized_count_four_boxes_3d():
    # 6 expanded (side, rank) pairs per box, one free closed/expanded bit per middle box
    assert case_count(PermSpec(4, 3, (reverse(4),)), True) == 6 ** 4 * 2 ** 2


def test_normalized_pair_patterns_are_forced():
    spec = PermSpec(2, 3, ((2, 1),))
    for case in enumerate_cases(spec, normalize=True):
        assert case.state(0, 0) + case.state(0, 1) == "CE"
        assert case.state(1, 0) + case.state(1, 1) == "EC"


def test_normalize_needs_natural_and_reverse():
    spec = PermSpec(3, 2, ((2, 1, 3),))
    with pytest.raises(NormalizeUnsupported):
        list(enumerate_cases(spec, normalize=True))
    with pytest.raises(NormalizeUnsupported):
        achievable(spec, normalize=True)


def test_enumeration_order_is_key_order():
    spec = PermSpec(2, 2, ((2, 1),))
    keys = [c.key(spec) for c in enumerate_cases(spec)]
    assert keys == sorted(keys)


def _has_strict(system, u, v):
    want = {(u, Fraction(1)), (v, Fraction(-1))}
    return any(c.rel == LT and set(c.coeffs) == want and c.rhs == 0 for c in system.constraints)


def test_pair_case_system_holds_the_interleaving_chain():
    spec = PermSpec(2, 3, ((2, 1),))
    case = CaseAssignment((1, 1), ((0, 3), (3, 0)))
    system = case_to_system(case, spec)
    a1r, b1r = amount_var("A", 1, (2, 1)), amount_var("B", 1, (1, 2))
    for u, v in [("A1", "B2"), ("A2", "B3"), ("A3", b1r), ("B1", "A2"), ("B2", "A3"), ("B3", a1r)]:
        assert _has_strict(system, u, v)
    point = {"A1": 6, "A2": 8, "A3": 10, "B1": 7, "B2": 9, "B3": 11, a1r: 12, b1r: 12}
    assert check_witness(system, {k: Fraction(v) for k, v in point.items()})


def test_closed_single_box_system():
    system = case_to_system(CaseAssignment((1,), ((0,),)), PermSpec(1, 3))
    assert system.variables == ("A1", "A2", "A3")
    assert len(system.constraints) == 3


def test_known_triple_satisfies_its_case():
    spec = PermSpec(3, 3, ((3, 2, 1),))
    case = CaseAssignment((1, 1, 1), ((0, 0, 3), (3, 0, 0)))
    system = case_to_system(case, spec)
    values = {side_var(lab, i + 1): Fraction(v)
              for lab, dims in zip("ABC", [(6, 8, 10), (7, 9, 11), (6, 8, 10)])
              for i, v in enumerate(dims)}
    values[amount_var("C", 1, (1, 2, 3))] = Fraction(12)
    values[amount_var("A", 1, (3, 2, 1))] = Fraction(12)
    assert check_witness(system, values)


@pytest.mark.parametrize("backend", BACKENDS)
@pytest.mark.parametrize("spec", SMALL_SPECS, ids=str)
def test_engine_finds_the_first_feasible_case(spec, backend):
    result = achievable(spec, backend=backend)
    first = naive_first_case(spec)
    if first is None:
        assert isinstance(result, ProvedInfeasible)
        assert result.cases_checked == case_count(spec)
    else:
        assert isinstance(result, Witness)
        assert result.case == first
        assert result.cases_checked == sum(1 for c in enumerate_cases(spec)
                                           if c.key(spec) <= first.key(spec))


def test_normalized_engine_matches_naive_scan():
    for k, n in [(2, 2), (3, 2), (2, 3)]:
        spec = PermSpec(k, n, (reverse(k),))
        assert achievable(spec, normalize=True).case == naive_first_case(spec, normalize=True)


@pytest.mark.skipif(not kernel.NATIVE_AVAILABLE, reason="compiled kernel not built")
@pytest.mark.parametrize("k, n, perms, normalize", [
    (4, 3, ((4, 3, 2, 1),), False),
    (4, 3, ((4, 3, 2, 1),), True),
    (4, 2, ((4, 3, 2, 1),), True),
    (3, 2, tuple(all_perms(3)), False),
    (4, 3, ((2, 4, 1, 3),), False),
])
def test_backends_agree(k, n, perms, normalize):
    spec = PermSpec(k, n, perms)
    py = achievable(spec, normalize, backend="python")
    cy = achievable(spec, normalize, backend="cython")
    assert type(py) is type(cy)
    assert py.cases_checked == cy.cases_checked
    assert py.nodes == cy.nodes
    if isinstance(py, Witness):
        assert py.case == cy.case and py.instance == cy.instance


def test_forced_python_backend(monkeypatch):
    monkeypatch.setenv("GOZINTA_PURE_PYTHON", "1")
    assert kernel.backend_name() == "python"


def test_parallel_search_matches_serial():
    spec = PermSpec(3, 3, ((2, 3, 1), (3, 1, 2), (3, 2, 1)))
    serial = achievable(spec, workers=1)
    parallel = achievable(spec, workers=2)
    assert serial == parallel


@pytest.mark.parametrize("k, n, perm, feasible", [
    (2, 3, "21", True),
    (4, 3, "4321", False),
    (5, 2, "54321", False),
    (4, 3, "2413", True),
    (4, 2, "4321", True),
])
def test_achievable_examples(k, n, perm, feasible):
    result = achievable(PermSpec(k, n, (parse_perm(perm),)))
    assert bool(result) == feasible
    if feasible:
        assert verify_trick(result.instance, enforce_bound=False).ok
        assert verify_trick(restore_expansion_bound(result.instance)).ok


def test_joint_examples():
    six = tuple(all_perms(3))
    assert not jointly_achievable(PermSpec(3, 3, six))
    assert not jointly_achievable(PermSpec(3, 2, six))
    five = tuple(p for p in six if p != (2, 1, 3))
    found = jointly_achievable(PermSpec(3, 3, five))
    assert found and len(found.instance.arrangements) == 5


def test_impossibility_reports():
    r = verify_impossibility(4, 3)
    assert r.all_infeasible and r.cases_checked == r.cases_total == 707281
    assert verify_impossibility(5, 2).all_infeasible
    r = verify_impossibility(4, 2)
    assert not r.all_infeasible and r.feasible_case is not None
    assert r.cases_checked < r.cases_total


def test_pattern_report():
    assert pattern_report(catalog.get("ex-2d-quad")) == ("CCEE", "CCEE")
    assert pattern_report(catalog.get("ex-6-8-10"))[0] == "CCE"
    assert pattern_report(single_box((3, 4, 5))) == ("C",)
    bad = TrickInstance((BoxDesign("A", make_dims((3, 4, 5))), BoxDesign("B", make_dims((3, 4, 5)))),
                        (Arrangement(("A", "B"), {"A": CLOSED, "B": CLOSED}),))
    with pytest.raises(NotVerified):
        pattern_report(bad)


def test_observation_form_on_engine_witness():
    spec = PermSpec(4, 2, ((4, 3, 2, 1),))
    for normalize in (False, True):
        w = achievable(spec, normalize=normalize).instance
        assert pattern_report(observation_form(w)) == ("CCEE", "CCEE")


def test_observation_form_keeps_catalog_valid():
    for w in catalog.all_entries().values():
        form = observation_form(w)
        assert verify_trick(form, enforce_bound=False).ok
        for b in form.boxes:
            states = [isinstance(a.presentation[b.label], type(CLOSED)) for a in form.arrangements]
            assert any(states)
            if len(form.arrangements) > 1:
                assert not all(states)


def test_brute_examples():
    w = brute_force_search(2, 3, 5, [(2, 1)])
    assert w is not None and verify_trick(w, enforce_bound=True).ok
    assert tuple(w.boxes[0].dims) <= (3, 4, 5)
    assert brute_force_search(2, 2, 2, [(2, 1)]) is None
    assert brute_force_search(3, 3, 12, [(3, 2, 1)]) is not None


def test_brute_budget():
    with pytest.raises(BudgetExceeded):
        brute_force_search(3, 3, 8, tuple(all_perms(3)), budget=10)


def test_brute_witnesses_keep_middle_rectangles_distinct():
    gen = brute_force_witnesses(4, 2, 12, [(4, 3, 2, 1)])
    for w in itertools.islice(gen, 150):
        assert w.boxes[1].dims != w.boxes[2].dims
        assert pattern_report(observation_form(w)) == ("CCEE", "CCEE")


def _subsets(k):
    others = [p for p in all_perms(k) if p != identity(k)]
    for r in range(len(others) + 1):
        yield from itertools.combinations(others, r)


@pytest.mark.parametrize("k, n", [(2, 2), (2, 3), (3, 2), (3, 3)])
@pytest.mark.parametrize("max_side", [6, 8, 10])
def test_oracle_witness_implies_engine_witness(k, n, max_side):
    for sub in _subsets(k):
        found = brute_force_search(k, n, max_side, sub)
        if found is not None:
            assert jointly_achievable(PermSpec(k, n, sub))


@pytest.mark.parametrize("n", [2, 3])
def test_left_translation_keeps_joint_achievability(n):
    for sub in _subsets(3):
        full = (identity(3),) + sub
        base = bool(jointly_achievable(PermSpec(3, n, sub)))
        for pivot in full:
            moved = tuple(compose(inverse_perm(pivot), t) for t in full)
            assert bool(jointly_achievable(PermSpec(3, n, moved))) == base


def test_conjugation_does_not_keep_achievability():
    sigma = (2, 1, 3, 4)
    rev = reverse(4)
    conj = compose(compose(sigma, rev), inverse_perm(sigma))
    assert conj == (3, 4, 1, 2)
    assert not achievable(PermSpec(4, 3, (rev,)))
    assert achievable(PermSpec(4, 3, (conj,)))
