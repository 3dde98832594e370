"""Acceptance criteria, one test each. Every test prints a single
``ACCEPTANCE <n> PASS|FAIL`` line with its measurement and time limit."""

import itertools
import pathlib
import random
import time

import pytest

from gozinta import catalog
from gozinta.achievability import (
    PermSpec,
    ProvedInfeasible,
    Witness,
    achievable,
    brute_force_search,
    brute_force_witnesses,
    jointly_achievable,
    observation_form,
    pattern_report,
    verify_impossibility,
)
from gozinta.constructions import (
    boost_concat,
    boost_duplicate,
    boost_inverse,
    gen_triple,
    reduce_dimension,
    restore_expansion_bound,
    single_box,
)
from gozinta.core import make_dims
from gozinta.feasibility import check_witness, solve
from gozinta.nesting import classify_pair, render_diagram, verify_trick
from gozinta.perms import all_perms, format_perm, identity, parse_perm, reverse

from oracles import random_system

GOLDEN = pathlib.Path(__file__).parent / "golden" / "diagrams"

# Time limits in seconds.
LIMIT_CATALOG = 1.0
LIMIT_SMALL_ORDERS = 600.0
LIMIT_IMPOSSIBLE_EACH = 1800.0
LIMIT_CCEE = 300.0
LIMIT_ORACLE = 600.0
LIMIT_CONSTRUCTIONS = 60.0
LIMIT_CLASSIFIER = 1.0
LIMIT_SOLVER = 60.0

SOLVER_SYSTEMS = 1000
BRUTE_SIDES = (12, 16, 20)
BRUTE_PREFIX = 300


def _report(capsys, n, ok, detail, elapsed, limit):
    ok = ok and elapsed < limit
    with capsys.disabled():
        status = "PASS" if ok else "FAIL"
        print(f"\nACCEPTANCE {n} {status}: {detail} [{elapsed:.2f}s < {limit:.0f}s]")
    assert ok, detail


def _golden_blocks(path):
    blocks = {}
    for chunk in path.read_text(encoding="utf-8").strip().split("\n\n"):
        header, *lines = chunk.strip().splitlines()
        blocks[header.strip("[]")] = [line.split() for line in lines]
    return blocks


def test_1_catalog_regression(capsys):
    start = time.perf_counter()
    failures = []
    diagrams = 0
    entries = catalog.all_entries()
    for name, w in entries.items():
        if not verify_trick(w, enforce_bound=True).ok:
            failures.append(f"{name} does not verify")
        path = GOLDEN / f"{name}.txt"
        if not path.exists():
            continue
        by_name = {a.name: a for a in w.arrangements}
        for arr_name, tokens in _golden_blocks(path).items():
            got = [line.split() for line in render_diagram(w.boxes, by_name[arr_name]).splitlines()]
            diagrams += 1
            if got != tokens:
                failures.append(f"{name}/{arr_name} diagram differs")
    elapsed = time.perf_counter() - start
    detail = f"{len(entries)} instances verified with bound, {diagrams} diagrams token-equal"
    _report(capsys, 1, not failures, detail + ("; " + "; ".join(failures) if failures else ""),
            elapsed, LIMIT_CATALOG)


def test_2_small_orders(capsys):
    start = time.perf_counter()
    bad = []
    witnesses = 0
    for k in (2, 3, 4):
        for p in all_perms(k):
            if p == identity(k):
                continue
            result = achievable(PermSpec(k, 3, (p,)))
            if p == reverse(4):
                if not isinstance(result, ProvedInfeasible):
                    bad.append("4321 not refuted")
                continue
            if not isinstance(result, Witness):
                bad.append(f"{format_perm(p)} has no witness")
                continue
            restored = restore_expansion_bound(result.instance)
            if not (verify_trick(result.instance, enforce_bound=False).ok
                    and verify_trick(restored, enforce_bound=True).ok):
                bad.append(f"{format_perm(p)} witness fails verification")
            witnesses += 1
    elapsed = time.perf_counter() - start
    detail = f"{witnesses}/28 witnesses re-verified (1 + 5 + 22), 4321 refuted"
    _report(capsys, 2, not bad and witnesses == 28, detail + "; ".join([""] + bad),
            elapsed, LIMIT_SMALL_ORDERS)


IMPOSSIBILITY_RUNS = [
    (4, 3, "reverse", True),
    (5, 2, "reverse", True),
    (3, 2, "all", True),
    (3, 3, "all", True),
    (4, 2, "reverse", False),
]


@pytest.mark.parametrize("k, n, which, expected", IMPOSSIBILITY_RUNS,
                         ids=[f"k{k}-d{n}-{w}" for k, n, w, _ in IMPOSSIBILITY_RUNS])
def test_3_impossibility(capsys, k, n, which, expected):
    perms = tuple(all_perms(k)) if which == "all" else (reverse(k),)
    start = time.perf_counter()
    report = verify_impossibility(k, n, perms)
    elapsed = time.perf_counter() - start
    ok = report.all_infeasible == expected
    if expected:
        ok = ok and report.cases_checked == report.cases_total
    detail = (f"k={k} dim={n} {which}: all_infeasible={str(report.all_infeasible).lower()} "
              f"(expected {str(expected).lower()}), cases {report.cases_checked}/{report.cases_total}")
    _report(capsys, 3, ok, detail, elapsed, LIMIT_IMPOSSIBLE_EACH)


def test_4_ccee(capsys):
    start = time.perf_counter()
    spec = PermSpec(4, 2, (reverse(4),))
    checked = 0
    bad = []
    for normalize in (False, True):
        w = achievable(spec, normalize=normalize).instance
        if pattern_report(observation_form(w)) != ("CCEE", "CCEE"):
            bad.append(f"achieve normalize={normalize}")
        checked += 1
    per_side = []
    for max_side in BRUTE_SIDES:
        gen = brute_force_witnesses(4, 2, max_side, (reverse(4),))
        count = 0
        for i, w in enumerate(itertools.islice(gen, BRUTE_PREFIX)):
            if pattern_report(observation_form(w)) != ("CCEE", "CCEE"):
                bad.append(f"brute max_side={max_side} #{i}")
            count += 1
        per_side.append(f"{count}@{max_side}")
        checked += count
    elapsed = time.perf_counter() - start
    detail = (f"{checked} witnesses (2 engine + brute prefixes {', '.join(per_side)}) "
              f"show CCEE/CCEE in observation form")
    _report(capsys, 4, not bad, detail + "; ".join([""] + bad[:5]), elapsed, LIMIT_CCEE)


def test_5_oracle_agreement(capsys):
    start = time.perf_counter()
    runs = found = 0
    bad = []
    for k in (1, 2, 3):
        others = [p for p in all_perms(k) if p != identity(k)]
        for n in (2, 3):
            for max_side in (6, 8):
                for r in range(len(others) + 1):
                    for sub in itertools.combinations(others, r):
                        runs += 1
                        if brute_force_search(k, n, max_side, sub) is None:
                            continue
                        found += 1
                        if not jointly_achievable(PermSpec(k, n, sub)):
                            bad.append(f"k={k} dim={n} {sub}")
    elapsed = time.perf_counter() - start
    detail = f"{runs} oracle runs, {found} with a witness, all matched by the engine"
    _report(capsys, 5, not bad, detail + "; ".join([""] + bad[:5]), elapsed, LIMIT_ORACLE)


def test_6_constructions(capsys):
    start = time.perf_counter()
    pair = catalog.get("ex-3-4-5")
    one = single_box((3, 4, 5))
    built = {
        "132": boost_concat(one, pair),
        "213": boost_concat(pair, one),
        "231": boost_duplicate(pair, 2),
        "312": boost_duplicate(pair, 1),
        "2143": boost_concat(pair, pair),
        "4132": boost_inverse(catalog.get("ex-2431")),
        "4213": boost_inverse(catalog.get("ex-3241")),
    }
    bad = []
    for target, w in built.items():
        realised = {w.perm_of(a) for a in w.arrangements}
        if parse_perm(target) not in realised or not verify_trick(w).ok:
            bad.append(target)
    source = catalog.get("ex-butBAC")
    reduced = reduce_dimension(source)
    if not (reduced.dim == 2 and verify_trick(reduced).ok
            and [reduced.perm_of(a) for a in reduced.arrangements]
            == [source.perm_of(a) for a in source.arrangements]):
        bad.append("reduce")
    for n in range(2, 11):
        if not verify_trick(gen_triple(n)).ok:
            bad.append(f"gen_triple({n})")
    elapsed = time.perf_counter() - start
    detail = "7 boosted witnesses, 5-permutation reduction to 2-D, gen_triple 2..10 verified"
    _report(capsys, 6, not bad, detail + "; ".join([""] + bad), elapsed, LIMIT_CONSTRUCTIONS)


def test_7_classifier(capsys):
    cases = [
        ((6, 8, 10), (7, 9, 11), 1),
        ((6, 9, 10), (7, 8, 11), 3),
        ((5, 11, 13), (7, 10, 12), 4),
        ((4, 6, 6), (5, 5, 7), 3),
        ((5, 7, 999), (6, 8, 500), 2),
        ((3, 4, 5), (3, 4, 5), 1),
    ]
    start = time.perf_counter()
    got = [classify_pair(make_dims(a), make_dims(b)).type_id for a, b, _ in cases]
    elapsed = time.perf_counter() - start
    want = [t for _, _, t in cases]
    _report(capsys, 7, got == want, f"types {got} (expected {want})", elapsed, LIMIT_CLASSIFIER)


def test_8_solver_properties(capsys):
    start = time.perf_counter()
    mismatches = bad_witness = feasible = 0
    for seed in range(SOLVER_SYSTEMS):
        system, oracle = random_system(random.Random(seed))
        result = solve(system)
        if bool(result) != oracle(system):
            mismatches += 1
        if result:
            feasible += 1
            if not check_witness(system, result.assignment):
                bad_witness += 1
    elapsed = time.perf_counter() - start
    detail = (f"{SOLVER_SYSTEMS} systems, {feasible} feasible; verdict mismatches {mismatches}, "
              f"bad witnesses {bad_witness}")
    _report(capsys, 8, mismatches == 0 and bad_witness == 0, detail, elapsed, LIMIT_SOLVER)
