"""End-to-end acceptance checks, each with its runtime budget.

Every test prints one PASS/FAIL line, also when output capture is on.
"""

import time

import pytest

from normknot import oracle
from normknot.catalog import beta, c4, gamma, sfhf, times_cyclic
from normknot.permgroup import sylow
from normknot.sha import Scenario, full_report


@pytest.fixture
def verdict(capsys):
    def emit(number: int, title: str, ok: bool, elapsed: float, limit: float | None, detail: str = ""):
        within = limit is None or elapsed < limit
        status = "PASS" if ok and within else "FAIL"
        budget = "no time limit" if limit is None else f"limit {limit:g}s"
        extra = f" ({detail})" if detail and not (ok and within) else ""
        with capsys.disabled():
            print(f"\n[{status}] criterion {number}: {title} in {elapsed:.2f}s ({budget}){extra}")
        assert ok, detail or title
        assert within, f"took {elapsed:.2f}s, limit {limit}s"

    return emit


@pytest.fixture(scope="module")
def route_sweep():
    start = time.perf_counter()
    result = oracle.route_agreement_sweep(oracle.route_grid(65))
    return result, time.perf_counter() - start


@pytest.fixture(scope="module")
def degree_4p_sweep():
    start = time.perf_counter()
    result = oracle.negative_control_sweep([3, 5, 7, 11, 13])
    return result, time.perf_counter() - start


def test_criterion_01_degree_six(verdict):
    start = time.perf_counter()
    c = beta(2, 3)
    generic = full_report(c.G, c.H, 2, Scenario.generic())
    explicit = full_report(c.G, c.H, 2, Scenario.of([sylow(c.G, 2).generators]))
    elapsed = time.perf_counter() - start
    got = (generic.total.to_list(), explicit.total.to_list())
    verdict(1, "degree 6: generic [2], Sylow-2 decomposition group []", got == ([2], []), elapsed, 1, f"got {got}")


def test_criterion_02_degree_fifteen(verdict):
    start = time.perf_counter()
    got = [full_report(*c.pair, 5).total.to_list() for c in (beta(5, 3), gamma(5, 3))]
    elapsed = time.perf_counter() - start
    verdict(2, "degree 15: both semidirect classes give [5]", got == [[5], [5]], elapsed, 5, f"got {got}")


def test_criterion_03_degree_4p(verdict):
    start = time.perf_counter()
    r5 = full_report(*c4(5).pair, 5)
    r13 = full_report(*c4(13).pair, 13)
    elapsed = time.perf_counter() - start
    got = (r5.total.to_list(), r5.case_label, r13.total.to_list())
    verdict(3, "degree 4p: c4(5) gives [5] with case c4, c4(13) gives [13]", got == ([5], "c4", [13]), elapsed, 10,
            f"got {got}")


def test_criterion_04_composite_exponent(verdict):
    start = time.perf_counter()
    c = times_cyclic(beta(2, 3), 3)
    report = full_report(c.G, c.H, 2)
    elapsed = time.perf_counter() - start
    got = (c.degree, report.total.to_list())
    verdict(4, "degree 18: A4 x C3 gives [6]", got == (18, [6]), elapsed, 5, f"got {got}")


def test_criterion_05_squarefree_family(verdict):
    start = time.perf_counter()
    c = sfhf(5, 3, 2)
    report = full_report(c.G, c.H, 5)
    elapsed = time.perf_counter() - start
    got = (c.degree, report.p_part.to_list(), report.prime_to_p.to_list(), report.prime_to_p_reason)
    ok = got == (30, [5], [], "cyclic quotient")
    verdict(5, "degree 30 squarefree family: p-part [5], prime-to-p [] via cyclic quotient", ok, elapsed, 30,
            f"got {got}")


def test_criterion_06_triviality_sweeps(verdict):
    start = time.perf_counter()
    tables = [oracle.degree_table(d) for d in (10, 14)]
    elapsed = time.perf_counter() - start
    rows = [row for t in tables for row in t["rows"]]
    bad = [row for row in rows if row["total"] != []]
    gaps = [g for t in tables for g in t["gaps"]]
    ok = rows and not bad and not gaps
    verdict(6, f"degrees 10 and 14: {len(rows)} constructed classes all trivial", bool(ok), elapsed, 60,
            f"{len(bad)} nontrivial, gaps {gaps}")


def test_criterion_07_route_agreement(verdict, route_sweep):
    result, elapsed = route_sweep
    verdict(7, f"route agreement over {len(result.cells)} rep/line/H' cells with p*l <= 65", result.ok, elapsed, 600,
            f"{len(result.mismatches)} mismatches")


def test_criterion_08_extremality(verdict):
    start = time.perf_counter()
    results = [oracle.verify_extremal_classification(p, 13) for p in (2, 3, 5, 7, 11, 13)]
    results += [oracle.verify_two_subgroups(p) for p in (3, 5, 7, 11, 13)]
    elapsed = time.perf_counter() - start
    cells = sum(len(r.cells) for r in results)
    bad = [c.to_json() for r in results for c in r.mismatches]
    verdict(8, f"extremality classification over {cells} representations", not bad, elapsed, 900,
            f"{len(bad)} mismatches, first {bad[:1]}")


def test_criterion_09_isomorphism_lemmas(verdict):
    start = time.perf_counter()
    grid = oracle.iso_grid(2000)
    results = [oracle.verify_iso_lemmas(p, ell, 2000) for p, ell in grid]
    elapsed = time.perf_counter() - start
    cells = sum(len(r.cells) for r in results)
    bad = [c.to_json() for r in results for c in r.mismatches]
    verdict(9, f"isomorphism statements on {len(grid)} grid cells ({cells} maps)", not bad and cells > 0, elapsed, 600,
            f"{len(bad)} mismatches, first {bad[:1]}")


def test_criterion_10_negative_control(verdict, route_sweep, degree_4p_sweep):
    start = time.perf_counter()
    cells = [c for r, _ in (route_sweep, degree_4p_sweep) for c in r.cells if c.params.get("negative_control")]
    bad = [c.to_json() for c in cells if not c.ok]
    elapsed = time.perf_counter() - start + degree_4p_sweep[1]
    verdict(10, f"negative control on {len(cells)} gcd-bounded contexts", not bad and len(cells) > 0, elapsed, None,
            f"{len(bad)} mismatches")
