"""End-to-end acceptance checks, one test per criterion.

Each test prints a single PASS/FAIL line (visible in `pytest -v` output) and
then asserts the same condition.
"""
import time
from collections import Counter
from fractions import Fraction as F

import pytest

from ekd import intervals as ivl
from ekd.bounds import exceptional_set, fit_margin_exponent
from ekd.irreducible import Irreducibility
from ekd.polynomial import make_trinomial
from ekd.polytope import ekd_half_spaces, vertices_brute_force, vertices_by_elimination, vertices_closed_form
from ekd.scan import FAIL, PASS, SKIP, Check, ScanConfig, run_scan, tightness_report
from ekd.verify import Verdict, check_membership_witness, irreducibility, margin_identity_check

pytestmark = pytest.mark.acceptance


def _signed(lo, hi):
    return tuple(range(-hi, -lo + 1)) + tuple(range(lo, hi + 1))


@pytest.fixture
def report(capsys):
    def emit(n, ok, detail):
        with capsys.disabled():
            print(f"\ncriterion {n}: {'PASS' if ok else 'FAIL'} ({detail})")
    return emit


def _statuses(records, check):
    return Counter(r.results[check.value]["status"] for r in records)


@pytest.fixture(scope="module")
def small_corpus():
    """d <= 12, all j, 3 <= |h| <= 30: shared by the unit gap, identity and separation criteria."""
    cfg = ScanConfig(d_range=tuple(range(2, 13)), h_range=_signed(3, 30),
                     checks=frozenset({Check.UNIT_GAP, Check.MARGIN_IDENTITY, Check.SEPARATION}))
    return run_scan(cfg)


def _eligible(records):
    return [r for r in records if r.irreducibility == Irreducibility.IRREDUCIBLE.value]


def test_criterion_1_vertex_triple_agreement(report):
    start = time.perf_counter()
    bad = []
    pairs = 0
    for k in range(1, 7):
        for d in range(k + 1, 13):
            s = ekd_half_spaces(k, d)
            a = vertices_closed_form(k, d)
            b = vertices_by_elimination(s)
            c = vertices_brute_force(s)
            labels = [v.subset for v in a]
            same = a == b == c and [v.subset for v in b] == labels == [v.subset for v in c]
            if not same or len(set(a.points())) != 2 ** k:
                bad.append((k, d))
            pairs += 1
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed < 60
    report(1, ok, f"{pairs} (k,d) pairs, mismatches {bad}, {elapsed:.1f}s")
    assert ok


def test_criterion_2_small_vertex_lists(report):
    bad = []
    for d in range(3, 13):
        if set(vertices_closed_form(1, d).points()) != {(0,), (d - 1,)}:
            bad.append((1, d))
        want = {(0, 0), (d - 1, 0), (1, d - 2), (0, F(d - 2, 2))}
        if set(vertices_closed_form(2, d).points()) != want:
            bad.append((2, d))
    report(2, not bad, f"d = 3..12, mismatches {bad}")
    assert not bad


def test_criterion_3_exceptional_set(report):
    start = time.perf_counter()
    got = exceptional_set((1, range(4, 21)), (2, range(7, 15)))
    elapsed = time.perf_counter() - start
    ok = sorted(got) == [(4, 1), (5, 1), (6, 1), (10, 1)] and elapsed < 1
    report(3, ok, f"TWO_FACTOR at {sorted(got)}, {elapsed:.3f}s")
    assert ok


def test_criterion_4_annulus_counts(report):
    start = time.perf_counter()
    cfg = ScanConfig(d_range=tuple(range(2, 10)), h_range=_signed(3, 40), checks=frozenset({Check.ANNULI}))
    records = run_scan(cfg)
    elapsed = time.perf_counter() - start
    rows = Counter()
    for r in records:
        res = r.results[Check.ANNULI.value]
        for row in res.get("epsilons", []):
            tag = "collision" if row.get("status") == SKIP else ("match" if row["match"] else "mismatch")
            rows[(row["eps"], tag)] += 1
    statuses = _statuses(records, Check.ANNULI)
    half_checked = rows[("1/2", "match")] + rows[("1/2", "mismatch")]
    ok = statuses[FAIL] == 0 and half_checked > 0 and elapsed < 600
    report(4, ok, f"{len(records)} trinomials, eps rows {dict(sorted(rows.items()))}, {elapsed:.0f}s")
    assert ok


def test_criterion_5_remark_bound(report):
    start = time.perf_counter()
    cfg = ScanConfig(d_range=tuple(range(3, 9)), h_range=_signed(3, 1000), j_rule="last",
                     checks=frozenset({Check.SZ_REMARK}))
    records = run_scan(cfg)
    elapsed = time.perf_counter() - start
    statuses = _statuses(records, Check.SZ_REMARK)
    ok = statuses[FAIL] == 0 and statuses[PASS] > 0 and elapsed < 900
    report(5, ok, f"{len(records)} trinomials, {dict(statuses)}, {elapsed:.0f}s")
    assert ok


def test_criterion_6_membership(report):
    start = time.perf_counter()
    cfg = ScanConfig(d_range=tuple(range(2, 10)), h_range=_signed(3, 40), checks=frozenset({Check.MEMBERSHIP}))
    records = run_scan(cfg)
    elapsed = time.perf_counter() - start
    verdicts = Counter()
    failures = []
    for r in _eligible(records):
        res = r.results[Check.MEMBERSHIP.value]
        verdicts.update(res["verdicts"])
        if res["status"] == FAIL:
            failures.append((r.key, res["failures"][:3]))
    ok = not failures and verdicts[Verdict.NEGATIVE.value] == 0 and verdicts[Verdict.POSITIVE.value] > 0
    report(6, ok, f"{len(_eligible(records))} irreducible trinomials, verdicts {dict(verdicts)}, "
                  f"failures {failures[:3]}, {elapsed:.0f}s")
    assert ok


def test_criterion_7_tightness(report):
    rows = [tightness_report(k, bits=256) for k in (1, 2, 3)]
    ok = all(r["status"] == PASS and r["irreducibility"] == "IRREDUCIBLE" for r in rows)
    report(7, ok, ", ".join(f"k={r['k']} width {r.get('width')} {r.get('verdict')}" for r in rows))
    assert ok


def test_criterion_8_unit_gap(small_corpus, report):
    eligible = _eligible(small_corpus)
    statuses = _statuses(eligible, Check.UNIT_GAP)
    ok = statuses[FAIL] == 0 and statuses[PASS] > 0
    report(8, ok, f"{len(small_corpus)} trinomials, {len(eligible)} irreducible, {dict(statuses)}")
    assert ok


def test_criterion_9_margin_identity(small_corpus, report):
    eligible = [r for r in _eligible(small_corpus) if r.d >= 3]
    bad = []
    checked = 0
    worst = 0
    for r in eligible:
        p = make_trinomial((r.d, r.j, r.h))
        for n in range(1, r.d - 1):
            rep = margin_identity_check(p, n, [n])
            checked += 1
            with ivl.precision(rep.precision_bits + 32):
                w = ivl.width(rep.residual)
                worst = max(worst, float(w))
                if not (rep.holds and w * 10**20 < 1):
                    bad.append((r.key, n))
    ok = not bad and checked > 0
    report(9, ok, f"{checked} identities on {len(eligible)} trinomials, worst width {worst:.2e}, bad {bad[:3]}")
    assert ok


def test_criterion_10_separation_and_fit(small_corpus, report):
    eligible = _eligible(small_corpus)
    statuses = _statuses(eligible, Check.SEPARATION)
    sep_ok = statuses[FAIL] == 0 and statuses[PASS] > 0

    # margins at the vertex (3) of E_{1,4} for the family x^4 - h x + 1
    samples = []
    for h in range(3, 51):
        p = make_trinomial((4, 1, h))
        if irreducibility(p).status is not Irreducibility.IRREDUCIBLE:
            continue
        rep = check_membership_witness(p, [3])
        lo = ivl.lo(rep.margin())
        if lo > 0:
            samples.append((h, float(lo)))
    fit = fit_margin_exponent(samples)
    fit_ok = len(samples) >= 3 and fit.slope == fit.slope and abs(fit.slope) != float("inf")
    ok = sep_ok and fit_ok
    report(10, ok, f"separation {dict(statuses)}; fit on {len(samples)} samples, slope {fit.slope:.4f}")
    assert ok
