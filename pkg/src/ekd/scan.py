"""Trinomial corpus scans.

Each (d, j, h) becomes one record holding the irreducibility verdict and
the outcome of every enabled check. A check reports PASS, FAIL or SKIP;
SKIP covers inapplicable checks, UNKNOWN irreducibility and comparisons
that stay unresolved at the precision cap.
"""

from __future__ import annotations

import csv
import enum
import io
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from . import intervals as ivl
from .errors import BoundaryOverlapError, CertificationError, ConsistencyError, EkdError, NoGapError, NotSquarefreeError
from .irreducible import Irreducibility, test_irreducible
from .polynomial import IntPolynomial, TrinomialSpec, is_root_of_unity_poly, make_trinomial
from .polytope import vertices_closed_form
from .roots import DEFAULT_BITS, PRECISION_CAP, count_in_annulus, modulus_profile, predicted_annuli
from .verify import (Verdict, check_membership_witness, irreducibility, margin_identity_check,
                     modulus_separation, sz_remark_check, unit_gap_property)


class Check(enum.Enum):
    ANNULI = "ANNULI"
    MEMBERSHIP = "MEMBERSHIP"
    SZ_REMARK = "SZ_REMARK"
    UNIT_GAP = "UNIT_GAP"
    SEPARATION = "SEPARATION"
    MARGIN_IDENTITY = "MARGIN_IDENTITY"


PASS, FAIL, SKIP = "PASS", "FAIL", "SKIP"
DEFAULT_EPSILONS = (Fraction(1, 5), Fraction(1, 2), Fraction(4, 5))


@dataclass(frozen=True)
class ScanConfig:
    d_range: tuple[int, ...]
    h_range: tuple[int, ...]
    j_rule: str | tuple[int, ...] = "all"  # "all", "last" (j = d - 1) or explicit j values
    k_range: tuple[int, ...] | None = None  # None: every k < d
    checks: frozenset[Check] = frozenset({Check.ANNULI})
    precision_cap: int = PRECISION_CAP
    epsilons: tuple[Fraction, ...] = DEFAULT_EPSILONS
    timing: bool = False

    def __post_init__(self):
        if not self.d_range or not self.h_range:
            raise ValueError("d and h ranges must be nonempty")
        if not 53 <= self.precision_cap <= 4096:
            raise ValueError("precision cap must lie in [53, 4096]")

    @property
    def bits(self) -> int:
        return min(DEFAULT_BITS, self.precision_cap)

    def j_values(self, d: int) -> list[int]:
        if self.j_rule == "all":
            return list(range(1, d))
        if self.j_rule == "last":
            return [d - 1]
        return [j for j in self.j_rule if 0 < j < d]

    def keys(self) -> list[tuple[int, int, int]]:
        return sorted((d, j, h) for d in self.d_range for j in self.j_values(d) for h in self.h_range)


@dataclass(frozen=True)
class ScanRecord:
    d: int
    j: int
    h: int
    poly: str
    irreducibility: str
    results: dict = field(default_factory=dict)  # check name -> dict with "status"
    seconds: float | None = None

    @property
    def key(self) -> tuple[int, int, int]:
        return (self.d, self.j, self.h)

    def statuses(self) -> dict[str, str]:
        return {name: r["status"] for name, r in self.results.items()}

    @property
    def failed(self) -> bool:
        return any(r["status"] == FAIL for r in self.results.values())

    def to_json(self) -> dict:
        out = {"d": self.d, "j": self.j, "h": self.h, "poly": self.poly,
               "irreducibility": self.irreducibility, "checks": self.results}
        if self.seconds is not None:
            out["seconds"] = round(self.seconds, 6)
        return out


def _skip(reason: str) -> dict:
    return {"status": SKIP, "reason": reason}


def _annuli(spec: TrinomialSpec, cfg: ScanConfig) -> dict:
    p = make_trinomial(spec)
    h = abs(spec.h)
    profile = modulus_profile(p, cfg.bits, cfg.precision_cap)
    rows = []
    status = PASS
    for eps in cfg.epsilons:
        if not (Fraction(1, h) < eps < 1 - Fraction(1, h)):
            continue
        pred = predicted_annuli(spec, eps)
        try:
            inner = count_in_annulus(profile, pred.inner_low, pred.inner_high)
            outer = count_in_annulus(profile, pred.outer_low, pred.outer_high)
        except BoundaryOverlapError:
            rows.append({"eps": str(eps), "status": SKIP})
            continue
        ok = inner == pred.inner_count and outer == pred.outer_count
        if not ok:
            status = FAIL
        rows.append({"eps": str(eps), "inner": inner, "outer": outer, "match": ok})
    if not rows:
        return _skip("no admissible epsilon")
    if status == PASS and all(r.get("status") == SKIP for r in rows):
        status = SKIP
    return {"status": status, "epsilons": rows}


def _membership(p, d: int, cfg: ScanConfig) -> dict:
    cyclotomic = is_root_of_unity_poly(p)
    ks = [k for k in (cfg.k_range or range(1, d)) if 0 < k < d]
    counts = {v.value: 0 for v in Verdict}
    bad = []
    for k in ks:
        for vertex in vertices_closed_form(k, d):
            rep = check_membership_witness(p, vertex.point, subset=vertex.subset,
                                           bits=cfg.bits, cap=cfg.precision_cap)
            counts[rep.verdict.value] += 1
            strict = d > 3 * k and not cyclotomic
            if rep.verdict is Verdict.NEGATIVE or (strict and rep.verdict is not Verdict.POSITIVE):
                bad.append({"k": k, "J": list(vertex.subset), "verdict": rep.verdict.value})
    return {"status": FAIL if bad else PASS, "verdicts": counts, "failures": bad}


def _sz(spec: TrinomialSpec, cfg: ScanConfig) -> dict:
    if spec.j != spec.d - 1:
        return _skip("applies to j = d - 1 only")
    rep = sz_remark_check(spec.d, spec.h, bits=cfg.bits, cap=cfg.precision_cap)
    if rep.status == SKIP:
        return _skip("not irreducible")
    out = rep.to_json()
    out["status"] = PASS if rep.holds else FAIL
    return out


def _unit_gap(p, cfg: ScanConfig) -> dict:
    if is_root_of_unity_poly(p):
        return _skip("root of unity")
    res = unit_gap_property(p, bits=cfg.bits, cap=cfg.precision_cap)
    return {"status": PASS if res.holds else FAIL, "index": res.index}


def _separation(p, cfg: ScanConfig) -> dict:
    profile = modulus_profile(p, cfg.bits, cfg.precision_cap)
    try:
        rep = modulus_separation(profile)
    except NoGapError:
        return _skip("all moduli tied")
    out = rep.to_json()
    del out["poly"]
    out["status"] = PASS if ivl.lo(rep.min_gap) > 0 else FAIL
    return out


def _margin_identity(p, d: int, cfg: ScanConfig) -> dict:
    if d < 3:
        return _skip("needs d >= 3")
    worst = None
    status = PASS
    for n in range(1, d - 1):
        rep = margin_identity_check(p, n, [n], bits=cfg.bits, cap=cfg.precision_cap)
        if not rep.holds:
            status = FAIL
        with ivl.precision(rep.precision_bits + 32):
            w = ivl.width(rep.residual)
            if worst is None or w > worst:
                worst = w
    return {"status": status, "maxResidualWidth": ivl.directed_decimal(worst, 6, up=True)}


def scan_one(key: tuple[int, int, int], cfg: ScanConfig) -> ScanRecord:
    d, j, h = key
    start = time.perf_counter()
    spec = TrinomialSpec(d, j, h)
    p = make_trinomial(spec)
    try:
        verdict = irreducibility(p, cfg.precision_cap).status
    except EkdError:
        verdict = Irreducibility.UNKNOWN
    results = {}
    for check in sorted(cfg.checks, key=lambda c: list(Check).index(c)):
        try:
            if check is Check.ANNULI:
                results[check.value] = _annuli(spec, cfg)
            elif verdict is not Irreducibility.IRREDUCIBLE:
                results[check.value] = _skip(f"irreducibility {verdict.value}")
            elif check is Check.MEMBERSHIP:
                results[check.value] = _membership(p, d, cfg)
            elif check is Check.SZ_REMARK:
                results[check.value] = _sz(spec, cfg)
            elif check is Check.UNIT_GAP:
                results[check.value] = _unit_gap(p, cfg)
            elif check is Check.SEPARATION:
                results[check.value] = _separation(p, cfg)
            elif check is Check.MARGIN_IDENTITY:
                results[check.value] = _margin_identity(p, d, cfg)
        except NotSquarefreeError:
            results[check.value] = _skip("not squarefree")
        except CertificationError as exc:
            results[check.value] = _skip(f"precision cap: {exc}")
        except ConsistencyError as exc:
            results[check.value] = {"status": FAIL, "reason": str(exc)}
    seconds = time.perf_counter() - start if cfg.timing else None
    return ScanRecord(d, j, h, str(p), verdict.value, results, seconds)


def _scan_task(args):
    return scan_one(*args)


def run_scan(cfg: ScanConfig, jobs: int = 1) -> list[ScanRecord]:
    keys = cfg.keys()
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            records = list(pool.map(_scan_task, [(k, cfg) for k in keys], chunksize=8))
    else:
        records = [scan_one(k, cfg) for k in keys]
    return sorted(records, key=lambda r: r.key)


def records_to_json(records: Iterable[ScanRecord]) -> str:
    return json.dumps([r.to_json() for r in records], indent=1) + "\n"


def records_to_csv(records: Iterable[ScanRecord], checks: Iterable[Check]) -> str:
    names = [c.value for c in Check if c in set(checks)]
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["d", "j", "h", "poly", "irreducibility"] + [f"{n}_status" for n in names])
    for r in records:
        w.writerow([r.d, r.j, r.h, r.poly, r.irreducibility]
                   + [r.results.get(n, {}).get("status", "") for n in names])
    return buf.getvalue()


def tightness_report(k: int, bits: int = 256) -> dict:
    """x^{3k} - x^k - 1 at the vertex (0, ..., 0, 2) of E_{k,3k}, where the product is exactly 1."""
    coeffs = [0] * (3 * k + 1)
    coeffs[0], coeffs[k], coeffs[3 * k] = -1, -1, 1
    p = IntPolynomial(tuple(coeffs))
    verdict = test_irreducible(p, bits=min(bits, 128), cap=max(bits, 128))
    out = {"k": k, "poly": str(p), "irreducibility": verdict.status.value}
    if verdict.status is not Irreducibility.IRREDUCIBLE:
        out["status"] = "SKIP"
        return out
    point = (Fraction(0),) * (k - 1) + (Fraction(2),)
    rep = check_membership_witness(p, point, bits=bits, cap=bits)
    with ivl.precision(bits + 32):
        width = ivl.width(rep.value)
        contains_one = ivl.contains(rep.value, 1)
        out["value"] = rep.to_json()["value"]
        out["width"] = ivl.directed_decimal(width, 6, up=True)
        tight = contains_one and width * 10**25 < 1
    out["verdict"] = rep.verdict.value
    out["unitGap"] = unit_gap_property(p, bits=bits, cap=bits).to_json()
    out["status"] = "PASS" if tight and rep.verdict is Verdict.INDETERMINATE else "FAIL"
    return out
