import random
from fractions import Fraction as F

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from ekd import intervals as ivl
from ekd.errors import InputError, NoGapError
from ekd.polynomial import make_trinomial, parse_polynomial as P
from ekd.roots import ModulusProfile, modulus_profile
from ekd.verify import (CaseClass, Verdict, check_membership_witness, conjugate_product, margin_identity_check,
                        irreducibility, modulus_separation, sz_bound, sz_remark_check, unit_gap_property)

# moduli of x^5 - 10x^2 + 1 from mpmath.polyroots (300 extra bits), descending
X5 = ["2.16236564101913643778856918684", "2.13861716962060319364751921578"]


def _near(x, ref, tol=1e-25):
    with ivl.precision(200):
        return ivl.lo(x) - tol <= mpmath.mpf(ref) <= ivl.hi(x) + tol


def test_conjugate_product_examples():
    prof = modulus_profile(P("x^3 - x - 1"))
    assert ivl.contains(conjugate_product(prof, [2]), 1)
    assert ivl.contains(conjugate_product(prof, [0]), ivl.lo(prof.moduli[0]))
    x5 = modulus_profile(P("x^5 - 10x^2 + 1"))
    # the second LARGEST modulus is raised to the 4th power, not a small root
    with ivl.precision(200):
        ref = mpmath.mpf(X5[0]) * mpmath.mpf(X5[0]) ** 4
    assert _near(conjugate_product(x5, [4]), ref, 1e-20)
    with pytest.raises(InputError):
        conjugate_product(x5, [-1])
    with pytest.raises(InputError):
        conjugate_product(x5, [1] * 5)


def test_membership_examples():
    assert check_membership_witness(P("x^5 - 10x^2 + 1"), [4, 0]).verdict is Verdict.POSITIVE
    r = check_membership_witness(P("x^6 - x^2 - 1"), [0, 2])
    assert r.verdict is Verdict.INDETERMINATE and r.precision_bits == 4096 and ivl.contains(r.value, 1)
    r = check_membership_witness(P("x^3 - x - 1"), [3])
    assert r.verdict is Verdict.NEGATIVE
    with ivl.precision(200):
        ref = 1 / mpmath.sqrt(mpmath.mpf("1.32471795724474602596090885448"))
    assert _near(r.value, ref, 1e-25)
    assert check_membership_witness(P("x^3 - x - 1"), [2 - F(1, 10**6)]).verdict is Verdict.POSITIVE


def test_membership_rejects_reducible():
    with pytest.raises(InputError):
        check_membership_witness(P("x^4 - 3x^2 + 1"), [1])
    with pytest.raises(InputError):
        check_membership_witness(P("x^3 - x - 1"), [1, 1, 1])


def test_margin_report_json():
    r = check_membership_witness(P("x^5 - 10x^2 + 1"), [F(3, 2), 0], subset=[2])
    js = r.to_json()
    assert js["c"] == ["3/2", "0"] and js["subsetJ"] == [2] and js["verdict"] == "POSITIVE"
    assert set(js["value"]) == {"lo", "hi", "bits"}
    assert float(js["value"]["lo"]) <= float(js["value"]["hi"])


def test_margin_identity_examples():
    for text, k, J in [("x^3 - x - 1", 1, [1]), ("x^6 - x^2 - 1", 2, [2]), ("x^5 - 10x^2 + 1", 1, [1])]:
        rep = margin_identity_check(P(text), k, J)
        assert rep.holds
        with ivl.precision(200):
            assert ivl.width(rep.residual) < 1e-20
    tight = margin_identity_check(P("x^6 - x^2 - 1"), 2, [2])
    assert ivl.contains(tight.lhs, 0) and ivl.contains(tight.rhs, 0)
    with pytest.raises(InputError):
        margin_identity_check(P("x^3 - x - 2"), 1, [1])
    with pytest.raises(InputError):
        margin_identity_check(P("x^3 - x - 1"), 2, [2])


def test_separation_examples():
    rep = modulus_separation(modulus_profile(P("x^3 - x - 1")))
    assert rep.case_class is CaseClass.REAL_COMPLEX
    with ivl.precision(200):
        ref = mpmath.mpf("1.32471795724474602596090885448") - 1 / mpmath.sqrt(mpmath.mpf("1.32471795724474602596090885448"))
    assert _near(rep.min_gap, ref)
    rep = modulus_separation(modulus_profile(P("x^2 - 3x + 2")))
    assert rep.case_class is CaseClass.REAL_REAL and ivl.contains(rep.min_gap, 1)
    rep = modulus_separation(modulus_profile(P("x^5 - 10x^2 + 1")))
    # the two inner real roots are closest: 0.31673... - 0.31573...
    assert rep.case_class is CaseClass.REAL_REAL and rep.pair == (3, 4)
    with ivl.precision(200):
        ref = mpmath.mpf("0.316731358983211904677995837714") - mpmath.mpf("0.315731288973310136322619126841")
    assert _near(rep.min_gap, ref)
    js = rep.to_json()
    assert js["H"] == 10 and js["d"] == 5 and js["caseClass"] == "REAL_REAL"
    with pytest.raises(NoGapError):
        modulus_separation(modulus_profile(P("x^2 + 1")))


def test_separation_complex_complex():
    # roots +-i*phi and +-i/phi: two conjugate pairs whose moduli differ by exactly 1
    rep = modulus_separation(modulus_profile(P("x^4 + 3x^2 + 1")))
    assert rep.case_class is CaseClass.COMPLEX_COMPLEX and ivl.contains(rep.min_gap, 1)


def test_unit_gap_examples():
    for text in ["x^3 - x - 1", "x^6 - x^2 - 1", "x^5 - 10x^2 + 1"]:
        r = unit_gap_property(P(text))
        assert r.holds and r.index is None
    with pytest.raises(InputError):
        unit_gap_property(P("x^2 - 2"))
    with pytest.raises(InputError):
        unit_gap_property(P("x^2 + x + 1"))


def test_sz_examples():
    r = sz_remark_check(4, 100)
    assert r.holds and r.rhs == F(1011, 989)
    with ivl.precision(200):
        # |r0| |r1|^3 from mpmath.polyroots: 99.99999899999997 * 0.21559852289818898677^3
        assert abs(ivl.lo(r.lhs) - mpmath.mpf("1.00216063352294229656")) < 1e-18
    r = sz_remark_check(3, 3)
    assert r.holds and r.rhs == 1 + F(22, 19)
    r = sz_remark_check(2, 5)
    assert r.holds and ivl.contains(r.lhs, 1)
    assert sz_bound(-7) == sz_bound(7)


def test_sz_skips_reducible(monkeypatch):
    # x^d - h x^(d-1) + 1 with |h| >= 3 has no rational root, so fake the verdict
    import ekd.verify as verify
    from ekd.irreducible import Irreducibility, IrreducibilityVerdict
    monkeypatch.setattr(verify, "irreducibility",
                        lambda p, cap=4096: IrreducibilityVerdict(Irreducibility.UNKNOWN, None, cap))
    r = sz_remark_check(4, 7)
    assert r.status == "SKIP" and r.holds is None and r.lhs is None


def _shuffled(profile: ModulusProfile, rng) -> ModulusProfile:
    """Same profile with roots permuted inside every tied group."""
    order = []
    for g in profile.tied_groups:
        g = list(g)
        rng.shuffle(g)
        order.extend(g)
    inv = {old: new for new, old in enumerate(order)}
    return ModulusProfile(
        roots=tuple(profile.roots[i] for i in order),
        moduli=tuple(profile.moduli[i] for i in order),
        tied_groups=profile.tied_groups,
        partner=tuple(inv[profile.partner[i]] for i in order),
        bits=profile.bits,
        poly=profile.poly,
        cap=profile.cap,
    )


@settings(max_examples=25, deadline=None)
@given(st.integers(3, 9), st.integers(1, 8), st.integers(3, 40), st.booleans(), st.randoms(use_true_random=False))
def test_permutation_invariance(d, j, h, neg, rng):
    if j >= d:
        return
    p = make_trinomial((d, j, -h if neg else h))
    prof = modulus_profile(p)
    other = _shuffled(prof, rng)
    for c in ([d - 1], [0, F(d - 2, 2)] if d > 2 else [1]):
        if len(c) >= d:
            continue
        a, b = conjugate_product(prof, c), conjugate_product(other, c)
        assert ivl.lo(a) == ivl.lo(b) and ivl.hi(a) == ivl.hi(b)
    if len(prof.tied_groups) > 1:
        s1, s2 = modulus_separation(prof), modulus_separation(other)
        assert s1.to_json() == s2.to_json()


@settings(max_examples=25, deadline=None)
@given(st.integers(4, 9), st.integers(1, 8), st.integers(3, 40), st.data())
def test_monotone_when_moduli_small(d, j, h, data):
    if j >= d:
        return
    prof = modulus_profile(make_trinomial((d, j, h)))
    k = data.draw(st.integers(1, d - 1))
    if not all(ivl.hi(prof.position(i)) <= 1 for i in range(1, k + 1)):
        return
    c = [F(data.draw(st.integers(0, 8)), 4) for _ in range(k)]
    c2 = [x + F(data.draw(st.integers(0, 8)), 4) for x in c]
    a, b = conjugate_product(prof, c), conjugate_product(prof, c2)
    with ivl.precision(prof.bits + 32):
        assert ivl.lo(a) >= ivl.hi(b) - 2 * ivl.width(a)


def test_membership_vertex_oracle_random():
    """Compare a handful of verdicts with a plain mpmath evaluation at 100 digits."""
    rng = random.Random(7)
    for _ in range(6):
        d = rng.randint(4, 8)
        j = rng.randint(1, d - 1)
        h = rng.choice([-1, 1]) * rng.randint(3, 40)
        p = make_trinomial((d, j, h))
        if irreducibility(p).status.value != "IRREDUCIBLE":
            continue
        mpmath.mp.dps = 100
        try:
            mods = sorted((abs(z) for z in mpmath.polyroots(list(reversed(p.coeffs)), maxsteps=500, extraprec=400)),
                          reverse=True)
            c = [F(rng.randint(0, 12), rng.randint(1, 3)) for _ in range(rng.randint(1, d - 1))]
            ref = mods[0]
            for i, ci in enumerate(c, 1):
                ref *= mods[i] ** (mpmath.mpf(ci.numerator) / ci.denominator)
        finally:
            mpmath.mp.dps = 15
        rep = check_membership_witness(p, c, cap=512)
        if rep.verdict is Verdict.POSITIVE:
            assert ref > 1
        elif rep.verdict is Verdict.NEGATIVE:
            assert ref < 1
