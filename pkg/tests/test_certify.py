import math

import pytest

from ratcurves import certify
from ratcurves.field import parse_field
from ratcurves.variety import preset_spec


def test_point_bound_values():
    c = certify.point_bound(3, 2, 7, measured=57)
    assert c.bound == 147 and c.passed
    assert certify.point_bound(2, 1, 5).passed is None
    assert not certify.point_bound(1, 0, 5, measured=2).passed
    with pytest.raises(ValueError):
        certify.point_bound(-1, 1, 5)


def test_mor_bound_unweighted():
    X = preset_spec("dp3-fermat", parse_field("p=3"))
    for e in range(0, 5):
        c = certify.mor_bound(X, e, e + 2, 3)
        assert c.kind == "mor_bound"
        assert c.bound == 2 * 3 * 27 ** e * 3 ** (e + 2)
        assert certify.bound_formula(X, e, e + 2) == f"2*3*27^{e}*q^{e + 2}"


def test_mor_bound_weighted():
    X = preset_spec("dp2", parse_field("p=3"))
    for e in range(0, 4):
        c = certify.mor_bound(X, e, e + 2, 3)
        assert c.kind == "dp_weighted_bound"
        assert c.bound == 4 ** (4 * e + 1) * 3 ** (e + 3)
    dp1 = preset_spec("dp1", parse_field("p=2"))
    assert certify.bound_formula(dp1, 2, 4) == "6^13*q^5"


def test_mor_bound_rejects_negative_degree():
    X = preset_spec("dp3-fermat", parse_field("p=3"))
    with pytest.raises(ValueError):
        certify.mor_bound(X, -1, 1, 3)


def test_fit_recovers_exact_power_law():
    samples = [(q, 3 * q ** 4) for q in (5, 7, 11, 13)]
    fit = certify.lang_weil_fit(samples, expected=4)
    assert fit.slope == pytest.approx(4.0)
    assert fit.intercept == pytest.approx(math.log(3))
    assert fit.verdict == "consistent"


def test_fit_verdicts_and_zero_counts():
    samples = [(3, 0), (5, 125), (7, 343)]
    fit = certify.lang_weil_fit(samples, expected=5, tol=0.5)
    assert fit.excluded == [(3, 0)]
    assert fit.verdict == "deficient"
    assert certify.lang_weil_fit(samples, expected=1, tol=0.5).verdict == "excess"
    with pytest.raises(ValueError):
        certify.lang_weil_fit([(3, 0), (5, 10)])


def test_default_dimZ():
    F = parse_field("p=7")
    assert certify.default_dimZ(preset_spec("dp3-fermat", F), 3) == 5


def test_theorem_check_small():
    X = preset_spec("dp3-fermat", parse_field("p=2"))
    tr = certify.theorem_check(X, 2)
    assert tr.all_pass
    assert [c["e"] for c in tr.cumulative] == [0, 1, 2]
    assert tr.cumulative[-1]["bound"] == sum(r.bound for r in tr.rows)


def test_auto_line_components_cut_out_lines():
    X = preset_spec("dp3-fermat", parse_field("p=2"))
    comps = certify.auto_line_components(X)
    assert comps and all(len(c) == 2 for c in comps)
