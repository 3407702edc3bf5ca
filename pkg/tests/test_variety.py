import itertools
from pathlib import Path

import pytest

from ratcurves.field import parse_field
from ratcurves.variety import (
    PRESETS,
    SpecError,
    bezout_constant,
    build_spec,
    cone_degree_bound,
    expected_dims,
    load_spec,
    parse_spec_text,
    preset_spec,
    projective_points,
    render_spec,
    smoothness_scan,
    threshold_degree,
    validate_spec,
)

SPECS = Path(__file__).resolve().parent.parent / "specs"


def _brute_projective_count(spec):
    F = spec.field
    n = spec.N + 1
    count = 0
    for v in itertools.product(range(F.q), repeat=n):
        nz = [c for c in v if c]
        if not nz or nz[0] != 1:
            continue
        if all(f(list(v)) == 0 for f in spec.forms):
            count += 1
    return count


@pytest.mark.parametrize("lit", ["p=2", "p=5", "p=7", "p=2,k=2"])
def test_fermat_point_count_matches_brute_force(lit):
    X = preset_spec("dp3-fermat", parse_field(lit))
    assert len(projective_points(X)) == _brute_projective_count(X)


def test_presets_validate_and_report_invariants():
    F = parse_field("p=3")
    table = {"dp3-fermat": (3, 2, 1), "dp4-default": (4, 2, 1), "dp2": (4, 2, 1), "dp1": (6, 2, 1)}
    for name in PRESETS:
        X = preset_spec(name, F)
        assert validate_spec(X) == []
        d, dim, slack = table[name]
        assert (X.d, X.dimX, X.slack) == (d, dim, slack)


@pytest.mark.parametrize("name,lit", [("dp3-fermat", "p=7"), ("dp2", "p=3"), ("dp4-default", "p=3"),
                                      ("dp4-default", "p=5"), ("dp1", "p=5")])
def test_presets_smooth_when_sampled(name, lit):
    assert smoothness_scan(preset_spec(name, parse_field(lit)), 2 if lit in ("p=7", "p=3") else 1) == []


def test_singular_cubic_detected():
    F = parse_field("p=5")
    X = build_spec(F, [1] * 4, ["x0", "x1", "x2", "x3"], ["x3^3 - x0*x1*x2"])
    sing = {tuple(int(c) for c in p) for _, p in smoothness_scan(X, 1)}
    assert sing == {(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0)}


def test_closed_forms_table():
    F = parse_field("p=3")
    cubic = preset_spec("dp3-fermat", F)
    dp2 = preset_spec("dp2", F)
    for e in range(1, 11):
        assert expected_dims(cubic, e) == {"mor": e + 2, "fibre": e - 2}
        assert cone_degree_bound(cubic, e) == 3 ** (3 * e + 1)
        assert cone_degree_bound(dp2, e) == 4 ** (4 * e + 1)
    assert bezout_constant(cubic) == 27
    assert bezout_constant(preset_spec("dp4-default", F)) == 16


def test_threshold_degree():
    X = load_spec(SPECS / "fermat-threefold.spec")
    t = threshold_degree(X)
    assert (t.e0, t.inequality_holds, t.slack_ok) == (1, True, True)
    surf = threshold_degree(preset_spec("dp3-fermat", parse_field("p=7")))
    assert surf.e0 == 2 and not surf.slack_ok
    with pytest.raises(ValueError):
        threshold_degree(preset_spec("dp3-fermat", parse_field("p=7")), strict=True)


def test_spec_text_round_trip():
    for path in sorted(SPECS.glob("*.spec")):
        X = load_spec(path)
        Y = parse_spec_text(render_spec(X))
        assert Y.forms == X.forms and Y.weights == X.weights and Y.field == X.field


def test_validate_reports_inhomogeneous_monomials():
    diags = validate_spec({"field": "p=5", "vars": ["x0", "x1", "x2"], "forms": ["x0^2 + x1^3"]})
    assert len(diags) == 1
    assert "x1^3" in diags[0].message and "x0^2" in diags[0].message


def test_validate_dimension_rule():
    diags = validate_spec({"field": "p=5", "vars": ["x0", "x1"], "forms": ["x0"]})
    assert any(d.rule == "dimension" for d in diags)


def test_bad_spec_text():
    with pytest.raises(SpecError):
        parse_spec_text('field = "p=5"\n')


def test_base_change():
    X = preset_spec("dp3-fermat", parse_field("p=2"))
    Y = X.base_change(2)
    assert Y.field.q == 4
    assert len(projective_points(Y)) >= len(projective_points(X))
