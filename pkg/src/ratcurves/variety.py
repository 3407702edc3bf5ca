"""Variety specifications, presets, closed-form constants and smoothness sampling.

Convention: the ambient is weighted projective space with coordinates
x_0..x_N and weights w_0..w_N; X is cut out by R forms of weighted degrees
d_1..d_R.  The anticanonical slack is ``sum(w) - d`` (for ordinary projective
space this is N + 1 - d).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from pathlib import Path

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from . import linalg
from .field import FieldError, FieldSpec, parse_field, render_field
from .forms import FormError, MultiForm, evaluate_many, parse_form, partial_derivative, render_form
from .points import points_on, unweighted_points, all_vectors, forms_vanish


class SpecError(ValueError):
    """Raised for unreadable or invalid variety specifications."""


@dataclass(frozen=True)
class Diagnostic:
    rule: str
    message: str

    def __str__(self):
        return f"variety.{self.rule}: {self.message}"


@dataclass(frozen=True)
class VarietySpec:
    field: FieldSpec
    weights: tuple
    forms: tuple
    label: str = ""
    names: tuple = ()
    preset: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "weights", tuple(int(w) for w in self.weights))
        object.__setattr__(self, "forms", tuple(self.forms))
        if not self.names:
            object.__setattr__(self, "names", tuple(f"x{i}" for i in range(len(self.weights))))

    @property
    def N(self) -> int:
        return len(self.weights) - 1

    @property
    def R(self) -> int:
        return len(self.forms)

    @property
    def degrees(self) -> tuple:
        return tuple(f.wdeg for f in self.forms)

    @property
    def d(self) -> int:
        return sum(self.degrees)

    @property
    def dimX(self) -> int:
        return self.N - self.R

    @property
    def slack(self) -> int:
        return sum(self.weights) - self.d

    @property
    def weighted(self) -> bool:
        return any(w != 1 for w in self.weights)

    @property
    def q(self) -> int:
        return self.field.q

    def base_change(self, m: int) -> "VarietySpec":
        if m == 1:
            return self
        K = self.field.extension(m)
        return VarietySpec(K, self.weights, tuple(f.embed(K) for f in self.forms),
                           self.label, self.names, self.preset)


@dataclass(frozen=True)
class DelPezzoModel:
    degree: int
    spec: VarietySpec


# --- presets -------------------------------------------------------------

PRESETS = {
    "dp3-fermat": {
        "weights": [1, 1, 1, 1],
        "vars": ["x0", "x1", "x2", "x3"],
        "forms": ["x0^3 + x1^3 + x2^3 + x3^3"],
        "degree": 3,
    },
    # sampled smooth over F_3, F_5, F_7 (m <= 2) and F_11, F_13
    "dp4-default": {
        "weights": [1, 1, 1, 1, 1],
        "vars": ["x0", "x1", "x2", "x3", "x4"],
        "forms": ["x0*x2 + x1*x3 + x4^2", "x0*x1 + x1*x4 + x2^2 + x3^2"],
        "degree": 4,
    },
    "dp2": {
        "weights": [2, 1, 1, 1],
        "vars": ["y", "u", "v", "w"],
        "forms": ["y^2 - u^4 - v^4 - w^4"],
        "degree": 2,
    },
    "dp1": {
        "weights": [3, 2, 1, 1],
        "vars": ["y", "z", "u", "v"],
        "forms": ["y^2 - z^3 - u^6 - v^6"],
        "degree": 1,
    },
}


def build_spec(field: FieldSpec, weights, names, form_texts, label="", preset=None) -> VarietySpec:
    weights = tuple(int(w) for w in weights)
    names = tuple(names) if names else tuple(f"x{i}" for i in range(len(weights)))
    if len(names) != len(weights):
        raise SpecError(f"variety.shape: {len(names)} variables but {len(weights)} weights")
    forms = tuple(parse_form(t, field, weights=weights, names=names) for t in form_texts)
    return VarietySpec(field, weights, forms, label, names, preset)


def preset_spec(name: str, field: FieldSpec) -> VarietySpec:
    if name not in PRESETS:
        raise SpecError(f"variety.preset: unknown preset {name!r} (dp5 takes user forms only)")
    p = PRESETS[name]
    return build_spec(field, p["weights"], p["vars"], p["forms"], label=name, preset=name)


def del_pezzo_model(name: str, field: FieldSpec) -> DelPezzoModel:
    return DelPezzoModel(PRESETS[name]["degree"], preset_spec(name, field))


def dp5_model(field: FieldSpec, form_texts) -> DelPezzoModel:
    spec = build_spec(field, [1] * 6, None, form_texts, label="dp5")
    diags = validate_spec(spec)
    if len(form_texts) != 5 or any(f.wdeg != 2 for f in spec.forms):
        diags.append(Diagnostic("dp5-shape", "a degree-5 model needs five quadrics in P^5"))
    if diags:
        raise SpecError("; ".join(map(str, diags)))
    return DelPezzoModel(5, spec)


# --- validation ------------------------------------------------------------

def validate_spec(spec) -> list:
    """Return a list of Diagnostics (empty means ok).

    ``spec`` may be a VarietySpec or the raw mapping read from a spec file; the
    latter also reports parse-level problems such as inhomogeneous forms.
    """
    if isinstance(spec, dict):
        try:
            spec = spec_from_mapping(spec)
        except (SpecError, FormError, FieldError) as exc:
            return [Diagnostic(getattr(exc, "rule", "parse"), str(exc))]
    diags = []
    if any(w < 1 for w in spec.weights):
        diags.append(Diagnostic("weights", "weights must be positive integers"))
    if spec.R == 0:
        diags.append(Diagnostic("forms", "at least one defining form is required"))
    if spec.R >= spec.N:
        diags.append(Diagnostic("dimension", f"R = {spec.R} forms in P^{spec.N}: need R < N"))
    for i, f in enumerate(spec.forms):
        if f.field != spec.field:
            diags.append(Diagnostic("field", f"form {i} lives over {f.field}, not {spec.field}"))
        if f.weights != spec.weights:
            diags.append(Diagnostic("weights", f"form {i} uses weights {f.weights}"))
        if f.is_zero():
            diags.append(Diagnostic("zero-form", f"form {i} is identically zero"))
        elif f.wdeg is None or f.wdeg < 1:
            diags.append(Diagnostic("degree", f"form {i} has degree {f.wdeg}; need >= 1"))
    return diags


# --- closed-form constants ------------------------------------------------------

def bezout_constant(spec: VarietySpec) -> int:
    return math.prod(d ** d for d in spec.degrees)


def cone_degree_bound(spec: VarietySpec, e: int) -> int:
    if e < 1:
        raise ValueError("cone_degree_bound needs e >= 1")
    return math.prod(d ** (d * e + 1) for d in spec.degrees)


def expected_dims(spec: VarietySpec, e: int) -> dict:
    if spec.slack < 1:
        raise ValueError(f"expected_dims needs a Fano slack >= 1, got {spec.slack}")
    return {"mor": e * spec.slack + spec.dimX, "fibre": e * spec.slack - 2}


@dataclass(frozen=True)
class Threshold:
    e0: int
    inequality_holds: bool
    slack_ok: bool


def threshold_degree(spec: VarietySpec, strict: bool = False) -> Threshold:
    """e_0 = ceil((d - R) / slack) and the check (e_0 + 1) * slack - 1 >= N - R.

    The induction behind e_0 assumes slack >= 2; ``slack_ok`` records whether it
    holds.  With ``strict`` a smaller slack raises instead.
    """
    s = spec.slack
    if s < 1 or (strict and s < 2):
        raise ValueError(f"threshold_degree needs slack >= {2 if strict else 1}, got {s}")
    e0 = -(-(spec.d - spec.R) // s)
    return Threshold(e0, (e0 + 1) * s - 1 >= spec.N - spec.R, s >= 2)


# --- smoothness sampling ------------------------------------------------------

def _rank_deficient(jac, R, F):
    """jac: list over forms of lists over variables of value arrays; True where rank < R."""
    n = len(jac[0])
    npts = jac[0][0].shape[0]
    if R == 1:
        ok = np.zeros(npts, dtype=bool)
        for col in jac[0]:
            ok |= col != 0
        return ~ok
    if R == 2:
        ok = np.zeros(npts, dtype=bool)
        for i in range(n):
            for j in range(i + 1, n):
                ok |= F.vsub(F.vmul(jac[0][i], jac[1][j]), F.vmul(jac[0][j], jac[1][i])) != 0
        return ~ok
    bad = np.zeros(npts, dtype=bool)
    for k in range(npts):
        mat = [[int(jac[r][c][k]) for c in range(n)] for r in range(R)]
        bad[k] = linalg.rank(mat, F) < R
    return bad


def smoothness_scan(spec: VarietySpec, m_max: int = 1) -> list:
    """Singular points of X over F_{q^m}, m = 1..m_max, as (m, point) pairs.

    An empty result only certifies that no singular point exists over the
    scanned fields.  Weighted ambients are scanned on the charts where some
    weight-1 coordinate equals 1.
    """
    found = []
    for m in range(1, m_max + 1):
        S = spec.base_change(m)
        F = S.field
        if not S.weighted:
            pts = points_on(S.forms, F, S.weights)
            jac = [[evaluate_many(partial_derivative(f, i), pts) for i in range(S.N + 1)] for f in S.forms]
            bad = _rank_deficient(jac, S.R, F) if len(pts) else np.zeros(0, dtype=bool)
            found.extend((m, tuple(int(v) for v in p)) for p in pts[bad])
            continue
        ones = [i for i, w in enumerate(S.weights) if w == 1]
        seen = set()
        for c in ones:
            # chart x_c = 1 with all earlier weight-1 coordinates zero: each point once
            others = [i for i in range(S.N + 1) if i != c]
            free = [i for i in others if not (S.weights[i] == 1 and i < c)]
            vals = all_vectors(F.q, len(free))
            pts = np.zeros((vals.shape[0], S.N + 1), dtype=np.int64)
            pts[:, c] = 1
            pts[:, free] = vals
            pts = pts[forms_vanish(S.forms, pts)]
            if not len(pts):
                continue
            jac = [[evaluate_many(partial_derivative(f, i), pts) for i in others] for f in S.forms]
            bad = _rank_deficient(jac, S.R, F)
            for p in pts[bad]:
                key = tuple(int(v) for v in p)
                if key not in seen:
                    seen.add(key)
                    found.append((m, key))
    return found


def is_smooth_sampled(spec: VarietySpec, m_max: int = 1) -> bool:
    return not smoothness_scan(spec, m_max)


# --- spec files --------------------------------------------------------------

def spec_from_mapping(data: dict) -> VarietySpec:
    if "field" not in data:
        raise SpecError("variety.spec-file: missing key 'field'")
    field = parse_field(str(data["field"]))
    preset = data.get("preset")
    if preset is not None and "forms" not in data:
        spec = preset_spec(preset, field)
        label = data.get("label", spec.label)
        return VarietySpec(spec.field, spec.weights, spec.forms, label, spec.names, preset)
    for key in ("forms",):
        if key not in data:
            raise SpecError(f"variety.spec-file: missing key {key!r}")
    forms = data["forms"]
    if isinstance(forms, str) or not isinstance(forms, list):
        raise SpecError("variety.spec-file: 'forms' must be a list of strings")
    names = data.get("vars")
    weights = data.get("weights")
    if weights is None:
        if names is None:
            raise SpecError("variety.spec-file: need 'weights' or 'vars'")
        weights = [1] * len(names)
    return build_spec(field, weights, names, forms, label=str(data.get("label", "")), preset=preset)


def parse_spec_text(text: str) -> VarietySpec:
    try:
        data = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise SpecError(f"variety.spec-file: {exc}") from None
    return spec_from_mapping(data)


def load_spec(path) -> VarietySpec:
    return parse_spec_text(Path(path).read_text(encoding="utf-8"))


def _toml_str(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def render_spec(spec: VarietySpec) -> str:
    """Canonical spec-file text (stable byte-for-byte)."""
    lines = [f"label = {_toml_str(spec.label)}", f"field = {_toml_str(render_field(spec.field))}"]
    if spec.preset:
        lines.append(f"preset = {_toml_str(spec.preset)}")
    lines.append("weights = [" + ", ".join(str(w) for w in spec.weights) + "]")
    lines.append("vars = [" + ", ".join(_toml_str(n) for n in spec.names) + "]")
    lines.append("forms = [")
    for f in spec.forms:
        lines.append(f"  {_toml_str(render_form(f, spec.names))},")
    lines.append("]")
    return "\n".join(lines) + "\n"


def projective_points(spec: VarietySpec, m: int = 1) -> np.ndarray:
    S = spec.base_change(m)
    return points_on(S.forms, S.field, S.weights)


def ambient_points(F: FieldSpec, n: int) -> np.ndarray:
    return unweighted_points(F, n)
