"""Exact bound certificates and least-squares dimension fits."""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field

import numpy as np

from .variety import VarietySpec, bezout_constant, expected_dims

DEFAULT_TOL = 0.6


@dataclass
class BoundCertificate:
    kind: str
    inputs: dict
    bound: int
    measured: int | None = None

    @property
    def passed(self) -> bool | None:
        return None if self.measured is None else self.measured <= self.bound

    def as_dict(self) -> dict:
        return {"kind": self.kind, "inputs": dict(self.inputs), "bound": self.bound,
                "measured": self.measured, "pass": self.passed}


def point_bound(deg: int, dim: int, q: int, measured: int | None = None) -> BoundCertificate:
    if deg < 0 or dim < 0:
        raise ValueError("point_bound needs deg >= 0 and dim >= 0")
    return BoundCertificate("point_bound", {"deg": deg, "dim": dim, "q": q}, deg * q ** dim, measured)


def mor_bound(spec: VarietySpec, e: int, dimZ: int, q: int, measured: int | None = None) -> BoundCertificate:
    """2 (prod d_i) C^e q^dimZ, or prod d_i^(d_i e + 1) q^(dimZ + 1) on weighted models.

    e = 0 is accepted so cumulative sums can include the constant-section term.
    """
    if e < 0:
        raise ValueError("mor_bound needs e >= 0")
    if spec.weighted:
        cone = math.prod(d ** (d * e + 1) for d in spec.degrees)
        inputs = {"e": e, "dimZ": dimZ, "q": q, "cone_degree": cone}
        return BoundCertificate("dp_weighted_bound", inputs, cone * q ** (dimZ + 1), measured)
    C = bezout_constant(spec)
    prod = math.prod(spec.degrees)
    inputs = {"e": e, "dimZ": dimZ, "q": q, "C": C, "prod_d": prod}
    return BoundCertificate("mor_bound", inputs, 2 * prod * C ** e * q ** dimZ, measured)


def bound_formula(spec: VarietySpec, e: int, dimZ: int) -> str:
    if spec.weighted:
        parts = [f"{d}^{d * e + 1}" for d in spec.degrees]
        return "*".join(parts) + f"*q^{dimZ + 1}"
    C = bezout_constant(spec)
    return f"2*{math.prod(spec.degrees)}*{C}^{e}*q^{dimZ}"


@dataclass
class DimFit:
    samples: list
    slope: float
    intercept: float
    residual: float
    expected: float | None = None
    tol: float = DEFAULT_TOL
    excluded: list = dc_field(default_factory=list)

    @property
    def verdict(self) -> str | None:
        if self.expected is None:
            return None
        if abs(self.slope - self.expected) <= self.tol:
            return "consistent"
        return "excess" if self.slope > self.expected else "deficient"

    def as_dict(self) -> dict:
        return {"samples": [list(s) for s in self.samples], "slope": round(self.slope, 6),
                "intercept": round(self.intercept, 6), "residual": round(self.residual, 9),
                "expected": self.expected, "tol": self.tol, "verdict": self.verdict,
                "excluded": [list(s) for s in self.excluded]}


def lang_weil_fit(samples, expected: float | None = None, tol: float = DEFAULT_TOL) -> DimFit:
    """Least-squares slope of log(count) against log(Q); zero counts are set aside."""
    samples = [(int(Q), int(c)) for Q, c in samples]
    good = [(Q, c) for Q, c in samples if c > 0]
    bad = [(Q, c) for Q, c in samples if c <= 0]
    if len({Q for Q, _ in good}) < 2:
        raise ValueError(f"lang_weil_fit needs >= 2 distinct field sizes with positive counts; excluded {bad}")
    x = np.log([Q for Q, _ in good])
    y = np.log([c for _, c in good])
    A = np.vstack([x, np.ones_like(x)]).T
    (slope, icpt), res, _, _ = np.linalg.lstsq(A, y, rcond=None)
    resid = float(np.sum((A @ np.array([slope, icpt]) - y) ** 2))
    return DimFit(good, float(slope), float(icpt), resid, expected, tol, bad)


def default_dimZ(spec: VarietySpec, e: int) -> int:
    """e + 2 on surfaces (off the excluded curves), else the expected dimension of Mor_e."""
    if spec.dimX == 2:
        return e + 2
    return expected_dims(spec, e)["mor"]


@dataclass
class TheoremReport:
    label: str
    q: int
    rows: list
    cumulative: list

    @property
    def all_pass(self) -> bool:
        return all(r.passed for r in self.rows) and all(c["pass"] for c in self.cumulative)

    def as_dict(self) -> dict:
        return {"label": self.label, "q": self.q, "all_pass": self.all_pass,
                "per_degree": [r.as_dict() for r in self.rows], "cumulative": self.cumulative}


def auto_line_components(spec: VarietySpec, threads: int = 1) -> list:
    """F_q-rational lines of X as exclusion components (each a list of linear forms)."""
    from .geometry import enumerate_lines, line_annihilator

    return [line_annihilator(L, spec.field) for L in enumerate_lines(spec, 1, threads=threads)]


def theorem_check(spec: VarietySpec, e_max: int, m: int = 1, exclusions="auto-lines",
                  strategy: str = "auto", threads: int = 1, budget=None, pure: bool = False,
                  reports_out: list | None = None) -> TheoremReport:
    """Per-degree and cumulative comparisons of measured N_U against the bounds."""
    from .morspace import DEFAULT_BUDGET, count_points_bounded_height

    if exclusions == "auto-lines":
        comps = auto_line_components(spec, threads)
    elif exclusions in (None, "none"):
        comps = []
    else:
        comps = list(exclusions)
    q = spec.field.q ** m
    reps = count_points_bounded_height(spec, e_max, comps, m, strategy,
                                       budget or DEFAULT_BUDGET, threads, pure)
    rows, cum = [], []
    running_bound = 0
    for rep in reps:
        cert = mor_bound(spec, rep.e, default_dimZ(spec, rep.e), q, rep.n_u)
        rep.certificates.append(cert)
        rows.append(cert)
        running_bound += cert.bound
        cum.append({"e": rep.e, "measured": rep.cumulative, "bound": running_bound,
                    "pass": rep.cumulative <= running_bound})
    if reports_out is not None:
        reports_out.extend(reps)
    return TheoremReport(spec.label, q, rows, cum)
