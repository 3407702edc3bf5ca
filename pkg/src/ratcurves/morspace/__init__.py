"""Counting F_{q^m}-points of Mor_e(P^1, X).

A section of height degree e is a tuple of polynomials x_i(t) with
deg x_i <= w_i e, some coordinate attaining its cap, no common zero, and
F_j(x(t)) identically zero for every defining form.  Orbits are taken under
lam . x = (lam^{w_i} x_i), counted exactly via lex-least representatives.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from ..forms import compose_with_sections
from ..unipoly import UniPoly
from .engine import (
    BACKEND,
    DEFAULT_BUDGET,
    BudgetExceeded,
    NodeShortage,
    build_job,
    plan_strategy,
    run_job,
)

__all__ = [
    "BACKEND", "DEFAULT_BUDGET", "BudgetExceeded", "NodeShortage", "SectionTuple", "CountReport",
    "enumerate_sections", "value_vector_search", "count_mor", "exclusion_test",
    "count_points_bounded_height", "embed_components",
]

CONVENTION = "U_e: gcd of all coordinates = 1 and some deg x_i = w_i e"


@dataclass(frozen=True)
class SectionTuple:
    polys: tuple
    e: int
    m: int = 1

    @property
    def field(self):
        return self.polys[0].field

    def coefficients(self):
        return tuple(tuple(p.coeffs) for p in self.polys)


@dataclass
class CountReport:
    label: str
    e: int
    m: int
    q: int
    strategy: str
    raw: int
    orbits: int
    excluded_raw: int = 0
    excluded_orbits: int = 0
    orbit_size_sum: int = 0
    cumulative: int | None = None
    certificates: list = dc_field(default_factory=list)
    notes: list = dc_field(default_factory=list)

    @property
    def n_u(self) -> int:
        return self.orbits - self.excluded_orbits

    def as_dict(self) -> dict:
        out = {
            "label": self.label, "e": self.e, "m": self.m, "q": self.q, "strategy": self.strategy,
            "raw": self.raw, "orbits": self.orbits, "excluded_raw": self.excluded_raw,
            "excluded_orbits": self.excluded_orbits, "orbit_size_sum": self.orbit_size_sum,
            "n_u": self.n_u, "notes": list(self.notes),
        }
        if self.cumulative is not None:
            out["cumulative"] = self.cumulative
        if self.certificates:
            out["certificates"] = [c.as_dict() if hasattr(c, "as_dict") else c for c in self.certificates]
        return out


def embed_components(components, K):
    return [[g.embed(K) for g in comp] for comp in components]


def _section_from_coefs(coefs, spec, e, m):
    F = spec.field
    polys = []
    pos = 0
    for w in spec.weights:
        polys.append(UniPoly(F, coefs[pos:pos + w * e + 1]))
        pos += w * e + 1
    return SectionTuple(tuple(polys), e, m)


def _orbit_coefs(coefs, spec, e):
    F = spec.field
    out = set()
    for lam in range(1, F.q):
        row = []
        pos = 0
        for w in spec.weights:
            lw = F.pow(lam, w)
            row.extend(F.mul(lw, c) for c in coefs[pos:pos + w * e + 1])
            pos += w * e + 1
        out.add(tuple(row))
    return out


def _collect(spec, e, m, strategy, exclusions, budget, threads, pure):
    S = spec.base_change(m)
    excl = embed_components(exclusions or [], S.field)
    job, plan = build_job(S, e, strategy, excl, collect=True, budget=budget)
    acc, collected = run_job(job, threads=threads, pure=pure)
    return S, acc, collected, plan


def enumerate_sections(spec, e, m=1, strategy="naive", budget=DEFAULT_BUDGET, threads=1, pure=False):
    """Every section tuple (before orbit reduction), in lex order of coefficients."""
    if e < 0:
        raise ValueError("e must be >= 0")
    S, _, collected, _ = _collect(spec, e, m, strategy, None, budget, threads, pure)
    allc = set()
    for coefs, _ in collected:
        allc |= _orbit_coefs(coefs, S, e)
    for coefs in sorted(allc):
        yield _section_from_coefs(coefs, S, e, m)


def value_vector_search(spec, e, m=1, budget=DEFAULT_BUDGET, threads=1, pure=False):
    """Sections found by interpolating cone-point values at the nodes 0..e."""
    return enumerate_sections(spec, e, m, "interpolation", budget, threads, pure)


def count_mor(spec, e, m=1, strategy="auto", exclusions=None, budget=DEFAULT_BUDGET,
              threads=1, pure=False) -> CountReport:
    if e < 0:
        raise ValueError("e must be >= 0")
    S = spec.base_change(m)
    excl = embed_components(exclusions or [], S.field)
    job, plan = build_job(S, e, strategy, excl, collect=False, budget=budget)
    acc, _ = run_job(job, threads=threads, pure=pure)
    raw, orbits, xr, xo, oss = acc
    notes = [CONVENTION]
    if e == 0:
        notes.append("e = 0 counts constant sections, i.e. points")
    return CountReport(spec.label, e, m, spec.field.q, plan.mode, raw, orbits, xr, xo, oss, notes=notes)


def exclusion_test(x: SectionTuple, Z) -> bool:
    """True iff x(t) lies inside some component (all its generators compose to zero)."""
    K = x.field
    for comp in Z:
        if all(compose_with_sections(g.embed(K) if g.field != K else g, x.polys, x.e).is_zero()
               for g in comp):
            return True
    return False


def count_points_bounded_height(spec, e_max, exclusions=None, m=1, strategy="auto",
                                budget=DEFAULT_BUDGET, threads=1, pure=False) -> list:
    """Per-degree reports for k = 0..e_max; ``cumulative`` holds N_U(q^k)."""
    if e_max < 1:
        raise ValueError("e_max must be >= 1")
    out = []
    running = 0
    for k in range(0, e_max + 1):
        rep = count_mor(spec, k, m, strategy, exclusions, budget, threads, pure)
        running += rep.n_u
        rep.cumulative = running
        out.append(rep)
    return out
