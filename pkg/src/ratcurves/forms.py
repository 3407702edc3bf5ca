"""Sparse weighted-homogeneous forms over F_q.

A form stores its nonzero terms as ``(exponent_tuple, coefficient)`` pairs in
graded-lexicographic descending order, so iteration, rendering and hashing are
deterministic.  Coefficients are field encodings (see ``field``).
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import cached_property

import numpy as np

from . import linalg
from ._expr import ExprError, parse_poly
from .field import FieldSpec, FqElem
from .unipoly import UniPoly


class FormError(ValueError):
    pass


class InhomogeneousFormError(FormError):
    def __init__(self, msg, monomials):
        super().__init__(msg)
        self.monomials = monomials


def _grlex_key(exp):
    return (sum(exp), exp)


def default_names(n):
    return tuple(f"x{i}" for i in range(n))


@dataclass(frozen=True)
class MultiForm:
    field: FieldSpec
    weights: tuple
    terms: tuple
    wdeg: int | None
    names: tuple | None = dc_field(default=None, compare=False, repr=False)

    @classmethod
    def from_dict(cls, field, weights, mapping, wdeg=None, names=None, check=True):
        weights = tuple(int(w) for w in weights)
        items = [(tuple(e), int(c)) for e, c in mapping.items() if c]
        items.sort(key=lambda it: _grlex_key(it[0]), reverse=True)
        if check and items:
            degs = {}
            for e, _ in items:
                if len(e) != len(weights):
                    raise FormError(f"exponent {e} does not match {len(weights)} variables")
                degs.setdefault(sum(w * a for w, a in zip(weights, e)), e)
            if len(degs) > 1:
                (d1, e1), (d2, e2) = list(degs.items())[:2]
                nm = names or default_names(len(weights))
                m1, m2 = _render_mono(e1, nm), _render_mono(e2, nm)
                raise InhomogeneousFormError(
                    f"inhomogeneous form: {m1} has weighted degree {d1} but {m2} has {d2}",
                    (m1, m2),
                )
            found = next(iter(degs))
            if wdeg is not None and wdeg != found:
                raise FormError(f"form has weighted degree {found}, expected {wdeg}")
            wdeg = found
        return cls(field, weights, tuple(items), wdeg, tuple(names) if names else None)

    @classmethod
    def zero(cls, field, weights, wdeg=None, names=None):
        return cls(field, tuple(weights), (), wdeg, names)

    @classmethod
    def variable(cls, field, weights, i, names=None):
        e = [0] * len(weights)
        e[i] = 1
        return cls.from_dict(field, weights, {tuple(e): 1}, names=names)

    @classmethod
    def linear(cls, field, coeffs, names=None):
        n = len(coeffs)
        mapping = {}
        for i, c in enumerate(coeffs):
            e = [0] * n
            e[i] = 1
            mapping[tuple(e)] = c
        return cls.from_dict(field, (1,) * n, mapping, wdeg=1, names=names)

    @property
    def nvars(self) -> int:
        return len(self.weights)

    @cached_property
    def coeff_dict(self) -> dict:
        return dict(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def var_names(self):
        return self.names or default_names(self.nvars)

    def _like(self, mapping, wdeg=None, check=False):
        return MultiForm.from_dict(self.field, self.weights, mapping, wdeg=wdeg, names=self.names, check=check)

    def _compatible(self, other):
        if not isinstance(other, MultiForm):
            raise TypeError("expected MultiForm")
        if other.field != self.field or other.weights != self.weights:
            raise FormError("forms live in different rings")

    def __add__(self, other):
        self._compatible(other)
        if self.wdeg is not None and other.wdeg is not None and self.wdeg != other.wdeg \
                and self.terms and other.terms:
            raise FormError(f"adding forms of degrees {self.wdeg} and {other.wdeg}")
        F = self.field
        out = dict(self.terms)
        for e, c in other.terms:
            out[e] = F.add(out.get(e, 0), c)
        wdeg = self.wdeg if self.terms else other.wdeg
        return self._like(out, wdeg)

    def __neg__(self):
        F = self.field
        return self._like({e: F.neg(c) for e, c in self.terms}, self.wdeg)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c: int):
        F = self.field
        return self._like({e: F.mul(v, c) for e, v in self.terms}, self.wdeg)

    def __mul__(self, other):
        if isinstance(other, FqElem):
            return self.scale(other.value)
        if isinstance(other, int):
            return self.scale(self.field.from_int(other))
        self._compatible(other)
        F = self.field
        out = {}
        for ea, ca in self.terms:
            for eb, cb in other.terms:
                e = tuple(x + y for x, y in zip(ea, eb))
                out[e] = F.add(out.get(e, 0), F.mul(ca, cb))
        wdeg = None if self.wdeg is None or other.wdeg is None else self.wdeg + other.wdeg
        return self._like(out, wdeg)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = self._like({(0,) * self.nvars: 1}, 0)
        for _ in range(n):
            out = out * self
        return out

    def embed(self, target: FieldSpec) -> "MultiForm":
        if target == self.field:
            return self
        emb = self.field.embed_map(target)
        return MultiForm(target, self.weights, tuple((e, int(emb[c])) for e, c in self.terms),
                         self.wdeg, self.names)

    def evaluate(self, point):
        return evaluate(self, point)

    def __call__(self, point):
        return evaluate(self, point)

    def __str__(self):
        return render_form(self)


def _render_mono(exp, names):
    parts = []
    for n, a in zip(names, exp):
        if a == 1:
            parts.append(n)
        elif a > 1:
            parts.append(f"{n}^{a}")
    return "*".join(parts)


def render_form(f: MultiForm, names=None) -> str:
    """Canonical text: grlex-descending terms, coefficients as field literals."""
    if f.is_zero():
        return "0"
    names = names or f.var_names
    out = []
    for e, c in f.terms:
        mono = _render_mono(e, names)
        lit = f.field.render(c)
        if "+" in lit:
            lit = f"({lit})"
        if not mono:
            out.append(lit)
        elif c == 1:
            out.append(mono)
        else:
            out.append(f"{lit}*{mono}")
    return " + ".join(out)


def parse_form(text: str, field: FieldSpec, nvars: int | None = None, weights=None,
               names=None) -> MultiForm:
    if names is None:
        if nvars is None:
            nvars = len(weights) if weights is not None else None
        if nvars is None:
            raise FormError("parse_form needs nvars, weights or names")
        names = default_names(nvars)
    names = tuple(names)
    nvars = len(names)
    if weights is None:
        weights = (1,) * nvars
    weights = tuple(weights)
    if len(weights) != nvars:
        raise FormError(f"{len(weights)} weights for {nvars} variables")
    if "g" in names:
        raise FormError("'g' is reserved for the field generator")
    vars_ = list(names) + (["g"] if field.k > 1 else [])
    try:
        raw = parse_poly(text, vars_)
    except ExprError as exc:
        raise FormError(f"cannot parse form {text!r}: {exc}") from None
    F = field
    mapping = {}
    for exp, c in raw.items():
        coeff = F.from_int(c)
        if field.k > 1 and exp[-1]:
            coeff = F.mul(coeff, F.pow(F.gen, exp[-1]))
        key = exp[:nvars]
        mapping[key] = F.add(mapping.get(key, 0), coeff)
    mapping = {e: c for e, c in mapping.items() if c}
    if not mapping:
        if text.strip() == "0":
            return MultiForm.zero(field, weights, names=names)
        raise FormError(f"form {text!r} reduces to zero over {field}; write '0' explicitly")
    return MultiForm.from_dict(field, weights, mapping, names=names)


def _coerce_point(f, point):
    vals = [p.value if isinstance(p, FqElem) else int(p) for p in point]
    if len(vals) != f.nvars:
        raise FormError(f"point has {len(vals)} coordinates, form has {f.nvars} variables")
    return vals


def evaluate(f: MultiForm, point) -> int:
    """Exact value at ``point`` (encodings or FqElems in f.field)."""
    F = f.field
    x = _coerce_point(f, point)
    acc = 0
    for e, c in f.terms:
        v = c
        for xi, a in zip(x, e):
            if a:
                v = F.mul(v, F.pow(xi, a))
                if not v:
                    break
        acc = F.add(acc, v)
    return acc


def evaluate_many(f: MultiForm, points: np.ndarray) -> np.ndarray:
    """Vectorized evaluation at the rows of ``points`` (int64 encodings)."""
    F = f.field
    points = np.asarray(points, dtype=np.int64)
    n = points.shape[0]
    acc = np.zeros(n, dtype=np.int64)
    if f.is_zero():
        return acc
    maxexp = [max(e[i] for e, _ in f.terms) for i in range(f.nvars)]
    powers = []
    for i in range(f.nvars):
        col = points[:, i]
        pw = [np.ones(n, dtype=np.int64)]
        for _ in range(maxexp[i]):
            pw.append(F.vmul(pw[-1], col))
        powers.append(pw)
    for e, c in f.terms:
        v = np.full(n, c, dtype=np.int64)
        for i, a in enumerate(e):
            if a:
                v = F.vmul(v, powers[i][a])
        acc = F.vadd(acc, v)
    return acc


def partial_derivative(f: MultiForm, i: int) -> MultiForm:
    F = f.field
    out = {}
    for e, c in f.terms:
        a = e[i]
        if a % F.p == 0:
            continue
        ne = list(e)
        ne[i] -= 1
        out[tuple(ne)] = F.mul(c, a % F.p)
    wdeg = None if f.wdeg is None else f.wdeg - f.weights[i]
    return f._like(out, wdeg)


def _require_unweighted(f, op):
    if any(w != 1 for w in f.weights):
        raise FormError(f"{op} needs an ordinary (unweighted) projective ambient")


def _as_ints(rows):
    return [[x.value if isinstance(x, FqElem) else int(x) for x in row] for row in rows]


def substitute_linear(f: MultiForm, M, check_invertible=True) -> MultiForm:
    """Return f(Mx): variable x_i is replaced by sum_j M[i][j] x_j."""
    _require_unweighted(f, "substitute_linear")
    F = f.field
    M = _as_ints(M)
    n = f.nvars
    if len(M) != n or any(len(r) != n for r in M):
        raise FormError(f"substitution matrix must be {n}x{n}")
    if check_invertible and linalg.rank(M, F) < n:
        raise FormError("substitution matrix is singular")
    out = pullback_linear(f, M, names=f.names)
    return MultiForm(F, f.weights, out.terms, f.wdeg, f.names)


def pullback_linear(f: MultiForm, B, names=None) -> MultiForm:
    """f(By) for an (n x r) matrix B: a form in r new variables (B need not be square)."""
    _require_unweighted(f, "pullback_linear")
    F = f.field
    B = _as_ints(B)
    if len(B) != f.nvars:
        raise FormError(f"pullback matrix needs {f.nvars} rows")
    r = len(B[0])
    unit = [0] * r
    lin = []
    for i in range(f.nvars):
        d = {}
        for j in range(r):
            if B[i][j]:
                e = list(unit)
                e[j] = 1
                d[tuple(e)] = B[i][j]
        lin.append(d)
    cache = {}

    def lpow(i, a):
        if (i, a) not in cache:
            cache[(i, a)] = {tuple(unit): 1} if a == 0 else _dict_mul(lpow(i, a - 1), lin[i], F)
        return cache[(i, a)]

    out = {}
    for e, c in f.terms:
        term = {tuple(unit): c}
        for i, a in enumerate(e):
            if a:
                term = _dict_mul(term, lpow(i, a), F)
        for k, v in term.items():
            out[k] = F.add(out.get(k, 0), v)
    return MultiForm.from_dict(F, (1,) * r, out, wdeg=f.wdeg if out else None, names=names, check=False) \
        if out else MultiForm.zero(F, (1,) * r, f.wdeg, names)


def _dict_mul(a, b, F):
    out = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            out[e] = F.add(out.get(e, 0), F.mul(ca, cb))
    return {e: c for e, c in out.items() if c}


def restrict_to_line(f: MultiForm, P, Q) -> MultiForm:
    """The binary form f(sP + tQ) in variables (s, t)."""
    _require_unweighted(f, "restrict_to_line")
    F = f.field
    P = _coerce_point(f, P)
    Q = _coerce_point(f, Q)
    if linalg.rank([P, Q], F) < 2:
        raise FormError("restrict_to_line: points are projectively dependent")
    polys = [UniPoly(F, [a, b]) for a, b in zip(P, Q)]
    g = compose_with_sections(f, polys, 1)
    d = f.wdeg if f.wdeg is not None else 0
    mapping = {(d - j, j): g.coeff(j) for j in range(d + 1)}
    return MultiForm.from_dict(F, (1, 1), mapping, wdeg=d, names=("s", "t"))


def compose_with_sections(f: MultiForm, x, e: int) -> UniPoly:
    """F(x(t)) for coordinate polynomials x_i of degree <= w_i * e."""
    F = f.field
    x = list(getattr(x, "polys", x))
    if len(x) != f.nvars:
        raise FormError(f"{len(x)} section coordinates for {f.nvars} variables")
    for i, (xi, w) in enumerate(zip(x, f.weights)):
        if xi.field != F:
            raise FormError("section and form live over different fields")
        if xi.degree > w * e:
            raise FormError(f"coordinate {i} has degree {xi.degree} > cap {w * e}")
    one = UniPoly(F, [1])
    cache = {}

    def xpow(i, a):
        if (i, a) not in cache:
            cache[(i, a)] = one if a == 0 else xpow(i, a - 1) * x[i]
        return cache[(i, a)]

    acc = UniPoly(F)
    for ex, c in f.terms:
        term = UniPoly(F, [c])
        for i, a in enumerate(ex):
            if a:
                term = term * xpow(i, a)
                if term.is_zero():
                    break
        acc = acc + term
    return acc


def coefficient_names(names, weights, e):
    """Names of the coefficient variables: ``<var>_<j>`` for j = 0..w*e."""
    return tuple(f"{n}_{j}" for n, w in zip(names, weights) for j in range(w * e + 1))


def fij_system(spec, e: int) -> list:
    """The coefficient forms f_ij with F_i(x(t)) = sum_j f_ij t^j.

    Variables are the coefficients of the section coordinates, coordinate-major.
    Each f_ij is weighted-homogeneous of degree wdeg(F_i) when the coefficients
    of x_c carry the weight w_c.  Exactly sum_i (wdeg(F_i) * e + 1) forms are
    returned, in order of (i, j); identically vanishing ones are kept as zero
    forms so that indices line up with the t-expansion.
    """
    if e < 1:
        raise ValueError("fij_system needs e >= 1")
    F = spec.field
    weights = tuple(spec.weights)
    names = coefficient_names(spec.names, weights, e)
    nco = len(names)
    cweights = tuple(w for w in weights for _ in range(w * e + 1))
    # x_c(t) as {(coeff_exp, tdeg): c}
    sections = []
    offset = 0
    for w in weights:
        poly = {}
        for j in range(w * e + 1):
            ex = [0] * nco
            ex[offset + j] = 1
            poly[(tuple(ex), j)] = 1
        sections.append(poly)
        offset += w * e + 1
    unit = ((0,) * nco, 0)

    def mul(a, b):
        out = {}
        for (ea, ta), ca in a.items():
            for (eb, tb), cb in b.items():
                key = (tuple(x + y for x, y in zip(ea, eb)), ta + tb)
                out[key] = F.add(out.get(key, 0), F.mul(ca, cb))
        return {k: v for k, v in out.items() if v}

    out = []
    for form in spec.forms:
        cache = {}

        def spow(c, a):
            if (c, a) not in cache:
                cache[(c, a)] = {unit: 1} if a == 0 else mul(spow(c, a - 1), sections[c])
            return cache[(c, a)]

        total = {}
        for ex, coeff in form.terms:
            term = {unit: coeff}
            for c, a in enumerate(ex):
                if a:
                    term = mul(term, spow(c, a))
            for k, v in term.items():
                total[k] = F.add(total.get(k, 0), v)
        d = form.wdeg
        by_j = [dict() for _ in range(d * e + 1)]
        for (ex, tdeg), c in total.items():
            if c:
                by_j[tdeg][ex] = c
        for j in range(d * e + 1):
            out.append(MultiForm.from_dict(F, cweights, by_j[j], wdeg=d, names=names))
    return out
