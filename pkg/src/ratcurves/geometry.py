"""Lines on X, normal forms at points, Eckardt points and line types.

Everything here works in ordinary projective space P^N (all weights 1).
Points are tuples of field encodings; lines are stored by the reduced
row-echelon form of a 2 x (N+1) basis, which makes equal lines compare equal.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .forms import MultiForm, evaluate, evaluate_many, pullback_linear, restrict_to_line
from .parallel import parallel_map
from .points import all_vectors, forms_vanish, unweighted_points
from .variety import VarietySpec, projective_points

LINE_BUDGET = 1 << 28


class GeometryError(ValueError):
    pass


class PreconditionError(GeometryError):
    """Raised when a property harness does not apply to the given input."""


@dataclass(frozen=True, order=True)
class LineRep:
    basis: tuple
    m: int = 1

    def rows(self):
        return [list(r) for r in self.basis]

    def as_dict(self):
        return {"m": self.m, "basis": [list(r) for r in self.basis]}


def _require_ordinary(spec: VarietySpec, op: str):
    if spec.weighted:
        raise GeometryError(f"geometry.{op}: needs an ordinary projective ambient (all weights 1)")


def line_from_points(P, Q, F, m=1) -> LineRep:
    red, piv = linalg.rref([list(P), list(Q)], F)
    if len(piv) < 2:
        raise GeometryError("geometry.line: points are projectively dependent")
    return LineRep(tuple(tuple(r) for r in red), m)


def line_in_forms(forms, P: np.ndarray, Dv: np.ndarray) -> np.ndarray:
    """Mask of rows where every form vanishes identically on s*P + t*Dv.

    Composition is done along the parameter t with P fixed at s = 1 and the
    point Dv checked separately (s = 0), so the test is exact over any field.
    """
    if P.shape[0] == 0:
        return np.zeros(0, dtype=bool)
    F = forms[0].field
    mask = forms_vanish(forms, Dv)
    for f in forms:
        sub = np.nonzero(mask)[0]
        if not len(sub):
            break
        p, dv = P[sub], Dv[sub]
        cnt = len(sub)
        total = [np.zeros(cnt, dtype=np.int64) for _ in range(f.wdeg + 1)]
        cache = {}
        for ex, c in f.terms:
            poly = [np.full(cnt, c, dtype=np.int64)]
            for i, a in enumerate(ex):
                if not a:
                    continue
                key = (i, a)
                if key not in cache:
                    base = [p[:, i], dv[:, i]]
                    acc = [np.ones(cnt, dtype=np.int64)]
                    for _ in range(a):
                        acc = _vpolymul(F, acc, base)
                    cache[key] = acc
                poly = _vpolymul(F, poly, cache[key])
            for j, v in enumerate(poly):
                total[j] = F.vadd(total[j], v)
        ok = np.ones(cnt, dtype=bool)
        for v in total:
            ok &= v == 0
        mask[sub[~ok]] = False
    return mask


def _vpolymul(F, a, b):
    out = [None] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            v = F.vmul(x, y)
            out[i + j] = v if out[i + j] is None else F.vadd(out[i + j], v)
    return out


def _cells(n):
    return [(i, j) for i in range(n) for j in range(i + 1, n)]


def _cell_rows(F, n, i, j):
    Q = F.q
    free1 = [c for c in range(i + 1, n) if c != j]
    v = all_vectors(Q, len(free1))
    r1 = np.zeros((v.shape[0], n), dtype=np.int64)
    r1[:, i] = 1
    r1[:, free1] = v
    free2 = list(range(j + 1, n))
    v = all_vectors(Q, len(free2))
    r2 = np.zeros((v.shape[0], n), dtype=np.int64)
    r2[:, j] = 1
    r2[:, free2] = v
    return r1, r2


def _scan_cell(args):
    forms, n, i, j, m = args
    F = forms[0].field
    r1, r2 = _cell_rows(F, n, i, j)
    r1 = r1[forms_vanish(forms, r1)]
    r2 = r2[forms_vanish(forms, r2)]
    out = []
    step = max(1, (1 << 16) // max(r2.shape[0], 1))
    for lo in range(0, r1.shape[0], step):
        a = r1[lo:lo + step]
        P = np.repeat(a, r2.shape[0], axis=0)
        Dv = np.tile(r2, (a.shape[0], 1))
        ok = line_in_forms(forms, P, Dv)
        for p, d in zip(P[ok], Dv[ok]):
            out.append(LineRep((tuple(int(x) for x in p), tuple(int(x) for x in d)), m))
    return out


def gaussian_binomial_2(Q, n):
    return (Q ** n - 1) * (Q ** (n - 1) - 1) // ((Q ** 2 - 1) * (Q - 1))


def enumerate_lines(spec: VarietySpec, m: int = 1, threads: int = 1, budget: int = LINE_BUDGET) -> list:
    """All F_{q^m}-lines contained in X, sorted by RREF basis."""
    _require_ordinary(spec, "enumerate_lines")
    S = spec.base_change(m)
    n = S.N + 1
    Q = S.field.q
    if n > 6:
        raise GeometryError("geometry.enumerate_lines: supports N <= 5")
    rows = sum(Q ** (n - 1 - i - 1) + Q ** (n - 1 - j) for i, j in _cells(n))
    if rows > budget:
        raise GeometryError(f"geometry.budget: {rows} candidate rows exceed the budget {budget}")
    jobs = [(S.forms, n, i, j, m) for i, j in _cells(n)]
    out = []
    for part in parallel_map(_scan_cell, jobs, threads):
        out.extend(part)
    return sorted(out)


def line_annihilator(L: LineRep, F) -> list:
    """Linear forms cutting out L (a basis of the annihilator of its span)."""
    n = len(L.basis[0])
    return [MultiForm.linear(F, v) for v in linalg.nullspace(L.rows(), n, F)]


def line_contains_point(L: LineRep, x, F) -> bool:
    return linalg.rank(L.rows() + [list(x)], F) == 2


def line_points(L: LineRep, F) -> list:
    """The q + 1 normalized points of L."""
    P, Q = L.basis
    pts = [tuple(Q)]
    for t in range(F.q):
        pts.append(tuple(F.add(a, F.mul(t, b)) for a, b in zip(P, Q)))
    return [normalize_point(p, F) for p in pts]


def normalize_point(x, F):
    x = [int(v) for v in x]
    lead = next((v for v in x if v), None)
    if lead is None:
        raise GeometryError("geometry.point: the zero vector is not a point")
    inv = F.inv(lead)
    return tuple(F.mul(v, inv) for v in x)


# --- normal forms ---------------------------------------------------------------

@dataclass(frozen=True)
class PointNormalForm:
    x: tuple
    M: tuple
    Minv: tuple
    normal: tuple
    q: MultiForm | None = None
    c: MultiForm | None = None
    q1: MultiForm | None = None
    q2: MultiForm | None = None

    @property
    def kind(self):
        return "cubic" if self.q is not None else "quadric-pair"

    def digest(self) -> dict:
        from .forms import render_form

        names = tuple(f"y{i}" for i in range(len(self.x)))
        if self.kind == "cubic":
            return {"q": render_form(self.q, names), "c": render_form(self.c, names)}
        return {"q1": render_form(self.q1, names), "q2": render_form(self.q2, names)}


def _gradient(f, x):
    from .forms import partial_derivative

    return [evaluate(partial_derivative(f, i), x) for i in range(f.nvars)]


def _split_y0(f: MultiForm, power: int) -> MultiForm:
    """Part of f whose y0-exponent equals ``power`` with y0 removed (exponent set to 0)."""
    out = {}
    for ex, c in f.terms:
        if ex[0] == power:
            out[(0,) + tuple(ex[1:])] = c
    wdeg = None if f.wdeg is None else f.wdeg - power
    return MultiForm.from_dict(f.field, f.weights, out, wdeg=wdeg, check=False) if out \
        else MultiForm.zero(f.field, f.weights, wdeg)


def normalize_at_point(spec: VarietySpec, x) -> PointNormalForm:
    """Coordinates y with x = (1:0:...:0) and the forms in normal shape.

    The basis is [x, u_1..u_R, h_1..]: g_i . u_j = delta_ij for the gradients
    g_i at x, and the h's complete x to a basis of the common kernel of the g_i,
    taken greedily from the kernel basis with left-most pivots.
    """
    _require_ordinary(spec, "normalize_at_point")
    F = spec.field
    degs = spec.degrees
    if not (degs == (3,) or degs == (2, 2)):
        raise GeometryError(f"geometry.normalize_at_point: needs one cubic or two quadrics, got degrees {degs}")
    x = tuple(int(v) for v in x)
    if len(x) != spec.N + 1 or not any(x):
        raise GeometryError("geometry.normalize_at_point: bad point")
    if any(evaluate(f, x) for f in spec.forms):
        raise GeometryError(f"geometry.normalize_at_point: {x} is not on X")
    G = [_gradient(f, x) for f in spec.forms]
    if linalg.rank(G, F) < spec.R:
        raise GeometryError(f"geometry.normalize_at_point: X is singular at {x}")
    n = spec.N + 1
    us = []
    for i in range(spec.R):
        rhs = [1 if j == i else 0 for j in range(spec.R)]
        us.append(linalg.solve(G, rhs, F))
    kernel = linalg.nullspace(G, n, F)
    hs = []
    span = [list(x)]
    for v in kernel:
        if linalg.rank(span + [v], F) > len(span):
            span.append(v)
            hs.append(v)
    cols = [list(x)] + us + hs
    A = linalg.transpose(cols)
    M = linalg.inverse(A, F)
    names = tuple(f"y{i}" for i in range(n))
    normal = tuple(pullback_linear(f, A, names=names) for f in spec.forms)
    Mt = tuple(tuple(r) for r in M)
    At = tuple(tuple(r) for r in A)
    if degs == (3,):
        G3 = normal[0]
        return PointNormalForm(x, Mt, At, normal, q=_split_y0(G3, 1), c=_split_y0(G3, 0))
    return PointNormalForm(x, Mt, At, normal, q1=_split_y0(normal[0], 0), q2=_split_y0(normal[1], 0))


def _set_var_zero(f: MultiForm, i: int) -> MultiForm:
    out = {ex: c for ex, c in f.terms if ex[i] == 0}
    return MultiForm.from_dict(f.field, f.weights, out, wdeg=f.wdeg, check=False) if out \
        else MultiForm.zero(f.field, f.weights, f.wdeg)


def eckardt_test(spec: VarietySpec, x) -> bool:
    """x is Eckardt iff q(0, y_2, ..., y_N) vanishes identically in the normal form."""
    nf = normalize_at_point(spec, x)
    if nf.kind != "cubic":
        raise GeometryError("geometry.eckardt_test: needs a cubic hypersurface")
    return _set_var_zero(nf.q, 1).is_zero()


def eckardt_cone_oracle(spec: VarietySpec, x, m: int = 1) -> bool:
    """Brute force: every F_{q^m}-point y of X in T_x X spans a line xy inside X."""
    S = spec.base_change(m)
    F = S.field
    if m > 1:
        emb = spec.field.embed_map(F)
        x = tuple(int(emb[v]) for v in x)
    g = np.array(_gradient(S.forms[0], x), dtype=np.int64)
    pts = projective_points(S)
    tang = np.zeros(pts.shape[0], dtype=np.int64)
    for i in range(len(g)):
        tang = F.vadd(tang, F.vmul(pts[:, i], np.full(pts.shape[0], g[i], dtype=np.int64)))
    pts = pts[tang == 0]
    xv = np.array(x, dtype=np.int64)
    pts = pts[~np.all(pts == np.array(normalize_point(x, F))[None, :], axis=1)]
    P = np.repeat(xv[None, :], pts.shape[0], axis=0)
    return bool(line_in_forms(list(S.forms), P, pts).all())


def _eckardt_chunk(args):
    spec, pts = args
    return [p for p in pts if eckardt_test(spec, p)]


def eckardt_scan(spec: VarietySpec, m: int = 1, threads: int = 1, budget: int = 1 << 22) -> list:
    """All Eckardt points over F_{q^m} (normalized, sorted)."""
    _require_ordinary(spec, "eckardt_scan")
    if spec.degrees != (3,):
        raise GeometryError("geometry.eckardt_scan: needs a cubic hypersurface")
    S = spec.base_change(m)
    pts = [tuple(int(v) for v in p) for p in projective_points(S)]
    if len(pts) > budget:
        raise GeometryError(f"geometry.budget: {len(pts)} points exceed the budget {budget}")
    nparts = max(1, 4 * threads)
    per = -(-len(pts) // nparts) if pts else 1
    chunks = [(S, pts[i:i + per]) for i in range(0, len(pts), per)]
    out = []
    for part in parallel_map(_eckardt_chunk, chunks, threads):
        out.extend(part)
    return sorted(out)


@dataclass(frozen=True)
class FibreResult:
    x: tuple
    m: int
    directions: tuple
    lines: tuple

    def __len__(self):
        return len(self.lines)


def lines_through_point(spec: VarietySpec, x, m: int = 1) -> FibreResult:
    """Lines through x over F_{q^m}, read off from the normal form and certified."""
    S = spec.base_change(m)
    F = S.field
    if m > 1:
        emb = spec.field.embed_map(F)
        x = tuple(int(emb[v]) for v in x)
    nf = normalize_at_point(S, x)
    n = S.N + 1
    fixed = 1 if nf.kind == "cubic" else 2
    # directions a = (0, a_1, ..., a_N) with a_1 (= a_2) = 0
    free = n - 1 - fixed
    if free < 1:
        return FibreResult(tuple(x), m, (), ())
    sub = unweighted_points(F, free)
    dirs = np.zeros((sub.shape[0], n), dtype=np.int64)
    dirs[:, 1 + fixed:] = sub
    conds = [nf.q, nf.c] if nf.kind == "cubic" else [nf.q1, nf.q2]
    mask = forms_vanish([f for f in conds if not f.is_zero()], dirs)
    A = [list(r) for r in nf.Minv]
    found_dirs, lines = [], []
    for a in dirs[mask]:
        a = [int(v) for v in a]
        y = linalg.matvec(A, a, F)
        for f in S.forms:
            if not restrict_to_line(f, x, y).is_zero():
                raise GeometryError(f"geometry.lines_through_point: direction {a} failed certification")
        found_dirs.append(tuple(a))
        lines.append(line_from_points(x, y, F, m))
    return FibreResult(tuple(x), m, tuple(found_dirs), tuple(lines))


@dataclass(frozen=True)
class LineClass:
    rank: int
    kind: str
    matrix: tuple


def classify_line(spec: VarietySpec, L: LineRep) -> LineClass:
    """Type I (rank 3) or type II (rank 2) from the restricted partials.

    With L moved to {y_2 = ... = y_N = 0}, row i (i >= 2) holds the
    coefficients of dG/dy_i on L in the basis y0^2, y0*y1, y1^2.  The kernel
    of this (N-1) x 3 matrix measures h^0(N_{L/X}(-1)), so rank 3 means the
    normal bundle is O^2 + O(1)^(N-4) and rank 2 means O(-1) + O(1)^(N-3).
    """
    _require_ordinary(spec, "classify_line")
    if spec.degrees != (3,):
        raise GeometryError("geometry.classify_line: needs a cubic hypersurface")
    S = spec.base_change(L.m)
    F = S.field
    P, Q = L.basis
    for f in S.forms:
        if not restrict_to_line(f, P, Q).is_zero():
            raise GeometryError("geometry.classify_line: L is not contained in X")
    n = S.N + 1
    A = linalg.transpose(linalg.complete_basis([list(P), list(Q)], n, F))
    G = pullback_linear(S.forms[0], A)
    from .forms import partial_derivative

    rows = []
    for i in range(2, n):
        d = partial_derivative(G, i)
        row = [0, 0, 0]
        for ex, c in d.terms:
            if all(v == 0 for v in ex[2:]):
                row[ex[1]] = c  # exponent of y1 picks the column y0^2, y0*y1, y1^2
        rows.append(row)
    r = linalg.rank(rows, F)
    kind = "TypeI" if r == 3 else "TypeII" if r == 2 else "anomaly"
    return LineClass(r, kind, tuple(tuple(x) for x in rows))


def eckardt_on_hyperplane_check(spec: VarietySpec, x, H) -> bool:
    """Eckardt test of X cap H at x, for an Eckardt point x of X lying on H."""
    _require_ordinary(spec, "eckardt_on_hyperplane_check")
    F = spec.field
    n = spec.N + 1
    if spec.N < 4:
        raise PreconditionError("geometry.hyperplane: needs N >= 4")
    H = [int(v) for v in H]
    x = tuple(int(v) for v in x)
    if _dot(H, x, F):
        raise GeometryError("geometry.hyperplane: x does not lie on H")
    if not eckardt_test(spec, x):
        raise PreconditionError("geometry.hyperplane: x is not an Eckardt point of X")
    ker = linalg.nullspace([H], n, F)
    basis = [list(x)]
    for v in ker:
        if linalg.rank(basis + [v], F) > len(basis):
            basis.append(v)
    B = linalg.transpose(basis)
    cubic = pullback_linear(spec.forms[0], B)
    sect = VarietySpec(F, (1,) * (n - 1), (cubic,), spec.label + "|H")
    e0 = tuple([1] + [0] * (n - 2))
    g = _gradient(cubic, e0)
    if not any(g):
        raise PreconditionError("geometry.hyperplane: X cap H is singular at x (H tangent at x)")
    return eckardt_test(sect, e0)


def _dot(a, b, F):
    acc = 0
    for u, v in zip(a, b):
        acc = F.add(acc, F.mul(u, v))
    return acc
