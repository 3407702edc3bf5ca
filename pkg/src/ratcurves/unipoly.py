"""Univariate polynomials over a finite field: gcd, resultant, exhaustive roots."""

from __future__ import annotations

from dataclasses import dataclass

from .field import FieldError, FieldSpec, FqElem

NEG_INF = float("-inf")


def _trim(coeffs):
    coeffs = list(coeffs)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


@dataclass(frozen=True)
class UniPoly:
    """Polynomial in t; ``coeffs`` are field encodings, lowest degree first, trimmed."""

    field: FieldSpec
    coeffs: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _trim(int(c) for c in self.coeffs))

    @classmethod
    def from_elems(cls, field, elems):
        return cls(field, [e.value if isinstance(e, FqElem) else field.from_int(e) for e in elems])

    @classmethod
    def monomial(cls, field, deg, c=1):
        return cls(field, [0] * deg + [c])

    @property
    def degree(self):
        """Degree, or ``-inf`` for the zero polynomial."""
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lead(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def coeff(self, j: int) -> int:
        return self.coeffs[j] if 0 <= j < len(self.coeffs) else 0

    def _check(self, other):
        if not isinstance(other, UniPoly):
            raise TypeError("expected UniPoly")
        if other.field != self.field:
            raise FieldError("polynomials over different fields")

    def __add__(self, other):
        self._check(other)
        F = self.field
        n = max(len(self.coeffs), len(other.coeffs))
        return UniPoly(F, [F.add(self.coeff(i), other.coeff(i)) for i in range(n)])

    def __sub__(self, other):
        self._check(other)
        F = self.field
        n = max(len(self.coeffs), len(other.coeffs))
        return UniPoly(F, [F.sub(self.coeff(i), other.coeff(i)) for i in range(n)])

    def __neg__(self):
        return UniPoly(self.field, [self.field.neg(c) for c in self.coeffs])

    def __mul__(self, other):
        F = self.field
        if isinstance(other, int):
            return UniPoly(F, [F.mul(c, other) for c in self.coeffs])
        self._check(other)
        if not self.coeffs or not other.coeffs:
            return UniPoly(F)
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    if b:
                        out[i + j] = F.add(out[i + j], F.mul(a, b))
        return UniPoly(F, out)

    def __pow__(self, n):
        out = UniPoly(self.field, [1])
        for _ in range(n):
            out = out * self
        return out

    def __divmod__(self, other):
        self._check(other)
        F = self.field
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        rem = list(self.coeffs)
        db = len(other.coeffs) - 1
        inv = F.inv(other.lead)
        quo = [0] * max(len(rem) - db, 0)
        while len(rem) - 1 >= db and rem:
            c = F.mul(rem[-1], inv)
            shift = len(rem) - 1 - db
            quo[shift] = c
            for i, b in enumerate(other.coeffs):
                rem[shift + i] = F.sub(rem[shift + i], F.mul(c, b))
            rem = list(_trim(rem))
        return UniPoly(F, quo), UniPoly(F, rem)

    def __mod__(self, other):
        return divmod(self, other)[1]

    def monic(self):
        if self.is_zero():
            return self
        return self * self.field.inv(self.lead)

    def __call__(self, x: int) -> int:
        F = self.field
        acc = 0
        for c in reversed(self.coeffs):
            acc = F.add(F.mul(acc, x), c)
        return acc

    def embed(self, target: FieldSpec) -> "UniPoly":
        emb = self.field.embed_map(target)
        return UniPoly(target, [int(emb[c]) for c in self.coeffs])

    def __repr__(self):
        if not self.coeffs:
            return "0"
        F = self.field
        parts = []
        for j in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[j]
            if not c:
                continue
            lit = F.render(c)
            if F.k > 1 and "+" in lit:
                lit = f"({lit})"
            mono = "" if j == 0 else ("t" if j == 1 else f"t^{j}")
            if not mono:
                parts.append(lit)
            elif c == 1:
                parts.append(mono)
            else:
                parts.append(f"{lit}*{mono}")
        return " + ".join(parts)


def gcd(a: UniPoly, b: UniPoly) -> UniPoly:
    """Monic gcd; raises when both inputs are zero."""
    if a.is_zero() and b.is_zero():
        raise ValueError("gcd(0, 0) is undefined")
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def gcd_many(polys) -> UniPoly:
    polys = [f for f in polys if not f.is_zero()]
    if not polys:
        raise ValueError("gcd of zero polynomials is undefined")
    g = polys[0].monic()
    for f in polys[1:]:
        if g.degree == 0:
            break
        g = gcd(g, f)
    return g


def resultant(a: UniPoly, b: UniPoly) -> int:
    """Resultant via the Euclidean remainder sequence.

    Uses res(a, b) = (-1)^{deg a deg b} lc(b)^{deg a - deg r} res(b, r) with
    r = a mod b, and res(a, c) = c^{deg a} for a constant c.
    """
    F = a.field
    if a.is_zero() or b.is_zero():
        return 0
    acc = 1
    while True:
        da, db = a.degree, b.degree
        if db == 0:
            return F.mul(acc, F.pow(b.lead, da))
        if da == 0:
            return F.mul(acc, F.pow(a.lead, db))
        r = a % b
        if r.is_zero():
            return 0
        dr = r.degree
        if (da * db) % 2:
            acc = F.neg(acc)
        acc = F.mul(acc, F.pow(b.lead, da - dr))
        a, b = b, r


def roots(f: UniPoly, target: FieldSpec | None = None) -> list[int]:
    """All roots of ``f`` in ``target`` (default: its own field), by exhaustive search."""
    if f.is_zero():
        raise ValueError("the zero polynomial vanishes everywhere")
    if target is not None and target != f.field:
        f = f.embed(target)
    return [x for x in range(f.field.q) if f(x) == 0]


def uni_toolkit(a: UniPoly, b: UniPoly, target: FieldSpec | None = None) -> dict:
    """gcd, resultant, roots of both inputs and zero flags in one call."""
    return {
        "gcd": gcd(a, b),
        "resultant": resultant(a, b),
        "roots": (
            roots(a, target) if not a.is_zero() else None,
            roots(b, target) if not b.is_zero() else None,
        ),
        "is_identically_zero": (a.is_zero(), b.is_zero()),
    }
