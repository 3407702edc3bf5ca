"""Finite fields F_{p^k} with integer-encoded elements.

An element with coefficient vector ``(c_0, ..., c_{k-1})`` (``c_i`` the coefficient
of ``g^i``, ``g`` a root of the modulus) is encoded as the integer
``sum(c_i * p**i)``.  Enumeration order is the order of these integers, which is
lexicographic on the coefficient vector read from the top coefficient down.

All hot paths work on the integer encodings, either one at a time (``add``,
``mul``, ...) or on numpy arrays (``vadd``, ``vmul``, ...).  ``FqElem`` is the
thin public wrapper used at API boundaries.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from itertools import product

import numpy as np

from ._expr import ExprError, parse_poly

MAX_Q = 1 << 20
MAX_P = 1 << 16
# full q x q addition table is built for extension fields up to this size
_ADD_TABLE_MAX = 1024


class FieldError(ValueError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_factors(n: int) -> list[int]:
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


# --- polynomials over F_p as coefficient lists, low degree first -------------

def _trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def _fp_divmod(a, b, p):
    a = _trim(a)
    b = _trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    inv = pow(b[-1], p - 2, p)
    quo = [0] * max(len(a) - len(b) + 1, 0)
    while len(a) >= len(b):
        c = a[-1] * inv % p
        shift = len(a) - len(b)
        quo[shift] = c
        for i, bi in enumerate(b):
            a[shift + i] = (a[shift + i] - c * bi) % p
        a = _trim(a)
    return quo, a


def is_irreducible(modulus, p: int) -> bool:
    """Trial division of ``modulus`` by every monic polynomial of degree <= k/2."""
    k = len(modulus) - 1
    if k <= 0:
        return False
    if k == 1:
        return True
    for deg in range(1, k // 2 + 1):
        for low in product(range(p), repeat=deg):
            cand = list(low) + [1]
            if not _fp_divmod(modulus, cand, p)[1]:
                return False
    return True


def _candidate_moduli(p, k):
    # monic degree-k polynomials in increasing lexicographic order (top coefficient first)
    for n in range(p ** k):
        low = []
        for _ in range(k):
            low.append(n % p)
            n //= p
        yield tuple(low) + (1,)


@dataclass(frozen=True)
class FieldSpec:
    """The finite field F_q, q = p**k, presented as F_p[g]/(modulus)."""

    p: int
    k: int = 1
    modulus: tuple = ()
    max_q: int = dc_field(default=MAX_Q, compare=False, repr=False)
    _cache: dict = dc_field(default_factory=dict, compare=False, repr=False, hash=False)

    def __post_init__(self):
        p, k = self.p, self.k
        if not (2 <= p <= MAX_P) or not is_prime(p):
            raise FieldError(f"field: p={p} is not a prime in [2, {MAX_P}]")
        if k < 1:
            raise FieldError(f"field: extension degree k={k} must be >= 1")
        if p ** k > self.max_q:
            raise FieldError(f"field: q={p}^{k} exceeds the configured cap {self.max_q}")
        mod = tuple(self.modulus)
        if not mod:
            mod = default_modulus(p, k)
        mod = tuple(int(c) % p for c in mod)
        if len(mod) != k + 1 or mod[-1] != 1:
            raise FieldError(f"field: modulus must be monic of degree {k}")
        if k > 1 and not is_irreducible(mod, p):
            raise FieldError(f"field: modulus {render_gpoly(mod)} is reducible over F_{p}")
        object.__setattr__(self, "modulus", mod)

    def __getstate__(self):
        return {"p": self.p, "k": self.k, "modulus": self.modulus, "max_q": self.max_q}

    def __setstate__(self, state):
        for key, val in state.items():
            object.__setattr__(self, key, val)
        object.__setattr__(self, "_cache", {})

    @property
    def q(self) -> int:
        return self.p ** self.k

    @property
    def is_prime_field(self) -> bool:
        return self.k == 1

    def __str__(self):
        return render_field(self)

    # --- encoding ---------------------------------------------------------

    def to_coeffs(self, v: int) -> tuple:
        out = []
        for _ in range(self.k):
            out.append(v % self.p)
            v //= self.p
        return tuple(out)

    def from_coeffs(self, coeffs) -> int:
        v = 0
        for c in reversed(tuple(coeffs)):
            v = v * self.p + int(c) % self.p
        return v

    def from_int(self, n) -> int:
        """Image of the integer (or Fraction) ``n`` under Z -> F_p -> F_q."""
        if isinstance(n, Fraction):
            if n.denominator % self.p == 0:
                raise FieldError(f"coefficient {n} is not reducible into F_{self.p}")
            return n.numerator * pow(n.denominator, -1, self.p) % self.p
        return int(n) % self.p

    def __call__(self, v) -> "FqElem":
        if isinstance(v, FqElem):
            if v.field != self:
                raise FieldError("element belongs to a different field")
            return v
        if isinstance(v, str):
            return FqElem(self, parse_element(v, self))
        return FqElem(self, self.from_int(v))

    @property
    def gen(self) -> int:
        return self.p if self.k > 1 else 0

    # --- raw arithmetic (used before tables exist) -----------------------

    def _raw_mul(self, a: int, b: int) -> int:
        p, k = self.p, self.k
        ca, cb = self.to_coeffs(a), self.to_coeffs(b)
        prod = [0] * (2 * k - 1)
        for i, x in enumerate(ca):
            if x:
                for j, y in enumerate(cb):
                    prod[i + j] = (prod[i + j] + x * y) % p
        _, rem = _fp_divmod(prod, self.modulus, p)
        return self.from_coeffs(rem + [0] * (k - len(rem)))

    def _raw_pow(self, a: int, n: int) -> int:
        result, base = 1, a
        while n:
            if n & 1:
                result = self._raw_mul(result, base)
            base = self._raw_mul(base, base)
            n >>= 1
        return result

    def _tables(self):
        tab = self._cache.get("tables")
        if tab is not None:
            return tab
        q, p, k = self.q, self.p, self.k
        order = q - 1
        factors = prime_factors(order)

        def primitive(a):
            return all(self._raw_pow(a, order // f) != 1 for f in factors)

        gen = self.gen
        exp = [0] * (2 * order)
        if primitive(gen):
            # multiplication by g is a shift followed by one reduction step
            mod = self.modulus
            cur = [1] + [0] * (k - 1)
            for i in range(order):
                exp[i] = self.from_coeffs(cur)
                top = cur[-1]
                cur = [0] + cur[:-1]
                if top:
                    cur = [(c - top * m) % p for c, m in zip(cur, mod)]
        else:
            alpha = next(a for a in range(2, q) if primitive(a))
            cur = 1
            for i in range(order):
                exp[i] = cur
                cur = self._raw_mul(cur, alpha)
        exp[order:] = exp[:order]
        log = [-1] * q
        for i in range(order):
            log[exp[i]] = i
        tab = {
            "exp": exp,
            "log": log,
            "exp_np": np.array(exp, dtype=np.int64),
            "log_np": np.array(log, dtype=np.int64),
        }
        if q <= _ADD_TABLE_MAX:
            digits = np.array([self.to_coeffs(v) for v in range(q)], dtype=np.int64)
            sums = (digits[:, None, :] + digits[None, :, :]) % p
            weights = p ** np.arange(k, dtype=np.int64)
            tab["add_np"] = (sums * weights).sum(axis=2)
            tab["add"] = tab["add_np"].tolist()
        neg = [self.from_coeffs((-c) % p for c in self.to_coeffs(v)) for v in range(q)] \
            if q <= (1 << 16) else None
        tab["neg"] = neg
        self._cache["tables"] = tab
        return tab

    # --- scalar arithmetic on encodings ----------------------------------

    def add(self, a: int, b: int) -> int:
        if self.k == 1:
            return (a + b) % self.p
        if self.p == 2:
            return a ^ b
        tab = self._tables()
        if "add" in tab:
            return tab["add"][a][b]
        return self._digit_add(a, b, 1)

    def _digit_add(self, a, b, sign):
        p = self.p
        r, pw = 0, 1
        for _ in range(self.k):
            r += ((a % p + sign * (b % p)) % p) * pw
            a //= p
            b //= p
            pw *= p
        return r

    def neg(self, a: int) -> int:
        if self.k == 1:
            return (-a) % self.p
        if self.p == 2:
            return a
        neg = self._tables()["neg"]
        if neg is not None:
            return neg[a]
        return self._digit_add(0, a, -1)

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.k == 1:
            return a * b % self.p
        if a == 0 or b == 0:
            return 0
        tab = self._tables()
        return tab["exp"][tab["log"][a] + tab["log"][b]]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero in " + str(self))
        if self.k == 1:
            return pow(a, self.p - 2, self.p)
        tab = self._tables()
        la = tab["log"][a]
        return tab["exp"][(self.q - 1 - la) % (self.q - 1)]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, n: int) -> int:
        if n < 0:
            return self.pow(self.inv(a), -n)
        if n == 0:
            return 1
        if a == 0:
            return 0
        if self.k == 1:
            return pow(a, n, self.p)
        tab = self._tables()
        return tab["exp"][(tab["log"][a] * n) % (self.q - 1)]

    def frobenius(self, a: int) -> int:
        return self.pow(a, self.p)

    def multiplicative_order(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("zero has no multiplicative order")
        order = self.q - 1
        for f in prime_factors(self.q - 1):
            while order % f == 0 and self.pow(a, order // f) == 1:
                order //= f
        return order

    # --- vectorized arithmetic on int64 arrays ---------------------------

    def vadd(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.k == 1:
            return (a + b) % self.p
        if self.p == 2:
            return a ^ b
        tab = self._tables()
        if "add_np" in tab:
            return tab["add_np"][a, b]
        return self._vdigit(a, b, 1)

    def _vdigit(self, a, b, sign):
        p = self.p
        out = np.zeros(np.broadcast(a, b).shape, dtype=np.int64)
        pw = 1
        for _ in range(self.k):
            out += ((a % p + sign * (b % p)) % p) * pw
            a = a // p
            b = b // p
            pw *= p
        return out

    def vneg(self, a):
        a = np.asarray(a, dtype=np.int64)
        if self.k == 1:
            return (-a) % self.p
        if self.p == 2:
            return a.copy()
        return self._vdigit(np.zeros_like(a), a, -1)

    def vsub(self, a, b):
        return self.vadd(a, self.vneg(b))

    def vmul(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.k == 1:
            return a * b % self.p
        tab = self._tables()
        la, lb = tab["log_np"][a], tab["log_np"][b]
        out = tab["exp_np"][np.maximum(la, 0) + np.maximum(lb, 0)]
        return np.where((a == 0) | (b == 0), 0, out)

    def vpow(self, a, n: int):
        a = np.asarray(a, dtype=np.int64)
        if n == 0:
            return np.ones_like(a)
        if self.k == 1:
            out = np.ones_like(a)
            base = a % self.p
            while n:
                if n & 1:
                    out = out * base % self.p
                base = base * base % self.p
                n >>= 1
            return out
        tab = self._tables()
        la = tab["log_np"][a]
        out = tab["exp_np"][(np.maximum(la, 0) * n) % (self.q - 1)]
        return np.where(a == 0, 0, out)

    def vinv(self, a):
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise ZeroDivisionError("inverse of zero")
        if self.k == 1:
            return self.vpow(a, self.p - 2)
        tab = self._tables()
        return tab["exp_np"][(self.q - 1 - tab["log_np"][a]) % (self.q - 1)]

    def flat_tables(self):
        """Dense ``q*q`` add/mul tables plus neg/inv vectors (int32), for the kernels."""
        got = self._cache.get("flat")
        if got is None:
            q = self.q
            el = np.arange(q, dtype=np.int64)
            add = self.vadd(el[:, None], el[None, :]).astype(np.int32).ravel()
            mul = self.vmul(el[:, None], el[None, :]).astype(np.int32).ravel()
            neg = self.vneg(el).astype(np.int32)
            inv = np.zeros(q, dtype=np.int32)
            inv[1:] = self.vinv(el[1:])
            got = (add, mul, neg, inv)
            self._cache["flat"] = got
        return got

    # --- extensions and embeddings ---------------------------------------

    def extension(self, m: int) -> "FieldSpec":
        """F_{q^m}, built with the default modulus of degree k*m over F_p."""
        if m == 1:
            return self
        key = ("ext", m)
        if key not in self._cache:
            self._cache[key] = FieldSpec(self.p, self.k * m, max_q=self.max_q)
        return self._cache[key]

    def embed_map(self, target: "FieldSpec") -> np.ndarray:
        """Array sending every encoding of this field to its image in ``target``."""
        if target == self:
            return np.arange(self.q, dtype=np.int64)
        if target.p != self.p or target.k % self.k:
            raise FieldError(
                f"cannot embed F_{self.p}^{self.k} into F_{target.p}^{target.k}: degrees not divisible"
            )
        key = ("embed", target.p, target.k, target.modulus)
        got = self._cache.get(key)
        if got is not None:
            return got
        # least root of our modulus inside the target field
        el = np.arange(target.q, dtype=np.int64)
        acc = np.zeros_like(el)
        for c in reversed(self.modulus):
            acc = target.vadd(target.vmul(acc, el), np.full_like(el, c))
        roots = np.nonzero(acc == 0)[0]
        if len(roots) == 0:
            raise FieldError("modulus has no root in the target field")
        root = int(roots[0])
        powers = [1]
        for _ in range(self.k - 1):
            powers.append(target.mul(powers[-1], root))
        images = np.zeros(self.q, dtype=np.int64)
        for v in range(self.q):
            img = 0
            for c, pw in zip(self.to_coeffs(v), powers):
                if c:
                    img = target.add(img, target.mul(c, pw))
            images[v] = img
        self._cache[key] = images
        return images

    def render(self, v: int) -> str:
        return render_gpoly(self.to_coeffs(v), keep_zero=True)


def default_modulus(p: int, k: int) -> tuple:
    """Least monic irreducible polynomial of degree k whose root generates F_{p^k}^*.

    Falls back to the least irreducible one (never needed in practice: primitive
    polynomials exist in every degree).
    """
    if k == 1:
        return (0, 1)
    q = p ** k
    factors = prime_factors(q - 1)
    first_irr = None
    for cand in _candidate_moduli(p, k):
        if cand[0] == 0 or not is_irreducible(cand, p):
            continue
        if first_irr is None:
            first_irr = cand
        spec = FieldSpec(p, k, cand)
        g = spec.gen
        if all(spec._raw_pow(g, (q - 1) // f) != 1 for f in factors):
            return cand
    return first_irr


def render_gpoly(coeffs, keep_zero=False) -> str:
    parts = []
    for i in range(len(coeffs) - 1, -1, -1):
        c = coeffs[i]
        if not c:
            continue
        if i == 0:
            parts.append(str(c))
        else:
            mono = "g" if i == 1 else f"g^{i}"
            parts.append(mono if c == 1 else f"{c}*{mono}")
    if not parts:
        return "0"
    return "+".join(parts)


def parse_element(text: str, spec: FieldSpec) -> int:
    """Parse an element literal: an integer, or a polynomial in ``g`` for extensions."""
    try:
        poly = parse_poly(text, ["g"])
    except ExprError as exc:
        raise FieldError(f"bad field element {text!r}: {exc}") from None
    if spec.k == 1 and any(e[0] > 0 for e in poly):
        raise FieldError(f"generator g used in prime field {spec}")
    acc = 0
    for (j,), c in poly.items():
        term = spec.mul(spec.from_int(c), spec.pow(spec.gen, j) if spec.k > 1 else 1)
        acc = spec.add(acc, term)
    return acc


def parse_field(text: str, max_q: int = MAX_Q) -> FieldSpec:
    """Parse ``"p=7"`` or ``"p=2,k=2,mod=g^2+g+1"``."""
    opts = {}
    for chunk in text.split(","):
        if "=" not in chunk:
            raise FieldError(f"bad field literal {text!r}")
        key, val = chunk.split("=", 1)
        opts[key.strip()] = val.strip()
    if "p" not in opts or set(opts) - {"p", "k", "mod"}:
        raise FieldError(f"bad field literal {text!r}: expected keys p[,k[,mod]]")
    try:
        p = int(opts["p"])
        k = int(opts.get("k", 1))
    except ValueError:
        raise FieldError(f"bad field literal {text!r}") from None
    mod = ()
    if "mod" in opts:
        try:
            poly = parse_poly(opts["mod"], ["g"])
        except ExprError as exc:
            raise FieldError(f"bad modulus in {text!r}: {exc}") from None
        deg = max((e[0] for e in poly), default=0)
        if not is_prime(p):
            raise FieldError(f"field: p={p} is not prime")
        coeffs = [0] * (deg + 1)
        for (j,), c in poly.items():
            if c.denominator % p == 0:
                raise FieldError(f"modulus coefficient {c} not reducible mod {p}")
            coeffs[j] = c.numerator * pow(c.denominator, -1, p) % p
        mod = tuple(coeffs)
    return FieldSpec(p, k, mod, max_q=max_q)


def render_field(spec: FieldSpec) -> str:
    if spec.k == 1:
        return f"p={spec.p}"
    return f"p={spec.p},k={spec.k},mod={render_gpoly(spec.modulus)}"


@dataclass(frozen=True)
class FqElem:
    """An element of ``field``; ``value`` is the integer encoding."""

    field: FieldSpec
    value: int

    @property
    def coeffs(self) -> tuple:
        return self.field.to_coeffs(self.value)

    def _other(self, other):
        if isinstance(other, FqElem):
            if other.field != self.field:
                raise FieldError(f"mismatched fields {self.field} and {other.field}")
            return other.value
        if isinstance(other, int):
            return self.field.from_int(other)
        return NotImplemented

    def __add__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else FqElem(self.field, self.field.add(self.value, o))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else FqElem(self.field, self.field.sub(self.value, o))

    def __rsub__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else FqElem(self.field, self.field.sub(o, self.value))

    def __mul__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else FqElem(self.field, self.field.mul(self.value, o))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else FqElem(self.field, self.field.div(self.value, o))

    def __neg__(self):
        return FqElem(self.field, self.field.neg(self.value))

    def __pow__(self, n: int):
        return FqElem(self.field, self.field.pow(self.value, n))

    def inverse(self):
        return FqElem(self.field, self.field.inv(self.value))

    def frobenius(self):
        return FqElem(self.field, self.field.frobenius(self.value))

    def __bool__(self):
        return self.value != 0

    def __repr__(self):
        return f"F{self.field.q}({self.field.render(self.value)})"


def arith(a: FqElem, b: FqElem | int | None, op: str) -> FqElem:
    """Dispatch ``op`` in {add, sub, mul, div, pow, frobenius}; ``b`` is an int exponent for pow."""
    if op == "frobenius":
        return a.frobenius()
    if op == "pow":
        return a ** int(b)
    if not isinstance(b, FqElem):
        raise FieldError(f"arith {op} needs two field elements")
    if a.field != b.field:
        raise FieldError(f"mismatched fields {a.field} and {b.field}")
    try:
        return {"add": a.__add__, "sub": a.__sub__, "mul": a.__mul__, "div": a.__truediv__}[op](b)
    except KeyError:
        raise FieldError(f"unknown operation {op!r}") from None


def enumerate_field(spec: FieldSpec):
    """All q elements in encoding order."""
    for v in range(spec.q):
        yield FqElem(spec, v)


def embed(x: FqElem, target: FieldSpec) -> FqElem:
    return FqElem(target, int(x.field.embed_map(target)[x.value]))
