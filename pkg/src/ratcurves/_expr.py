"""Tiny recursive-descent parser for polynomial expressions with rational coefficients.

Grammar (whitespace insensitive)::

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := unary ('^' INT)?
    unary  := '-' unary | '+' unary | atom
    atom   := INT | NAME | '(' expr ')'

The result is a dict mapping exponent tuples (one slot per declared name) to
nonzero ``Fraction`` coefficients.  Reduction into a finite field happens in the
callers.
"""

import re
from fractions import Fraction

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*/^()]))")


class ExprError(ValueError):
    pass


def _tokenize(text):
    pos = 0
    out = []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ExprError(f"unexpected character {text[pos]!r} at offset {pos}")
        num, name, op = m.groups()
        if num is not None:
            out.append(("int", int(num)))
        elif name is not None:
            out.append(("name", name))
        else:
            out.append(("op", "^" if op == "**" else op))
        pos = m.end()
    return out


def _padd(a, b, sign=1):
    out = dict(a)
    for k, v in b.items():
        c = out.get(k, 0) + sign * v
        if c:
            out[k] = c
        else:
            out.pop(k, None)
    return out


def _pmul(a, b):
    out = {}
    for ka, va in a.items():
        for kb, vb in b.items():
            k = tuple(x + y for x, y in zip(ka, kb))
            c = out.get(k, 0) + va * vb
            if c:
                out[k] = c
            else:
                out.pop(k, None)
    return out


class _Parser:
    def __init__(self, tokens, names):
        self.toks = tokens
        self.i = 0
        self.names = {n: j for j, n in enumerate(names)}
        self.nvars = len(names)

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def const(self, c):
        c = Fraction(c)
        return {(0,) * self.nvars: c} if c else {}

    def expr(self):
        acc = self.term()
        while self.peek() in (("op", "+"), ("op", "-")):
            sign = 1 if self.take()[1] == "+" else -1
            acc = _padd(acc, self.term(), sign)
        return acc

    def term(self):
        acc = self.factor()
        while self.peek() in (("op", "*"), ("op", "/")):
            op = self.take()[1]
            rhs = self.factor()
            if op == "*":
                acc = _pmul(acc, rhs)
            else:
                if any(any(k) for k in rhs) or not rhs:
                    raise ExprError("division only by nonzero integer constants")
                (c,) = rhs.values()
                acc = {k: v / c for k, v in acc.items()}
        return acc

    def factor(self):
        base = self.unary()
        if self.peek() == ("op", "^"):
            self.take()
            kind, val = self.take()
            if kind != "int":
                raise ExprError("exponent must be a nonnegative integer literal")
            out = self.const(1)
            for _ in range(val):
                out = _pmul(out, base)
            return out
        return base

    def unary(self):
        if self.peek() == ("op", "-"):
            self.take()
            return {k: -v for k, v in self.unary().items()}
        if self.peek() == ("op", "+"):
            self.take()
            return self.unary()
        return self.atom()

    def atom(self):
        kind, val = self.take()
        if kind == "int":
            return self.const(val)
        if kind == "name":
            if val not in self.names:
                raise ExprError(f"unknown variable {val!r}")
            exp = [0] * self.nvars
            exp[self.names[val]] = 1
            return {tuple(exp): Fraction(1)}
        if (kind, val) == ("op", "("):
            inner = self.expr()
            if self.take() != ("op", ")"):
                raise ExprError("unbalanced parentheses")
            return inner
        raise ExprError(f"unexpected token {val!r}")


def parse_poly(text, names):
    """Parse ``text`` into ``{exponent_tuple: Fraction}`` over the variables ``names``."""
    tokens = _tokenize(text)
    if not tokens:
        raise ExprError("empty expression")
    parser = _Parser(tokens, names)
    out = parser.expr()
    if parser.i != len(tokens):
        raise ExprError(f"trailing input after token {parser.i}")
    return out
