import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ratcurves.field import FieldError, parse_element, parse_field, render_field
from ratcurves.unipoly import UniPoly, gcd, resultant, roots, uni_toolkit

SMALL = ["p=2", "p=3", "p=5", "p=2,k=2", "p=3,k=2", "p=2,k=3"]


@pytest.mark.parametrize("lit", SMALL)
def test_field_axioms_exhaustive(lit):
    F = parse_field(lit)
    els = range(F.q)
    for a, b in itertools.product(els, els):
        assert F.add(a, b) == F.add(b, a)
        assert F.mul(a, b) == F.mul(b, a)
        assert F.sub(F.add(a, b), b) == a
    for a in els:
        assert F.add(a, F.neg(a)) == 0
        if a:
            assert F.mul(a, F.inv(a)) == 1
            assert F.pow(a, F.q - 1) == 1
    for a, b, c in itertools.product(els, repeat=3):
        assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))


@pytest.mark.parametrize("lit", SMALL)
def test_vector_ops_match_scalar(lit):
    F = parse_field(lit)
    a, b = np.meshgrid(np.arange(F.q), np.arange(F.q))
    a, b = a.ravel(), b.ravel()
    assert list(F.vadd(a, b)) == [F.add(int(x), int(y)) for x, y in zip(a, b)]
    assert list(F.vmul(a, b)) == [F.mul(int(x), int(y)) for x, y in zip(a, b)]
    assert list(F.vsub(a, b)) == [F.sub(int(x), int(y)) for x, y in zip(a, b)]
    nz = np.arange(1, F.q)
    assert list(F.vinv(nz)) == [F.inv(int(x)) for x in nz]
    assert list(F.vpow(nz, 5)) == [F.pow(int(x), 5) for x in nz]


@pytest.mark.parametrize("lit,m", [("p=2", 2), ("p=3", 2), ("p=2,k=2", 2), ("p=2", 3), ("p=5", 2)])
def test_embedding_is_a_homomorphism(lit, m):
    F = parse_field(lit)
    K = F.extension(m)
    assert K.q == F.q ** m
    phi = F.embed_map(K)
    assert len(set(int(v) for v in phi)) == F.q
    for a, b in itertools.product(range(F.q), repeat=2):
        assert phi[F.add(a, b)] == K.add(int(phi[a]), int(phi[b]))
        assert phi[F.mul(a, b)] == K.mul(int(phi[a]), int(phi[b]))


def test_frobenius_fixes_prime_field():
    F = parse_field("p=3,k=2")
    fixed = [a for a in range(F.q) if F.frobenius(a) == a]
    assert fixed == [0, 1, 2]


def test_parse_errors():
    for bad in ["p=4", "q=7", "p=2,k=2,mod=g^2+1", "p7", "p=3,k=x"]:
        with pytest.raises(FieldError):
            parse_field(bad)


def test_render_round_trip():
    for lit in SMALL:
        F = parse_field(lit)
        assert parse_field(render_field(F)) == F


def test_parse_element_generator():
    F = parse_field("p=2,k=2")
    g = parse_element("g", F)
    assert F.mul(g, g) == F.add(g, 1)


def test_unipoly_oracles():
    F5 = parse_field("p=5")
    a = UniPoly(F5, [4, 0, 1])  # t^2 - 1
    b = UniPoly(F5, [4, 1])  # t - 1
    assert gcd(a, b).coeffs == (4, 1)
    assert resultant(UniPoly(F5, [0, 1]), UniPoly(F5, [1, 1])) == 1
    F3 = parse_field("p=3")
    f = UniPoly(F3, [1, 0, 1])
    assert roots(f) == []
    K = F3.extension(2)
    rs = roots(f, K)
    assert len(rs) == 2
    assert all(K.add(K.mul(r, r), 1) == 0 for r in rs)
    tk = uni_toolkit(a, b)
    assert tk["resultant"] == 0


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(0, 6), min_size=1, max_size=5), st.lists(st.integers(0, 6), min_size=1, max_size=5))
def test_resultant_vanishes_iff_common_root(ca, cb):
    F = parse_field("p=7")
    a, b = UniPoly(F, ca), UniPoly(F, cb)
    if a.is_zero() or b.is_zero() or a.degree < 1 or b.degree < 1:
        return
    common = gcd(a, b).degree >= 1
    assert (resultant(a, b) == 0) == common


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(0, 8), min_size=1, max_size=4), st.lists(st.integers(0, 8), min_size=2, max_size=4))
def test_divmod_identity(ca, cb):
    F = parse_field("p=3,k=2")
    a, b = UniPoly(F, ca), UniPoly(F, cb)
    if b.is_zero():
        return
    qt, r = divmod(a, b)
    assert (qt * b + r).coeffs == a.coeffs
    assert r.is_zero() or r.degree < b.degree
