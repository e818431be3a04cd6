import random

import pytest
from hypothesis import given, settings, strategies as st

from brimkit.arith import Ring
from brimkit.errors import InfiniteLength
from brimkit.groebner import (INFINITE, FreeVector, buchberger, ideal_gb, krull_dim, matrix_columns,
                              normal_form, origin_supported, quotient_kdim, syzygy_basis, vec)

R = Ring(("x", "y"))
x, y = R.gens()
EN = [["x", "y", "0"], ["0", "x", "y"]]


def test_coprime_leading_terms_are_already_a_basis():
    gb = ideal_gb([x ** 2, y ** 3], R)
    assert {v[0] for v in gb.generators} == {x ** 2, y ** 3}


def test_s_pair_produces_cube():
    gb = ideal_gb([x ** 2 - y ** 2, x * y], R)
    assert {v[0] for v in gb.generators} == {x ** 2 - y ** 2, x * y, y ** 3}
    assert gb.verify()


def test_columns_of_phi():
    gb = buchberger(matrix_columns(R, EN), R)
    expected = {vec(R, x, 0), vec(R, y, x), vec(R, 0, y), vec(R, 0, x ** 2)}
    assert set(gb.generators) == expected
    assert gb.verify()


def test_normal_forms():
    gb = buchberger(matrix_columns(R, EN), R)
    assert normal_form(vec(R, y ** 2, 0), gb).is_zero()
    assert normal_form(vec(R, y, 0), gb) == vec(R, 0, -x)
    v = vec(R, 1, x)
    assert normal_form(v, gb) == v


def test_syzygies():
    syz = syzygy_basis([vec(R, x ** 2), vec(R, y ** 3)])
    assert len(syz) == 1 and syz[0] in (vec(R, y ** 3, -x ** 2), vec(R, -y ** 3, x ** 2))
    syz = syzygy_basis([vec(R, x), vec(R, x)])
    assert syz[0] in (vec(R, 1, -1), vec(R, -1, 1))


def test_hilbert_burch_syzygy():
    cols = matrix_columns(R, EN)
    syz = syzygy_basis(cols)
    assert len(syz) == 1
    s = syz[0]
    c = s[0].terms[(0, 2)]
    assert s.scale(pow(c, -1, R.p)) == vec(R, y ** 2, -x * y, x ** 2)


def test_quotient_dimensions():
    assert quotient_kdim(ideal_gb([x ** 2, y ** 3], R)) == 6
    assert quotient_kdim(buchberger(matrix_columns(R, EN), R)) == 3
    assert quotient_kdim(ideal_gb([x], R)) == INFINITE


def test_krull_dim():
    assert krull_dim(ideal_gb([x ** 2, x * y, y ** 2], R)) == 0
    assert krull_dim(ideal_gb([x], R)) == 1
    assert krull_dim(ideal_gb([R.zero()], R)) == 2
    assert krull_dim(ideal_gb([R.one()], R)) == -1


def test_origin_support():
    assert origin_supported(ideal_gb([x ** 2, y ** 3], R))
    assert not origin_supported(ideal_gb([x - 1, y], R))
    with pytest.raises(InfiniteLength):
        origin_supported(ideal_gb([x], R))


def test_quotient_ring_is_folded_in():
    Q = Ring(("x", "y", "z")).with_quotient(["x^3"])
    gb = ideal_gb(["y", "z"], Q)
    assert quotient_kdim(gb) == 3
    assert gb.contains(FreeVector(Q, ["x^3"]))


def _random_poly(rng, ring, deg=3, terms=4):
    f = ring.zero()
    for _ in range(terms):
        e = tuple(rng.randrange(deg + 1) for _ in range(ring.nvars))
        f = f + ring.monomial(e, rng.randrange(-5, 6))
    return f


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_gb_verify_and_nf_properties(seed):
    rng = random.Random(seed)
    gens = [_random_poly(rng, R) for _ in range(3)]
    gb = ideal_gb(gens, R)
    assert gb.verify()
    for g in gens:
        assert gb.contains(FreeVector(R, [g]))
    v = FreeVector(R, [_random_poly(rng, R)])
    w = FreeVector(R, [_random_poly(rng, R)])
    nf = normal_form(v, gb)
    assert normal_form(nf, gb) == nf
    assert gb.contains(v - nf)
    assert normal_form(v + w.scale(3), gb) == nf + normal_form(w, gb).scale(3)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_syzygies_annihilate_generators(seed):
    rng = random.Random(seed)
    gens = [vec(R, _random_poly(rng, R, 2, 3), _random_poly(rng, R, 2, 3)) for _ in range(3)]
    for s in syzygy_basis(gens):
        total = FreeVector.zero(R, 2)
        for c, g in zip(s, gens):
            total = total + g.scale(c)
        assert total.is_zero()


@pytest.mark.parametrize("ideal", [
    ["x^2", "y^3"], ["x^2", "x*y", "y^2"], ["x^2-y^2", "x*y"], ["x^3+y^2", "x*y^2", "y^4"],
])
def test_kdim_does_not_depend_on_order(ideal):
    dims = {quotient_kdim(ideal_gb(ideal, R.with_order(kind))) for kind in ("grevlex", "lex")}
    assert len(dims) == 1


def test_module_kdim_does_not_depend_on_order():
    lex = R.with_order("lex")
    assert quotient_kdim(buchberger(matrix_columns(lex, EN), lex)) == 3
