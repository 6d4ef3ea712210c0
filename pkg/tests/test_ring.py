import pytest
from hypothesis import given, settings, strategies as st

from liaison.errors import LengthMismatch, NonPrimeCharacteristic, RingMismatch
from tests.oracle import random_homogeneous

from liaison.ring import (
    arith,
    compare_monomials,
    make_ring,
    parse_poly,
    render_poly,
)


def test_make_ring_trivial_ideal():
    ctx = make_ring(101, ["x"])
    assert ctx.defining == ()
    assert ctx.p == 101


def test_make_ring_reduces_defining_ideal():
    # single S-polynomial reduces to 0 by hand, so the pair is already a GB
    ctx = make_ring(7, ["x", "y"], ["x^2 - y", "y^2 - x"])
    rendered = sorted(render_poly(g) for g in ctx.defining)
    assert rendered == ["x^2 - y", "y^2 - x"]


def test_make_ring_rejects_nonprime():
    with pytest.raises(NonPrimeCharacteristic):
        make_ring(4, ["x"])


def test_add_inverse_is_zero(F101x):
    x = F101x.var(0)
    assert not (x + (-x))


def test_difference_of_squares(F7xy):
    x, y = F7xy.gens()
    assert (x + y) * (x - y) == x * x - y * y


def test_univariate_monomial_product(F101x):
    x = F101x.var(0)
    assert x * x * (x * x * x) == parse_poly(F101x, "x^5")


def test_arith_dispatcher(F101x):
    x = F101x.var(0)
    assert arith("add", x, -x) == F101x.zero()
    assert arith("mul", x, x) == parse_poly(F101x, "x^2")
    assert arith("scalar", x, 3) == parse_poly(F101x, "3*x")


def test_ring_mismatch_raises(F101x, F101xy):
    with pytest.raises(RingMismatch):
        F101x.var(0) + F101xy.var(0)


def test_compare_monomials_same_degree_grevlex():
    # x^2 vs xy with x > y: equal degree, grevlex prefers x^2
    assert compare_monomials((2, 0), (1, 1)) == 1
    # degree dominates: y^2 > x
    assert compare_monomials((1, 0), (0, 2)) == -1
    assert compare_monomials((1, 1), (1, 1)) == 0


def test_compare_monomials_length_mismatch():
    with pytest.raises(LengthMismatch):
        compare_monomials((1, 0), (1, 0, 0))


def test_parse_render_roundtrip(F101xy):
    f = parse_poly(F101xy, "3*x^2*y - 2*x + 7")
    assert parse_poly(F101xy, render_poly(f)) == f
    assert render_poly(F101xy.zero()) == "0"
    assert render_poly(parse_poly(F101xy, "x ^ 2 * y")) == "x^2*y"


def test_parse_reduces_coefficients(F7xy):
    assert parse_poly(F7xy, "8*x") == parse_poly(F7xy, "x")
    assert not parse_poly(F7xy, "7*x")


# -- randomized algebra laws -------------------------------------------------


@settings(max_examples=30, deadline=None)
@given(
    da=st.integers(min_value=0, max_value=3),
    db=st.integers(min_value=0, max_value=3),
    dc=st.integers(min_value=0, max_value=3),
    seed=st.integers(min_value=1, max_value=2**20),
)
def test_ring_axioms_random(da, db, dc, seed):
    ctx = make_ring(101, ["x", "y", "z"])
    a = random_homogeneous(ctx, da, seed)
    b = random_homogeneous(ctx, db, seed + 1)
    c = random_homogeneous(ctx, dc, seed + 2)
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c
    if a and b:
        assert (a * b).degree() == a.degree() + b.degree()


@settings(max_examples=50, deadline=None)
@given(
    ea=st.tuples(*[st.integers(0, 5)] * 3),
    eb=st.tuples(*[st.integers(0, 5)] * 3),
    ec=st.tuples(*[st.integers(0, 5)] * 3),
)
def test_monomial_order_total_and_multiplicative(ea, eb, ec):
    cmp = compare_monomials(ea, eb)
    assert cmp in (-1, 0, 1)
    assert cmp == 0 or compare_monomials(eb, ea) == -cmp
    if sum(ea) > sum(eb):
        assert cmp == 1  # refines degree
    if cmp == 1:
        mul_a = tuple(x + y for x, y in zip(ea, ec))
        mul_b = tuple(x + y for x, y in zip(eb, ec))
        assert compare_monomials(mul_a, mul_b) == 1


def test_make_ring_validates_weights():
    with pytest.raises(ValueError):
        make_ring(101, ["x", "y"], weights=[1])
    with pytest.raises(ValueError):
        make_ring(101, ["x", "y"], weights=[1, 0])


def test_parse_poly_error_modes(F101xy):
    with pytest.raises(ValueError):
        parse_poly(F101xy, "x + q")
    with pytest.raises(ValueError):
        parse_poly(F101xy, "x + ")
    with pytest.raises(ValueError):
        parse_poly(F101xy, "x ^")
