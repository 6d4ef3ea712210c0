import pytest
from hypothesis import given, settings, strategies as st

from liaison.groebner import (
    assert_buchberger,
    buchberger,
    colon,
    hilbert,
    ideal_contains,
    ideal_intersection,
    leadterm_hilbert,
    lift_through,
    normal_form,
    reduced_ideal_gb,
    syzygies,
    vec_is_zero,
)
from liaison.ring import make_ring, parse_poly, render_poly

from tests.oracle import hf_of_quotient, is_member, random_homogeneous


def P(ctx, s):
    return parse_poly(ctx, s)


def gb_strings(ctx, gens):
    return [render_poly(g) for g in reduced_ideal_gb(ctx, gens)]


# -- buchberger --------------------------------------------------------------


def test_gb_of_spec_pair_is_itself(F7xy):
    gens = [P(F7xy, "x^2 - y"), P(F7xy, "y^2 - x")]
    assert gb_strings(F7xy, gens) == ["x^2 - y", "y^2 - x"]


def test_gb_containment_collapse(F101x):
    gens = [P(F101x, "x^3"), P(F101x, "x")]
    assert gb_strings(F101x, gens) == ["x"]


def test_gb_empty_input(F101x):
    assert reduced_ideal_gb(F101x, []) == []


def test_gb_twisted_cubic_is_reduced(F101xyzw, cubic_ideal):
    # grevlex leads are y^2, y*z, z^2; the three quadrics are already a GB
    got = gb_strings(F101xyzw, cubic_ideal)
    assert got == ["y^2 - x*z", "y*z - x*w", "z^2 - y*w"]
    eng = buchberger([(g,) for g in cubic_ideal], F101xyzw, 1)
    assert_buchberger(eng)


def test_gb_reduced_output_is_sorted_descending(F101xy):
    got = gb_strings(F101xy, [P(F101xy, "x^2 + y^2"), P(F101xy, "x*y")])
    assert got == ["y^3", "x^2 + y^2", "x*y"]


def test_gb_emitted_bases_pass_criterion(F101xy):
    for gens in (
        ["x^2 + y^2", "x*y"],
        ["x + y", "x - y"],
        ["x^2", "x*y"],
    ):
        eng = buchberger([(P(F101xy, s),) for s in gens], F101xy, 1)
        assert_buchberger(eng)


def test_gb_quotient_ring_appends_defining(hypersurface):
    # over R = F101[x,y]/(xy), the ideal (x) has GB {x, xy} -> {x} after
    # reduction, and y*x is recognized as 0
    eng = buchberger([(P(hypersurface, "x"),)], hypersurface, 1)
    assert eng.contains((P(hypersurface, "x*y"),))


# -- normal form -------------------------------------------------------------


def test_nf_single_division_step(F101xy):
    gb = buchberger([(P(F101xy, "x^2 - y"),)], F101xy, 1)
    assert normal_form((P(F101xy, "x^3"),), gb)[0] == P(F101xy, "x*y")


def test_nf_of_member_is_zero(F101xy):
    gens = [(P(F101xy, "x^2 - y^2"),), (P(F101xy, "x*y"),)]
    gb = buchberger(gens, F101xy, 1)
    for g in gens:
        assert vec_is_zero(normal_form(g, gb))


def test_nf_unit_stays(F101xy):
    gb = buchberger([(P(F101xy, "x"),), (P(F101xy, "y"),)], F101xy, 1)
    assert normal_form((F101xy.one(),), gb)[0] == F101xy.one()


def test_nf_idempotent(F101xy):
    gb = buchberger([(P(F101xy, "x^2 - y^2"),), (P(F101xy, "x*y"),)], F101xy, 1)
    v = (P(F101xy, "x^3 + y^3"),)
    once = normal_form(v, gb)
    assert normal_form(once, gb) == once


@settings(max_examples=20, deadline=None)
@given(seed=st.integers(1, 2**20), deg=st.integers(2, 4))
def test_nf_additive_on_equal_degrees(seed, deg):
    ctx = make_ring(101, ["x", "y"])
    gb = buchberger([(P(ctx, "x^2 - y^2"),), (P(ctx, "x*y"),)], ctx, 1)
    v = random_homogeneous(ctx, deg, seed)
    w = random_homogeneous(ctx, deg, seed + 7)
    lhs = normal_form((v + w,), gb)[0]
    rhs = normal_form((v,), gb)[0] + normal_form((w,), gb)[0]
    assert lhs == rhs


# -- syzygies ----------------------------------------------------------------


def test_koszul_syzygy(F101xy):
    cols = [(P(F101xy, "x"),), (P(F101xy, "y"),)]
    syz = syzygies(cols, F101xy, 1)
    assert len(syz) == 1
    s = syz[0]
    # generates the same module as (y, -x)
    assert s[0] * P(F101xy, "x") + s[1] * P(F101xy, "y") == F101xy.zero()
    assert {render_poly(s[0].monic()), render_poly((-s[1]).monic() if s[1] else s[1])}


def test_syzygies_of_identity_vanish(F101xy):
    one = F101xy.one()
    zero = F101xy.zero()
    cols = [(one, zero), (zero, one)]
    assert syzygies(cols, F101xy, 2) == []


def test_syzygy_over_quotient_ring(hypersurface):
    # x * y = 0 in R = F101[x,y]/(xy)
    syz = syzygies([(P(hypersurface, "x"),)], hypersurface, 1)
    assert len(syz) == 1
    assert render_poly(syz[0][0].monic()) == "y"


def test_syzygy_columns_annihilate_matrix(F101xyzw, cubic_ideal):
    cols = [(g,) for g in cubic_ideal]
    syz = syzygies(cols, F101xyzw, 1)
    assert len(syz) == 2  # Hilbert-Burch: the cubic has a 3x2 syzygy matrix
    gb = buchberger([], F101xyzw, 1)
    for s in syz:
        acc = F101xyzw.zero()
        for u, g in zip(s, cubic_ideal):
            acc = acc + u * g
        assert not acc


# -- colon and intersection ---------------------------------------------------


def test_colon_univariate(F101x):
    got = colon([P(F101x, "x^3")], [P(F101x, "x")], F101x)
    assert [render_poly(g) for g in got] == ["x^2"]


def test_colon_mixed_ideal(F101xy):
    got = colon([P(F101xy, "x^2"), P(F101xy, "x*y")], [P(F101xy, "x")], F101xy)
    assert [render_poly(g) for g in got] == ["x", "y"]


def test_colon_by_unit(F101xy):
    gens = [P(F101xy, "x^2"), P(F101xy, "x*y")]
    got = colon(gens, [F101xy.one()], F101xy)
    assert [render_poly(g) for g in got] == ["x^2", "x*y"]


def test_colon_containments(F101xyzw, cubic_ideal):
    ctx = F101xyzw
    c = cubic_ideal[:2]
    quot = colon(c, cubic_ideal, ctx)
    for g in c:
        assert ideal_contains(quot, g, ctx)  # I <= (I:J)
    for q in quot:
        for g in cubic_ideal:
            assert ideal_contains(c, q * g, ctx)  # (I:J)*J <= I


def test_intersection_of_principal_ideals(F101xy):
    got = ideal_intersection([P(F101xy, "x")], [P(F101xy, "y")], F101xy)
    assert [render_poly(g) for g in got] == ["x*y"]


# -- lifting -----------------------------------------------------------------


def test_lift_simple(F101x):
    X, bad = lift_through([(P(F101x, "x"),)], [(P(F101x, "x^2"),)], F101x, 1)
    assert bad is None
    assert X[0][0] == P(F101x, "x")


def test_lift_fails_outside_span(F101xy):
    X, bad = lift_through([(P(F101xy, "x"),)], [(P(F101xy, "y"),)], F101xy, 1)
    assert X is None and bad == 0


def test_lift_two_columns(F101xy):
    A = [(P(F101xy, "x"),), (P(F101xy, "y"),)]
    B = [(P(F101xy, "x^2 + y^2"),)]
    X, bad = lift_through(A, B, F101xy, 1)
    assert bad is None
    acc = F101xy.zero()
    for coeff, col in zip(X[0], A):
        acc = acc + coeff * col[0]
    assert acc == B[0][0]


# -- hilbert -----------------------------------------------------------------


def test_hilbert_full_plane(F101xy):
    gb = buchberger([], F101xy, 1)
    data = hilbert(gb)
    assert data.dim == 2
    assert [data.hf(j) for j in range(5)] == [1, 2, 3, 4, 5]


def test_hilbert_twisted_cubic(F101xyzw, cubic_ideal):
    gb = buchberger([(g,) for g in cubic_ideal], F101xyzw, 1)
    data = hilbert(gb)
    assert data.dim == 2
    assert data.degree == 3


def test_hilbert_point(F101xy):
    gb = buchberger([(P(F101xy, "x"),), (P(F101xy, "y"),)], F101xy, 1)
    data = hilbert(gb)
    assert data.dim == 0
    assert data.total_length() == 1
    assert [data.hf(j) for j in range(3)] == [1, 0, 0]


def test_hilbert_weighted_quotient(semigroup345):
    # R/(x) for the (t^3,t^4,t^5) curve: residues in degrees 0, 4, 5
    ctx = semigroup345
    gb = buchberger([(P(ctx, "x"),)], ctx, 1)
    data = hilbert(gb)
    assert data.dim == 0
    assert data.total_length() == 3
    assert [data.hf(j) for j in range(7)] == [1, 0, 0, 0, 1, 1, 0]


def test_hilbert_of_semigroup_ring_itself(semigroup345):
    gb = buchberger([], semigroup345, 1)
    data = hilbert(gb)
    assert data.dim == 1
    # numerical semigroup <3,4,5>: gaps exactly at 1 and 2
    assert [data.hf(j) for j in range(8)] == [1, 0, 0, 1, 1, 1, 1, 1]


# -- oracle cross-checks -------------------------------------------------------


@pytest.mark.parametrize(
    "gens",
    [
        ["x^2", "x*y"],
        ["x^2 + y^2", "x*y"],
        ["x^3 - y^3"],
        ["x^2 - y^2", "x*y - y^2"],
    ],
)
def test_hf_matches_bruteforce(F101xy, gens):
    cols = [(P(F101xy, s),) for s in gens]
    gb = buchberger(cols, F101xy, 1)
    data = leadterm_hilbert(gb, 1, (0,))
    for d in range(7):
        assert data.hf(d) == hf_of_quotient(F101xy, 1, (0,), cols, d)


def test_membership_matches_bruteforce(F101xy):
    cols = [(P(F101xy, "x^2 - y^2"),), (P(F101xy, "x*y"),)]
    gb = buchberger(cols, F101xy, 1)
    probes = ["x^3", "x^2*y", "x^3 - x*y^2", "y^3", "x^4 + y^4"]
    for s in probes:
        v = (P(F101xy, s),)
        assert vec_is_zero(normal_form(v, gb)) == is_member(F101xy, 1, (0,), cols, v)
