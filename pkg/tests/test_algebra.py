import pytest
from hypothesis import given, settings, strategies as st

from thetacalc.algebra import (
    DiffPoly,
    Grade,
    enumerate_basis,
    grade_of,
    mul,
    partial_derivative,
    total_derivative,
)
from thetacalc.rationals import QQ

u = DiffPoly.u
th = DiffPoly.theta


# -- strategies ----------------------------------------------------------


def poly_from_grade(d, p, w, coeffs):
    basis = enumerate_basis(Grade(d, p, w))
    out = DiffPoly.zero()
    for c, m in zip(coeffs, basis):
        out = out + m.as_poly().scale(QQ(c))
    return out


@st.composite
def homogeneous_poly(draw, dmax=6, pmax=3, wmax=3):
    d = draw(st.integers(0, dmax))
    p = draw(st.integers(0, pmax))
    w = draw(st.integers(0, wmax))
    basis = enumerate_basis(Grade(d, p, w))
    if not basis:
        return DiffPoly.zero()
    picks = draw(
        st.lists(
            st.tuples(st.integers(0, len(basis) - 1), st.integers(-3, 3)),
            min_size=1,
            max_size=3,
        )
    )
    out = DiffPoly.zero()
    for i, c in picks:
        out = out + basis[i].as_poly().scale(QQ(c))
    return out


# -- multiplication ------------------------------------------------------


def test_theta_anticommute():
    assert mul(th(0, 0), th(1, 0)) == -mul(th(1, 0), th(0, 0))


def test_theta_square_is_zero():
    assert mul(th(1, 0), th(1, 0)).is_zero()


def test_commutative_part():
    prod = mul(u(), mul(u(), u(1, 0)))
    assert grade_of(prod) == Grade(1, 0, 3)
    assert prod == u() * u() * u(1, 0)


@settings(max_examples=60)
@given(homogeneous_poly(), homogeneous_poly())
def test_supercommutativity(a, b):
    pa, pb = a.super_degree(), b.super_degree()
    sign = (-1) ** (pa * pb)
    assert mul(a, b) == mul(b, a).scale(sign)


@settings(max_examples=30)
@given(homogeneous_poly(dmax=4), homogeneous_poly(dmax=4), homogeneous_poly(dmax=4))
def test_mul_associative(a, b, c):
    assert mul(mul(a, b), c) == mul(a, mul(b, c))


def test_grades_add_under_mul():
    a = u(1, 0) * th(0, 1)
    b = u() * u(2, 0)
    ga, gb = grade_of(a), grade_of(b)
    assert grade_of(mul(a, b)) == Grade(ga.d + gb.d, ga.p + gb.p, ga.w + gb.w)


# -- total derivatives ---------------------------------------------------


def test_leibniz_example():
    assert total_derivative(u() * th(0, 0), "x") == u(1, 0) * th(0, 0) + u() * th(1, 0)


def test_dy_theta():
    assert total_derivative(th(0, 0), "y") == th(0, 1)


def test_chain_rule_on_coefficient():
    half_u2 = DiffPoly.rational(1, 2) * u() * u()
    assert total_derivative(half_u2, "x") == u() * u(1, 0)


@settings(max_examples=60)
@given(homogeneous_poly())
def test_dx_dy_commute(a):
    assert a.dx().dy() == a.dy().dx()


@settings(max_examples=60)
@given(homogeneous_poly())
def test_derivative_grade_bookkeeping(a):
    g = grade_of(a)
    if a.is_zero():
        return
    for axis in ("x", "y"):
        da = total_derivative(a, axis)
        if not da.is_zero():
            assert grade_of(da) == Grade(g.d + 1, g.p, g.w)


@settings(max_examples=40)
@given(homogeneous_poly(dmax=4), homogeneous_poly(dmax=4))
def test_leibniz_rule(a, b):
    lhs = total_derivative(mul(a, b), "x")
    rhs = mul(total_derivative(a, "x"), b) + mul(a, total_derivative(b, "x"))
    assert lhs == rhs


def test_bad_axis_rejected():
    with pytest.raises(ValueError):
        total_derivative(u(), "z")


# -- partial derivatives -------------------------------------------------


def test_left_theta_derivative_sign():
    # the (0,1) factor crosses one theta on its way to the front
    f = mul(th(0, 0), th(0, 1))
    assert partial_derivative(f, "theta", 0, 1) == -th(0, 0)
    assert partial_derivative(f, "theta", 0, 0) == th(0, 1)


def test_left_theta_derivative_ordering_oracle():
    # both orderings of the same product must give consistent answers
    f1 = mul(th(0, 0), th(0, 1))
    f2 = mul(th(0, 1), th(0, 0))
    assert f1 == -f2
    for (s, t) in [(0, 0), (0, 1)]:
        assert (
            partial_derivative(f1, "theta", s, t)
            == -partial_derivative(f2, "theta", s, t)
        )


def test_theta_derivative_twice_is_zero():
    f = th(2, 0) * th(1, 0) * th(0, 0)
    once = partial_derivative(f, "theta", 1, 0)
    assert partial_derivative(once, "theta", 1, 0).is_zero()


def test_u_partial():
    g = u() * u(1, 0) * u(1, 0)
    assert partial_derivative(g, "u", 1, 0) == DiffPoly.rational(2) * u() * u(1, 0)
    assert partial_derivative(g, "u", 0, 0) == u(1, 0) * u(1, 0)


def test_partial_absent_variable():
    assert partial_derivative(th(1, 0), "theta", 2, 0).is_zero()


# -- grading -------------------------------------------------------------


def test_grade_examples():
    p1_density = DiffPoly.rational(1, 2) * th(0, 0) * th(0, 1)
    assert grade_of(p1_density) == Grade(1, 2, 0)
    assert grade_of(u(2, 0) * th(1, 0) * th(0, 0)) == Grade(3, 2, 1)
    assert grade_of(u() + th(1, 0)) is None


def test_homogeneous_component():
    a = u() + th(1, 0)
    assert a.homogeneous_component(Grade(0, 0, 1)) == u()
    assert a.homogeneous_component(Grade(1, 1, 0)) == th(1, 0)


# -- basis enumeration ---------------------------------------------------


def test_basis_examples():
    keys = {m.key for m in enumerate_basis(Grade(1, 2, 0))}
    assert keys == {
        (0, (), ((1, 0), (0, 0))),
        (0, (), ((0, 1), (0, 0))),
    }
    assert [m.key for m in enumerate_basis(Grade(0, 0, 2))] == [(2, (), ())]
    assert [m.key for m in enumerate_basis(Grade(0, 1, 0))] == [(0, (), ((0, 0),))]


def test_basis_monomials_have_the_right_grade():
    for d in range(5):
        for p in range(3):
            for w in range(3):
                for m in enumerate_basis(Grade(d, p, w)):
                    assert m.grade() == Grade(d, p, w)


def _counting_oracle(dmax, pmax, wmax):
    """Independent dimension count by dynamic programming.

    Generators: the underived u (weight 1), each u^(s,t) with
    1 <= s+t <= dmax (degree s+t, weight 1, unbounded exponent), and
    each theta^(s,t) with s+t <= dmax (degree s+t, super 1, exponent
    0 or 1).
    """
    counts = {(0, 0, 0): 1}

    def add_unbounded(cd, cw):
        # unbounded knapsack: sweep states in increasing (d, w)
        for d in range(dmax + 1):
            for p in range(pmax + 1):
                for w in range(wmax + 1):
                    c = counts.get((d, p, w))
                    if c and d + cd <= dmax and w + cw <= wmax:
                        key = (d + cd, p, w + cw)
                        counts[key] = counts.get(key, 0) + c

    def add_binary(cd):
        items = list(counts.items())
        for (d, p, w), c in items:
            if d + cd <= dmax and p + 1 <= pmax:
                key = (d + cd, p + 1, w)
                counts[key] = counts.get(key, 0) + c

    add_unbounded(0, 1)  # upow
    for deg in range(1, dmax + 1):
        for _ in range(deg + 1):  # indices (s, deg-s)
            add_unbounded(deg, 1)
    for deg in range(0, dmax + 1):
        for _ in range(deg + 1):
            add_binary(deg)
    return counts


def test_basis_counts_match_generating_function():
    dmax, pmax, wmax = 6, 3, 3
    oracle = _counting_oracle(dmax, pmax, wmax)
    for d in range(dmax + 1):
        for p in range(pmax + 1):
            for w in range(wmax + 1):
                got = len(enumerate_basis(Grade(d, p, w)))
                assert got == oracle.get((d, p, w), 0), (d, p, w)


def test_basis_deterministic():
    a = [m.key for m in enumerate_basis(Grade(4, 2, 2))]
    b = [m.key for m in enumerate_basis(Grade(4, 2, 2))]
    assert a == b and a == sorted(a)
