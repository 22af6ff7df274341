import random

import pytest

from thetacalc.algebra import DiffPoly, Grade, enumerate_basis
from thetacalc.cohomology import decompose_h2, evolutionary_field, theta_monomial, bockstein_split
from thetacalc.errors import (
    JacobiViolation,
    MissingComponent,
    NonstandardLeadingTerm,
    ObstructionNonzeroBockstein,
)
from thetacalc.normalizer import (
    build_normal_form,
    invariants_fast,
    normalize,
    solve_coboundary,
    verify_distinctness,
)
from thetacalc.rationals import QQ
from thetacalc.schouten import (
    BracketSeries,
    jacobi_check,
    miura_apply,
    pst,
    standard_leading_term,
)
from thetacalc.variational import Functional

u = DiffPoly.u
th = DiffPoly.theta
half = DiffPoly.rational(1, 2)


def pb_example(order=7):
    return BracketSeries(order, {1: standard_leading_term(), 3: pst(3, 0) + pst(2, 1)})


def random_generator(rng, degree, max_weight=3, terms=1):
    out = DiffPoly.zero()
    for _ in range(terms):
        w = rng.randint(1, max_weight)
        basis = enumerate_basis(Grade(degree, 0, w))
        c = QQ(rng.randint(1, 3), rng.randint(1, 2)) * rng.choice([1, -1])
        out = out + rng.choice(basis).as_poly().scale(c)
    return evolutionary_field(out)


# -- build_normal_form -------------------------------------------------------


def test_normal_form_trivial():
    P = build_normal_form([], 3)
    assert P.degrees() == [1]
    assert P.component(1) == standard_leading_term()


def test_normal_form_is_poisson_for_random_constants():
    rng = random.Random(1)
    cs = [QQ(rng.randint(-5, 5), rng.randint(1, 4)) for _ in range(3)]
    assert jacobi_check(build_normal_form(cs, 7)) == "ok"


def test_normal_form_alternating_matches_the_example_tail():
    # geometric tail with alternating signs through degree 7
    P = build_normal_form([QQ(1), QQ(-1), QQ(1)], 7)
    assert P.component(3) == pst(3, 0)
    assert P.component(5) == pst(5, 0).scale(-1)
    assert P.component(7) == pst(7, 0)


# -- normalize ----------------------------------------------------------------


def test_normalize_example_bracket():
    res = normalize(pb_example())
    assert res.invariant_values() == [QQ(1), QQ(-1), QQ(1)]
    assert res.normalized == build_normal_form([1, -1, 1], 7)


def test_normalize_replay_reproduces_output():
    P = pb_example()
    res = normalize(P)
    assert res.replay(P) == res.normalized


def test_normalize_example_generator_pattern():
    # the deterministic solver picks the alternating-coefficient even
    # translates: the degree-2s generator is (-1)^(s+1)/(2s) u^(2s,0) th
    res = normalize(pb_example())
    by_degree = {d: g for d, g in enumerate(res.generators, start=1)}
    for s, coeff in [(1, QQ(1, 2)), (2, QQ(-1, 4)), (3, QQ(1, 6))]:
        want = evolutionary_field(u(2 * s, 0).scale(coeff))
        assert by_degree[2 * s].density == want.density
    for d in (1, 3, 5, 7):
        assert by_degree[d].density.is_zero()


def test_normalize_already_normal():
    P = build_normal_form([QQ(5), QQ(-7)], 5)
    res = normalize(P)
    assert res.invariant_values() == [QQ(5), QQ(-7)]
    assert all(g.density.is_zero() for g in res.generators)


def test_normalize_requires_standard_leading_term():
    P = BracketSeries(3, {1: Functional(half * th(0, 0) * th(1, 0))})
    with pytest.raises(NonstandardLeadingTerm):
        normalize(P)


def test_normalize_rejects_non_poisson():
    bad = BracketSeries(
        2, {1: standard_leading_term(), 3: Functional(half * u() * th(0, 0) * th(3, 0))}
    )
    with pytest.raises(JacobiViolation) as exc:
        normalize(bad)
    assert exc.value.order == 4


def test_normalize_reports_obstruction():
    chi = theta_monomial((2, 1, 0))
    P = BracketSeries(
        3,
        {1: standard_leading_term(), 3: Functional(bockstein_split(chi))},
    )
    assert jacobi_check(P) == "ok"  # the self-bracket lives above the horizon
    with pytest.raises(ObstructionNonzeroBockstein) as exc:
        normalize(P)
    assert exc.value.degree == 3
    assert exc.value.chi == chi


def test_normalize_roundtrip_small():
    rng = random.Random(11)
    for _ in range(2):
        cs = [QQ(rng.randint(-3, 3), rng.randint(1, 2)) for _ in range(2)]
        P = build_normal_form(cs, 5)
        for d in (1, 2):
            P = miura_apply(random_generator(rng, d, max_weight=2), P, 5)
        res = normalize(P)
        assert res.invariant_values() == cs
        assert res.replay(P) == res.normalized


def test_normalize_example_extended_order():
    # the closed form of the example continues with alternating signs
    P = BracketSeries(9, {1: standard_leading_term(), 3: pst(3, 0) + pst(2, 1)})
    res = normalize(P)
    assert res.invariant_values() == [QQ(1), QQ(-1), QQ(1), QQ(-1)]


def test_obstruction_resolves_at_higher_order():
    # at low order the split class is reported as an obstruction; once
    # the horizon reaches its self-bracket the input fails Jacobi, which
    # settles the ambiguity the obstruction error leaves open
    chi = theta_monomial((2, 1, 0))
    comp = Functional(bockstein_split(chi))
    low = BracketSeries(3, {1: standard_leading_term(), 3: comp})
    assert jacobi_check(low) == "ok"
    with pytest.raises(ObstructionNonzeroBockstein):
        normalize(low)
    high = BracketSeries(4, {1: standard_leading_term(), 3: comp})
    assert jacobi_check(high) == 6
    with pytest.raises(JacobiViolation):
        normalize(high)


def test_normalize_degree_locality():
    # after the run, each component of the output decomposes with zero
    # coboundary part
    res = normalize(pb_example())
    for d in range(2, 9):
        dec = decompose_h2(res.normalized.component(d), d)
        assert dec.X.density.is_zero()
        assert dec.chi.is_zero()


# -- fast invariants ----------------------------------------------------------


def test_fast_on_example():
    assert invariants_fast(pb_example()) == (QQ(1), QQ(-1))


def test_fast_reads_normal_form():
    assert invariants_fast(build_normal_form([QQ(5), QQ(-7)], 5)) == (QQ(5), QQ(-7))


def test_fast_agrees_with_normalize_on_conjugate():
    rng = random.Random(3)
    cs = [QQ(2), QQ(-1, 2)]
    P = build_normal_form(cs, 5)
    for d in (1, 2):
        P = miura_apply(random_generator(rng, d, max_weight=2), P, 5)
    res = normalize(P)
    assert invariants_fast(P) == tuple(res.invariant_values())


def test_fast_cancels_field_dependence_exactly():
    # conjugating by a field-dependent second-derivative characteristic
    # makes both coefficient reads depend on u; the invariant combination
    # collapses to a constant
    from thetacalc.deltaform import theta_to_delta

    X = evolutionary_field(u() * u(2, 0))
    cs = [QQ(3), QQ(-1, 2)]
    P = miura_apply(X, build_normal_form(cs, 7), 7)
    D = theta_to_delta(BracketSeries(7, {d: f for d, f in P.components.items() if d in (3, 5)}))
    assert D.coefficient(2, 2, 1) == DiffPoly.rational(-2) * u()
    assert D.coefficient(4, 5, 0) == DiffPoly.rational(-6) * u() - half
    assert invariants_fast(P) == (QQ(3), QQ(-1, 2))
    assert normalize(P).invariant_values() == [QQ(3), QQ(-1, 2), QQ(0)]


def test_fast_agrees_on_gradient_conjugate():
    F = DiffPoly.rational(1, 3) * u() * u() - u()
    X1 = evolutionary_field(F * u(1, 0))
    cs = [QQ(2), QQ(0), QQ(1, 2)]
    P = miura_apply(X1, build_normal_form(cs, 7), 7)
    assert invariants_fast(P) == (QQ(2), QQ(0))
    assert normalize(P).invariant_values() == cs


def test_fast_needs_degree_five():
    with pytest.raises(MissingComponent):
        invariants_fast(build_normal_form([QQ(1)], 3))


def test_fast_requires_standard_leading_term():
    P = BracketSeries(5, {1: Functional(half * th(0, 0) * th(1, 0))})
    with pytest.raises(NonstandardLeadingTerm):
        invariants_fast(P)


def test_fast_rejects_field_dependent_top_coefficient():
    from thetacalc.errors import NonconstantInvariant

    P = BracketSeries(
        5,
        {1: standard_leading_term(), 3: Functional(half * u() * th(0, 0) * th(3, 0))},
    )
    with pytest.raises(NonconstantInvariant):
        invariants_fast(P)


def test_fast_rejects_field_dependent_combination():
    from thetacalc.errors import NonconstantInvariant

    P = BracketSeries(
        5,
        {
            1: standard_leading_term(),
            3: pst(3, 0),
            5: Functional(half * u() * th(0, 0) * th(5, 0)),
        },
    )
    with pytest.raises(NonconstantInvariant):
        invariants_fast(P)


# -- distinctness -------------------------------------------------------------


def test_distinct_constants_not_equivalent():
    assert verify_distinctness([QQ(1)], [QQ(2)], 3) is False


def test_equal_constants_equivalent():
    assert verify_distinctness([QQ(1)], [QQ(1)], 3) is True
    assert verify_distinctness([], [], 2) is True


def test_distinct_in_second_slot():
    assert verify_distinctness([QQ(1), QQ(0)], [QQ(1), QQ(1)], 5) is False


def test_difference_beyond_order_is_invisible():
    assert verify_distinctness([QQ(1), QQ(2)], [QQ(1), QQ(3)], 2) is True


def test_solve_coboundary_finds_witness():
    target = pst(2, 1)
    X = solve_coboundary(target, 3)
    assert X is not None
    from thetacalc.schouten import schouten

    assert schouten(standard_leading_term(), X) == target


def test_solve_coboundary_rejects_class():
    assert solve_coboundary(pst(3, 0), 3) is None
