"""Degree-by-degree Miura normalization and invariant extraction.

The loop walks the series one standard degree at a time: the component
is decomposed against the second cohomology, the constant part is
recorded as an invariant in odd degree, the coboundary part is removed
by the exponential of a vector field, and a surviving split class stops
the run as an obstruction (the input is either not Poisson or truncated
too early for the class to be excluded).  Applying the recorded
generators in order reproduces the normalized series by construction.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .algebra import DiffPoly, Grade, enumerate_basis
from .cohomology import _ad_p1_column, decompose_h2, evolutionary_field
from .deltaform import theta_to_delta
from .errors import (
    InternalInconsistency,
    JacobiViolation,
    MissingComponent,
    NonconstantInvariant,
    NonstandardLeadingTerm,
    ObstructionNonzeroBockstein,
)
from .linsolve import solve_poly_system
from .rationals import QQ
from .schouten import (
    BracketSeries,
    jacobi_check,
    miura_apply,
    pst,
    standard_leading_term,
)
from .variational import Functional, var_theta


@dataclass
class DegreeRecord:
    degree: int
    c: object  # rational or None (even degree)
    chi_zero: bool
    generator_nonzero: bool


@dataclass
class NormalizationResult:
    order: int
    invariants: list  # [(k, c_k)] with 2k+1 <= order+1
    generators: list  # applied vector fields, ascending degree
    normalized: BracketSeries
    diagnostics: list = field(default_factory=list)

    def invariant_values(self):
        return [c for _, c in self.invariants]

    def replay(self, P: BracketSeries) -> BracketSeries:
        """Apply the recorded generators to P in recorded order."""
        cur = P.truncate(self.order)
        for Y in self.generators:
            cur = miura_apply(Y, cur, self.order)
        return cur


def build_normal_form(cs, order: int) -> BracketSeries:
    """The series p(c): leading term plus c_k at each odd degree 2k+1."""
    components = {1: standard_leading_term()}
    for k, ck in enumerate(cs, start=1):
        d = 2 * k + 1
        if d > order + 1:
            break
        if ck != 0:
            components[d] = pst(d, 0).scale(QQ(ck))
    return BracketSeries(order, components)


def _replace_component(P: BracketSeries, d: int, F: Functional) -> BracketSeries:
    comps = dict(P.components)
    if F.density.is_zero():
        comps.pop(d, None)
    else:
        comps[d] = F
    return BracketSeries(P.order, comps)


def normalize(
    P: BracketSeries, order: int | None = None, check_jacobi: bool = True
) -> NormalizationResult:
    """Reduce a bracket with standard leading term to its normal form.

    check_jacobi runs the full closure test up front (the stated
    precondition); callers whose inputs are Poisson by construction may
    skip it, the per-degree cocycle traps still fire on bad input.
    """
    if order is None:
        order = P.order
    cur = P.truncate(order)
    if not cur.component(1) == standard_leading_term():
        raise NonstandardLeadingTerm(
            "degree-1 component must be the standard leading bivector"
        )
    if check_jacobi:
        verdict = jacobi_check(cur, order)
        if verdict != "ok":
            raise JacobiViolation(verdict)

    invariants = []
    generators = []
    diagnostics = []
    for d in range(2, order + 2):
        dec = decompose_h2(cur.component(d), d)
        if not dec.chi.is_zero():
            raise ObstructionNonzeroBockstein(d, dec.chi)
        if d % 2 == 1:
            invariants.append(((d - 1) // 2, dec.c))
        elif dec.c not in (None, 0):
            raise InternalInconsistency(
                f"constant class reported at even degree {d}"
            )
        Y = dec.X.scale(-1)
        generators.append(Y)
        if not Y.density.is_zero():
            cur = miura_apply(Y, cur, order)
        # the degree-d component now equals its class part; store the
        # canonical density so later steps push around less material
        part = pst(d, 0).scale(dec.c) if (d % 2 == 1 and dec.c != 0) else Functional.zero()
        cur = _replace_component(cur, d, part)
        diagnostics.append(
            DegreeRecord(d, dec.c, dec.chi.is_zero(), not Y.density.is_zero())
        )

    expected = build_normal_form([c for _, c in invariants], order)
    if not cur == expected:
        raise InternalInconsistency("normalized series is not in normal form")
    return NormalizationResult(order, invariants, generators, cur, diagnostics)


def _constant_value(poly: DiffPoly, what: str):
    if poly.is_zero():
        return QQ(0)
    if poly.grade() == Grade(0, 0, 0):
        return poly.constant_term()
    raise NonconstantInvariant(f"{what} must be a constant, got a u-dependent value")


def invariants_fast(P: BracketSeries):
    """Closed-form first two invariants read from the operator form.

    Requires the standard leading term and components through degree
    five (a truncation order of at least four).
    """
    if not P.component(1) == standard_leading_term():
        raise NonstandardLeadingTerm(
            "degree-1 component must be the standard leading bivector"
        )
    if P.order < 4:
        raise MissingComponent(5)
    low = BracketSeries(
        P.order,
        {d: F for d, F in P.components.items() if d in (3, 5)},
    )
    D = theta_to_delta(low)
    c1 = _constant_value(D.coefficient(2, 3, 0), "A[2;3,0]")
    a221 = D.coefficient(2, 2, 1)
    a450 = D.coefficient(4, 5, 0)
    c2 = _constant_value(a450 - a221.scale(c1), "A[4;5,0] - A[2;3,0]*A[2;2,1]")
    return c1, c2


def solve_coboundary(target: Functional, d: int):
    """A vector field X with ad_p1(X) = target, or None when infeasible.

    Solved per weight block over evolutionary unknowns one degree lower.
    """
    x_density = DiffPoly.zero()
    for w, block in target.density.weight_components().items():
        basis = [m.as_poly() for m in enumerate_basis(Grade(d - 1, 0, w + 1))]
        columns = [_ad_p1_column(m) for m in basis]
        sol = solve_poly_system(columns, var_theta(block))
        if sol is None:
            return None
        for coeff, m in zip(sol, basis):
            if coeff != 0:
                x_density = x_density + m.scale(coeff)
    return evolutionary_field(x_density)


def verify_distinctness(cs, cs_other, order: int) -> bool:
    """Whether two normal forms are Miura equivalent within the order.

    Solves degree by degree for a transformation mapping one onto the
    other; the first differing constant makes its degree's linear system
    infeasible, which is reported as False.
    """
    source = build_normal_form(cs, order)
    target = build_normal_form(cs_other, order)
    cur = source
    for d in range(2, order + 2):
        gap = target.component(d) - cur.component(d)
        if gap.is_zero():
            continue
        X = solve_coboundary(gap, d)
        if X is None:
            return False
        cur = miura_apply(X, cur, order)
    return True
