"""Schouten-Nijenhuis bracket, adjoint actions, and bracket series.

The bracket of functionals of super degrees p and q lands in super
degree p+q-1 and satisfies the graded symmetry [P,Q] = (-1)^(pq) [Q,P]
and the graded Jacobi identity; both are exercised by the test suite as
functional identities.  The degree-1 generator of translations in y,

    half of the integral of th * th^(0,1),

acts by the odd derivation sum_{s,t} th^(s,t+1) d/du^(s,t) (see
cohomology.delta); this identity pins the sign conventions of the whole
package and is asserted exhaustively in the suite.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import factorial

from .algebra import DiffPoly, mul
from .errors import SuperDegreeError
from .rationals import QQ
from .variational import Functional, var_theta, var_u


def p1_density() -> DiffPoly:
    """Density of the standard leading bivector."""
    return DiffPoly.rational(1, 2) * DiffPoly.theta(0, 0) * DiffPoly.theta(0, 1)


def standard_leading_term() -> Functional:
    return Functional(p1_density())


def pst(s: int, t: int) -> Functional:
    """The u-independent bivector  half * integral of th * th^(s,t)."""
    return Functional(
        DiffPoly.rational(1, 2) * DiffPoly.theta(0, 0) * DiffPoly.theta(s, t)
    )


def schouten(P: Functional, Q: Functional) -> Functional:
    """Schouten-Nijenhuis bracket of homogeneous multivectors."""
    p = P.super_degree()
    q = Q.super_degree()
    if p is None or q is None:
        raise SuperDegreeError("operands must be homogeneous in super degree")
    # elements with no u dependence have vanishing u-derivative on both
    # slots, so the bracket collapses to zero
    if P.density.is_u_free() and Q.density.is_u_free():
        return Functional.zero()
    first = mul(var_theta(P.density), var_u(Q.density))
    second = mul(var_u(P.density), var_theta(Q.density))
    if p % 2:
        density = first - second
    else:
        density = first + second
    return Functional(density)


def ad(X: Functional, Q: Functional) -> Functional:
    """Adjoint action of a local vector field."""
    return schouten(X, Q)


@dataclass
class BracketSeries:
    """Bivector series truncated at a given order.

    The component of standard degree d corresponds to order d-1 in the
    deformation parameter; components run over 1 <= d <= order + 1 and
    all have super degree two.
    """

    order: int
    components: dict = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for d, F in self.components.items():
            if not isinstance(F, Functional):
                F = Functional(F)
            if F.density.is_zero():
                continue
            if not (1 <= d <= self.order + 1):
                raise ValueError(f"component degree {d} outside truncation")
            sd = F.super_degree()
            if sd != 2:
                raise SuperDegreeError(
                    f"component at degree {d} has super degree {sd}, want 2"
                )
            if F.density.standard_degree() != d:
                raise ValueError(
                    f"component stored at degree {d} has a different standard degree"
                )
            clean[d] = F
        self.components = clean

    def component(self, d: int) -> Functional:
        return self.components.get(d, Functional.zero())

    def degrees(self):
        return sorted(self.components)

    def truncate(self, order: int) -> "BracketSeries":
        return BracketSeries(
            order, {d: F for d, F in self.components.items() if d <= order + 1}
        )

    def __add__(self, other: "BracketSeries") -> "BracketSeries":
        if other.order != self.order:
            raise ValueError("order mismatch")
        acc = dict(self.components)
        for d, F in other.components.items():
            acc[d] = acc[d] + F if d in acc else F
        return BracketSeries(self.order, acc)

    def __eq__(self, other) -> bool:
        if not isinstance(other, BracketSeries):
            return NotImplemented
        if self.order != other.order:
            return False
        for d in set(self.components) | set(other.components):
            if not self.component(d) == other.component(d):
                return False
        return True

    def max_weight(self) -> int:
        w = 0
        for F in self.components.values():
            for key in F.density.terms:
                from .algebra import _key_grade

                w = max(w, _key_grade(key).w)
        return w


def is_standard_leading(P: BracketSeries) -> bool:
    return P.component(1) == standard_leading_term()


def miura_apply(X: Functional, P: BracketSeries, order: int | None = None) -> BracketSeries:
    """Exponential of the adjoint action, truncated by standard degree.

    X must be homogeneous of super degree one and standard degree >= 1;
    each application raises the degree by deg X, so the series is finite
    on every component.
    """
    if order is None:
        order = P.order
    if X.density.is_zero():
        return P.truncate(order)
    if X.super_degree() != 1:
        raise SuperDegreeError("Miura generator must have super degree one")
    m = X.density.standard_degree()
    if m is None:
        raise SuperDegreeError("Miura generator must be degree-homogeneous")
    if m < 1:
        raise ValueError("Miura generator must have standard degree >= 1")
    acc = {}

    def put(d, F):
        if d in acc:
            acc[d] = acc[d] + F
        else:
            acc[d] = F

    for d, F in P.components.items():
        if d > order + 1:
            continue
        put(d, F)
        Q = F
        n = 0
        while d + (n + 1) * m <= order + 1:
            n += 1
            Q = schouten(X, Q)
            if Q.density.is_zero():
                break
            put(d + n * m, Q.scale(QQ(1, factorial(n))))
    return BracketSeries(order, acc)


def jacobi_check(P: BracketSeries, order: int | None = None):
    """Test [P,P] = 0 degree by degree within the truncation horizon.

    Returns 'ok' or the lowest violating standard degree.  Components of
    [P,P] are reliable through degree order+2; beyond that unknown tail
    terms of P would contribute.
    """
    if order is None:
        order = P.order
    degrees = P.degrees()
    for D in range(2, order + 3):
        total = Functional.zero()
        for d1 in degrees:
            if d1 > D - 1:
                break
            d2 = D - d1
            if d2 < d1:
                break
            F2 = P.components.get(d2)
            if F2 is None:
                continue
            term = schouten(P.components[d1], F2)
            if term.density.is_zero():
                continue
            total = total + (term if d1 == d2 else term.scale(2))
        if not total.is_zero():
            return D
    return "ok"
