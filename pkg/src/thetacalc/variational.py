"""Variational derivatives and local functionals.

A local functional is a density considered modulo total x- and
y-derivatives.  Equality in the quotient is decided through the kernel
characterization: an element is a total divergence exactly when both
variational derivatives vanish and it has no constant term.  For
densities of super degree one or two the theta-derivative alone decides
(the u-derivative of a divergence vanishes automatically once the
theta-derivative does); this shortcut carries most of the solver load
and is cross-checked against the full test in the suite.
"""

from __future__ import annotations

from .algebra import DiffPoly, Grade, grade_of, partial_derivative, total_derivative
from .errors import DecompositionError


def _euler_operator(f: DiffPoly, kind: str) -> DiffPoly:
    """sum over (s,t) of (-dx)^s (-dy)^t d f / d<kind>^(s,t).

    Evaluated as a nested Horner sweep so every intermediate stays
    merged: over t first for each fixed s, then over s.
    """
    # collect partials grouped by index
    partials = {}
    for upow, ufs, ths in f.terms:
        if kind == "u":
            if upow:
                partials.setdefault((0, 0), None)
            for idx, _ in ufs:
                partials.setdefault(idx, None)
        else:
            for idx in ths:
                partials.setdefault(idx, None)
    if not partials:
        return DiffPoly.zero()
    for idx in partials:
        partials[idx] = partial_derivative(f, kind, idx[0], idx[1])
    smax = max(s for s, _ in partials)
    by_s = []
    for s in range(smax + 1):
        col = {t: g for (si, t), g in partials.items() if si == s}
        if not col:
            by_s.append(DiffPoly.zero())
            continue
        tmax = max(col)
        acc = DiffPoly.zero()
        for t in range(tmax, -1, -1):
            acc = -total_derivative(acc, "y")
            if t in col:
                acc = acc + col[t]
        by_s.append(acc)
    acc = DiffPoly.zero()
    for s in range(smax, -1, -1):
        acc = -total_derivative(acc, "x")
        acc = acc + by_s[s]
    return acc


def var_u(f) -> DiffPoly:
    """Variational derivative with respect to u; kills divergences."""
    return _euler_operator(_density(f), "u")


def var_theta(f) -> DiffPoly:
    """Variational derivative with respect to theta (left derivatives)."""
    return _euler_operator(_density(f), "theta")


def _density(f) -> DiffPoly:
    return f.density if isinstance(f, Functional) else f


def is_total_divergence(a: DiffPoly) -> bool:
    """Exact membership test for im dx + im dy."""
    if a.is_zero():
        return True
    if a.constant_term() != 0:
        return False
    return var_theta(a).is_zero() and var_u(a).is_zero()


def _vanishes_in_quotient(a: DiffPoly) -> bool:
    """is_total_divergence with the super-degree shortcut."""
    if a.is_zero():
        return True
    if a.constant_term() != 0:
        return False
    ps = {len(ths) for (_, _, ths) in a.terms}
    if ps <= {1, 2}:
        return var_theta(a).is_zero()
    return var_theta(a).is_zero() and var_u(a).is_zero()


class Functional:
    """An element of the quotient space, held as a chosen density."""

    __slots__ = ("density", "_grade")

    def __init__(self, density: DiffPoly):
        self.density = density
        self._grade = None

    @classmethod
    def zero(cls) -> "Functional":
        return cls(DiffPoly.zero())

    def grade(self):
        if self._grade is None:
            self._grade = grade_of(self.density)
        return self._grade

    def super_degree(self):
        return self.density.super_degree()

    def is_zero(self) -> bool:
        return _vanishes_in_quotient(self.density)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Functional):
            return NotImplemented
        return _vanishes_in_quotient(self.density - other.density)

    def __hash__(self):
        raise TypeError("functionals are not hashable (quotient equality)")

    def __add__(self, other: "Functional") -> "Functional":
        return Functional(self.density + other.density)

    def __sub__(self, other: "Functional") -> "Functional":
        return Functional(self.density - other.density)

    def __neg__(self) -> "Functional":
        return Functional(-self.density)

    def scale(self, c) -> "Functional":
        return Functional(self.density.scale(c))

    def __repr__(self):
        from .printer import format_poly

        return f"Functional({format_poly(self.density)!r})"


def divergence_decompose(a: DiffPoly, grade: Grade | None = None):
    """Explicit witnesses (bx, by) with a = dx(bx) + dy(by).

    Solved exactly over the enumerated monomial bases one grade lower;
    raises DecompositionError when a is not a divergence.
    """
    from .linsolve import SparseSystem
    from .algebra import enumerate_basis

    if a.is_zero():
        return DiffPoly.zero(), DiffPoly.zero()
    if grade is None:
        grade = grade_of(a)
    if grade is None:
        # handle each homogeneous piece separately
        bx_total, by_total = DiffPoly.zero(), DiffPoly.zero()
        pieces = {}
        for key, c in a.terms.items():
            from .algebra import _key_grade

            pieces.setdefault(_key_grade(key), {})[key] = c
        for g, terms in sorted(pieces.items()):
            bx, by = divergence_decompose(DiffPoly(terms), g)
            bx_total, by_total = bx_total + bx, by_total + by
        return bx_total, by_total

    d, p, w = grade
    if d == 0:
        raise DecompositionError("degree-0 elements are never divergences")
    basis = enumerate_basis(Grade(d - 1, p, w))
    system = SparseSystem()
    cols = []
    for m in basis:
        cols.append(total_derivative(m.as_poly(), "x"))
    for m in basis:
        cols.append(total_derivative(m.as_poly(), "y"))
    for j, col in enumerate(cols):
        for key, c in col.terms.items():
            system.add(key, j, c)
    for key, c in a.terms.items():
        system.add_rhs(key, c)
    sol = system.solve(len(cols))
    if sol is None:
        raise DecompositionError("element is not a total divergence")
    n = len(basis)
    bx = DiffPoly.zero()
    by = DiffPoly.zero()
    for j, m in enumerate(basis):
        if sol[j]:
            bx = bx + m.as_poly().scale(sol[j])
        if sol[n + j]:
            by = by + m.as_poly().scale(sol[n + j])
    return bx, by
