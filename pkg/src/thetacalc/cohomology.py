"""Cohomology machinery: the odd differential, the constant-theta ring,
quotient bases, the splitting map, and the second-cohomology solver.

Conventions.  delta is the odd derivation sum th^(s,t+1) d/du^(s,t); on
functionals it agrees with the adjoint action of the standard leading
bivector (asserted in the suite).  The splitting map B sends a
constant-coefficient polynomial in the x-derivative thetas to a density
linear in u, commutes with dx, and satisfies delta o B = dy.

The solver decompose_h2 writes an adjoint-closed bivector component as

    constant * p_d  +  B(chi)  +  ad_p1(X)

with the constant present only in odd degree.  Unknown vector fields are
parameterized in evolutionary form g * th with g a plain differential
polynomial: every class of super degree one has such a representative,
which keeps the linear systems small.  Equality of super degree <= 2
functionals is equivalent to the vanishing of the theta variational
derivative, so each weight block reduces to one sparse rational solve.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .algebra import (
    DiffPoly,
    Grade,
    _accumulate,
    _theta_insert,
    _ufactor_set,
    _ufactors_mul,
    enumerate_basis,
)
from .errors import InternalInconsistency, NotACocycle
from .linsolve import poly_rank, solve_poly_system
from .rationals import QQ
from .schouten import pst, schouten, standard_leading_term
from .variational import Functional, var_theta


def delta(a: DiffPoly) -> DiffPoly:
    """The odd derivation sum th^(s,t+1) d/du^(s,t)."""
    acc = {}
    for (upow, ufs, ths), c in a.terms.items():
        if upow:
            res = _theta_insert((0, 1), ths)
            if res is not None:
                sign, nths = res
                _accumulate(acc, (upow - 1, ufs, nths), sign * c * upow)
        for (s, t), e in ufs:
            res = _theta_insert((s, t + 1), ths)
            if res is not None:
                sign, nths = res
                key = (upow, _ufactor_set(ufs, (s, t), e - 1), nths)
                _accumulate(acc, key, sign * c * e)
    return DiffPoly(acc)


def bockstein_split(t: DiffPoly) -> DiffPoly:
    """The map sum u^(i,0) d/dth^(i,0) (left derivatives).

    Defined on the constant-theta ring; commutes with dx and satisfies
    delta(bockstein_split(t)) = dy(t).
    """
    acc = {}
    for (upow, ufs, ths), c in t.terms.items():
        for j, (s, tt) in enumerate(ths):
            if tt != 0:
                continue
            sign = -1 if j & 1 else 1
            nths = ths[:j] + ths[j + 1 :]
            if s == 0:
                key = (upow + 1, ufs, nths)
            else:
                key = (upow, _ufactors_mul(ufs, (((s, 0), 1),)), nths)
            _accumulate(acc, key, sign * c)
    return DiffPoly(acc)


# -- the constant-theta ring --------------------------------------------


def is_theta_poly(a: DiffPoly) -> bool:
    """True when a lives in the ring generated by th^(k,0) alone."""
    for upow, ufs, ths in a.terms:
        if upow or ufs or any(t != 0 for _, t in ths):
            return False
    return True


def theta_monomial(indices) -> DiffPoly:
    """Monomial th^(k1,0) ... th^(kp,0) from strictly descending k's."""
    ks = tuple(indices)
    if any(ks[i] <= ks[i + 1] for i in range(len(ks) - 1)):
        raise ValueError("indices must be strictly descending")
    return DiffPoly({(0, (), tuple((k, 0) for k in ks)): QQ(1)})


def _descending_tuples(count, deg, cap):
    """Strictly descending integer tuples >= 0 with the given sum.

    cap bounds the head; the head may not go below the minimal degree
    the remaining strictly smaller entries need.
    """
    if count == 0:
        if deg == 0:
            yield ()
        return
    tail_min = ((count - 1) * (count - 2)) // 2
    for k in range(min(deg - tail_min, cap), -1, -1):
        if k * count < deg:
            break
        for rest in _descending_tuples(count - 1, deg - k, k - 1):
            yield (k,) + rest


def theta_basis(p: int, d: int) -> list:
    """Standard monomials th^(i1,0)...th^(ip,0), i1 > ... > ip >= 0."""
    out = [theta_monomial(ks) for ks in _descending_tuples(p, d, d)]
    out.sort(key=lambda m: next(iter(m.terms)), reverse=True)
    return out


def theta_quotient_basis(p: int, d: int) -> list:
    """Canonical representatives of the dx-quotient at super degree p.

    For p >= 2 these are the monomials whose two leading indices are
    adjacent: th^(i+1) th^(i) th^(i3) ... with the tail strictly
    descending below i; for p = 1 only the underived theta survives, in
    degree zero.
    """
    if p == 0:
        return [DiffPoly.one()] if d == 0 else []
    if p == 1:
        return [theta_monomial((0,))] if d == 0 else []
    out = []
    for i2 in range((d - 1) // 2, -1, -1):
        rest_deg = d - 1 - 2 * i2
        if rest_deg < 0:
            continue
        for tail in _descending_tuples(p - 2, rest_deg, i2 - 1):
            out.append(theta_monomial((i2 + 1, i2) + tail))
    out.sort(key=lambda m: next(iter(m.terms)), reverse=True)
    return out


def _theta_key(key):
    """Lexicographic sort key of a constant-theta monomial."""
    return tuple(s for s, _ in key[2])


def reduce_mod_dx(t: DiffPoly) -> DiffPoly:
    """Canonical representative modulo the image of dx.

    Standard monomials whose leading index exceeds the second by at
    least two (or any derived theta at super degree one) are tops of
    dx-images; they are eliminated by a descending lexicographic sweep,
    leaving a combination of quotient-basis monomials.
    """
    if not is_theta_poly(t):
        raise ValueError("reduce_mod_dx expects a constant-theta element")
    cur = dict(t.terms)

    def top_preimage(ths):
        ks = tuple(s for s, _ in ths)
        if len(ks) == 1:
            if ks[0] >= 1:
                return (ks[0] - 1,)
        elif len(ks) >= 2 and ks[0] >= ks[1] + 2:
            return (ks[0] - 1,) + ks[1:]
        return None

    while True:
        best = None
        for key in cur:
            pre = top_preimage(key[2])
            if pre is None:
                continue
            lex = _theta_key(key)
            if best is None or lex > best[0]:
                best = (lex, key, pre)
        if best is None:
            return DiffPoly(cur)
        _, key, pre = best
        coeff = cur[key]
        image = theta_monomial(pre).dx()
        for k2, c2 in image.terms.items():
            _accumulate(cur, k2, -coeff * c2)


# -- evolutionary vector fields and the coboundary columns ---------------


def evolutionary_field(g: DiffPoly) -> Functional:
    """The vector field with characteristic g, as the functional of g*th."""
    from .algebra import mul

    return Functional(mul(g, DiffPoly.theta(0, 0)))


def _ad_p1_column(m: DiffPoly) -> DiffPoly:
    """theta-derivative coordinates of ad_p1 of the evolutionary field m*th."""
    from .algebra import mul

    return var_theta(delta(mul(m, DiffPoly.theta(0, 0))))


@dataclass
class H2Decomposition:
    """Exact decomposition of an adjoint-closed bivector component."""

    degree: int
    c: Optional[object]  # rational, present only in odd degree
    chi: DiffPoly  # reduced class representative at super degree 3
    X: Functional  # super-degree-one generator with the coboundary part

    def parts(self):
        out = []
        if self.c is not None and self.c != 0:
            out.append(pst(self.degree, 0).scale(self.c))
        if not self.chi.is_zero():
            out.append(Functional(bockstein_split(self.chi)))
        return out


def decompose_h2(P_d: Functional, d: int) -> H2Decomposition:
    """Solve  P_d = c*p_d [d odd] + B(chi) + ad_p1(X)  exactly.

    Weight blocks are independent: the constant sits at weight zero, the
    split classes at weight one, and the generator unknown for weight w
    at weight w+1.  Raises NotACocycle when the input is not closed and
    InternalInconsistency when a block is infeasible (which the
    cohomology computation excludes for genuine cocycles).
    """
    p1 = standard_leading_term()
    if not P_d.density.is_zero() and P_d.super_degree() != 2:
        raise ValueError("decompose_h2 expects a bivector component")
    if not schouten(p1, P_d).is_zero():
        raise NotACocycle(d)

    c = QQ(0) if d % 2 == 1 else None
    chi = DiffPoly.zero()
    x_density = DiffPoly.zero()

    quot3 = theta_quotient_basis(3, d)
    for w, block in P_d.density.weight_components().items():
        rhs = var_theta(block)
        columns = []
        tags = []
        if w == 0 and d % 2 == 1:
            columns.append(var_theta(pst(d, 0).density))
            tags.append(("c", None))
        if w == 1:
            for j, q in enumerate(quot3):
                columns.append(var_theta(bockstein_split(q)))
                tags.append(("chi", j))
        gen_basis = [m.as_poly() for m in enumerate_basis(Grade(d - 1, 0, w + 1))]
        for m in gen_basis:
            columns.append(_ad_p1_column(m))
            tags.append(("X", m))
        sol = solve_poly_system(columns, rhs)
        if sol is None:
            raise InternalInconsistency(
                f"no decomposition at degree {d}, weight {w}"
            )
        for coeff, (kind, payload) in zip(sol, tags):
            if coeff == 0:
                continue
            if kind == "c":
                c = coeff
            elif kind == "chi":
                chi = chi + quot3[payload].scale(coeff)
            else:
                x_density = x_density + payload.scale(coeff)

    X = evolutionary_field(x_density)
    result = H2Decomposition(d, c, chi, X)
    _assert_roundtrip(P_d, result)
    return result


def _assert_roundtrip(P_d: Functional, res: H2Decomposition) -> None:
    total = schouten(standard_leading_term(), res.X)
    for part in res.parts():
        total = total + part
    if not total == P_d:
        raise InternalInconsistency(
            f"decomposition round-trip failed at degree {res.degree}"
        )


# -- brute-force verifiers for the structural lemmas ---------------------


def _restrict(poly: DiffPoly, keys) -> DiffPoly:
    return DiffPoly({k: c for k, c in poly.terms.items() if k in keys})


def verify_square_lemma(k: int) -> bool:
    """Check that no square of a degree-k two-theta element is dx-exact.

    An element a = sum a_i th^i th^(k-i) has square supported on the
    span of products of pairs of its monomials.  Two exact passes:

    1. When that span meets the image of dx only in zero, any exact
       square is already zero.

    2. Otherwise split the preimage space by the outer index sum: the
       half with sum >= k cannot reach the span of monomials seen by
       the other half, and per candidate leading pair (s, t) the only
       preimage monomials that touch the block with middle pair
       (t, k-t) form a two-banded chain whose image never produces the
       isolated product monomial.  Infeasibility of every chain system
       rules out squares with two or more nonzero coefficients.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    from .algebra import mul

    support = list(range(k // 2 + 1, k + 1))  # i > k - i >= 0
    if len(support) < 2:
        return True
    pair = {i: theta_monomial((i, k - i)) for i in support}
    prods = []
    for a in range(len(support)):
        for b in range(a + 1, len(support)):
            prod = mul(pair[support[b]], pair[support[a]])
            if not prod.is_zero():
                prods.append(prod)
    if not prods:
        return True
    dx_cols = [b.dx() for b in theta_basis(4, 2 * k - 1)]
    r_dx = poly_rank(dx_cols)
    if r_dx + poly_rank(prods) == poly_rank(dx_cols + prods):
        return True

    # pass 2: blockwise chain analysis
    lower_half, upper_half = [], []
    for b in theta_basis(4, 2 * k - 1):
        ks = _theta_key(next(iter(b.terms)))
        (lower_half if ks[0] + ks[3] <= k - 1 else upper_half).append(b)
    seen = set()
    for v in lower_half:
        seen.update(v.dx().terms)
    upper_images = [v.dx() for v in upper_half]
    if upper_images and seen:
        units = [DiffPoly({key: QQ(1)}) for key in sorted(seen)]
        leak = (
            poly_rank(upper_images)
            + len(units)
            - poly_rank(upper_images + units)
        )
        if leak:
            raise InternalInconsistency(
                f"outer-sum split leaks at k={k}; the check cannot decide"
            )
    for b in range(len(support)):
        for a in range(b):
            t, s = support[a], support[b]
            target = mul(pair[s], pair[t])
            if target.is_zero():
                continue
            block_keys = {
                next(iter(theta_monomial((i, t, k - t, k - i)).terms))
                for i in range(t + 1, k + 1)
            }
            chain = []
            for l in range(t + 1, k):
                idx = (l, t, k - t, k - l - 1)
                if len(set(idx)) < 4:
                    continue
                mono = theta_monomial(tuple(sorted(idx, reverse=True)))
                chain.append(_restrict(mono.dx(), block_keys))
            rhs = _restrict(target, block_keys)
            if solve_poly_system(chain, rhs) is not None:
                raise InternalInconsistency(
                    f"chain system feasible at k={k}, pair ({s},{t}); "
                    "the check cannot decide"
                )
    return True


def verify_varder_lemma(d: int) -> bool:
    """No three-theta element has a single pair monomial as its
    theta variational derivative."""
    if d < 1:
        raise ValueError("d must be >= 1")
    cols = [var_theta(b) for b in theta_basis(3, d)]
    for i in range(0, (d - 1) // 2 + 1):
        target = theta_monomial((d - i, i))
        if not cols:
            continue
        if solve_poly_system(cols, target) is not None:
            return False
    return True


def verify_bockstein_injective(d: int) -> bool:
    """The split classes stay independent modulo adjoint coboundaries."""
    quot = theta_quotient_basis(3, d)
    if not quot:
        return True
    b_cols = [var_theta(bockstein_split(q)) for q in quot]
    gen_cols = [
        _ad_p1_column(m.as_poly()) for m in enumerate_basis(Grade(d - 1, 0, 2))
    ]
    return poly_rank(gen_cols + b_cols) == poly_rank(gen_cols) + len(quot)


def _poly_gcd(a, b):
    """gcd of univariate rational coefficient lists (ascending)."""

    def strip(p):
        while p and p[-1] == 0:
            p.pop()
        return p

    a, b = strip(list(a)), strip(list(b))
    while b:
        # a mod b
        while len(a) >= len(b) and a:
            f = a[-1] / b[-1]
            shift = len(a) - len(b)
            for i, coeff in enumerate(b):
                a[i + shift] -= f * coeff
            strip(a)
        a, b = b, a
    return a


def verify_nontriv_lemma(d: int) -> bool:
    """Nonzero reduced classes have self-bracket obstructions.

    For every nonzero chi in the span of the quotient basis at super
    degree three, the self-bracket of its split image must be nonzero.
    The quadratic form in the basis coefficients is tested for common
    real zeros coordinate by coordinate.
    """
    quot = theta_quotient_basis(3, d)
    if not quot:
        return True
    imgs = [Functional(bockstein_split(q)) for q in quot]
    n = len(imgs)
    brk = {}
    for i in range(n):
        for j in range(i, n):
            F = schouten(imgs[i], imgs[j])
            # coordinates where a super-3 functional vanishes iff both
            # variational derivatives do
            from .variational import var_u

            brk[(i, j)] = (var_theta(F.density), var_u(F.density))
    if n == 1:
        v = brk[(0, 0)]
        return not (v[0].is_zero() and v[1].is_zero())
    if n == 2:
        f11, f12, f22 = brk[(0, 0)], brk[(0, 1)], brk[(1, 1)]
        # a=1, b=0 corner
        if f11[0].is_zero() and f11[1].is_zero():
            return False
        # b != 0: common real roots of v11 t^2 + 2 v12 t + v22 per coordinate
        keys = set()
        polys = []
        for slot in (0, 1):
            for key in (
                set(f11[slot].terms) | set(f12[slot].terms) | set(f22[slot].terms)
            ):
                polys.append(
                    [
                        f22[slot].coefficient(key),
                        2 * f12[slot].coefficient(key),
                        f11[slot].coefficient(key),
                    ]
                )
        g = []
        for p in polys:
            g = _poly_gcd(g, p) if g else [c for c in p]
        if not g or len(g) == 1:
            return True  # no common root at all
        if len(g) == 2:
            return False  # a common rational root exists
        disc = g[1] * g[1] - 4 * g[2] * g[0]
        return disc < 0
    raise InternalInconsistency(
        f"nontriviality check supports quotient dimension <= 2, got {n}"
    )
