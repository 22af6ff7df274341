"""Exact arithmetic in the super-commutative differential algebra.

Elements are polynomials in u, its mixed derivatives u^(s,t) with
(s,t) != (0,0), and anticommuting generators th^(s,t) (any (s,t)),
with exact rational coefficients.

A monomial is keyed by

    (upow, ufactors, thetas)

where upow is the exponent of the underived u, ufactors is an ascending
tuple of ((s,t), exponent) pairs with (s,t) != (0,0), and thetas is a
strictly descending tuple of theta indices.  Reordering theta factors
into the canonical descending order flips the coefficient by the Koszul
sign; a repeated theta index kills the monomial.

Three gradings are tracked: the standard degree d (total derivative
count, thetas included), the super degree p (number of theta factors),
and the u-weight w (upow plus the u-derivative factors counted with
multiplicity).  Total derivatives raise d by one and preserve p and w.
"""

from __future__ import annotations

from typing import Iterator, NamedTuple, Optional

from .rationals import QQ, ZERO, rat


class Grade(NamedTuple):
    d: int  # standard degree
    p: int  # super degree
    w: int  # u-weight

    def __add__(self, other):
        return Grade(self.d + other.d, self.p + other.p, self.w + other.w)


class Monomial(NamedTuple):
    coeff: object
    upow: int
    ufactors: tuple
    thetafactors: tuple

    @property
    def key(self):
        return (self.upow, self.ufactors, self.thetafactors)

    def grade(self) -> Grade:
        return _key_grade(self.key)

    def as_poly(self) -> "DiffPoly":
        return DiffPoly({self.key: QQ(self.coeff)})


def _key_grade(key) -> Grade:
    upow, ufs, ths = key
    d = sum((s + t) * e for (s, t), e in ufs) + sum(s + t for s, t in ths)
    w = upow + sum(e for _, e in ufs)
    return Grade(d, len(ths), w)


def _theta_insert(th, ths):
    """Multiply th from the left into a canonical tuple.

    Returns (sign, tuple) or None when the index is already present.
    """
    for i, existing in enumerate(ths):
        if th > existing:
            return (-1) ** i, ths[:i] + (th,) + ths[i:]
        if th == existing:
            return None
    return (-1) ** len(ths), ths + (th,)


def _theta_merge(ths1, ths2):
    """Concatenate two canonical tuples and resort, tracking the sign."""
    if not ths1:
        return 1, ths2
    if not ths2:
        return 1, ths1
    out = []
    sign = 1
    i = j = 0
    n1 = len(ths1)
    while i < n1 and j < len(ths2):
        a, b = ths1[i], ths2[j]
        if a > b:
            out.append(a)
            i += 1
        elif b > a:
            # b jumps over the remaining factors of ths1
            if (n1 - i) & 1:
                sign = -sign
            out.append(b)
            j += 1
        else:
            return None
    out.extend(ths1[i:])
    out.extend(ths2[j:])
    return sign, tuple(out)


def _ufactors_mul(ufs1, ufs2):
    if not ufs1:
        return ufs2
    if not ufs2:
        return ufs1
    acc = dict(ufs1)
    for idx, e in ufs2:
        acc[idx] = acc.get(idx, 0) + e
    return tuple(sorted(acc.items()))


def _ufactor_set(ufs, idx, e):
    """Return ufs with the exponent of idx set to e (dropped when 0)."""
    acc = dict(ufs)
    if e:
        acc[idx] = e
    else:
        del acc[idx]
    return tuple(sorted(acc.items()))


class DiffPoly:
    """Canonical sum of monomials; immutable after construction."""

    __slots__ = ("_terms",)

    def __init__(self, terms=None):
        self._terms = terms if terms is not None else {}

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls) -> "DiffPoly":
        return cls({})

    @classmethod
    def one(cls) -> "DiffPoly":
        return cls({(0, (), ()): QQ(1)})

    @classmethod
    def rational(cls, p, q=1) -> "DiffPoly":
        c = rat(p, q)
        return cls({(0, (), ()): c}) if c != 0 else cls({})

    @classmethod
    def u(cls, s: int = 0, t: int = 0) -> "DiffPoly":
        if s == 0 and t == 0:
            return cls({(1, (), ()): QQ(1)})
        return cls({(0, (((s, t), 1),), ()): QQ(1)})

    @classmethod
    def theta(cls, s: int = 0, t: int = 0) -> "DiffPoly":
        return cls({(0, (), ((s, t),)): QQ(1)})

    @classmethod
    def from_monomials(cls, monomials) -> "DiffPoly":
        acc = {}
        for m in monomials:
            _accumulate(acc, m.key, QQ(m.coeff))
        return cls(acc)

    # -- inspection ----------------------------------------------------

    @property
    def terms(self) -> dict:
        return self._terms

    def is_zero(self) -> bool:
        return not self._terms

    def __len__(self) -> int:
        return len(self._terms)

    def monomials(self) -> Iterator[Monomial]:
        for key in sorted(self._terms):
            upow, ufs, ths = key
            yield Monomial(self._terms[key], upow, ufs, ths)

    def coefficient(self, key):
        return self._terms.get(key, ZERO)

    def constant_term(self):
        return self._terms.get((0, (), ()), ZERO)

    # -- ring structure ------------------------------------------------

    def __add__(self, other: "DiffPoly") -> "DiffPoly":
        if not isinstance(other, DiffPoly):
            return NotImplemented
        small, big = (self._terms, other._terms)
        if len(small) > len(big):
            small, big = big, small
        acc = dict(big)
        for key, c in small.items():
            _accumulate(acc, key, c)
        return DiffPoly(acc)

    def __neg__(self) -> "DiffPoly":
        return DiffPoly({k: -c for k, c in self._terms.items()})

    def __sub__(self, other: "DiffPoly") -> "DiffPoly":
        if not isinstance(other, DiffPoly):
            return NotImplemented
        acc = dict(self._terms)
        for key, c in other._terms.items():
            _accumulate(acc, key, -c)
        return DiffPoly(acc)

    def scale(self, c) -> "DiffPoly":
        c = QQ(c)
        if c == 0:
            return DiffPoly({})
        return DiffPoly({k: c * v for k, v in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, DiffPoly):
            return mul(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, n: int) -> "DiffPoly":
        if n < 0:
            raise ValueError("negative powers are not defined")
        out = DiffPoly.one()
        for _ in range(n):
            out = mul(out, self)
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, DiffPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def __repr__(self):
        from .printer import format_poly

        return f"DiffPoly({format_poly(self)!r})"

    # -- grading --------------------------------------------------------

    def grade(self) -> Optional[Grade]:
        return grade_of(self)

    def super_degree(self) -> Optional[int]:
        """Common super degree of all terms, or None when mixed."""
        ps = {len(ths) for (_, _, ths) in self._terms}
        if len(ps) == 1:
            return ps.pop()
        return None if ps else 0

    def standard_degree(self) -> Optional[int]:
        """Common standard degree of all terms, or None when mixed."""
        ds = {_key_grade(k).d for k in self._terms}
        if len(ds) == 1:
            return ds.pop()
        return None if ds else 0

    def super_component(self, p: int) -> "DiffPoly":
        return DiffPoly(
            {k: c for k, c in self._terms.items() if len(k[2]) == p}
        )

    def weight_components(self) -> dict:
        out = {}
        for key, c in self._terms.items():
            out.setdefault(_key_grade(key).w, {})[key] = c
        return {w: DiffPoly(t) for w, t in sorted(out.items())}

    def homogeneous_component(self, grade: Grade) -> "DiffPoly":
        return DiffPoly(
            {k: c for k, c in self._terms.items() if _key_grade(k) == grade}
        )

    def is_u_free(self) -> bool:
        return all(upow == 0 and not ufs for (upow, ufs, _) in self._terms)

    def is_theta_free(self) -> bool:
        return all(not ths for (_, _, ths) in self._terms)

    # -- derivations ----------------------------------------------------

    def dx(self) -> "DiffPoly":
        return total_derivative(self, "x")

    def dy(self) -> "DiffPoly":
        return total_derivative(self, "y")


def _accumulate(acc: dict, key, c) -> None:
    prev = acc.get(key)
    if prev is None:
        acc[key] = c
    else:
        s = prev + c
        if s == 0:
            del acc[key]
        else:
            acc[key] = s


def mul(a: DiffPoly, b: DiffPoly) -> DiffPoly:
    """Super-commutative product; grades add, odd factors anticommute."""
    acc = {}
    for (up1, ufs1, ths1), c1 in a._terms.items():
        for (up2, ufs2, ths2), c2 in b._terms.items():
            merged = _theta_merge(ths1, ths2)
            if merged is None:
                continue
            sign, ths = merged
            key = (up1 + up2, _ufactors_mul(ufs1, ufs2), ths)
            _accumulate(acc, key, sign * c1 * c2)
    return DiffPoly(acc)


def total_derivative(a: DiffPoly, axis: str) -> DiffPoly:
    """Total x- or y-derivative: even Leibniz derivation of degree +1."""
    if axis == "x":
        ds, dt = 1, 0
    elif axis == "y":
        ds, dt = 0, 1
    else:
        raise ValueError(f"axis must be 'x' or 'y', got {axis!r}")
    acc = {}
    for (upow, ufs, ths), c in a._terms.items():
        if upow:
            key = (upow - 1, _ufactors_mul(ufs, (((ds, dt), 1),)), ths)
            _accumulate(acc, key, c * upow)
        for (s, t), e in ufs:
            base = _ufactor_set(ufs, (s, t), e - 1)
            key = (upow, _ufactors_mul(base, (((s + ds, t + dt), 1),)), ths)
            _accumulate(acc, key, c * e)
        for i, (s, t) in enumerate(ths):
            res = _theta_insert((s + ds, t + dt), ths[:i] + ths[i + 1 :])
            if res is None:
                continue
            sign, new_ths = res
            # the factor was removed from slot i (sign (-1)^i) and the
            # raised index re-inserted from the left
            if i & 1:
                sign = -sign
            _accumulate(acc, (upow, ufs, new_ths), sign * c)
    return DiffPoly(acc)


def partial_derivative(a: DiffPoly, kind: str, s: int, t: int) -> DiffPoly:
    """Partial derivative in one variable.

    kind 'u' is the ordinary partial (with (s,t) == (0,0) meaning the
    coefficient derivative d/du); kind 'theta' is the left derivative:
    the theta factor is moved to the front with its Koszul sign, then
    removed.
    """
    acc = {}
    if kind == "u":
        if s == 0 and t == 0:
            for (upow, ufs, ths), c in a._terms.items():
                if upow:
                    _accumulate(acc, (upow - 1, ufs, ths), c * upow)
        else:
            idx = (s, t)
            for (upow, ufs, ths), c in a._terms.items():
                for (si, ti), e in ufs:
                    if (si, ti) == idx:
                        key = (upow, _ufactor_set(ufs, idx, e - 1), ths)
                        _accumulate(acc, key, c * e)
                        break
    elif kind == "theta":
        idx = (s, t)
        for (upow, ufs, ths), c in a._terms.items():
            for i, th in enumerate(ths):
                if th == idx:
                    sign = -1 if i & 1 else 1
                    key = (upow, ufs, ths[:i] + ths[i + 1 :])
                    _accumulate(acc, key, sign * c)
                    break
    else:
        raise ValueError(f"kind must be 'u' or 'theta', got {kind!r}")
    return DiffPoly(acc)


def grade_of(a: DiffPoly) -> Optional[Grade]:
    """Common grade of all terms, or None for an inhomogeneous element.

    The zero polynomial is reported as Grade(0, 0, 0).
    """
    grade = None
    for key in a._terms:
        g = _key_grade(key)
        if grade is None:
            grade = g
        elif g != grade:
            return None
    return grade if grade is not None else Grade(0, 0, 0)


# -- finite bases -------------------------------------------------------


def _derivative_multisets(degree: int, max_count: int):
    """Multisets of u-derivative indices with given total degree.

    Yields ascending ((s,t), exp) tuples with sum(exp * (s+t)) == degree
    and sum(exp) <= max_count; each multiset appears exactly once.
    """
    if degree == 0:
        yield ()
        return
    if max_count <= 0:
        return
    indices = sorted(
        (s, d - s) for d in range(1, degree + 1) for s in range(d + 1)
    )

    def rec(pos, deg_left, count_left):
        if deg_left == 0:
            yield ()
            return
        for i in range(pos, len(indices)):
            idx = indices[i]
            step = idx[0] + idx[1]
            if step > deg_left:
                continue
            emax = min(count_left, deg_left // step)
            for e in range(1, emax + 1):
                for rest in rec(i + 1, deg_left - step * e, count_left - e):
                    yield ((idx, e),) + rest

    yield from rec(0, degree, max_count)


def _theta_sets(degree: int, count: int, prev=None):
    """Strictly descending theta index tuples with given total degree.

    Descending refers to the tuple order on (s,t), which does not sort
    by degree: later indices may carry more derivatives than earlier
    ones as long as their tuple is smaller.
    """
    if count == 0:
        if degree == 0:
            yield ()
        return
    cands = sorted(
        ((s, dd - s) for dd in range(degree + 1) for s in range(dd + 1)),
        reverse=True,
    )
    for idx in cands:
        if prev is not None and idx >= prev:
            continue
        rest_deg = degree - idx[0] - idx[1]
        for rest in _theta_sets(rest_deg, count - 1, idx):
            yield (idx,) + rest


def enumerate_basis(g: Grade) -> list:
    """Complete monomial basis of the (d, p, w) component.

    Finite because d bounds every derivative order and w bounds the
    number of u factors.  Deterministic order.
    """
    d, p, w = g
    if d < 0 or p < 0 or w < 0:
        return []
    out = []
    for ths in _theta_sets_all(d, p):
        du = d - sum(s + t for s, t in ths)
        for ufs in _derivative_multisets(du, w):
            nfac = sum(e for _, e in ufs)
            upow = w - nfac
            if upow < 0:
                continue
            out.append(Monomial(QQ(1), upow, ufs, ths))
    out.sort(key=lambda m: m.key)
    return out


def _theta_sets_all(max_degree: int, count: int):
    for deg in range(max_degree + 1):
        yield from _theta_sets(deg, count)


def basis_dimension(g: Grade) -> int:
    return len(enumerate_basis(g))
