"""Sparse exact linear algebra over the rationals.

Systems are assembled with rows keyed by monomial keys and columns by
unknown indices, then reduced by deterministic leftmost-column
elimination (pivot row chosen by fewest nonzeros, index tie-break), so
repeated runs produce identical solutions.  Arithmetic is exact, there
is no tolerance anywhere.
"""

from __future__ import annotations

from collections import defaultdict

from .rationals import ZERO


class SparseSystem:
    """A x = b with sparse rational rows."""

    def __init__(self):
        self._rows = defaultdict(dict)
        self._rhs = defaultdict(lambda: ZERO)

    def add(self, row_key, col: int, coeff) -> None:
        row = self._rows[row_key]
        c = row.get(col, ZERO) + coeff
        if c == 0:
            row.pop(col, None)
        else:
            row[col] = c

    def add_rhs(self, row_key, coeff) -> None:
        c = self._rhs[row_key] + coeff
        if c == 0:
            self._rhs.pop(row_key, None)
        else:
            self._rhs[row_key] = c

    def add_poly_column(self, col: int, poly) -> None:
        for key, c in poly.terms.items():
            self.add(key, col, c)

    def add_poly_rhs(self, poly) -> None:
        for key, c in poly.terms.items():
            self.add_rhs(key, c)

    def _materialize(self):
        keys = sorted(set(self._rows) | set(self._rhs))
        rows = [dict(self._rows.get(k, ())) for k in keys]
        rhs = [self._rhs.get(k, ZERO) for k in keys]
        return rows, rhs

    def _eliminate(self, ncols: int, rows, rhs):
        colindex = defaultdict(set)
        for i, r in enumerate(rows):
            for c in r:
                colindex[c].add(i)
        used = set()
        pivot_of = {}
        for col in range(ncols):
            holders = colindex.get(col)
            if not holders:
                continue
            best = None
            for i in holders:
                if i in used or not rows[i].get(col):
                    continue
                size = (len(rows[i]), i)
                if best is None or size < best[0]:
                    best = (size, i)
            if best is None:
                continue
            piv = best[1]
            used.add(piv)
            pivot_of[col] = piv
            pr = rows[piv]
            pv = pr[col]
            if pv != 1:
                for k in pr:
                    pr[k] /= pv
                rhs[piv] /= pv
            for i in list(holders):
                if i == piv:
                    continue
                f = rows[i].get(col)
                if not f:
                    holders.discard(i)
                    continue
                r = rows[i]
                for k, v in pr.items():
                    nv = r.get(k, ZERO) - f * v
                    if nv == 0:
                        r.pop(k, None)
                    else:
                        r[k] = nv
                        colindex[k].add(i)
                rhs[i] = rhs[i] - f * rhs[piv]
            colindex[col] = {piv}
        return used, pivot_of

    def solve(self, ncols: int):
        """One exact solution with free unknowns set to zero, or None.

        After the full sweep every non-pivot row is identically zero on
        the coefficient side, so feasibility is just their rhs values.
        """
        rows, rhs = self._materialize()
        used, pivot_of = self._eliminate(ncols, rows, rhs)
        for i, r in enumerate(rows):
            if i not in used and rhs[i] != 0:
                return None
        sol = [ZERO] * ncols
        for col, piv in pivot_of.items():
            sol[col] = rhs[piv]
        return sol

    def rank(self, ncols: int) -> int:
        rows, rhs = self._materialize()
        used, pivot_of = self._eliminate(ncols, rows, rhs)
        return len(pivot_of)


def solve_poly_system(columns, rhs):
    """Express rhs as a rational combination of the given polynomials.

    Returns the coefficient list or None when rhs is outside the span.
    """
    system = SparseSystem()
    for j, col in enumerate(columns):
        system.add_poly_column(j, col)
    system.add_poly_rhs(rhs)
    return system.solve(len(columns))


def poly_rank(columns) -> int:
    system = SparseSystem()
    for j, col in enumerate(columns):
        system.add_poly_column(j, col)
    return system.rank(len(columns))
