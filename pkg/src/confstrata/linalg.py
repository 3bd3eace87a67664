"""Exact sparse linear algebra over the rationals.

Everything here is sized for the small systems this package produces
(hundreds of rows/columns); no floating point anywhere.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd


class Echelon:
    """Incremental row echelon form with sparse rows (dict column -> coeff).

    Rows are reduced against previously inserted pivots; pivot rows are
    normalized to leading coefficient 1.
    """

    def __init__(self):
        self.pivots: dict[int, dict[int, Fraction]] = {}

    def reduce(self, row):
        """Reduce a sparse row; return (lead_column, normalized_row) or (None, {})."""
        row = {c: Fraction(v) for c, v in row.items() if v}
        while row:
            lead = min(row)
            pivot = self.pivots.get(lead)
            if pivot is None:
                inv = Fraction(1, 1) / row[lead]
                return lead, {c: v * inv for c, v in row.items()}
            factor = row[lead]
            for c, v in pivot.items():
                new = row.get(c, Fraction(0)) - factor * v
                if new:
                    row[c] = new
                else:
                    row.pop(c, None)
        return None, {}

    def add(self, row) -> bool:
        """Insert a row; True iff it increased the rank."""
        lead, reduced = self.reduce(row)
        if lead is None:
            return False
        self.pivots[lead] = reduced
        return True

    def back_substitute(self) -> dict[int, dict[int, Fraction]]:
        """Rewrite every pivot row so it references no other pivot column.

        After this, pivots[lead] = {lead: 1, free columns...}, i.e. each pivot
        column is expressed purely in terms of non-pivot columns.
        """
        # A row's non-lead columns are all > lead, so processing leads in
        # decreasing order means substituted rows are already resolved.
        for lead in sorted(self.pivots, reverse=True):
            row = self.pivots[lead]
            for c in sorted(k for k in row if k != lead and k in self.pivots):
                factor = row.pop(c)
                for c2, v2 in self.pivots[c].items():
                    if c2 == c:
                        continue
                    new = row.get(c2, Fraction(0)) - factor * v2
                    if new:
                        row[c2] = new
                    else:
                        row.pop(c2, None)
        return self.pivots

    @property
    def rank(self) -> int:
        return len(self.pivots)


def rank(rows) -> int:
    ech = Echelon()
    for row in rows:
        ech.add(row)
    return ech.rank


def nullspace(vectors, dim):
    """Basis of {u in Q^dim : sum_i u[i]*v[i] = 0 for every v in vectors}.

    Input vectors are dense sequences; output is a list of dense Fraction
    vectors in reduced canonical form (pivot pattern of the RREF).
    """
    ech = Echelon()
    for v in vectors:
        ech.add({i: Fraction(x) for i, x in enumerate(v) if x})
    pivots = ech.back_substitute()
    pivot_cols = set(pivots)
    free_cols = [c for c in range(dim) if c not in pivot_cols]
    basis = []
    for f in free_cols:
        u = [Fraction(0)] * dim
        u[f] = Fraction(1)
        for lead, row in pivots.items():
            coef = row.get(f)
            if coef:
                u[lead] = -coef
        basis.append(u)
    return basis


def integerize(vector):
    """Scale a rational vector to the smallest integer vector, first nonzero > 0."""
    denoms = [v.denominator for v in vector if v]
    if not denoms:
        return [0] * len(vector)
    mult = 1
    for d in denoms:
        mult = mult * d // gcd(mult, d)
    ints = [int(v * mult) for v in vector]
    g = 0
    for v in ints:
        g = gcd(g, abs(v))
    if g > 1:
        ints = [v // g for v in ints]
    first = next(v for v in ints if v)
    if first < 0:
        ints = [-v for v in ints]
    return ints
