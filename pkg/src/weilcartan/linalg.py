"""Sparse exact linear algebra over Q.

Vectors are dicts ``{column: value}`` with nonzero entries only.  Ranks use
fraction-free integer elimination; kernels and span tests use reduced row
echelon form over ``Fraction``.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

SparseVec = Dict[int, Fraction]


def dense_to_sparse_rows(matrix: Sequence[Sequence]) -> List[SparseVec]:
    return [{j: Fraction(v) for j, v in enumerate(row) if v} for row in matrix]


def columns_to_rows(columns: Sequence[SparseVec], nrows: int) -> List[SparseVec]:
    rows: List[SparseVec] = [dict() for _ in range(nrows)]
    for j, col in enumerate(columns):
        for i, v in col.items():
            rows[i][j] = v
    return rows


def _integer_row(row: SparseVec) -> Dict[int, int]:
    den = 1
    for v in row.values():
        v = Fraction(v)
        den = den * v.denominator // gcd(den, v.denominator)
    out = {j: int(Fraction(v) * den) for j, v in row.items() if v}
    g = 0
    for v in out.values():
        g = gcd(g, v)
    if g > 1:
        out = {j: v // g for j, v in out.items()}
    return out


def rank(rows: Iterable[SparseVec]) -> int:
    """Rank of the matrix whose rows are given, by fraction-free elimination."""
    pivots: Dict[int, Dict[int, int]] = {}
    r = 0
    for row in rows:
        cur = _integer_row(row)
        while cur:
            col = min(cur)
            piv = pivots.get(col)
            if piv is None:
                pivots[col] = cur
                r += 1
                break
            a, b = piv[col], cur[col]
            # cur <- a*cur - b*piv kills column col, entries stay integral
            new = {j: a * v for j, v in cur.items()}
            for j, v in piv.items():
                w = new.get(j, 0) - b * v
                if w:
                    new[j] = w
                else:
                    new.pop(j, None)
            g = 0
            for v in new.values():
                g = gcd(g, v)
            cur = {j: v // g for j, v in new.items()} if g > 1 else new
    return r


class Echelon:
    """Incrementally built reduced row echelon basis of a row space."""

    def __init__(self):
        self.pivot_rows: Dict[int, SparseVec] = {}

    def __len__(self):
        return len(self.pivot_rows)

    def reduce(self, vec: SparseVec) -> SparseVec:
        cur = {j: Fraction(v) for j, v in vec.items() if v}
        # pivot rows are fully reduced, so one pass over the pivot columns suffices
        for col in [j for j in cur if j in self.pivot_rows]:
            c = cur[col]
            for j, v in self.pivot_rows[col].items():
                w = cur.get(j, 0) - c * v
                if w:
                    cur[j] = w
                else:
                    cur.pop(j, None)
        return cur

    def add(self, vec: SparseVec) -> bool:
        """Insert ``vec``; return True if it enlarged the span."""
        cur = self.reduce(vec)
        if not cur:
            return False
        col = min(cur)
        c = cur[col]
        cur = {j: v / c for j, v in cur.items()}
        # keep the basis fully reduced
        for other in self.pivot_rows.values():
            f = other.get(col)
            if f:
                for j, v in cur.items():
                    w = other.get(j, 0) - f * v
                    if w:
                        other[j] = w
                    else:
                        other.pop(j, None)
        self.pivot_rows[col] = cur
        return True

    def contains(self, vec: SparseVec) -> bool:
        return not self.reduce(vec)


def rref(rows: Iterable[SparseVec]) -> List[Tuple[int, SparseVec]]:
    """Reduced row echelon form as a list of ``(pivot_column, row)`` sorted by pivot."""
    ech = Echelon()
    for row in rows:
        ech.add(row)
    return sorted(ech.pivot_rows.items())


def nullspace(rows: Iterable[SparseVec], ncols: int) -> List[SparseVec]:
    """Basis of ``{x : A x = 0}``; one vector per free column, in column order."""
    pivots = dict(rref(rows))
    basis = []
    for free in range(ncols):
        if free in pivots:
            continue
        vec: SparseVec = {free: Fraction(1)}
        for col, row in pivots.items():
            v = row.get(free)
            if v:
                vec[col] = -v
        basis.append(vec)
    return basis


def in_span(basis: Iterable[SparseVec], vec: SparseVec) -> bool:
    ech = Echelon()
    for b in basis:
        ech.add(b)
    return ech.contains(vec)


def span_equal(a: Sequence[SparseVec], b: Sequence[SparseVec]) -> bool:
    ea, eb = Echelon(), Echelon()
    for v in a:
        ea.add(v)
    for v in b:
        eb.add(v)
    return len(ea) == len(eb) and all(ea.contains(v) for v in b)


def solve(basis: Sequence[SparseVec], vec: SparseVec) -> Optional[List[Fraction]]:
    """Coefficients ``c`` with ``sum c_i basis_i = vec``, or None if not in the span."""
    # augment each basis vector with a tag column recording its index
    n = len(basis)
    shift = 1 + max([max(b, default=-1) for b in basis] + [max(vec, default=-1)])
    ech = Echelon()
    for i, b in enumerate(basis):
        row = dict(b)
        row[shift + i] = Fraction(1)
        ech.add(row)
    res = ech.reduce(vec)
    if any(j < shift for j in res):
        return None
    # vec - sum c_i b_i reduces to zero, so the tag part of the residue is -c
    coeffs = [Fraction(0)] * n
    for j, v in res.items():
        coeffs[j - shift] = -v
    return coeffs
