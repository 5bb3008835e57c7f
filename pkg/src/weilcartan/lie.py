"""Lie algebra data given by structure constants.

Indices are 0-based in the Python API.  ``C[i][j][k]`` is the coefficient of
``e_i`` in ``[e_j, e_k]``.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from . import linalg


@dataclass(frozen=True)
class LieViolation:
    kind: str  # "antisymmetry", "jacobi" or "ideal"
    indices: Tuple[int, ...]
    residual: Fraction

    def describe(self, one_based: bool = True) -> str:
        idx = tuple(i + 1 for i in self.indices) if one_based else self.indices
        return f"{self.kind} violation at {idx}: residual {self.residual}"


@dataclass(frozen=True)
class LieAlgebraData:
    dim: int
    C: Tuple[Tuple[Tuple[Fraction, ...], ...], ...]
    basis_names: Tuple[str, ...] = field(default=())

    def __post_init__(self):
        n = self.dim
        if n < 0:
            raise ValueError("dimension must be non-negative")
        C = tuple(tuple(tuple(Fraction(v) for v in row) for row in plane) for plane in self.C)
        if len(C) != n or any(len(p) != n or any(len(r) != n for r in p) for p in C):
            raise ValueError(f"structure constants must have shape ({n}, {n}, {n})")
        object.__setattr__(self, "C", C)
        names = tuple(self.basis_names) or tuple(f"e{i + 1}" for i in range(n))
        if len(names) != n:
            raise ValueError("basis_names length does not match dim")
        object.__setattr__(self, "basis_names", names)

    @classmethod
    def from_brackets(cls, dim: int, brackets, names: Sequence[str] = (), antisymmetrize: bool = True):
        """Build from sparse triples ``(i, j, k, value)`` meaning ``C^i_{jk} = value``.

        With ``antisymmetrize`` the entry ``C^i_{kj} = -value`` is filled in too.
        """
        C = [[[Fraction(0)] * dim for _ in range(dim)] for _ in range(dim)]
        for i, j, k, v in brackets:
            for idx in (i, j, k):
                if not 0 <= idx < dim:
                    raise ValueError(f"index {idx} out of range for dimension {dim}")
            v = Fraction(v)
            C[i][j][k] = v
            if antisymmetrize:
                if j == k and v:
                    raise ValueError("diagonal bracket entries must vanish")
                C[i][k][j] = -v
        return cls(dim, C, tuple(names))

    def bracket(self, x: Sequence, y: Sequence) -> List[Fraction]:
        n = self.dim
        return [sum((self.C[i][j][k] * x[j] * y[k] for j in range(n) for k in range(n) if x[j] and y[k]),
                    Fraction(0)) for i in range(n)]

    def is_abelian(self) -> bool:
        return all(v == 0 for p in self.C for r in p for v in r)

    def nonzero_constants(self):
        n = self.dim
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    if self.C[i][j][k]:
                        yield i, j, k, self.C[i][j][k]


def validate_lie(L: LieAlgebraData) -> Optional[LieViolation]:
    """None if antisymmetry and Jacobi hold, else the first violation found."""
    n, C = L.dim, L.C
    for i in range(n):
        for j in range(n):
            for k in range(j, n):
                r = C[i][j][k] + C[i][k][j]
                if r:
                    return LieViolation("antisymmetry", (i, j, k), r)
    for i in range(n):
        for j in range(n):
            for k in range(n):
                for l in range(n):
                    r = sum((C[m][j][k] * C[i][m][l] + C[m][k][l] * C[i][m][j] + C[m][l][j] * C[i][m][k]
                             for m in range(n)), Fraction(0))
                    if r:
                        return LieViolation("jacobi", (i, j, k, l), r)
    return None


@dataclass(frozen=True)
class IdealSpec:
    indices: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "indices", tuple(sorted(set(self.indices))))

    def complement(self, dim: int) -> Tuple[int, ...]:
        return tuple(i for i in range(dim) if i not in self.indices)


def validate_ideal(L: LieAlgebraData, S: IdealSpec) -> Optional[LieViolation]:
    """None if span{e_i : i in S} is an ideal; else a witness ``(a, j, i)`` with ``C^a_{ji} != 0``."""
    for i in S.indices:
        if not 0 <= i < L.dim:
            raise IndexError(f"ideal index {i} out of range for dimension {L.dim}")
    comp = S.complement(L.dim)
    for a in comp:
        for j in range(L.dim):
            for i in S.indices:
                if L.C[a][j][i]:
                    return LieViolation("ideal", (a, j, i), L.C[a][j][i])
    return None


def quotient_constants(L: LieAlgebraData, S: IdealSpec) -> LieAlgebraData:
    """Structure constants of g/n in the basis induced by the complement indices."""
    w = validate_ideal(L, S)
    if w is not None:
        raise ValueError(w.describe())
    comp = S.complement(L.dim)
    C = [[[L.C[a][b][c] for c in comp] for b in comp] for a in comp]
    return LieAlgebraData(len(comp), C, tuple(L.basis_names[a] for a in comp))


def coadjoint_action(L: LieAlgebraData) -> List[List[List[Fraction]]]:
    """Matrices ``M_k`` of ``L_k`` on the dual basis: ``L_k theta^j = sum_m M_k[m][j] theta^m``.

    Column ``j`` holds the image of ``theta^j``, so ``M_k[m][j] = -C^j_{km}``.
    """
    n = L.dim
    return [[[-L.C[j][k][m] for j in range(n)] for m in range(n)] for k in range(n)]


def adjoint_action(L: LieAlgebraData) -> List[List[List[Fraction]]]:
    n = L.dim
    return [[[L.C[i][k][j] for j in range(n)] for i in range(n)] for k in range(n)]


# -- stock algebras ---------------------------------------------------------

def abelian(n: int) -> LieAlgebraData:
    return LieAlgebraData(n, [[[0] * n for _ in range(n)] for _ in range(n)])


def u1() -> LieAlgebraData:
    return abelian(1)


def su2() -> LieAlgebraData:
    """``[e_j, e_k] = eps_{ijk} e_i``."""
    br = []
    for i, j, k in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
        br.append((i, j, k, 1))
    return LieAlgebraData.from_brackets(3, br)


def heisenberg() -> LieAlgebraData:
    return LieAlgebraData.from_brackets(3, [(2, 0, 1, 1)])


def sl2() -> LieAlgebraData:
    """Basis (h, e, f): [h,e]=2e, [h,f]=-2f, [e,f]=h."""
    return LieAlgebraData.from_brackets(3, [(1, 0, 1, 2), (2, 0, 2, -2), (0, 1, 2, 1)], ("h", "e", "f"))


def solvable_r3(lam) -> LieAlgebraData:
    """[e1,e2]=e2, [e1,e3]=lam*e3."""
    return LieAlgebraData.from_brackets(3, [(1, 0, 1, 1), (2, 0, 2, lam)])


def _inverse(P: List[List[Fraction]]) -> Optional[List[List[Fraction]]]:
    n = len(P)
    rows = [{**{j: P[i][j] for j in range(n) if P[i][j]}, n + i: Fraction(1)} for i in range(n)]
    piv = linalg.rref(rows)
    if len(piv) < n or any(col >= n for col, _ in piv):
        return None
    inv = [[Fraction(0)] * n for _ in range(n)]
    for col, row in piv:
        for j, v in row.items():
            if j >= n:
                inv[col][j - n] = v
    return inv


def change_basis(L: LieAlgebraData, P: Sequence[Sequence]) -> LieAlgebraData:
    """Constants in the basis ``f_j = sum_m P[m][j] e_m``."""
    n = L.dim
    P = [[Fraction(v) for v in row] for row in P]
    Pinv = _inverse(P)
    if Pinv is None:
        raise ValueError("change of basis matrix is singular")
    C = [[[Fraction(0)] * n for _ in range(n)] for _ in range(n)]
    for j in range(n):
        for k in range(j + 1, n):
            br = L.bracket([P[m][j] for m in range(n)], [P[m][k] for m in range(n)])
            for r in range(n):
                v = sum((Pinv[r][i] * br[i] for i in range(n)), Fraction(0))
                C[r][j][k] = v
                C[r][k][j] = -v
    return LieAlgebraData(n, C)


def random_lie_algebra(seed: int) -> LieAlgebraData:
    """A valid 3-dimensional Lie algebra: a stock algebra in a random rational basis."""
    rng = random.Random(seed)
    base = [su2(), sl2(), heisenberg(), solvable_r3(Fraction(rng.randint(-3, 3), rng.randint(1, 3)))]
    L = base[rng.randrange(len(base))]
    while True:
        P = [[rng.randint(-2, 2) for _ in range(3)] for _ in range(3)]
        if _inverse([[Fraction(v) for v in r] for r in P]) is not None:
            return change_basis(L, P)
