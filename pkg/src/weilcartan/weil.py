"""The Weil algebra W_g = S g* (x) Lambda g* with d_W, L and iota."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence

from .graded_algebra import Element, GradedAlgebra, render
from .lie import LieAlgebraData, validate_lie
from .operation import OperationSpec, Violation, cohomology_dims, full_complex
from .operators import Derivation, algebra_hom

HALF = Fraction(1, 2)


@dataclass(eq=False)
class WeilAlgebra:
    operation: OperationSpec
    theta: List[Element]
    omega: List[Element]

    @property
    def algebra(self) -> GradedAlgebra:
        return self.operation.algebra

    @property
    def lie(self) -> LieAlgebraData:
        return self.operation.lie

    def augmentation(self, w: Element) -> Element:
        return augmentation(self, w)


def weil_names(n: int, theta_prefix: str = "th", omega_prefix: str = "Om"):
    return [f"{theta_prefix}{i + 1}" for i in range(n)], [f"{omega_prefix}{i + 1}" for i in range(n)]


def build_weil(L: LieAlgebraData, theta_names: Optional[Sequence[str]] = None,
               omega_names: Optional[Sequence[str]] = None) -> WeilAlgebra:
    """Generators theta^i (degree 1) then Omega^i (degree 2), in Lie basis order.

    d_W theta^i = -1/2 C^i_jk theta^j theta^k + Omega^i,
    d_W Omega^i = -C^i_jk theta^j Omega^k.
    """
    w = validate_lie(L)
    if w is not None:
        raise ValueError(w.describe())
    n, C = L.dim, L.C
    tn, on = weil_names(n)
    tn = list(theta_names or tn)
    on = list(omega_names or on)
    A = GradedAlgebra([(nm, 1) for nm in tn] + [(nm, 2) for nm in on])
    th = A.gens()[:n]
    om = A.gens()[n:]
    zero = A.zero()

    d_imgs = []
    for i in range(n):
        v = om[i]
        for j in range(n):
            for k in range(n):
                if C[i][j][k]:
                    v = v - (th[j] * th[k]).scale(HALF * C[i][j][k])
        d_imgs.append(v)
    for i in range(n):
        v = zero
        for j in range(n):
            for k in range(n):
                if C[i][j][k]:
                    v = v - (th[j] * om[k]).scale(C[i][j][k])
        d_imgs.append(v)

    def coadj(k, gens):
        # L_k x^j = -C^j_km x^m
        return [sum((gens[m].scale(-C[j][k][m]) for m in range(n) if C[j][k][m]), zero) for j in range(n)]

    Ls = [Derivation(A, coadj(k, th) + coadj(k, om), 0, 0, f"L{k + 1}") for k in range(n)]
    Is = [Derivation(A, [A.one() if j == k else zero for j in range(n)] + [zero] * n, 1, -1, f"I{k + 1}")
          for k in range(n)]
    op = OperationSpec(A, L, Derivation(A, d_imgs, 1, 1, "d_W"), Ls, Is, "W")
    return WeilAlgebra(op, th, om)


def augmentation(W: WeilAlgebra, w: Element) -> Element:
    """h(theta^i) = Omega^i, extended linearly on the span of the theta's."""
    A = W.algebra
    n = W.lie.dim
    out = A.zero()
    for m, c in w.terms.items():
        if sum(m) != 1 or not any(m[:n]):
            raise ValueError(f"input not linear in theta: {render(w)}")
        i = m.index(1)
        out = out + W.omega[i].scale(c)
    return out


def exterior_part(L: LieAlgebraData, theta_names: Optional[Sequence[str]] = None):
    """Lambda g* with the Chevalley-Eilenberg differential bold-d and the coadjoint L."""
    n, C = L.dim, L.C
    names = list(theta_names or weil_names(n)[0])
    A = GradedAlgebra([(nm, 1) for nm in names])
    th = A.gens()
    zero = A.zero()
    d_imgs = [sum(((th[j] * th[k]).scale(-HALF * C[i][j][k]) for j in range(n) for k in range(n)
                   if C[i][j][k]), zero) for i in range(n)]
    Ls = [Derivation(A, [sum((th[m].scale(-C[j][k][m]) for m in range(n) if C[j][k][m]), zero)
                         for j in range(n)], 0, 0, f"L{k + 1}") for k in range(n)]
    Is = [Derivation(A, [A.one() if j == k else zero for j in range(n)], 1, -1, f"I{k + 1}") for k in range(n)]
    return OperationSpec(A, L, Derivation(A, d_imgs, 1, 1, "d"), Ls, Is, "Lambda")


def koszul_check(L: LieAlgebraData, window: int) -> List[Violation]:
    """Check bold-d = 1/2 theta^k L_k on Lambda g* monomials of degree <= window."""
    op = exterior_part(L)
    A = op.algebra
    th = A.gens()
    rhs_parts = [D.left_multiplied(th[k]) for k, D in enumerate(op.L)]
    out = []
    for deg in range(window + 1):
        for m in A.basis_of_degree(deg):
            x = A.monomial(m)
            rhs = sum((P(x) for P in rhs_parts), A.zero()).scale(HALF)
            r = op.d(x) - rhs
            if r:
                out.append(Violation("koszul", A.render_monomial(m), render(r)))
    return out


def acyclicity_dims(L: LieAlgebraData, K: int) -> List[int]:
    W = build_weil(L)
    return cohomology_dims(full_complex(W.algebra), W.operation.d, K)


def symmetric_part(W: WeilAlgebra) -> GradedAlgebra:
    return GradedAlgebra([g for g in W.algebra.generators if g.degree == 2])


def omega_contracted_lie(W: WeilAlgebra):
    """The operator sum_i Omega^i L_i restricted to S g* (as an operator on S g*)."""
    S = symmetric_part(W)
    n = W.lie.dim
    inc = algebra_hom(S, W.algebra, W.omega, "incl")
    proj = algebra_hom(W.algebra, S, [S.zero()] * n + S.gens(), "proj")
    parts = [D.left_multiplied(W.omega[i]) for i, D in enumerate(W.operation.L)]
    total = parts[0]
    for p in parts[1:]:
        total = total + p
    return proj @ total @ inc
