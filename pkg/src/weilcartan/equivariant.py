"""Cartan and Weil models of equivariant cohomology and Kalkman's conjugation.

In the Cartan complex S g* (x) A the adjoined Omega^i are plain polynomial
variables: they carry the coadjoint Lie derivative and are never
contracted.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence

from . import linalg
from .graded_algebra import Element, GradedAlgebra, render
from .lie import LieAlgebraData
from .operation import (OperationSpec, SubcomplexBasis, Violation, cohomology_dims, joint_kernel, lift_right,
                        subspace_basis, tensor_product, to_vector)
from .operators import Derivation, LinearOperator, algebra_hom, exp_nilpotent, identity
from .weil import WeilAlgebra, build_weil, weil_names


# -- Cartan model ---------------------------------------------------------

@dataclass(eq=False)
class CartanComplex:
    op: OperationSpec
    algebra: GradedAlgebra
    omega: List[Element]
    differential: Derivation          # 1(x)d - Omega^k (x) I_k
    total_L: List[Derivation]         # bold-L (x) 1 + 1 (x) L
    inclusion: LinearOperator         # A -> S g* (x) A
    L_A: List[Derivation]             # 1 (x) L_k
    I_A: List[Derivation]             # 1 (x) I_k

    @property
    def lie(self) -> LieAlgebraData:
        return self.op.lie

    def invariant_complex(self) -> SubcomplexBasis:
        return SubcomplexBasis(self.algebra, "invariant", lambda k: joint_kernel(self.algebra, self.total_L, k))

    def is_invariant(self, x: Element) -> bool:
        return all(not D(x) for D in self.total_L)


def cartan_complex(op: OperationSpec, omega_names: Optional[Sequence[str]] = None) -> CartanComplex:
    n, C = op.lie.dim, op.lie.C
    A = op.algebra
    names = list(omega_names or weil_names(n)[1])
    clash = set(names) & set(A.names)
    if clash:
        raise ValueError(f"generator names {sorted(clash)} clash with the Cartan variables")
    B = GradedAlgebra([(nm, 2) for nm in names] + list(A.generators))
    om = B.gens()[:n]
    inc = algebra_hom(A, B, B.gens()[n:], "incl")
    zero = B.zero()

    def lift(D: Derivation, omega_imgs=None) -> Derivation:
        imgs = list(omega_imgs or [zero] * n) + [inc(v) for v in D.images]
        return Derivation(B, imgs, D.parity, D.degree_shift, D.name)

    I_A = [lift(D) for D in op.I]
    L_A = [lift(D) for D in op.L]
    d_imgs = [zero] * n
    for g in range(A.ngens):
        v = inc(op.d.images[g])
        for k in range(n):
            v = v - om[k] * I_A[k].images[n + g]
        d_imgs.append(v)
    dcar = Derivation(B, d_imgs, 1, 1, "dcar")
    total = []
    for k in range(n):
        coad = [sum((om[m].scale(-C[j][k][m]) for m in range(n) if C[j][k][m]), zero) for j in range(n)]
        total.append(lift(op.L[k], coad))
    return CartanComplex(op, B, om, dcar, total, inc, L_A, I_A)


def cartan_differential(op: OperationSpec) -> Derivation:
    return cartan_complex(op).differential


def cartan_identity_check(cc: CartanComplex, window: int) -> List[Violation]:
    """dcar^2 = -Omega^k (x) L_k and [dcar, total L_X] = 0 on all monomials of degree <= window."""
    B = cc.algebra
    d = cc.differential
    out = []
    for deg in range(window + 1):
        for m in B.basis_of_degree(deg):
            x = B.monomial(m)
            dx = d(x)
            r = d(dx) + sum((cc.omega[k] * cc.L_A[k](x) for k in range(cc.lie.dim)), B.zero())
            if r:
                out.append(Violation("dcar^2 = -Omega^k L_k", B.render_monomial(m), render(r)))
            for k, L in enumerate(cc.total_L):
                r = d(L(x)) - L(dx)
                if r:
                    out.append(Violation(f"[dcar, L{k + 1}] = 0", B.render_monomial(m), render(r)))
    return out


def cartan_cohomology(op: OperationSpec, K: int) -> List[int]:
    cc = cartan_complex(op)
    return cohomology_dims(cc.invariant_complex(), cc.differential, K)


# -- Weil model -----------------------------------------------------------

@dataclass(eq=False)
class WeilModel:
    """W_G (x) A with its tensor operation; the W block comes first."""

    weil: WeilAlgebra
    op: OperationSpec

    @property
    def algebra(self) -> GradedAlgebra:
        return self.op.algebra

    @property
    def n(self) -> int:
        return self.op.lie.dim

    @property
    def theta(self) -> List[Element]:
        return self.algebra.gens()[:self.n]

    @property
    def omega(self) -> List[Element]:
        return self.algebra.gens()[self.n:2 * self.n]

    def a_inclusion(self) -> LinearOperator:
        A = self.op.factors[1].algebra
        return algebra_hom(A, self.algebra, self.algebra.gens()[2 * self.n:], "incl_A")

    def w_inclusion(self) -> LinearOperator:
        return algebra_hom(self.weil.algebra, self.algebra, self.algebra.gens()[:2 * self.n], "incl_W")

    def basic_complex(self) -> SubcomplexBasis:
        return subspace_basis(self.op, "basic")


def weil_model(op: OperationSpec, weil: Optional[WeilAlgebra] = None) -> WeilModel:
    W = weil or build_weil(op.lie)
    clash = set(W.algebra.names) & set(op.algebra.names)
    if clash:
        raise ValueError(f"generator names {sorted(clash)} clash with the Weil generators")
    return WeilModel(W, tensor_product(W.operation, op, f"W(x){op.name or 'A'}"))


def weil_basic_cohomology(op: OperationSpec, K: int) -> List[int]:
    wm = weil_model(op)
    return cohomology_dims(wm.basic_complex(), wm.op.d, K)


# -- Kalkman operators ----------------------------------------------------

def seeded_matrix(n: int, seed: int) -> List[List[Fraction]]:
    rng = random.Random(seed)
    return [[Fraction(rng.randint(-2, 2)) for _ in range(n)] for _ in range(n)]


class Kalkman:
    """The operators A_T, bold-L_T and D_T on B = W_G (x) A for a matrix T = (t^i_j).

    A_T = t^i_j theta^j (x) I_i,  bold-L_T = t^i_j (theta^j (x) L_i - Omega^j (x) I_i),
    D_T = D + bold-L_T.  Both A_T and bold-L_T are derivations (even and odd).
    """

    def __init__(self, model: WeilModel, T: Sequence[Sequence]):
        self.model = model
        n = model.n
        self.T = [[Fraction(v) for v in row] for row in T]
        if len(self.T) != n or any(len(r) != n for r in self.T):
            raise ValueError(f"T must be {n}x{n}")
        op = model.op
        A_op = op.factors[1]
        self.I_A = [lift_right(op, D, f"I^A{i + 1}") for i, D in enumerate(A_op.I)]
        self.L_A = [lift_right(op, D, f"L^A{i + 1}") for i, D in enumerate(A_op.L)]
        self.A_T = self._combine(lambda i, j: self.I_A[i].left_multiplied(model.theta[j]), 0, 0, "A_T")
        self.bbL_T = self._combine(
            lambda i, j: self.L_A[i].left_multiplied(model.theta[j]) - self.I_A[i].left_multiplied(model.omega[j]),
            1, 1, "LL_T")
        self.D_T = op.d + self.bbL_T
        self.D_T.name = "D_T"

    def _combine(self, piece, parity, shift, name) -> Derivation:
        B = self.model.algebra
        imgs = [B.zero()] * B.ngens
        n = self.model.n
        for i in range(n):
            for j in range(n):
                t = self.T[i][j]
                if t:
                    P = piece(i, j)
                    imgs = [a + b.scale(t) for a, b in zip(imgs, P.images)]
        return Derivation(B, imgs, parity, shift, name)

    def correction_term(self) -> Derivation:
        """sum_q 1/2 (T[theta,theta] - [T theta, T theta])^q I^A_q.

        exp(A_T) D exp(-A_T) = D_T + correction_term(); the term vanishes when T
        is a Lie algebra homomorphism on brackets (T = 0, T = id, abelian g).
        """
        m = self.model
        n, C, B = m.n, m.op.lie.C, m.algebra
        th = m.theta
        Tth = [sum((th[j].scale(self.T[a][j]) for j in range(n) if self.T[a][j]), B.zero()) for a in range(n)]
        imgs = [B.zero()] * B.ngens
        for q in range(n):
            c = B.zero()
            for i in range(n):
                if self.T[q][i]:
                    for j in range(n):
                        for k in range(n):
                            if C[i][j][k]:
                                c = c + (th[j] * th[k]).scale(self.T[q][i] * C[i][j][k])
            for a in range(n):
                for b in range(n):
                    if C[q][a][b]:
                        c = c - (Tth[a] * Tth[b]).scale(C[q][a][b])
            if c:
                imgs = [x + y.scale(Fraction(1, 2)) for x, y in zip(imgs, self.I_A[q].left_multiplied(c).images)]
        return Derivation(B, imgs, 1, 1, "R_T")

    def elementary(self, i: int, j: int) -> Derivation:
        """A^j_i = theta^j (x) I_i."""
        return self.I_A[i].left_multiplied(self.model.theta[j])

    def exp_pair(self, window: int):
        return exp_nilpotent(self.A_T, window), exp_nilpotent(-self.A_T, window)

    def stepwise_exp(self, window: int) -> LinearOperator:
        """Product of exp(t^i_j A^j_i) = 1 + t^i_j A^j_i over index pairs in declaration order."""
        B = self.model.algebra
        out = identity(B)
        n = self.model.n
        for i in range(n):
            for j in range(n):
                if self.T[i][j]:
                    out = exp_nilpotent(self.elementary(i, j).scaled(self.T[i][j]), window) @ out
        return out

    def conjugate(self, P: LinearOperator, window: int) -> LinearOperator:
        """exp(A_T) P exp(-A_T), defined on monomials of degree <= window."""
        top = window + max(P.degree_shift, 0)
        e_plus = exp_nilpotent(self.A_T, top)
        e_minus = exp_nilpotent(-self.A_T, window)
        return e_plus @ P @ e_minus


def _window_diff(P: LinearOperator, Q: LinearOperator, window: int, label: str) -> List[Violation]:
    B = P.source
    out = []
    for deg in range(window + 1):
        for m in B.basis_of_degree(deg):
            r = P.apply_monomial(m) - Q.apply_monomial(m)
            if r:
                out.append(Violation(label, B.render_monomial(m), render(r)))
    return out


def kalkman_conjugation_check(model: WeilModel, T, window: int) -> List[Violation]:
    """exp(A_T) D exp(-A_T) = D_T and exp(A_T) L_X exp(-A_T) = L_X on degree <= window."""
    K = Kalkman(model, T)
    out = _window_diff(K.conjugate(model.op.d, window), K.D_T, window, "exp(A_T) D exp(-A_T) = D_T")
    for k, L in enumerate(model.op.L):
        out += _window_diff(K.conjugate(L, window), L, window, f"L_T = L_0 (L{k + 1})")
    return out


def kalkman_corrected_check(model: WeilModel, T, window: int) -> List[Violation]:
    """exp(A_T) D exp(-A_T) = D_T + R_T for arbitrary T (see Kalkman.correction_term)."""
    K = Kalkman(model, T)
    return _window_diff(K.conjugate(model.op.d, window), K.D_T + K.correction_term(), window,
                        "exp(A_T) D exp(-A_T) = D_T + R_T")


def brst_basic_check(model: WeilModel, window: int) -> List[Violation]:
    """For T = id: ker I_id is the theta-free span, and D_id restricts to dcar on invariant theta-free elements."""
    n = model.n
    B = model.algebra
    K = Kalkman(model, [[int(i == j) for j in range(n)] for i in range(n)])
    I_id = [K.conjugate(I, window) for I in model.op.I]
    out = []
    for deg in range(window + 1):
        kern = joint_kernel(B, I_id, deg)
        free = [B.monomial(m) for m in B.basis_of_degree(deg) if not any(m[:n])]
        if not linalg.span_equal([to_vector(x, deg) for x in kern], [to_vector(x, deg) for x in free]):
            out.append(Violation("ker I_id = S g* (x) A", f"degree {deg}",
                                 f"dim ker {len(kern)} vs theta-free {len(free)}"))
    cc = cartan_complex(model.op.factors[1])
    to_B = cartan_to_weil(cc, model)
    inv = cc.invariant_complex()
    for deg in range(window + 1):
        for x in inv.basis(deg):
            r = K.D_T(to_B(x)) - to_B(cc.differential(x))
            if r:
                out.append(Violation("D_id = dcar on invariants", render(x), render(r)))
    return out


def cartan_to_weil(cc: CartanComplex, model: WeilModel) -> LinearOperator:
    """S g* (x) A -> W_G (x) A sending the Cartan Omega's to the Weil Omega's."""
    n = model.n
    B = model.algebra
    return algebra_hom(cc.algebra, B, model.omega + B.gens()[2 * n:], "cartan->weil")


def weil_to_cartan(cc: CartanComplex, model: WeilModel) -> LinearOperator:
    """theta -> 0, Omega -> Omega, A unchanged."""
    n = model.n
    C = cc.algebra
    return algebra_hom(model.algebra, C, [C.zero()] * n + cc.omega + C.gens()[n:], "theta->0")


def is_basic(op: OperationSpec, x: Element) -> bool:
    return all(not D(x) for D in list(op.L) + list(op.I))


def kalkman_map_basic(model: WeilModel, x: Element, cc: Optional[CartanComplex] = None) -> Element:
    """Kalkman's isomorphism on a basic element: theta^j -> 0, Omega^i -> Omega^i."""
    if not is_basic(model.op, x):
        raise ValueError(f"input not basic: {render(x)}")
    cc = cc or cartan_complex(model.op.factors[1])
    return weil_to_cartan(cc, model)(x)
