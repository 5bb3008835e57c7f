"""Algebraic connections, curvature, Chern-Weil maps and Weil transgression.

A connection on an operation A is a list of degree-1 elements theta~^i with
I_j theta~^k = delta^k_j and L_k theta~^i = -C^i_kj theta~^j.  Its curvature is
omega~^i = d theta~^i + 1/2 C^i_jk theta~^j theta~^k, the sign that makes the
Chern-Weil map theta^i -> theta~^i, Omega^i -> omega~^i a cochain map out of W_g.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Dict, List, Optional, Sequence

from .graded_algebra import Element, GradedAlgebra, Generator, Monomial, render
from .operation import OperationSpec, Violation, subspace_basis
from .operators import Derivation, LinearOperator, algebra_hom, identity
from .weil import WeilAlgebra, build_weil

HALF = Fraction(1, 2)


@dataclass(eq=False)
class ConnectionSpec:
    op: OperationSpec
    theta: List[Element]
    name: str = ""

    def __post_init__(self):
        self.theta = [t if isinstance(t, Element) else self.op.algebra.parse(t) for t in self.theta]
        if len(self.theta) != self.op.lie.dim:
            raise ValueError(f"connection needs {self.op.lie.dim} components, got {len(self.theta)}")


def bracket_square(C, xs: Sequence[Element], zero: Element) -> List[Element]:
    """``[x, x]^i = C^i_jk x^j x^k``."""
    n = len(xs)
    return [sum(((xs[j] * xs[k]).scale(C[i][j][k]) for j in range(n) for k in range(n) if C[i][j][k]), zero)
            for i in range(n)]


def check_connection(op: OperationSpec, theta: Sequence[Element]) -> List[Violation]:
    A, C, n = op.algebra, op.lie.C, op.lie.dim
    out = []
    for i, t in enumerate(theta):
        if t and t.degrees() != [1]:
            out.append(Violation("degree 1", f"theta{i + 1}", render(t)))
    for j in range(n):
        for k in range(n):
            r = op.I[j](theta[k]) - int(j == k)
            if r:
                out.append(Violation("(conn1) I_j theta^k = delta", f"j={j + 1},k={k + 1}", render(r)))
    for k in range(n):
        for i in range(n):
            r = op.L[k](theta[i]) + sum((theta[j].scale(C[i][k][j]) for j in range(n) if C[i][k][j]), A.zero())
            if r:
                out.append(Violation("(conn2) L_k theta^i = -C^i_kj theta^j", f"k={k + 1},i={i + 1}", render(r)))
    return out


def curvature(op: OperationSpec, theta: Sequence[Element], check: bool = True) -> List[Element]:
    A = op.algebra
    sq = bracket_square(op.lie.C, theta, A.zero())
    omega = [op.d(t) + s.scale(HALF) for t, s in zip(theta, sq)]
    if check:
        for i, w in enumerate(omega):
            for k, I in enumerate(op.I):
                if I(w):
                    raise ArithmeticError(f"internal inconsistency: I{k + 1} of curvature component {i + 1} "
                                          f"is {render(I(w))}")
    return omega


def contraction_sum(op: OperationSpec, theta: Sequence[Element]) -> Derivation:
    """The even derivation sum_k theta~^k I_k."""
    A = op.algebra
    imgs = [A.zero()] * A.ngens
    for t, I in zip(theta, op.I):
        imgs = [a + b for a, b in zip(imgs, I.left_multiplied(t).images)]
    return Derivation(A, imgs, 0, 0, "theta.I")


def horizontal_projector(op: OperationSpec, theta: Sequence[Element]) -> LinearOperator:
    """prod_k (1 - theta~^k I_k), ascending k."""
    A = op.algebra
    h = identity(A)
    for t, I in zip(theta, op.I):
        h = (identity(A) - I.left_multiplied(t)) @ h
    h.name = "h"
    return h


def horizontal_projection(op: OperationSpec, theta: Sequence[Element], a: Element) -> Element:
    return horizontal_projector(op, theta)(a)


def horizontal_projector_exp(op: OperationSpec, theta: Sequence[Element]) -> LinearOperator:
    """Normal-ordered exp(-theta~^k I_k): sum_m (-1)^m/m! theta~^k1..theta~^km I_km..I_k1.

    theta~^k I_k is idempotent rather than nilpotent, so the exponential only
    makes sense with every theta~ moved to the left of every I.  The series
    stops at m = dim g because the theta~ products then repeat an index.
    """
    A = op.algebra
    n = len(theta)

    def on_monomial(m: Monomial) -> Element:
        x = A.monomial(m)
        total = x
        layer = [((), x)]  # (indices k1..km, I_km..I_k1 x)
        for power in range(1, n + 1):
            nxt = []
            coeff = Fraction((-1) ** power, factorial(power))
            for ks, y in layer:
                for k in range(n):
                    if k in ks:
                        continue
                    z = op.I[k](y)
                    if z:
                        nxt.append((ks + (k,), z))
                        prefix = A.one()
                        for j in ks + (k,):
                            prefix = prefix * theta[j]
                        total = total + (prefix * z).scale(coeff)
            layer = nxt
        return total

    return LinearOperator(A, A, on_monomial, 0, 0, "exp(-theta.I)")


def covariant_derivative(op: OperationSpec, theta: Sequence[Element], a: Element) -> Element:
    return horizontal_projection(op, theta, op.d(a))


def chern_weil_map(op: OperationSpec, theta: Sequence[Element], weil: Optional[WeilAlgebra] = None) -> LinearOperator:
    """W_g -> A, theta^i -> theta~^i, Omega^i -> omega~^i."""
    W = weil or build_weil(op.lie)
    omega = curvature(op, theta)
    return algebra_hom(W.algebra, op.algebra, list(theta) + omega, "cw")


def morphism_check(W: WeilAlgebra, op: OperationSpec, f: LinearOperator, window: int) -> List[Violation]:
    """f intertwines d_W, L and iota with d, L and I on W monomials of degree <= window."""
    out = []
    src = W.operation
    pairs = [("d", src.d, op.d)] + [(f"L{k + 1}", a, b) for k, (a, b) in enumerate(zip(src.L, op.L))] \
        + [(f"I{k + 1}", a, b) for k, (a, b) in enumerate(zip(src.I, op.I))]
    for deg in range(window + 1):
        for m in W.algebra.basis_of_degree(deg):
            x = W.algebra.monomial(m)
            fx = f(x)
            for label, P, Q in pairs:
                r = f(P(x)) - Q(fx)
                if r:
                    out.append(Violation(f"cw intertwines {label}", W.algebra.render_monomial(m), render(r)))
    return out


# -- transgression ----------------------------------------------------------

@dataclass(eq=False)
class TLine:
    """Omega*(R) (x) A with t (even, degree 0) and dt (odd, degree 1) placed first."""

    base: OperationSpec
    op: OperationSpec
    inclusion: LinearOperator

    @property
    def t(self) -> Element:
        return self.op.algebra.gen(0)

    @property
    def dt(self) -> Element:
        return self.op.algebra.gen(1)

    def evaluate_at(self, value: int) -> LinearOperator:
        """Localization f(t) -> f(value), dt -> 0."""
        B, A = self.op.algebra, self.base.algebra
        return algebra_hom(B, A, [A.scalar(value), A.zero()] + A.gens(), f"t={value}")

    def integrate(self) -> LinearOperator:
        """Fiber integration: dt t^k w -> w/(k+1); terms without dt -> 0."""
        B, A = self.op.algebra, self.base.algebra

        def on_monomial(m: Monomial) -> Element:
            if not m[1]:
                return A.zero()
            return A.monomial(m[2:]).scale(Fraction(1, m[0] + 1))

        return LinearOperator(B, A, on_monomial, -1, 1, "int_I")


def _fresh(name: str, taken) -> str:
    while name in taken:
        name += "_"
    return name


def tline_extension(op: OperationSpec) -> TLine:
    A = op.algebra
    tn = _fresh("t", set(A.names))
    dtn = _fresh("dt", set(A.names) | {tn})
    B = GradedAlgebra([Generator(tn, 0), Generator(dtn, 1), *A.generators])
    inc = algebra_hom(A, B, B.gens()[2:], "incl")
    z = B.zero()

    def lift(D: Derivation, head: Sequence[Element]) -> Derivation:
        return Derivation(B, list(head) + [inc(v) for v in D.images], D.parity, D.degree_shift, D.name)

    d_hat = lift(op.d, [B.gen(1), z])
    ext = OperationSpec(B, op.lie, d_hat, [lift(D, [z, z]) for D in op.L], [lift(D, [z, z]) for D in op.I],
                        f"TLine({op.name})")
    return TLine(op, ext, inc)


class Transgression:
    """K = int_I cw^ for the interpolated connection (1-t) theta0 + t theta1.

    Satisfies cw1 - cw0 = d K + K d_W.
    """

    def __init__(self, op: OperationSpec, theta0: Sequence[Element], theta1: Sequence[Element],
                 weil: Optional[WeilAlgebra] = None):
        self.op = op
        self.weil = weil or build_weil(op.lie)
        self.theta0 = list(theta0)
        self.theta1 = list(theta1)
        self.tline = tline_extension(op)
        inc = self.tline.inclusion
        t = self.tline.t
        one_minus_t = 1 - t
        self.theta_hat = [one_minus_t * inc(a) + t * inc(b) for a, b in zip(self.theta0, self.theta1)]
        self.cw_hat = chern_weil_map(self.tline.op, self.theta_hat, self.weil)
        self.K = self.tline.integrate() @ self.cw_hat
        self.K.name = "K"
        self.cw0 = chern_weil_map(op, self.theta0, self.weil)
        self.cw1 = chern_weil_map(op, self.theta1, self.weil)

    def __call__(self, w: Element) -> Element:
        return self.K(w)


def transgress(op: OperationSpec, theta0, theta1, w: Element) -> Element:
    return Transgression(op, theta0, theta1)(w)


def transgression_identity_check(op: OperationSpec, theta0, theta1, window: int,
                                 tr: Optional[Transgression] = None) -> List[Violation]:
    """cw1 - cw0 = dK + K d_W on W monomials of degree <= window; K commutes with L and
    maps W-basic elements into A-basic ones."""
    tr = tr or Transgression(op, theta0, theta1)
    W = tr.weil
    Wop = W.operation
    K = tr.K
    out = []
    for deg in range(window + 1):
        for m in W.algebra.basis_of_degree(deg):
            w = W.algebra.monomial(m)
            r = tr.cw1(w) - tr.cw0(w) - op.d(K(w)) - K(Wop.d(w))
            where = W.algebra.render_monomial(m)
            if r:
                out.append(Violation("cw1 - cw0 = dK + K d_W", where, render(r)))
            for k in range(op.lie.dim):
                r = op.L[k](K(w)) - K(Wop.L[k](w))
                if r:
                    out.append(Violation(f"K commutes with L{k + 1}", where, render(r)))
    basic = subspace_basis(Wop, "basic")
    for deg in range(window + 1):
        for b in basic.basis(deg):
            kb = K(b)
            for label, D in [*[(f"L{k + 1}", D) for k, D in enumerate(op.L)],
                             *[(f"I{k + 1}", D) for k, D in enumerate(op.I)]]:
                r = D(kb)
                if r:
                    out.append(Violation(f"K(W_bas) in A_bas ({label})", render(b), render(r)))
    return out


# -- closed form ----------------------------------------------------------

def _poly_mul(p: Dict[int, Element], q: Dict[int, Element], zero: Element) -> Dict[int, Element]:
    out: Dict[int, Element] = {}
    for i, a in p.items():
        for j, b in q.items():
            out[i + j] = out.get(i + j, zero) + a * b
    return {k: v for k, v in out.items() if v}


def transgress_taylor(op: OperationSpec, theta0, theta1, w: Element) -> Element:
    """K(P (x) Q) = int_0^1 sum_i (theta1^i - theta0^i) dP/dOmega^i (X(t)) Q(theta^(t)) dt.

    Independent of the TLine route: polynomials in t with coefficients in A,
    X(t) the dt-free part of the interpolated curvature, exact integration.
    """
    A = op.algebra
    n, C = op.lie.dim, op.lie.C
    zero = A.zero()
    th0, th1 = list(theta0), list(theta1)
    theta_t = [{0: a, 1: b - a} for a, b in zip(th0, th1)]
    theta_t = [{k: v for k, v in p.items() if v} for p in theta_t]
    # X(t) = d theta^(t) + 1/2 [theta^(t), theta^(t)], with t a parameter
    X = []
    for i in range(n):
        p = {k: op.d(v) for k, v in theta_t[i].items()}
        for j in range(n):
            for k in range(n):
                if C[i][j][k]:
                    for e, v in _poly_mul(theta_t[j], theta_t[k], zero).items():
                        p[e] = p.get(e, zero) + v.scale(HALF * C[i][j][k])
        X.append({k: v for k, v in p.items() if v})
    dot = [b - a for a, b in zip(th0, th1)]

    total = zero
    for m, c in w.terms.items():
        q_exps, p_exps = m[:n], m[n:]
        # Q(theta^(t)) in generator order
        Q = {0: A.one()}
        for i, e in enumerate(q_exps):
            if e:
                Q = _poly_mul(Q, theta_t[i], zero)
        for i, e in enumerate(p_exps):
            if not e:
                continue
            # dP/dOmega^i = e * Omega^i^(e-1) * rest
            dP = {0: A.one()}
            for j, f in enumerate(p_exps):
                power = f - 1 if j == i else f
                for _ in range(power):
                    dP = _poly_mul(dP, X[j], zero)
            integrand = _poly_mul({0: dot[i].scale(e)}, _poly_mul(dP, Q, zero), zero)
            for k, v in integrand.items():
                total = total + v.scale(c * Fraction(1, k + 1))
    return total
