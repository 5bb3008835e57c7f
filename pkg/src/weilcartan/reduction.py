"""Reduction from G to Q = G/N along a G-equivariant N-connection.

Index conventions: ``n`` holds the ideal indices i, the complement holds the
indices a.  Inside W_G the complement generators theta^a, Omega^a span a copy
of W_Q (they are d_W-stable because n is an ideal), so W_Q (x) A sits in
W_G (x) A as the span of monomials free of theta^i, Omega^i.  Likewise the
Cartan variables Om^a stand for the Q-variables Psi^a.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Dict, List, Optional, Sequence

from .connections import Transgression, check_connection, curvature
from .equivariant import CartanComplex, Kalkman, WeilModel, cartan_complex, weil_model, weil_to_cartan
from .graded_algebra import AlgebraMismatch, Element, Monomial, render
from .lie import IdealSpec, validate_ideal
from .operation import (OperationSpec, SubcomplexBasis, Violation, cohomology_dims, is_exact, joint_kernel)
from .operators import Derivation, LinearOperator, algebra_hom, exp_nilpotent, identity

HALF = Fraction(1, 2)


class SetupError(ValueError):
    def __init__(self, violations: Sequence[Violation]):
        self.violations = list(violations)
        super().__init__("; ".join(v.describe() for v in self.violations[:5]))


@dataclass(eq=False)
class ReductionSetup:
    """G-operation ``op``, ideal ``ideal`` and N-connection ``theta`` (n-index -> A^1)."""

    op: OperationSpec
    ideal: IdealSpec
    theta: Dict[int, Element]
    name: str = ""
    _cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        A = self.op.algebra
        self.theta = {i: (v if isinstance(v, Element) else A.parse(v)) for i, v in self.theta.items()}
        w = validate_ideal(self.op.lie, self.ideal)
        if w is not None:
            raise SetupError([Violation("ideal", w.describe(), str(w.residual))])
        if set(self.theta) != set(self.ideal.indices):
            raise ValueError("the N-connection needs exactly one component per ideal index")
        bad = self.violations()
        if bad:
            raise SetupError(bad)

    @property
    def lie(self):
        return self.op.lie

    @property
    def n_idx(self):
        return self.ideal.indices

    @property
    def q_idx(self):
        return self.ideal.complement(self.op.lie.dim)

    def violations(self) -> List[Violation]:
        """N-connection axioms on n-indices and G-equivariance over all of g."""
        C, A = self.lie.C, self.op.algebra
        out = []
        for i, t in self.theta.items():
            if t and t.degrees() != [1]:
                out.append(Violation("degree 1", f"theta{i + 1}", render(t)))
        for j in self.n_idx:
            for k in self.n_idx:
                r = self.op.I[j](self.theta[k]) - int(j == k)
                if r:
                    out.append(Violation("I_j theta^k = delta (j,k in n)", f"j={j + 1},k={k + 1}", render(r)))
        for k in range(self.lie.dim):
            for i in self.n_idx:
                r = self.op.L[k](self.theta[i]) + sum(
                    (self.theta[j].scale(C[i][k][j]) for j in self.n_idx if C[i][k][j]), A.zero())
                if r:
                    out.append(Violation("L_k theta^i = -C^i_kj theta^j", f"k={k + 1},i={i + 1}", render(r)))
        return out

    # -- derived objects, built once -------------------------------------

    @cached_property
    def model(self) -> WeilModel:
        return weil_model(self.op)

    @cached_property
    def cartan(self) -> CartanComplex:
        return cartan_complex(self.op)


# -- moment map -----------------------------------------------------------

def moment_map(setup: ReductionSetup) -> Dict[int, Dict[int, Element]]:
    """``mu[a][i] = -I_a theta~^i`` for every a in g and i in n; the equivariance identity
    L_k mu(e_a)^i = mu([e_k, e_a])^i - C^i_kj mu(e_a)^j is verified."""
    op, n = setup.op, setup.lie.dim
    mu = {a: {i: -op.I[a](setup.theta[i]) for i in setup.n_idx} for a in range(n)}
    bad = moment_map_violations(setup, mu)
    if bad:
        raise SetupError(bad)
    return mu


def moment_map_violations(setup: ReductionSetup, mu) -> List[Violation]:
    op, C, n = setup.op, setup.lie.C, setup.lie.dim
    zero = op.algebra.zero()
    out = []
    for k in range(n):
        for a in range(n):
            for i in setup.n_idx:
                rhs = sum((mu[b][i].scale(C[b][k][a]) for b in range(n) if C[b][k][a]), zero)
                rhs = rhs - sum((mu[a][j].scale(C[i][k][j]) for j in setup.n_idx if C[i][k][j]), zero)
                r = op.L[k](mu[a][i]) - rhs
                if r:
                    out.append(Violation("moment map equivariance", f"k={k + 1},a={a + 1},i={i + 1}", render(r)))
    return out


def descent_check(setup: ReductionSetup, mu=None) -> List[Violation]:
    """q(X) = X + mu(X) vanishes on n: mu(e_j)^i = -delta^i_j."""
    mu = mu or moment_map(setup)
    out = []
    for j in setup.n_idx:
        for i in setup.n_idx:
            r = mu[j][i] + int(i == j)
            if r:
                out.append(Violation("q(X) = 0 on n", f"j={j + 1},i={i + 1}", render(r)))
    return out


# -- the Xi connection and T0 ---------------------------------------------

def build_xi(setup: ReductionSetup) -> List[Element]:
    """G-connection on W_G (x) A: Xi^i = theta~^i + mu(f_a)^i theta^a (i in n), Xi^a = theta^a."""
    if "xi" in setup._cache:
        return setup._cache["xi"]
    m = setup.model
    mu = moment_map(setup)
    inc = m.a_inclusion()
    xi = list(m.theta)
    for i in setup.n_idx:
        v = inc(setup.theta[i])
        for a in setup.q_idx:
            if mu[a][i]:
                v = v + inc(mu[a][i]) * m.theta[a]
        xi[i] = v
    bad = check_connection(m.op, xi)
    if bad:
        raise ArithmeticError("internal inconsistency: Xi is not a connection: " + bad[0].describe())
    setup._cache["xi"] = xi
    return xi


def t0_operator(setup: ReductionSetup) -> LinearOperator:
    """Algebra endomorphism of W_G (x) A: theta -> Xi, Omega -> curvature of Xi, A fixed."""
    if "t0" not in setup._cache:
        m = setup.model
        xi = build_xi(setup)
        n = m.n
        B = m.algebra
        setup._cache["t0"] = algebra_hom(B, B, xi + curvature(m.op, xi) + B.gens()[2 * n:], "T0")
    return setup._cache["t0"]


def T0_map(setup: ReductionSetup, x: Element) -> Element:
    return t0_operator(setup)(x)


def homotopy_operator(setup: ReductionSetup) -> LinearOperator:
    """K-cal(w . a) = K(w) . a with K the transgression from Xi to the tautological connection."""
    if "kcal" in setup._cache:
        return setup._cache["kcal"]
    m = setup.model
    B = m.algebra
    n = m.n
    tr = Transgression(m.op, build_xi(setup), m.theta, m.weil)
    W = m.weil.algebra

    def on_monomial(mono: Monomial) -> Element:
        w = W.monomial(mono[:2 * n])
        a = B.monomial((0,) * (2 * n) + mono[2 * n:])
        return tr(w) * a

    op = LinearOperator(B, B, on_monomial, -1, 1, "Kcal")
    op.transgression = tr
    setup._cache["kcal"] = op
    return op


def is_q_free(setup: ReductionSetup, mono: Monomial) -> bool:
    """No n-indexed theta or Omega in a W_G (x) A monomial."""
    n = setup.lie.dim
    return not any(mono[i] or mono[n + i] for i in setup.n_idx)


def q_basic_complex(setup: ReductionSetup) -> SubcomplexBasis:
    """(W_Q (x) B)_{Q,bas} = G-basic elements of W_G (x) A lying in W_Q (x) A."""
    m = setup.model
    B = m.algebra
    ops = list(m.op.L) + list(m.op.I)
    return SubcomplexBasis(B, "Q-basic", lambda k: joint_kernel(
        B, ops, k, [mono for mono in B.basis_of_degree(k) if is_q_free(setup, mono)]))


@dataclass
class CartanTheoremReport:
    homotopy: List[Violation]
    t0_image: List[Violation]
    t0_retraction: List[Violation]
    morphism: List[Violation]
    kcal_basic: List[Violation]
    g_dims: List[int]
    q_dims: List[int]

    @property
    def ok(self) -> bool:
        return not (self.homotopy or self.t0_image or self.t0_retraction or self.morphism or self.kcal_basic) \
            and self.g_dims == self.q_dims


def cartan_theorem_check(setup: ReductionSetup, K: int) -> CartanTheoremReport:
    m = setup.model
    B, op = m.algebra, m.op
    T0 = t0_operator(setup)
    Kc = homotopy_operator(setup)
    d = op.d
    homotopy, image, retraction, morphism, kbasic = [], [], [], [], []
    structure = [("d", d)] + [(f"L{k + 1}", D) for k, D in enumerate(op.L)] + \
        [(f"I{k + 1}", D) for k, D in enumerate(op.I)]
    for deg in range(K + 1):
        for mono in B.basis_of_degree(deg):
            x = B.monomial(mono)
            where = B.render_monomial(mono)
            r = x - T0(x) - d(Kc(x)) - Kc(d(x))
            if r:
                homotopy.append(Violation("x - T0 x = dK x + K dx", where, render(r)))
            t0x = T0(x)
            if not all(is_q_free(setup, mm) for mm in t0x.terms):
                image.append(Violation("T0 lands in W_Q (x) A", where, render(t0x)))
            for label, D in structure:
                r = T0(D(x)) - D(t0x)
                if r:
                    morphism.append(Violation(f"T0 intertwines {label}", where, render(r)))
            for label, D in structure[1:len(op.L) + 1]:
                r = D(Kc(x)) - Kc(D(x))
                if r:
                    kbasic.append(Violation(f"Kcal commutes with {label}", where, render(r)))
    qb = q_basic_complex(setup)
    gb = m.basic_complex()
    for deg in range(K + 1):
        for b in qb.basis(deg):
            r = T0(b) - b
            if r:
                retraction.append(Violation("T0 o j = id", render(b), render(r)))
        for b in gb.basis(deg):
            kb = Kc(b)
            for label, D in structure[1:]:
                if D(kb):
                    kbasic.append(Violation(f"Kcal preserves basics ({label})", render(b), render(D(kb))))
    return CartanTheoremReport(homotopy, image, retraction, morphism, kbasic,
                               cohomology_dims(gb, d, K), cohomology_dims(qb, d, K))


# -- Cartan side ------------------------------------------------------------

def n_curvature(setup: ReductionSetup) -> Dict[int, Element]:
    """omega~^i = d theta~^i + 1/2 C^i_jk theta~^j theta~^k over j, k in n."""
    C, op = setup.lie.C, setup.op
    out = {}
    for i in setup.n_idx:
        v = op.d(setup.theta[i])
        for j in setup.n_idx:
            for k in setup.n_idx:
                if C[i][j][k]:
                    v = v + (setup.theta[j] * setup.theta[k]).scale(HALF * C[i][j][k])
        out[i] = v
    return out


def equivariant_curvature(setup: ReductionSetup) -> Dict[int, Element]:
    """omega_Q^i = omega~^i + mu(f_a)^i Psi^a in the Cartan algebra S g* (x) A.

    Verified: degree 2, killed by I_j for j in n, and equivariant,
    L_b omega_Q^i = -C^i_bk omega_Q^k (k in n), for every b in g.
    """
    if "omegaQ" in setup._cache:
        return setup._cache["omegaQ"]
    cc = setup.cartan
    C = setup.lie.C
    mu = moment_map(setup)
    wt = n_curvature(setup)
    inc = cc.inclusion
    oq = {}
    for i in setup.n_idx:
        v = inc(wt[i])
        for a in setup.q_idx:
            if mu[a][i]:
                v = v + inc(mu[a][i]) * cc.omega[a]
        oq[i] = v
    bad = []
    for i, v in oq.items():
        if v and v.degrees() != [2]:
            bad.append(Violation("degree 2", f"omega_Q{i + 1}", render(v)))
        for j in setup.n_idx:
            r = cc.I_A[j](v)
            if r:
                bad.append(Violation("I_j omega_Q = 0 (j in n)", f"i={i + 1},j={j + 1}", render(r)))
        for b in range(setup.lie.dim):
            r = cc.total_L[b](v) + sum((oq[k].scale(C[i][b][k]) for k in setup.n_idx if C[i][b][k]),
                                       cc.algebra.zero())
            if r:
                bad.append(Violation("L_b omega_Q^i = -C^i_bk omega_Q^k", f"b={b + 1},i={i + 1}", render(r)))
    if bad:
        raise SetupError(bad)
    setup._cache["omegaQ"] = oq
    return oq


def q_cartan_differential(setup: ReductionSetup) -> Derivation:
    """1 (x) d - Psi^a (x) I_a on S g* (x) A; used on the Psi-only, N-basic part."""
    if "dQ" not in setup._cache:
        cc = setup.cartan
        n = setup.lie.dim
        S = cc.algebra
        imgs = [S.zero()] * n
        for g in range(setup.op.algebra.ngens):
            v = cc.inclusion(setup.op.d.images[g])
            for a in setup.q_idx:
                v = v - cc.omega[a] * cc.I_A[a].images[n + g]
            imgs.append(v)
        setup._cache["dQ"] = Derivation(S, imgs, 1, 1, "dcar_Q")
    return setup._cache["dQ"]


def _psi_only(setup: ReductionSetup, mono: Monomial) -> bool:
    return not any(mono[i] for i in setup.n_idx)


def q_cartan_complex(setup: ReductionSetup) -> SubcomplexBasis:
    """(S q* (x) B)^Q: Psi-only, N-horizontal, invariant under every L_k."""
    cc = setup.cartan
    S = cc.algebra
    ops = list(cc.total_L) + [cc.I_A[j] for j in setup.n_idx]
    return SubcomplexBasis(S, "Q-cartan", lambda k: joint_kernel(
        S, ops, k, [mono for mono in S.basis_of_degree(k) if _psi_only(setup, mono)]))


def q_cartan_violations(setup: ReductionSetup, x: Element) -> List[Violation]:
    cc = setup.cartan
    out = []
    for mono in x.terms:
        if not _psi_only(setup, mono):
            out.append(Violation("Psi-only", cc.algebra.render_monomial(mono), render(x)))
            break
    for j in setup.n_idx:
        r = cc.I_A[j](x)
        if r:
            out.append(Violation(f"N-horizontal (I{j + 1})", render(x), render(r)))
    for k, L in enumerate(cc.total_L):
        r = L(x)
        if r:
            out.append(Violation(f"Q-invariant (L{k + 1})", render(x), render(r)))
    return out


def substitution(setup: ReductionSetup) -> LinearOperator:
    """Om^i -> omega_Q^i (i in n), Om^a -> Psi^a, A fixed: P(X) -> P(Psi + omega_Q)."""
    if "subst" not in setup._cache:
        cc = setup.cartan
        S = cc.algebra
        oq = equivariant_curvature(setup)
        imgs = [oq[i] if i in oq else cc.omega[i] for i in range(setup.lie.dim)] + S.gens()[setup.lie.dim:]
        setup._cache["subst"] = algebra_hom(S, S, imgs, "P(Psi+omega_Q)")
    return setup._cache["subst"]


def n_horizontal_projector(setup: ReductionSetup) -> LinearOperator:
    """prod over j in n (ascending) of (1 - theta~^j I_j) on S g* (x) A."""
    if "h" not in setup._cache:
        cc = setup.cartan
        S = cc.algebra
        h = identity(S)
        for j in setup.n_idx:
            h = (identity(S) - cc.I_A[j].left_multiplied(cc.inclusion(setup.theta[j]))) @ h
        h.name = "h_theta"
        setup._cache["h"] = h
    return setup._cache["h"]


def _as_cartan(cc: CartanComplex, P) -> Element:
    if isinstance(P, str):
        return cc.algebra.parse(P)
    if P.algebra != cc.algebra:
        raise AlgebraMismatch("expected an element of the Cartan algebra S g* (x) A")
    return P


def reduce_cartan_rep(setup: ReductionSetup, P: Element) -> Element:
    """C_theta P = h_theta P(Psi + omega_Q)."""
    cc = setup.cartan
    P = _as_cartan(cc, P)
    if not cc.is_invariant(P):
        raise ValueError(f"input not invariant: {render(P)}")
    out = n_horizontal_projector(setup)(substitution(setup)(P))
    bad = q_cartan_violations(setup, out)
    if bad:
        raise ArithmeticError("internal inconsistency: reduction output not Q-basic: " + bad[0].describe())
    return out


def composite_reduction(setup: ReductionSetup, P: Element, window: Optional[int] = None) -> Element:
    """phi_Q o T0 o phi_G^{-1}: Cartan -> Weil basic via exp(-A_id), then T0, then theta -> 0."""
    cc = setup.cartan
    m = setup.model
    n = m.n
    window = P.degree if window is None else window
    window = window or 0
    B = m.algebra
    to_B = algebra_hom(cc.algebra, B, m.omega + B.gens()[2 * n:], "cartan->weil")
    kal = Kalkman(m, [[int(i == j) for j in range(n)] for i in range(n)])
    weil_rep = exp_nilpotent(-kal.A_T, window)(to_B(P))
    reduced = t0_operator(setup)(weil_rep)
    return weil_to_cartan(cc, m)(reduced)


def composite_cross_check(setup: ReductionSetup, P: Element) -> List[Violation]:
    """C_theta P versus the composite: equal, or cohomologous in (S q* (x) B)^Q for closed P."""
    a = reduce_cartan_rep(setup, P)
    b = composite_reduction(setup, P)
    diff = a - b
    if not diff:
        return []
    k = P.degree or 0
    closed = not setup.cartan.differential(P)
    if closed and is_exact(q_cartan_complex(setup), q_cartan_differential(setup), diff, k):
        return []
    return [Violation("C_theta agrees with phi_Q o T0 o phi_G^-1", render(P), render(diff))]


def closed_invariant_basis(setup: ReductionSetup, k: int) -> List[Element]:
    """Basis of the degree-k cocycles of the G-Cartan complex."""
    cc = setup.cartan
    return joint_kernel(cc.algebra, list(cc.total_L) + [cc.differential], k)


# -- characteristic classes -------------------------------------------------

def invariant_polynomial_violations(setup: ReductionSetup, P: Element) -> List[Violation]:
    cc = setup.cartan
    n = setup.lie.dim
    out = []
    for mono in P.terms:
        if any(mono[n:]):
            out.append(Violation("polynomial in S g*", cc.algebra.render_monomial(mono), render(P)))
            break
    for k, L in enumerate(cc.total_L):
        r = L(P)
        if r:
            out.append(Violation(f"coadjoint invariance (L{k + 1})", render(P), render(r)))
    return out


def char_class(setup: ReductionSetup, P) -> Element:
    """P(Psi + omega_Q), an equivariantly closed element of (S q* (x) B)^Q."""
    cc = setup.cartan
    P = _as_cartan(cc, P)
    bad = invariant_polynomial_violations(setup, P)
    if bad:
        raise ValueError("input not invariant: " + bad[0].describe())
    out = n_horizontal_projector(setup)(substitution(setup)(P))
    bad = q_cartan_violations(setup, out)
    r = q_cartan_differential(setup)(out)
    if r:
        bad.append(Violation("dcar_Q-closed", render(out), render(r)))
    if bad:
        raise ArithmeticError("internal inconsistency: " + bad[0].describe())
    return out


def class_difference_exact(setup0: ReductionSetup, setup1: ReductionSetup, P) -> bool:
    """The characteristic classes of two N-connections on the same operation agree in cohomology."""
    c0 = char_class(setup0, P)
    c1 = char_class(setup1, P)
    if c0.algebra != c1.algebra:
        raise ValueError("setups must share the operation")
    diff = c1 - c0
    if not diff:
        return True
    return is_exact(q_cartan_complex(setup0), q_cartan_differential(setup0), diff, diff.degree)
