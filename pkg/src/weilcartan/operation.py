"""Operations: a graded algebra with d, Lie derivatives L_i and contractions I_i.

Also tensor products of operations, invariant/horizontal/basic subspaces and
exact cohomology ranks of subcomplexes.

Invariance is computed as the joint kernel of the infinitesimal operators
L_i.  This is the right notion for connected groups only.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from . import linalg
from .graded_algebra import Element, GradedAlgebra, Generator, Monomial, render
from .lie import LieAlgebraData
from .operators import Derivation, LinearOperator, algebra_hom, supercommutator


@dataclass(frozen=True)
class Violation:
    check: str
    where: str
    residual: str

    def describe(self) -> str:
        return f"{self.check} at {self.where}: residual {self.residual}"


class NotStable(ValueError):
    """A subspace claimed to be a subcomplex is not closed under the differential."""

    def __init__(self, degree: int, element: Element):
        super().__init__(f"subcomplex not d-stable: image of {render(element)} (degree {degree}) leaves the subspace")
        self.degree = degree
        self.element = element


@dataclass(eq=False)
class OperationSpec:
    algebra: GradedAlgebra
    lie: LieAlgebraData
    d: Derivation
    L: List[Derivation]
    I: List[Derivation]
    name: str = ""
    factors: Optional[Tuple["OperationSpec", "OperationSpec"]] = field(default=None, repr=False)

    def __post_init__(self):
        n = self.lie.dim
        if len(self.L) != n or len(self.I) != n:
            raise ValueError(f"need {n} Lie derivatives and contractions, got {len(self.L)} and {len(self.I)}")
        for D in [self.d, *self.L, *self.I]:
            if D.source != self.algebra:
                raise ValueError("derivation belongs to a different algebra")

    @classmethod
    def from_images(cls, algebra: GradedAlgebra, lie: LieAlgebraData, d, L, I, name: str = ""):
        """Build from generator images (sequences or name-keyed mappings, elements or strings)."""
        dd = Derivation(algebra, d, 1, 1, "d")
        LL = [Derivation(algebra, imgs, 0, 0, f"L{i + 1}") for i, imgs in enumerate(L)]
        II = [Derivation(algebra, imgs, 1, -1, f"I{i + 1}") for i, imgs in enumerate(I)]
        return cls(algebra, lie, dd, LL, II, name)


# -- axiom checking -------------------------------------------------------

def _window_monomials(A: GradedAlgebra, window: int):
    for k in range(window + 1):
        for m in A.basis_of_degree(k):
            yield k, m


def check_axioms(op: OperationSpec, window: int, max_violations: int = 25) -> List[Violation]:
    """Verify d^2 = 0, [L,d] = 0, [L_j,L_k] = C^i_jk L_i, degree shifts,
    [I,I] = 0, [L_j,I_k] = C^i_jk I_i and the Cartan formula on every basis
    monomial of degree <= window.  An empty list means all axioms hold."""
    A, C, n = op.algebra, op.lie.C, op.lie.dim
    out: List[Violation] = []

    def report(check, where, residual):
        if len(out) < max_violations:
            out.append(Violation(check, where, render(residual) if isinstance(residual, Element) else str(residual)))

    # (d1) and declared shifts, on generators
    for D, shift, label in [(op.d, 1, "(b) d"), *[(D, 0, f"(c) L{i + 1}") for i, D in enumerate(op.L)],
                            *[(D, -1, f"(d1) I{i + 1}") for i, D in enumerate(op.I)]]:
        if D.degree_shift != shift:
            report("(d1) shift", label, f"declared shift {D.degree_shift}, expected {shift}")
        for g, img in enumerate(D.images):
            if img and img.degrees() != [A.degrees[g] + shift]:
                report("(d1) degree", f"{label}({A.names[g]})", img)

    d, L, I = op.d, op.L, op.I
    dd = supercommutator(d, d)
    LL = {(j, k): supercommutator(L[j], L[k]) for j in range(n) for k in range(j + 1, n)}
    II = {(j, k): supercommutator(I[j], I[k]) for j in range(n) for k in range(j, n)}
    Ld = [supercommutator(L[j], d) for j in range(n)]
    LI = {(j, k): supercommutator(L[j], I[k]) for j in range(n) for k in range(n)}
    Id = [supercommutator(I[j], d) for j in range(n)]

    for _, m in _window_monomials(A, window):
        x = A.monomial(m)
        where = A.render_monomial(m)
        r = dd(x)
        if r:
            report("(b) d^2=0", where, r.scale(Fraction(1, 2)))
        for j in range(n):
            r = Ld[j](x)
            if r:
                report(f"(c) [L{j + 1},d]=0", where, r)
        for (j, k), P in LL.items():
            r = P(x) - sum((L[i](x).scale(C[i][j][k]) for i in range(n) if C[i][j][k]), A.zero())
            if r:
                report(f"(c) [L{j + 1},L{k + 1}]=L[e{j + 1},e{k + 1}]", where, r)
        for (j, k), P in II.items():
            r = P(x)
            if r:
                report(f"(d2) [I{j + 1},I{k + 1}]=0", where, r)
        for (j, k), P in LI.items():
            r = P(x) - sum((I[i](x).scale(C[i][j][k]) for i in range(n) if C[i][j][k]), A.zero())
            if r:
                report(f"(d3) [L{j + 1},I{k + 1}]=I[e{j + 1},e{k + 1}]", where, r)
        for j in range(n):
            r = Id[j](x) - L[j](x)
            if r:
                report(f"(d4) [I{j + 1},d]=L{j + 1}", where, r)
    return out


# -- tensor products ------------------------------------------------------

def _disjoint_names(left: Sequence[str], right: Sequence[str]) -> List[str]:
    taken = set(left)
    out = []
    for nm in right:
        new = nm
        while new in taken:
            new += "'"
        taken.add(new)
        out.append(new)
    return out


def tensor_product(op1: OperationSpec, op2: OperationSpec, name: str = "") -> OperationSpec:
    """``d = d1 (x) 1 + eps1 (x) d2``, ``L = L1 (x) 1 + 1 (x) L2``, ``I = I1 (x) 1 + eps1 (x) I2``.

    On the free algebra on the union of the generators these are exactly the
    derivations with the factor images on each block of generators.  Right
    factor names that collide get primes appended.
    """
    if op1.lie != op2.lie:
        raise ValueError("Lie mismatch: tensor factors must carry the same Lie algebra")
    A1, A2 = op1.algebra, op2.algebra
    rnames = _disjoint_names(A1.names, A2.names)
    A = GradedAlgebra([*A1.generators, *[Generator(nm, g.degree) for nm, g in zip(rnames, A2.generators)]])
    inc1 = algebra_hom(A1, A, A.gens()[:A1.ngens], "incl1")
    inc2 = algebra_hom(A2, A, A.gens()[A1.ngens:], "incl2")

    def join(D1: Derivation, D2: Derivation, label: str) -> Derivation:
        imgs = [inc1(v) for v in D1.images] + [inc2(v) for v in D2.images]
        return Derivation(A, imgs, D1.parity, D1.degree_shift, label)

    n = op1.lie.dim
    op = OperationSpec(A, op1.lie, join(op1.d, op2.d, "d"),
                       [join(op1.L[i], op2.L[i], f"L{i + 1}") for i in range(n)],
                       [join(op1.I[i], op2.I[i], f"I{i + 1}") for i in range(n)],
                       name or f"{op1.name or 'A1'}(x){op2.name or 'A2'}", (op1, op2))
    return op


def left_inclusion(op: OperationSpec) -> LinearOperator:
    A1 = op.factors[0].algebra
    return algebra_hom(A1, op.algebra, op.algebra.gens()[:A1.ngens], "incl1")


def right_inclusion(op: OperationSpec) -> LinearOperator:
    A1 = op.factors[0].algebra
    return algebra_hom(op.factors[1].algebra, op.algebra, op.algebra.gens()[A1.ngens:], "incl2")


def lift_right(op: OperationSpec, D2: Derivation, name: str = "") -> Derivation:
    """``eps1 (x) D2`` (odd D2) or ``1 (x) D2`` (even D2) as a derivation of the tensor product."""
    A1 = op.factors[0].algebra
    inc2 = right_inclusion(op)
    imgs = [op.algebra.zero()] * A1.ngens + [inc2(v) for v in D2.images]
    return Derivation(op.algebra, imgs, D2.parity, D2.degree_shift, name or D2.name)


def lift_left(op: OperationSpec, D1: Derivation, name: str = "") -> Derivation:
    A1 = op.factors[0].algebra
    inc1 = left_inclusion(op)
    imgs = [inc1(v) for v in D1.images] + [op.algebra.zero()] * (op.algebra.ngens - A1.ngens)
    return Derivation(op.algebra, imgs, D1.parity, D1.degree_shift, name or D1.name)


def trivial_operation(lie: LieAlgebraData) -> OperationSpec:
    """The ground field Q with all structure maps zero."""
    A = GradedAlgebra([])
    return OperationSpec.from_images(A, lie, [], [[] for _ in range(lie.dim)], [[] for _ in range(lie.dim)],
                                     "Q")


# -- coordinates ----------------------------------------------------------

def to_vector(x: Element, k: int) -> linalg.SparseVec:
    basis = x.algebra.basis_of_degree(k)
    pos = {m: i for i, m in enumerate(basis)}
    vec = {}
    for m, c in x.terms.items():
        if m not in pos:
            raise ValueError(f"element {render(x)} has terms outside degree {k}")
        vec[pos[m]] = c
    return vec


def from_vector(A: GradedAlgebra, k: int, vec: linalg.SparseVec) -> Element:
    basis = A.basis_of_degree(k)
    return Element.from_terms(A, {basis[i]: v for i, v in vec.items()})


def joint_kernel(A: GradedAlgebra, operators: Sequence[LinearOperator], k: int,
                 domain: Optional[Sequence[Monomial]] = None) -> List[Element]:
    """Basis of the common kernel of ``operators`` inside degree ``k``.

    ``domain`` restricts to the span of the given degree-k monomials.
    """
    dom = list(A.basis_of_degree(k) if domain is None else domain)
    rows: Dict[Tuple[int, Monomial], Dict[int, Fraction]] = {}
    for c, m in enumerate(dom):
        for t, P in enumerate(operators):
            for m2, v in P.apply_monomial(m).terms.items():
                rows.setdefault((t, m2), {})[c] = v
    kern = linalg.nullspace(list(rows.values()), len(dom))
    return [Element.from_terms(A, {dom[i]: v for i, v in vec.items()}) for vec in kern]


@dataclass(eq=False)
class SubcomplexBasis:
    """Per-degree spanning lists of a subspace, built lazily by ``builder(k)``."""

    algebra: GradedAlgebra
    kind: str
    builder: Callable[[int], List[Element]]
    _cache: Dict[int, List[Element]] = field(default_factory=dict, repr=False)

    def basis(self, k: int) -> List[Element]:
        if k not in self._cache:
            self._cache[k] = list(self.builder(k)) if k >= 0 else []
        return self._cache[k]

    def dim(self, k: int) -> int:
        return len(self.basis(k))

    def dims(self, K: int) -> List[int]:
        return [self.dim(k) for k in range(K + 1)]


def full_complex(A: GradedAlgebra) -> SubcomplexBasis:
    return SubcomplexBasis(A, "full", lambda k: [A.monomial(m) for m in A.basis_of_degree(k)])


def subspace_basis(op: OperationSpec, kind: str, k: Optional[int] = None):
    """Exact basis of the invariant, horizontal or basic part.

    Returns the degree-k list when ``k`` is given, else a lazy SubcomplexBasis.
    """
    if kind == "invariant":
        ops = list(op.L)
    elif kind == "horizontal":
        ops = list(op.I)
    elif kind == "basic":
        ops = list(op.L) + list(op.I)
    else:
        raise ValueError(f"unknown subspace kind {kind!r}")
    sub = SubcomplexBasis(op.algebra, kind, lambda deg: joint_kernel(op.algebra, ops, deg))
    return sub if k is None else sub.basis(k)


def cohomology_dims(complex: SubcomplexBasis, differential: LinearOperator, K: int) -> List[int]:
    """``dim H^k = dim V_k - rank d_k - rank d_{k-1}`` for k = 0..K, exact over Q.

    Raises NotStable if d maps some V_k outside V_{k+1}.
    """
    ranks = {}
    for k in range(K + 1):
        target = linalg.Echelon()
        for b in complex.basis(k + 1):
            target.add(to_vector(b, k + 1))
        images = []
        for b in complex.basis(k):
            img = differential(b)
            vec = to_vector(img, k + 1)
            if not target.contains(vec):
                raise NotStable(k, b)
            images.append(vec)
        ranks[k] = linalg.rank(images)
    ranks[-1] = 0
    return [complex.dim(k) - ranks[k] - ranks[k - 1] for k in range(K + 1)]


def is_exact(complex: SubcomplexBasis, differential: LinearOperator, x: Element, k: int) -> bool:
    """True if the degree-k element x lies in d(V_{k-1})."""
    images = [to_vector(differential(b), k) for b in complex.basis(k - 1)]
    return linalg.in_span(images, to_vector(x, k))
