"""Linear operators and super-derivations on graded algebras.

A :class:`LinearOperator` is defined by its action on monomials and extended
linearly; results per monomial are memoized.  A :class:`Derivation` is given
by generator images only and evaluated through the signed Leibniz rule.
Memo tables are plain dicts: concurrent readers may recompute an entry but
always store the same value.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Union

from .graded_algebra import AlgebraMismatch, Element, GradedAlgebra, Monomial, Scalar


class NotNilpotent(ArithmeticError):
    def __init__(self, monomial: str, power: int):
        super().__init__(f"not nilpotent on window: power {power} still nonzero on {monomial}")
        self.monomial = monomial
        self.power = power


class LinearOperator:
    """Q-linear map between graded algebras, homogeneous of a fixed degree shift.

    ``parity`` is the Z/2 degree used in super-commutators; it defaults to the
    shift mod 2.
    """

    def __init__(self, source: GradedAlgebra, target: GradedAlgebra,
                 on_monomial: Callable[[Monomial], Element], degree_shift: int = 0,
                 parity: Optional[int] = None, name: str = ""):
        self.source = source
        self.target = target
        self._on_monomial = on_monomial
        self.degree_shift = degree_shift
        self.parity = degree_shift % 2 if parity is None else parity % 2
        self.name = name
        self._memo: Dict[Monomial, Element] = {}

    def __repr__(self):
        return f"<{type(self).__name__} {self.name or '?'} shift={self.degree_shift}>"

    def apply_monomial(self, m: Monomial) -> Element:
        r = self._memo.get(m)
        if r is None:
            r = self._on_monomial(m)
            if r.algebra != self.target:
                raise AlgebraMismatch(f"operator {self.name!r} produced an element of the wrong algebra")
            self._memo[m] = r
        return r

    def __call__(self, x: Element) -> Element:
        if x.algebra != self.source:
            raise AlgebraMismatch()
        out: Dict[Monomial, Fraction] = {}
        for m, c in x.terms.items():
            for m2, c2 in self.apply_monomial(m).terms.items():
                v = out.get(m2, 0) + c * c2
                if v:
                    out[m2] = v
                else:
                    del out[m2]
        return Element(self.target, out)

    # -- algebra of operators ----------------------------------------------

    def __matmul__(self, other: "LinearOperator") -> "LinearOperator":
        if other.target != self.source:
            raise AlgebraMismatch()
        return LinearOperator(other.source, self.target, lambda m: self(other.apply_monomial(m)),
                              self.degree_shift + other.degree_shift, self.parity + other.parity,
                              f"({self.name} o {other.name})")

    def _check_same(self, other: "LinearOperator"):
        if other.source != self.source or other.target != self.target:
            raise AlgebraMismatch()

    def __add__(self, other: "LinearOperator") -> "LinearOperator":
        self._check_same(other)
        return LinearOperator(self.source, self.target,
                              lambda m: self.apply_monomial(m) + other.apply_monomial(m),
                              self.degree_shift, self.parity, f"({self.name} + {other.name})")

    def __sub__(self, other: "LinearOperator") -> "LinearOperator":
        self._check_same(other)
        return LinearOperator(self.source, self.target,
                              lambda m: self.apply_monomial(m) - other.apply_monomial(m),
                              self.degree_shift, self.parity, f"({self.name} - {other.name})")

    def __neg__(self) -> "LinearOperator":
        return self.scaled(-1)

    def scaled(self, c: Scalar) -> "LinearOperator":
        c = Fraction(c)
        return LinearOperator(self.source, self.target, lambda m: self.apply_monomial(m).scale(c),
                              self.degree_shift, self.parity, f"{c}*{self.name}")

    __rmul__ = scaled

    def matrix(self, k: int) -> List[List[Fraction]]:
        return operator_matrix(self, k)


class Derivation(LinearOperator):
    """Super-derivation determined by generator images.

    ``D(ab) = D(a) b + (-1)^{parity * deg a} a D(b)``.
    """

    def __init__(self, algebra: GradedAlgebra, images: Union[Sequence[Element], Mapping], parity: int,
                 degree_shift: int, name: str = ""):
        if isinstance(images, Mapping):
            imgs = [algebra.zero()] * algebra.ngens
            for key, v in images.items():
                i = algebra.index(key) if isinstance(key, str) else key
                imgs[i] = _as_element(algebra, v)
        else:
            imgs = [_as_element(algebra, v) for v in images]
            if len(imgs) != algebra.ngens:
                raise ValueError("missing generator image: one image per generator is required")
        self.images = tuple(imgs)
        super().__init__(algebra, algebra, self._leibniz, degree_shift, parity, name)

    @property
    def algebra(self) -> GradedAlgebra:
        return self.source

    def _leibniz(self, m: Monomial) -> Element:
        A = self.source
        out = A.zero()
        prefix = A.one()
        prefix_deg = 0
        for g, e in enumerate(m):
            if not e:
                continue
            img = self.images[g]
            if img:
                gen_e1 = A.monomial(tuple(e - 1 if i == g else 0 for i in range(A.ngens)))
                suffix = A.monomial(tuple(m[i] if i > g else 0 for i in range(A.ngens)))
                term = prefix * (gen_e1 * img).scale(e) * suffix
                if self.parity and prefix_deg % 2:
                    term = -term
                out = out + term
            prefix = prefix * A.monomial(tuple(e if i == g else 0 for i in range(A.ngens)))
            prefix_deg += e * A.degrees[g]
        return out

    def scaled(self, c: Scalar) -> "Derivation":
        return Derivation(self.source, [v.scale(c) for v in self.images], self.parity,
                          self.degree_shift, f"{Fraction(c)}*{self.name}")

    def __add__(self, other):
        if isinstance(other, Derivation) and other.parity == self.parity:
            self._check_same(other)
            return Derivation(self.source, [a + b for a, b in zip(self.images, other.images)],
                              self.parity, self.degree_shift, f"({self.name} + {other.name})")
        return super().__add__(other)

    def __sub__(self, other):
        if isinstance(other, Derivation) and other.parity == self.parity:
            self._check_same(other)
            return Derivation(self.source, [a - b for a, b in zip(self.images, other.images)],
                              self.parity, self.degree_shift, f"({self.name} - {other.name})")
        return super().__sub__(other)

    def left_multiplied(self, a: Element) -> "Derivation":
        """The derivation ``x -> a * D(x)`` for homogeneous ``a``."""
        deg = a.degree or 0
        return Derivation(self.source, [a * v for v in self.images], self.parity + deg,
                          self.degree_shift + deg, f"{a}*{self.name}")


def _as_element(algebra: GradedAlgebra, v) -> Element:
    if isinstance(v, Element):
        if v.algebra != algebra:
            raise AlgebraMismatch()
        return v
    if isinstance(v, str):
        return algebra.parse(v)
    return algebra.scalar(v)


def zero_derivation(algebra: GradedAlgebra, parity: int, degree_shift: int, name: str = "0") -> Derivation:
    return Derivation(algebra, [algebra.zero()] * algebra.ngens, parity, degree_shift, name)


def evaluate(D: LinearOperator, a: Element) -> Element:
    return D(a)


def identity(algebra: GradedAlgebra) -> LinearOperator:
    return LinearOperator(algebra, algebra, algebra.monomial, 0, 0, "id")


def zero_operator(source: GradedAlgebra, target: GradedAlgebra = None, degree_shift: int = 0) -> LinearOperator:
    target = source if target is None else target
    return LinearOperator(source, target, lambda m: target.zero(), degree_shift, None, "0")


def left_multiplication(a: Element) -> LinearOperator:
    A = a.algebra
    deg = a.degree or 0
    return LinearOperator(A, A, lambda m: a * A.monomial(m), deg, deg, f"mu({a})")


def supercommutator(P: LinearOperator, Q: LinearOperator) -> LinearOperator:
    """``PQ - (-1)^{|P||Q|} QP``.  For two derivations the result is again a Derivation."""
    if P.source != Q.source or P.target != Q.target or P.source != P.target:
        raise AlgebraMismatch()
    sign = -1 if (P.parity * Q.parity) % 2 else 1
    if isinstance(P, Derivation) and isinstance(Q, Derivation):
        A = P.source
        imgs = [P(Q.images[g]) - Q(P.images[g]).scale(sign) for g in range(A.ngens)]
        return Derivation(A, imgs, P.parity + Q.parity, P.degree_shift + Q.degree_shift,
                          f"[{P.name},{Q.name}]")
    comp = (P @ Q) - (Q @ P).scaled(sign)
    comp.name = f"[{P.name},{Q.name}]"
    return comp


def algebra_hom(source: GradedAlgebra, target: GradedAlgebra, images: Union[Sequence, Mapping],
                name: str = "hom") -> LinearOperator:
    """Multiplicative extension of generator images (degree-preserving images expected)."""
    if isinstance(images, Mapping):
        imgs: List[Element] = [None] * source.ngens
        for key, v in images.items():
            i = source.index(key) if isinstance(key, str) else key
            imgs[i] = _as_element(target, v)
        missing = [source.names[i] for i, v in enumerate(imgs) if v is None]
        if missing:
            raise ValueError(f"missing generator image for {missing}")
    else:
        imgs = [_as_element(target, v) for v in images]
        if len(imgs) != source.ngens:
            raise ValueError("one image per generator is required")

    def on_monomial(m: Monomial) -> Element:
        out = target.one()
        for g, e in enumerate(m):
            for _ in range(e):
                out = out * imgs[g]
        return out

    op = LinearOperator(source, target, on_monomial, 0, 0, name)
    op.images = tuple(imgs)
    return op


def operator_matrix(P: LinearOperator, k: int) -> List[List[Fraction]]:
    """Matrix of ``P`` from degree ``k`` to degree ``k + shift`` in canonical bases.

    Entry ``[r][c]`` is the coefficient of target basis monomial ``r`` in the
    image of source basis monomial ``c``.
    """
    src = P.source.basis_of_degree(k)
    tgt = P.target.basis_of_degree(k + P.degree_shift)
    row_of = {m: r for r, m in enumerate(tgt)}
    M = [[Fraction(0)] * len(src) for _ in tgt]
    for c, m in enumerate(src):
        for m2, v in P.apply_monomial(m).terms.items():
            if m2 not in row_of:
                raise ValueError(f"operator {P.name!r} is not homogeneous of shift {P.degree_shift}")
            M[row_of[m2]][c] = v
    return M


def exp_nilpotent(N: LinearOperator, window: int) -> LinearOperator:
    """``sum_m N^m / m!`` on all monomials of degree <= ``window``.

    Nilpotency is verified eagerly on the window; the series for each basis
    monomial must terminate within the total dimension of the window.
    """
    A = N.source
    if N.target != A:
        raise AlgebraMismatch()
    if N.degree_shift:
        raise ValueError("exp_nilpotent needs a degree-preserving operator")
    bound = sum(len(A.basis_of_degree(k)) for k in range(window + 1)) + 1
    table: Dict[Monomial, Element] = {}
    for k in range(window + 1):
        for m in A.basis_of_degree(k):
            term = A.monomial(m)
            total = term
            power = 0
            while term:
                power += 1
                if power > bound:
                    raise NotNilpotent(A.render_monomial(m), power)
                term = N(term).scale(Fraction(1, power))
                total = total + term
            table[m] = total

    def on_monomial(m: Monomial) -> Element:
        try:
            return table[m]
        except KeyError:
            raise ValueError(f"monomial {A.render_monomial(m)} lies outside the degree window {window}") from None

    return LinearOperator(A, A, on_monomial, 0, 0, f"exp({N.name})")


__all__ = [
    "LinearOperator", "Derivation", "NotNilpotent", "evaluate", "supercommutator", "operator_matrix",
    "exp_nilpotent", "algebra_hom", "identity", "zero_operator", "zero_derivation",
    "left_multiplication",
]
