import pytest
from hypothesis import given, settings, strategies as st

from weilcartan.equivariant import Kalkman, weil_model
from weilcartan.graded_algebra import Element, GradedAlgebra
from weilcartan.lie import abelian, su2
from weilcartan.operators import (Derivation, NotNilpotent, algebra_hom, exp_nilpotent, identity, operator_matrix,
                                  supercommutator, zero_operator)
from weilcartan.weil import build_weil, exterior_part

from conftest import circle_op


def test_evaluate_examples(w_u1):
    circle = circle_op()
    x = circle.algebra.gen(0)
    assert circle.d(x) == 0
    A = w_u1.algebra
    assert w_u1.operation.d(A.parse("th1*Om1")) == A.parse("Om1^2")
    lam = exterior_part(su2())
    assert lam.I[0](lam.algebra.parse("th1*th2")) == lam.algebra.parse("th2")


def test_supercommutator_examples(w_su2):
    lam = exterior_part(su2())
    sq = supercommutator(lam.I[0], lam.I[0])
    assert all(v == 0 for v in sq.images)
    c = circle_op()
    assert all(v == 0 for v in supercommutator(c.d, c.d).images)
    op = w_su2.operation
    for k in range(3):
        Lk = supercommutator(op.I[k], op.d)
        assert list(Lk.images) == list(op.L[k].images)


def test_operator_matrix_examples(w_u1):
    assert operator_matrix(w_u1.operation.d, 1) == [[1]]
    A = w_u1.algebra
    assert operator_matrix(zero_operator(A), 2) == [[0]]
    assert operator_matrix(identity(A), 4) == [[1]]


def test_exp_examples():
    A = GradedAlgebra([("x", 1), ("y", 1)])
    N = Derivation(A, ["0", "x"], 0, 0)  # y -> x, N^2 = 0
    E = exp_nilpotent(N, 2)
    for k in range(3):
        for m in A.basis_of_degree(k):
            assert E.apply_monomial(m) == A.monomial(m) + N.apply_monomial(m)
    Z = exp_nilpotent(zero_operator(A), 2)
    assert all(Z.apply_monomial(m) == A.monomial(m) for k in range(3) for m in A.basis_of_degree(k))


def test_exp_of_commuting_sum_is_product():
    model = weil_model(build_weil(abelian(2), ["a1", "a2"], ["F1", "F2"]).operation)
    K = Kalkman(model, [[1, 0], [0, 1]])
    a, b = K.elementary(0, 0), K.elementary(1, 1)
    assert all(v == 0 for v in supercommutator(a, b).images)
    lhs = exp_nilpotent(a + b, 4)
    rhs = exp_nilpotent(a, 4) @ exp_nilpotent(b, 4)
    B = model.algebra
    assert all(lhs.apply_monomial(m) == rhs.apply_monomial(m) for k in range(5) for m in B.basis_of_degree(k))


def test_exp_rejects_non_nilpotent():
    A = GradedAlgebra([("x", 1)])
    euler = Derivation(A, ["x"], 0, 0)
    with pytest.raises(NotNilpotent):
        exp_nilpotent(euler, 1)


def test_exp_outside_window():
    A = GradedAlgebra([("x", 1), ("y", 1)])
    E = exp_nilpotent(Derivation(A, ["0", "x"], 0, 0), 0)
    with pytest.raises(ValueError):
        E(A.gen(0))


def test_wrong_image_count():
    A = GradedAlgebra([("x", 1)])
    with pytest.raises(ValueError):
        Derivation(A, [], 1, 1)


# -- Leibniz and nilpotent exponentials as properties ----------------------

B = GradedAlgebra([("a", 1), ("b", 2), ("c", 1), ("e", 2)])


@st.composite
def homogeneous(draw, k=None):
    k = draw(st.integers(0, 4)) if k is None else k
    basis = B.basis_of_degree(k)
    terms = {m: draw(st.fractions(-2, 2, max_denominator=2)) for m in draw(st.lists(st.sampled_from(basis), max_size=3))} \
        if basis else {}
    return Element.from_terms(B, terms), k


@st.composite
def derivations(draw):
    parity = draw(st.integers(0, 1))
    shift = parity  # degree shift of the same parity
    imgs = []
    for g in B.generators:
        x, _ = draw(homogeneous(g.degree + shift)) if g.degree + shift >= 0 else (B.zero(), 0)
        imgs.append(x)
    return Derivation(B, imgs, parity, shift)


@settings(max_examples=80, deadline=None)
@given(derivations(), homogeneous(), homogeneous())
def test_leibniz_rule(D, xa, yb):
    x, k = xa
    y, _ = yb
    assert D(x * y) == D(x) * y + (x * D(y)).scale((-1) ** (D.parity * k))


@settings(max_examples=60, deadline=None)
@given(derivations(), derivations(), homogeneous())
def test_supercommutator_of_derivations_matches_composition(P, Q, xa):
    x, _ = xa
    sign = (-1) ** (P.parity * Q.parity)
    assert supercommutator(P, Q)(x) == P(Q(x)) - Q(P(x)).scale(sign)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 1), st.integers(0, 1), st.integers(-2, 2)), max_size=4))
def test_exp_inverse(entries):
    """theta^j I_i on the A-factor of W_{T^2} (x) W_{T^2} is nilpotent; exp(N) exp(-N) = 1."""
    model = weil_model(build_weil(abelian(2), ["a1", "a2"], ["F1", "F2"]).operation)
    T = [[0, 0], [0, 0]]
    for i, j, v in entries:
        T[i][j] = v
    N = Kalkman(model, T).A_T
    E, Einv = exp_nilpotent(N, 3), exp_nilpotent(-N, 3)
    Bm = model.algebra
    for k in range(4):
        for m in Bm.basis_of_degree(k):
            assert E(Einv.apply_monomial(m)) == Bm.monomial(m)


def test_algebra_hom_multiplicative():
    A = GradedAlgebra([("x", 1), ("y", 1), ("z", 2)])
    f = algebra_hom(A, A, ["y", "x", "z + x*y"])
    assert f(A.parse("x*y")) == -A.parse("x*y")
    assert f(A.parse("z^2")) == A.parse("z^2 + 2*x*y*z")
    with pytest.raises(ValueError):
        algebra_hom(A, A, {"x": "y"})
