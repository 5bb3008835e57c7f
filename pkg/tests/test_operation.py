import sympy
import pytest

from weilcartan.equivariant import cartan_complex
from weilcartan.graded_algebra import GradedAlgebra
from weilcartan.lie import abelian, su2, u1
from weilcartan.operation import (NotStable, OperationSpec, SubcomplexBasis, check_axioms, cohomology_dims,
                                  full_complex, is_exact, joint_kernel, right_inclusion, subspace_basis,
                                  tensor_product, trivial_operation)
from weilcartan.operators import operator_matrix
from weilcartan.weil import build_weil

from conftest import circle_op


def sympy_cohomology(A, d, K):
    """Oracle: dense matrices of d per degree, ranks by sympy."""
    ranks = {-1: 0}
    for k in range(K + 1):
        M = operator_matrix(d, k)
        ranks[k] = sympy.Matrix(M).rank() if M and M[0] else 0
    return [len(A.basis_of_degree(k)) - ranks[k] - ranks[k - 1] for k in range(K + 1)]


def test_circle_axioms_ok():
    assert check_axioms(circle_op(), 5) == []


def test_circle_with_nonzero_L_violates_cartan_formula():
    A = GradedAlgebra([("x", 1)])
    op = OperationSpec.from_images(A, u1(), ["0"], [["x"]], [["1"]])
    bad = check_axioms(op, 3)
    assert any(v.check.startswith("(d4)") and v.where == "x" for v in bad)


def test_weil_su2_axioms(w_su2):
    assert check_axioms(w_su2.operation, 4) == []


def test_degree_violation_reported():
    A = GradedAlgebra([("x", 1), ("y", 2)])
    op = OperationSpec.from_images(A, u1(), ["x", "0"], [["0", "0"]], [["1", "0"]])
    bad = check_axioms(op, 2)
    assert any("degree" in v.check for v in bad)


def test_tensor_examples(w_u1):
    op = tensor_product(w_u1.operation, circle_op())
    B = op.algebra
    assert B.names == ("th1", "Om1", "x")
    assert op.d(B.parse("th1*x")) == B.parse("Om1*x")
    assert op.I[0](B.parse("x")) == 1
    assert check_axioms(op, 5) == []


def test_tensor_with_ground_field_is_same_operation(w_su2):
    op = tensor_product(w_su2.operation, trivial_operation(su2()))
    assert op.algebra == w_su2.algebra
    assert [D.images for D in op.L] == [D.images for D in w_su2.operation.L]
    assert op.d.images == w_su2.operation.d.images


def test_tensor_renames_colliding_generators(w_u1):
    op = tensor_product(w_u1.operation, w_u1.operation)
    assert op.algebra.names == ("th1", "Om1", "th1'", "Om1'")
    assert check_axioms(op, 4) == []
    inc = right_inclusion(op)
    assert inc(w_u1.algebra.parse("th1")) == op.algebra.parse("th1'")


def test_tensor_requires_same_lie(w_u1):
    with pytest.raises(ValueError):
        tensor_product(w_u1.operation, circle_op(abelian(2)))


def test_subspace_examples(w_u1):
    op = circle_op()
    assert subspace_basis(op, "basic", 0) == [op.algebra.one()]
    assert subspace_basis(op, "basic", 1) == []
    W = w_u1.operation
    assert subspace_basis(W, "horizontal", 2) == [W.algebra.parse("Om1")]
    S = cartan_complex(trivial_operation(su2()))
    inv4 = joint_kernel(S.algebra, S.total_L, 4)
    assert len(inv4) == 1
    assert inv4[0] == inv4[0].coefficient((2, 0, 0)) * S.algebra.parse("Om1^2 + Om2^2 + Om3^2")
    with pytest.raises(ValueError):
        subspace_basis(W, "vertical")


def test_joint_kernel_elements_are_killed(w_su2):
    op = w_su2.operation
    for k in range(5):
        for b in subspace_basis(op, "basic", k):
            assert all(not D(b) for D in op.L + op.I)


def test_cohomology_examples(w_u1):
    op = circle_op()
    assert cohomology_dims(full_complex(op.algebra), op.d, 1) == [1, 1]
    W = w_u1.operation
    assert cohomology_dims(full_complex(W.algebra), W.d, 4) == [1, 0, 0, 0, 0]
    assert cohomology_dims(subspace_basis(W, "basic"), W.d, 4) == [1, 0, 1, 0, 1]


@pytest.mark.parametrize("L,K", [(u1(), 6), (abelian(2), 4), (su2(), 3)])
def test_cohomology_matches_sympy(L, K):
    W = build_weil(L)
    assert cohomology_dims(full_complex(W.algebra), W.operation.d, K) == sympy_cohomology(W.algebra, W.operation.d, K)


def test_cohomology_rejects_unstable_subspace(w_u1):
    W = w_u1.operation
    # span{theta} is not a subcomplex: d theta = Omega leaves it
    fake = SubcomplexBasis(W.algebra, "fake", lambda k: [W.algebra.parse("th1")] if k == 1 else [])
    with pytest.raises(NotStable):
        cohomology_dims(fake, W.d, 1)
    assert subspace_basis(W, "horizontal").dims(2) == [1, 0, 1]


def test_is_exact(w_u1):
    W = w_u1.operation
    full = full_complex(W.algebra)
    assert is_exact(full, W.d, W.algebra.parse("Om1"), 2)
    op = circle_op()
    assert not is_exact(full_complex(op.algebra), op.d, op.algebra.parse("x"), 1)
