import pytest
from hypothesis import given, settings, strategies as st

from weilcartan.equivariant import (Kalkman, brst_basic_check, cartan_cohomology, cartan_complex,
                                    cartan_identity_check, kalkman_conjugation_check, kalkman_corrected_check,
                                    kalkman_map_basic, seeded_matrix, weil_basic_cohomology, weil_model)
from weilcartan.lie import abelian, su2, u1
from weilcartan.operation import joint_kernel, trivial_operation
from weilcartan.weil import build_weil

from conftest import circle_op, load_op


@pytest.fixture(scope="module")
def su2_model():
    return weil_model(build_weil(su2(), ["a1", "a2", "a3"], ["F1", "F2", "F3"]).operation)


@pytest.fixture(scope="module")
def circle_model():
    return weil_model(circle_op())


def test_cartan_differential_examples():
    cc = cartan_complex(circle_op())
    S = cc.algebra
    assert cc.differential(S.parse("x")) == S.parse("-Om1")
    assert cc.differential(S.parse("Om1")) == 0
    d = cc.differential
    for k in range(5):
        for b in cc.invariant_complex().basis(k):
            assert d(d(b)) == 0


@pytest.mark.parametrize("op,K,dims", [
    (circle_op(), 5, [1, 0, 0, 0, 0, 0]),
    (trivial_operation(u1()), 4, [1, 0, 1, 0, 1]),
    (circle_op(abelian(2)), 4, [1, 0, 1, 0, 1]),
])
def test_cartan_cohomology(op, K, dims):
    assert cartan_cohomology(op, K) == dims
    assert weil_basic_cohomology(op, K) == dims


def test_frame_model_is_a_point(frame):
    assert cartan_cohomology(frame, 4) == [1, 0, 0, 0, 0]
    assert weil_basic_cohomology(frame, 3) == [1, 0, 0, 0]


@pytest.mark.parametrize("name", ["circle", "t2", "su2_frame", "circle_weil_u1"])
def test_cartan_identities(name):
    assert cartan_identity_check(cartan_complex(load_op(name)), 4) == []


def test_full_dcar_squared_is_minus_omega_L(frame):
    cc = cartan_complex(frame)
    S = cc.algebra
    x = S.parse("x1*x2")
    assert cc.differential(cc.differential(x)) == -sum((cc.omega[k] * cc.L_A[k](x) for k in range(3)), S.zero())
    assert cc.differential(cc.differential(x)) != 0


@pytest.mark.parametrize("T", [[[0]], [[1]], [[-2]], [[3]]])
def test_kalkman_u1(circle_model, T):
    assert kalkman_conjugation_check(circle_model, T, 5) == []


def test_kalkman_zero_is_identity(su2_model):
    K = Kalkman(su2_model, [[0] * 3 for _ in range(3)])
    assert all(v == 0 for v in K.A_T.images)
    assert list(K.D_T.images) == list(su2_model.op.d.images)


def test_kalkman_identity_su2(su2_model):
    assert kalkman_conjugation_check(su2_model, [[int(i == j) for j in range(3)] for i in range(3)], 3) == []


def test_kalkman_generic_T_needs_correction(su2_model):
    """For T that does not respect brackets the conjugate differs from D_T by R_T."""
    T = seeded_matrix(3, 1)
    bad = kalkman_conjugation_check(su2_model, T, 2)
    assert bad
    assert kalkman_corrected_check(su2_model, T, 3) == []
    assert any(Kalkman(su2_model, T).correction_term().images)


@settings(max_examples=10, deadline=None)
@given(st.lists(st.integers(-2, 2), min_size=4, max_size=4))
def test_kalkman_abelian_any_T(entries):
    model = weil_model(circle_op(abelian(2), [1, 0]))
    T = [entries[:2], entries[2:]]
    assert not any(Kalkman(model, T).correction_term().images)
    assert kalkman_conjugation_check(model, T, 3) == []


def test_stepwise_exponential_matches(su2_model):
    K = Kalkman(su2_model, seeded_matrix(3, 7))
    E = K.stepwise_exp(3)
    F = K.exp_pair(3)[0]
    B = su2_model.algebra
    assert all(E.apply_monomial(m) == F.apply_monomial(m) for k in range(4) for m in B.basis_of_degree(k))


def test_brst_examples(circle_model):
    B = circle_model.algebra
    K = Kalkman(circle_model, [[1]])
    I_id = K.conjugate(circle_model.op.I[0], 3)
    assert I_id(B.parse("Om1*x")) == 0
    assert I_id(B.parse("th1")) != 0
    assert K.D_T(B.parse("x")) == B.parse("-Om1")
    assert brst_basic_check(circle_model, 4) == []


def test_brst_su2(su2_model):
    assert brst_basic_check(su2_model, 3) == []


def test_kalkman_map_basic(circle_model):
    B = circle_model.algebra
    out = kalkman_map_basic(circle_model, B.parse("th1 - x"))
    assert out == out.algebra.parse("-x")
    t2m = weil_model(circle_op(abelian(2), [1, 0]))
    B2 = t2m.algebra
    assert kalkman_map_basic(t2m, B2.parse("Om2")) == cartan_complex(circle_op(abelian(2), [1, 0])).algebra.parse("Om2")
    assert kalkman_map_basic(t2m, B2.one()) == 1
    with pytest.raises(ValueError):
        kalkman_map_basic(circle_model, B.parse("x"))


def test_kalkman_map_is_chain_map_on_basics(su2_model):
    """theta -> 0 sends basic cocycles of W (x) A to Cartan cocycles."""
    cc = cartan_complex(su2_model.op.factors[1])
    B = su2_model.algebra
    for k in range(4):
        for b in joint_kernel(B, list(su2_model.op.L) + list(su2_model.op.I), k):
            img = kalkman_map_basic(su2_model, b, cc)
            assert kalkman_map_basic(su2_model, su2_model.op.d(b), cc) == cc.differential(img)


def test_name_clash_rejected(w_u1):
    with pytest.raises(ValueError):
        weil_model(w_u1.operation)


def _sympy_conjugate(model, T, k):
    """exp(A_T) D exp(-A_T) on degree k from operator matrices alone (sympy oracle)."""
    import sympy
    from weilcartan.operators import operator_matrix
    K = Kalkman(model, T)
    A_k = sympy.Matrix(operator_matrix(K.A_T, k))
    A_k1 = sympy.Matrix(operator_matrix(K.A_T, k + 1))
    D = sympy.Matrix(operator_matrix(model.op.d, k))

    def expm(N, sign):
        out, term = sympy.eye(N.shape[0]), sympy.eye(N.shape[0])
        for j in range(1, N.shape[0] + 1):
            term = term * N * sign / j
            out += term
        return out

    return expm(A_k1, 1) * D * expm(A_k, -1), K


@pytest.mark.parametrize("seed", [1, 2])
def test_conjugation_oracle_su2(su2_model, seed):
    import sympy
    from weilcartan.operators import operator_matrix
    T = seeded_matrix(3, seed)
    conj, K = _sympy_conjugate(su2_model, T, 1)
    assert conj == sympy.Matrix(operator_matrix(K.D_T + K.correction_term(), 1))
    assert conj != sympy.Matrix(operator_matrix(K.D_T, 1))


def test_conjugation_oracle_identity(su2_model):
    import sympy
    from weilcartan.operators import operator_matrix
    conj, K = _sympy_conjugate(su2_model, [[int(i == j) for j in range(3)] for i in range(3)], 2)
    assert conj == sympy.Matrix(operator_matrix(K.D_T, 2))
