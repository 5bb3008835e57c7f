from pathlib import Path

import pytest

from weilcartan.graded_algebra import GradedAlgebra
from weilcartan.lie import abelian, su2, u1
from weilcartan.model_file import load_model
from weilcartan.operation import OperationSpec
from weilcartan.weil import build_weil

MODELS = Path(__file__).resolve().parents[1] / "src" / "weilcartan" / "data" / "models"


def model_path(name: str) -> str:
    return str(MODELS / f"{name}.json")


def circle_op(lie=None, contractions=None):
    """Lambda[x] with dx = 0, L = 0 and I_k x given by ``contractions`` (default: I_1 x = 1, others 0)."""
    lie = lie or u1()
    n = lie.dim
    cs = contractions or [1] + [0] * (n - 1)
    A = GradedAlgebra([("x", 1)])
    return OperationSpec.from_images(A, lie, ["0"], [["0"]] * n, [[str(c)] for c in cs], "circle")


def load_op(name: str):
    return load_model(model_path(name)).op


@pytest.fixture
def circle():
    return circle_op()


@pytest.fixture
def t2():
    return circle_op(abelian(2))


@pytest.fixture(scope="session")
def w_u1():
    return build_weil(u1())


@pytest.fixture(scope="session")
def w_su2():
    return build_weil(su2())


@pytest.fixture(scope="session")
def frame():
    return load_op("su2_frame")


def homogeneous_elements(A, max_degree, max_terms=3):
    """Hypothesis strategy: a homogeneous element of A with small integer coefficients."""
    from hypothesis import strategies as st

    degrees = [k for k in range(max_degree + 1) if A.basis_of_degree(k)]

    @st.composite
    def element(draw):
        k = draw(st.sampled_from(degrees))
        basis = list(A.basis_of_degree(k))
        picks = draw(st.lists(st.tuples(st.sampled_from(basis), st.integers(-3, 3)),
                                   min_size=1, max_size=max_terms))
        return sum((A.monomial(m).scale(c) for m, c in picks), A.zero())

    return element()


def reduction_setup(name, theta=None):
    """ReductionSetup from a fixture's reduction section (theta overrides the listed connection)."""
    from weilcartan.reduction import ReductionSetup
    m = load_model(model_path(name))
    theta = theta or m.reduction_theta
    return ReductionSetup(m.op, m.ideal, dict(zip(m.ideal.indices, theta)), m.name)


# Every CLI command over the fixtures; (argv, expected exit code).
CLI_SUITE = [
    (["validate", "circle"], 0), (["validate", "su2_frame"], 0), (["validate", "weil_u1"], 0),
    (["validate", "weil_su2"], 0), (["validate", "circle_weil_u1"], 0), (["validate", "t2"], 0),
    (["validate", "bad_antisym"], 1), (["validate", "bad_operation"], 1),
    (["weil", "--max-degree", "6", "weil_u1"], 0), (["weil", "--max-degree", "3", "weil_su2"], 0),
    (["cohomology", "--max-degree", "5", "circle"], 0), (["cohomology", "t2"], 0),
    (["cohomology", "--model", "cartan", "su2_frame", "--max-degree", "3"], 0),
    (["kalkman", "--max-degree", "5", "circle"], 0), (["kalkman", "--t", "zero", "circle"], 0),
    (["kalkman", "--t", "seed:1", "--max-degree", "5", "circle"], 0),
    (["kalkman", "--t", "identity", "weil_su2"], 0),
    (["kalkman", "--t", "seed:1", "--max-degree", "2", "weil_su2"], 1),
    (["transgress", "--theta0", "t", "--theta1", "x", "circle_weil_u1"], 0),
    (["transgress", "--theta0", "weil:taut", "--theta1", "weil:xi", "circle"], 0),
    (["reduce", "circle"], 0), (["reduce", "t2"], 0), (["reduce", "weil_u1"], 0),
    (["reduce", "t2_diagonal"], 0), (["reduce", "circle_weil_u1"], 0),
    (["reduce", "--max-degree", "3", "su2_frame"], 0),
    (["char-class", "--poly", "c1", "weil_u1"], 0), (["char-class", "--poly", "p1", "su2_frame"], 0),
    (["char-class", "--poly", "omega2sq", "t2"], 0), (["char-class", "--poly", "c1sq", "circle_weil_u1"], 0),
]


def cli_suite_argv():
    out = []
    for argv, code in CLI_SUITE:
        # the model name is the only positional token that names a fixture
        args = [model_path(a) if (MODELS / f"{a}.json").exists() else a for a in argv]
        out.append((args, code))
    return out


_CRITERIA = {}


def pytest_runtest_logreport(report):
    name = report.nodeid.rsplit("::", 1)[-1]
    if report.when == "call" and name.startswith("test_criterion_"):
        _CRITERIA[int(name.split("_")[2])] = (name, report.outcome)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        name, outcome = _CRITERIA[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if outcome == 'passed' else 'FAIL'}  ({name})")
