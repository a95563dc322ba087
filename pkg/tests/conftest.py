import pytest

from smti_restricted.models.formula import formula_from_clauses
from smti_restricted.models.instance import build_instance


@pytest.fixture
def one_edge():
    return build_instance([[0]], [[0]])


@pytest.fixture
def all_tied_2x2():
    return build_instance([[(0, 1)], [(0, 1)]], [[(0, 1)], [(0, 1)]])


@pytest.fixture
def strong_unsat_2x2():
    """Both men prefer w1; both women tie the men. No strongly stable matching."""
    return build_instance([[0, 1], [0, 1]], [[(0, 1)], [(0, 1)]])


@pytest.fixture
def strict_3x3():
    return build_instance(
        [[0, 1, 2], [1, 0, 2], [0, 2, 1]],
        [[1, 0, 2], [0, 2, 1], [2, 1, 0]],
    )


@pytest.fixture
def sat_formula():
    """The only exactly-three formula on three variables; x1 alone satisfies it."""
    return formula_from_clauses(3, [(0, 1, 2)] * 3)


@pytest.fixture
def unsat_formula():
    return formula_from_clauses(4, [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)])
