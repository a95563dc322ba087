"""
Exactly-one-in-three positive 3-SAT reduces to strong and super-stability
with free edges, on graphs of maximum degree four whose women's lists follow
a master list.

Men are the vertices ``z``, ``w`` (variable gadgets) and ``b`` (clause
gadgets); women are ``y``, ``c`` and ``a``.
"""
import logging
from typing import Dict

import numpy as np

from ..models.errors import ReductionError, ReductionInvariantError, WitnessError
from ..models.formula import Assignment, SatFormula, is_one_in_three
from ..models.instance import Edge, Instance, Side, Vertex
from ..models.master_list import MasterList
from ..models.matching import Matching
from ..models.reduction_output import ReductionOutput
from ..models.restrictions import RestrictedEdgeSets
from .stability import StabilityLevel, verify_stable

logger = logging.getLogger(__name__)


class GadgetLayout:
    """Vertex ids of every gadget vertex; variable ``x`` and copy ``j`` are 0-based."""

    def __init__(self, n_vars: int, n_clauses: int):
        self.n = n_vars
        self.m = n_clauses

    @property
    def n_men(self) -> int:
        return 6 * self.n + self.m

    @property
    def n_women(self) -> int:
        return 3 * self.n + 2 * self.m

    def z(self, x: int, j: int) -> int:
        return 3 * x + j

    def w(self, x: int, j: int) -> int:
        return 3 * self.n + 3 * x + j

    def b(self, c: int) -> int:
        return 6 * self.n + c

    def y(self, x: int, j: int) -> int:
        return 3 * x + j

    def c(self, c: int) -> int:
        return 3 * self.n + c

    def a(self, c: int) -> int:
        return 3 * self.n + self.m + c

    def roles(self) -> Dict[Vertex, str]:
        roles = {}
        for x in range(self.n):
            for j in range(3):
                roles[Vertex(Side.MAN, self.z(x, j))] = f"z_{x + 1}^{j + 1}"
                roles[Vertex(Side.MAN, self.w(x, j))] = f"w_{x + 1}^{j + 1}"
                roles[Vertex(Side.WOMAN, self.y(x, j))] = f"y_{x + 1}^{j + 1}"
        for c in range(self.m):
            roles[Vertex(Side.MAN, self.b(c))] = f"b_{c + 1}"
            roles[Vertex(Side.WOMAN, self.c(c))] = f"c_{c + 1}"
            roles[Vertex(Side.WOMAN, self.a(c))] = f"a_{c + 1}"
        return roles


def reduce_sat_to_ssmti_free(formula: SatFormula) -> ReductionOutput:
    """
    Build the clause and variable gadgets.

    Clause ``c``: ``a`` ranks ``b`` first, ``b`` ties ``a`` and ``c``, and
    ``c`` ranks its three interconnecting edges first (tied) and ``b`` second.
    Variable ``x`` with copies ``j = 1..3``: ``z^j y^j`` is free and first at
    both ends; ``y^j`` ties all three ``w`` second; ``w^l`` ranks ``y^l``
    first, the other two ``y`` second (tied) and its interconnecting edge
    to the clause of the l-th occurrence third. Occurrences are numbered by
    clause, then by position inside the clause.

    Parameters:
        formula: A formula in which every variable occurs exactly three times.

    Returns:
        ReductionOutput whose free set holds the three ``z^j y^j`` edges of each
        variable. Vertices carry role names such as ``z_1^2`` or ``c_3``, edges
        carry the stages ``free``, ``variable``, ``interconnecting`` and
        ``clause``, and ``master_list`` orders the men ``z``, then ``w``, then
        ``b``. ``extras`` holds the id layout and the occurrence table.

    Raises:
        ReductionError: If some variable does not occur exactly three times.
    """
    counts = formula.occurrence_counts()
    for x, count in enumerate(counts):
        if count != 3:
            raise ReductionError(f"variable {x + 1} occurs {count} times; the construction needs exactly three")
    layout = GadgetLayout(formula.n_vars, formula.n_clauses)
    occurrences = formula.occurrences()
    man_rank = np.zeros((layout.n_men, layout.n_women), dtype=np.int64)
    woman_rank = np.zeros_like(man_rank)
    stages: Dict[Edge, str] = {}

    def add(edge, at_man, at_woman, stage):
        man_rank[edge] = at_man
        woman_rank[edge] = at_woman
        stages[edge] = stage

    for x in range(layout.n):
        for j in range(3):
            add((layout.z(x, j), layout.y(x, j)), 1, 1, "free")
            for l in range(3):
                add((layout.w(x, l), layout.y(x, j)), 1 if l == j else 2, 2, "variable")
        for l, (c, _slot) in enumerate(occurrences[x]):
            add((layout.w(x, l), layout.c(c)), 3, 1, "interconnecting")
    for c in range(layout.m):
        add((layout.b(c), layout.a(c)), 1, 1, "clause")
        add((layout.b(c), layout.c(c)), 1, 2, "clause")

    roles = layout.roles()
    instance = Instance.from_rank_matrices(
        man_rank,
        woman_rank,
        [roles[Vertex(Side.MAN, i)] for i in range(layout.n_men)],
        [roles[Vertex(Side.WOMAN, j)] for j in range(layout.n_women)],
    )
    free = {e for e, tag in stages.items() if tag == "free"}
    master = MasterList.from_groups(Side.MAN, [
        [layout.z(x, j) for x in range(layout.n) for j in range(3)],
        [layout.w(x, j) for x in range(layout.n) for j in range(3)],
        [layout.b(c) for c in range(layout.m)],
    ])
    logger.info(
        f"Built free-edge gadget instance: {instance.n_vertices} vertices, {instance.n_edges} edges, {len(free)} free"
    )
    return ReductionOutput(
        instance=instance,
        restricted=RestrictedEdgeSets(free=free),
        roles=roles,
        stages=stages,
        source=formula,
        master_list=master,
        extras={"layout": layout, "occurrences": occurrences},
    )


def _interconnecting(reduction: ReductionOutput, x: int):
    layout = reduction.extras["layout"]
    return [(layout.w(x, l), layout.c(c)) for l, (c, _slot) in enumerate(reduction.extras["occurrences"][x])]


def sat_forward_witness(reduction: ReductionOutput, assignment: Assignment) -> Matching:
    """
    True variables take their interconnecting and free edges, false ones the
    ``w^l y^l`` edges, and every clause takes ``a b``.
    """
    formula = reduction.source
    if not is_one_in_three(formula, assignment):
        raise WitnessError("the assignment does not set exactly one variable per clause")
    layout = reduction.extras["layout"]
    edges = set()
    for x in range(layout.n):
        if assignment[x]:
            edges.update(_interconnecting(reduction, x))
            edges.update((layout.z(x, l), layout.y(x, l)) for l in range(3))
        else:
            edges.update((layout.w(x, l), layout.y(x, l)) for l in range(3))
    edges.update((layout.b(c), layout.a(c)) for c in range(layout.m))
    return Matching.for_instance(reduction.instance, edges)


def sat_backward_witness(reduction: ReductionOutput, matching: Matching) -> Assignment:
    """A variable is true iff all of its interconnecting edges are matched."""
    result = verify_stable(reduction.instance, reduction.restricted, matching, StabilityLevel.STRONG)
    if not result:
        raise WitnessError(f"the matching is not strongly stable with the free edges: {'; '.join(result.reasons())}")
    layout = reduction.extras["layout"]
    values = []
    for x in range(layout.n):
        used = sum(e in matching for e in _interconnecting(reduction, x))
        if used not in (0, 3):
            raise ReductionInvariantError(f"variable {x + 1} has {used} of its three interconnecting edges matched")
        values.append(used == 3)
    assignment = Assignment(tuple(values))
    if not is_one_in_three(reduction.source, assignment):
        raise ReductionInvariantError("the recovered assignment is not exactly-one-in-three")
    return assignment
