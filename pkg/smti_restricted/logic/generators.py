"""Seeded random instances, restrictions and formulas for tests, the CLI and the bench."""
import logging
from typing import List, Optional

import numpy as np

from ..config import DEFAULTS
from ..models.errors import FormulaError, GenerationError, InstanceError
from ..models.formula import SatFormula
from ..models.instance import Instance
from ..models.restrictions import RestrictedEdgeSets

logger = logging.getLogger(__name__)


def _check_parameters(n_men: int, n_women: int, edge_density: float, tie_probability: float) -> None:
    if n_men < 1 or n_women < 1:
        raise InstanceError(f"both sides need at least one vertex, got {n_men} men and {n_women} women")
    if not 0 < edge_density <= 1:
        raise InstanceError(f"edge density must lie in (0, 1], got {edge_density}")
    if not 0 <= tie_probability <= 1:
        raise InstanceError(f"tie probability must lie in [0, 1], got {tie_probability}")


def _random_groups(rng: np.random.Generator, members: np.ndarray, tie_probability: float) -> List[List[int]]:
    """Shuffle ``members`` and merge each pair of adjacent groups with ``tie_probability``."""
    groups: List[List[int]] = []
    for k in rng.permutation(members):
        if groups and rng.random() < tie_probability:
            groups[-1].append(int(k))
        else:
            groups.append([int(k)])
    return groups


def _rank_row(groups: List[List[int]], size: int) -> np.ndarray:
    row = np.zeros(size, dtype=np.int64)
    for rank, group in enumerate(groups, start=1):
        row[group] = rank
    return row


def gen_random_smti(
    n_men: int,
    n_women: int,
    edge_density: float = DEFAULTS.edge_density,
    tie_probability: float = DEFAULTS.tie_probability,
    seed: Optional[int] = None,
) -> Instance:
    """
    Keep every man-woman pair with probability ``edge_density``, then give
    every vertex a random order over its neighbours in which adjacent
    tie-groups are merged with probability ``tie_probability``.
    """
    _check_parameters(n_men, n_women, edge_density, tie_probability)
    rng = np.random.default_rng(seed)
    mask = rng.random((n_men, n_women)) < edge_density
    if edge_density >= 1:
        mask[:] = True
    man_rank = np.zeros((n_men, n_women), dtype=np.int64)
    woman_rank = np.zeros_like(man_rank)
    for i in range(n_men):
        man_rank[i] = _rank_row(_random_groups(rng, np.flatnonzero(mask[i]), tie_probability), n_women)
    for j in range(n_women):
        woman_rank[:, j] = _rank_row(_random_groups(rng, np.flatnonzero(mask[:, j]), tie_probability), n_men)
    return Instance.from_rank_matrices(man_rank, woman_rank)


def gen_front_tied_smti(
    n: int,
    edge_density: float = DEFAULTS.edge_density,
    tie_probability: float = DEFAULTS.tie_probability,
    seed: Optional[int] = None,
) -> Instance:
    """
    An ``n x n`` instance whose only ties have length two, sit at the front of
    a man's list, and occur with ``tie_probability`` per man; women's lists
    are strict.
    """
    _check_parameters(n, n, edge_density, tie_probability)
    rng = np.random.default_rng(seed)
    mask = rng.random((n, n)) < edge_density
    if edge_density >= 1:
        mask[:] = True
    man_rank = np.zeros((n, n), dtype=np.int64)
    woman_rank = np.zeros_like(man_rank)
    for i in range(n):
        groups = [[int(k)] for k in rng.permutation(np.flatnonzero(mask[i]))]
        if len(groups) >= 2 and rng.random() < tie_probability:
            groups[0:2] = [groups[0] + groups[1]]
        man_rank[i] = _rank_row(groups, n)
    for j in range(n):
        groups = [[int(k)] for k in rng.permutation(np.flatnonzero(mask[:, j]))]
        woman_rank[:, j] = _rank_row(groups, n)
    return Instance.from_rank_matrices(man_rank, woman_rank)


def gen_random_restrictions(
    instance: Instance,
    forbidden_probability: float = 0.1,
    forced_probability: float = 0.1,
    free_probability: float = 0.0,
    seed: Optional[int] = None,
) -> RestrictedEdgeSets:
    """
    Disjoint random P, Q and F; each edge is tried for P, then F, then Q in
    that order, and Q only takes edges whose endpoints no earlier forced edge
    covers.
    """
    rng = np.random.default_rng(seed)
    forbidden, forced, free = set(), set(), set()
    covered_men, covered_women = set(), set()
    for index in rng.permutation(instance.n_edges):
        edge = instance.edges[index]
        if rng.random() < forbidden_probability:
            forbidden.add(edge)
        elif rng.random() < free_probability:
            free.add(edge)
        elif edge[0] not in covered_men and edge[1] not in covered_women and rng.random() < forced_probability:
            forced.add(edge)
            covered_men.add(edge[0])
            covered_women.add(edge[1])
    return RestrictedEdgeSets(forbidden=forbidden, forced=forced, free=free)


def gen_random_1in3(n: int, seed: Optional[int] = None, max_retries: int = DEFAULTS.one_in_three_retries) -> SatFormula:
    """
    ``n`` clauses in which every variable occurs exactly three times: three
    copies of each variable are shuffled into triples, and the shuffle is
    repeated while some triple repeats a variable.
    """
    if n < 3:
        raise FormulaError(f"at least three variables are needed, got {n}")
    rng = np.random.default_rng(seed)
    copies = np.repeat(np.arange(n), 3)
    for attempt in range(1, max_retries + 1):
        triples = rng.permutation(copies).reshape(n, 3)
        if all(len(set(row.tolist())) == 3 for row in triples):
            logger.debug(f"Drew a {n}-variable formula after {attempt} shuffles")
            return SatFormula(n, tuple(tuple(sorted(int(x) for x in row)) for row in triples))
    raise GenerationError(f"no formula without repeated variables after {max_retries} shuffles")
