"""
Free edges under strong and super-stability by enumerating which free edges
the matching uses: 2^|F| forced-edge subproblems.
"""
import logging
from dataclasses import dataclass
from typing import FrozenSet, Optional, Sequence

import numpy as np

from ..models.errors import ReductionInvariantError, StabilityError
from ..models.instance import Edge, Instance
from ..models.matching import Matching
from ..models.restrictions import RestrictedEdgeSets, validate_restrictions
from .solvers import RestrictedSearch
from .stability import StabilityLevel, verify_stable

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FptOutcome:
    matching: Optional[Matching]
    subproblem_calls: int
    subset: Optional[FrozenSet[Edge]] = None


def subset_for_mask(free_edges: Sequence[Edge], mask: int) -> FrozenSet[Edge]:
    """Bit ``b`` of ``mask`` selects ``free_edges[b]``."""
    return frozenset(e for b, e in enumerate(free_edges) if mask >> b & 1)


def derived_instance(instance: Instance, deleted: Sequence[Edge]) -> Instance:
    man_rank = np.array(instance.man_rank)
    woman_rank = np.array(instance.woman_rank)
    for i, j in deleted:
        man_rank[i, j] = 0
        woman_rank[i, j] = 0
    return Instance.from_rank_matrices(man_rank, woman_rank, instance.man_labels, instance.woman_labels)


def solve_subset(
    instance: Instance,
    free_edges: Sequence[Edge],
    mask: int,
    level: StabilityLevel,
    forbidden: FrozenSet[Edge] = frozenset(),
    forced: FrozenSet[Edge] = frozenset(),
) -> Optional[Matching]:
    """
    Solve the subproblem where the free edges selected by ``mask`` are forced
    and the other free edges are deleted; lift a witness back to ``instance``.
    """
    subset = subset_for_mask(free_edges, mask)
    derived = derived_instance(instance, [e for e in free_edges if e not in subset])
    restricted = RestrictedEdgeSets(forbidden=forbidden, forced=forced | subset)
    witness = RestrictedSearch(derived, restricted, level).run()
    if witness is None:
        return None
    return Matching.for_instance(instance, witness.edges)


def run_free_fpt(
    instance: Instance,
    free,
    level: StabilityLevel,
    *,
    parallel: bool = False,
    forbidden=(),
    forced=(),
    batch_size: Optional[int] = None,
) -> FptOutcome:
    """
    Try every subset S of the free edges in ascending bitmask order and return
    the first witness, with the number of subproblems solved.

    For each S the edges of S become forced, the other free edges are deleted,
    and the exact restricted search runs on the derived instance. A subset
    whose edges share a vertex cannot be forced and counts as one call that
    answers None. A witness is re-verified against the original instance
    before it is returned.

    Parameters:
        instance: The instance to solve.
        free: The free edges; every one must be an edge of ``instance``.
        level: STRONG or SUPER.
        parallel: Solve the subsets in batches on a QThreadPool. The witness
            returned is still the one with the lowest bitmask.
        forbidden, forced: Passed into every subproblem unchanged.
        batch_size: Subsets per batch in parallel mode; defaults to the pool size.

    Returns:
        FptOutcome with the witness (or None), the number of subproblems solved
        and the subset S the witness was found under.

    Raises:
        StabilityError: For the WEAK level.
        RestrictionError: If the restricted edge sets are invalid.
        ReductionInvariantError: If a subproblem witness is not stable in the
            original instance.
    """
    level = StabilityLevel(level)
    if level is StabilityLevel.WEAK:
        raise StabilityError("the free-edge subset solver handles strong and super-stability only")
    restricted = RestrictedEdgeSets(forbidden=forbidden, forced=forced, free=free)
    validate_restrictions(instance, restricted)
    free_edges = sorted(restricted.free)
    total = 1 << len(free_edges)
    logger.info(f"Solving {total} free-edge subproblems at {level.name} level")

    def lifted(mask, matching):
        result = verify_stable(instance, restricted, matching, level)
        if not result:
            raise ReductionInvariantError(f"subset {mask:b} produced an unstable matching: {result.reasons()}")
        return FptOutcome(matching, calls, subset_for_mask(free_edges, mask))

    calls = 0
    if not parallel:
        for mask in range(total):
            calls += 1
            matching = solve_subset(instance, free_edges, mask, level, restricted.forbidden, restricted.forced)
            logger.debug(f"Subset {mask:0{max(len(free_edges), 1)}b}: {'witness' if matching is not None else 'none'}")
            if matching is not None:
                return lifted(mask, matching)
        return FptOutcome(None, calls)

    from ..utils.threading_utils import default_thread_count, run_batch

    batch_size = batch_size or default_thread_count()
    for start in range(0, total, batch_size):
        masks = range(start, min(start + batch_size, total))
        tasks = [
            (mask, solve_subset, (instance, free_edges, mask, level, restricted.forbidden, restricted.forced))
            for mask in masks
        ]
        results = run_batch(tasks, batch_size)
        calls += len(masks)
        found = [mask for mask in masks if results.get(mask) is not None]
        if found:
            return lifted(found[0], results[found[0]])
    return FptOutcome(None, calls)


def solve_free_fpt(instance: Instance, free, level: StabilityLevel, **options) -> Optional[Matching]:
    return run_free_fpt(instance, free, level, **options).matching
