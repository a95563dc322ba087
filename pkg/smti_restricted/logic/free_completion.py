"""
Completing an instance with free edges ranked below every existing edge; the
existence of a stable matching with free edges is unchanged.
"""
import logging
from typing import Dict, Tuple

import numpy as np

from ..models.errors import ReductionInvariantError, WitnessError
from ..models.instance import Edge, Instance
from ..models.matching import Matching
from ..models.restrictions import RestrictedEdgeSets, validate_restrictions
from .stability import StabilityLevel, verify_stable

logger = logging.getLogger(__name__)


def complete_with_free(
    instance: Instance, restricted: RestrictedEdgeSets
) -> Tuple[Instance, RestrictedEdgeSets]:
    """Add every missing man-woman pair as a free edge in one new last tie-group at both ends."""
    validate_restrictions(instance, restricted)
    man_rank = np.array(instance.man_rank)
    woman_rank = np.array(instance.woman_rank)
    missing = ~instance.edge_mask
    man_rank[missing] = np.broadcast_to(man_rank.max(axis=1, initial=0)[:, None] + 1, man_rank.shape)[missing]
    woman_rank[missing] = np.broadcast_to(woman_rank.max(axis=0, initial=0)[None, :] + 1, woman_rank.shape)[missing]
    added = frozenset((int(i), int(j)) for i, j in np.argwhere(missing))
    completed = Instance.from_rank_matrices(man_rank, woman_rank, instance.man_labels, instance.woman_labels)
    logger.info(f"Completed {instance!r} with {len(added)} free edges")
    return completed, RestrictedEdgeSets(restricted.forbidden, restricted.forced, restricted.free | added)


def completion_stages(instance: Instance, completed: Instance) -> Dict[Edge, str]:
    return {e: ("original" if instance.has_edge(e) else "completion") for e in completed.edges}


def completion_forward_witness(
    instance: Instance, restricted: RestrictedEdgeSets, matching: Matching, level: StabilityLevel
) -> Matching:
    """A stable matching of the original instance stays stable after completion."""
    if not verify_stable(instance, restricted, matching, level):
        raise WitnessError("the matching is not stable in the original instance")
    completed, completed_restricted = complete_with_free(instance, restricted)
    result = Matching.for_instance(completed, matching.edges)
    if not verify_stable(completed, completed_restricted, result, level):
        raise ReductionInvariantError("adding free edges made a stable matching unstable")
    return result


def completion_backward_witness(
    instance: Instance, restricted: RestrictedEdgeSets, matching: Matching, level: StabilityLevel
) -> Matching:
    """Keep only the original edges of a stable matching of the completed instance."""
    completed, completed_restricted = complete_with_free(instance, restricted)
    if not verify_stable(completed, completed_restricted, matching, level):
        raise WitnessError("the matching is not stable in the completed instance")
    result = Matching.for_instance(instance, matching.edges & instance.edge_set)
    if not verify_stable(instance, restricted, result, level):
        raise ReductionInvariantError("dropping completion edges made the matching unstable")
    return result
