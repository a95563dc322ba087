"""
Perfect weakly stable matching reduces to weak stability with one forbidden
edge on a complete bipartite graph, and that in turn to perfect weak
stability on a complete bipartite graph missing one edge.
"""
import logging
from typing import Dict, List, Optional, Tuple, Union

import numpy as np

from ..models.errors import ReductionError, ReductionInvariantError, WitnessError
from ..models.instance import Edge, Instance, Side, Vertex
from ..models.matching import Matching, is_perfect
from ..models.reduction_output import ReductionOutput
from ..models.restrictions import RestrictedEdgeSets
from .stability import StabilityLevel, blocking_report, verify_stable

logger = logging.getLogger(__name__)

STAGES = ("0", "1", "2", "3", "4")


def reduce_perfect_to_forbidden1(source: Instance) -> ReductionOutput:
    """
    Complete the source on ``U + {u1, u2}`` and ``W + {w1, w2}`` in five
    stages, each ranked after the previous one at every vertex:

    0. the source edges with their ranks;
    1. ``U x {w1}`` and ``{u1} x W``;
    2. the missing pairs of ``U x W``;
    3. ``(U + u1) x {w2}`` and ``{u2} x (W + w1)``;
    4. ``u1 w1`` and the forbidden edge ``u2 w2``.

    Choices the construction leaves open are made in ascending vertex id.
    """
    n_u, n_w = source.n_men, source.n_women
    u1, u2, w1, w2 = n_u, n_u + 1, n_w, n_w + 1
    man_rank = np.zeros((n_u + 2, n_w + 2), dtype=np.int64)
    woman_rank = np.zeros_like(man_rank)
    stages: Dict[Edge, str] = {}

    def add(edge, at_man, at_woman, stage):
        man_rank[edge] = at_man
        woman_rank[edge] = at_woman
        stages[edge] = stage

    for i, j in source.edges:
        add((i, j), source.man_rank[i, j], source.woman_rank[i, j], "0")
    man_next = [source.max_rank(Vertex(Side.MAN, i)) + 1 for i in range(n_u)]
    woman_next = [source.max_rank(Vertex(Side.WOMAN, j)) + 1 for j in range(n_w)]

    # stage 1
    for i in range(n_u):
        add((i, w1), man_next[i], i + 1, "1")
        man_next[i] += 1
    for j in range(n_w):
        add((u1, j), j + 1, woman_next[j], "1")
        woman_next[j] += 1
    # stage 2
    for i in range(n_u):
        for j in range(n_w):
            if not source.has_edge((i, j)):
                add((i, j), man_next[i], woman_next[j], "2")
                man_next[i] += 1
                woman_next[j] += 1
    # stage 3
    for i in range(n_u):
        add((i, w2), man_next[i], i + 1, "3")
    add((u1, w2), n_w + 1, n_u + 1, "3")
    for j in range(n_w):
        add((u2, j), j + 1, woman_next[j], "3")
    add((u2, w1), n_w + 1, n_u + 1, "3")
    # stage 4
    add((u1, w1), n_w + 2, n_u + 2, "4")
    add((u2, w2), n_w + 2, n_u + 2, "4")

    roles = {Vertex(Side.MAN, i): f"source_m{i + 1}" for i in range(n_u)}
    roles.update({Vertex(Side.WOMAN, j): f"source_w{j + 1}" for j in range(n_w)})
    roles.update({
        Vertex(Side.MAN, u1): "u1", Vertex(Side.MAN, u2): "u2",
        Vertex(Side.WOMAN, w1): "w1", Vertex(Side.WOMAN, w2): "w2",
    })
    man_labels = [roles[Vertex(Side.MAN, i)] for i in range(n_u + 2)]
    woman_labels = [roles[Vertex(Side.WOMAN, j)] for j in range(n_w + 2)]
    instance = Instance.from_rank_matrices(man_rank, woman_rank, man_labels, woman_labels)
    logger.info(f"Built forbidden-edge instance with {instance.n_men}x{instance.n_women} vertices from {source!r}")
    return ReductionOutput(
        instance=instance,
        restricted=RestrictedEdgeSets(forbidden={(u2, w2)}),
        roles=roles,
        stages=stages,
        source=source,
    )


def stage_order_violations(reduction: ReductionOutput) -> List[Vertex]:
    """Vertices whose list does not rank the stages in ascending order."""
    instance = reduction.instance
    offenders = []
    for side in (Side.MAN, Side.WOMAN):
        for k in instance.vertices(side):
            vertex = Vertex(side, k)
            ranked = [(instance.rank(vertex, e), int(reduction.stages[e])) for e in instance.incident_edges(vertex)]
            if any(
                (ra < rb and sa > sb) or (sa < sb and ra >= rb)
                for ra, sa in ranked
                for rb, sb in ranked
            ):
                offenders.append(vertex)
    return offenders


def forbidden_edge_is_last(instance: Instance, edge: Edge) -> bool:
    """True iff ``edge`` carries the worst rank used at both of its endpoints."""
    u, w = Vertex(Side.MAN, edge[0]), Vertex(Side.WOMAN, edge[1])
    return instance.rank(u, edge) == instance.max_rank(u) and instance.rank(w, edge) == instance.max_rank(w)


def forbidden1_forward_witness(reduction: ReductionOutput, matching: Matching) -> Matching:
    """A perfect weakly stable source matching plus ``u1 w2`` and ``u2 w1``."""
    source = reduction.source
    if not is_perfect(source, matching):
        raise WitnessError("the source matching is not perfect")
    if blocking_report(source, matching).weakly_blocking:
        raise WitnessError("the source matching is not weakly stable")
    extra = {reduction.edge("u1", "w2"), reduction.edge("u2", "w1")}
    return Matching.for_instance(reduction.instance, set(matching.edges) | extra)


def forbidden1_backward_witness(reduction: ReductionOutput, matching: Matching) -> Matching:
    """Drop ``u1 w2`` and ``u2 w1`` from a weakly stable matching avoiding ``u2 w2``."""
    forbidden = reduction.edge("u2", "w2")
    if forbidden in matching:
        raise WitnessError("the matching contains the forbidden edge u2 w2")
    if not verify_stable(reduction.instance, reduction.restricted, matching, StabilityLevel.WEAK):
        raise WitnessError("the matching is not weakly stable in the constructed instance")
    extra = {reduction.edge("u1", "w2"), reduction.edge("u2", "w1")}
    if not extra <= matching.edges:
        raise WitnessError("u1 w2 and u2 w1 are not both matched; the source is unbalanced")
    remaining = matching.edges - extra
    outside = sorted(e for e in remaining if reduction.stages[e] != "0")
    if outside:
        raise WitnessError(f"matching uses {len(outside)} edges outside the source; the source is unbalanced")
    source = reduction.source
    result = Matching.for_instance(source, remaining)
    if not is_perfect(source, result) or blocking_report(source, result).weakly_blocking:
        raise ReductionInvariantError("recovered source matching is not perfect and weakly stable")
    return result


def _dense_input(
    reduction_or_instance: Union[ReductionOutput, Instance], restricted: Optional[RestrictedEdgeSets]
) -> Tuple[Instance, RestrictedEdgeSets]:
    if isinstance(reduction_or_instance, ReductionOutput):
        return reduction_or_instance.instance, reduction_or_instance.restricted
    if restricted is None:
        raise ReductionError("the forbidden edge must be given with a bare instance")
    return reduction_or_instance, restricted


def reduce_forbidden1_to_dense(
    reduction_or_instance: Union[ReductionOutput, Instance], restricted: Optional[RestrictedEdgeSets] = None
) -> Instance:
    """Delete the single forbidden edge, which must be ranked last at both ends."""
    instance, restricted = _dense_input(reduction_or_instance, restricted)
    if not instance.is_complete():
        raise ReductionError("the input graph is not complete bipartite")
    if len(restricted.forbidden) != 1 or restricted.forced or restricted.free:
        raise ReductionError("the input must carry exactly one forbidden edge and no other restriction")
    (edge,) = restricted.forbidden
    if not forbidden_edge_is_last(instance, edge):
        raise ReductionError(f"forbidden edge ({edge[0] + 1}, {edge[1] + 1}) is not ranked last at both endpoints")
    man_rank = np.array(instance.man_rank)
    woman_rank = np.array(instance.woman_rank)
    man_rank[edge] = 0
    woman_rank[edge] = 0
    return Instance.from_rank_matrices(man_rank, woman_rank, instance.man_labels, instance.woman_labels)


def dense_forward_witness(
    instance: Instance, restricted: RestrictedEdgeSets, dense: Instance, matching: Matching
) -> Matching:
    """A weakly stable matching avoiding the forbidden edge is perfect and stable in the dense instance."""
    if not verify_stable(instance, restricted, matching, StabilityLevel.WEAK):
        raise WitnessError("the matching is not weakly stable with the forbidden edge")
    result = Matching.for_instance(dense, matching.edges)
    if not is_perfect(dense, result):
        raise WitnessError("the matching is not perfect; the complete instance is unbalanced")
    if blocking_report(dense, result).weakly_blocking:
        raise ReductionInvariantError("deleting the forbidden edge created a blocking edge")
    return result


def dense_backward_witness(
    instance: Instance, restricted: RestrictedEdgeSets, dense: Instance, matching: Matching
) -> Matching:
    """A perfect weakly stable matching of the dense instance avoids, and is not blocked by, the deleted edge."""
    if not is_perfect(dense, matching) or blocking_report(dense, matching).weakly_blocking:
        raise WitnessError("the matching is not a perfect weakly stable matching of the dense instance")
    result = Matching.for_instance(instance, matching.edges)
    if not verify_stable(instance, restricted, result, StabilityLevel.WEAK):
        raise ReductionInvariantError("the deleted edge blocks a perfect matching")
    return result
