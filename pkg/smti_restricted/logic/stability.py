"""
Blocking-edge classification at the three stability levels and verification
of a matching against forbidden, forced and free edges.
"""
from dataclasses import dataclass
from enum import Enum, IntEnum
from typing import FrozenSet, NamedTuple, Tuple

import numpy as np

from ..models.errors import StabilityError
from ..models.instance import Edge, Instance, Side, Vertex
from ..models.matching import Matching
from ..models.restrictions import RestrictedEdgeSets


class StabilityLevel(IntEnum):
    """Ordered by strictness: a SUPER-stable matching is STRONG- and WEAK-stable."""
    WEAK = 1
    STRONG = 2
    SUPER = 3

    @classmethod
    def parse(cls, text: str) -> "StabilityLevel":
        try:
            return cls[text.strip().upper()]
        except KeyError:
            raise StabilityError(f"unknown stability level {text!r}") from None


class Relation(Enum):
    STRICTLY_BETTER = "better"
    EQUAL = "equal"
    STRICTLY_WORSE = "worse"


class EdgeClassification(NamedTuple):
    weakly_blocking: bool
    strongly_blocking: bool
    super_blocking: bool

    def at(self, level: StabilityLevel) -> bool:
        return self[level - 1]


def blocks(level: StabilityLevel, man_side: Relation, woman_side: Relation) -> bool:
    """Whether an edge with the given end relations blocks at ``level``."""
    better_m = man_side is Relation.STRICTLY_BETTER
    better_w = woman_side is Relation.STRICTLY_BETTER
    fine_m = man_side is not Relation.STRICTLY_WORSE
    fine_w = woman_side is not Relation.STRICTLY_WORSE
    if level is StabilityLevel.WEAK:
        return better_m and better_w
    if level is StabilityLevel.STRONG:
        return (better_m and fine_w) or (better_w and fine_m)
    return fine_m and fine_w


def compare_ranks(candidate: int, current: int) -> Relation:
    """Relation of a candidate rank to the current one (0 means unmatched)."""
    if current == 0 or candidate < current:
        return Relation.STRICTLY_BETTER
    if candidate == current:
        return Relation.EQUAL
    return Relation.STRICTLY_WORSE


def relation_at(instance: Instance, vertex: Vertex, edge: Edge, matching: Matching) -> Relation:
    """Compare ``edge`` to the matching edge at ``vertex``; unmatched is worse than anything."""
    if vertex.side is Side.MAN and vertex.index != edge[0] or vertex.side is Side.WOMAN and vertex.index != edge[1]:
        raise StabilityError(f"edge ({edge[0] + 1}, {edge[1] + 1}) is not incident to {vertex}")
    current = matching.matching_edge_at(vertex)
    current_rank = 0 if current is None else instance.rank(vertex, current)
    return compare_ranks(instance.rank(vertex, edge), current_rank)


def classify_edge(instance: Instance, matching: Matching, edge: Edge) -> EdgeClassification:
    if not instance.has_edge(edge):
        raise StabilityError(f"({edge[0] + 1}, {edge[1] + 1}) is not an edge")
    if edge in matching:
        raise StabilityError(f"blocking is undefined for the matching edge ({edge[0] + 1}, {edge[1] + 1})")
    at_man = relation_at(instance, Vertex(Side.MAN, edge[0]), edge, matching)
    at_woman = relation_at(instance, Vertex(Side.WOMAN, edge[1]), edge, matching)
    return EdgeClassification(*(blocks(level, at_man, at_woman) for level in StabilityLevel))


def _current_ranks(instance: Instance, matching: Matching):
    """Rank of each vertex's matching edge; unmatched vertices get a rank past every list."""
    unmatched = instance.n_vertices + 1
    man_current = np.full(instance.n_men, unmatched, dtype=np.int64)
    woman_current = np.full(instance.n_women, unmatched, dtype=np.int64)
    for i, j in matching.edges:
        man_current[i] = instance.man_rank[i, j]
        woman_current[j] = instance.woman_rank[i, j]
    return man_current, woman_current


def _masks_to_edges(mask: np.ndarray) -> FrozenSet[Edge]:
    return frozenset((int(i), int(j)) for i, j in np.argwhere(mask))


@dataclass(frozen=True)
class BlockingReport:
    """Blocking edges of a matching at every level; the three sets are nested."""
    weakly_blocking: FrozenSet[Edge]
    strongly_blocking: FrozenSet[Edge]
    super_blocking: FrozenSet[Edge]

    def at(self, level: StabilityLevel) -> FrozenSet[Edge]:
        return (self.weakly_blocking, self.strongly_blocking, self.super_blocking)[level - 1]

    def classification(self, edge: Edge) -> EdgeClassification:
        return EdgeClassification(
            edge in self.weakly_blocking, edge in self.strongly_blocking, edge in self.super_blocking
        )

    def chain_holds(self) -> bool:
        return self.weakly_blocking <= self.strongly_blocking <= self.super_blocking


def blocking_report(instance: Instance, matching: Matching) -> BlockingReport:
    man_current, woman_current = _current_ranks(instance, matching)
    mr, wr = instance.man_rank, instance.woman_rank
    candidates = instance.edge_mask.copy()
    for i, j in matching.edges:
        candidates[i, j] = False
    better_m = mr < man_current[:, None]
    better_w = wr < woman_current[None, :]
    fine_m = mr <= man_current[:, None]
    fine_w = wr <= woman_current[None, :]
    weak = candidates & better_m & better_w
    strong = candidates & ((better_m & fine_w) | (better_w & fine_m))
    super_ = candidates & fine_m & fine_w
    return BlockingReport(_masks_to_edges(weak), _masks_to_edges(strong), _masks_to_edges(super_))


class ViolationKind(Enum):
    FORBIDDEN_EDGE_USED = "forbidden edge used"
    FORCED_EDGE_MISSING = "forced edge missing"
    BLOCKING_EDGE = "non-free blocking edge"


class Violation(NamedTuple):
    kind: ViolationKind
    edges: Tuple[Edge, ...]

    def describe(self) -> str:
        listed = ", ".join(f"({i + 1}, {j + 1})" for i, j in self.edges)
        return f"{self.kind.value}: {listed}"


@dataclass(frozen=True)
class VerificationResult:
    """Outcome of ``verify_stable``; truthy iff the matching is stable."""
    level: StabilityLevel
    violations: Tuple[Violation, ...]

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.ok

    def reasons(self) -> Tuple[str, ...]:
        return tuple(v.describe() for v in self.violations)


def verify_stable(
    instance: Instance, restricted: RestrictedEdgeSets, matching: Matching, level: StabilityLevel
) -> VerificationResult:
    """
    A matching is stable with restricted edges iff it avoids every forbidden
    edge, contains every forced edge and every edge blocking it at ``level``
    is free.

    Parameters:
        instance: The instance the matching belongs to.
        restricted: Forbidden, forced and free edges; not validated here.
        matching: The matching to check.
        level: WEAK, STRONG or SUPER.

    Returns:
        VerificationResult, truthy iff the matching is stable. Each violated
        condition contributes one Violation listing its edges in ascending order.
    """
    violations = []
    used = sorted(matching.edges & restricted.forbidden)
    if used:
        violations.append(Violation(ViolationKind.FORBIDDEN_EDGE_USED, tuple(used)))
    missing = sorted(restricted.forced - matching.edges)
    if missing:
        violations.append(Violation(ViolationKind.FORCED_EDGE_MISSING, tuple(missing)))
    blocking = sorted(blocking_report(instance, matching).at(level) - restricted.free)
    if blocking:
        violations.append(Violation(ViolationKind.BLOCKING_EDGE, tuple(blocking)))
    return VerificationResult(StabilityLevel(level), tuple(violations))
