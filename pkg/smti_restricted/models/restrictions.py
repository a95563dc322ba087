from dataclasses import dataclass, field
from typing import FrozenSet, Iterable

from .errors import RestrictionError
from .instance import Edge, Instance


def _edge_set(edges: Iterable[Edge]) -> FrozenSet[Edge]:
    return frozenset((int(i), int(j)) for i, j in edges)


@dataclass(frozen=True)
class RestrictedEdgeSets:
    """Forbidden (P), forced (Q) and free (F) edges of an instance."""
    forbidden: FrozenSet[Edge] = field(default_factory=frozenset)
    forced: FrozenSet[Edge] = field(default_factory=frozenset)
    free: FrozenSet[Edge] = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "forbidden", _edge_set(self.forbidden))
        object.__setattr__(self, "forced", _edge_set(self.forced))
        object.__setattr__(self, "free", _edge_set(self.free))

    @property
    def is_empty(self) -> bool:
        return not (self.forbidden or self.forced or self.free)

    def restricted_edges(self) -> FrozenSet[Edge]:
        return self.forbidden | self.forced | self.free


def forced_conflicts(forced: Iterable[Edge]):
    """Pairs of forced edges that share a vertex, in ascending order."""
    seen_men, seen_women = {}, {}
    conflicts = []
    for edge in sorted(forced):
        i, j = edge
        if i in seen_men:
            conflicts.append((seen_men[i], edge, f"m{i + 1}"))
        elif j in seen_women:
            conflicts.append((seen_women[j], edge, f"w{j + 1}"))
        seen_men.setdefault(i, edge)
        seen_women.setdefault(j, edge)
    return conflicts


def validate_restrictions(instance: Instance, restricted: RestrictedEdgeSets) -> None:
    """Raise RestrictionError unless P, Q, F are disjoint subsets of E and Q is a matching."""
    for name_a, name_b in (("forbidden", "forced"), ("forbidden", "free"), ("forced", "free")):
        overlap = getattr(restricted, name_a) & getattr(restricted, name_b)
        if overlap:
            i, j = min(overlap)
            raise RestrictionError(
                f"overlap: edge ({i + 1}, {j + 1}) is both {name_a} and {name_b}", edges=sorted(overlap)
            )
    missing = sorted(e for e in restricted.restricted_edges() if not instance.has_edge(e))
    if missing:
        i, j = missing[0]
        raise RestrictionError(f"restricted edge ({i + 1}, {j + 1}) is not an edge of the instance", edges=missing)
    conflicts = forced_conflicts(restricted.forced)
    if conflicts:
        first, second, vertex = conflicts[0]
        raise RestrictionError(f"forced edges share vertex {vertex}", edges=(first, second))
