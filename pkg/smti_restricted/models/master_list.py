from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, Tuple

from .errors import MasterListError
from .instance import Instance, Side, Vertex


@dataclass(frozen=True)
class MasterList:
    """A weak order over the vertices of one side, as a sequence of tie-groups."""
    side: Side
    groups: Tuple[FrozenSet[int], ...]

    def __post_init__(self):
        groups = tuple(frozenset(int(k) for k in group) for group in self.groups)
        seen = set()
        for group in groups:
            if seen & group:
                raise MasterListError(f"tie-groups of the master list overlap on {sorted(seen & group)}")
            seen |= group
        object.__setattr__(self, "groups", groups)

    @classmethod
    def from_groups(cls, side: Side, groups: Iterable[Iterable[int]]) -> "MasterList":
        return cls(side, tuple(frozenset(g) for g in groups))

    def positions(self) -> Dict[int, int]:
        return {k: pos for pos, group in enumerate(self.groups) for k in group}

    def covers(self, instance: Instance) -> bool:
        return set(self.positions()) == set(instance.vertices(self.side))


def conforms_to_master_list(instance: Instance, side: Side, master: MasterList) -> bool:
    """
    Check that every list on ``side`` is the restriction of ``master`` to the
    vertex's neighbours: strict order and ties must agree exactly.
    """
    if master.side is not side.opposite:
        raise MasterListError(f"a master list for the lists of side {side.value} orders side {side.opposite.value}")
    position = master.positions()
    for k in instance.vertices(side):
        vertex = Vertex(side, k)
        groups = instance.preference_list(vertex)
        flat = [(rank, other) for rank, group in enumerate(groups) for other in group]
        for _, other in flat:
            if other not in position:
                raise MasterListError(f"master list does not cover {Vertex(side.opposite, other)}, listed by {vertex}")
        for rank_a, a in flat:
            for rank_b, b in flat:
                if (rank_a < rank_b) != (position[a] < position[b]):
                    return False
                if (rank_a == rank_b) != (position[a] == position[b]):
                    return False
    return True
