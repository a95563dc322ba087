from dataclasses import dataclass, field
from typing import FrozenSet, Iterable, Iterator, Optional, Tuple

from .errors import MatchingError
from .instance import Edge, Instance, Side, Vertex


@dataclass(frozen=True)
class Matching:
    """A set of man-woman edges in which no vertex appears twice."""
    edges: FrozenSet[Edge]
    n_men: int
    n_women: int
    _man_partner: Tuple[int, ...] = field(init=False, repr=False, compare=False)
    _woman_partner: Tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        edges = frozenset((int(i), int(j)) for i, j in self.edges)
        man_partner = [-1] * self.n_men
        woman_partner = [-1] * self.n_women
        for i, j in sorted(edges):
            if not (0 <= i < self.n_men and 0 <= j < self.n_women):
                raise MatchingError(f"edge ({i + 1}, {j + 1}) is out of range")
            if man_partner[i] != -1:
                raise MatchingError(f"m{i + 1} is incident to two matching edges")
            if woman_partner[j] != -1:
                raise MatchingError(f"w{j + 1} is incident to two matching edges")
            man_partner[i] = j
            woman_partner[j] = i
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "_man_partner", tuple(man_partner))
        object.__setattr__(self, "_woman_partner", tuple(woman_partner))

    @classmethod
    def for_instance(cls, instance: Instance, edges: Iterable[Edge] = ()) -> "Matching":
        """Build a matching of ``instance``, rejecting pairs that are not edges."""
        edges = frozenset((int(i), int(j)) for i, j in edges)
        for edge in sorted(edges):
            if not instance.has_edge(edge):
                raise MatchingError(f"({edge[0] + 1}, {edge[1] + 1}) is not an edge of the instance")
        return cls(edges, instance.n_men, instance.n_women)

    @classmethod
    def empty(cls, instance: Instance) -> "Matching":
        return cls(frozenset(), instance.n_men, instance.n_women)

    def partner_of_man(self, i: int) -> Optional[int]:
        j = self._man_partner[i]
        return None if j == -1 else j

    def partner_of_woman(self, j: int) -> Optional[int]:
        i = self._woman_partner[j]
        return None if i == -1 else i

    def partner(self, vertex: Vertex) -> Optional[Vertex]:
        """Partner of ``vertex``, or None when it is unmatched."""
        if vertex.side is Side.MAN:
            j = self.partner_of_man(vertex.index)
            return None if j is None else Vertex(Side.WOMAN, j)
        i = self.partner_of_woman(vertex.index)
        return None if i is None else Vertex(Side.MAN, i)

    def matching_edge_at(self, vertex: Vertex) -> Optional[Edge]:
        other = self.partner(vertex)
        if other is None:
            return None
        return (vertex.index, other.index) if vertex.side is Side.MAN else (other.index, vertex.index)

    def is_matched(self, vertex: Vertex) -> bool:
        return self.partner(vertex) is not None

    def sorted_edges(self) -> Tuple[Edge, ...]:
        return tuple(sorted(self.edges))

    def __len__(self):
        return len(self.edges)

    def __iter__(self) -> Iterator[Edge]:
        return iter(self.sorted_edges())

    def __contains__(self, edge) -> bool:
        return tuple(edge) in self.edges


def is_perfect(instance: Instance, matching: Matching) -> bool:
    """True iff every vertex of the instance is matched."""
    return 2 * len(matching) == instance.n_vertices
