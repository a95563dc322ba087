from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Iterable, NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np

from .errors import InstanceError

Edge = Tuple[int, int]
TieGroup = Union[int, Iterable[int]]


class Side(Enum):
    MAN = "m"
    WOMAN = "w"

    @property
    def opposite(self) -> "Side":
        return Side.WOMAN if self is Side.MAN else Side.MAN


class Vertex(NamedTuple):
    side: Side
    index: int

    def __str__(self):
        return f"{self.side.value}{self.index + 1}"


def man(index: int) -> Vertex:
    return Vertex(Side.MAN, index)


def woman(index: int) -> Vertex:
    return Vertex(Side.WOMAN, index)


def endpoints(edge: Edge) -> Tuple[Vertex, Vertex]:
    return man(edge[0]), woman(edge[1])


def _normalise_rows(ranks: np.ndarray) -> np.ndarray:
    """Replace the positive entries of every row by their dense rank, starting at 1."""
    out = np.zeros_like(ranks)
    for r, row in enumerate(ranks):
        used = row > 0
        if used.any():
            values = np.unique(row[used])
            out[r, used] = np.searchsorted(values, row[used]) + 1
    return out


def _frozen(array: np.ndarray) -> np.ndarray:
    array = np.array(array, dtype=np.int64, copy=True)
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class Instance:
    """
    A bipartite preference system with ties.

    ``man_rank[i, j]`` is the rank man ``i`` gives to woman ``j`` and
    ``woman_rank[i, j]`` the rank woman ``j`` gives to man ``i``; 0 marks an
    absent edge. Ranks are normalised on construction so that the ranks used
    at every vertex are exactly 1..k.
    """
    man_rank: np.ndarray
    woman_rank: np.ndarray
    man_labels: Tuple[str, ...] = field(default=())
    woman_labels: Tuple[str, ...] = field(default=())

    def __post_init__(self):
        man_rank = np.asarray(self.man_rank)
        woman_rank = np.asarray(self.woman_rank)
        if man_rank.ndim != 2 or man_rank.shape != woman_rank.shape:
            raise InstanceError(
                f"rank tables must be two matrices of equal shape, got {man_rank.shape} and {woman_rank.shape}"
            )
        if (man_rank < 0).any() or (woman_rank < 0).any():
            raise InstanceError("ranks must be positive integers")
        mismatch = np.argwhere((man_rank > 0) != (woman_rank > 0))
        if len(mismatch):
            i, j = (int(x) for x in mismatch[0])
            offender = man(i) if man_rank[i, j] > 0 else woman(j)
            raise InstanceError(f"non-reciprocal listing between m{i + 1} and w{j + 1}", vertex=offender)
        object.__setattr__(self, "man_rank", _frozen(_normalise_rows(man_rank)))
        object.__setattr__(self, "woman_rank", _frozen(_normalise_rows(woman_rank.T).T))
        for name, count in (("man_labels", man_rank.shape[0]), ("woman_labels", man_rank.shape[1])):
            labels = tuple(getattr(self, name))
            if labels and len(labels) != count:
                raise InstanceError(f"{name} has {len(labels)} entries for {count} vertices")
            object.__setattr__(self, name, labels)

    @classmethod
    def from_rank_matrices(cls, man_rank, woman_rank, man_labels=(), woman_labels=()) -> "Instance":
        return cls(np.asarray(man_rank), np.asarray(woman_rank), tuple(man_labels), tuple(woman_labels))

    # Sizes -----------------------------------------------------------------

    @property
    def n_men(self) -> int:
        return self.man_rank.shape[0]

    @property
    def n_women(self) -> int:
        return self.man_rank.shape[1]

    @property
    def n_vertices(self) -> int:
        return self.n_men + self.n_women

    @property
    def men(self) -> range:
        return range(self.n_men)

    @property
    def women(self) -> range:
        return range(self.n_women)

    def vertices(self, side: Side) -> range:
        return self.men if side is Side.MAN else self.women

    # Edges -----------------------------------------------------------------

    @cached_property
    def edge_mask(self) -> np.ndarray:
        mask = self.man_rank > 0
        mask.setflags(write=False)
        return mask

    @cached_property
    def edges(self) -> Tuple[Edge, ...]:
        """All edges as ``(man, woman)`` tuples in ascending order."""
        return tuple((int(i), int(j)) for i, j in np.argwhere(self.edge_mask))

    @cached_property
    def edge_set(self) -> frozenset:
        return frozenset(self.edges)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def has_edge(self, edge: Edge) -> bool:
        i, j = edge
        return 0 <= i < self.n_men and 0 <= j < self.n_women and bool(self.man_rank[i, j])

    def is_complete(self) -> bool:
        return bool(self.edge_mask.all())

    # Preferences -----------------------------------------------------------

    def rank(self, vertex: Vertex, edge: Edge) -> int:
        """Rank of ``edge`` at ``vertex`` (lower is better)."""
        i, j = edge
        if not self.has_edge(edge):
            raise InstanceError(f"({i + 1}, {j + 1}) is not an edge")
        if vertex == man(i):
            return int(self.man_rank[i, j])
        if vertex == woman(j):
            return int(self.woman_rank[i, j])
        raise InstanceError(f"edge ({i + 1}, {j + 1}) is not incident to {vertex}", vertex=vertex)

    def _row(self, vertex: Vertex) -> np.ndarray:
        if vertex.side is Side.MAN:
            return self.man_rank[vertex.index, :]
        return self.woman_rank[:, vertex.index]

    def neighbours(self, vertex: Vertex) -> Tuple[int, ...]:
        """Opposite-side neighbours ordered by rank, ties by ascending id."""
        row = self._row(vertex)
        listed = np.flatnonzero(row)
        return tuple(int(k) for k in sorted(listed, key=lambda k: (row[k], k)))

    def preference_list(self, vertex: Vertex) -> Tuple[Tuple[int, ...], ...]:
        row = self._row(vertex)
        groups = []
        for rank in range(1, int(row.max(initial=0)) + 1):
            groups.append(tuple(int(k) for k in np.flatnonzero(row == rank)))
        return tuple(groups)

    def incident_edges(self, vertex: Vertex) -> Tuple[Edge, ...]:
        if vertex.side is Side.MAN:
            return tuple((vertex.index, j) for j in self.neighbours(vertex))
        return tuple((i, vertex.index) for i in self.neighbours(vertex))

    def degree(self, vertex: Vertex) -> int:
        return int(np.count_nonzero(self._row(vertex)))

    def max_rank(self, vertex: Vertex) -> int:
        return int(self._row(vertex).max(initial=0))

    def max_degree(self) -> int:
        degrees = [0]
        degrees.extend(np.count_nonzero(self.man_rank, axis=1).tolist())
        degrees.extend(np.count_nonzero(self.woman_rank, axis=0).tolist())
        return int(max(degrees))

    def max_tie_length(self, side: Optional[Side] = None) -> int:
        sides = (Side.MAN, Side.WOMAN) if side is None else (side,)
        longest = 0
        for s in sides:
            for k in self.vertices(s):
                for group in self.preference_list(Vertex(s, k)):
                    longest = max(longest, len(group))
        return longest

    def label(self, vertex: Vertex) -> str:
        labels = self.man_labels if vertex.side is Side.MAN else self.woman_labels
        return labels[vertex.index] if labels else str(vertex)

    # Equality --------------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, Instance):
            return NotImplemented
        return (
            self.man_rank.shape == other.man_rank.shape
            and np.array_equal(self.man_rank, other.man_rank)
            and np.array_equal(self.woman_rank, other.woman_rank)
        )

    def __hash__(self):
        return hash((self.man_rank.shape, self.man_rank.tobytes(), self.woman_rank.tobytes()))

    def __repr__(self):
        return f"Instance(men={self.n_men}, women={self.n_women}, edges={self.n_edges})"


def _groups(entry: Sequence[TieGroup]):
    for group in entry:
        if isinstance(group, (int, np.integer)):
            yield (int(group),)
        else:
            yield tuple(int(k) for k in group)


def _rank_table(prefs: Sequence[Sequence[TieGroup]], side: Side, n_opposite: int) -> np.ndarray:
    table = np.zeros((len(prefs), n_opposite), dtype=np.int64)
    for owner, entry in enumerate(prefs):
        vertex = Vertex(side, owner)
        rank = 0
        for group in _groups(entry):
            if not group:
                continue
            rank += 1
            for k in group:
                if not 0 <= k < n_opposite:
                    raise InstanceError(f"{vertex} lists {k + 1}, which is not on the opposite side", vertex=vertex)
                if table[owner, k]:
                    raise InstanceError(f"{vertex} lists {Vertex(side.opposite, k)} twice", vertex=vertex)
                table[owner, k] = rank
    return table


def build_instance(
    men_prefs: Sequence[Sequence[TieGroup]],
    women_prefs: Sequence[Sequence[TieGroup]],
    man_labels: Optional[Sequence[str]] = None,
    woman_labels: Optional[Sequence[str]] = None,
) -> Instance:
    """
    Build a normalised Instance from preference lists with ties.

    Each preference list is a sequence of tie-groups; a tie-group is either a
    single opposite-side id or an iterable of ids. Edge ``(u, w)`` exists iff
    ``u`` lists ``w`` and ``w`` lists ``u``; a one-sided listing is an error.
    """
    man_table = _rank_table(men_prefs, Side.MAN, len(women_prefs))
    woman_table = _rank_table(women_prefs, Side.WOMAN, len(men_prefs)).T
    return Instance.from_rank_matrices(man_table, woman_table, man_labels or (), woman_labels or ())
