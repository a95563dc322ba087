"""
Exhaustive ground truth: every matching of a small instance, every stable
matching at a level, and brute-force exactly-one-in-three satisfiability.
"""
import itertools
import logging
from typing import Iterator, List, Optional, Set

from ..models.formula import Assignment, SatFormula, is_one_in_three
from ..models.instance import Instance, Side, Vertex
from ..models.matching import Matching, is_perfect
from ..models.restrictions import RestrictedEdgeSets
from .stability import StabilityLevel, blocks, compare_ranks, verify_stable

logger = logging.getLogger(__name__)


class MatchingEnumerator:
    """
    Walk the matchings of an instance in lexicographic order of their sorted
    edge tuples (a matching precedes its extensions, so the empty matching
    comes first).

    With a stability level the walk skips subtrees that cannot contain a
    stable matching. A vertex is *settled* once it is matched or all of its
    edges have been decided; a decided non-matching edge between two settled
    vertices keeps its blocking status in every completion, so a non-free
    blocking edge of that kind rules the whole subtree out. Forced edges
    that were passed over, forbidden edges, and (when ``perfect``) settled
    unmatched vertices are cut the same way.
    """

    def __init__(
        self,
        instance: Instance,
        restricted: Optional[RestrictedEdgeSets] = None,
        level: Optional[StabilityLevel] = None,
        perfect: bool = False,
    ):
        self.logger = logging.getLogger(__name__)
        self.instance = instance
        self.level = level
        self.perfect = perfect
        restricted = restricted or RestrictedEdgeSets()
        self.edges = instance.edges
        self.forbidden = [e in restricted.forbidden for e in self.edges]
        self.forced = [e in restricted.forced for e in self.edges]
        self.free = [e in restricted.free for e in self.edges]
        self.man_rank = instance.man_rank.tolist()
        self.woman_rank = instance.woman_rank.tolist()

        self.man_last = [-1] * instance.n_men
        self.woman_last = [-1] * instance.n_women
        self.man_edges: List[List[int]] = [[] for _ in instance.men]
        self.woman_edges: List[List[int]] = [[] for _ in instance.women]
        for k, (i, j) in enumerate(self.edges):
            self.man_last[i] = k
            self.woman_last[j] = k
            self.man_edges[i].append(k)
            self.woman_edges[j].append(k)
        self.closing: List[List[Vertex]] = [[] for _ in self.edges]
        for i, k in enumerate(self.man_last):
            if k >= 0:
                self.closing[k].append(Vertex(Side.MAN, i))
        for j, k in enumerate(self.woman_last):
            if k >= 0:
                self.closing[k].append(Vertex(Side.WOMAN, j))
        self.last_forced = max((k for k, f in enumerate(self.forced) if f), default=-1)

        self.man_partner = [-1] * instance.n_men
        self.woman_partner = [-1] * instance.n_women
        self.in_matching = [False] * len(self.edges)
        self.nodes = 0

    # Settled-vertex bookkeeping --------------------------------------------

    def _matched(self, vertex: Vertex) -> bool:
        if vertex.side is Side.MAN:
            return self.man_partner[vertex.index] != -1
        return self.woman_partner[vertex.index] != -1

    def _blocks(self, k: int, decided: int) -> bool:
        if self.in_matching[k] or self.free[k]:
            return False
        i, j = self.edges[k]
        partner_w = self.man_partner[i]
        partner_m = self.woman_partner[j]
        if partner_w == -1 and self.man_last[i] > decided:
            return False
        if partner_m == -1 and self.woman_last[j] > decided:
            return False
        current_m = self.man_rank[i][partner_w] if partner_w != -1 else 0
        current_w = self.woman_rank[partner_m][j] if partner_m != -1 else 0
        return blocks(
            self.level,
            compare_ranks(self.man_rank[i][j], current_m),
            compare_ranks(self.woman_rank[i][j], current_w),
        )

    def _consistent(self, previous: int, decided: int, added: Optional[int]) -> bool:
        """Check the state after deciding edges ``previous + 1 .. decided``."""
        if self.level is None and not self.perfect:
            return True
        settled = []
        if added is not None:
            i, j = self.edges[added]
            settled += [Vertex(Side.MAN, i), Vertex(Side.WOMAN, j)]
        for t in range(previous + 1, decided + 1):
            settled.extend(v for v in self.closing[t] if not self._matched(v))
        if self.perfect and any(not self._matched(v) for v in settled):
            return False
        if self.level is None:
            return True
        skipped_end = decided if added is not None else decided + 1
        for k in range(previous + 1, skipped_end):
            if self._blocks(k, decided):
                return False
        for vertex in settled:
            incident = self.man_edges if vertex.side is Side.MAN else self.woman_edges
            for k in incident[vertex.index]:
                if k > previous:
                    break
                if self._blocks(k, decided):
                    return False
        return True

    # Walk ------------------------------------------------------------------

    def _current(self) -> Matching:
        chosen = frozenset(e for e, used in zip(self.edges, self.in_matching) if used)
        return Matching(chosen, self.instance.n_men, self.instance.n_women)

    def _walk(self, decided: int) -> Iterator[Matching]:
        self.nodes += 1
        last = len(self.edges) - 1
        if self.last_forced <= decided and self._consistent(decided, last, None):
            yield self._current()
        for k in range(decided + 1, len(self.edges)):
            if k - 1 > decided and self.forced[k - 1]:
                break
            i, j = self.edges[k]
            if self.forbidden[k] or self.man_partner[i] != -1 or self.woman_partner[j] != -1:
                continue
            self.man_partner[i], self.woman_partner[j] = j, i
            self.in_matching[k] = True
            if self._consistent(decided, k, k):
                yield from self._walk(k)
            self.man_partner[i], self.woman_partner[j] = -1, -1
            self.in_matching[k] = False

    def __iter__(self) -> Iterator[Matching]:
        self.nodes = 0
        if self.perfect and self.instance.n_men != self.instance.n_women:
            return
        isolated = [i for i, k in enumerate(self.man_last) if k < 0] + [j for j, k in enumerate(self.woman_last) if k < 0]
        if self.perfect and isolated:
            return
        yield from self._walk(-1)
        self.logger.debug(f"Enumeration visited {self.nodes} nodes over {len(self.edges)} edges")


def enumerate_matchings(instance: Instance) -> Iterator[Matching]:
    """Every matching of the instance exactly once, the empty one first."""
    return iter(MatchingEnumerator(instance))


def iter_stable_matchings(
    instance: Instance,
    restricted: Optional[RestrictedEdgeSets] = None,
    level: StabilityLevel = StabilityLevel.WEAK,
    perfect: bool = False,
) -> Iterator[Matching]:
    """Every matching stable with the restricted edges at ``level``, in enumeration order."""
    restricted = restricted or RestrictedEdgeSets()
    for matching in MatchingEnumerator(instance, restricted, StabilityLevel(level), perfect):
        if perfect and not is_perfect(instance, matching):
            continue
        if verify_stable(instance, restricted, matching, level):
            yield matching


def oracle_exists(
    instance: Instance, restricted: Optional[RestrictedEdgeSets], level: StabilityLevel
) -> Optional[Matching]:
    """The first stable matching in enumeration order, or None."""
    witness = next(iter_stable_matchings(instance, restricted, level), None)
    logger.debug(f"Oracle at {StabilityLevel(level).name}: {'witness' if witness is not None else 'none'}")
    return witness


def oracle_perfect_weak(instance: Instance) -> Optional[Matching]:
    """The first perfect weakly stable matching, or None."""
    return next(iter_stable_matchings(instance, None, StabilityLevel.WEAK, perfect=True), None)


def stable_cardinalities(instance: Instance, level: StabilityLevel) -> Set[int]:
    return {len(m) for m in iter_stable_matchings(instance, None, level)}


def solve_1in3_bruteforce(formula: SatFormula) -> Optional[Assignment]:
    """
    First assignment setting exactly one variable per clause, trying each
    variable true before false in variable order.
    """
    for values in itertools.product((True, False), repeat=formula.n_vars):
        assignment = Assignment(values)
        if is_one_in_three(formula, assignment):
            return assignment
    return None
