"""
Existence solvers for weakly, strongly and super-stable matchings with
forbidden and forced edges.
"""
import logging
from collections import deque
from typing import List, Optional

from ..models.instance import Instance, Side, Vertex
from ..models.matching import Matching
from ..models.restrictions import RestrictedEdgeSets, forced_conflicts, validate_restrictions
from .stability import StabilityLevel, blocks, compare_ranks

logger = logging.getLogger(__name__)


def solve_weak(instance: Instance) -> Matching:
    """
    Weakly stable matching by man-proposing deferred acceptance on the strict
    lists obtained by breaking every tie in ascending vertex id.
    """
    prefs = [instance.neighbours(Vertex(Side.MAN, i)) for i in instance.men]
    woman_rank = instance.woman_rank.tolist()
    next_choice = [0] * instance.n_men
    woman_partner = [-1] * instance.n_women
    free = deque(instance.men)
    proposals = 0
    while free:
        i = free.popleft()
        if next_choice[i] >= len(prefs[i]):
            continue
        j = prefs[i][next_choice[i]]
        next_choice[i] += 1
        proposals += 1
        current = woman_partner[j]
        if current == -1:
            woman_partner[j] = i
        elif (woman_rank[i][j], i) < (woman_rank[current][j], current):
            woman_partner[j] = i
            free.append(current)
        else:
            free.append(i)
    logger.debug(f"Deferred acceptance finished after {proposals} proposals")
    edges = frozenset((i, j) for j, i in enumerate(woman_partner) if i != -1)
    return Matching(edges, instance.n_men, instance.n_women)


def solve_weak_with_free(instance: Instance, free) -> Matching:
    """A weakly stable matching also satisfies any set of free edges."""
    validate_restrictions(instance, RestrictedEdgeSets(free=free))
    return solve_weak(instance)


class RestrictedSearch:
    """
    Exact backtracking search for a matching that is stable with restricted
    edges at a given level.

    Forced edges are placed first and forbidden edges are never offered. The
    remaining men are processed in ascending id; each tries his neighbours in
    preference order and then staying unmatched. A man is settled once
    processed, a woman once matched or once all her neighbours are settled;
    a non-free edge blocking between two settled vertices ends the branch.
    """

    def __init__(self, instance: Instance, restricted: RestrictedEdgeSets, level: StabilityLevel):
        self.logger = logging.getLogger(__name__)
        self.instance = instance
        self.restricted = restricted
        self.level = StabilityLevel(level)
        self.man_rank = instance.man_rank.tolist()
        self.woman_rank = instance.woman_rank.tolist()
        self.man_partner = [-1] * instance.n_men
        self.woman_partner = [-1] * instance.n_women
        self.forced_men = {i for i, _ in restricted.forced}
        self.order = [i for i in instance.men if i not in self.forced_men]
        self.position = [-1] * instance.n_men
        for p, i in enumerate(self.order):
            self.position[i] = p
        self.man_neighbours = [instance.neighbours(Vertex(Side.MAN, i)) for i in instance.men]
        self.woman_neighbours = [instance.neighbours(Vertex(Side.WOMAN, j)) for j in instance.women]
        self.options: List[List[Optional[int]]] = []
        for i in instance.men:
            allowed = [j for j in self.man_neighbours[i] if (i, j) not in restricted.forbidden]
            self.options.append(allowed + [None])
        self.woman_last = [max((self.position[i] for i in self.woman_neighbours[j]), default=-1) for j in instance.women]
        self.closing: List[List[int]] = [[] for _ in self.order]
        self.initially_settled = []
        for j, p in enumerate(self.woman_last):
            if p >= 0:
                self.closing[p].append(j)
            else:
                self.initially_settled.append(j)
        self.nodes = 0

    def _blocks(self, i: int, j: int, p: int) -> bool:
        if self.man_partner[i] == j or (i, j) in self.restricted.free:
            return False
        partner_w = self.man_partner[i]
        partner_m = self.woman_partner[j]
        if partner_w == -1 and self.position[i] > p:
            return False
        if partner_m == -1 and self.woman_last[j] > p:
            return False
        current_m = self.man_rank[i][partner_w] if partner_w != -1 else 0
        current_w = self.woman_rank[partner_m][j] if partner_m != -1 else 0
        return blocks(
            self.level,
            compare_ranks(self.man_rank[i][j], current_m),
            compare_ranks(self.woman_rank[i][j], current_w),
        )

    def _women_clear(self, women, p: int) -> bool:
        return not any(self._blocks(i, j, p) for j in women for i in self.woman_neighbours[j])

    def _start_ok(self) -> bool:
        for i, j in self.restricted.forced:
            self.man_partner[i], self.woman_partner[j] = j, i
        settled = [j for j in self.instance.women if self.woman_partner[j] != -1] + self.initially_settled
        return self._women_clear(settled, -1)

    def _assign(self, p: int) -> bool:
        if p == len(self.order):
            return True
        self.nodes += 1
        i = self.order[p]
        for j in self.options[i]:
            if j is not None:
                if self.woman_partner[j] != -1:
                    continue
                self.man_partner[i], self.woman_partner[j] = j, i
            settled = [w for w in self.closing[p] if self.woman_partner[w] == -1]
            if j is not None:
                settled.append(j)
            clear = not any(self._blocks(i, w, p) for w in self.man_neighbours[i]) and self._women_clear(settled, p)
            if clear and self._assign(p + 1):
                return True
            if j is not None:
                self.man_partner[i], self.woman_partner[j] = -1, -1
        return False

    def run(self) -> Optional[Matching]:
        if forced_conflicts(self.restricted.forced):
            return None
        found = self._start_ok() and self._assign(0)
        self.logger.debug(f"{self.level.name} search visited {self.nodes} nodes: {'witness' if found else 'none'}")
        if not found:
            return None
        edges = frozenset((i, j) for i, j in enumerate(self.man_partner) if j != -1)
        return Matching(edges, self.instance.n_men, self.instance.n_women)


def solve_restricted(
    instance: Instance, restricted: RestrictedEdgeSets, level: StabilityLevel
) -> Optional[Matching]:
    """A matching stable with P, Q and F at ``level``, or None if none exists."""
    validate_restrictions(instance, restricted)
    return RestrictedSearch(instance, restricted, level).run()


def solve_super(instance: Instance, forbidden=(), forced=()) -> Optional[Matching]:
    return solve_restricted(instance, RestrictedEdgeSets(forbidden=forbidden, forced=forced), StabilityLevel.SUPER)


def solve_strong(instance: Instance, forbidden=(), forced=()) -> Optional[Matching]:
    return solve_restricted(instance, RestrictedEdgeSets(forbidden=forbidden, forced=forced), StabilityLevel.STRONG)
