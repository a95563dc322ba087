"""Subproblem-count and wall-time scaling of the free-edge subset solver."""
import csv
import io
import logging
import time
from dataclasses import dataclass
from typing import Callable, FrozenSet, Iterable, List, Tuple

import numpy as np

from ..models.errors import InstanceError
from ..models.instance import Edge, Instance
from .fpt import run_free_fpt
from .stability import StabilityLevel

logger = logging.getLogger(__name__)

Family = Callable[[int], Tuple[Instance, FrozenSet[Edge]]]
CSV_HEADER = ("k", "calls", "seconds", "found")


@dataclass(frozen=True)
class BenchRow:
    k: int
    calls: int
    seconds: float
    found: bool


def unsat_free_family(k: int, block: int = 4) -> Tuple[Instance, FrozenSet[Edge]]:
    """
    A ``(2 + block) x (2 + block)`` instance with no strongly stable matching
    and exactly ``k`` free edges.

    Men 0 and 1 both prefer woman 0 to woman 1, and each woman ties the two
    men, so whichever man misses woman 0 blocks with her. The remaining
    vertices form a disjoint complete block with strict lists whose first
    ``k`` edges are free.
    """
    if block < 0:
        raise InstanceError(f"block size must be non-negative, got {block}")
    if not 0 <= k <= block * block:
        raise InstanceError(f"a {block}x{block} block carries at most {block * block} free edges, asked for {k}")
    size = 2 + block
    man_rank = np.zeros((size, size), dtype=np.int64)
    woman_rank = np.zeros_like(man_rank)
    man_rank[0:2, 0] = 1
    man_rank[0:2, 1] = 2
    woman_rank[0:2, 0:2] = 1
    for a in range(block):
        for b in range(block):
            man_rank[2 + a, 2 + b] = b + 1
            woman_rank[2 + a, 2 + b] = a + 1
    instance = Instance.from_rank_matrices(man_rank, woman_rank)
    block_edges = [e for e in instance.edges if e[0] >= 2]
    return instance, frozenset(block_edges[:k])


def bench_fpt(
    family: Family,
    k_range: Iterable[int],
    level: StabilityLevel = StabilityLevel.STRONG,
    parallel: bool = False,
) -> List[BenchRow]:
    """Run the subset solver once per ``k`` and record subproblem calls and wall time."""
    rows = []
    for k in k_range:
        instance, free = family(k)
        if len(free) != k:
            logger.warning(f"Family member for k={k} carries {len(free)} free edges")
        start = time.perf_counter()
        outcome = run_free_fpt(instance, free, level, parallel=parallel)
        seconds = time.perf_counter() - start
        row = BenchRow(k, outcome.subproblem_calls, seconds, outcome.matching is not None)
        logger.info(f"k={k}: {row.calls} subproblems in {seconds:.4f}s, witness={'yes' if row.found else 'no'}")
        rows.append(row)
    return rows


def format_bench_csv(rows: Iterable[BenchRow]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for row in rows:
        writer.writerow([row.k, row.calls, f"{row.seconds:.6f}", int(row.found)])
    return buffer.getvalue()
