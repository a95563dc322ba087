from collections import Counter
from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple

from .errors import FormulaError

Clause = Tuple[int, int, int]


@dataclass(frozen=True)
class SatFormula:
    """
    A positive 3-SAT formula for the exactly-one-in-three question.

    Variables are 0-based; no literal is negated and every variable may occur
    in at most three clauses.
    """
    n_vars: int
    clauses: Tuple[Clause, ...]

    def __post_init__(self):
        clauses = tuple(tuple(int(x) for x in clause) for clause in self.clauses)
        if self.n_vars < 0:
            raise FormulaError("variable count must be non-negative")
        for index, clause in enumerate(clauses):
            if len(clause) != 3:
                raise FormulaError(f"clause {index + 1} has {len(clause)} literals, expected 3")
            if len(set(clause)) != 3:
                raise FormulaError(f"clause {index + 1} repeats a variable")
            for x in clause:
                if not 0 <= x < self.n_vars:
                    raise FormulaError(f"clause {index + 1} uses variable {x + 1} out of range")
        counts = Counter(x for clause in clauses for x in clause)
        crowded = sorted(x for x, c in counts.items() if c > 3)
        if crowded:
            raise FormulaError(f"variable {crowded[0] + 1} occurs in more than three clauses")
        object.__setattr__(self, "clauses", clauses)

    @property
    def n_clauses(self) -> int:
        return len(self.clauses)

    def occurrence_counts(self) -> List[int]:
        counts = Counter(x for clause in self.clauses for x in clause)
        return [counts.get(x, 0) for x in range(self.n_vars)]

    def occurrences(self) -> Dict[int, List[Tuple[int, int]]]:
        """(clause, slot) positions of each variable, ordered by clause then slot."""
        found = {x: [] for x in range(self.n_vars)}
        for c, clause in enumerate(self.clauses):
            for slot, x in enumerate(clause):
                found[x].append((c, slot))
        return found


@dataclass(frozen=True)
class Assignment:
    values: Tuple[bool, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(bool(v) for v in self.values))

    def __getitem__(self, x: int) -> bool:
        return self.values[x]

    def __len__(self):
        return len(self.values)


def is_one_in_three(formula: SatFormula, assignment: Assignment) -> bool:
    """True iff every clause has exactly one true variable."""
    if len(assignment) != formula.n_vars:
        raise FormulaError(f"assignment covers {len(assignment)} variables, formula has {formula.n_vars}")
    return all(sum(assignment[x] for x in clause) == 1 for clause in formula.clauses)


def formula_from_clauses(n_vars: int, clauses: Sequence[Sequence[int]]) -> SatFormula:
    return SatFormula(n_vars, tuple(tuple(c) for c in clauses))
