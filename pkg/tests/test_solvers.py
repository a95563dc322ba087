import pytest
from hypothesis import given, settings, strategies as st

from smti_restricted.logic.bench import unsat_free_family
from smti_restricted.logic.fpt import run_free_fpt, solve_free_fpt, subset_for_mask
from smti_restricted.logic.generators import gen_random_restrictions, gen_random_smti
from smti_restricted.logic.oracle import oracle_exists
from smti_restricted.logic.solvers import solve_restricted, solve_strong, solve_super, solve_weak, solve_weak_with_free
from smti_restricted.logic.stability import StabilityLevel, blocking_report, verify_stable
from smti_restricted.models.errors import RestrictionError, StabilityError
from smti_restricted.models.instance import build_instance
from smti_restricted.models.matching import is_perfect
from smti_restricted.models.restrictions import RestrictedEdgeSets

EQUIVALENCE_SAMPLES = 60


def test_weak_solver_examples(one_edge, all_tied_2x2):
    assert solve_weak(one_edge).sorted_edges() == ((0, 0),)
    matching = solve_weak(all_tied_2x2)
    assert is_perfect(all_tied_2x2, matching)
    assert not blocking_report(all_tied_2x2, matching).weakly_blocking


def test_weak_solver_ignores_tie_input_order():
    a = build_instance([[(0, 1, 2)], [(2, 1), 0]], [[0, 1], [(1, 0)], [1, 0]])
    b = build_instance([[(2, 0, 1)], [(1, 2), 0]], [[0, 1], [(0, 1)], [1, 0]])
    assert solve_weak(a) == solve_weak(b)


@settings(max_examples=100, deadline=None)
@given(seed=st.integers(0, 10**6))
def test_weak_solver_is_always_stable(seed):
    instance = gen_random_smti(5, 4, 0.6, 0.4, seed=seed)
    free = gen_random_restrictions(instance, 0.0, 0.0, 0.3, seed=seed).free
    matching = solve_weak_with_free(instance, free)
    assert verify_stable(instance, RestrictedEdgeSets(), matching, StabilityLevel.WEAK)
    assert verify_stable(instance, RestrictedEdgeSets(free=free), matching, StabilityLevel.WEAK)


def test_super_and_strong_examples(one_edge, all_tied_2x2, strong_unsat_2x2):
    assert solve_super(one_edge).sorted_edges() == ((0, 0),)
    assert solve_strong(one_edge).sorted_edges() == ((0, 0),)
    assert solve_super(all_tied_2x2) is None
    assert oracle_exists(strong_unsat_2x2, None, StabilityLevel.STRONG) is None
    assert solve_strong(strong_unsat_2x2) is None


def test_forced_and_forbidden_edges_are_honoured(strict_3x3):
    witness = solve_strong(strict_3x3, forbidden={(0, 0)}, forced={(1, 2)})
    expected = oracle_exists(strict_3x3, RestrictedEdgeSets({(0, 0)}, {(1, 2)}), StabilityLevel.STRONG)
    assert (witness is None) == (expected is None)
    if witness is not None:
        assert (1, 2) in witness and (0, 0) not in witness


def test_restricted_search_validates_input(one_edge):
    with pytest.raises(RestrictionError):
        solve_super(one_edge, forbidden={(0, 0)}, forced={(0, 0)})


@settings(max_examples=EQUIVALENCE_SAMPLES, deadline=None)
@given(
    seed=st.integers(0, 10**6),
    sizes=st.tuples(st.integers(1, 4), st.integers(1, 4)),
    level=st.sampled_from(list(StabilityLevel)),
)
def test_restricted_search_agrees_with_oracle(seed, sizes, level):
    instance = gen_random_smti(*sizes, 0.7, 0.4, seed=seed)
    free_probability = 0.0 if level is StabilityLevel.WEAK else 0.15
    restricted = gen_random_restrictions(instance, 0.15, 0.15, free_probability, seed=seed + 1)
    witness = solve_restricted(instance, restricted, level)
    expected = oracle_exists(instance, restricted, level)
    assert (witness is None) == (expected is None)
    if witness is not None:
        assert verify_stable(instance, restricted, witness, level)


# Free-edge subsets -----------------------------------------------------------


def test_subset_masks_select_by_bit():
    edges = [(0, 0), (1, 1), (2, 2)]
    assert subset_for_mask(edges, 0b101) == {(0, 0), (2, 2)}


def test_no_free_edges_is_a_single_call(strict_3x3):
    outcome = run_free_fpt(strict_3x3, (), StabilityLevel.SUPER)
    assert outcome.subproblem_calls == 1
    assert outcome.matching == solve_super(strict_3x3)


def test_weak_level_is_rejected(one_edge):
    with pytest.raises(StabilityError):
        run_free_fpt(one_edge, {(0, 0)}, StabilityLevel.WEAK)


@pytest.mark.parametrize("k", [0, 1, 3, 5])
def test_unsatisfiable_family_uses_every_subset(k):
    instance, free = unsat_free_family(k)
    for level in (StabilityLevel.STRONG, StabilityLevel.SUPER):
        outcome = run_free_fpt(instance, free, level)
        assert outcome.matching is None
        assert outcome.subproblem_calls == 2 ** k


@settings(max_examples=EQUIVALENCE_SAMPLES, deadline=None)
@given(seed=st.integers(0, 10**6), level=st.sampled_from([StabilityLevel.STRONG, StabilityLevel.SUPER]))
def test_free_subset_solver_agrees_with_oracle(seed, level):
    instance = gen_random_smti(3, 3, 0.8, 0.5, seed=seed)
    free = gen_random_restrictions(instance, 0.0, 0.0, 0.3, seed=seed).free
    outcome = run_free_fpt(instance, free, level)
    expected = oracle_exists(instance, RestrictedEdgeSets(free=free), level)
    assert (outcome.matching is None) == (expected is None)
    assert outcome.subproblem_calls <= 2 ** len(free)
    if outcome.matching is not None:
        assert verify_stable(instance, RestrictedEdgeSets(free=free), outcome.matching, level)
        assert outcome.matching.edges & free == outcome.subset


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 10**6))
def test_combined_restrictions_agree_with_oracle(seed):
    instance = gen_random_smti(3, 3, 0.8, 0.5, seed=seed)
    restricted = gen_random_restrictions(instance, 0.15, 0.15, 0.25, seed=seed)
    witness = solve_free_fpt(
        instance, restricted.free, StabilityLevel.STRONG, forbidden=restricted.forbidden, forced=restricted.forced
    )
    expected = oracle_exists(instance, restricted, StabilityLevel.STRONG)
    assert (witness is None) == (expected is None)


def test_parallel_subsets_return_the_sequential_witness():
    pytest.importorskip("PyQt6.QtCore")
    instance = gen_random_smti(3, 3, 1.0, 0.5, seed=7)
    free = set(instance.edges[::3])
    for level in (StabilityLevel.STRONG, StabilityLevel.SUPER):
        sequential = run_free_fpt(instance, free, level)
        parallel = run_free_fpt(instance, free, level, parallel=True, batch_size=3)
        assert parallel.matching == sequential.matching
        assert parallel.subset == sequential.subset
    outcome = run_free_fpt(*unsat_free_family(4), StabilityLevel.STRONG, parallel=True, batch_size=5)
    assert outcome.matching is None
    assert outcome.subproblem_calls == 16
