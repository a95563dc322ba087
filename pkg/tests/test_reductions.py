import pytest
from hypothesis import given, settings, strategies as st

from smti_restricted.logic.forbidden_reduction import (
    dense_backward_witness,
    dense_forward_witness,
    forbidden1_backward_witness,
    forbidden1_forward_witness,
    forbidden_edge_is_last,
    reduce_forbidden1_to_dense,
    reduce_perfect_to_forbidden1,
    stage_order_violations,
)
from smti_restricted.logic.fpt import run_free_fpt
from smti_restricted.logic.free_completion import (
    complete_with_free,
    completion_backward_witness,
    completion_forward_witness,
    completion_stages,
)
from smti_restricted.logic.generators import (
    gen_front_tied_smti,
    gen_random_1in3,
    gen_random_restrictions,
    gen_random_smti,
)
from smti_restricted.logic.oracle import oracle_exists, oracle_perfect_weak, solve_1in3_bruteforce
from smti_restricted.logic.sat_reduction import reduce_sat_to_ssmti_free, sat_backward_witness, sat_forward_witness
from smti_restricted.logic.stability import StabilityLevel, blocking_report, verify_stable
from smti_restricted.models.errors import ReductionError, WitnessError
from smti_restricted.models.formula import Assignment, formula_from_clauses, is_one_in_three
from smti_restricted.models.instance import Side, build_instance, man, woman
from smti_restricted.models.master_list import conforms_to_master_list
from smti_restricted.models.matching import Matching, is_perfect
from smti_restricted.models.restrictions import RestrictedEdgeSets

FORBIDDEN_SAMPLES = 25
FORMULA_SAMPLES = 4
COMPLETION_SAMPLES = 40


@pytest.fixture
def five_edge_source():
    return build_instance([[0, 1], [(0, 1)], [2]], [[0, 1], [1, 0], [2]])


# One forbidden edge ----------------------------------------------------------


def test_empty_source_gives_the_two_by_two_core():
    reduction = reduce_perfect_to_forbidden1(build_instance([], []))
    assert reduction.instance.is_complete()
    assert reduction.instance.n_edges == 4
    assert reduction.restricted.forbidden == {reduction.edge("u2", "w2")}
    forward = forbidden1_forward_witness(reduction, Matching.empty(build_instance([], [])))
    assert forward.edges == {reduction.edge("u1", "w2"), reduction.edge("u2", "w1")}


def test_five_edge_source_is_completed_in_stages(five_edge_source):
    reduction = reduce_perfect_to_forbidden1(five_edge_source)
    instance = reduction.instance
    assert (instance.n_men, instance.n_women, instance.n_edges) == (5, 5, 25)
    assert reduction.stage_counts() == {"0": 5, "1": 6, "2": 4, "3": 8, "4": 2}
    assert stage_order_violations(reduction) == []
    assert forbidden_edge_is_last(instance, reduction.edge("u2", "w2"))
    assert not (reduction.restricted.forced or reduction.restricted.free)
    for i, j in five_edge_source.edges:
        assert instance.man_rank[i, j] == five_edge_source.man_rank[i, j]
        assert instance.woman_rank[i, j] == five_edge_source.woman_rank[i, j]


def test_witnesses_round_trip(five_edge_source):
    reduction = reduce_perfect_to_forbidden1(five_edge_source)
    source_matching = Matching.for_instance(five_edge_source, {(0, 0), (1, 1), (2, 2)})
    forward = forbidden1_forward_witness(reduction, source_matching)
    assert len(forward) == len(source_matching) + 2
    assert verify_stable(reduction.instance, reduction.restricted, forward, StabilityLevel.WEAK)
    assert forbidden1_backward_witness(reduction, forward) == source_matching


def test_forward_rejects_imperfect_matchings(five_edge_source):
    reduction = reduce_perfect_to_forbidden1(five_edge_source)
    with pytest.raises(WitnessError, match="not perfect"):
        forbidden1_forward_witness(reduction, Matching.for_instance(five_edge_source, {(0, 0)}))


def test_backward_rejects_the_forbidden_edge(five_edge_source):
    reduction = reduce_perfect_to_forbidden1(five_edge_source)
    matching = Matching.for_instance(reduction.instance, {reduction.edge("u2", "w2")})
    with pytest.raises(WitnessError, match="forbidden"):
        forbidden1_backward_witness(reduction, matching)


def test_dense_instance_drops_the_forbidden_edge(five_edge_source):
    reduction = reduce_perfect_to_forbidden1(five_edge_source)
    dense = reduce_forbidden1_to_dense(reduction)
    assert dense.n_edges == 24
    assert not dense.has_edge(reduction.edge("u2", "w2"))
    assert reduce_forbidden1_to_dense(reduce_perfect_to_forbidden1(build_instance([], []))).n_edges == 3


def test_dense_reduction_needs_a_last_ranked_forbidden_edge(strict_3x3):
    with pytest.raises(ReductionError, match="not ranked last"):
        reduce_forbidden1_to_dense(strict_3x3, RestrictedEdgeSets(forbidden={(0, 0)}))
    with pytest.raises(ReductionError, match="exactly one forbidden edge"):
        reduce_forbidden1_to_dense(strict_3x3, RestrictedEdgeSets())


@settings(max_examples=FORBIDDEN_SAMPLES, deadline=None)
@given(seed=st.integers(0, 10**6), n=st.integers(1, 3))
def test_forbidden_edge_chain_preserves_existence(seed, n):
    source = gen_front_tied_smti(n, 0.6, 0.5, seed=seed)
    reduction = reduce_perfect_to_forbidden1(source)
    assert stage_order_violations(reduction) == []
    assert reduction.instance.max_tie_length() <= 2
    dense = reduce_forbidden1_to_dense(reduction)
    assert dense.n_edges == (n + 2) ** 2 - 1

    perfect = oracle_perfect_weak(source)
    avoiding = oracle_exists(reduction.instance, reduction.restricted, StabilityLevel.WEAK)
    dense_perfect = oracle_perfect_weak(dense)
    assert (perfect is None) == (avoiding is None) == (dense_perfect is None)

    if perfect is not None:
        assert forbidden1_backward_witness(reduction, forbidden1_forward_witness(reduction, perfect)) == perfect
        recovered = forbidden1_backward_witness(reduction, avoiding)
        assert is_perfect(source, recovered)
        assert not blocking_report(source, recovered).weakly_blocking
        as_dense = dense_forward_witness(reduction.instance, reduction.restricted, dense, avoiding)
        assert dense_backward_witness(reduction.instance, reduction.restricted, dense, as_dense) == avoiding


# Exactly-one-in-three gadgets ------------------------------------------------


def test_gadget_counts(sat_formula):
    reduction = reduce_sat_to_ssmti_free(sat_formula)
    instance = reduction.instance
    assert instance.n_vertices == 36
    assert instance.n_edges == 51
    assert len(reduction.restricted.free) == 9
    assert set(reduction.restricted.free) == set(reduction.edges_with_stage("free"))
    assert reduction.stage_counts() == {"free": 9, "variable": 27, "interconnecting": 9, "clause": 6}
    assert instance.max_degree() == 4
    assert conforms_to_master_list(instance, Side.WOMAN, reduction.master_list)


def test_clause_vertex_ranks_its_interconnecting_edges_first(sat_formula):
    reduction = reduce_sat_to_ssmti_free(sat_formula)
    c = reduction.vertex("c_1")
    groups = reduction.instance.preference_list(c)
    assert len(groups) == 2
    assert [reduction.instance.label(man(k)) for k in groups[0]] == ["w_1^1", "w_2^1", "w_3^1"]
    assert [reduction.instance.label(man(k)) for k in groups[1]] == ["b_1"]


def test_builder_needs_exactly_three_occurrences():
    with pytest.raises(ReductionError, match="exactly three"):
        reduce_sat_to_ssmti_free(formula_from_clauses(3, [(0, 1, 2)]))


def test_forward_witness_is_super_stable(sat_formula):
    reduction = reduce_sat_to_ssmti_free(sat_formula)
    matching = sat_forward_witness(reduction, Assignment((True, False, False)))
    assert len(matching) == 15
    assert verify_stable(reduction.instance, reduction.restricted, matching, StabilityLevel.SUPER)
    assert sat_backward_witness(reduction, matching) == Assignment((True, False, False))


def test_forward_witness_rejects_bad_assignments(sat_formula):
    reduction = reduce_sat_to_ssmti_free(sat_formula)
    with pytest.raises(WitnessError):
        sat_forward_witness(reduction, Assignment((False, False, False)))


def test_backward_witness_rejects_unstable_matchings(sat_formula):
    reduction = reduce_sat_to_ssmti_free(sat_formula)
    with pytest.raises(WitnessError, match="not strongly stable"):
        sat_backward_witness(reduction, Matching.empty(reduction.instance))


def test_oracle_witness_decodes_to_a_satisfying_assignment(sat_formula):
    reduction = reduce_sat_to_ssmti_free(sat_formula)
    witness = oracle_exists(reduction.instance, reduction.restricted, StabilityLevel.STRONG)
    assert witness is not None
    assert is_one_in_three(sat_formula, sat_backward_witness(reduction, witness))


@pytest.mark.parametrize("level", [StabilityLevel.STRONG, StabilityLevel.SUPER])
def test_subset_solver_finds_the_satisfiable_gadget(sat_formula, level):
    reduction = reduce_sat_to_ssmti_free(sat_formula)
    outcome = run_free_fpt(reduction.instance, reduction.restricted.free, level)
    assert outcome.matching is not None
    assert is_one_in_three(sat_formula, sat_backward_witness(reduction, outcome.matching))


def test_unsatisfiable_formula_gives_no_stable_matching(unsat_formula):
    assert solve_1in3_bruteforce(unsat_formula) is None
    reduction = reduce_sat_to_ssmti_free(unsat_formula)
    assert reduction.instance.max_degree() == 4
    outcome = run_free_fpt(reduction.instance, reduction.restricted.free, StabilityLevel.STRONG)
    assert outcome.matching is None
    assert outcome.subproblem_calls == 2 ** 12


def _check_gadget_shape(formula, reduction):
    assert len(reduction.restricted.free) == 3 * formula.n_vars
    assert reduction.instance.max_degree() == 4
    assert conforms_to_master_list(reduction.instance, Side.WOMAN, reduction.master_list)


@settings(max_examples=FORMULA_SAMPLES, deadline=None)
@given(seed=st.integers(0, 10**6))
def test_generated_three_variable_formulas_agree_everywhere(seed):
    formula = gen_random_1in3(3, seed=seed)
    reduction = reduce_sat_to_ssmti_free(formula)
    _check_gadget_shape(formula, reduction)

    assignment = solve_1in3_bruteforce(formula)
    witness = oracle_exists(reduction.instance, reduction.restricted, StabilityLevel.STRONG)
    strong = run_free_fpt(reduction.instance, reduction.restricted.free, StabilityLevel.STRONG).matching
    super_ = run_free_fpt(reduction.instance, reduction.restricted.free, StabilityLevel.SUPER).matching
    assert (assignment is None) == (witness is None) == (strong is None) == (super_ is None)

    if assignment is not None:
        forward = sat_forward_witness(reduction, assignment)
        assert verify_stable(reduction.instance, reduction.restricted, forward, StabilityLevel.SUPER)
        assert sat_backward_witness(reduction, forward) == assignment
        for matching in (witness, strong, super_):
            assert is_one_in_three(formula, sat_backward_witness(reduction, matching))


@settings(max_examples=2, deadline=None)
@given(seed=st.integers(0, 10**6))
def test_generated_four_variable_formulas_have_no_stable_matching(seed):
    # each true variable covers three clauses, so a solution needs 3 | n clauses
    formula = gen_random_1in3(4, seed=seed)
    reduction = reduce_sat_to_ssmti_free(formula)
    _check_gadget_shape(formula, reduction)
    assert solve_1in3_bruteforce(formula) is None
    for level in (StabilityLevel.STRONG, StabilityLevel.SUPER):
        outcome = run_free_fpt(reduction.instance, reduction.restricted.free, level)
        assert outcome.matching is None
        assert outcome.subproblem_calls == 2 ** 12


# Free completion -------------------------------------------------------------


def test_complete_instance_is_a_fixed_point(strict_3x3):
    completed, restricted = complete_with_free(strict_3x3, RestrictedEdgeSets())
    assert completed == strict_3x3
    assert restricted.is_empty


def test_one_edge_two_by_two_gets_three_free_edges():
    instance = build_instance([[0], []], [[0], []])
    restricted = RestrictedEdgeSets(forced={(0, 0)})
    completed, completed_restricted = complete_with_free(instance, restricted)
    assert completed.is_complete()
    assert completed_restricted.free == {(0, 1), (1, 0), (1, 1)}
    assert completed_restricted.forced == {(0, 0)}
    assert completed.rank(woman(1), (0, 1)) == completed.rank(woman(1), (1, 1)) == 1
    assert completed.rank(woman(0), (1, 0)) == 2
    assert completion_stages(instance, completed)[(0, 0)] == "original"
    assert completion_stages(instance, completed)[(1, 1)] == "completion"


@settings(max_examples=COMPLETION_SAMPLES, deadline=None)
@given(seed=st.integers(0, 10**6), level=st.sampled_from([StabilityLevel.STRONG, StabilityLevel.SUPER]))
def test_completion_preserves_existence(seed, level):
    instance = gen_random_smti(3, 3, 0.5, 0.5, seed=seed)
    restricted = gen_random_restrictions(instance, 0.0, 0.0, 0.3, seed=seed)
    completed, completed_restricted = complete_with_free(instance, restricted)
    before = oracle_exists(instance, restricted, level)
    after = oracle_exists(completed, completed_restricted, level)
    assert (before is None) == (after is None)
    if before is not None:
        assert verify_stable(
            completed, completed_restricted, completion_forward_witness(instance, restricted, before, level), level
        )
        back = completion_backward_witness(instance, restricted, after, level)
        assert verify_stable(instance, restricted, back, level)
