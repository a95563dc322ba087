import pytest

from smti_restricted.logic.bench import CSV_HEADER, bench_fpt, format_bench_csv, unsat_free_family
from smti_restricted.logic.oracle import oracle_exists
from smti_restricted.logic.stability import StabilityLevel
from smti_restricted.models.errors import InstanceError
from smti_restricted.models.restrictions import RestrictedEdgeSets


def test_family_shape():
    instance, free = unsat_free_family(3)
    assert (instance.n_men, instance.n_women) == (6, 6)
    assert instance.n_edges == 4 + 16
    assert len(free) == 3
    assert all(i >= 2 and j >= 2 for i, j in free)


def test_family_has_no_strongly_stable_matching():
    instance, free = unsat_free_family(2, block=2)
    assert oracle_exists(instance, RestrictedEdgeSets(free=free), StabilityLevel.STRONG) is None


def test_family_rejects_too_many_free_edges():
    with pytest.raises(InstanceError):
        unsat_free_family(5, block=2)
    with pytest.raises(InstanceError, match="non-negative"):
        unsat_free_family(0, block=-1)


def test_calls_double_with_every_free_edge():
    rows = bench_fpt(unsat_free_family, range(0, 4))
    assert [row.k for row in rows] == [0, 1, 2, 3]
    assert [row.calls for row in rows] == [1, 2, 4, 8]
    assert not any(row.found for row in rows)
    assert all(row.seconds >= 0 for row in rows)


def test_csv_output():
    lines = format_bench_csv(bench_fpt(unsat_free_family, [0, 1], StabilityLevel.SUPER)).splitlines()
    assert lines[0] == ",".join(CSV_HEADER)
    assert lines[1].startswith("0,1,")
    assert lines[2].startswith("1,2,")
    assert lines[2].endswith(",0")
