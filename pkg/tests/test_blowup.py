from math import comb

import pytest

from fmckit.blowup import (
    canonical_discrepancies,
    picard_number,
    recursive_schedule,
    stage_increment,
    symmetric_schedule,
)
from fmckit.exact import subsets


def test_picard_examples():
    assert picard_number(1, 1, 3) == 4
    assert picard_number(1, 1, 2) == 2
    # rho(P^2[2]) = 2 + 1 exceptional divisor
    assert picard_number(1, 2, 2) == 3
    with pytest.raises(ValueError):
        picard_number(0, 1, 2)


@pytest.mark.parametrize("rho", [1, 2, 5])
def test_curves_with_two_points(rho):
    # the only diagonal of C^2 is a divisor, so C[2] = C^2
    assert picard_number(rho, 1, 2) == 2 * rho


@pytest.mark.parametrize("n", range(1, 13))
def test_schedule_lengths(n):
    expected = 2**n - n - 1
    assert len(symmetric_schedule(n)) == expected
    assert len(recursive_schedule(n)) == expected


@pytest.mark.parametrize("n", range(2, 9))
def test_both_schedules_visit_each_diagonal_once(n):
    every = sorted(subsets(n, (2, n)))
    for sched in (symmetric_schedule(n), recursive_schedule(n)):
        got = sched.diagonals()
        assert sorted(got) == every


def test_symmetric_rounds_go_from_small_to_big_diagonals():
    s = symmetric_schedule(4)
    assert [len(r) for r in s.rounds] == [1, 4, 6]
    assert [len(r[0].subset) for r in s.rounds] == [4, 3, 2]


def test_recursive_stages():
    assert [stage_increment(k) for k in range(2, 7)] == [2 ** (k - 1) - 1 for k in range(2, 7)]
    s = recursive_schedule(4)
    stage4 = [c for c in s.centers if c.stage == 4]
    assert [c.family for c in stage4] == ["full", "strict", "strict", "strict", "point", "point", "point"]
    assert stage4[0].diagonal.members == (1, 2, 3, 4)
    assert recursive_schedule(2).centers[0].family == "point"


def test_schedule_json_shape():
    doc = symmetric_schedule(3).to_json()
    assert doc == {"n": 3, "style": "symmetric", "rounds": [[[1, 2, 3]], [[1, 2], [1, 3], [2, 3]]]}
    doc = recursive_schedule(3).to_json()
    assert doc["rounds"][0] == [[1, 2]]
    assert len(doc["labels"]) == len(doc["rounds"])


def test_center_dimensions():
    c = symmetric_schedule(5, dim_base=2).rounds[0][0]
    assert c.dimension == 2 and c.codimension == 8


@pytest.mark.parametrize("dim", [1, 2, 3])
@pytest.mark.parametrize("n", [2, 3, 5])
def test_discrepancies(dim, n):
    table = canonical_discrepancies(dim, n)
    assert sorted(table) == list(range(2, n + 1))
    for s, d in table.items():
        assert d.coefficient == (s - 1) * dim - 1
        assert d.divisorial == (dim == 1 and s == 2)


def test_picard_counts_blown_up_centers():
    for n in range(1, 9):
        for dim in (1, 2, 3):
            divisorial = comb(n, 2) if dim == 1 else 0
            assert picard_number(1, dim, n) == n + len(symmetric_schedule(n, dim)) - divisorial
