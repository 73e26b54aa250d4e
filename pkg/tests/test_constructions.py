import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kleinlines.algebra import PrimeField
from kleinlines.constructions import (
    ConstructionError,
    NoIsotropicDirectionError,
    PairedLines,
    PointSetSpec,
    default_stack_count,
    generate,
    grid_pointset,
    isotropic_direction,
    isotropic_stack,
    max_points_on_isotropic_line,
    parallel_isotropic_pairs,
    random_pointset,
)
from kleinlines.pointio import PointSetParseError, format_pointset, parse_pointset, read_pointset, write_pointset

from oracles import ordered_distance_pairs, sq_dist


def test_random_pointset_deterministic_and_distinct():
    a = random_pointset(101, 300, seed=3)
    assert a == random_pointset(101, 300, seed=3)
    assert a != random_pointset(101, 300, seed=4)
    assert len(set(a)) == 300
    assert all(0 <= c < 101 for q in a for c in q)


def test_pointset_limits():
    assert len(grid_pointset(13, 3)) == 27
    with pytest.raises(ConstructionError):
        random_pointset(3, 28, seed=0)
    with pytest.raises(ConstructionError):
        grid_pointset(5, 6)


@pytest.mark.parametrize("p", [5, 13, 29, 101])
def test_isotropic_direction(p):
    for u in range(1, p):
        d = isotropic_direction(p, u)
        assert sum(x * x for x in d) % p == 0


def test_isotropic_direction_needs_split_field():
    with pytest.raises(NoIsotropicDirectionError):
        isotropic_direction(7, 1)
    with pytest.raises(NoIsotropicDirectionError):
        isotropic_stack(7, 10, 2, seed=0)


def _closed_form_zero_pairs(n, k):
    return k * (n // k) * (n // k - 1)


@pytest.mark.parametrize("p,n,k", [(29, 100, 5), (13, 40, 4), (101, 100, 5), (5, 10, 2)])
def test_isotropic_stack_counts(p, n, k):
    A = isotropic_stack(p, n, k, seed=1)
    assert len(A) == n == len(set(A))
    pairs = ordered_distance_pairs(A, 0, p)
    assert pairs >= _closed_form_zero_pairs(n, k)
    assert max_points_on_isotropic_line(A, p) >= n // k


def test_stack_beats_three_halves_scale():
    n = 100
    k = default_stack_count(n)
    assert k == 5
    A = isotropic_stack(29, n, k, seed=2)
    assert ordered_distance_pairs(A, 0, 29) >= n ** 1.5 / 4


def test_isotropic_stack_preconditions():
    with pytest.raises(ConstructionError):
        isotropic_stack(13, 10, 3, seed=0)
    with pytest.raises(ConstructionError):
        isotropic_stack(13, 100, 5, seed=0)  # 20 points on a 13-point line


@pytest.mark.xfail(strict=True, raises=ConstructionError,
                   reason="an affine line over F_5 has 5 points, so 10 points per line cannot exist")
def test_stack_p5_n20_k2_example():
    assert len(isotropic_stack(5, 20, 2, seed=0)) == 20


def test_parallel_pairs():
    record = []
    A = parallel_isotropic_pairs(29, 40, 2, seed=0, record=record)
    assert len(A) == 40
    assert ordered_distance_pairs(A, 2, 29) >= 2 * 20 * 20
    (pair,) = record
    assert isinstance(pair, PairedLines)
    assert sum(x * x for x in pair.direction) % 29 == 0
    assert sum(x * d for x, d in zip(pair.offset, pair.direction)) % 29 == 0
    assert sq_dist(pair.offset, (0, 0, 0), 29) == 4
    with pytest.raises(ConstructionError):
        parallel_isotropic_pairs(29, 40, 0, seed=0)


def test_max_points_examples():
    assert max_points_on_isotropic_line([(0, 0, 0), (1, 0, 0), (0, 1, 0)], 13) == 1
    assert max_points_on_isotropic_line([], 13) == 0
    A = random_pointset(101, 50, seed=0)
    value = max_points_on_isotropic_line(A, 101)
    assert 1 <= value <= 50
    hypothesis_holds = value <= math.isqrt(49) + 1
    assert hypothesis_holds


def _max_points_oracle(A, p):
    best = 1 if A else 0
    for a in A:
        for b in A:
            if a == b or sq_dist(a, b, p):
                continue
            d = [(y - x) % p for x, y in zip(a, b)]
            on = sum(1 for c in A if all(((c[i] - a[i]) * d[j] - (c[j] - a[j]) * d[i]) % p == 0
                                        for i in range(3) for j in range(3)))
            best = max(best, on)
    return best


@given(st.lists(st.tuples(*[st.integers(0, 12)] * 3), max_size=25, unique=True), st.integers(0, 10 ** 6))
@settings(max_examples=60, deadline=None)
def test_max_points_matches_oracle(A, seed):
    A = A + isotropic_stack(13, 6, 1, seed=seed)
    A = list(dict.fromkeys(A))
    assert max_points_on_isotropic_line(A, 13) == _max_points_oracle(A, 13)


def test_generate_dispatch():
    g = generate(PointSetSpec("grid", p=13, n=27))
    assert len(g.points) == 27 and g.meta == {"side": 3}
    g = generate(PointSetSpec("isotropic_stack", p=29, n=100))
    assert g.meta == {"k": 5}
    with pytest.raises(ConstructionError):
        generate(PointSetSpec("grid", p=13, n=20))
    with pytest.raises(ConstructionError):
        PointSetSpec("bogus", p=13)
    with pytest.raises(ConstructionError):
        generate(PointSetSpec("parallel_isotropic_pairs", p=29, n=40))


def test_pointset_roundtrip(tmp_path):
    A = random_pointset(1009, 50, seed=9)
    path = tmp_path / "a.txt"
    write_pointset(path, 1009, A, comments=["made in a test"])
    assert read_pointset(path) == (1009, A)
    assert parse_pointset(format_pointset(1009, A)) == (1009, A)


@pytest.mark.parametrize("text", [
    "",
    "1,2,3\n",
    "p=7\n",
    "p=9 n=0\n",
    "p=7 n=2\n1,2,3\n",
    "p=7 n=1\n1,2\n",
    "p=7 n=1\n1,2,x\n",
    "p=7 n=1\n1,2,7\n",
    "p=7 n=2\n1,2,3\n1,2,3\n",
])
def test_parse_errors(text):
    with pytest.raises(PointSetParseError):
        parse_pointset(text)


def test_parse_comments_and_blank_lines():
    text = "# leading\np=7 n=2  # header\n\n1,2,3\n 4, 5, 6 # trailing\n"
    assert parse_pointset(text) == (7, [(1, 2, 3), (4, 5, 6)])


def test_missing_file():
    with pytest.raises(PointSetParseError):
        read_pointset("/nonexistent/points.txt")
