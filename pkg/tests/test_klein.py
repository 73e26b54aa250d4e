import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kleinlines.algebra import PrimeField
from kleinlines.klein import (
    CoincidentPointsError,
    IdenticalLinesError,
    NotOnQuadricError,
    PlaneCoords,
    PluckerLine,
    ProjectivePoint3,
    SkewLinesError,
    common_plane,
    intersection_point,
    involution,
    is_isotropic,
    line_in_plane,
    meets,
    meets_involuted,
    on_quadric,
    planes_skew,
    plucker_from_direction,
    plucker_from_points,
    point_on_line,
    regulus_complement,
    regulus_through,
    tangent_hyperplane,
)

from oracles import rank_mod

F7, F13, F101 = PrimeField(7), PrimeField(13), PrimeField(101)


def pt(F, *c):
    return ProjectivePoint3.of(F, *c)


def random_point(F, rng):
    while True:
        c = [rng.randrange(F.p) for _ in range(4)]
        if any(c):
            return c


def random_line(F, rng):
    while True:
        a, b = random_point(F, rng), random_point(F, rng)
        if rank_mod([a, b], F.p) == 2:
            return plucker_from_points(pt(F, *a), pt(F, *b)), a, b


def test_plucker_example():
    l = plucker_from_points(pt(F7, 1, 0, 0, 0), pt(F7, 1, 1, 0, 0))
    assert l == PluckerLine.of(F7, 1, 0, 0, 0, 0, 0)


def test_coincident_points_rejected():
    with pytest.raises(CoincidentPointsError):
        plucker_from_points(pt(F7, 1, 2, 3, 4), pt(F7, 2, 4, 6, 8))


def test_on_quadric_examples():
    assert on_quadric(F7.vector([1, 0, 0, 0, 0, 0]))
    assert not on_quadric(F7.vector([1, 0, 0, 1, 0, 0]))
    P = (F7(1), F7(5), F7(1, 5), F7(1), F7(3), F7(1, 2))
    assert on_quadric(P)


def test_off_quadric_tuple_rejected_as_line():
    with pytest.raises(NotOnQuadricError):
        PluckerLine.of(F7, 1, 0, 0, 1, 0, 0)


@pytest.mark.parametrize("p", [7, 13, 101])
def test_plucker_relation_holds(p):
    F = PrimeField(p)
    rng = random.Random(p)
    for _ in range(200):
        l, _, _ = random_line(F, rng)
        assert on_quadric(l.coords)


def test_meets_examples():
    rng = random.Random(1)
    l, _, _ = random_line(F13, rng)
    assert meets(l, l)
    o = pt(F13, 1, 0, 0, 0)
    assert meets(plucker_from_points(o, pt(F13, 1, 1, 2, 3)), plucker_from_points(o, pt(F13, 0, 5, 1, 1)))
    a, b, c, d = [1, 0, 0, 0], [0, 1, 0, 0], [1, 0, 0, 1], [1, 1, 1, 1]
    x_axis = plucker_from_points(pt(F13, *a), pt(F13, *b))
    other = plucker_from_points(pt(F13, *c), pt(F13, *d))
    assert meets(x_axis, other) == (rank_mod([a, b, c, d], 13) < 4)


@pytest.mark.parametrize("p", [5, 101])
def test_meets_matches_rank_oracle(p):
    F = PrimeField(p)
    rng = random.Random(7 * p)
    hits = 0
    for _ in range(500):
        l1, a1, b1 = random_line(F, rng)
        l2, a2, b2 = random_line(F, rng)
        expected = rank_mod([a1, b1, a2, b2], p) < 4
        hits += expected
        assert meets(l1, l2) == expected == meets_involuted(l1, l2)
    assert hits > 0


def test_involution_examples():
    P = F7.vector([1, 2, 3, 4, 5, 6])
    assert involution(P) == F7.vector([4, 5, 6, 1, 2, 3])
    assert involution(involution(P)) == P
    l, _, _ = random_line(F13, random.Random(3))
    assert on_quadric(involution(l))


def test_is_isotropic_examples():
    F = F13
    assert is_isotropic((F.one, F.i, F.zero))
    assert not is_isotropic((F.one, F.zero, F.zero))
    for u in range(1, 13):
        w = F(u).inverse()
        assert is_isotropic((w - F(u), F.i * (w + F(u)), F(2)))


def test_is_isotropic_nonsplit_field():
    F = F7
    assert is_isotropic((F.one, F.i, F.zero))


def test_point_on_line_examples():
    l = plucker_from_points(pt(F101, 1, 0, 0, 0), pt(F101, 1, 1, 0, 0))
    assert point_on_line(pt(F101, 1, 0, 0, 0), l)
    assert not point_on_line(pt(F101, 1, 1, 1, 0), l)


def test_point_on_line_rank_oracle():
    rng = random.Random(11)
    on = 0
    for _ in range(1000):
        l, a, b = random_line(F101, rng)
        if rng.random() < 0.3:
            s, t = rng.randrange(101), rng.randrange(101)
            q = [(s * x + t * y) % 101 for x, y in zip(a, b)]
            if not any(q):
                continue
        else:
            q = random_point(F101, rng)
        expected = rank_mod([a, b, q], 101) < 3
        on += expected
        assert point_on_line(pt(F101, *q), l) == expected
    assert on > 100


def test_line_points_enumeration():
    l, a, b = random_line(F13, random.Random(2))
    pts = list(l.points())
    assert len(set(pts)) == 14
    assert all(point_on_line(q, l) for q in pts)


def test_intersection_point_examples():
    o = pt(F13, 1, 0, 0, 0)
    x_axis = plucker_from_points(o, pt(F13, 0, 1, 0, 0))
    y_axis = plucker_from_points(o, pt(F13, 0, 0, 1, 0))
    assert intersection_point(x_axis, y_axis) == o
    direction = (2, 3, 5)
    l1 = plucker_from_direction((0, 0, 0), direction, F13)
    l2 = plucker_from_direction((1, 0, 0), direction, F13)
    assert intersection_point(l1, l2) == pt(F13, 0, *direction)
    skew = plucker_from_points(pt(F13, 1, 0, 0, 1), pt(F13, 0, 0, 1, 0))
    assert not meets(x_axis, skew)
    with pytest.raises(SkewLinesError):
        intersection_point(x_axis, skew)
    with pytest.raises(IdenticalLinesError):
        intersection_point(x_axis, x_axis)


def test_common_plane_examples():
    o = pt(F13, 1, 0, 0, 0)
    x_axis = plucker_from_points(o, pt(F13, 0, 1, 0, 0))
    y_axis = plucker_from_points(o, pt(F13, 0, 0, 1, 0))
    assert common_plane(x_axis, y_axis) == PlaneCoords.of(F13, 0, 0, 0, 1)
    m1 = plucker_from_points(pt(F13, 0, 1, 0, 0), pt(F13, 0, 0, 1, 0))
    m2 = plucker_from_points(pt(F13, 0, 1, 0, 0), pt(F13, 0, 0, 0, 1))
    assert common_plane(m1, m2) == PlaneCoords.of(F13, 1, 0, 0, 0)


def test_intersection_and_plane_contain_generators():
    rng = random.Random(5)
    found = 0
    while found < 100:
        l1, a1, b1 = random_line(F13, rng)
        l2, a2, b2 = random_line(F13, rng)
        if l1 == l2 or not meets(l1, l2):
            continue
        found += 1
        q = intersection_point(l1, l2)
        plane = common_plane(l1, l2)
        assert point_on_line(q, l1) and point_on_line(q, l2)
        assert all(plane.contains(pt(F13, *x)) for x in (a1, b1, a2, b2))
        assert line_in_plane(l1, plane) and line_in_plane(l2, plane)


def test_tangent_hyperplane():
    P0 = PluckerLine.of(F13, 1, 0, 0, 0, 0, 0)
    assert tangent_hyperplane(P0) == F13.vector([0, 0, 0, 1, 0, 0])
    rng = random.Random(9)
    l0, a0, b0 = random_line(F13, rng)
    N = tangent_hyperplane(l0)
    assert sum((n * x for n, x in zip(N, l0.coords)), F13.zero).is_zero()
    for _ in range(200):
        l, _, _ = random_line(F13, rng)
        in_hyperplane = sum((n * x for n, x in zip(N, l.coords)), F13.zero).is_zero()
        assert in_hyperplane == meets(l, l0)


def _skew_triple(F, rng):
    while True:
        ls = [random_line(F, rng)[0] for _ in range(3)]
        if not any(meets(x, y) for x, y in [(ls[0], ls[1]), (ls[0], ls[2]), (ls[1], ls[2])]):
            return ls


def test_regulus_complement_transversals():
    rng = random.Random(4)
    for _ in range(5):
        l1, l2, l3 = _skew_triple(F13, rng)
        comp = regulus_complement(l1, l2, l3)
        lines = comp.lines()
        assert lines
        assert all(meets(m, l) for m in lines for l in (l1, l2, l3))
        assert planes_skew(regulus_through(l1, l2, l3), comp)


def test_regulus_complement_of_hyperboloid_ruling():
    # ruling of x1 x2 = x0 x3: for fixed s the line through (1:s:0:0) and (0:0:1:s)
    F = F101
    ruling = [plucker_from_points(pt(F, 1, s, 0, 0), pt(F, 0, 0, 1, s)) for s in (0, 1, 2)]
    comp = regulus_complement(*ruling)
    lines = comp.lines()
    assert len(lines) >= 3
    for m in lines:
        for q in m.points():
            x0, x1, x2, x3 = q.coords
            assert x1 * x2 == x0 * x3


def test_regulus_complement_rejects_meeting_lines():
    o = pt(F13, 1, 0, 0, 0)
    ls = [plucker_from_points(o, pt(F13, 0, 1, k, 0)) for k in range(3)]
    with pytest.raises(ValueError):
        regulus_complement(*ls)


@given(st.lists(st.integers(0, 12), min_size=8, max_size=8), st.integers(1, 12))
@settings(max_examples=100, deadline=None)
def test_projective_scaling_invariance(c, lam):
    a, b = c[:4], c[4:]
    if not any(a) or not any(b) or rank_mod([a, b], 13) < 2:
        return
    l = plucker_from_points(pt(F13, *a), pt(F13, *b))
    l_scaled = plucker_from_points(pt(F13, *[lam * x for x in a]), pt(F13, *b))
    assert l == l_scaled
    assert hash(l) == hash(l_scaled)
