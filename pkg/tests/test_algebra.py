import pickle

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kleinlines.algebra import (
    PrimeField,
    det,
    is_square,
    is_square_in_field,
    kernel,
    rank,
    rref,
    solve,
    sqrt,
)

from oracles import rank_mod

PRIMES = [3, 5, 7, 11, 13, 101, 1009]


@pytest.mark.parametrize("p", [0, 1, 2, 4, 9, 15, -7])
def test_rejects_bad_modulus(p):
    with pytest.raises(ValueError):
        PrimeField(p)


def test_is_square_examples():
    assert not is_square(PrimeField(7)(-1))
    assert is_square(PrimeField(13)(-1))
    for p in PRIMES:
        assert is_square(PrimeField(p)(0))


@pytest.mark.parametrize("p", [5, 7, 13, 101])
def test_is_square_matches_enumeration(p):
    F = PrimeField(p)
    squares = {x * x % p for x in range(p)}
    assert [is_square(F(v)) for v in range(p)] == [v in squares for v in range(p)]


def test_is_square_rejects_extension_elements():
    F = PrimeField(7)
    with pytest.raises(ValueError):
        is_square(F(1, 1))


def test_sqrt_examples():
    assert sqrt(PrimeField(5)(-1)) == 2
    assert sqrt(PrimeField(7)(4)) == 2
    assert sqrt(PrimeField(7)(3)) is None


@pytest.mark.parametrize("p", [7, 11, 13])
def test_square_in_field_by_enumeration(p):
    F = PrimeField(p)
    elems = [F(a, b) for a in range(p) for b in range(p if not F.split else 1)]
    squares = {x * x for x in elems}
    assert all(is_square_in_field(e) == (e in squares) for e in elems)


@pytest.mark.parametrize("p", PRIMES)
def test_i_squared(p):
    F = PrimeField(p)
    assert F.i * F.i == F(-1)
    assert F.split == (p % 4 == 1)


@pytest.mark.parametrize("p", [7, 13])
@given(data=st.data())
@settings(max_examples=60, deadline=None)
def test_field_axioms(p, data):
    F = PrimeField(p)
    elem = st.builds(lambda a, b: F(a, b), st.integers(0, p - 1), st.integers(0, p - 1))
    a, b, c = data.draw(elem), data.draw(elem), data.draw(elem)
    assert a * (b + c) == a * b + a * c
    assert (a * b) * c == a * (b * c)
    assert a - a == F.zero
    if not a.is_zero():
        assert a * a.inverse() == F.one
        assert (b / a) * a == b
    assert a ** 3 == a * a * a


def test_elements_pickle():
    F = PrimeField(7)
    e = F(3, 5)
    assert pickle.loads(pickle.dumps(e)) == e
    assert pickle.loads(pickle.dumps(F)).p == 7


def test_kernel_examples():
    F = PrimeField(5)
    I4 = [[F(int(i == j)) for j in range(4)] for i in range(4)]
    assert kernel(I4) == []
    Z = [[F(0)] * 3 for _ in range(2)]
    assert len(kernel(Z)) == 3
    (v,) = kernel([[F(1), F(1)], [F(2), F(2)]])
    assert v[0] + v[1] == 0 and not v[0].is_zero()


@pytest.mark.parametrize("p", [5, 101])
@given(data=st.data())
@settings(max_examples=50, deadline=None)
def test_rank_and_kernel_against_oracle(p, data):
    F = PrimeField(p)
    r = data.draw(st.integers(1, 5))
    c = data.draw(st.integers(1, 6))
    ints = data.draw(st.lists(st.lists(st.integers(0, 3), min_size=c, max_size=c), min_size=r, max_size=r))
    M = [[F(x) for x in row] for row in ints]
    assert rank(M) == rank_mod(ints, p)
    basis = kernel(M)
    assert len(basis) == c - rank(M)
    for v in basis:
        assert all(sum((a * b for a, b in zip(row, v)), F.zero).is_zero() for row in M)


def test_solve_and_det():
    F = PrimeField(7)
    M = [[F(2), F(1)], [F(1), F(3)]]
    x = solve(M, [F(1), F(2)])
    assert [M[0][0] * x[0] + M[0][1] * x[1], M[1][0] * x[0] + M[1][1] * x[1]] == [1, 2]
    assert det(M) == 5
    assert solve([[F(1), F(1)], [F(1), F(1)]], [F(0), F(1)]) is None


def test_dimension_cap():
    F = PrimeField(5)
    with pytest.raises(ValueError):
        rref([[F(0)] * 9])
