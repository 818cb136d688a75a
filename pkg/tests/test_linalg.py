import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from weightcx.linalg import (
    DomainError,
    ExactMatrix,
    QQ,
    ShapeError,
    ZZ,
    integer_kernel_basis,
    kernel_basis,
    rank,
    rational,
    rref,
    smith_normal_form,
    solve,
    unimodular_inverse,
)

import oracles


def qmat(rows):
    return ExactMatrix.build(len(rows), len(rows[0]) if rows else 0, rows, QQ)


def zmat(rows):
    return ExactMatrix.build(len(rows), len(rows[0]) if rows else 0, rows, ZZ)


small_int = st.integers(min_value=-9, max_value=9)


def int_matrices(max_dim=4):
    return st.integers(1, max_dim).flatmap(
        lambda r: st.integers(1, max_dim).flatmap(
            lambda c: st.lists(
                st.lists(small_int, min_size=c, max_size=c), min_size=r, max_size=r
            )
        )
    )


def test_rational_parsing():
    assert rational("3/2") == rational(3) / rational(2)
    assert rational("-7") == rational(-7)
    assert rational(Fraction(5, 3)) == rational("5/3")
    with pytest.raises((ValueError, ZeroDivisionError)):
        rational("1/0")


def test_build_domain_enforcement():
    with pytest.raises(DomainError):
        zmat([[rational("1/2")]])
    with pytest.raises(ShapeError):
        ExactMatrix.build(2, 2, [[1, 2]], QQ)


def test_matrix_algebra_basics():
    a = qmat([[1, 2], [3, 4]])
    b = qmat([[0, 1], [1, 0]])
    assert (a * b).tolists() == [[2, 1], [4, 3]]
    assert (a + (-a)).is_zero()
    assert a.transpose().transpose() == a
    i = ExactMatrix.identity(2, QQ)
    assert a * i == a and i * a == a


@settings(max_examples=60, deadline=None)
@given(int_matrices())
def test_rref_matches_fraction_oracle(rows):
    m = qmat(rows)
    red, rk, tr = rref(m)
    oracle_red, oracle_rk = oracles.frac_rref(rows)
    assert rk == oracle_rk
    assert [[Fraction(int(x.numerator), int(x.denominator)) for x in row]
            for row in red.tolists()] == oracle_red
    assert tr * m == red


@settings(max_examples=60, deadline=None)
@given(int_matrices())
def test_kernel_basis_spans_fraction_kernel(rows):
    m = qmat(rows)
    kb = kernel_basis(m)
    assert (m * kb).is_zero()
    oracle = oracles.frac_kernel(rows)
    assert kb.cols == len(oracle)
    assert rank(kb) == len(oracle)


@settings(max_examples=60, deadline=None)
@given(int_matrices())
def test_smith_normal_form_properties(rows):
    m = zmat(rows)
    u, d, v = smith_normal_form(m)
    assert u * m * v == d
    assert abs(oracles.frac_det(u.tolists())) == 1
    assert abs(oracles.frac_det(v.tolists())) == 1
    diag = [d.entries[i][i] for i in range(min(d.rows, d.cols))]
    for r in range(d.rows):
        for c in range(d.cols):
            if r != c:
                assert d.entries[r][c] == 0
    nz = [abs(int(x)) for x in diag if x != 0]
    assert nz == oracles.int_snf_invariants(rows)
    for a, b in zip(nz, nz[1:]):
        assert b % a == 0


def test_solve_rational():
    a = qmat([[1, 2], [3, 4]])
    b = qmat([[5], [6]])
    x = solve(a, b)
    assert a * x == b
    assert solve(qmat([[1, 1], [1, 1]]), qmat([[0], [1]])) is None


def test_solve_integer_divisibility():
    assert solve(zmat([[2]]), zmat([[4]])).tolists() == [[2]]
    assert solve(zmat([[2]]), zmat([[3]])) is None
    a = zmat([[2, 0], [0, 3]])
    x = solve(a, zmat([[4], [9]]))
    assert a * x == zmat([[4], [9]])


@settings(max_examples=60, deadline=None)
@given(int_matrices())
def test_integer_kernel_is_saturated(rows):
    m = zmat(rows)
    kb = integer_kernel_basis(m)
    assert (m * kb).is_zero()
    assert kb.cols == len(rows[0]) - oracles.frac_rank(rows)
    # saturation: every rational kernel vector with integer entries must be an
    # integer combination of the basis
    qk = kernel_basis(ExactMatrix.build(m.rows, m.cols, rows, QQ))
    for c in range(qk.cols):
        col = [qk.entries[r][c] for r in range(qk.rows)]
        scale = 1
        for x in col:
            scale = scale * int(x.denominator) // __import__("math").gcd(scale, int(x.denominator))
        vec = zmat([[int(x * scale)] for x in col])
        if kb.cols:
            assert solve(kb, vec) is not None
        else:
            assert vec.is_zero()


def test_unimodular_inverse():
    u = zmat([[2, 3], [3, 5]])  # det 1, no unit entries
    ui = unimodular_inverse(u)
    assert u * ui == ExactMatrix.identity(2, ZZ)
    assert ui * u == ExactMatrix.identity(2, ZZ)


def test_randomized_solve_consistency():
    rng = random.Random(5)
    for _ in range(40):
        rows = [[rng.randint(-4, 4) for _ in range(rng.randint(1, 4))]
                for _ in range(rng.randint(1, 4))]
        rows = [row[: len(rows[0])] + [0] * (len(rows[0]) - len(row)) for row in rows]
        m = qmat(rows)
        xs = [[rng.randint(-3, 3)] for _ in range(m.cols)]
        b = m * (qmat(xs) if m.cols else ExactMatrix.zero(0, 1, QQ))
        x = solve(m, b)
        assert x is not None and m * x == b
