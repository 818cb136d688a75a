import json
import random

import pytest

from weightcx.k0 import LaurentClass
from weightcx.motive import (
    Affine,
    BlowUp,
    DisjointUnion,
    MalformedExpr,
    NegativeCodim,
    OpenComplement,
    Point,
    Product,
    Proj,
    SmoothProper,
    Toric,
    Torus,
    blowup_square,
    check_scissor,
    check_square,
    chi,
    chi_dual,
    dim,
    expr_from_data,
    expr_from_json,
    expr_to_data,
    expr_to_json,
    square_from_data,
    square_to_data,
    weight_window,
)
from weightcx import sampling

import oracles


def test_chi_of_basic_spaces():
    assert chi(Point()) == LaurentClass.one()
    for n in range(6):
        assert chi(Affine(n)) == LaurentClass.lefschetz(n)
        assert chi(Proj(n)).as_dict() == {i: 1 for i in range(n + 1)}


def test_chi_of_torus_matches_binomial_oracle():
    for k in range(1, 6):
        # (L - 1)^k expanded with binomial coefficients
        expect = oracles.binomial_expand(1, -1, k)
        assert chi(Torus(k)).as_dict() == {e: c for e, c in expect.items() if c}


def test_chi_of_projective_plane_fan():
    # the complete fan with 1 zero-cone, 3 rays and 3 two-cones
    t = Toric(((0, 1), (1, 3), (2, 3)), 2)
    assert chi(t) == chi(Proj(2))
    assert chi(t).render() == "1 + 1*L^1 + 1*L^2"


def test_chi_of_blowup_of_plane_at_a_point():
    e = BlowUp(Proj(2), Point(), 2)
    assert chi(e).as_dict() == {0: 1, 1: 2, 2: 1}


def test_chi_is_additive_and_multiplicative():
    a, b = Proj(1), Torus(2)
    assert chi(DisjointUnion((a, b))) == chi(a) + chi(b)
    assert chi(Product(a, b)) == chi(a) * chi(b)
    assert dim(Product(a, b)) == 3


def test_chi_of_open_complement():
    # P^2 minus P^1 is the affine plane
    e = OpenComplement(Proj(2), Proj(1))
    assert chi(e) == chi(Affine(2))


def test_chi_dual_negates_exponents():
    rng = random.Random(0)
    for _ in range(60):
        e = sampling.random_expr(rng)
        c = chi(e)
        assert chi_dual(e, 0).as_dict() == {-a: v for a, v in c.as_dict().items()}
        s = rng.randint(-2, 3)
        assert chi_dual(e, s).as_dict() == {s - a: v for a, v in c.as_dict().items()}


def test_chi_support_stays_in_dimension_range():
    rng = random.Random(1)
    for _ in range(80):
        e = sampling.random_expr(rng)
        d = dim(e)
        supp = chi(e).support()
        assert all(0 <= a <= d for a in supp)
        assert chi(e).coefficient(d) > 0


def test_malformed_expressions_rejected():
    with pytest.raises(MalformedExpr):
        Affine(-1)
    with pytest.raises(NegativeCodim):
        BlowUp(Proj(2), Point(), 0)
    with pytest.raises(MalformedExpr):
        BlowUp(Proj(2), Proj(1), 3)  # codim inconsistent with dimensions
    with pytest.raises(MalformedExpr):
        Toric(((1, 2),), 1)  # missing the zero cone
    with pytest.raises(MalformedExpr):
        Toric(((0, 2),), 0)  # more than one zero-dimensional cone
    with pytest.raises(MalformedExpr):
        OpenComplement(Point(), Proj(1))  # closed part too big
    with pytest.raises(MalformedExpr):
        DisjointUnion(())
    with pytest.raises(MalformedExpr):
        SmoothProper(LaurentClass.from_dict({-1: 1, 2: 1}), 2)


def test_weight_window_sharpness():
    assert weight_window(Point()) == ((0, 0), (0, 0))
    assert weight_window(Proj(3)) == ((0, 0), (0, 0))
    assert weight_window(Toric(((0, 1), (1, 3), (2, 3)), 2)) == ((0, 0), (0, 0))
    # an incomplete fan only gets the generic window
    assert weight_window(Toric(((0, 1), (1, 1)), 2)) == ((0, 2), (-2, 0))
    assert weight_window(Affine(2)) == ((0, 2), (-2, 0))
    assert weight_window(Torus(1)) == ((0, 1), (-1, 0))


def test_scissor_relation():
    rng = random.Random(2)
    for _ in range(60):
        x = sampling.random_expr(rng)
        d = dim(x)
        z = Point() if d == 0 else Proj(rng.randint(0, d - 1))
        assert check_scissor(x, z)


def test_blowup_square_passes():
    rng = random.Random(3)
    for _ in range(40):
        n = rng.randint(1, 4)
        codim = rng.randint(1, n)
        x = Proj(n)
        z = Proj(n - codim)
        sq = blowup_square(x, z, codim)
        for s in (0, 1, 2):
            assert check_square(sq, s)


def test_expr_json_roundtrip():
    rng = random.Random(4)
    for _ in range(60):
        e = sampling.random_expr(rng)
        assert expr_from_data(expr_to_data(e)) == e
        text = expr_to_json(e)
        assert expr_from_json(text) == e
        # canonical serialization is stable
        assert expr_to_json(expr_from_json(text)) == text
        json.loads(text)


def test_square_json_roundtrip():
    sq = blowup_square(Proj(3), Proj(1), 2)
    assert square_from_data(square_to_data(sq)) == sq


def test_bad_json_data_rejected():
    with pytest.raises(MalformedExpr):
        expr_from_data({"op": "mystery"})
    with pytest.raises(MalformedExpr):
        expr_from_data({"op": "proj"})  # missing n
