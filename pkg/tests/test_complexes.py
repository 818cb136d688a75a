import random

import pytest

from weightcx.addcat import (
    DUAL_NUMBERS_INSTANCE,
    Q_INSTANCE,
    TATE_INSTANCE,
    Z_INSTANCE,
    free_obj,
    identity_mor,
    mor,
    mor_scale,
)
from weightcx.complexes import (
    chain_map,
    cm_compose,
    cm_equal,
    complex_of,
    cone,
    dual_complex,
    hom_group_K,
    hom_group_QK,
    identity_chain_map,
    is_homotopic,
    is_null_homotopic,
    is_quasi_homotopic,
    minimize,
    one_term_complex,
    reindex,
    shift,
    shift_chain_map,
    validate,
    zero_chain_map,
)
from weightcx import sampling

import oracles

ALL_INSTANCES = [Q_INSTANCE, Z_INSTANCE, TATE_INSTANCE, DUAL_NUMBERS_INSTANCE]


def two_term(inst, entry, deg=0):
    o = free_obj(inst, 1)
    return complex_of(inst, {deg: o, deg + 1: o}, {deg: mor(o, o, [[entry]])})


def test_validate_catches_broken_square():
    o = free_obj(Q_INSTANCE, 1)
    c = complex_of(
        Q_INSTANCE,
        {0: o, 1: o, 2: o},
        {0: identity_mor(o), 1: identity_mor(o)},
        check=False,
    )
    rep = validate(c)
    assert not rep.valid and rep.degree == 0


def test_shift_signs_and_composition():
    rng = random.Random(0)
    for inst in ALL_INSTANCES:
        for _ in range(15):
            c = sampling.random_complex(inst, rng)
            a, b = rng.randint(-3, 3), rng.randint(-3, 3)
            assert shift(shift(c, a), b) == shift(c, a + b)
            assert shift(c, 0) == c
            s = shift(c, 1)
            for k, d in c.diffs:
                assert s.diff(k - 1) == mor_scale(d, -1)
            # plain reindexing keeps differentials untouched
            r = reindex(c, 1)
            for k, d in c.diffs:
                assert r.diff(k - 1) == d


def test_cone_structure_and_exactness():
    rng = random.Random(1)
    for inst in ALL_INSTANCES:
        for _ in range(15):
            a = sampling.random_complex(inst, rng)
            b = sampling.random_complex(inst, rng)
            f = sampling.random_chain_map(a, b, rng)
            c, incl, proj = cone(f)
            assert validate(c).valid
            assert cm_equal(incl, incl)  # chain-map law checked on build
            # proj . incl = 0 into the shifted source
            comp = cm_compose(proj, incl)
            assert cm_equal(comp, zero_chain_map(b, shift(a, 1)))


def test_cone_of_identity_is_contractible():
    rng = random.Random(2)
    for inst in ALL_INSTANCES:
        for _ in range(10):
            c = sampling.contractible_complex(inst, rng)
            idc = identity_chain_map(c)
            zc = zero_chain_map(c, c)
            w = is_homotopic(idc, zc)
            assert w is not None
            assert w.verify(idc, zc)


def test_homotopy_witness_verification():
    rng = random.Random(3)
    found = 0
    for inst in ALL_INSTANCES:
        for _ in range(30):
            a = sampling.random_complex(inst, rng)
            b = sampling.random_complex(inst, rng)
            f = sampling.random_chain_map(a, b, rng)
            g = sampling.random_chain_map(a, b, rng)
            w = is_homotopic(f, g)
            if w is not None:
                found += 1
                assert w.verify(f, g)
            wq = is_quasi_homotopic(f, g)
            if w is not None:
                assert wq is not None
            if wq is not None:
                assert wq.verify(f, g)
    assert found > 0


def test_hom_group_over_z_with_torsion_oracle():
    # Y = [Z --2--> Z] in degrees 0,1; maps Y -> Y modulo homotopy form Z/2.
    y = two_term(Z_INSTANCE, 2)
    gp = hom_group_K(y, y)
    assert gp.free_rank == 0
    assert gp.invariant_factors == (2,)
    # independent check: chain maps are pairs (u0, u1) with 2*u0 = 2*u1, i.e.
    # the diagonal lattice Z*(1,1); homotopies s: Y^1 -> Y^0 land on (2s, 2s),
    # which is 2*(1,1), so the quotient is the cokernel of [2] in Z^1
    free, torsion = oracles.int_cokernel([[2]], 1)
    assert free == 0 and torsion == [2]


def test_hom_group_rational_kills_torsion():
    y = two_term(Z_INSTANCE, 2)
    assert hom_group_K(y, y).is_trivial is False
    yq = two_term(Q_INSTANCE, 2)
    gp = hom_group_K(yq, yq)
    assert gp.free_rank == 0 and gp.invariant_factors == ()
    assert gp.is_trivial


def test_hom_group_of_one_term_complexes():
    a = one_term_complex(free_obj(Z_INSTANCE, 2))
    gp = hom_group_K(a, a)
    assert gp.free_rank == 4 and gp.invariant_factors == ()
    gq = hom_group_QK(a, a)
    assert gq.free_rank == 4


def test_minimize_is_a_deformation_retract():
    rng = random.Random(4)
    for inst in ALL_INSTANCES:
        for _ in range(20):
            c = sampling.random_complex(inst, rng)
            res = minimize(c)
            assert validate(res.complex).valid
            assert cm_equal(cm_compose(res.project, res.include),
                            identity_chain_map(res.complex))
            ip = cm_compose(res.include, res.project)
            assert res.witness.verify(identity_chain_map(c), ip)
            assert set(res.complex.support) <= set(c.support)


def test_minimize_preserves_rational_homology():
    rng = random.Random(5)
    for _ in range(25):
        c = sampling.random_complex(Q_INSTANCE, rng)
        res = minimize(c)
        term_ranks = {k: o.rank for k, o in c.terms}
        diffs = {k: [[x for x in row] for row in m.mat] for k, m in c.diffs}
        hr = oracles.rational_homology_ranks(term_ranks, diffs)
        # over a field the minimal model has zero differentials, so its term
        # ranks are exactly the homology ranks
        assert res.field_minimal
        for k in set(hr) | {k for k, _ in res.complex.terms}:
            assert hr.get(k, 0) == res.complex.term(k).rank


def test_minimize_preserves_integer_homology():
    rng = random.Random(6)
    for _ in range(25):
        c = sampling.random_complex(Z_INSTANCE, rng)
        res = minimize(c)
        m = res.complex
        for k in set(c.support) | set(m.support):
            def invs(cx, kk):
                # H_kk = ker d_kk / im d_{kk-1}: compute via the oracle
                n = cx.term(kk).rank
                dk = [[int(x) for x in row] for row in cx.diff(kk).mat] if cx.diff(kk) else []
                dprev = [[int(x) for x in row] for row in cx.diff(kk - 1).mat] if cx.diff(kk - 1) else []
                rk_out = oracles.frac_rank(dk) if dk and dk[0] else 0
                free = n - rk_out - (oracles.frac_rank(dprev) if dprev and dprev[0] else 0)
                tor = [d for d in oracles.int_snf_invariants(dprev) if d > 1] if dprev and dprev[0] else []
                return free, sorted(tor)

            assert invs(c, k) == invs(m, k)


def test_quasi_but_not_honest_homotopy_over_dual_numbers():
    inst = DUAL_NUMBERS_INSTANCE
    eps = inst.ent_coerce([0, 1])
    o = free_obj(inst, 1)
    x = complex_of(inst, {0: o, 1: o}, {0: mor(o, o, [[eps]])})
    f = chain_map(x, x, {0: mor(o, o, [[eps]])})
    assert is_null_homotopic(f) is None
    assert is_quasi_homotopic(f, zero_chain_map(x, x)) is not None


def test_duality_on_complexes_is_involutive():
    rng = random.Random(7)
    for _ in range(20):
        c = sampling.random_complex(TATE_INSTANCE, rng)
        s = rng.randint(-2, 2)
        d = dual_complex(c, s)
        assert validate(d).valid
        assert dual_complex(d, s) == c
        assert sorted(-k for k in c.support) == sorted(d.support)


def test_shift_chain_map_commutes_with_composition():
    rng = random.Random(8)
    for _ in range(10):
        a = sampling.random_complex(Q_INSTANCE, rng)
        b = sampling.random_complex(Q_INSTANCE, rng)
        f = sampling.random_chain_map(a, b, rng)
        n = rng.randint(-2, 2)
        sf = shift_chain_map(f, n)
        assert sf.source == shift(a, n) and sf.target == shift(b, n)
        g = sampling.random_chain_map(b, a, rng)
        assert cm_equal(
            shift_chain_map(cm_compose(g, f), n),
            cm_compose(shift_chain_map(g, n), shift_chain_map(f, n)),
        )
