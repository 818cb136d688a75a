"""Seeded random generators for property checks: objects, morphisms, bounded
complexes with d.d = 0 by construction, chain maps, and variety expressions.

All generators take an explicit random.Random so runs are reproducible.
"""
from __future__ import annotations

import random
from typing import Optional

from .linalg import ExactMatrix, ZZ, integer_kernel_basis, kernel_basis
from .addcat import (
    CategoryInstance,
    Mor,
    Obj,
    TATE,
    compose,
    hom_basis,
    mor_add,
    mor_coords,
    mor_from_coords,
    mor_scale,
    tate_obj,
    zero_mor,
)
from .complexes import (
    ChainMap,
    Complex,
    chain_map,
    chain_map_space,
    complex_of,
    cone,
    identity_chain_map,
    one_term_complex,
    zero_chain_map,
)
from .k0 import LaurentClass
from .motive import (
    Affine,
    BlowUp,
    DisjointUnion,
    OpenComplement,
    Point,
    Product,
    Proj,
    SmoothProper,
    Toric,
    Torus,
    VarietyExpr,
    dim,
)


def random_obj(inst: CategoryInstance, rng: random.Random, max_rank: int = 3,
               min_rank: int = 0, twist_range=(-2, 2)) -> Obj:
    r = rng.randint(min_rank, max_rank)
    if inst.kind == TATE:
        return tate_obj([rng.randint(*twist_range) for _ in range(r)])
    return Obj(inst, r)


def random_mor(src: Obj, tgt: Obj, rng: random.Random, span: int = 2) -> Mor:
    acc = zero_mor(src, tgt)
    for e in hom_basis(src, tgt):
        coef = rng.randint(-span, span)
        if coef:
            acc = mor_add(acc, mor_scale(e, coef))
    return acc


def random_complex(inst: CategoryInstance, rng: random.Random, max_rank: int = 3,
                   max_width: int = 4, base_range=(-2, 2), span: int = 2) -> Complex:
    """Random bounded complex with d.d = 0 guaranteed: each differential is a
    small integer combination of a basis of {u : u . d_prev = 0}."""
    width = rng.randint(0, max_width)
    base = rng.randint(*base_range)
    terms = {}
    for k in range(base, base + width):
        o = random_obj(inst, rng, max_rank)
        if not o.is_zero:
            terms[k] = o
    diffs = {}
    prev: Optional[Mor] = None
    for k in sorted(terms):
        src = terms[k]
        tgt = terms.get(k + 1)
        if tgt is None:
            prev = None
            continue
        basis = hom_basis(src, tgt)
        if prev is not None and not prev.is_zero():
            cols = [mor_coords(compose(e, prev)) for e in basis]
            nrows = len(cols[0]) if cols else 0
            m = ExactMatrix.build(
                nrows, len(cols),
                [[cols[c][r] for c in range(len(cols))] for r in range(nrows)],
                inst.domain,
            )
            kb = integer_kernel_basis(m) if inst.domain == ZZ else kernel_basis(m)
            vecs = [[kb.entries[r][c] for r in range(kb.rows)] for c in range(kb.cols)]
        else:
            vecs = [[1 if i == j else 0 for i in range(len(basis))] for j in range(len(basis))]
        acc = zero_mor(src, tgt)
        for v in vecs:
            coef = rng.randint(-span, span)
            if coef:
                acc = mor_add(acc, mor_scale(mor_from_coords(src, tgt, v), coef))
        if acc.is_zero():
            prev = None
        else:
            diffs[k] = acc
            prev = acc
    return complex_of(inst, terms, diffs, check=False)


def random_chain_map(a: Complex, b: Complex, rng: random.Random, span: int = 2) -> ChainMap:
    basis, _ = chain_map_space(a, b)
    acc = zero_chain_map(a, b)
    for f in basis:
        coef = rng.randint(-span, span)
        if coef:
            comps = {}
            for k in set(dict(acc.components)) | set(dict(f.components)):
                comps[k] = mor_add(acc.comp(k), mor_scale(f.comp(k), coef))
            acc = chain_map(a, b, comps, check=False)
    return acc


def contractible_complex(inst: CategoryInstance, rng: random.Random, max_rank: int = 2,
                         degree_range=(-2, 2)) -> Complex:
    """A cone over an identity map: contractible by construction."""
    o = random_obj(inst, rng, max_rank, min_rank=1)
    base = one_term_complex(o, rng.randint(*degree_range))
    c, _, _ = cone(identity_chain_map(base))
    return c


def random_expr(rng: random.Random, depth: int = 3) -> VarietyExpr:
    """Random well-formed variety expression of bounded depth."""
    leaves = ["point", "affine", "proj", "torus", "toric", "smooth_proper"]
    nodes = ["union", "product", "open_complement", "blowup"]
    op = rng.choice(leaves if depth <= 0 else leaves + nodes * 2)
    if op == "point":
        return Point()
    if op == "affine":
        return Affine(rng.randint(0, 3))
    if op == "proj":
        return Proj(rng.randint(0, 3))
    if op == "torus":
        return Torus(rng.randint(1, 3))
    if op == "toric":
        n = rng.randint(0, 3)
        dims = sorted(rng.sample(range(1, n + 1), rng.randint(0, n)))
        fan = [(0, 1)] + [(d, rng.randint(1, 4)) for d in dims]
        return Toric(tuple(fan), n)
    if op == "smooth_proper":
        d = rng.randint(0, 3)
        cls = LaurentClass.from_dict({e: rng.randint(0, 3) for e in range(d + 1)})
        if cls.coefficient(d) == 0:
            cls = cls + LaurentClass.lefschetz(d)
        return SmoothProper(cls, d)
    if op == "union":
        count = rng.randint(1, 3)
        return DisjointUnion(tuple(random_expr(rng, depth - 1) for _ in range(count)))
    if op == "product":
        return Product(random_expr(rng, depth - 1), random_expr(rng, depth - 1))
    if op == "open_complement":
        x = random_expr(rng, depth - 1)
        dx = dim(x)
        if dx == 0:
            return x
        # keep dim(z) < dim(x): the top coefficient of chi stays positive
        z = _random_closed_part(rng, dx - 1, depth - 1)
        return OpenComplement(x, z)
    # blow-up: pick a center of strictly smaller dimension
    x = random_expr(rng, depth - 1)
    dx = dim(x)
    if dx == 0:
        return x
    zd = rng.randint(0, dx - 1)
    z = _random_closed_part(rng, zd, depth - 1, exact=True)
    return BlowUp(x, z, dx - zd)


def _random_closed_part(rng: random.Random, max_dim: int, depth: int, exact: bool = False) -> VarietyExpr:
    d = max_dim if exact else rng.randint(0, max_dim)
    if d == 0:
        return Point()
    choice = rng.choice(["proj", "affine", "torus", "smooth_proper"])
    if choice == "proj":
        return Proj(d)
    if choice == "affine":
        return Affine(d)
    if choice == "torus":
        return Torus(d)
    cls = LaurentClass.from_dict({e: rng.randint(0, 2) for e in range(d + 1)})
    if cls.coefficient(d) == 0:
        cls = cls + LaurentClass.lefschetz(d)
    return SmoothProper(cls, d)
