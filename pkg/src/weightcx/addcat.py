"""Additive-category instances: free modules over Q or Z, the semisimple
Tate-twist heart, and free modules over a finite-dimensional Q-algebra.

Objects are finite lists of generators (a rank, plus one integer twist per
generator in the Tate case).  Morphisms are dense matrices whose entries live
in the instance's coefficient ring; in the Tate heart entries between
generators with different twists are forced to zero.
"""
from __future__ import annotations

from functools import lru_cache
from dataclasses import dataclass
from typing import Optional, Sequence

from .linalg import (
    QQ,
    ZZ,
    DomainError,
    ExactMatrix,
    ShapeError,
    rational,
    solve,
)


class InstanceMismatch(ValueError):
    """Objects or morphisms from different category instances were mixed."""


FREE_Q = "q"
FREE_Z = "z"
TATE = "tate"
ALGEBRA = "algebra"


_INVERSE_CACHE: dict = {}


@dataclass(frozen=True)
class Algebra:
    """Finite-dimensional unital associative Q-algebra by structure constants.

    table[i][j] holds the coordinates of e_i * e_j in the basis (e_0..e_{d-1});
    unit holds the coordinates of 1.  Associativity and the unit laws are
    checked at construction.
    """

    dim: int
    table: tuple  # table[i][j] -> tuple of dim rationals
    unit: tuple

    def __post_init__(self):
        d = self.dim
        if d <= 0:
            raise ValueError("algebra dimension must be positive")
        if len(self.table) != d or any(len(row) != d for row in self.table):
            raise ValueError("structure-constant table has wrong shape")
        if len(self.unit) != d:
            raise ValueError("unit vector has wrong length")
        basis = [tuple(rational(1 if i == j else 0) for j in range(d)) for i in range(d)]
        for i in range(d):
            for j in range(d):
                for k in range(d):
                    left = self.mul(self.mul(basis[i], basis[j]), basis[k])
                    right = self.mul(basis[i], self.mul(basis[j], basis[k]))
                    if left != right:
                        raise ValueError(f"structure constants not associative at ({i},{j},{k})")
        for i in range(d):
            if self.mul(self.unit, basis[i]) != basis[i] or self.mul(basis[i], self.unit) != basis[i]:
                raise ValueError("unit law fails")

    def mul(self, x, y):
        d = self.dim
        out = [rational(0)] * d
        for i in range(d):
            xi = x[i]
            if xi == 0:
                continue
            row = self.table[i]
            for j in range(d):
                yj = y[j]
                if yj == 0:
                    continue
                coeff = xi * yj
                cell = row[j]
                for k in range(d):
                    if cell[k] != 0:
                        out[k] = out[k] + coeff * cell[k]
        return tuple(out)

    def inverse(self, x):
        """Two-sided inverse of x, or None when x is not a unit (cached)."""
        key = tuple(x)
        cache = _INVERSE_CACHE.setdefault(id(self), {})
        if key in cache:
            return cache[key]
        out = self._inverse_uncached(key)
        cache[key] = out
        return out

    def _inverse_uncached(self, x):
        d = self.dim
        basis = [tuple(rational(1 if i == j else 0) for j in range(d)) for i in range(d)]
        # columns of left-multiplication-by-x in the chosen basis
        lm = ExactMatrix.from_rows(
            [[self.mul(x, basis[j])[i] for j in range(d)] for i in range(d)], d, QQ
        )
        rhs = ExactMatrix.from_rows([[u] for u in self.unit], 1, QQ)
        sol = solve(lm, rhs)
        if sol is None:
            return None
        inv = tuple(sol.entries[i][0] for i in range(d))
        if self.mul(inv, x) != tuple(self.unit) or self.mul(x, inv) != tuple(self.unit):
            return None
        return inv


def dual_numbers() -> Algebra:
    """Q[eps]/(eps^2) with basis (1, eps)."""
    one = (rational(1), rational(0))
    eps = (rational(0), rational(1))
    zero = (rational(0), rational(0))
    table = ((one, eps), (eps, zero))
    return Algebra(2, table, one)


@dataclass(frozen=True)
class CategoryInstance:
    kind: str
    algebra: Optional[Algebra] = None

    def __post_init__(self):
        if self.kind not in (FREE_Q, FREE_Z, TATE, ALGEBRA):
            raise ValueError(f"unknown instance kind {self.kind!r}")
        if (self.kind == ALGEBRA) != (self.algebra is not None):
            raise ValueError("algebra structure required exactly for the algebra kind")
        if self.kind == FREE_Z:
            zero, one = 0, 1
        elif self.kind == ALGEBRA:
            zero = tuple(rational(0) for _ in range(self.algebra.dim))
            one = tuple(self.algebra.unit)
        else:
            zero, one = rational(0), rational(1)
        object.__setattr__(self, "_ent_zero", zero)
        object.__setattr__(self, "_ent_one", one)

    # --- scalar-entry protocol -------------------------------------------
    @property
    def domain(self) -> str:
        return ZZ if self.kind == FREE_Z else QQ

    @property
    def coord_len(self) -> int:
        return self.algebra.dim if self.kind == ALGEBRA else 1

    def ent_zero(self):
        return self._ent_zero

    def ent_one(self):
        return self._ent_one

    def ent_coerce(self, e):
        if self.kind == FREE_Z:
            q = rational(e)
            if q.denominator != 1:
                raise DomainError(f"non-integer entry {e!r}")
            return int(q.numerator)
        if self.kind == ALGEBRA:
            seq = tuple(rational(x) for x in e)
            if len(seq) != self.algebra.dim:
                raise ShapeError("algebra entry has wrong coordinate length")
            return seq
        return rational(e)

    def ent_add(self, a, b):
        if self.kind == ALGEBRA:
            return tuple(x + y for x, y in zip(a, b))
        return a + b

    def ent_neg(self, a):
        if self.kind == ALGEBRA:
            return tuple(-x for x in a)
        return -a

    def ent_mul(self, a, b):
        if self.kind == ALGEBRA:
            return self.algebra.mul(a, b)
        return a * b

    def ent_is_zero(self, a) -> bool:
        if self.kind == ALGEBRA:
            return all(x == 0 for x in a)
        return a == 0

    def ent_inv(self, a):
        """Two-sided inverse when a is a unit, else None."""
        if self.kind == ALGEBRA:
            return self.algebra.inverse(a)
        if self.ent_is_zero(a):
            return None
        if self.kind == FREE_Z:
            return a if a in (1, -1) else None
        return 1 / a

    def ent_coords(self, a):
        if self.kind == ALGEBRA:
            return list(a)
        return [a]

    def ent_from_coords(self, coords):
        if self.kind == ALGEBRA:
            return tuple(rational(x) for x in coords)
        if self.kind == FREE_Z:
            return int(coords[0])
        return rational(coords[0])


Q_INSTANCE = CategoryInstance(FREE_Q)
Z_INSTANCE = CategoryInstance(FREE_Z)
TATE_INSTANCE = CategoryInstance(TATE)


def algebra_instance(alg: Algebra) -> CategoryInstance:
    return CategoryInstance(ALGEBRA, alg)


DUAL_NUMBERS_INSTANCE = algebra_instance(dual_numbers())


@dataclass(frozen=True)
class Obj:
    instance: CategoryInstance
    rank: int
    twists: Optional[tuple] = None  # Tate heart only, one twist per generator

    def __post_init__(self):
        if self.rank < 0:
            raise ValueError("negative rank")
        if self.instance.kind == TATE:
            if self.twists is None or len(self.twists) != self.rank:
                raise ValueError("Tate object needs one twist per generator")
        elif self.twists is not None:
            raise ValueError("twists only make sense in the Tate heart")

    @property
    def is_zero(self) -> bool:
        return self.rank == 0

    def twist(self, i: int) -> Optional[int]:
        return self.twists[i] if self.twists is not None else None


def free_obj(instance: CategoryInstance, rank: int) -> Obj:
    if instance.kind == TATE:
        raise DomainError("use tate_obj for the Tate heart")
    return Obj(instance, rank)


def tate_obj(twists: Sequence[int]) -> Obj:
    tw = tuple(int(t) for t in twists)
    return Obj(TATE_INSTANCE, len(tw), tw)


def zero_obj(instance: CategoryInstance) -> Obj:
    return Obj(instance, 0, () if instance.kind == TATE else None)


@dataclass(frozen=True)
class Mor:
    """Morphism a -> b as a target.rank x source.rank matrix of ring entries."""

    source: Obj
    target: Obj
    mat: tuple  # tuple of row tuples

    def __post_init__(self):
        if self.source.instance != self.target.instance:
            raise InstanceMismatch("morphism between different instances")
        if len(self.mat) != self.target.rank or any(
            len(row) != self.source.rank for row in self.mat
        ):
            raise ShapeError("matrix shape does not match source/target ranks")
        inst = self.source.instance
        if inst.kind == TATE:
            for r in range(self.target.rank):
                for c in range(self.source.rank):
                    if self.target.twist(r) != self.source.twist(c) and not inst.ent_is_zero(
                        self.mat[r][c]
                    ):
                        raise DomainError("nonzero entry between distinct Tate twists")

    @property
    def instance(self) -> CategoryInstance:
        return self.source.instance

    def entry(self, r, c):
        return self.mat[r][c]

    def is_zero(self) -> bool:
        inst = self.instance
        return all(inst.ent_is_zero(e) for row in self.mat for e in row)


def mor(source: Obj, target: Obj, rows) -> Mor:
    inst = source.instance
    mat = tuple(
        tuple(inst.ent_coerce(rows[r][c]) for c in range(source.rank))
        for r in range(target.rank)
    )
    return Mor(source, target, mat)


def zero_mor(source: Obj, target: Obj) -> Mor:
    z = source.instance.ent_zero()
    return Mor(source, target, tuple((z,) * source.rank for _ in range(target.rank)))


def identity_mor(x: Obj) -> Mor:
    inst = x.instance
    one, zero = inst.ent_one(), inst.ent_zero()
    return Mor(x, x, tuple(tuple(one if i == j else zero for j in range(x.rank)) for i in range(x.rank)))


def mor_add(a: Mor, b: Mor) -> Mor:
    if (a.source, a.target) != (b.source, b.target):
        raise ShapeError("sum of morphisms with different endpoints")
    inst = a.instance
    return Mor(
        a.source,
        a.target,
        tuple(tuple(inst.ent_add(x, y) for x, y in zip(ra, rb)) for ra, rb in zip(a.mat, b.mat)),
    )


def mor_neg(a: Mor) -> Mor:
    inst = a.instance
    return Mor(a.source, a.target, tuple(tuple(inst.ent_neg(x) for x in row) for row in a.mat))


def mor_sub(a: Mor, b: Mor) -> Mor:
    return mor_add(a, mor_neg(b))


def mor_scale(a: Mor, factor) -> Mor:
    inst = a.instance
    if inst.kind == ALGEBRA:
        f = tuple(rational(factor) * u for u in inst.algebra.unit)
    else:
        f = inst.ent_coerce(factor)
    return Mor(a.source, a.target, tuple(tuple(inst.ent_mul(f, x) for x in row) for row in a.mat))


def compose(g: Mor, f: Mor) -> Mor:
    """g after f (matrix product g.mat * f.mat in the coefficient ring)."""
    if f.instance != g.instance:
        raise InstanceMismatch("composition across instances")
    if f.target != g.source:
        raise ShapeError("composition endpoint mismatch")
    inst = f.instance
    fm, gm = f.mat, g.mat
    inner = f.target.rank
    ncols = f.source.rank
    if inst.kind != ALGEBRA:
        zero = inst.ent_zero()
        rows = tuple(
            tuple(
                sum((grow[k] * fm[k][c] for k in range(inner) if grow[k] and fm[k][c]), zero)
                for c in range(ncols)
            )
            for grow in gm
        )
        return Mor(f.source, g.target, rows)
    alg = inst.algebra
    dim = alg.dim
    table = alg.table
    zero = inst.ent_zero()
    rows = []
    for grow in gm:
        row = []
        for c in range(ncols):
            acc = list(zero)
            for k in range(inner):
                gk = grow[k]
                fk = fm[k][c]
                for i in range(dim):
                    gi = gk[i]
                    if not gi:
                        continue
                    for j in range(dim):
                        fj = fk[j]
                        if not fj:
                            continue
                        cell = table[i][j]
                        coef = gi * fj
                        for t in range(dim):
                            if cell[t]:
                                acc[t] = acc[t] + coef * cell[t]
            row.append(tuple(acc))
        rows.append(tuple(row))
    return Mor(f.source, g.target, tuple(rows))


def direct_sum(objs: Sequence[Obj]) -> Obj:
    if not objs:
        raise ValueError("direct_sum of an empty family needs an instance; use zero_obj")
    inst = objs[0].instance
    for x in objs[1:]:
        if x.instance != inst:
            raise InstanceMismatch("direct sum across instances")
    rank = sum(x.rank for x in objs)
    if inst.kind == TATE:
        twists = tuple(t for x in objs for t in x.twists)
        return Obj(inst, rank, twists)
    return Obj(inst, rank)


def direct_sum_mor(mors: Sequence[Mor]) -> Mor:
    """Block-diagonal sum of morphisms."""
    src = direct_sum([m.source for m in mors])
    tgt = direct_sum([m.target for m in mors])
    inst = mors[0].instance
    z = inst.ent_zero()
    rows = []
    r_off = 0
    c_offs = []
    off = 0
    for m in mors:
        c_offs.append(off)
        off += m.source.rank
    total_cols = off
    for m, c_off in zip(mors, c_offs):
        for r in range(m.target.rank):
            row = [z] * total_cols
            for c in range(m.source.rank):
                row[c_off + c] = m.mat[r][c]
            rows.append(tuple(row))
        r_off += m.target.rank
    return Mor(src, tgt, tuple(rows))


def block_mor(src_parts: Sequence[Obj], tgt_parts: Sequence[Obj], blocks) -> Mor:
    """Assemble a morphism between direct sums from a {(i_tgt, j_src): Mor} map."""
    src = direct_sum(list(src_parts))
    tgt = direct_sum(list(tgt_parts))
    inst = src.instance
    z = inst.ent_zero()
    mat = [[z] * src.rank for _ in range(tgt.rank)]
    tgt_offs = []
    off = 0
    for p in tgt_parts:
        tgt_offs.append(off)
        off += p.rank
    src_offs = []
    off = 0
    for p in src_parts:
        src_offs.append(off)
        off += p.rank
    for (i, j), blk in blocks.items():
        if blk.source != src_parts[j] or blk.target != tgt_parts[i]:
            raise ShapeError("block endpoints do not match the summands")
        for r in range(blk.target.rank):
            for c in range(blk.source.rank):
                mat[tgt_offs[i] + r][src_offs[j] + c] = blk.mat[r][c]
    return Mor(src, tgt, tuple(tuple(row) for row in mat))


@lru_cache(maxsize=8192)
def _coord_positions(a: Obj, b: Obj):
    """Deterministic list of (row, col, coord_index) carrying a basis of Hom(a,b)."""
    inst = a.instance
    out = []
    for r in range(b.rank):
        for c in range(a.rank):
            if inst.kind == TATE and b.twist(r) != a.twist(c):
                continue
            for ci in range(inst.coord_len):
                out.append((r, c, ci))
    return tuple(out)


def hom_dim(a: Obj, b: Obj) -> int:
    """Dimension of Hom(a,b) over Q (rank over Z for the integer instance)."""
    if a.instance != b.instance:
        raise InstanceMismatch("hom across instances")
    return len(_coord_positions(a, b))


@lru_cache(maxsize=8192)
def hom_basis(a: Obj, b: Obj):
    """Deterministic basis of the hom-space, one Mor per coordinate position."""
    inst = a.instance
    out = []
    for (r, c, ci) in _coord_positions(a, b):
        m = [[inst.ent_zero()] * a.rank for _ in range(b.rank)]
        if inst.kind == ALGEBRA:
            coords = [rational(0)] * inst.coord_len
            coords[ci] = rational(1)
            m[r][c] = inst.ent_from_coords(coords)
        else:
            m[r][c] = inst.ent_one()
        out.append(Mor(a, b, tuple(tuple(row) for row in m)))
    return tuple(out)


def mor_coords(m: Mor):
    """Coordinates of m in the hom_basis order (rationals, ints over Z)."""
    inst = m.instance
    out = []
    for (r, c, ci) in _coord_positions(m.source, m.target):
        out.append(inst.ent_coords(m.mat[r][c])[ci])
    return out


def mor_from_coords(a: Obj, b: Obj, coords) -> Mor:
    inst = a.instance
    positions = _coord_positions(a, b)
    if len(coords) != len(positions):
        raise ShapeError("coordinate vector has wrong length")
    cells = {}
    for (r, c, ci), val in zip(positions, coords):
        cells.setdefault((r, c), [rational(0)] * inst.coord_len)[ci] = rational(val)
    mat = [[inst.ent_zero()] * a.rank for _ in range(b.rank)]
    for (r, c), cell in cells.items():
        mat[r][c] = inst.ent_from_coords(cell)
    return Mor(a, b, tuple(tuple(row) for row in mat))


def dualize(x: Obj, s: int) -> Obj:
    """Tate duality on objects: twist a -> s - a."""
    if x.instance.kind != TATE:
        raise DomainError("dualize is defined on the Tate heart only")
    return tate_obj([s - a for a in x.twists])


def dualize_mor(m: Mor, s: int) -> Mor:
    """Contravariant duality on morphisms: transpose between dual objects."""
    if m.instance.kind != TATE:
        raise DomainError("dualize is defined on the Tate heart only")
    src = dualize(m.target, s)
    tgt = dualize(m.source, s)
    mat = tuple(tuple(m.mat[r][c] for r in range(m.target.rank)) for c in range(m.source.rank))
    return Mor(src, tgt, mat)
