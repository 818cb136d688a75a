"""Bounded complexes over an additive-category instance.

Covers chain maps, homotopy and quasi-homotopy decision with explicit
witnesses, hom-groups in the homotopy and quasi-homotopy categories, cones,
shifts, Gaussian minimization and Tate-twist duality on complexes.

Sign conventions (fixed once, tested bit-exactly):
  * shift:  d_{c[1]} = -d_c
  * cone(f: A -> B):  cone^k = A^{k+1} (+) B^k  with
        d = [[-d_A^{k+1}, 0], [f^{k+1}, d_B^k]]
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .linalg import (
    QQ,
    ZZ,
    DomainError,
    ExactMatrix,
    ShapeError,
    integer_kernel_basis,
    kernel_basis,
    rank as matrix_rank,
    rational,
    solve,
    unimodular_inverse,
)
from .addcat import (
    CategoryInstance,
    InstanceMismatch,
    Mor,
    Obj,
    TATE,
    FREE_Z,
    compose,
    direct_sum,
    dualize,
    dualize_mor,
    hom_basis,
    hom_dim,
    identity_mor,
    mor_add,
    mor_coords,
    mor_from_coords,
    mor_neg,
    mor_scale,
    mor_sub,
    zero_mor,
    zero_obj,
)


# --------------------------------------------------------------------------
# complexes and chain maps
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Complex:
    instance: CategoryInstance
    terms: tuple  # sorted tuple of (degree, Obj), nonzero ranks only
    diffs: tuple  # sorted tuple of (degree, Mor), nonzero morphisms only

    def term(self, k: int) -> Obj:
        for d, o in self.terms:
            if d == k:
                return o
        return zero_obj(self.instance)

    def diff(self, k: int) -> Mor:
        for d, m in self.diffs:
            if d == k:
                return m
        return zero_mor(self.term(k), self.term(k + 1))

    @property
    def support(self) -> tuple:
        return tuple(d for d, _ in self.terms)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def min_degree(self) -> Optional[int]:
        return self.terms[0][0] if self.terms else None

    def max_degree(self) -> Optional[int]:
        return self.terms[-1][0] if self.terms else None

    def terms_dict(self) -> dict:
        return dict(self.terms)

    def diffs_dict(self) -> dict:
        return dict(self.diffs)


def complex_of(instance: CategoryInstance, terms: dict, diffs: dict, check: bool = True) -> Complex:
    """Normalized complex from degree->Obj and degree->Mor maps.

    Zero terms and zero differentials are dropped so equal complexes have
    equal data.  With check=True the d.d = 0 law and all shapes are enforced.
    """
    tclean = {}
    for k, o in terms.items():
        if o.instance != instance:
            raise InstanceMismatch("term from a different instance")
        if not o.is_zero:
            tclean[int(k)] = o
    dclean = {}
    for k, m in diffs.items():
        k = int(k)
        src = tclean.get(k, zero_obj(instance))
        tgt = tclean.get(k + 1, zero_obj(instance))
        if m.source != src or m.target != tgt:
            raise ShapeError(f"differential at degree {k} has wrong endpoints")
        if not m.is_zero():
            dclean[k] = m
    c = Complex(
        instance,
        tuple(sorted(tclean.items())),
        tuple(sorted(dclean.items())),
    )
    if check:
        rep = validate(c)
        if not rep.valid:
            raise ValueError(rep.message)
    return c


def zero_complex(instance: CategoryInstance) -> Complex:
    return Complex(instance, (), ())


def one_term_complex(obj: Obj, degree: int = 0) -> Complex:
    return complex_of(obj.instance, {degree: obj}, {}, check=False)


@dataclass(frozen=True)
class ValidationReport:
    valid: bool
    support: tuple
    message: str = ""
    degree: Optional[int] = None

    def supported_in(self, allowed) -> bool:
        return all(k in allowed for k in self.support)


def validate(c: Complex) -> ValidationReport:
    """Check d.d = 0 and shape coherence; report the support set."""
    for k, m in c.diffs:
        if m.source != c.term(k) or m.target != c.term(k + 1):
            return ValidationReport(False, c.support, f"differential endpoints wrong at degree {k}", k)
    for k, _ in c.diffs:
        nxt = c.diff(k + 1)
        sq = compose(nxt, c.diff(k))
        if not sq.is_zero():
            return ValidationReport(False, c.support, f"d.d != 0 at degree {k}", k)
    return ValidationReport(True, c.support)


@dataclass(frozen=True)
class ChainMap:
    source: Complex
    target: Complex
    components: tuple  # sorted tuple of (degree, Mor), nonzero only

    def comp(self, k: int) -> Mor:
        for d, m in self.components:
            if d == k:
                return m
        return zero_mor(self.source.term(k), self.target.term(k))

    @property
    def instance(self) -> CategoryInstance:
        return self.source.instance

    def is_zero(self) -> bool:
        return not self.components

    def degrees(self) -> tuple:
        return tuple(sorted(set(self.source.support) | set(self.target.support)))


def chain_map(source: Complex, target: Complex, components: dict, check: bool = True) -> ChainMap:
    if source.instance != target.instance:
        raise InstanceMismatch("chain map between different instances")
    clean = {}
    for k, m in components.items():
        k = int(k)
        if m.source != source.term(k) or m.target != target.term(k):
            raise ShapeError(f"component at degree {k} has wrong endpoints")
        if not m.is_zero():
            clean[k] = m
    f = ChainMap(source, target, tuple(sorted(clean.items())))
    if check:
        for k in f.degrees():
            lhs = compose(target.diff(k), f.comp(k))
            rhs = compose(f.comp(k + 1), source.diff(k))
            if mor_sub(lhs, rhs).is_zero() is False:
                raise ValueError(f"chain-map law fails at degree {k}")
    return f


def identity_chain_map(c: Complex) -> ChainMap:
    return chain_map(c, c, {k: identity_mor(o) for k, o in c.terms}, check=False)


def zero_chain_map(source: Complex, target: Complex) -> ChainMap:
    return ChainMap(source, target, ())


def cm_compose(g: ChainMap, f: ChainMap) -> ChainMap:
    if g.source != f.target:
        raise ShapeError("chain-map composition endpoint mismatch")
    comps = {}
    for k in set(dict(f.components)) | set(dict(g.components)):
        comps[k] = compose(g.comp(k), f.comp(k))
    return chain_map(f.source, g.target, comps, check=False)


def cm_add(f: ChainMap, g: ChainMap) -> ChainMap:
    if (f.source, f.target) != (g.source, g.target):
        raise ShapeError("chain-map sum endpoint mismatch")
    comps = {}
    for k in set(dict(f.components)) | set(dict(g.components)):
        comps[k] = mor_add(f.comp(k), g.comp(k))
    return chain_map(f.source, f.target, comps, check=False)


def cm_neg(f: ChainMap) -> ChainMap:
    return chain_map(f.source, f.target, {k: mor_neg(m) for k, m in f.components}, check=False)


def cm_sub(f: ChainMap, g: ChainMap) -> ChainMap:
    return cm_add(f, cm_neg(g))


def cm_scale(f: ChainMap, factor) -> ChainMap:
    return chain_map(
        f.source, f.target, {k: mor_scale(m, factor) for k, m in f.components}, check=False
    )


def cm_equal(f: ChainMap, g: ChainMap) -> bool:
    return (f.source, f.target) == (g.source, g.target) and cm_sub(f, g).is_zero()


# --------------------------------------------------------------------------
# shift, cone, duality, truncation pieces
# --------------------------------------------------------------------------

def shift(c: Complex, n: int) -> Complex:
    """Translation: term^k(c[n]) = c^{k+n}, differential scaled by (-1)^n."""
    terms = {k - n: o for k, o in c.terms}
    sign = -1 if n % 2 else 1
    diffs = {k - n: (m if sign == 1 else mor_neg(m)) for k, m in c.diffs}
    return complex_of(c.instance, terms, diffs, check=False)


def reindex(c: Complex, n: int) -> Complex:
    """Degree relabeling term^k -> term^{k+n} with differentials unchanged
    (no sign).  Unlike shift, this is not a triangulated translation; it is
    the raw data identification used by degreewise identities."""
    terms = {k - n: o for k, o in c.terms}
    diffs = {k - n: m for k, m in c.diffs}
    return complex_of(c.instance, terms, diffs, check=False)


def shift_chain_map(f: ChainMap, n: int) -> ChainMap:
    comps = {k - n: m for k, m in f.components}
    return chain_map(shift(f.source, n), shift(f.target, n), comps, check=False)


def cone(f: ChainMap):
    """Mapping cone with its canonical inclusion and projection.

    Returns (c, inclusion: target -> c, projection: c -> source[1]); the
    composite projection.inclusion is zero.
    """
    a, b = f.source, f.target
    inst = f.instance
    degrees = sorted(set(k - 1 for k in a.support) | set(b.support))
    terms = {}
    for k in degrees:
        terms[k] = direct_sum([a.term(k + 1), b.term(k)])
    diffs = {}
    for k in degrees:
        if k + 1 not in terms:
            continue
        src_parts = [a.term(k + 1), b.term(k)]
        tgt_parts = [a.term(k + 2), b.term(k + 1)]
        from .addcat import block_mor

        diffs[k] = block_mor(
            src_parts,
            tgt_parts,
            {
                (0, 0): mor_neg(a.diff(k + 1)),
                (1, 0): f.comp(k + 1),
                (1, 1): b.diff(k),
            },
        )
    c = complex_of(inst, terms, diffs, check=False)
    incl_comps = {}
    proj_comps = {}
    a1 = shift(a, 1)
    for k in degrees:
        ak1, bk = a.term(k + 1), b.term(k)
        ck = c.term(k)
        inst_zero = zero_mor(bk, ck)
        mat = [list(row) for row in inst_zero.mat]
        for i in range(bk.rank):
            mat[ak1.rank + i][i] = inst.ent_one()
        incl_comps[k] = Mor(bk, ck, tuple(tuple(r) for r in mat))
        pzero = zero_mor(ck, ak1)
        pmat = [list(row) for row in pzero.mat]
        for i in range(ak1.rank):
            pmat[i][i] = inst.ent_one()
        proj_comps[k] = Mor(ck, ak1, tuple(tuple(r) for r in pmat))
    inclusion = chain_map(b, c, incl_comps, check=False)
    projection = chain_map(c, a1, proj_comps, check=False)
    return c, inclusion, projection


def dual_complex(c: Complex, s: int) -> Complex:
    """Tate duality on complexes: term^k = D(term^{-k}), transposed differentials."""
    if c.instance.kind != TATE:
        raise DomainError("dual_complex is defined over the Tate heart only")
    terms = {-k: dualize(o, s) for k, o in c.terms}
    diffs = {}
    for k, o in terms.items():
        m = c.diff(-k - 1)
        if not m.is_zero():
            diffs[k] = dualize_mor(m, s)
    return complex_of(c.instance, terms, diffs, check=False)


def dual_chain_map(f: ChainMap, s: int) -> ChainMap:
    """Contravariant duality: a chain map dual(target) -> dual(source)."""
    src = dual_complex(f.target, s)
    tgt = dual_complex(f.source, s)
    comps = {-k: dualize_mor(m, s) for k, m in f.components}
    return chain_map(src, tgt, comps, check=False)


def brutal_low(c: Complex, degmin: int):
    """Subcomplex of degrees >= degmin with its inclusion (closed under d)."""
    terms = {k: o for k, o in c.terms if k >= degmin}
    diffs = {k: m for k, m in c.diffs if k >= degmin}
    sub = complex_of(c.instance, terms, diffs, check=False)
    incl = chain_map(sub, c, {k: identity_mor(o) for k, o in sub.terms}, check=False)
    return sub, incl


def brutal_high(c: Complex, degmax: int):
    """Quotient supported in degrees <= degmax with its projection."""
    terms = {k: o for k, o in c.terms if k <= degmax}
    diffs = {k: m for k, m in c.diffs if k + 1 <= degmax}
    quot = complex_of(c.instance, terms, diffs, check=False)
    proj = chain_map(c, quot, {k: identity_mor(o) for k, o in quot.terms}, check=False)
    return quot, proj


def complex_direct_sum(parts: Sequence[Complex]):
    """Direct sum with the canonical inclusions and projections."""
    inst = parts[0].instance
    degrees = sorted(set(k for p in parts for k in p.support))
    from .addcat import block_mor

    terms = {k: direct_sum([p.term(k) for p in parts]) for k in degrees}
    diffs = {}
    for k in degrees:
        blocks = {}
        for i, p in enumerate(parts):
            m = p.diff(k)
            if not m.is_zero():
                blocks[(i, i)] = m
        if blocks:
            diffs[k] = block_mor(
                [p.term(k) for p in parts], [p.term(k + 1) for p in parts], blocks
            )
    total = complex_of(inst, terms, diffs, check=False)
    incls, projs = [], []
    for i, p in enumerate(parts):
        icomps, pcomps = {}, {}
        for k in p.support:
            tot = total.term(k)
            off = sum(q.term(k).rank for q in parts[:i])
            zin = zero_mor(p.term(k), tot)
            mat = [list(row) for row in zin.mat]
            for j in range(p.term(k).rank):
                mat[off + j][j] = inst.ent_one()
            icomps[k] = Mor(p.term(k), tot, tuple(tuple(r) for r in mat))
            zpr = zero_mor(tot, p.term(k))
            pm = [list(row) for row in zpr.mat]
            for j in range(p.term(k).rank):
                pm[j][off + j] = inst.ent_one()
            pcomps[k] = Mor(tot, p.term(k), tuple(tuple(r) for r in pm))
        incls.append(chain_map(p, total, icomps, check=False))
        projs.append(chain_map(total, p, pcomps, check=False))
    return total, incls, projs


# --------------------------------------------------------------------------
# generic exact solver for morphism-valued linear systems
# --------------------------------------------------------------------------

def solve_mor_system(domain: str, unknowns, equations):
    """Solve a linear system whose unknowns and equations are morphisms.

    unknowns:  list of (key, src Obj, tgt Obj); the unknown morphisms.
    equations: list of (src Obj, tgt Obj, rhs Mor, terms) where terms is a
               list of (key, fn) and fn maps a candidate value of the keyed
               unknown to its linear contribution in Hom(src, tgt).
    Returns {key: Mor} or None when inconsistent.
    """
    unknowns = [(key, s, t) for (key, s, t) in unknowns if hom_dim(s, t) > 0]
    col_layout = []
    columns = []
    for key, s, t in unknowns:
        for e in hom_basis(s, t):
            col = []
            for (es, et, rhs, terms) in equations:
                parts = [fn(e) for tkey, fn in terms if tkey == key]
                if not parts:
                    contrib = zero_mor(es, et)
                else:
                    contrib = parts[0]
                    for p in parts[1:]:
                        contrib = mor_add(contrib, p)
                col.extend(mor_coords(contrib))
            columns.append(col)
            col_layout.append(key)
    nrows = sum(hom_dim(es, et) for (es, et, _, _) in equations)
    bvec = []
    for (_, _, rhs, _) in equations:
        bvec.extend(mor_coords(rhs))
    a = ExactMatrix.build(nrows, len(columns), [[columns[c][r] for c in range(len(columns))] for r in range(nrows)], domain)
    b = ExactMatrix.build(nrows, 1, [[v] for v in bvec], domain)
    x = solve(a, b)
    if x is None:
        return None
    out = {}
    idx = 0
    for key, s, t in unknowns:
        n = hom_dim(s, t)
        coords = [x.entries[idx + j][0] for j in range(n)]
        out[key] = mor_from_coords(s, t, coords)
        idx += n
    for key, s, t in unknowns:
        out.setdefault(key, zero_mor(s, t))
    return out


# --------------------------------------------------------------------------
# homotopy and quasi-homotopy
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class HomotopyWitness:
    """Certificate for f - g = s^{k+1} d_A^k + d_B^{k-1} t^k (t = s when kind
    is 'homotopy')."""

    kind: str  # "homotopy" | "quasi"
    s: tuple  # sorted tuple of (degree, Mor A^k -> B^{k-1})
    t: tuple

    def s_at(self, k, a: Complex, b: Complex) -> Mor:
        for d, m in self.s:
            if d == k:
                return m
        return zero_mor(a.term(k), b.term(k - 1))

    def t_at(self, k, a: Complex, b: Complex) -> Mor:
        for d, m in self.t:
            if d == k:
                return m
        return zero_mor(a.term(k), b.term(k - 1))

    def verify(self, f: ChainMap, g: ChainMap) -> bool:
        a, b = f.source, f.target
        degrees = set(a.support) | set(b.support)
        for k in degrees:
            lhs = mor_sub(f.comp(k), g.comp(k))
            rhs = mor_add(
                compose(self.s_at(k + 1, a, b), a.diff(k)),
                compose(b.diff(k - 1), self.t_at(k, a, b)),
            )
            if not mor_sub(lhs, rhs).is_zero():
                return False
        return True


def _witness_from_solution(kind, sol, s_keys, t_keys):
    s = tuple(sorted((k, sol[("s", k)]) for k in s_keys if not sol[("s", k)].is_zero()))
    if kind == "homotopy":
        return HomotopyWitness("homotopy", s, s)
    t = tuple(sorted((k, sol[("t", k)]) for k in t_keys if not sol[("t", k)].is_zero()))
    return HomotopyWitness("quasi", s, t)


def _homotopy_solve(f: ChainMap, g: ChainMap, quasi: bool):
    if (f.source, f.target) != (g.source, g.target):
        raise ShapeError("homotopy question needs equal endpoints")
    a, b = f.source, f.target
    inst = f.instance
    degrees = sorted(set(a.support) | set(b.support))
    if not degrees:
        return HomotopyWitness("quasi" if quasi else "homotopy", (), ())
    lo, hi = degrees[0], degrees[-1]
    s_keys = [k for k in range(lo, hi + 2) if hom_dim(a.term(k), b.term(k - 1)) > 0]
    unknowns = [(("s", k), a.term(k), b.term(k - 1)) for k in s_keys]
    t_keys = s_keys if quasi else []
    if quasi:
        unknowns += [(("t", k), a.term(k), b.term(k - 1)) for k in s_keys]
    equations = []
    for k in range(lo, hi + 1):
        if hom_dim(a.term(k), b.term(k)) == 0:
            continue
        rhs = mor_sub(f.comp(k), g.comp(k))
        terms = [(("s", k + 1), (lambda m, kk=k: compose(m, a.diff(kk))))]
        second_key = ("t", k) if quasi else ("s", k)
        terms.append((second_key, (lambda m, kk=k: compose(b.diff(kk - 1), m))))
        equations.append((a.term(k), b.term(k), rhs, terms))
    sol = solve_mor_system(inst.domain, unknowns, equations)
    if sol is None:
        return None
    return _witness_from_solution("quasi" if quasi else "homotopy", sol, s_keys, t_keys)


def is_homotopic(f: ChainMap, g: ChainMap) -> Optional[HomotopyWitness]:
    """Witness with t = s when f and g are homotopic, else None."""
    return _homotopy_solve(f, g, quasi=False)


def is_quasi_homotopic(f: ChainMap, g: ChainMap) -> Optional[HomotopyWitness]:
    """Witness with independent s, t when f and g are quasi-homotopic."""
    return _homotopy_solve(f, g, quasi=True)


def is_null_homotopic(f: ChainMap) -> Optional[HomotopyWitness]:
    return is_homotopic(f, zero_chain_map(f.source, f.target))


# --------------------------------------------------------------------------
# hom-groups in K and QK
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class GroupPresentation:
    """Hom-group modulo (quasi-)homotopies: free part, torsion, generators."""

    free_rank: int
    invariant_factors: tuple  # each > 1, dividing successively
    generators: tuple  # ChainMaps: free generators first, then torsion

    @property
    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.invariant_factors


def _ambient_layout(a: Complex, b: Complex):
    degrees = sorted(set(a.support) | set(b.support))
    return [(k, a.term(k), b.term(k)) for k in degrees if hom_dim(a.term(k), b.term(k)) > 0]


def _family_vec(layout, comps: dict):
    out = []
    for k, s, t in layout:
        m = comps.get(k)
        out.extend(mor_coords(m) if m is not None else [0] * hom_dim(s, t))
    return out


def _chain_condition_matrix(a: Complex, b: Complex, layout, domain):
    """Rows: coordinates of d_b u^k - u^{k+1} d_a over all relevant degrees."""
    degrees = sorted(set(a.support) | set(b.support))
    eq_slots = [
        (k, a.term(k), b.term(k + 1))
        for k in degrees
        if hom_dim(a.term(k), b.term(k + 1)) > 0
    ]
    cols = []
    for k, s, t in layout:
        for e in hom_basis(s, t):
            vec = []
            for (j, es, et) in eq_slots:
                contrib = zero_mor(es, et)
                if j == k:
                    contrib = mor_add(contrib, compose(b.diff(j), e))
                if j + 1 == k:
                    contrib = mor_sub(contrib, compose(e, a.diff(j)))
                vec.extend(mor_coords(contrib))
            cols.append(vec)
    nrows = sum(hom_dim(es, et) for (_, es, et) in eq_slots)
    return ExactMatrix.build(
        nrows, len(cols), [[cols[c][r] for c in range(len(cols))] for r in range(nrows)], domain
    )


def _vec_to_chain_map(a, b, layout, vec) -> ChainMap:
    comps = {}
    idx = 0
    for k, s, t in layout:
        n = hom_dim(s, t)
        comps[k] = mor_from_coords(s, t, vec[idx : idx + n])
        idx += n
    return chain_map(a, b, comps, check=False)


def chain_map_space(a: Complex, b: Complex):
    """Deterministic basis of the space (lattice over Z) of chain maps a -> b."""
    if a.instance != b.instance:
        raise InstanceMismatch("hom across instances")
    domain = a.instance.domain
    layout = _ambient_layout(a, b)
    if not layout:
        return [], layout
    m = _chain_condition_matrix(a, b, layout, domain)
    basis = integer_kernel_basis(m) if domain == ZZ else kernel_basis(m)
    maps = []
    for c in range(basis.cols):
        vec = [basis.entries[r][c] for r in range(basis.rows)]
        maps.append(_vec_to_chain_map(a, b, layout, vec))
    return maps, layout


def _homotopy_generators(a: Complex, b: Complex, layout, quasi: bool):
    """Ambient-space vectors of all s d + d t families, one per basis element."""
    degrees = sorted(set(a.support) | set(b.support))
    if not degrees:
        return []
    lo, hi = degrees[0], degrees[-1]
    gens = []
    for k in range(lo, hi + 2):
        src, tgt = a.term(k), b.term(k - 1)
        for e in hom_basis(src, tgt):
            pre = compose(e, a.diff(k - 1))  # contributes in degree k-1
            post = compose(b.diff(k - 1), e)  # contributes in degree k
            if quasi:
                gens.append(_family_vec(layout, {k - 1: pre}))
                gens.append(_family_vec(layout, {k: post}))
            else:
                gens.append(_family_vec(layout, {k - 1: pre, k: post}))
    return gens


def _hom_group(a: Complex, b: Complex, quasi: bool) -> GroupPresentation:
    domain = a.instance.domain
    cmb, layout = chain_map_space(a, b)
    if not cmb:
        return GroupPresentation(0, (), ())
    n_amb = sum(hom_dim(s, t) for (_, s, t) in layout)
    cvecs = [_family_vec(layout, dict(f.components)) for f in cmb]
    hvecs = _homotopy_generators(a, b, layout, quasi)
    if quasi and hvecs:
        # only families that happen to be chain maps lie in the subgroup
        m_chain = _chain_condition_matrix(a, b, layout, domain)
        hmat = ExactMatrix.build(
            n_amb, len(hvecs), [[hvecs[c][r] for c in range(len(hvecs))] for r in range(n_amb)], domain
        )
        comp = m_chain * hmat
        coeffs = integer_kernel_basis(comp) if domain == ZZ else kernel_basis(comp)
        restricted = []
        for c in range(coeffs.cols):
            vec = [
                sum(coeffs.entries[j][c] * hvecs[j][r] for j in range(len(hvecs)))
                for r in range(n_amb)
            ]
            restricted.append(vec)
        hvecs = restricted
    cmat = ExactMatrix.build(
        n_amb, len(cvecs), [[cvecs[c][r] for c in range(len(cvecs))] for r in range(n_amb)], domain
    )
    if domain == ZZ:
        if hvecs:
            hmat = ExactMatrix.build(
                n_amb, len(hvecs), [[hvecs[c][r] for c in range(len(hvecs))] for r in range(n_amb)], domain
            )
            rel = solve(cmat, hmat)  # coordinates of subgroup gens in the lattice basis
            if rel is None:
                raise AssertionError("homotopy subgroup escaped the chain-map lattice")
        else:
            rel = ExactMatrix.zero(len(cvecs), 0, ZZ)
        u, d, v = (None, None, None)
        from .linalg import smith_normal_form

        u, d, v = smith_normal_form(rel)
        r = len(cvecs)
        nmin = min(rel.rows, rel.cols)
        diag = [d.entries[i][i] for i in range(nmin)]
        uinv = unimodular_inverse(u)
        free_idx = [i for i in range(r) if i >= nmin or diag[i] == 0]
        tor_idx = [i for i in range(nmin) if diag[i] > 1]
        factors = tuple(diag[i] for i in tor_idx)
        gens = []
        for i in free_idx + tor_idx:
            coeffs = [uinv.entries[rr][i] for rr in range(r)]
            vec = [sum(coeffs[j] * cvecs[j][t] for j in range(r)) for t in range(n_amb)]
            gens.append(_vec_to_chain_map(a, b, layout, vec))
        return GroupPresentation(len(free_idx), factors, tuple(gens))
    # field case: greedy completion of the homotopy subspace by chain-map basis vectors
    width = len(hvecs)
    base_rank = 0
    if width:
        hm = ExactMatrix.build(
            n_amb, width, [[hvecs[c][r] for c in range(width)] for r in range(n_amb)], domain
        )
        base_rank = matrix_rank(hm)
    kept = []
    cur_cols = list(hvecs)
    cur_rank = base_rank
    for i, vec in enumerate(cvecs):
        cand = cur_cols + [vec]
        cm = ExactMatrix.build(
            n_amb, len(cand), [[cand[c][r] for c in range(len(cand))] for r in range(n_amb)], domain
        )
        rk = matrix_rank(cm)
        if rk > cur_rank:
            kept.append(cmb[i])
            cur_cols = cand
            cur_rank = rk
    return GroupPresentation(len(kept), (), tuple(kept))


def hom_group_K(a: Complex, b: Complex) -> GroupPresentation:
    """Hom in the homotopy category: chain maps modulo homotopy."""
    return _hom_group(a, b, quasi=False)


def hom_group_QK(a: Complex, b: Complex) -> GroupPresentation:
    """Hom in the quasi-homotopy category: chain maps modulo quasi-homotopy."""
    return _hom_group(a, b, quasi=True)


# --------------------------------------------------------------------------
# minimization (Gaussian reduction of invertible differential entries)
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class MinimizeResult:
    complex: Complex
    project: ChainMap  # original -> minimal
    include: ChainMap  # minimal -> original
    witness: HomotopyWitness  # id - include.project = s d + d s
    field_minimal: bool


def _find_pivot(cur: Complex):
    inst = cur.instance
    for k, m in cur.diffs:
        for r in range(m.target.rank):
            for c in range(m.source.rank):
                e = m.mat[r][c]
                if inst.ent_is_zero(e):
                    continue
                inv = inst.ent_inv(e)
                if inv is not None:
                    return k, r, c, inv
    return None


def _delete_gen(obj: Obj, idx: int) -> Obj:
    if obj.instance.kind == TATE:
        tw = obj.twists[:idx] + obj.twists[idx + 1 :]
        return Obj(obj.instance, obj.rank - 1, tw)
    return Obj(obj.instance, obj.rank - 1)


def minimize(c: Complex) -> MinimizeResult:
    """Cancel invertible differential entries until none remain.

    Deterministic pivot order: lowest degree, then row-major, first entry
    invertible in the instance's coefficient ring (units only over Z).
    Returns the reduced complex with an exact deformation retraction.
    """
    inst = c.instance
    cur = c
    pmap = identity_chain_map(c)
    imap = identity_chain_map(c)
    hs: Dict[int, Mor] = {}
    while True:
        piv = _find_pivot(cur)
        if piv is None:
            break
        k, r, cc, a_inv = piv
        d_k = cur.diff(k)
        src, tgt = d_k.source, d_k.target
        new_src = _delete_gen(src, cc)
        new_tgt = _delete_gen(tgt, r)
        keep_src = [j for j in range(src.rank) if j != cc]
        keep_tgt = [i for i in range(tgt.rank) if i != r]
        # reduced middle differential D - c' a^{-1} b
        new_mid = [
            [
                inst.ent_add(
                    d_k.mat[i][j],
                    inst.ent_neg(
                        inst.ent_mul(inst.ent_mul(d_k.mat[i][cc], a_inv), d_k.mat[r][j])
                    ),
                )
                for j in keep_src
            ]
            for i in keep_tgt
        ]
        terms = cur.terms_dict()
        diffs = cur.diffs_dict()
        terms[k] = new_src
        terms[k + 1] = new_tgt
        new_diffs = {}
        for kk, m in diffs.items():
            if kk == k:
                continue
            if kk == k - 1:
                new_diffs[kk] = Mor(
                    m.source, new_src, tuple(m.mat[j] for j in keep_src)
                )
            elif kk == k + 1:
                new_diffs[kk] = Mor(
                    new_tgt, m.target, tuple(tuple(row[i] for i in keep_tgt) for row in m.mat)
                )
            else:
                new_diffs[kk] = m
        mid = Mor(new_src, new_tgt, tuple(tuple(row) for row in new_mid))
        if not mid.is_zero():
            new_diffs[k] = mid
        new_cur = complex_of(inst, terms, new_diffs, check=False)
        # step equivalence data on the current complex
        one, zero = inst.ent_one(), inst.ent_zero()
        pstep_k = Mor(
            src, new_src, tuple(tuple(one if j == jj else zero for jj in range(src.rank)) for j in keep_src)
        )
        pstep_k1_rows = []
        for i in keep_tgt:
            row = [zero] * tgt.rank
            row[i] = one
            row[r] = inst.ent_neg(inst.ent_mul(d_k.mat[i][cc], a_inv))
            pstep_k1_rows.append(tuple(row))
        pstep_k1 = Mor(tgt, new_tgt, tuple(pstep_k1_rows))
        istep_k_rows = []
        for j in range(src.rank):
            if j == cc:
                row = [
                    inst.ent_neg(inst.ent_mul(a_inv, d_k.mat[r][jj])) for jj in keep_src
                ]
            else:
                row = [one if jj == j else zero for jj in keep_src]
            istep_k_rows.append(tuple(row))
        istep_k = Mor(new_src, src, tuple(istep_k_rows))
        istep_k1_rows = []
        for i in range(tgt.rank):
            if i == r:
                row = [zero] * new_tgt.rank
            else:
                row = [one if keep_tgt[jj] == i else zero for jj in range(new_tgt.rank)]
            istep_k1_rows.append(tuple(row))
        istep_k1 = Mor(new_tgt, tgt, tuple(istep_k1_rows))
        sstep = [[zero] * tgt.rank for _ in range(src.rank)]
        sstep[cc][r] = a_inv
        s_step = Mor(tgt, src, tuple(tuple(row) for row in sstep))  # cur^{k+1} -> cur^k
        # accumulate: h += I_old . s_step . P_old at degree k+1
        contrib = compose(imap.comp(k), compose(s_step, pmap.comp(k + 1)))
        if (k + 1) in hs:
            hs[k + 1] = mor_add(hs[k + 1], contrib)
        else:
            hs[k + 1] = contrib
        pcomps = dict(pmap.components)
        pcomps[k] = compose(pstep_k, pmap.comp(k))
        pcomps[k + 1] = compose(pstep_k1, pmap.comp(k + 1))
        pmap = chain_map(c, new_cur, pcomps, check=False)
        icomps = dict(imap.components)
        icomps[k] = compose(imap.comp(k), istep_k)
        icomps[k + 1] = compose(imap.comp(k + 1), istep_k1)
        imap = chain_map(new_cur, c, icomps, check=False)
        cur = new_cur
    s = tuple(sorted((k, m) for k, m in hs.items() if not m.is_zero()))
    witness = HomotopyWitness("homotopy", s, s)
    if inst.kind == FREE_Z:
        field_minimal = all(m.is_zero() for _, m in cur.diffs)
    else:
        field_minimal = True
    return MinimizeResult(cur, pmap, imap, witness, field_minimal)
