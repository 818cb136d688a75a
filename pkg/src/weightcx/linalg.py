"""Exact dense linear algebra over arbitrary-precision rationals and integers.

Everything here is pure and deterministic: inputs are never mutated, pivots
are always the first usable entry in scan order, and rationals are kept in
lowest terms with positive denominator (mpq/Fraction guarantee this).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

try:
    from gmpy2 import mpq as _ratio
except ImportError:  # pragma: no cover - safety net, gmpy2 is a declared dep
    from fractions import Fraction as _ratio

QQ = "Q"
ZZ = "Z"

_RATIO_TYPE = type(_ratio(0))


class DomainError(TypeError):
    """Operation applied over the wrong coefficient domain."""


class ShapeError(ValueError):
    """Matrix dimensions incompatible with the requested operation."""


def rational(value, den=1):
    """Exact rational from int, string ('3/2') or another rational."""
    if den == 1:
        return _ratio(value)
    return _ratio(value) / _ratio(den)


def _coerce(value, domain):
    if type(value) is _RATIO_TYPE and domain == QQ:
        return value
    if domain == ZZ:
        if isinstance(value, bool) or not isinstance(value, int):
            q = _ratio(value)
            if q.denominator != 1:
                raise DomainError(f"non-integer entry {value!r} in Z matrix")
            return int(q.numerator)
        return value
    return _ratio(value)


@dataclass(frozen=True)
class ExactMatrix:
    rows: int
    cols: int
    entries: tuple  # tuple of row tuples
    domain: str

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ShapeError("negative dimensions")
        if len(self.entries) != self.rows:
            raise ShapeError("row count mismatch")
        for row in self.entries:
            if len(row) != self.cols:
                raise ShapeError("column count mismatch")

    @staticmethod
    def build(rows, cols, data, domain=QQ):
        if len(data) < rows or any(len(row) < cols for row in data):
            raise ShapeError(f"data does not fill a {rows}x{cols} matrix")
        ents = tuple(
            tuple(_coerce(data[r][c], domain) for c in range(cols))
            for r in range(rows)
        )
        return ExactMatrix(rows, cols, ents, domain)

    @staticmethod
    def from_rows(data, cols=None, domain=QQ):
        rows = len(data)
        if cols is None:
            cols = len(data[0]) if rows else 0
        return ExactMatrix.build(rows, cols, data, domain)

    @staticmethod
    def zero(rows, cols, domain=QQ):
        z = 0 if domain == ZZ else _ratio(0)
        return ExactMatrix(rows, cols, tuple((z,) * cols for _ in range(rows)), domain)

    @staticmethod
    def identity(n, domain=QQ):
        one = 1 if domain == ZZ else _ratio(1)
        zero = 0 if domain == ZZ else _ratio(0)
        return ExactMatrix(
            n, n, tuple(tuple(one if i == j else zero for j in range(n)) for i in range(n)), domain
        )

    def __getitem__(self, rc):
        r, c = rc
        return self.entries[r][c]

    def tolists(self):
        return [list(row) for row in self.entries]

    def is_zero(self):
        return all(e == 0 for row in self.entries for e in row)

    def transpose(self):
        return ExactMatrix(
            self.cols,
            self.rows,
            tuple(tuple(self.entries[r][c] for r in range(self.rows)) for c in range(self.cols)),
            self.domain,
        )

    def __add__(self, other):
        self._check_same_shape(other)
        return ExactMatrix(
            self.rows,
            self.cols,
            tuple(
                tuple(a + b for a, b in zip(ra, rb))
                for ra, rb in zip(self.entries, other.entries)
            ),
            self.domain,
        )

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return ExactMatrix(
            self.rows,
            self.cols,
            tuple(tuple(-e for e in row) for row in self.entries),
            self.domain,
        )

    def __mul__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        if self.domain != other.domain:
            raise DomainError("mixed-domain product")
        if self.cols != other.rows:
            raise ShapeError(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        ot = other.transpose()
        return ExactMatrix(
            self.rows,
            other.cols,
            tuple(
                tuple(sum(a * b for a, b in zip(row, col)) for col in ot.entries)
                for row in self.entries
            ),
            self.domain,
        )

    def scale(self, factor):
        f = _coerce(factor, self.domain)
        return ExactMatrix(
            self.rows,
            self.cols,
            tuple(tuple(f * e for e in row) for row in self.entries),
            self.domain,
        )

    def hstack(self, other):
        if self.rows != other.rows or self.domain != other.domain:
            raise ShapeError("hstack mismatch")
        return ExactMatrix(
            self.rows,
            self.cols + other.cols,
            tuple(ra + rb for ra, rb in zip(self.entries, other.entries)),
            self.domain,
        )

    def columns(self, indices):
        return ExactMatrix(
            self.rows,
            len(indices),
            tuple(tuple(row[i] for i in indices) for row in self.entries),
            self.domain,
        )

    def _check_same_shape(self, other):
        if self.domain != other.domain:
            raise DomainError("mixed-domain sum")
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ShapeError("shape mismatch")


def _require(domain_ok, msg):
    if not domain_ok:
        raise DomainError(msg)


def _rref_rows(a, nrows, ncols, t=None):
    """In-place reduction of row lists; returns the rank.  When t is given the
    same row operations are applied to it (so t accumulates the transform)."""
    pr = 0
    for pc in range(ncols):
        sel = None
        for r in range(pr, nrows):
            if a[r][pc] != 0:
                sel = r
                break
        if sel is None:
            continue
        if sel != pr:
            a[pr], a[sel] = a[sel], a[pr]
            if t is not None:
                t[pr], t[sel] = t[sel], t[pr]
        inv = 1 / a[pr][pc]
        if inv != 1:
            a[pr] = [e * inv for e in a[pr]]
            if t is not None:
                t[pr] = [e * inv for e in t[pr]]
        for r in range(nrows):
            if r != pr and a[r][pc] != 0:
                f = a[r][pc]
                piv = a[pr]
                a[r] = [e - f * p for e, p in zip(a[r], piv)]
                if t is not None:
                    t[r] = [e - f * p for e, p in zip(t[r], t[pr])]
        pr += 1
        if pr == nrows:
            break
    return pr


def rref(m: ExactMatrix):
    """Reduced row-echelon form over the rationals.

    Returns (reduced, rank, transform) with transform * m == reduced and
    transform invertible.  Pivot choice: first nonzero entry in column order.
    """
    _require(m.domain == QQ, "rref requires a rational matrix")
    a = m.tolists()
    t = ExactMatrix.identity(m.rows, QQ).tolists()
    pr = _rref_rows(a, m.rows, m.cols, t)
    reduced = ExactMatrix(m.rows, m.cols, tuple(tuple(row) for row in a), QQ)
    transform = ExactMatrix(m.rows, m.rows, tuple(tuple(row) for row in t), QQ)
    return reduced, pr, transform


def rank(m: ExactMatrix) -> int:
    if m.domain != QQ:
        m = ExactMatrix.build(m.rows, m.cols, m.tolists(), QQ)
    a = m.tolists()
    return _rref_rows(a, m.rows, m.cols)


def pivot_columns(m: ExactMatrix):
    _require(m.domain == QQ, "pivot_columns requires a rational matrix")
    a = m.tolists()
    rk = _rref_rows(a, m.rows, m.cols)
    reduced = ExactMatrix(m.rows, m.cols, tuple(tuple(row) for row in a), QQ)
    pivots = []
    for r in range(rk):
        for c in range(m.cols):
            if reduced.entries[r][c] != 0:
                pivots.append(c)
                break
    return reduced, pivots


def kernel_basis(m: ExactMatrix) -> ExactMatrix:
    """Columns form a basis of the rational nullspace of m."""
    _require(m.domain == QQ, "kernel_basis requires a rational matrix")
    reduced, pivots = pivot_columns(m)
    free = [c for c in range(m.cols) if c not in pivots]
    cols = []
    for fc in free:
        vec = [_ratio(0)] * m.cols
        vec[fc] = _ratio(1)
        for r, pc in enumerate(pivots):
            vec[pc] = -reduced.entries[r][fc]
        cols.append(vec)
    return ExactMatrix(
        m.cols,
        len(cols),
        tuple(tuple(col[r] for col in cols) for r in range(m.cols)),
        QQ,
    )


def solve(a: ExactMatrix, b: ExactMatrix) -> Optional[ExactMatrix]:
    """One solution x of a*x = b, or None when the system is inconsistent.

    Over the rationals this is plain elimination; over the integers
    solvability is decided through the Smith normal form.
    """
    if a.domain != b.domain:
        raise DomainError("mixed-domain solve")
    if a.rows != b.rows:
        raise ShapeError("solve: row mismatch")
    if a.domain == QQ:
        # reduce the augmented matrix [a | b]; a pivot in the b-block means
        # the system is inconsistent
        aug = [list(ra) + list(rb) for ra, rb in zip(a.entries, b.entries)]
        _rref_rows(aug, a.rows, a.cols + b.cols)
        pivots = []
        for r in range(a.rows):
            lead = None
            for cc in range(a.cols + b.cols):
                if aug[r][cc] != 0:
                    lead = cc
                    break
            if lead is None:
                continue
            if lead >= a.cols:
                return None
            pivots.append((r, lead))
        x = [[_ratio(0)] * b.cols for _ in range(a.cols)]
        for r, pc in pivots:
            for j in range(b.cols):
                x[pc][j] = aug[r][a.cols + j]
        return ExactMatrix.from_rows(x, b.cols, QQ) if a.cols else ExactMatrix.zero(0, b.cols, QQ)
    u, d, v = smith_normal_form(a)
    c = u * b
    n = min(a.rows, a.cols)
    y = [[0] * b.cols for _ in range(a.cols)]
    for r in range(a.rows):
        dr = d.entries[r][r] if r < n else 0
        for j in range(b.cols):
            if dr == 0:
                if c.entries[r][j] != 0:
                    return None
            else:
                q, rem = divmod(c.entries[r][j], dr)
                if rem != 0:
                    return None
                y[r][j] = q
    ym = ExactMatrix.from_rows(y, b.cols, ZZ) if a.cols else ExactMatrix.zero(0, b.cols, ZZ)
    return v * ym


def smith_normal_form(m: ExactMatrix):
    """Smith normal form of an integer matrix.

    Returns (u, d, v) with u*m*v = d, u and v unimodular, d diagonal with
    non-negative entries d1 | d2 | ...
    """
    _require(m.domain == ZZ, "smith_normal_form requires an integer matrix")
    a = m.tolists()
    rows, cols = m.rows, m.cols
    u = ExactMatrix.identity(rows, ZZ).tolists()
    v = ExactMatrix.identity(cols, ZZ).tolists()

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, f):  # row dst += f * row src
        a[dst] = [x + f * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x + f * y for x, y in zip(u[dst], u[src])]

    def add_col(dst, src, f):
        for row in a:
            row[dst] += f * row[src]
        for row in v:
            row[dst] += f * row[src]

    def negate_row(i):
        a[i] = [-x for x in a[i]]
        u[i] = [-x for x in u[i]]

    n = min(rows, cols)
    for t in range(n):
        # locate a nonzero entry of minimal magnitude in the trailing block
        while True:
            best = None
            for r in range(t, rows):
                for c in range(t, cols):
                    e = a[r][c]
                    if e != 0 and (best is None or abs(e) < abs(a[best[0]][best[1]])):
                        best = (r, c)
            if best is None:
                break
            r0, c0 = best
            if r0 != t:
                swap_rows(t, r0)
            if c0 != t:
                swap_cols(t, c0)
            if a[t][t] < 0:
                negate_row(t)
            p = a[t][t]
            dirty = False
            for r in range(t + 1, rows):
                if a[r][t] != 0:
                    add_row(r, t, -(a[r][t] // p))
                    if a[r][t] != 0:
                        dirty = True
            for c in range(t + 1, cols):
                if a[t][c] != 0:
                    add_col(c, t, -(a[t][c] // p))
                    if a[t][c] != 0:
                        dirty = True
            if dirty:
                continue
            # pivot now clean; force divisibility of the remaining block
            offender = None
            for r in range(t + 1, rows):
                for c in range(t + 1, cols):
                    if a[r][c] % p != 0:
                        offender = r
                        break
                if offender is not None:
                    break
            if offender is None:
                break
            add_row(t, offender, 1)
    diag = [[a[r][c] if r == c else 0 for c in range(cols)] for r in range(rows)]
    d = ExactMatrix.from_rows(diag, cols, ZZ) if rows else ExactMatrix.zero(0, cols, ZZ)
    um = ExactMatrix.from_rows(u, rows, ZZ) if rows else ExactMatrix.identity(0, ZZ)
    vm = ExactMatrix.from_rows(v, cols, ZZ) if cols else ExactMatrix.identity(0, ZZ)
    return um, d, vm


def integer_kernel_basis(m: ExactMatrix) -> ExactMatrix:
    """Basis (columns) of the integer nullspace lattice of m.

    The basis columns come from the unimodular v of the Smith form, so they
    span the saturated kernel lattice ker(m) ∩ Z^cols.
    """
    _require(m.domain == ZZ, "integer kernel requires an integer matrix")
    _, d, v = smith_normal_form(m)
    n = min(m.rows, m.cols)
    free = [c for c in range(m.cols) if c >= n or d.entries[c][c] == 0]
    return v.columns(free)


def unimodular_inverse(m: ExactMatrix) -> ExactMatrix:
    """Inverse of a unimodular integer matrix (still integer)."""
    _require(m.domain == ZZ, "unimodular_inverse requires an integer matrix")
    if m.rows != m.cols:
        raise ShapeError("inverse of a non-square matrix")
    qm = ExactMatrix.build(m.rows, m.cols, m.entries, QQ)
    x = solve(qm, ExactMatrix.identity(m.rows, QQ))
    if x is None:
        raise ShapeError("matrix is singular")
    data = []
    for row in x.entries:
        out = []
        for e in row:
            if e.denominator != 1:
                raise DomainError("matrix is not unimodular")
            out.append(int(e.numerator))
        data.append(out)
    return ExactMatrix.from_rows(data, m.cols, ZZ)
