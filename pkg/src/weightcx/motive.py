"""A variety-expression language whose classes live in Laurent polynomials
in the Lefschetz class L, with the scissor (open/closed), blow-up and
abstract-blow-up-square relations, duality, and weight-window bounds.

Every constructor has a dimension and an exactly-evaluated class chi; the
dual class chi_dual is the involution L^a -> L^{s-a} applied to chi.
"""
from __future__ import annotations

import json
from dataclasses import dataclass

from .k0 import LaurentClass, dual_class


class MalformedExpr(ValueError):
    """Structurally invalid variety expression."""


class NegativeCodim(MalformedExpr):
    """Blow-up center with codimension < 1."""


@dataclass(frozen=True)
class VarietyExpr:
    pass


@dataclass(frozen=True)
class Point(VarietyExpr):
    pass


@dataclass(frozen=True)
class Affine(VarietyExpr):
    n: int

    def __post_init__(self):
        if self.n < 0:
            raise MalformedExpr("affine space needs n >= 0")


@dataclass(frozen=True)
class Proj(VarietyExpr):
    n: int

    def __post_init__(self):
        if self.n < 0:
            raise MalformedExpr("projective space needs n >= 0")


@dataclass(frozen=True)
class Torus(VarietyExpr):
    k: int

    def __post_init__(self):
        if self.k < 1:
            raise MalformedExpr("torus needs k >= 1")


@dataclass(frozen=True)
class Toric(VarietyExpr):
    """Toric variety given by cone counts: fan = ((dim, count), ...) within
    ambient dimension n.  Only counts matter for the orbit decomposition."""

    fan: tuple  # tuple of (cone dimension, count)
    n: int

    def __post_init__(self):
        if self.n < 0:
            raise MalformedExpr("ambient dimension must be >= 0")
        seen = set()
        for d, m in self.fan:
            if not (0 <= d <= self.n):
                raise MalformedExpr(f"cone dimension {d} outside [0, {self.n}]")
            if m < 1:
                raise MalformedExpr("cone count must be >= 1")
            if d in seen:
                raise MalformedExpr(f"duplicate fan entry for dimension {d}")
            seen.add(d)
        # every fan contains exactly one trivial cone (the dense torus orbit)
        if dict(self.fan).get(0) != 1:
            raise MalformedExpr("fan must contain exactly one cone of dimension 0")


@dataclass(frozen=True)
class DisjointUnion(VarietyExpr):
    parts: tuple

    def __post_init__(self):
        if not self.parts:
            raise MalformedExpr("disjoint union needs at least one part")


@dataclass(frozen=True)
class Product(VarietyExpr):
    a: VarietyExpr
    b: VarietyExpr


@dataclass(frozen=True)
class OpenComplement(VarietyExpr):
    """The open part U = X - Z of a closed immersion Z -> X."""

    x: VarietyExpr
    z: VarietyExpr

    def __post_init__(self):
        if dim(self.z) > dim(self.x):
            raise MalformedExpr("closed part has larger dimension than the ambient")


@dataclass(frozen=True)
class BlowUp(VarietyExpr):
    """Blow-up of x along a center z of pure codimension codim."""

    x: VarietyExpr
    z: VarietyExpr
    codim: int

    def __post_init__(self):
        if self.codim < 1:
            raise NegativeCodim("blow-up codimension must be >= 1")
        if dim(self.z) + self.codim != dim(self.x):
            raise MalformedExpr("blow-up center dimension + codim must equal ambient dimension")


@dataclass(frozen=True)
class SmoothProper(VarietyExpr):
    """User-supplied cellular smooth proper piece with a given class."""

    cls: LaurentClass
    d: int

    def __post_init__(self):
        if self.d < 0:
            raise MalformedExpr("dimension must be >= 0")
        for e, c in self.cls.coeffs:
            if not (0 <= e <= self.d):
                raise MalformedExpr("class exponents must lie within [0, dim]")
            if c < 0:
                raise MalformedExpr("class coefficients must be non-negative")


def dim(e: VarietyExpr) -> int:
    if isinstance(e, Point):
        return 0
    if isinstance(e, (Affine, Proj)):
        return e.n
    if isinstance(e, Torus):
        return e.k
    if isinstance(e, Toric):
        return e.n
    if isinstance(e, DisjointUnion):
        return max(dim(p) for p in e.parts)
    if isinstance(e, Product):
        return dim(e.a) + dim(e.b)
    if isinstance(e, (OpenComplement, BlowUp)):
        return dim(e.x)
    if isinstance(e, SmoothProper):
        return e.d
    raise MalformedExpr(f"unknown expression node {type(e).__name__}")


_L = LaurentClass.lefschetz
_ONE = LaurentClass.one()


def _proj_class(n: int) -> LaurentClass:
    return LaurentClass.from_dict({i: 1 for i in range(n + 1)})


def chi(e: VarietyExpr) -> LaurentClass:
    """Class of the expression in Z[L, L^-1] by the cut-and-paste rules."""
    if isinstance(e, Point):
        return _ONE
    if isinstance(e, Affine):
        return _L(e.n)
    if isinstance(e, Proj):
        return _proj_class(e.n)
    if isinstance(e, Torus):
        return (_L(1) - _ONE).power(e.k)
    if isinstance(e, Toric):
        acc = LaurentClass.zero()
        for d, m in e.fan:
            acc = acc + (_L(1) - _ONE).power(e.n - d).scale(m)
        return acc
    if isinstance(e, DisjointUnion):
        acc = LaurentClass.zero()
        for p in e.parts:
            acc = acc + chi(p)
        return acc
    if isinstance(e, Product):
        return chi(e.a) * chi(e.b)
    if isinstance(e, OpenComplement):
        return chi(e.x) - chi(e.z)
    if isinstance(e, BlowUp):
        # exceptional divisor is a Proj(codim-1)-bundle over the center
        return chi(e.x) - chi(e.z) + chi(e.z) * _proj_class(e.codim - 1)
    if isinstance(e, SmoothProper):
        return e.cls
    raise MalformedExpr(f"unknown expression node {type(e).__name__}")


def chi_dual(e: VarietyExpr, s: int = 0) -> LaurentClass:
    """Dual class: the involution L^a -> L^{s-a} applied to chi(e)."""
    return dual_class(chi(e), s)


def _is_complete_fan(t: Toric) -> bool:
    # Euler-sphere relation on cone counts: a necessary condition for the fan
    # to cover all of R^n, used as the completeness marker for count-only fans
    counts = dict(t.fan)
    if t.n == 0:
        return counts.get(0, 0) >= 1
    alt = sum((-1) ** (d - 1) * m for d, m in t.fan if d >= 1)
    return counts.get(t.n, 0) >= 1 and alt == 1 + (-1) ** (t.n - 1)


def weight_window(e: VarietyExpr):
    """Guaranteed degree windows (forward, dual) for the weight complex of e.

    Generic bound: ([0, dim], [-dim, 0]).  Nodes known to be smooth and
    proper (points, projective spaces, complete toric data, user-declared
    smooth proper pieces) sharpen to ([0, 0], [0, 0])."""
    d = dim(e)
    heart = (
        isinstance(e, (Point, Proj, SmoothProper))
        or (isinstance(e, Toric) and _is_complete_fan(e))
    )
    if heart:
        return (0, 0), (0, 0)
    return (0, d), (-d, 0)


def check_scissor(x: VarietyExpr, z: VarietyExpr) -> bool:
    """chi(x) = chi(x - z) + chi(z), the open/closed decomposition."""
    u = OpenComplement(x, z)
    return chi(x) == chi(u) + chi(z)


NISNEVICH = "nisnevich"
PROPER_CDH = "proper_cdh"


@dataclass(frozen=True)
class SquareSpec:
    """A distinguished square x <- a, b <- y with chi(x) + chi(y) =
    chi(a) + chi(b)."""

    kind: str
    x: VarietyExpr
    a: VarietyExpr
    b: VarietyExpr
    y: VarietyExpr

    def __post_init__(self):
        if self.kind not in (NISNEVICH, PROPER_CDH):
            raise MalformedExpr(f"unknown square kind {self.kind!r}")


def check_square(sq: SquareSpec, s: int = 0) -> bool:
    """Additivity on the square for both chi and its dual."""
    forward = chi(sq.x) + chi(sq.y) == chi(sq.a) + chi(sq.b)
    dual = chi_dual(sq.x, s) + chi_dual(sq.y, s) == chi_dual(sq.a, s) + chi_dual(sq.b, s)
    return forward and dual


def blowup_square(x: VarietyExpr, z: VarietyExpr, codim: int) -> SquareSpec:
    """The proper cdh square of a blow-up: the exceptional divisor is the
    Proj(codim-1)-bundle over the center."""
    bl = BlowUp(x, z, codim)
    exceptional = Product(z, Proj(codim - 1))
    return SquareSpec(PROPER_CDH, x, z, bl, exceptional)


# --------------------------------------------------------------------------
# JSON serialization (bit-exact round-trip)
# --------------------------------------------------------------------------

def expr_to_data(e: VarietyExpr) -> dict:
    if isinstance(e, Point):
        return {"op": "point"}
    if isinstance(e, Affine):
        return {"op": "affine", "n": e.n}
    if isinstance(e, Proj):
        return {"op": "proj", "n": e.n}
    if isinstance(e, Torus):
        return {"op": "torus", "k": e.k}
    if isinstance(e, Toric):
        return {
            "op": "toric",
            "fan": [{"dim": d, "count": m} for d, m in e.fan],
            "n": e.n,
        }
    if isinstance(e, DisjointUnion):
        return {"op": "union", "parts": [expr_to_data(p) for p in e.parts]}
    if isinstance(e, Product):
        return {"op": "product", "parts": [expr_to_data(e.a), expr_to_data(e.b)]}
    if isinstance(e, OpenComplement):
        return {"op": "open_complement", "x": expr_to_data(e.x), "z": expr_to_data(e.z)}
    if isinstance(e, BlowUp):
        return {"op": "blowup", "x": expr_to_data(e.x), "z": expr_to_data(e.z), "codim": e.codim}
    if isinstance(e, SmoothProper):
        return {"op": "smooth_proper", "class": [[a, c] for a, c in e.cls.coeffs], "dim": e.d}
    raise MalformedExpr(f"unknown expression node {type(e).__name__}")


def expr_from_data(data) -> VarietyExpr:
    if not isinstance(data, dict) or "op" not in data:
        raise MalformedExpr("expression node must be an object with an 'op' field")
    op = data["op"]
    try:
        if op == "point":
            return Point()
        if op == "affine":
            return Affine(int(data["n"]))
        if op == "proj":
            return Proj(int(data["n"]))
        if op == "torus":
            return Torus(int(data["k"]))
        if op == "toric":
            fan = tuple((int(c["dim"]), int(c["count"])) for c in data["fan"])
            return Toric(fan, int(data["n"]))
        if op == "union":
            return DisjointUnion(tuple(expr_from_data(p) for p in data["parts"]))
        if op == "product":
            parts = [expr_from_data(p) for p in data["parts"]]
            if len(parts) < 2:
                raise MalformedExpr("product needs at least two parts")
            acc = parts[0]
            for p in parts[1:]:
                acc = Product(acc, p)
            return acc
        if op == "open_complement":
            return OpenComplement(expr_from_data(data["x"]), expr_from_data(data["z"]))
        if op == "blowup":
            return BlowUp(
                expr_from_data(data["x"]), expr_from_data(data["z"]), int(data["codim"])
            )
        if op == "smooth_proper":
            cls = LaurentClass.from_dict({int(a): int(c) for a, c in data["class"]})
            return SmoothProper(cls, int(data["dim"]))
    except KeyError as exc:
        raise MalformedExpr(f"node {op!r} is missing field {exc.args[0]!r}") from exc
    raise MalformedExpr(f"unknown op {op!r}")


def expr_to_json(e: VarietyExpr) -> str:
    return json.dumps(expr_to_data(e), sort_keys=True)


def expr_from_json(text: str) -> VarietyExpr:
    return expr_from_data(json.loads(text))


def square_to_data(sq: SquareSpec) -> dict:
    return {
        "kind": sq.kind,
        "x": expr_to_data(sq.x),
        "a": expr_to_data(sq.a),
        "b": expr_to_data(sq.b),
        "y": expr_to_data(sq.y),
    }


def square_from_data(data) -> SquareSpec:
    if not isinstance(data, dict):
        raise MalformedExpr("square must be an object")
    try:
        return SquareSpec(
            data["kind"],
            expr_from_data(data["x"]),
            expr_from_data(data["a"]),
            expr_from_data(data["b"]),
            expr_from_data(data["y"]),
        )
    except KeyError as exc:
        raise MalformedExpr(f"square is missing field {exc.args[0]!r}") from exc
