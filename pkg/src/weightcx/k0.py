"""Grothendieck-group classes of heart objects and Euler characteristics.

For free-module instances the class of an object is its rank (an integer).
For the Tate heart it is a Laurent polynomial in the Lefschetz class L with
integer coefficients: the object {L^{a_1},...,L^{a_r}} has class sum L^{a_i}.
"""
from __future__ import annotations

from dataclasses import dataclass

from .linalg import DomainError
from .addcat import Obj, TATE
from .complexes import Complex


@dataclass(frozen=True)
class LaurentClass:
    """Integer Laurent polynomial in L; no zero coefficients are stored and
    terms are kept sorted by exponent, so equal classes have equal data."""

    coeffs: tuple  # sorted tuple of (exponent, nonzero int coefficient)

    @staticmethod
    def from_dict(d: dict) -> "LaurentClass":
        return LaurentClass(tuple(sorted((int(e), int(c)) for e, c in d.items() if int(c) != 0)))

    @staticmethod
    def zero() -> "LaurentClass":
        return LaurentClass(())

    @staticmethod
    def one() -> "LaurentClass":
        return LaurentClass(((0, 1),))

    @staticmethod
    def lefschetz(exp: int = 1, coeff: int = 1) -> "LaurentClass":
        return LaurentClass.from_dict({exp: coeff})

    def as_dict(self) -> dict:
        return dict(self.coeffs)

    def coefficient(self, exp: int) -> int:
        return dict(self.coeffs).get(exp, 0)

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def support(self) -> tuple:
        return tuple(e for e, _ in self.coeffs)

    def __add__(self, other: "LaurentClass") -> "LaurentClass":
        out = dict(self.coeffs)
        for e, c in other.coeffs:
            out[e] = out.get(e, 0) + c
        return LaurentClass.from_dict(out)

    def __neg__(self) -> "LaurentClass":
        return LaurentClass(tuple((e, -c) for e, c in self.coeffs))

    def __sub__(self, other: "LaurentClass") -> "LaurentClass":
        return self + (-other)

    def __mul__(self, other: "LaurentClass") -> "LaurentClass":
        out: dict = {}
        for e1, c1 in self.coeffs:
            for e2, c2 in other.coeffs:
                out[e1 + e2] = out.get(e1 + e2, 0) + c1 * c2
        return LaurentClass.from_dict(out)

    def scale(self, n: int) -> "LaurentClass":
        return LaurentClass.from_dict({e: n * c for e, c in self.coeffs})

    def power(self, n: int) -> "LaurentClass":
        if n < 0:
            raise ValueError("negative power of a Laurent class")
        acc = LaurentClass.one()
        for _ in range(n):
            acc = acc * self
        return acc

    def dual(self, s: int = 0) -> "LaurentClass":
        """Tate duality on classes: L^a -> L^{s-a}, extended additively."""
        return LaurentClass(tuple(sorted((s - e, c) for e, c in self.coeffs)))

    def evaluate_at_one(self) -> int:
        return sum(c for _, c in self.coeffs)

    def render(self) -> str:
        """Canonical text: ascending exponents, `c*L^a` terms joined by ` + `,
        the exponent-0 term printed as a bare coefficient."""
        if not self.coeffs:
            return "0"
        parts = []
        for e, c in self.coeffs:
            parts.append(str(c) if e == 0 else f"{c}*L^{e}")
        return " + ".join(parts)

    def __str__(self) -> str:
        return self.render()


def class_of(obj: Obj):
    """K0 class of a heart object: Laurent class on the Tate heart, rank
    elsewhere.  Additive on direct sums."""
    if obj.instance.kind == TATE:
        counts: dict = {}
        for a in obj.twists:
            counts[a] = counts.get(a, 0) + 1
        return LaurentClass.from_dict(counts)
    return obj.rank


def euler_char(c: Complex):
    """Alternating sum of term classes; a homotopy-equivalence invariant."""
    if c.instance.kind == TATE:
        acc = LaurentClass.zero()
        for k, o in c.terms:
            term = class_of(o)
            acc = acc + (term if k % 2 == 0 else -term)
        return acc
    acc = 0
    for k, o in c.terms:
        acc += o.rank if k % 2 == 0 else -o.rank
    return acc


def dual_class(cls, s: int = 0):
    """Duality involution L^a -> L^{s-a} on Tate classes only."""
    if not isinstance(cls, LaurentClass):
        raise DomainError("dual_class is defined on Tate (Laurent) classes only")
    return cls.dual(s)
