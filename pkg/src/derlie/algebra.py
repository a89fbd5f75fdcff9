"""Free graded-commutative algebras over Q with power truncations.

Monomials are exponent tuples over a fixed ordered generator list; odd
generators square to zero and even generators may carry a truncation
g^k = 0.  Products pick up the Koszul sign from reordering odd letters
into canonical order.  Derivations of any map degree are extended over
products by the graded Leibniz rule.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

Monomial = tuple[int, ...]


class InhomogeneousValue(Exception):
    """A derivation value does not have the required homogeneous degree."""


@dataclass(frozen=True)
class Generator:
    name: str
    degree: int
    truncation: int | None = None  # g**truncation == 0; even generators only

    def __post_init__(self):
        if self.degree < 1:
            raise ValueError(f"generator {self.name}: degree must be >= 1")
        if self.truncation is not None:
            if self.degree % 2 == 1:
                raise ValueError(f"generator {self.name}: truncation on odd generator")
            if self.truncation < 1:
                raise ValueError(f"generator {self.name}: truncation must be >= 1")

    @property
    def is_odd(self) -> bool:
        return self.degree % 2 == 1

    @property
    def max_exponent(self) -> int | None:
        """Largest legal exponent, or None when powers are unbounded."""
        if self.is_odd:
            return 1
        if self.truncation is not None:
            return self.truncation - 1
        return None


class GradedAlgebra:
    """A free graded-commutative algebra on an ordered generator list."""

    def __init__(self, generators: list[Generator] | tuple[Generator, ...]):
        self.generators: tuple[Generator, ...] = tuple(generators)
        names = [g.name for g in self.generators]
        if len(set(names)) != len(names):
            raise ValueError("duplicate generator names")
        self.index: dict[str, int] = {g.name: i for i, g in enumerate(self.generators)}

    def __len__(self) -> int:
        return len(self.generators)

    def generator(self, name: str) -> Generator:
        return self.generators[self.index[name]]

    def one(self) -> Monomial:
        return (0,) * len(self.generators)

    def monomial_degree(self, m: Monomial) -> int:
        return sum(e * g.degree for e, g in zip(m, self.generators))

    def monomial_valid(self, m: Monomial) -> bool:
        for e, g in zip(m, self.generators):
            cap = g.max_exponent
            if e < 0 or (cap is not None and e > cap):
                return False
        return True

    def gen_element(self, name: str, power: int = 1) -> "AlgElement":
        m = [0] * len(self.generators)
        m[self.index[name]] = power
        return AlgElement(self, {tuple(m): Fraction(1)})

    def unit(self, c=1) -> "AlgElement":
        c = Fraction(c)
        return AlgElement(self, {self.one(): c} if c else {})

    def zero(self) -> "AlgElement":
        return AlgElement(self, {})

    def monomial_str(self, m: Monomial) -> str:
        parts = []
        for e, g in zip(m, self.generators):
            if e == 1:
                parts.append(g.name)
            elif e > 1:
                parts.append(f"{g.name}^{e}")
        return "*".join(parts) if parts else "1"

    def multiply_monomials(self, a: Monomial, b: Monomial) -> tuple[Fraction, Monomial | None]:
        """Koszul sign and combined monomial; (0, None) when a relation kills it."""
        sign = 0
        # moving each odd letter of b left past the odd letters of a with
        # larger generator index costs one transposition
        for j, (eb, gb) in enumerate(zip(b, self.generators)):
            if not eb or not gb.is_odd:
                continue
            for i in range(j + 1, len(a)):
                if a[i] and self.generators[i].is_odd:
                    sign += a[i] * eb
        combined = tuple(x + y for x, y in zip(a, b))
        if not self.monomial_valid(combined):
            return Fraction(0), None
        return Fraction(-1) ** sign, combined

    def monomials_of_degree(self, degree: int, allowed: list[int] | None = None) -> list[Monomial]:
        """All valid monomials of the given degree, graded-lex ordered.

        ``allowed`` restricts which generator slots may carry a nonzero
        exponent (indices into the generator list).
        """
        if degree < 0:
            return []
        n = len(self.generators)
        allowed_set = set(range(n)) if allowed is None else set(allowed)
        out: list[Monomial] = []

        def rec(slot: int, remaining: int, prefix: list[int]):
            if slot == n:
                if remaining == 0:
                    out.append(tuple(prefix))
                return
            g = self.generators[slot]
            if slot not in allowed_set:
                cap = 0
            else:
                cap = g.max_exponent
                if cap is None:
                    cap = remaining // g.degree
                cap = min(cap, remaining // g.degree)
            for e in range(cap, -1, -1):
                prefix.append(e)
                rec(slot + 1, remaining - e * g.degree, prefix)
                prefix.pop()

        rec(0, degree, [])
        out.sort()
        return out


@dataclass
class AlgElement:
    """Sparse Q-linear combination of monomials; zeros are never stored."""

    algebra: GradedAlgebra
    terms: dict[Monomial, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        self.terms = {m: Fraction(c) for m, c in self.terms.items() if c}

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        return isinstance(other, AlgElement) and self.terms == other.terms

    def __add__(self, other: "AlgElement") -> "AlgElement":
        terms = dict(self.terms)
        for m, c in other.terms.items():
            s = terms.get(m, Fraction(0)) + c
            if s:
                terms[m] = s
            else:
                terms.pop(m, None)
        return AlgElement(self.algebra, terms)

    def __sub__(self, other: "AlgElement") -> "AlgElement":
        return self + other.scale(Fraction(-1))

    def scale(self, c) -> "AlgElement":
        c = Fraction(c)
        if not c:
            return AlgElement(self.algebra, {})
        return AlgElement(self.algebra, {m: c * x for m, x in self.terms.items()})

    def __mul__(self, other: "AlgElement") -> "AlgElement":
        alg = self.algebra
        terms: dict[Monomial, Fraction] = {}
        for ma, ca in self.terms.items():
            for mb, cb in other.terms.items():
                sign, m = alg.multiply_monomials(ma, mb)
                if m is None:
                    continue
                s = terms.get(m, Fraction(0)) + sign * ca * cb
                if s:
                    terms[m] = s
                else:
                    terms.pop(m, None)
        return AlgElement(alg, terms)

    def homogeneous_degree(self) -> int | None:
        """The common degree of all terms, or None (zero element or mixed)."""
        degs = {self.algebra.monomial_degree(m) for m in self.terms}
        if len(degs) == 1:
            return degs.pop()
        return None

    def degrees(self) -> set[int]:
        return {self.algebra.monomial_degree(m) for m in self.terms}

    def coefficient(self, m: Monomial) -> Fraction:
        return self.terms.get(m, Fraction(0))

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m in sorted(self.terms, key=lambda m: (self.algebra.monomial_degree(m), m)):
            c = self.terms[m]
            ms = self.algebra.monomial_str(m)
            if ms == "1":
                parts.append(str(c))
            elif c == 1:
                parts.append(ms)
            elif c == -1:
                parts.append(f"-{ms}")
            else:
                parts.append(f"{c}*{ms}")
        return " + ".join(parts).replace("+ -", "- ")

    __repr__ = __str__


def extend_derivation(
    algebra: GradedAlgebra,
    values: dict[str, AlgElement],
    map_degree: int,
    target: AlgElement,
) -> AlgElement:
    """Leibniz extension of generator values to the whole algebra.

    ``map_degree`` n means the map lowers degrees by n (a differential is
    n = -1).  The convention is theta(ab) = theta(a)b + (-1)^(n|a|) a theta(b);
    values on unlisted generators are zero.
    """
    for name, val in values.items():
        g = algebra.generator(name)
        if val:
            d = val.homogeneous_degree()
            if d is None or d != g.degree - map_degree:
                raise InhomogeneousValue(
                    f"value for {name} must be homogeneous of degree "
                    f"{g.degree - map_degree}"
                )
    out = algebra.zero()
    for mono, coeff in target.terms.items():
        prefix_deg = 0
        for slot, e in enumerate(mono):
            if not e:
                continue
            g = algebra.generators[slot]
            val = values.get(g.name)
            if val is not None and val:
                sign = Fraction(-1) ** (map_degree * prefix_deg)
                prefix = list(mono[:slot]) + [0] * (len(mono) - slot)
                rest = [0] * (slot + 1) + list(mono[slot + 1:])
                rest[slot] = e - 1
                factor = Fraction(e) if not g.is_odd else Fraction(1)
                piece = AlgElement(algebra, {tuple(prefix): sign * coeff * factor})
                piece = piece * val
                piece = piece * AlgElement(algebra, {tuple(rest): Fraction(1)})
                out = out + piece
            prefix_deg += e * g.degree
    return out
