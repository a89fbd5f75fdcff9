"""Relative models B -> B (x) Lambda W with differential D = d_B + d_W + d_T.

The ambient algebra lists base generators first, then fiber generators,
so every monomial splits as (base part) * (fiber part) with no sign.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .algebra import AlgElement, Generator, GradedAlgebra, Monomial, extend_derivation
from .linalg import SparseMatrix, SubspaceBasis, kernel_basis, rank, Echelon


@dataclass
class Violation:
    generator: str
    reason: str

    def __str__(self) -> str:
        return f"{self.generator}: {self.reason}"


class RelativeModel:
    """Finite-dimensional base with fiber generators and twisted differential.

    d_base maps base generator names to elements of the base subalgebra,
    d_fiber to elements of Lambda^{>=2} W, d_twist to B_+ (x) Lambda W.
    ``stages`` assigns each fiber generator its nilpotence filtration index
    (default: declaration order).
    """

    def __init__(
        self,
        base_generators: list[Generator],
        fiber_generators: list[Generator],
        d_base: dict[str, AlgElement] | None = None,
        d_fiber: dict[str, AlgElement] | None = None,
        d_twist: dict[str, AlgElement] | None = None,
        stages: dict[str, int] | None = None,
    ):
        self.base_generators = tuple(base_generators)
        self.fiber_generators = tuple(fiber_generators)
        self.algebra = GradedAlgebra(list(base_generators) + list(fiber_generators))
        self.n_base = len(self.base_generators)
        self.d_base = {k: v for k, v in (d_base or {}).items() if v}
        self.d_fiber = {k: v for k, v in (d_fiber or {}).items() if v}
        self.d_twist = {k: v for k, v in (d_twist or {}).items() if v}
        self.stages = dict(stages) if stages else {
            g.name: i for i, g in enumerate(self.fiber_generators)
        }
        for g in self.fiber_generators:
            self.stages.setdefault(g.name, len(self.fiber_generators))

    # -- index helpers -------------------------------------------------

    @property
    def base_indices(self) -> list[int]:
        return list(range(self.n_base))

    @property
    def fiber_indices(self) -> list[int]:
        return list(range(self.n_base, len(self.algebra)))

    def is_base_name(self, name: str) -> bool:
        return self.algebra.index[name] < self.n_base

    def top_fiber_degree(self) -> int:
        return max((g.degree for g in self.fiber_generators), default=1)

    def default_max_degree(self) -> int:
        return 2 * self.top_fiber_degree() + 2

    def split_monomial(self, m: Monomial) -> tuple[Monomial, Monomial]:
        """Split into (base monomial, fiber monomial), both full-width."""
        base = m[: self.n_base] + (0,) * (len(m) - self.n_base)
        fiber = (0,) * self.n_base + m[self.n_base:]
        return base, fiber

    # -- differential --------------------------------------------------

    def differential_values(self) -> dict[str, AlgElement]:
        vals: dict[str, AlgElement] = dict(self.d_base)
        for g in self.fiber_generators:
            v = self.algebra.zero()
            if g.name in self.d_fiber:
                v = v + self.d_fiber[g.name]
            if g.name in self.d_twist:
                v = v + self.d_twist[g.name]
            if v:
                vals[g.name] = v
        return vals

    def d(self, x: AlgElement) -> AlgElement:
        """The total differential D = d_B + d_W + d_T (degree +1)."""
        return extend_derivation(self.algebra, self.differential_values(), -1, x)

    def d_base_only(self, x: AlgElement) -> AlgElement:
        return extend_derivation(self.algebra, self.d_base, -1, x)

    # -- bases ---------------------------------------------------------

    def monomial_basis(self, degree: int, restriction: str = "full") -> list[Monomial]:
        """Ordered monomial basis of the requested degree.

        restriction: full | base-only | fiber-only | base-positive
        (base-positive means the base factor has positive degree).
        """
        alg = self.algebra
        if restriction == "full":
            return alg.monomials_of_degree(degree)
        if restriction == "base-only":
            return alg.monomials_of_degree(degree, allowed=self.base_indices)
        if restriction == "fiber-only":
            return alg.monomials_of_degree(degree, allowed=self.fiber_indices)
        if restriction == "base-positive":
            out = [
                m
                for m in alg.monomials_of_degree(degree)
                if any(m[i] for i in self.base_indices)
            ]
            return out
        raise ValueError(f"unknown restriction {restriction!r}")

    def element_vector(self, x: AlgElement, basis: list[Monomial]) -> dict[int, Fraction]:
        pos = {m: i for i, m in enumerate(basis)}
        out: dict[int, Fraction] = {}
        for m, c in x.terms.items():
            if m not in pos:
                raise ValueError(f"monomial {self.algebra.monomial_str(m)} not in basis")
            out[pos[m]] = c
        return out

    # -- validation ----------------------------------------------------

    def validate(self, max_degree: int | None = None) -> list[Violation]:
        violations: list[Violation] = []
        alg = self.algebra
        # base finite-dimensionality
        for g in self.base_generators:
            if not g.is_odd and g.truncation is None:
                violations.append(Violation(g.name, "untruncated even base generator"))
        # degree homogeneity of all differential pieces
        for src, tag in ((self.d_base, "d_B"), (self.d_fiber, "d_W"), (self.d_twist, "d_T")):
            for name, v in src.items():
                d = v.homogeneous_degree()
                want = alg.generator(name).degree + 1
                if d != want:
                    violations.append(
                        Violation(name, f"{tag} value has degree {d}, expected {want}")
                    )
        # d_B stays in the base
        for name, v in self.d_base.items():
            if not self.is_base_name(name):
                violations.append(Violation(name, "d_B key is not a base generator"))
                continue
            for m in v.terms:
                if any(m[i] for i in self.fiber_indices):
                    violations.append(Violation(name, "d_B value leaves the base"))
                    break
        # d_W word length >= 2 in Lambda W
        for name, v in self.d_fiber.items():
            for m in v.terms:
                if any(m[i] for i in self.base_indices):
                    violations.append(Violation(name, "d_W value touches the base"))
                    break
                if sum(m[i] for i in self.fiber_indices) < 2:
                    violations.append(Violation(name, "d_W value has word length < 2"))
                    break
        # d_T base factor positive
        for name, v in self.d_twist.items():
            for m in v.terms:
                if not any(m[i] for i in self.base_indices):
                    violations.append(
                        Violation(name, "d_T value has trivial base factor")
                    )
                    break
        # nilpotence filtration
        for g in self.fiber_generators:
            stage = self.stages[g.name]
            val = (self.d_fiber.get(g.name, alg.zero())
                   + self.d_twist.get(g.name, alg.zero()))
            for m in val.terms:
                for i in self.fiber_indices:
                    if m[i] and self.stages[alg.generators[i].name] >= stage:
                        violations.append(
                            Violation(
                                g.name,
                                f"differential uses {alg.generators[i].name} of "
                                "equal or later filtration stage",
                            )
                        )
        if violations:
            return violations
        # D^2 = 0 on every generator
        for g in alg.generators:
            dd = self.d(self.d(alg.gen_element(g.name)))
            if dd:
                violations.append(Violation(g.name, f"D^2({g.name}) = {dd} != 0"))
        return violations

    def validated(self) -> "RelativeModel":
        violations = self.validate()
        if violations:
            raise ValueError("invalid model: " + "; ".join(map(str, violations)))
        return self

    # -- structural predicates ----------------------------------------

    def is_pure(self) -> bool:
        """True iff d_W = 0 and d_T(W) lies in the base subalgebra."""
        if self.d_fiber:
            return False
        for v in self.d_twist.values():
            for m in v.terms:
                if any(m[i] for i in self.fiber_indices):
                    return False
        return True

    # -- base cohomology ----------------------------------------------

    def base_cocycles(self, degree: int) -> tuple[list[Monomial], list[dict[int, Fraction]]]:
        """Monomial basis of B^degree and a basis of the d_B-cocycles."""
        basis = self.monomial_basis(degree, "base-only")
        up = self.monomial_basis(degree + 1, "base-only")
        cols = []
        for m in basis:
            img = self.d_base_only(AlgElement(self.algebra, {m: Fraction(1)}))
            cols.append(self.element_vector(img, up))
        mat = SparseMatrix.from_columns(cols, len(up))
        return basis, kernel_basis(mat).vectors

    def base_coboundaries(self, degree: int) -> list[dict[int, Fraction]]:
        basis = self.monomial_basis(degree, "base-only")
        below = self.monomial_basis(degree - 1, "base-only")
        out = []
        for m in below:
            img = self.d_base_only(AlgElement(self.algebra, {m: Fraction(1)}))
            if img:
                out.append(self.element_vector(img, basis))
        return out

    def decomposable_cocycles(self, degree: int) -> list[dict[int, Fraction]]:
        """Spanning set of (products of positive-degree cocycles) in B^degree."""
        basis = self.monomial_basis(degree, "base-only")
        out: list[dict[int, Fraction]] = []
        for k in range(1, degree):
            b1, z1 = self.base_cocycles(k)
            b2, z2 = self.base_cocycles(degree - k)
            for v1 in z1:
                e1 = AlgElement(self.algebra, {b1[i]: c for i, c in v1.items()})
                for v2 in z2:
                    e2 = AlgElement(self.algebra, {b2[i]: c for i, c in v2.items()})
                    prod = e1 * e2
                    if prod:
                        out.append(self.element_vector(prod, basis))
        return out

    def base_cohomology(self, degree: int) -> "BaseCohomology":
        basis, cocycles = self.base_cocycles(degree)
        cobs = self.base_coboundaries(degree) if degree >= 1 else []
        cyc = SubspaceBasis(len(basis), cocycles)
        bnd = SubspaceBasis(len(basis), cobs)
        from .linalg import quotient_rank

        q = quotient_rank(cyc, bnd)
        reps = [
            AlgElement(self.algebra, {basis[i]: c for i, c in v.items()})
            for v in q.representatives
        ]
        # rank of the image of H+ . H+ in this degree
        ech = Echelon()
        for v in cobs:
            ech.insert(v)
        base_rank = ech.rank
        for v in self.decomposable_cocycles(degree):
            ech.insert(v)
        return BaseCohomology(
            degree=degree,
            rank=q.rank,
            representatives=reps,
            decomposable_rank=ech.rank - base_rank,
        )


@dataclass
class BaseCohomology:
    degree: int
    rank: int
    representatives: list[AlgElement]
    decomposable_rank: int
