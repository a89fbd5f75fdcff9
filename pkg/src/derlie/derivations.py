"""The truncated DG Lie algebra of base-relative derivations.

A derivation of degree n is recorded by its values on the fiber
generators (it vanishes on the base by definition).  The differential is
the commutator with D and the bracket is the graded commutator; the
degree-1 slice of the truncated complex keeps only cycles.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .algebra import AlgElement, GradedAlgebra, Monomial, extend_derivation
from .linalg import (
    Echelon,
    QuotientResult,
    SparseMatrix,
    SubspaceBasis,
    Vec,
    kernel_basis,
    quotient_rank,
    reduce_modulo,
    solve_in_span,
)
from .model import RelativeModel


class NotPure(Exception):
    """Operation requires a pure differential (D(W) inside the base)."""


@dataclass
class Derivation:
    """Degree-n derivation vanishing on the base, given by values on W."""

    model: RelativeModel
    degree: int
    values: dict[str, AlgElement] = field(default_factory=dict)

    def __post_init__(self):
        self.values = {k: v for k, v in self.values.items() if v}
        alg = self.model.algebra
        for name, v in self.values.items():
            if self.model.is_base_name(name):
                raise ValueError(f"{name} is a base generator")
            d = v.homogeneous_degree()
            if d != alg.generator(name).degree - self.degree:
                raise ValueError(
                    f"value on {name} has degree {d}, expected "
                    f"{alg.generator(name).degree - self.degree}"
                )

    def __bool__(self) -> bool:
        return bool(self.values)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Derivation)
            and self.degree == other.degree
            and self.values == other.values
        )

    def apply(self, x: AlgElement) -> AlgElement:
        return extend_derivation(self.model.algebra, self.values, self.degree, x)

    def value(self, name: str) -> AlgElement:
        return self.values.get(name, self.model.algebra.zero())

    def __add__(self, other: "Derivation") -> "Derivation":
        assert self.degree == other.degree
        vals = dict(self.values)
        for k, v in other.values.items():
            vals[k] = vals.get(k, self.model.algebra.zero()) + v
        return Derivation(self.model, self.degree, vals)

    def scale(self, c) -> "Derivation":
        return Derivation(
            self.model, self.degree, {k: v.scale(c) for k, v in self.values.items()}
        )

    def __str__(self) -> str:
        if not self.values:
            return "0"
        return " + ".join(f"({k} -> {v})" for k, v in sorted(self.values.items()))

    __repr__ = __str__


def elementary(model: RelativeModel, name: str, mono: Monomial, degree: int) -> Derivation:
    return Derivation(
        model, degree, {name: AlgElement(model.algebra, {mono: Fraction(1)})}
    )


def der_differential(model: RelativeModel, theta: Derivation) -> Derivation:
    """[D, theta] = D o theta - (-1)^n theta o D, of degree n - 1."""
    n = theta.degree
    dvals = model.differential_values()
    sign = Fraction(-1) ** n
    out: dict[str, AlgElement] = {}
    for g in model.fiber_generators:
        a = model.d(theta.value(g.name))
        b = theta.apply(model.d(model.algebra.gen_element(g.name)))
        v = a - b.scale(sign)
        if v:
            out[g.name] = v
    return Derivation(model, n - 1, out)


def der_bracket(theta1: Derivation, theta2: Derivation) -> Derivation:
    """Graded commutator theta1 o theta2 - (-1)^(n1 n2) theta2 o theta1."""
    model = theta1.model
    n1, n2 = theta1.degree, theta2.degree
    sign = Fraction(-1) ** (n1 * n2)
    out: dict[str, AlgElement] = {}
    for g in model.fiber_generators:
        v = theta1.apply(theta2.value(g.name)) - theta2.apply(theta1.value(g.name)).scale(sign)
        if v:
            out[g.name] = v
    return Derivation(model, n1 + n2, out)


# -- complex slices ---------------------------------------------------


@dataclass
class DerComplexSlice:
    """Ordered basis of the degree-n slice of the truncated complex.

    For n >= 2 the basis is the elementary derivations (w, monomial); at
    n = 1 it is a cycle basis expressed in elementary coordinates.
    """

    model: RelativeModel
    degree: int
    elementary_basis: list[tuple[str, Monomial]]
    cycle_vectors: list[Vec] | None = None  # set at n = 1

    @property
    def dim(self) -> int:
        if self.cycle_vectors is not None:
            return len(self.cycle_vectors)
        return len(self.elementary_basis)

    def basis_derivations(self) -> list[Derivation]:
        if self.cycle_vectors is not None:
            return [self.vector_to_derivation(v) for v in self.cycle_vectors]
        return [
            elementary(self.model, w, m, self.degree)
            for w, m in self.elementary_basis
        ]

    def vector_to_derivation(self, v: Vec) -> Derivation:
        vals: dict[str, AlgElement] = {}
        alg = self.model.algebra
        for i, c in v.items():
            w, m = self.elementary_basis[i]
            piece = AlgElement(alg, {m: c})
            vals[w] = vals.get(w, alg.zero()) + piece
        return Derivation(self.model, self.degree, vals)

    def derivation_to_vector(self, theta: Derivation) -> Vec:
        pos = {key: i for i, key in enumerate(self.elementary_basis)}
        out: Vec = {}
        for w, val in theta.values.items():
            for m, c in val.terms.items():
                out[pos[(w, m)]] = c
        return out


def elementary_slice(model: RelativeModel, n: int) -> list[tuple[str, Monomial]]:
    """Elementary derivation basis (w, monomial) with |monomial| = |w| - n."""
    out: list[tuple[str, Monomial]] = []
    for g in model.fiber_generators:
        for m in model.monomial_basis(g.degree - n, "full"):
            out.append((g.name, m))
    return out


def boundary_matrix(model: RelativeModel, n: int) -> SparseMatrix:
    """Matrix of the differential from elementary Der^n to elementary Der^(n-1)."""
    src = elementary_slice(model, n)
    dst = elementary_slice(model, n - 1)
    pos = {key: i for i, key in enumerate(dst)}
    entries: dict[tuple[int, int], Fraction] = {}
    for j, (w, m) in enumerate(src):
        img = der_differential(model, elementary(model, w, m, n))
        for name, val in img.values.items():
            for mono, c in val.terms.items():
                entries[(pos[(name, mono)], j)] = c
    return SparseMatrix(len(dst), len(src), entries)


def der_basis(model: RelativeModel, n: int) -> DerComplexSlice:
    """The degree-n slice of the truncated derivation complex (n >= 1)."""
    if n < 1:
        raise ValueError("truncated complex starts in degree 1")
    basis = elementary_slice(model, n)
    if n == 1:
        cycles = kernel_basis(boundary_matrix(model, 1)).vectors
        return DerComplexSlice(model, 1, basis, cycle_vectors=cycles)
    return DerComplexSlice(model, n, basis)


# -- homology ---------------------------------------------------------


@dataclass
class DegreeHomology:
    degree: int
    rank: int
    representatives: list[Derivation]
    representative_vectors: list[Vec]
    boundary_vectors: list[Vec]
    slice: DerComplexSlice


@dataclass
class HomologyReport:
    model: RelativeModel
    max_degree: int
    by_degree: dict[int, DegreeHomology]

    def rank(self, n: int) -> int:
        h = self.by_degree.get(n)
        return h.rank if h else 0

    def ranks(self) -> dict[int, int]:
        return {n: h.rank for n, h in sorted(self.by_degree.items()) if h.rank}


def homology(
    model: RelativeModel,
    max_degree: int,
    restrict_positive_values: bool = False,
) -> HomologyReport:
    """Homology of the truncated complex in degrees 1..max_degree.

    With ``restrict_positive_values`` the computation runs in the based
    sub-complex of derivations taking values in positive degrees (the
    elementary derivations (w, 1) are dropped).
    """
    alg = model.algebra

    def keep(key: tuple[str, Monomial]) -> bool:
        if not restrict_positive_values:
            return True
        return alg.monomial_degree(key[1]) > 0

    slices: dict[int, list[tuple[str, Monomial]]] = {}
    for n in range(0, max_degree + 2):
        slices[n] = [k for k in elementary_slice(model, n) if keep(k)]

    def matrix(n: int) -> SparseMatrix:
        src, dst = slices[n], slices[n - 1]
        pos = {key: i for i, key in enumerate(dst)}
        entries: dict[tuple[int, int], Fraction] = {}
        for j, (w, m) in enumerate(src):
            img = der_differential(model, elementary(model, w, m, n))
            for name, val in img.values.items():
                for mono, c in val.terms.items():
                    entries[(pos[(name, mono)], j)] = c
        return SparseMatrix(len(dst), len(src), entries)

    matrices = {n: matrix(n) for n in range(1, max_degree + 2)}

    by_degree: dict[int, DegreeHomology] = {}
    for n in range(1, max_degree + 1):
        cycles = kernel_basis(matrices[n]).vectors
        if n == 1:
            slc = DerComplexSlice(model, 1, slices[1], cycle_vectors=cycles)
        else:
            slc = DerComplexSlice(model, n, slices[n])
        boundaries = []
        ech = Echelon()
        for col in matrices[n + 1].columns():
            if ech.insert(col) is not None:
                boundaries.append(col)
        q = quotient_rank(
            SubspaceBasis(len(slices[n]), cycles),
            SubspaceBasis(len(slices[n]), boundaries),
        )
        by_degree[n] = DegreeHomology(
            degree=n,
            rank=q.rank,
            representatives=[slc.vector_to_derivation(v) for v in q.representatives],
            representative_vectors=q.representatives,
            boundary_vectors=boundaries,
            slice=slc,
        )
    return HomologyReport(model, max_degree, by_degree)


def based_variant_complex(model: RelativeModel, max_degree: int) -> HomologyReport:
    """Homology of the sub-DGL of derivations with positive-degree values."""
    return homology(model, max_degree, restrict_positive_values=True)


def reduce_to_homology(report: HomologyReport, theta: Derivation) -> Vec | None:
    """Coordinates of a cycle's class in the chosen representatives.

    Returns None when theta's degree falls outside the window or theta is
    not a cycle of the truncated complex.
    """
    n = theta.degree
    h = report.by_degree.get(n)
    if h is None:
        return None
    vec = h.slice.derivation_to_vector(theta)
    columns = list(h.representative_vectors) + list(h.boundary_vectors)
    coords = solve_in_span(columns, vec, len(h.slice.elementary_basis))
    if coords is None:
        return None
    return {i: c for i, c in coords.items() if i < len(h.representative_vectors)}


# -- bracket table ----------------------------------------------------


@dataclass
class BracketTable:
    """Structure constants of the induced bracket on homology representatives.

    entries[(p, i, q, j)] is the coordinate vector (over the degree p+q
    representatives) of [rep_p_i, rep_q_j].
    """

    report: HomologyReport
    entries: dict[tuple[int, int, int, int], Vec]

    def is_abelian(self) -> bool:
        return all(not v for v in self.entries.values())

    def nonzero_witness(self) -> tuple[int, int, int, int] | None:
        """The nonzero entry of highest total degree (ties broken by key)."""
        best = None
        for key in sorted(self.entries):
            if self.entries[key]:
                if best is None or key[0] + key[2] > best[0] + best[2]:
                    best = key
        return best


def homology_bracket(model: RelativeModel, max_degree: int,
                     report: HomologyReport | None = None) -> BracketTable:
    if report is None:
        report = homology(model, max_degree)
    entries: dict[tuple[int, int, int, int], Vec] = {}
    degrees = sorted(report.by_degree)
    for p in degrees:
        for q in degrees:
            if q < p or p + q > max_degree:
                continue
            hp, hq = report.by_degree[p], report.by_degree[q]
            for i, r1 in enumerate(hp.representatives):
                for j, r2 in enumerate(hq.representatives):
                    if p == q and j < i:
                        continue
                    br = der_bracket(r1, r2)
                    coords = reduce_to_homology(report, br)
                    if coords is None:
                        raise RuntimeError(
                            "bracket of cycles failed to reduce in homology"
                        )
                    entries[(p, i, q, j)] = coords
    return BracketTable(report, entries)


# -- pure-model invariants --------------------------------------------


def require_pure(model: RelativeModel):
    if not model.is_pure():
        raise NotPure("operation requires a pure differential")


def n_invariant(model: RelativeModel) -> int:
    """Minimal fiber degree with nonzero twist, or the top degree if none."""
    require_pure(model)
    twisted = [
        model.algebra.generator(name).degree
        for name, v in model.d_twist.items()
        if v
    ]
    if twisted:
        return min(twisted)
    return model.top_fiber_degree()


@dataclass
class KerDWReport:
    kernel_generators: list[str]
    j_image_ranks: dict[int, int]  # degree -> rank


def ker_DW_and_J(model: RelativeModel) -> KerDWReport:
    """Fiber generators whose twist is a coboundary below their degree.

    Decides "cohomologous to zero" by exact linear algebra inside the
    subalgebra B (x) Lambda W_{<|w|} with the restricted differential.
    """
    require_pure(model)
    alg = model.algebra
    kernel: list[str] = []
    for g in model.fiber_generators:
        dw = model.d_twist.get(g.name)
        if dw is None or not dw:
            kernel.append(g.name)
            continue
        allowed = model.base_indices + [
            i for i in model.fiber_indices if alg.generators[i].degree < g.degree
        ]
        domain = alg.monomials_of_degree(g.degree, allowed=allowed)
        target = alg.monomials_of_degree(g.degree + 1, allowed=allowed)
        pos = {m: i for i, m in enumerate(target)}
        ech = Echelon()
        for m in domain:
            img = model.d(AlgElement(alg, {m: Fraction(1)}))
            vec = {pos[mm]: c for mm, c in img.terms.items()}
            ech.insert(vec)
        dw_vec = {pos[m]: c for m, c in dw.terms.items()}
        if not ech.reduce(dw_vec):
            kernel.append(g.name)
    ranks: dict[int, int] = {}
    for name in kernel:
        d = alg.generator(name).degree
        ranks[d] = ranks.get(d, 0) + 1
    return KerDWReport(kernel_generators=kernel, j_image_ranks=ranks)


def whitehead_trivial(model: RelativeModel) -> bool:
    """True iff every twist lands in decomposable base cocycles mod d_B."""
    require_pure(model)
    alg = model.algebra
    for name, dw in model.d_twist.items():
        if not dw:
            continue
        deg = alg.generator(name).degree + 1
        basis = model.monomial_basis(deg, "base-only")
        ech = Echelon()
        for v in model.base_coboundaries(deg):
            ech.insert(v)
        for v in model.decomposable_cocycles(deg):
            ech.insert(v)
        if ech.reduce(model.element_vector(dw, basis)):
            return False
    return True
