"""The Hom-complex on the dual base coalgebra and its comparison map.

Derivations of the relative model are transported to linear maps from
the dual of the base into fiber derivations.  The complex carries the
convolution bracket against the dual coproduct and a differential
perturbed by the image of the twisted differential; the transport is
checked to be an isomorphism of DG Lie algebras on concrete models.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .algebra import AlgElement, Monomial
from .derivations import Derivation, der_bracket, der_differential, elementary_slice, elementary
from .linalg import Echelon, SparseMatrix, Vec, rank
from .model import RelativeModel


@dataclass
class DualBasis:
    """Dual basis of the base monomials with coproduct and dual differential."""

    model: RelativeModel
    monomials: list[Monomial]  # full-width, base support only
    index: dict[Monomial, int]
    # coproduct[i] = [(j, k, c)] meaning Delta(beta_i) += c * beta_j (x) beta_k
    coproduct: dict[int, list[tuple[int, int, Fraction]]]
    # dual_differential[i] = sparse vector over dual indices
    dual_differential: dict[int, Vec]

    def degree(self, i: int) -> int:
        return self.model.algebra.monomial_degree(self.monomials[i])

    def pair(self, i: int, x: AlgElement) -> Fraction:
        return x.terms.get(self.monomials[i], Fraction(0))


def dualize_base(model: RelativeModel) -> DualBasis:
    alg = model.algebra
    top = 0
    for g in model.base_generators:
        cap = g.max_exponent
        if cap is None:
            raise ValueError("base algebra is not finite-dimensional")
        top += cap * g.degree
    monomials: list[Monomial] = []
    for deg in range(top + 1):
        monomials.extend(model.monomial_basis(deg, "base-only"))
    index = {m: i for i, m in enumerate(monomials)}
    coproduct: dict[int, list[tuple[int, int, Fraction]]] = {i: [] for i in range(len(monomials))}
    for j, a in enumerate(monomials):
        for k, b in enumerate(monomials):
            sign, m = alg.multiply_monomials(a, b)
            if m is not None and m in index:
                coproduct[index[m]].append((j, k, sign))
    dual_differential: dict[int, Vec] = {}
    for j, a in enumerate(monomials):
        img = model.d_base_only(AlgElement(alg, {a: Fraction(1)}))
        sign = Fraction(-1) ** alg.monomial_degree(a)  # graded transpose
        for m, c in img.terms.items():
            dual_differential.setdefault(index[m], {})[j] = sign * c
    return DualBasis(model, monomials, index, coproduct, dual_differential)


# fiber derivations are Derivation values supported on Lambda W


def fiber_differential(model: RelativeModel, g: Derivation) -> Derivation:
    """[d_W, g] on derivations of the fiber algebra."""
    n = g.degree
    sign = Fraction(-1) ** n
    dW = {k: v for k, v in model.d_fiber.items()}
    out: dict[str, AlgElement] = {}
    from .algebra import extend_derivation

    for w in model.fiber_generators:
        a = extend_derivation(model.algebra, dW, -1, g.value(w.name))
        b = g.apply(dW.get(w.name, model.algebra.zero()))
        v = a - b.scale(sign)
        if v:
            out[w.name] = v
    return Derivation(model, n - 1, out)


@dataclass
class HomElement:
    """Linear map from the dual base into fiber derivations, of fixed degree.

    The component on a dual element of base degree k is a fiber derivation
    lowering degrees by hom_degree + k.
    """

    model: RelativeModel
    dual: DualBasis
    hom_degree: int
    components: dict[int, Derivation] = field(default_factory=dict)

    def __post_init__(self):
        self.components = {i: g for i, g in self.components.items() if g}

    def __bool__(self) -> bool:
        return bool(self.components)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, HomElement)
            and self.hom_degree == other.hom_degree
            and self.components == other.components
        )

    def component(self, i: int) -> Derivation:
        g = self.components.get(i)
        if g is not None:
            return g
        return Derivation(self.model, self.hom_degree + self.dual.degree(i), {})

    def add_component(self, i: int, g: Derivation):
        if not g:
            return
        cur = self.components.get(i)
        self.components[i] = cur + g if cur is not None else g
        if not self.components[i]:
            del self.components[i]

    def __sub__(self, other: "HomElement") -> "HomElement":
        out = HomElement(self.model, self.dual, self.hom_degree, dict(self.components))
        for i, g in other.components.items():
            out.add_component(i, g.scale(-1))
        return out


def phi(model: RelativeModel, theta: Derivation, dual: DualBasis | None = None) -> HomElement:
    """Transport of a derivation to the Hom-complex.

    The component on the dual of base monomial b collects the terms of
    theta(w) with base factor b, with sign (-1)^(|theta| |b|).
    """
    if dual is None:
        dual = dualize_base(model)
    n = theta.degree
    out = HomElement(model, dual, n)
    alg = model.algebra
    for wname, val in theta.values.items():
        for m, c in val.terms.items():
            bmono, fmono = model.split_monomial(m)
            i = dual.index[bmono]
            k = alg.monomial_degree(bmono)
            sign = Fraction(-1) ** (n * k)
            piece = Derivation(
                model, n + k, {wname: AlgElement(alg, {fmono: sign * c})}
            )
            out.add_component(i, piece)
    return out


def phi_tilde(model: RelativeModel, dual: DualBasis | None = None) -> HomElement:
    """The degree -1 element obtained by transporting the twisted part."""
    if dual is None:
        dual = dualize_base(model)
    # d_T raises degree by one: a derivation of degree -1
    theta = Derivation(model, -1, dict(model.d_twist))
    out = phi(model, theta, dual)
    # restrict to positive-degree duals
    out.components = {
        i: g for i, g in out.components.items() if dual.degree(i) > 0
    }
    return out


def hom_bracket(f1: HomElement, f2: HomElement) -> HomElement:
    """Convolution bracket through the dual coproduct."""
    model, dual = f1.model, f1.dual
    out = HomElement(model, dual, f1.hom_degree + f2.hom_degree)
    for i, splits in dual.coproduct.items():
        for j, k, c in splits:
            g1 = f1.components.get(j)
            g2 = f2.components.get(k)
            if g1 is None or g2 is None:
                continue
            sign = Fraction(-1) ** (f2.hom_degree * dual.degree(j))
            out.add_component(i, der_bracket(g1, g2).scale(c * sign))
    return out


def hom_differential(model: RelativeModel, f: HomElement,
                     phitilde: HomElement | None = None) -> HomElement:
    """Perturbed differential: internal part, dual-base part, twist bracket."""
    dual = f.dual
    if phitilde is None:
        phitilde = phi_tilde(model, dual)
    n = f.hom_degree
    out = HomElement(model, dual, n - 1)
    for i, g in f.components.items():
        out.add_component(i, fiber_differential(model, g))
    sign = Fraction(-1) ** n
    for i in range(len(dual.monomials)):
        vec = dual.dual_differential.get(i)
        if not vec:
            continue
        for j, c in vec.items():
            g = f.components.get(j)
            if g is not None:
                out.add_component(i, g.scale(-sign * c))
    br = hom_bracket(phitilde, f)
    for i, g in br.components.items():
        out.add_component(i, g)
    return out


# -- verification of the comparison map -------------------------------


@dataclass
class PsiReport:
    ok: bool
    checked_degrees: list[int]
    bijective_dims: dict[int, int]
    failures: list[str]

    def first_failure(self) -> str | None:
        return self.failures[0] if self.failures else None


def hom_slice_basis(model: RelativeModel, dual: DualBasis, n: int):
    """Ordered basis (dual index, w, fiber monomial) of the degree-n slice."""
    alg = model.algebra
    out = []
    for i, b in enumerate(dual.monomials):
        k = alg.monomial_degree(b)
        for w in model.fiber_generators:
            for fm in model.monomial_basis(w.degree - n - k, "fiber-only"):
                out.append((i, w.name, fm))
    return out


def hom_element_vector(f: HomElement, basis) -> Vec:
    pos = {key: idx for idx, key in enumerate(basis)}
    out: Vec = {}
    for i, g in f.components.items():
        for wname, val in g.values.items():
            for m, c in val.terms.items():
                out[pos[(i, wname, m)]] = c
    return out


def verify_psi(model: RelativeModel, max_degree: int) -> PsiReport:
    """Check bijectivity plus differential and bracket commutation.

    Runs over the complete elementary bases through the degree window and
    reports every failure (empty failure list means the comparison map is
    a DG Lie isomorphism on this model at this scale).
    """
    dual = dualize_base(model)
    phit = phi_tilde(model, dual)
    failures: list[str] = []
    bijective_dims: dict[int, int] = {}
    degrees = list(range(1, max_degree + 1))

    for n in degrees:
        der_b = elementary_slice(model, n)
        hom_b = hom_slice_basis(model, dual, n)
        if len(der_b) != len(hom_b):
            failures.append(
                f"degree {n}: slice dimensions differ ({len(der_b)} vs {len(hom_b)})"
            )
            continue
        cols = []
        for w, m in der_b:
            f = phi(model, elementary(model, w, m, n), dual)
            cols.append(hom_element_vector(f, hom_b))
        mat = SparseMatrix.from_columns(cols, len(hom_b))
        r = rank(mat)
        bijective_dims[n] = len(der_b)
        if r != len(der_b):
            failures.append(f"degree {n}: transport matrix rank {r} < {len(der_b)}")

    for n in degrees:
        for w, m in elementary_slice(model, n):
            theta = elementary(model, w, m, n)
            lhs = phi(model, der_differential(model, theta), dual)
            rhs = hom_differential(model, phi(model, theta, dual), phit)
            if lhs != rhs:
                failures.append(
                    f"differential commutation fails on ({w}, "
                    f"{model.algebra.monomial_str(m)}) in degree {n}"
                )

    for n1 in degrees:
        for n2 in degrees:
            if n2 < n1:
                continue
            for w1, m1 in elementary_slice(model, n1):
                for w2, m2 in elementary_slice(model, n2):
                    t1 = elementary(model, w1, m1, n1)
                    t2 = elementary(model, w2, m2, n2)
                    lhs = phi(model, der_bracket(t1, t2), dual)
                    rhs = hom_bracket(phi(model, t1, dual), phi(model, t2, dual))
                    if lhs != rhs:
                        failures.append(
                            f"bracket commutation fails on ({w1}, "
                            f"{model.algebra.monomial_str(m1)}) and ({w2}, "
                            f"{model.algebra.monomial_str(m2)})"
                        )

    return PsiReport(
        ok=not failures,
        checked_degrees=degrees,
        bijective_dims=bijective_dims,
        failures=failures,
    )
