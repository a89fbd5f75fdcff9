"""Principal-bundle model families and the associated decision procedures.

Covers models of principal SU(n)-bundles over CP^m (and other truncated
bases), classification of the resulting classifying-space rational types
by the first-nonzero-twist invariant, H-space verdicts at bracket level,
and the decomposable-twist sufficient condition checker.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .algebra import AlgElement, Generator, GradedAlgebra
from .derivations import (
    BracketTable,
    Derivation,
    HomologyReport,
    NotPure,
    der_bracket,
    homology,
    homology_bracket,
    ker_DW_and_J,
    n_invariant,
    whitehead_trivial,
)
from .model import RelativeModel


class InvalidSpec(Exception):
    """The bundle family description cannot be realized."""


class NotWhiteheadTrivial(Exception):
    """The twist has an indecomposable characteristic class."""


@dataclass
class BundleFamilySpec:
    """Principal SU(n)-bundle over CP^m with characteristic coefficients.

    characteristic_values maps j to the coefficient of x^j in the twist of
    the degree 2j-1 fiber generator (j runs over 2..n; omitted means 0).
    """

    n: int
    m: int
    characteristic_values: dict[int, Fraction] = field(default_factory=dict)


def su_fiber_generators(n: int) -> list[Generator]:
    return [Generator(f"s{2 * j - 1}", 2 * j - 1) for j in range(2, n + 1)]


def su_bundle_model(spec: BundleFamilySpec) -> RelativeModel:
    if spec.n < 1 or spec.m < 1:
        raise InvalidSpec("need n >= 1 and m >= 1")
    base = [Generator("x", 2, truncation=spec.m + 1)]
    fiber = su_fiber_generators(spec.n)
    scratch = RelativeModel(base, fiber)
    d_twist: dict[str, AlgElement] = {}
    for j, c in spec.characteristic_values.items():
        c = Fraction(c)
        if not c:
            continue
        if j < 2 or j > spec.n:
            raise InvalidSpec(f"characteristic index {j} outside 2..{spec.n}")
        if j > spec.m:
            raise InvalidSpec(f"x^{j} = 0 over CP^{spec.m}: coefficient must vanish")
        d_twist[f"s{2 * j - 1}"] = scratch.algebra.gen_element("x", j).scale(c)
    return RelativeModel(base, fiber, d_twist=d_twist).validated()


def substitute(algebra: GradedAlgebra, images: dict[str, AlgElement], x: AlgElement) -> AlgElement:
    """Apply the algebra endomorphism fixing unlisted generators."""
    out = algebra.zero()
    for mono, coeff in x.terms.items():
        piece = algebra.unit(coeff)
        for slot, e in enumerate(mono):
            g = algebra.generators[slot]
            img = images.get(g.name, algebra.gen_element(g.name))
            for _ in range(e):
                piece = piece * img
        out = out + piece
    return out


def normalization_map(model: RelativeModel) -> tuple[RelativeModel, bool]:
    """Reduce a pure single-even-base model to its first-nonzero normal form.

    Builds the generator substitution w_i -> w_i - (c_i/c_1) x^(n_i-n_1) w_1
    and checks it intertwines the two differentials, certifying that the
    normal form (only the lowest twisted generator keeps its twist) has the
    same classifying-space rational type.
    """
    if not model.is_pure():
        raise NotPure("normalization applies to pure differentials")
    if len(model.base_generators) != 1:
        raise InvalidSpec("normalization needs a single-generator base")
    xgen = model.base_generators[0]
    twisted = sorted(
        (model.algebra.generator(name).degree, name)
        for name, v in model.d_twist.items()
        if v
    )
    if not twisted:
        return model, True
    _, first = twisted[0]
    # every pure twist over Lambda(x)/(x^(m+1)) is c * x^j
    def power_and_coeff(name: str) -> tuple[int, Fraction]:
        v = model.d_twist[name]
        assert len(v.terms) == 1
        (mono, c), = v.terms.items()
        return mono[model.algebra.index[xgen.name]], c

    n1, c1 = power_and_coeff(first)
    normalized = RelativeModel(
        list(model.base_generators),
        list(model.fiber_generators),
        d_base=dict(model.d_base),
        d_twist={first: model.d_twist[first]},
        stages=dict(model.stages),
    ).validated()
    images: dict[str, AlgElement] = {}
    for _, name in twisted[1:]:
        ni, ci = power_and_coeff(name)
        shift = model.algebra.gen_element(xgen.name, ni - n1) * model.algebra.gen_element(first)
        images[name] = model.algebra.gen_element(name) - shift.scale(ci / c1)
    # check psi is a DG map: psi(D'(g)) = D(psi(g)) on every generator
    ok = True
    for g in model.algebra.generators:
        lhs = substitute(model.algebra, images, normalized.d(model.algebra.gen_element(g.name)))
        rhs = model.d(substitute(model.algebra, images, model.algebra.gen_element(g.name)))
        if lhs != rhs:
            ok = False
    return normalized, ok


@dataclass
class ClassificationReport:
    n: int
    m: int
    count: int
    literal_example_count: int  # the max{1, n-1, m} reading
    formula_disagrees: bool
    invariants: dict[str, int]  # candidate label -> first-nonzero invariant
    merges: list[tuple[str, str, str]]  # (label, label, certification)
    discriminators: list[tuple[str, str, int, int, int]]
    # (label1, label2, homology degree, rank1, rank2)
    representatives: dict[str, RelativeModel]


def classify_su_family(n: int, m: int, max_degree: int | None = None) -> ClassificationReport:
    """Count the rational types of the family's classifying spaces.

    Candidates are the zero twist and, for each position j, the twist
    supported on the degree 2j-1 generator alone (scalars do not matter);
    candidates sharing the first-nonzero invariant are merged after an
    explicit DG-map certification, and distinct pairs are discriminated by
    a homology rank.
    """
    if n < 1 or m < 1:
        raise InvalidSpec("need n >= 1 and m >= 1")
    top = 2 * n - 1
    candidates: dict[str, RelativeModel] = {}
    candidates["D=0"] = su_bundle_model(BundleFamilySpec(n, m))
    for j in range(2, min(n, m) + 1):
        candidates[f"D(s{2 * j - 1})=x^{j}"] = su_bundle_model(
            BundleFamilySpec(n, m, {j: Fraction(1)})
        )
    invariants = {
        label: (n_invariant(mod) if n >= 2 else 1)
        for label, mod in candidates.items()
    }
    by_inv: dict[int, list[str]] = {}
    for label, inv in invariants.items():
        by_inv.setdefault(inv, []).append(label)
    if max_degree is None:
        max_degree = 2 * top + 2

    merges: list[tuple[str, str, str]] = []
    discriminators: list[tuple[str, str, int, int, int]] = []
    reps: dict[str, RelativeModel] = {}
    reports: dict[str, HomologyReport] = {}

    def hom_of(label: str) -> HomologyReport:
        if label not in reports:
            reports[label] = homology(candidates[label], max_degree)
        return reports[label]

    for inv in sorted(by_inv):
        labels = sorted(by_inv[inv])
        reps[labels[0]] = candidates[labels[0]]
        for other in labels[1:]:
            a, b = candidates[labels[0]], candidates[other]
            agree_below_top = all(
                g.degree >= top
                or a.d_twist.get(g.name, a.algebra.zero())
                == b.d_twist.get(g.name, b.algebra.zero())
                for g in a.fiber_generators
            )
            if not agree_below_top:
                merges.append((labels[0], other, "UNCERTIFIED"))
                continue
            ranks_agree = hom_of(labels[0]).ranks() == hom_of(other).ranks()
            cert = (
                "differentials agree below the top fiber degree; homology "
                f"ranks agree through degree {max_degree}"
                if ranks_agree
                else "UNCERTIFIED"
            )
            merges.append((labels[0], other, cert))
    class_labels = sorted(reps)
    for i, l1 in enumerate(class_labels):
        for l2 in class_labels[i + 1:]:
            i1, i2 = invariants[l1], invariants[l2]
            low = min(i1, i2)
            deg = top - low
            r1 = hom_of(l1).rank(deg)
            r2 = hom_of(l2).rank(deg)
            discriminators.append((l1, l2, deg, r1, r2))

    literal = max(1, n - 1, m)
    count = len(reps)
    return ClassificationReport(
        n=n,
        m=m,
        count=count,
        literal_example_count=literal,
        formula_disagrees=(literal != count),
        invariants=invariants,
        merges=merges,
        discriminators=discriminators,
        representatives=reps,
    )


@dataclass
class HSpaceVerdict:
    bracket_abelian: bool
    coformal_certified: bool  # fiber generators occupy at most two degrees
    verdict: str  # "H-space (certified)" | "H-space (bracket-level)" | "not H-space"
    max_degree: int
    witness: tuple[str, str, str] | None = None  # (theta1, theta2, bracket)

    @property
    def is_hspace(self) -> bool:
        return self.bracket_abelian


def hspace_decision(model: RelativeModel, max_degree: int | None = None) -> HSpaceVerdict:
    if max_degree is None:
        max_degree = model.default_max_degree()
    report = homology(model, max_degree)
    table = homology_bracket(model, max_degree, report)
    fiber_degrees = {g.degree for g in model.fiber_generators}
    coformal = len(fiber_degrees) <= 2
    if table.is_abelian():
        verdict = "H-space (certified)" if coformal else "H-space (bracket-level)"
        return HSpaceVerdict(True, coformal, verdict, max_degree)
    p, i, q, j = table.nonzero_witness()
    r1 = report.by_degree[p].representatives[i]
    r2 = report.by_degree[q].representatives[j]
    br = der_bracket(r1, r2)
    return HSpaceVerdict(
        False,
        coformal,
        "not H-space",
        max_degree,
        witness=(str(r1), str(r2), str(br)),
    )


@dataclass
class Example2Report:
    whitehead_trivial: bool
    kernel_generators: list[str]
    j_vanishes_below_top: bool
    formal_flag: bool
    prediction: str  # "H-space" | "no prediction"
    bracket_verdict: HSpaceVerdict | None
    consistent: bool


def example2_check(model: RelativeModel, formal_flag: bool,
                   max_degree: int | None = None) -> Example2Report:
    """Sufficient-condition check for H-space structure under decomposable twists.

    The Massey/formality hypothesis is caller-asserted via formal_flag and
    never computed.  A prediction that contradicts the bracket computation
    is reported as inconsistent (a hard failure for the caller).
    """
    if not model.is_pure():
        raise NotPure("checker requires a pure differential")
    if not whitehead_trivial(model):
        raise NotWhiteheadTrivial("twist has an indecomposable class")
    ker = ker_DW_and_J(model)
    top = model.top_fiber_degree()
    below = [
        name
        for name in ker.kernel_generators
        if model.algebra.generator(name).degree < top
    ]
    j_ok = not below
    if j_ok and formal_flag:
        verdict = hspace_decision(model, max_degree)
        return Example2Report(
            whitehead_trivial=True,
            kernel_generators=ker.kernel_generators,
            j_vanishes_below_top=True,
            formal_flag=formal_flag,
            prediction="H-space",
            bracket_verdict=verdict,
            consistent=verdict.is_hspace,
        )
    return Example2Report(
        whitehead_trivial=True,
        kernel_generators=ker.kernel_generators,
        j_vanishes_below_top=j_ok,
        formal_flag=formal_flag,
        prediction="no prediction",
        bracket_verdict=None,
        consistent=True,
    )


def homotopy_report(model: RelativeModel, max_degree: int | None = None) -> dict[int, int]:
    """Rational homotopy group ranks of the classifying space, k = 2..N+1."""
    if max_degree is None:
        max_degree = model.default_max_degree()
    report = homology(model, max_degree)
    return {k: report.rank(k - 1) for k in range(2, max_degree + 2)}
