"""Cochain algebra presentations of finite-basis DG Lie algebras.

Each basis element z of degree k yields a free algebra generator of
degree k + 1; the differential is the sum of a linear part dual to the
DGL differential and a quadratic part dual to the bracket.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .algebra import AlgElement, Generator, GradedAlgebra, extend_derivation
from .linalg import Vec


@dataclass
class DGLData:
    """A DG Lie algebra given by an explicit finite basis per degree.

    names/degrees are parallel lists; differential[j] expands delta(x_j)
    over the basis; brackets[(i, j)] (i <= j) expands [x_i, x_j].
    Pairs landing beyond the listed basis degrees may be omitted.
    """

    names: list[str]
    degrees: list[int]
    differential: dict[int, Vec] = field(default_factory=dict)
    brackets: dict[tuple[int, int], Vec] = field(default_factory=dict)

    def bracket(self, i: int, j: int) -> Vec:
        if i <= j:
            return self.brackets.get((i, j), {})
        # graded antisymmetry: [x_i, x_j] = -(-1)^(|x_i||x_j|) [x_j, x_i]
        sign = -Fraction(-1) ** (self.degrees[i] * self.degrees[j])
        return {k: sign * c for k, c in self.brackets.get((j, i), {}).items()}


@dataclass
class CochainPresentation:
    algebra: GradedAlgebra
    source_names: list[str]  # DGL basis element behind each generator
    differential: dict[str, AlgElement]  # cochain generator -> d1 + d2 value

    def generator_degrees(self) -> list[int]:
        return [g.degree for g in self.algebra.generators]

    def d(self, x: AlgElement) -> AlgElement:
        return extend_derivation(self.algebra, self.differential, -1, x)

    def pretty(self) -> str:
        gens = ", ".join(g.name for g in self.algebra.generators)
        lines = [f"Lambda({gens}), d"]
        for g in self.algebra.generators:
            lines.append(f"  d({g.name}) = {self.differential.get(g.name, self.algebra.zero())}")
        return "\n".join(lines)


def cochain_presentation(dgl: DGLData, max_degree: int) -> CochainPresentation:
    """Present the cochain algebra of a finite-basis DGL through a window.

    Generators are ordered by (degree, source name) and named c1, c2, ...
    in that order; each keeps a pointer to its DGL source.
    """
    order = sorted(range(len(dgl.names)), key=lambda i: (dgl.degrees[i], dgl.names[i]))
    gen_of = {src: pos for pos, src in enumerate(order)}
    generators = [
        Generator(name=f"c{pos + 1}", degree=dgl.degrees[src] + 1)
        for pos, src in enumerate(order)
    ]
    algebra = GradedAlgebra(generators)
    differential: dict[str, AlgElement] = {}
    for pos, src in enumerate(order):
        if dgl.degrees[src] + 1 > max_degree:
            continue
        val = algebra.zero()
        # linear part: <d1 z; sx> = -<z, delta x>
        for j, vec in dgl.differential.items():
            c = vec.get(src)
            if c:
                val = val + algebra.gen_element(generators[gen_of[j]].name).scale(-c)
        # quadratic part: <d2 z; sx_i, sx_j> = (-1)^(|x_i|) <z, [x_i, x_j]>
        for i in range(len(dgl.names)):
            for j in range(i, len(dgl.names)):
                c = dgl.bracket(i, j).get(src)
                if not c:
                    continue
                coeff = Fraction(-1) ** dgl.degrees[i] * c
                if i == j:
                    coeff = coeff / 2
                mono = algebra.gen_element(generators[gen_of[i]].name) * algebra.gen_element(
                    generators[gen_of[j]].name
                )
                val = val + mono.scale(coeff)
        if val:
            differential[generators[pos].name] = val
    return CochainPresentation(
        algebra=algebra,
        source_names=[dgl.names[src] for src in order],
        differential=differential,
    )


@dataclass
class DSquaredReport:
    ok: bool
    violations: list[str]


def check_d_squared(p: CochainPresentation, max_degree: int) -> DSquaredReport:
    """Apply the differential twice to every generator in the window."""
    violations = []
    for g in p.algebra.generators:
        if g.degree > max_degree - 1:
            continue
        dd = p.d(p.d(p.algebra.gen_element(g.name)))
        if dd:
            violations.append(f"d^2({g.name}) = {dd} != 0")
    return DSquaredReport(ok=not violations, violations=violations)


# -- builders from the derivation complex ------------------------------


def dgl_from_derivation_complex(model, max_degree: int) -> DGLData:
    """Basis, differential and brackets of the truncated derivation DGL."""
    from .derivations import der_basis, der_bracket, der_differential

    slices = {n: der_basis(model, n) for n in range(1, max_degree + 1)}
    names: list[str] = []
    degrees: list[int] = []
    ders = []
    pos_of: dict[tuple[int, int], int] = {}  # (degree, index in slice) -> global index
    for n in range(1, max_degree + 1):
        for i, th in enumerate(slices[n].basis_derivations()):
            pos_of[(n, i)] = len(names)
            names.append(_der_name(model, n, slices[n], i))
            degrees.append(n)
            ders.append(th)

    def expand(theta, n: int) -> Vec | None:
        """Coordinates of a degree-n derivation in the slice basis."""
        if n < 1 or n > max_degree:
            return None
        slc = slices[n]
        vec = slc.derivation_to_vector(theta)
        if slc.cycle_vectors is not None:
            from .linalg import solve_in_span

            coords = solve_in_span(slc.cycle_vectors, vec, len(slc.elementary_basis))
            if coords is None:
                raise RuntimeError("degree-1 image is not a cycle")
            local = coords
        else:
            local = vec
        return {pos_of[(n, i)]: c for i, c in local.items()}

    differential: dict[int, Vec] = {}
    brackets: dict[tuple[int, int], Vec] = {}
    for gi, theta in enumerate(ders):
        n = degrees[gi]
        img = der_differential(model, theta)
        if img and n - 1 >= 1:
            v = expand(img, n - 1)
            if v:
                differential[gi] = v
    for gi, t1 in enumerate(ders):
        for gj in range(gi, len(ders)):
            t2 = ders[gj]
            n = degrees[gi] + degrees[gj]
            if n > max_degree:
                continue
            br = der_bracket(t1, t2)
            if br:
                v = expand(br, n)
                if v:
                    brackets[(gi, gj)] = v
    return DGLData(names, degrees, differential, brackets)


def dgl_from_homology(model, max_degree: int) -> DGLData:
    """The homology Lie algebra (zero differential) on chosen representatives."""
    from .derivations import homology, homology_bracket

    report = homology(model, max_degree)
    table = homology_bracket(model, max_degree, report)
    names: list[str] = []
    degrees: list[int] = []
    pos_of: dict[tuple[int, int], int] = {}
    for n in sorted(report.by_degree):
        h = report.by_degree[n]
        for i in range(h.rank):
            pos_of[(n, i)] = len(names)
            names.append(f"H{n}[{i}]")
            degrees.append(n)
    brackets: dict[tuple[int, int], Vec] = {}
    for (p, i, q, j), coords in table.entries.items():
        if not coords:
            continue
        gi, gj = pos_of[(p, i)], pos_of[(q, j)]
        vec = {pos_of[(p + q, k)]: c for k, c in coords.items()}
        if gi <= gj:
            brackets[(gi, gj)] = vec
        else:
            sign = -Fraction(-1) ** (p * q)
            brackets[(gj, gi)] = {k: sign * c for k, c in vec.items()}
    return DGLData(names, degrees, {}, brackets)


def _der_name(model, n: int, slc, i: int) -> str:
    if slc.cycle_vectors is not None:
        th = slc.basis_derivations()[i]
        parts = [
            f"{w}:{v}" for w, v in sorted(th.values.items())
        ]
        return f"Z1[{i}]({'; '.join(parts)})"
    w, m = slc.elementary_basis[i]
    return f"({w},{model.algebra.monomial_str(m)})"
