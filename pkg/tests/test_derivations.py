import random
from fractions import Fraction

import pytest

from derlie.algebra import AlgElement, Generator
from derlie.derivations import (
    Derivation,
    NotPure,
    based_variant_complex,
    der_basis,
    der_bracket,
    der_differential,
    elementary_slice,
    homology,
    homology_bracket,
    ker_DW_and_J,
    n_invariant,
    reduce_to_homology,
    whitehead_trivial,
)
from derlie.model import RelativeModel
from oracles import dimension_series


def named_basis(model):
    """The eight elementary derivations of the S3xS3 / S5xS7 models."""
    a = model.algebra
    x3y3 = a.gen_element("x3") * a.gen_element("y3")
    return {
        "alpha": Derivation(model, 1, {"s7": x3y3}),
        "beta1": Derivation(model, 2, {"s5": a.gen_element("x3")}),
        "beta2": Derivation(model, 2, {"s5": a.gen_element("y3")}),
        "beta3": Derivation(model, 2, {"s7": a.gen_element("s5")}),
        "gamma1": Derivation(model, 4, {"s7": a.gen_element("x3")}),
        "gamma2": Derivation(model, 4, {"s7": a.gen_element("y3")}),
        "eta": Derivation(model, 5, {"s5": a.unit()}),
        "phi": Derivation(model, 7, {"s7": a.unit()}),
    }


def test_slice_dimensions_product_models(twisted_product_model, untwisted_product_model):
    for m in (twisted_product_model, untwisted_product_model):
        dims = {n: der_basis(m, n).dim for n in range(1, 8)}
        assert dims == {1: 1, 2: 3, 3: 0, 4: 2, 5: 1, 6: 0, 7: 1}


def test_degree_one_slice_is_cycle_basis(twisted_product_model):
    slc = der_basis(twisted_product_model, 1)
    assert slc.cycle_vectors is not None
    for theta in slc.basis_derivations():
        assert not der_differential(twisted_product_model, theta)


def test_differential_of_beta3_is_alpha(twisted_product_model):
    b = named_basis(twisted_product_model)
    assert der_differential(twisted_product_model, b["beta3"]) == b["alpha"]


def test_alpha_is_cycle_in_both_cases(twisted_product_model, untwisted_product_model):
    for m in (twisted_product_model, untwisted_product_model):
        alpha = named_basis(m)["alpha"]
        assert not der_differential(m, alpha)


def test_pure_reduction_theta_then_d_vanishes(fixture_models, rng):
    for m in fixture_models.values():
        if not m.is_pure():
            continue
        for n in range(1, m.default_max_degree() + 1):
            for w, mono in elementary_slice(m, n):
                theta = Derivation(m, n, {w: AlgElement(m.algebra, {mono: Fraction(1)})})
                full = der_differential(m, theta)
                compose_only = Derivation(
                    m,
                    n - 1,
                    {g.name: m.d(theta.value(g.name)) for g in m.fiber_generators},
                )
                assert full == compose_only


def test_differential_on_shifted_cycle():
    # fiber s3, s5 over the S3 x S4 base; D(s3) = chi4 = y4
    base = [Generator("x3", 3), Generator("y4", 4, truncation=2)]
    fiber = [Generator("s3", 3), Generator("s5", 5)]
    scratch = RelativeModel(base, fiber)
    a = scratch.algebra
    q = Fraction(3)
    m = RelativeModel(base, fiber, d_twist={"s3": a.gen_element("y4")}).validated()
    theta = Derivation(m, 2, {"s5": a.gen_element("x3") + a.gen_element("s3").scale(q)})
    got = der_differential(m, theta)
    assert got == Derivation(m, 1, {"s5": a.gen_element("y4").scale(q)})


def test_bracket_examples(untwisted_product_model):
    m = untwisted_product_model
    b = named_basis(m)
    br = der_bracket(b["beta3"], b["beta1"])
    assert br.degree == 4
    # only the s7 -> x3 composite survives, up to overall sign
    val = br.value("s7")
    assert val in (m.algebra.gen_element("x3"), m.algebra.gen_element("x3").scale(-1))
    assert not der_bracket(b["eta"], b["eta"])
    br2 = der_bracket(b["beta3"], b["eta"])
    assert br2.value("s7") in (m.algebra.unit(), m.algebra.unit(-1))


def test_bracket_ladder_su():
    base = [Generator("x", 2, truncation=3)]
    fiber = [Generator("s3", 3), Generator("s5", 5)]
    m = RelativeModel(base, fiber).validated()
    a = m.algebra
    t1 = Derivation(m, 2, {"s5": a.gen_element("s3")})
    t2 = Derivation(m, 3, {"s3": a.unit()})
    br = der_bracket(t1, t2)
    assert br.value("s5") in (a.unit(), a.unit(-1))


def test_homology_product_models(twisted_product_model, untwisted_product_model):
    twisted = homology(twisted_product_model, 8)
    assert twisted.ranks() == {2: 2, 4: 2, 5: 1, 7: 1}
    untwisted = homology(untwisted_product_model, 8)
    assert untwisted.ranks() == {1: 1, 2: 3, 4: 2, 5: 1, 7: 1}


def test_homology_deterministic(twisted_product_model):
    r1 = homology(twisted_product_model, 8)
    r2 = homology(twisted_product_model, 8)
    for n in r1.by_degree:
        assert [str(x) for x in r1.by_degree[n].representatives] == [
            str(x) for x in r2.by_degree[n].representatives
        ]


def test_based_variant_ranks(untwisted_product_model):
    report = based_variant_complex(untwisted_product_model, 8)
    assert report.ranks() == {1: 1, 2: 3, 4: 2}


def test_based_variant_hom_count_su2():
    # single fiber generator s3 over CP^2, zero differential: the ranks are
    # the dimensions of Hom(W, H^+(B)) per lowering degree
    base = [Generator("x", 2, truncation=3)]
    m = RelativeModel(base, [Generator("s3", 3)]).validated()
    report = based_variant_complex(m, 8)
    assert report.ranks() == {1: 1}  # s3 -> x (degree 2 target)
    full = homology(m, 8)
    assert full.ranks() == {1: 1, 3: 1}  # adds s3 -> 1


def test_empty_fiber_everything_vanishes():
    m = RelativeModel([Generator("x3", 3)], []).validated()
    assert homology(m, 6).ranks() == {}
    for n in range(1, 6):
        assert der_basis(m, n).dim == 0


def test_slice_dimension_formula(fixture_models):
    for m in fixture_models.values():
        series = dimension_series(list(m.algebra.generators), 20)
        for n in range(2, 8):
            want = sum(
                series[g.degree - n] if 0 <= g.degree - n <= 20 else 0
                for g in m.fiber_generators
            )
            assert der_basis(m, n).dim == want


def test_differential_squares_to_zero(fixture_models):
    for name, m in fixture_models.items():
        for n in range(2, m.default_max_degree() + 2):
            for w, mono in elementary_slice(m, n):
                theta = Derivation(m, n, {w: AlgElement(m.algebra, {mono: Fraction(1)})})
                dd = der_differential(m, der_differential(m, theta))
                assert not dd, f"{name}: differential fails to square to zero"


def random_derivation(m, n, rng):
    basis = elementary_slice(m, n)
    vals = {}
    for w, mono in basis:
        c = rng.randint(-2, 2)
        if c:
            piece = AlgElement(m.algebra, {mono: Fraction(c)})
            vals[w] = vals.get(w, m.algebra.zero()) + piece
    return Derivation(m, n, vals)


def test_bracket_antisymmetry_and_jacobi(fixture_models, rng):
    for m in fixture_models.values():
        degrees = [n for n in range(1, 8) if elementary_slice(m, n)]
        if not degrees:
            continue
        for _ in range(6):
            n1, n2, n3 = (rng.choice(degrees) for _ in range(3))
            t1, t2, t3 = (
                random_derivation(m, n, rng) for n in (n1, n2, n3)
            )
            sign12 = Fraction(-1) ** (n1 * n2)
            assert (
                der_bracket(t1, t2) + der_bracket(t2, t1).scale(sign12)
            ).values == {}
            # graded Jacobi: [t1,[t2,t3]] = [[t1,t2],t3] + (-1)^(n1 n2)[t2,[t1,t3]]
            lhs = der_bracket(t1, der_bracket(t2, t3))
            rhs = der_bracket(der_bracket(t1, t2), t3) + der_bracket(
                t2, der_bracket(t1, t3)
            ).scale(sign12)
            assert lhs == rhs


def test_differential_is_bracket_derivation(fixture_models, rng):
    for m in fixture_models.values():
        degrees = [n for n in range(1, 8) if elementary_slice(m, n)]
        if not degrees:
            continue
        for _ in range(6):
            n1, n2 = rng.choice(degrees), rng.choice(degrees)
            t1 = random_derivation(m, n1, rng)
            t2 = random_derivation(m, n2, rng)
            lhs = der_differential(m, der_bracket(t1, t2))
            rhs = der_bracket(der_differential(m, t1), t2) + der_bracket(
                t1, der_differential(m, t2)
            ).scale(Fraction(-1) ** n1)
            assert lhs == rhs


def test_homology_bracket_product_models(twisted_product_model, untwisted_product_model):
    assert homology_bracket(twisted_product_model, 8).is_abelian()
    table = homology_bracket(untwisted_product_model, 8)
    assert not table.is_abelian()
    # the degree 2 x 2 -> 4 entries are nonzero, and the preferred witness
    # is the highest-total-degree pairing (degree 2 with degree 5)
    assert any(v and p == 2 and q == 2 for (p, _, q, _), v in table.entries.items())
    key = table.nonzero_witness()
    assert key is not None and (key[0], key[2]) == (2, 5)


def test_reduce_to_homology_roundtrip(twisted_product_model):
    report = homology(twisted_product_model, 8)
    for n, h in report.by_degree.items():
        for i, rep in enumerate(h.representatives):
            coords = reduce_to_homology(report, rep)
            assert coords == {i: Fraction(1)}


def test_n_invariant_examples():
    base = [Generator("x", 2, truncation=4)]
    fiber = [Generator("s3", 3), Generator("s5", 5)]
    scratch = RelativeModel(base, fiber)
    a = scratch.algebra
    m1 = RelativeModel(base, fiber, d_twist={"s3": a.gen_element("x", 2)}).validated()
    assert n_invariant(m1) == 3
    m2 = RelativeModel(base, fiber).validated()
    assert n_invariant(m2) == 5
    m3 = RelativeModel(base, fiber, d_twist={"s5": a.gen_element("x", 3)}).validated()
    assert n_invariant(m3) == 5


def test_n_invariant_requires_pure():
    base = [Generator("x3", 3)]
    fiber = [Generator("s3", 3), Generator("s3b", 3), Generator("s5", 5)]
    scratch = RelativeModel(base, fiber)
    a = scratch.algebra
    m = RelativeModel(
        base, fiber, d_fiber={"s5": a.gen_element("s3") * a.gen_element("s3b")}
    ).validated()
    with pytest.raises(NotPure):
        n_invariant(m)


def test_ker_dw_examples():
    base = [Generator("x", 2, truncation=4)]
    fiber = [Generator("s3", 3), Generator("s5", 5)]
    scratch = RelativeModel(base, fiber)
    a = scratch.algebra
    zero = RelativeModel(base, fiber).validated()
    assert ker_DW_and_J(zero).kernel_generators == ["s3", "s5"]
    twisted = RelativeModel(base, fiber, d_twist={"s3": a.gen_element("x", 2)}).validated()
    rep = ker_DW_and_J(twisted)
    assert rep.kernel_generators == ["s5"]
    assert rep.j_image_ranks == {5: 1}


def test_ker_dw_detects_coboundary_twist():
    # over CP^1 the square x^2 vanishes, so the twist is forced to zero
    base = [Generator("x", 2, truncation=2)]
    fiber = [Generator("s3", 3)]
    m = RelativeModel(base, fiber).validated()
    assert ker_DW_and_J(m).kernel_generators == ["s3"]


def test_whitehead_trivial_examples():
    base = [Generator("x", 2, truncation=4)]
    fiber = [Generator("s3", 3), Generator("s5", 5)]
    scratch = RelativeModel(base, fiber)
    a = scratch.algebra
    sq = RelativeModel(base, fiber, d_twist={"s3": a.gen_element("x", 2)}).validated()
    assert whitehead_trivial(sq)
    assert whitehead_trivial(RelativeModel(base, fiber).validated())
    # indecomposable degree-4 class over the S3 x S4 base
    base2 = [Generator("x3", 3), Generator("y4", 4, truncation=2)]
    scratch2 = RelativeModel(base2, fiber)
    ind = RelativeModel(
        base2, fiber, d_twist={"s3": scratch2.algebra.gen_element("y4")}
    ).validated()
    assert not whitehead_trivial(ind)


def su3_rank_h2(base, chi4_name=None, power=1):
    fiber = [Generator("s3", 3), Generator("s5", 5)]
    scratch = RelativeModel(base, fiber)
    a = scratch.algebra
    d_twist = {}
    if chi4_name is not None:
        d_twist = {"s3": a.gen_element(chi4_name, power)}
    m = RelativeModel(base, fiber, d_twist=d_twist).validated()
    return homology(m, 8).rank(2)


def test_su3_rank_of_h2():
    s3s4 = [Generator("x3", 3), Generator("y4", 4, truncation=2)]
    cp2 = [Generator("x", 2, truncation=3)]
    # rank H^3(B) = 1 for the product base, 0 for the projective plane
    assert su3_rank_h2(s3s4, "y4") == 1
    assert su3_rank_h2(s3s4) == 2
    assert su3_rank_h2(cp2, "x", 2) == 0
    assert su3_rank_h2(cp2) == 1


def test_top_degree_change_preserves_ranks_and_brackets():
    # two pure models agreeing below the top fiber degree have the same
    # homology ranks and the same bracket-vanishing pattern
    base = [Generator("x", 2, truncation=4)]
    fiber = [Generator("s3", 3), Generator("s5", 5)]
    scratch = RelativeModel(base, fiber)
    a = scratch.algebra
    m1 = RelativeModel(base, fiber, d_twist={"s3": a.gen_element("x", 2)}).validated()
    m2 = RelativeModel(
        base,
        fiber,
        d_twist={"s3": a.gen_element("x", 2), "s5": a.gen_element("x", 3)},
    ).validated()
    h1, h2 = homology(m1, 12), homology(m2, 12)
    assert h1.ranks() == h2.ranks()
    assert homology_bracket(m1, 12, h1).is_abelian() == homology_bracket(
        m2, 12, h2
    ).is_abelian()


def test_su4_has_nontrivial_bracket():
    base = [Generator("x", 2, truncation=3)]
    fiber = [Generator("s3", 3), Generator("s5", 5), Generator("s7", 7)]
    scratch = RelativeModel(base, fiber)
    a = scratch.algebra
    for d_twist in ({}, {"s3": a.gen_element("x", 2)}):
        m = RelativeModel(base, fiber, d_twist=d_twist).validated()
        assert not homology_bracket(m, 16).is_abelian()
