from fractions import Fraction

import pytest

from conftest import MODELS_DIR, fixture_names
from derlie.dsl import ModelSyntaxError, parse_model


GOOD = """\
# comment line
base {
  generator x degree 2 truncate 4   # trailing comment
  generator y5 degree 5
  d y5 = x^3
}
fiber {
  generator s3 degree 3 stage 0
  generator s6 degree 6 stage 1
}
twist {
  d s3 = 1/2 x^2
  d s6 = x y5
}
options {
  max-degree 9
}
"""


def test_parse_valid_document():
    doc = parse_model(GOOD)
    assert doc.ok
    model = doc.to_model()
    assert model.validate() == []
    assert str(model.d_twist["s3"]) == "1/2*x^2"
    assert doc.options == {"max-degree": 9}


def test_twist_terms_split_into_fiber_and_base_parts():
    text = """\
base {
  generator x3 degree 3
}
fiber {
  generator s3 degree 3 stage 0
  generator s3b degree 3 stage 1
  generator s5 degree 5 stage 2
}
twist {
  d s5 = s3 s3b + x3 s3
}
"""
    model = parse_model(text).to_model()
    assert set(model.d_fiber) == {"s5"}
    assert set(model.d_twist) == {"s5"}
    assert str(model.d_fiber["s5"]) == "s3*s3b"
    assert str(model.d_twist["s5"]) == "x3*s3"


def test_undeclared_generator_diagnostic():
    text = "base {\n  d s3 = x^2\n}\n"
    doc = parse_model(text)
    assert not doc.ok
    (diag,) = doc.diagnostics
    assert diag.kind == "unknown-generator"
    assert diag.line == 2
    assert diag.col > 0


def test_undeclared_factor_diagnostic():
    text = "base {\n  generator s3 degree 3\n  d s3 = q^2\n}\n"
    doc = parse_model(text)
    assert any(d.kind == "unknown-generator" and d.line == 3 for d in doc.diagnostics)


def test_degree_zero_diagnostic():
    doc = parse_model("base {\n  generator x degree 0\n}\n")
    assert any(d.kind == "degree" and d.line == 2 for d in doc.diagnostics)


def test_syntax_diagnostics_carry_positions():
    doc = parse_model("junk statement\nbase {\nbase {\n")
    kinds = {(d.kind, d.line) for d in doc.diagnostics}
    assert ("syntax", 1) in kinds  # outside a section
    assert ("syntax", 3) in kinds  # nested section
    assert any(d.message.startswith("unterminated") for d in doc.diagnostics)


def test_duplicate_generator_diagnostic():
    text = "base {\n  generator x3 degree 3\n  generator x3 degree 3\n}\n"
    doc = parse_model(text)
    assert any("duplicate" in d.message for d in doc.diagnostics)


def test_truncate_requires_even_degree():
    doc = parse_model("base {\n  generator x degree 3 truncate 2\n}\n")
    assert any(d.kind == "degree" for d in doc.diagnostics)


def test_to_model_raises_with_diagnostics():
    doc = parse_model("base {\n  d s3 = x\n}\n")
    with pytest.raises(ModelSyntaxError):
        doc.to_model()


def test_leading_minus_and_rational_coefficients():
    text = """\
base {
  generator x degree 2 truncate 5
}
fiber {
  generator s7 degree 7
}
twist {
  d s7 = -2/3 x^4 + x^4
}
"""
    model = parse_model(text).to_model()
    assert model.d_twist["s7"].terms
    (coeff,) = model.d_twist["s7"].terms.values()
    assert coeff == Fraction(1, 3)


def test_round_trip_all_fixture_documents():
    for name in fixture_names():
        text = (MODELS_DIR / f"{name}.dgl").read_text()
        doc = parse_model(text)
        assert doc.ok, name
        m1 = doc.to_model()
        doc2 = parse_model(doc.render())
        assert doc2.ok, name
        m2 = doc2.to_model()
        assert [g.name for g in m1.algebra.generators] == [
            g.name for g in m2.algebra.generators
        ]
        assert m1.d_base == m2.d_base
        assert m1.d_fiber == m2.d_fiber
        assert m1.d_twist == m2.d_twist
        assert m1.stages == m2.stages


def test_all_fixture_documents_validate():
    for name in fixture_names():
        doc = parse_model((MODELS_DIR / f"{name}.dgl").read_text())
        assert doc.ok
        assert doc.to_model().validate() == []
