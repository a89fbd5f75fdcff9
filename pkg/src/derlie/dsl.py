"""Line-oriented parser for .dgl model documents.

Grammar ('#' starts a comment):

    base {
      generator <name> degree <k> [truncate <p>]
      d <name> = <poly> | 0
    }
    fiber {
      generator <name> degree <k> [stage <i>]
    }
    twist {
      d <name> = <poly> | 0
    }
    options {
      max-degree <N>
    }

A <poly> is a sum of terms; a term is an optional rational coefficient
followed by juxtaposed generator names with optional ^exponent, e.g.
``d s5 = x3 y3`` or ``d s3 = 1/2 x^2``.  Twist lines carry the full
differential of a fiber generator; pure fiber terms become the fiber part
and terms touching the base become the twisted part.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

from .algebra import AlgElement, Generator, GradedAlgebra
from .model import RelativeModel


@dataclass
class Diagnostic:
    kind: str  # "syntax" | "degree" | "unknown-generator"
    message: str
    line: int
    col: int

    def __str__(self) -> str:
        return f"{self.line}:{self.col}: {self.kind}: {self.message}"


class ModelSyntaxError(Exception):
    def __init__(self, diagnostics: list[Diagnostic]):
        self.diagnostics = diagnostics
        super().__init__("; ".join(map(str, diagnostics)))


@dataclass
class GeneratorDecl:
    name: str
    degree: int
    truncation: int | None
    stage: int | None
    line: int


@dataclass
class DiffDecl:
    name: str
    terms: list[tuple[Fraction, list[tuple[str, int]]]]  # (coeff, [(gen, exp)])
    line: int
    col: int


@dataclass
class ModelDocument:
    base_generators: list[GeneratorDecl] = field(default_factory=list)
    fiber_generators: list[GeneratorDecl] = field(default_factory=list)
    base_differentials: list[DiffDecl] = field(default_factory=list)
    twist_differentials: list[DiffDecl] = field(default_factory=list)
    options: dict[str, int] = field(default_factory=dict)
    diagnostics: list[Diagnostic] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.diagnostics

    def to_model(self) -> RelativeModel:
        if self.diagnostics:
            raise ModelSyntaxError(self.diagnostics)
        base = [
            Generator(g.name, g.degree, truncation=g.truncation)
            for g in self.base_generators
        ]
        fiber = [Generator(g.name, g.degree) for g in self.fiber_generators]
        stages = {}
        for i, g in enumerate(self.fiber_generators):
            stages[g.name] = g.stage if g.stage is not None else i
        scratch = RelativeModel(base, fiber)
        alg = scratch.algebra

        def build(decl: DiffDecl) -> AlgElement:
            out = alg.zero()
            for coeff, factors in decl.terms:
                piece = alg.unit(coeff)
                for name, exp in factors:
                    piece = piece * alg.gen_element(name, exp)
                out = out + piece
            return out

        d_base = {d.name: build(d) for d in self.base_differentials}
        d_fiber: dict[str, AlgElement] = {}
        d_twist: dict[str, AlgElement] = {}
        fiber_idx = set(scratch.fiber_indices)
        for d in self.twist_differentials:
            val = build(d)
            pure_fiber = alg.zero()
            twisted = alg.zero()
            for m, c in val.terms.items():
                part = AlgElement(alg, {m: c})
                if any(m[i] for i in scratch.base_indices):
                    twisted = twisted + part
                else:
                    pure_fiber = pure_fiber + part
            if pure_fiber:
                d_fiber[d.name] = pure_fiber
            if twisted:
                d_twist[d.name] = twisted
        return RelativeModel(base, fiber, d_base=d_base, d_fiber=d_fiber,
                             d_twist=d_twist, stages=stages)

    def render(self) -> str:
        """Print back to DSL text (reparsing yields the same model)."""
        lines = []

        def poly(decl: DiffDecl) -> str:
            if not decl.terms:
                return "0"
            parts = []
            for coeff, factors in decl.terms:
                toks = []
                if coeff != 1 or not factors:
                    toks.append(str(coeff))
                for name, exp in factors:
                    toks.append(name if exp == 1 else f"{name}^{exp}")
                parts.append(" ".join(toks))
            return " + ".join(parts)

        lines.append("base {")
        for g in self.base_generators:
            extra = f" truncate {g.truncation}" if g.truncation is not None else ""
            lines.append(f"  generator {g.name} degree {g.degree}{extra}")
        for d in self.base_differentials:
            lines.append(f"  d {d.name} = {poly(d)}")
        lines.append("}")
        lines.append("fiber {")
        for g in self.fiber_generators:
            extra = f" stage {g.stage}" if g.stage is not None else ""
            lines.append(f"  generator {g.name} degree {g.degree}{extra}")
        lines.append("}")
        lines.append("twist {")
        for d in self.twist_differentials:
            lines.append(f"  d {d.name} = {poly(d)}")
        lines.append("}")
        if self.options:
            lines.append("options {")
            for k, v in sorted(self.options.items()):
                lines.append(f"  {k} {v}")
            lines.append("}")
        return "\n".join(lines) + "\n"


TOKEN = re.compile(r"\S+")
RATIONAL = re.compile(r"^-?\d+(/\d+)?$")
NAME = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*(\^\d+)?$")


def parse_model(text: str) -> ModelDocument:
    doc = ModelDocument()
    diags = doc.diagnostics
    section: str | None = None
    known: dict[str, GeneratorDecl] = {}

    def err(kind: str, msg: str, line: int, col: int):
        diags.append(Diagnostic(kind, msg, line, col))

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        tokens = [(m.group(0), m.start() + 1) for m in TOKEN.finditer(line)]
        if not tokens:
            continue
        words = [t for t, _ in tokens]
        if len(words) == 2 and words[1] == "{":
            if section is not None:
                err("syntax", "nested section", lineno, tokens[0][1])
                continue
            if words[0] not in ("base", "fiber", "twist", "options"):
                err("syntax", f"unknown section {words[0]!r}", lineno, tokens[0][1])
                continue
            section = words[0]
            continue
        if words == ["}"]:
            if section is None:
                err("syntax", "unmatched '}'", lineno, tokens[0][1])
            section = None
            continue
        if section is None:
            err("syntax", "statement outside a section", lineno, tokens[0][1])
            continue
        if section == "options":
            if len(words) != 2 or not words[1].lstrip("-").isdigit():
                err("syntax", "expected: <key> <integer>", lineno, tokens[0][1])
                continue
            doc.options[words[0]] = int(words[1])
            continue
        if words[0] == "generator":
            if section == "twist":
                err("syntax", "generators cannot be declared in twist", lineno, tokens[0][1])
                continue
            decl = _parse_generator(words, tokens, lineno, err, section)
            if decl is None:
                continue
            if decl.name in known:
                err("syntax", f"duplicate generator {decl.name!r}", lineno, tokens[1][1])
                continue
            known[decl.name] = decl
            (doc.base_generators if section == "base" else doc.fiber_generators).append(decl)
            continue
        if words[0] == "d":
            decl = _parse_differential(words, tokens, lineno, err, known, section)
            if decl is None:
                continue
            if section == "base":
                doc.base_differentials.append(decl)
            elif section == "twist":
                doc.twist_differentials.append(decl)
            else:
                err("syntax", "differentials belong in base or twist", lineno, tokens[0][1])
            continue
        err("syntax", f"unknown statement {words[0]!r}", lineno, tokens[0][1])
    if section is not None:
        err("syntax", f"unterminated section {section!r}", len(text.splitlines()), 1)
    return doc


def _parse_generator(words, tokens, lineno, err, section) -> GeneratorDecl | None:
    if len(words) < 4 or words[2] != "degree" or not words[3].lstrip("-").isdigit():
        err("syntax", "expected: generator <name> degree <k> [truncate|stage <i>]",
            lineno, tokens[0][1])
        return None
    name = words[1]
    degree = int(words[3])
    if degree < 1:
        err("degree", f"generator {name!r} must have degree >= 1", lineno, tokens[3][1])
        return None
    truncation = stage = None
    rest = words[4:]
    if rest:
        if len(rest) != 2 or not rest[1].isdigit():
            err("syntax", "expected: truncate <p> or stage <i>", lineno, tokens[4][1])
            return None
        if rest[0] == "truncate":
            if section != "base":
                err("syntax", "truncate applies to base generators", lineno, tokens[4][1])
                return None
            if degree % 2 == 1:
                err("degree", "truncation requires an even generator", lineno, tokens[4][1])
                return None
            truncation = int(rest[1])
        elif rest[0] == "stage":
            if section != "fiber":
                err("syntax", "stage applies to fiber generators", lineno, tokens[4][1])
                return None
            stage = int(rest[1])
        else:
            err("syntax", f"unknown modifier {rest[0]!r}", lineno, tokens[4][1])
            return None
    return GeneratorDecl(name, degree, truncation, stage, lineno)


def _parse_differential(words, tokens, lineno, err, known, section) -> DiffDecl | None:
    if len(words) < 4 or words[2] != "=":
        err("syntax", "expected: d <name> = <poly>", lineno, tokens[0][1])
        return None
    name = words[1]
    if name not in known:
        err("unknown-generator", f"{name!r} is not declared", lineno, tokens[1][1])
        return None
    rhs = list(zip(words[3:], (c for _, c in tokens[3:])))
    if [w for w, _ in rhs] == ["0"]:
        return DiffDecl(name, [], lineno, tokens[1][1])
    terms: list[tuple[Fraction, list[tuple[str, int]]]] = []
    coeff = Fraction(1)
    sign = Fraction(1)
    factors: list[tuple[str, int]] = []
    started = False

    def flush(col):
        nonlocal coeff, sign, factors, started
        if not started:
            err("syntax", "empty term", lineno, col)
        else:
            terms.append((sign * coeff, factors))
        coeff, sign, factors, started = Fraction(1), Fraction(1), [], False

    for w, col in rhs:
        if w == "+":
            flush(col)
            continue
        if w == "-":
            if not started and not terms:
                sign = Fraction(-1)  # leading minus
            else:
                flush(col)
                sign = Fraction(-1)
            continue
        if RATIONAL.match(w):
            coeff = coeff * Fraction(w)
            started = True
            continue
        if NAME.match(w):
            if "^" in w:
                base_name, exp_s = w.split("^")
                exp = int(exp_s)
            else:
                base_name, exp = w, 1
            if base_name not in known:
                err("unknown-generator", f"{base_name!r} is not declared", lineno, col)
                return None
            factors.append((base_name, exp))
            started = True
            continue
        err("syntax", f"cannot parse token {w!r}", lineno, col)
        return None
    flush(tokens[-1][1])
    return DiffDecl(name, terms, lineno, tokens[1][1])
