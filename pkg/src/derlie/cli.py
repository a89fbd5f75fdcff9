"""Command-line interface.

Commands: homology, brackets, hspace, classify-su, cochains, verify-psi,
report.  Exit codes: 0 success, 1 diagnostics (bad input), 2 internal
invariant failure.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from . import classify as cls
from . import cochains as ce
from . import correspondence as corr
from . import derivations as der
from .dsl import ModelSyntaxError, parse_model
from .linalg import ContainmentViolation
from .model import RelativeModel
from .reports import ReportDocument, emit, rat


def _load_model(path: str, errout) -> tuple[RelativeModel | None, int]:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        print(f"error: {exc}", file=errout)
        return None, 1
    doc = parse_model(text)
    if not doc.ok:
        for d in doc.diagnostics:
            print(f"{path}:{d}", file=errout)
        return None, 1
    model = doc.to_model()
    violations = model.validate()
    if violations:
        for v in violations:
            print(f"{path}: invalid model: {v}", file=errout)
        return None, 1
    return model, 0


def _max_degree(args, model: RelativeModel | None) -> int:
    if args.max_degree is not None:
        return args.max_degree
    if model is not None:
        return model.default_max_degree()
    return 10


def _homology_result(model: RelativeModel, n: int) -> dict:
    report = der.homology(model, n)
    return {
        "ranks": {str(k): h.rank for k, h in sorted(report.by_degree.items()) if h.rank},
        "representatives": {
            str(k): [str(r) for r in h.representatives]
            for k, h in sorted(report.by_degree.items())
            if h.rank
        },
        "pi_ranks": {str(k): r for k, r in cls.homotopy_report(model, n).items() if r},
    }


def _bracket_result(model: RelativeModel, n: int) -> dict:
    report = der.homology(model, n)
    table = der.homology_bracket(model, n, report)
    constants = {}
    for (p, i, q, j), coords in sorted(table.entries.items()):
        if coords:
            constants[f"[{p}.{i},{q}.{j}]"] = {
                str(k): rat(c) for k, c in sorted(coords.items())
            }
    return {
        "ranks": {str(k): h.rank for k, h in sorted(report.by_degree.items()) if h.rank},
        "structure_constants": constants,
        "abelian": table.is_abelian(),
    }


def _hspace_result(model: RelativeModel, n: int) -> dict:
    v = cls.hspace_decision(model, n)
    out = {
        "verdict": v.verdict,
        "bracket_abelian": v.bracket_abelian,
        "coformal_certified": v.coformal_certified,
    }
    if not v.coformal_certified and v.bracket_abelian:
        out["caveat"] = (
            "bracket-level only: higher operations beyond the binary "
            "bracket are not examined"
        )
    if v.witness:
        out["witness"] = {
            "theta1": v.witness[0],
            "theta2": v.witness[1],
            "bracket": v.witness[2],
        }
    return out


def _classify_result(n: int, m: int, max_degree: int) -> dict:
    rep = cls.classify_su_family(n, m, max_degree)
    return {
        "count": rep.count,
        "example_formula_value": rep.literal_example_count,
        "example_formula_disagrees": rep.formula_disagrees,
        "first_nonzero_invariants": dict(sorted(rep.invariants.items())),
        "merged_pairs": [
            {"kept": a, "merged": b, "certification": c} for a, b, c in rep.merges
        ],
        "discriminators": [
            {
                "pair": [l1, l2],
                "homology_degree": d,
                "ranks": [r1, r2],
            }
            for l1, l2, d, r1, r2 in rep.discriminators
        ],
        "representatives": sorted(rep.representatives),
    }


def _cochains_result(model: RelativeModel, n: int, use_homology: bool) -> dict:
    if use_homology:
        dgl = ce.dgl_from_homology(model, n)
    else:
        dgl = ce.dgl_from_derivation_complex(model, n)
    pres = ce.cochain_presentation(dgl, n + 1)
    check = ce.check_d_squared(pres, n + 1)
    return {
        "generators": [
            {"name": g.name, "degree": g.degree, "source": src}
            for g, src in zip(pres.algebra.generators, pres.source_names)
        ],
        "differential": {
            g.name: str(pres.differential.get(g.name, pres.algebra.zero()))
            for g in pres.algebra.generators
        },
        "d_squared_ok": check.ok,
        "pretty": pres.pretty(),
    }


def _verify_psi_result(model: RelativeModel, n: int) -> dict:
    rep = corr.verify_psi(model, n)
    return {
        "ok": rep.ok,
        "checked_degrees": rep.checked_degrees,
        "slice_dimensions": {str(k): v for k, v in sorted(rep.bijective_dims.items())},
        "failures": rep.failures,
    }


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="derlie",
        description="Derivation Lie algebra models for fibrewise "
        "self-equivalence classifying spaces",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, needs_model=True, **kw):
        p = sub.add_parser(name, **kw)
        if needs_model:
            p.add_argument("model", help="path to a .dgl model document")
        p.add_argument("--max-degree", type=int, default=None)
        p.add_argument("--format", choices=["json", "table"], default="json")
        return p

    add("homology", help="homology ranks of the derivation complex")
    add("brackets", help="structure constants on homology")
    add("hspace", help="rational H-space verdict at bracket level")
    p = add("classify-su", needs_model=False, help="classify SU(n)-bundles over CP^m")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p = add("cochains", help="cochain algebra presentation")
    p.add_argument("--homology", action="store_true",
                   help="present the homology Lie algebra instead of the full complex")
    add("verify-psi", help="verify the Hom-complex comparison map")
    add("report", help="full dossier")

    args = parser.parse_args(argv)
    out = sys.stdout
    model = None
    if args.command != "classify-su":
        model, code = _load_model(args.model, sys.stderr)
        if model is None:
            return code
    n = _max_degree(args, model)

    try:
        if args.command == "homology":
            result = _homology_result(model, n)
        elif args.command == "brackets":
            result = _bracket_result(model, n)
        elif args.command == "hspace":
            result = _hspace_result(model, n)
        elif args.command == "classify-su":
            n = args.max_degree or 2 * (2 * args.n - 1) + 2
            result = _classify_result(args.n, args.m, n)
        elif args.command == "cochains":
            result = _cochains_result(model, n, args.homology)
        elif args.command == "verify-psi":
            result = _verify_psi_result(model, n)
        elif args.command == "report":
            result = {
                "homology": _homology_result(model, n),
                "brackets": _bracket_result(model, n),
                "hspace": _hspace_result(model, n),
                "psi": _verify_psi_result(model, n),
                "cochains": _cochains_result(model, n, use_homology=False),
            }
        else:  # pragma: no cover
            parser.error(f"unknown command {args.command}")
    except (ContainmentViolation, RuntimeError) as exc:
        print(f"internal invariant failure: {exc}", file=sys.stderr)
        return 2

    inputs = {"command_line": [a for a in (argv or sys.argv[1:])]}
    if model is not None:
        inputs["model_file"] = args.model
    doc = ReportDocument(
        command=args.command, inputs=inputs, max_degree=n, result=result
    )
    out.buffer.write(emit(doc, args.format))
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
