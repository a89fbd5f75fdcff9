import os
import random
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from derlie.dsl import parse_model

MODELS_DIR = Path(__file__).parent.parent / "models"

SEED = int(os.environ.get("TEST_SEED", random.SystemRandom().randrange(2**32)))


def pytest_report_header(config):
    return f"randomized-model seed: {SEED} (set TEST_SEED to reproduce)"


def pytest_terminal_summary(terminalreporter):
    """One PASS/FAIL line per acceptance criterion at the end of the run."""
    verdicts = {}
    for outcome in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(outcome, []):
            name = rep.nodeid.rsplit("::", 1)[-1]
            if name.startswith("test_criterion_") and getattr(rep, "when", "call") in (
                "call",
                "setup",
            ):
                parts = name.split("_")
                num = int(parts[2])
                label = " ".join(parts[3:])
                if outcome == "passed":
                    verdicts.setdefault(num, ("PASS", label))
                else:
                    verdicts[num] = ("FAIL", label)
    for num in sorted(verdicts):
        verdict, label = verdicts[num]
        terminalreporter.write_line(f"{verdict} criterion {num}: {label}")


def load_model(name: str):
    doc = parse_model((MODELS_DIR / f"{name}.dgl").read_text())
    assert doc.ok, [str(d) for d in doc.diagnostics]
    return doc.to_model().validated()


def fixture_names() -> list[str]:
    return sorted(p.stem for p in MODELS_DIR.glob("*.dgl"))


@pytest.fixture(scope="session")
def rng():
    return random.Random(SEED)


@pytest.fixture(scope="session")
def twisted_product_model():
    return load_model("s3s3_s5s7_twisted")


@pytest.fixture(scope="session")
def untwisted_product_model():
    return load_model("s3s3_s5s7_untwisted")


@pytest.fixture(scope="session")
def fixture_models():
    return {name: load_model(name) for name in fixture_names()}


@pytest.fixture(scope="session")
def random_models():
    from oracles import random_model

    gen = random.Random(SEED)
    return [random_model(gen) for _ in range(25)]
