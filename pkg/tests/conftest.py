from __future__ import annotations

import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from intmodel.corpus import ex44_model, generate_corpus  # noqa: E402
from intmodel.fincat import chain  # noqa: E402
from intmodel.integral import build_integral  # noqa: E402
from intmodel.modelstruct import trivial_model  # noqa: E402


@pytest.fixture(scope="session")
def corpus():
    return generate_corpus()


@pytest.fixture(scope="session")
def corpus_integrals(corpus):
    return [(inst, build_integral(inst.functor, "require", check_axioms=False)) for inst in corpus]


@pytest.fixture(scope="session")
def ex44():
    return ex44_model()


@pytest.fixture(scope="session")
def triv_i1():
    return trivial_model(chain(2, "I1"), "triv(I1)")


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for n in sorted(results):
            terminalreporter.write_line(results[n])
