import os

import pytest

from multigraded.cli.parse import parse_input, parse_text

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
CORPUS = os.path.join(ROOT, "testdata", "corpus")
GOLDEN = os.path.join(ROOT, "testdata", "golden")

# lines printed by the acceptance suite, shown again in the terminal summary
ACCEPTANCE_LINES = []


def corpus_module(name):
    return parse_input(os.path.join(CORPUS, name + ".mod")).modules[0]


def module_from_text(text):
    return parse_text(text).modules[0]


@pytest.fixture
def corpus_dir():
    return CORPUS


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
