from __future__ import annotations

import io
from dataclasses import dataclass
from importlib.resources import files

import pytest

from cogmaplint.cli import main

FIXTURES = files("cogmaplint") / "fixtures" / "urban_blight"


def fixture_args(narrative: bool = True) -> list[str]:
    args = ["--map", str(FIXTURES / "map.csv"), "--relations", str(FIXTURES / "relations.csv")]
    if narrative:
        args += ["--map", str(FIXTURES / "narrative_map.csv"), "--relations", str(FIXTURES / "narrative_relations.csv")]
    return args + ["--spec", str(FIXTURES / "spec.cdsl")]


@dataclass
class Run:
    code: int
    out: str
    err: str


def run_cli(*argv: str) -> Run:
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out, err)
    return Run(code, out.getvalue(), err.getvalue())


@pytest.fixture
def cli():
    return run_cli


def pytest_terminal_summary(terminalreporter):
    module = __import__("sys").modules.get("test_acceptance")
    if module is not None and module.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in module.lines():
            terminalreporter.write_line(line)
