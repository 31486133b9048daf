from __future__ import annotations

import io
import json

from cogmaplint.cli import CliConfig, run_lint
from cogmaplint.model import Code

from conftest import fixture_args, run_cli


def test_lint_fixture_text():
    r = run_cli("lint", *fixture_args())
    assert r.code == 1
    assert r.out.splitlines()[-1].endswith("info(s)")
    assert "error[R4-CYCLE]" in r.out


def test_lint_json_is_deterministic():
    a = run_cli("lint", "--format", "json", *fixture_args())
    b = run_cli("lint", "--format", "json", *fixture_args())
    assert a.out == b.out and a.code == 1
    doc = json.loads(a.out)
    assert len(doc["inputs"]) == 5 and all(i["digest"].startswith("sha256:") for i in doc["inputs"])


def _write(tmp_path, spec, rows="", ents="1,a,c\n2,b,c\n"):
    (tmp_path / "m.csv").write_text("index,text_entity,cluster\n" + ents)
    (tmp_path / "r.csv").write_text("cause,effect,cluster\n" + rows)
    (tmp_path / "s.cdsl").write_text(spec)
    return ["--map", str(tmp_path / "m.csv"), "--relations", str(tmp_path / "r.csv"), "--spec", str(tmp_path / "s.cdsl")]


CLEAN = 'variable A { value on: "a" }\nvariable B { value on: "b" }\n'


def test_exit_codes(tmp_path):
    args = _write(tmp_path, CLEAN, "a,b,c\n")
    assert run_cli("lint", *args).code == 0
    args = _write(tmp_path, CLEAN, "a,b,c\n", "1,a,c\n2,b,c\n3,ab,c\n")
    assert run_cli("lint", *args).code == 0
    assert run_cli("lint", "--warnings-as-errors", *args).code == 1
    args = _write(tmp_path, CLEAN, "a,b,c\nb,a,c\n")
    assert run_cli("lint", *args).code == 1


def test_usage_and_parse_errors(tmp_path):
    args = _write(tmp_path, "variable A {\n  value on: oops\n}\n")
    r = run_cli("lint", *args)
    assert r.code == 2 and "s.cdsl:2:13:" in r.err
    r = run_cli("lint", "--map", "nope.csv", "--relations", "nope.csv", "--spec", "nope.cdsl")
    assert r.code == 2 and "nope.csv" in r.err
    assert run_cli("lint").code == 2
    assert run_cli("lint", *args, "--max-path-len", "2").code == 2
    args = _write(tmp_path, CLEAN)
    (tmp_path / "r.csv").write_text("cause,effect\n")
    r = run_cli("lint", *args)
    assert r.code == 2 and "r.csv:1" in r.err


def test_threshold_override(tmp_path):
    args = _write(tmp_path, 'variable A { value on: "x y z" }\nvariable B { value on: "x y w" }\n', ents="1,x y z,c\n2,x y w,c\n")
    assert "R1-NEARDUP" in run_cli("lint", *args).out
    assert "R1-NEARDUP" not in run_cli("lint", "--near-dup-threshold", "0.7", *args).out


def test_export(tmp_path):
    r = run_cli("export", "--dot", "-", *fixture_args())
    assert r.code == 0 and '"Abandoned Housing" [shape=box, style=dashed];' in r.out
    target = tmp_path / "d.json"
    assert run_cli("export", "--json", str(target), *fixture_args()).code == 0
    lint_with = run_cli("lint", "--diagram", str(target), *fixture_args())
    assert lint_with.code == 1
    assert lint_with.out == run_cli("lint", *fixture_args()).out


def test_paths_and_unknown_node():
    r = run_cli("paths", "--from", "Vacancy", "--to", "Infrastructure", *fixture_args())
    assert r.code == 0
    assert "Vacancy -> Abandoned Housing -> Infrastructure\t[artificial-causal,artificial-causal]" in r.out
    assert run_cli("paths", "--from", "Nowhere", *fixture_args()).code == 2


def test_suggest_splits():
    r = run_cli("suggest-splits", *fixture_args())
    assert r.code == 0
    assert r.out.startswith("deny Vacancy -> Infrastructure:\n  path Vacancy -> Abandoned Housing -> Infrastructure\n")
    assert "reclassify Abandoned Housing" in r.out
    assert r.out.endswith("1 transitivity finding(s)\n")


def test_synth_then_lint(tmp_path):
    plants = ",".join(f"{c.value}=1" for c in Code if c is not Code.ALIAS_CHAIN)
    r = run_cli("synth", "--seed", "5", "--vars", "4", "--plant", plants, "-o", str(tmp_path))
    assert r.code == 0
    args = ["--map", str(tmp_path / "map.csv"), "--relations", str(tmp_path / "relations.csv"), "--spec", str(tmp_path / "spec.cdsl")]
    out = json.loads(run_cli("lint", "--format", "json", "--diagram", str(tmp_path / "diagram.json"), *args).out)
    ledger = json.loads((tmp_path / "ledger.json").read_text())
    for plant in ledger["plants"]:
        assert any(d["code"] == plant["code"] and set(d["subjects"]) & set(plant["subjects"]) for d in out["diagnostics"]), plant


def test_synth_alias_chain_spec_is_rejected(tmp_path):
    run_cli("synth", "--seed", "1", "--vars", "3", "--plant", "ALIAS-CHAIN=1", "-o", str(tmp_path))
    args = ["--map", str(tmp_path / "map.csv"), "--relations", str(tmp_path / "relations.csv"), "--spec", str(tmp_path / "spec.cdsl")]
    r = run_cli("lint", *args)
    assert r.code == 2 and "alias chain" in r.err


def test_cycle_truncation_note():
    argv = fixture_args()
    config = CliConfig(
        map_paths=(argv[1], argv[5]),
        relations_paths=(argv[3], argv[7]),
        spec_path=argv[-1],
        cycle_limit=1,
    )
    out, err = io.StringIO(), io.StringIO()
    assert run_lint(config, out, err) == 1
    assert "truncated" in err.getvalue()
    assert out.getvalue().count("R4-CYCLE") == 1
