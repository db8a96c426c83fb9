from __future__ import annotations

import io
import json
from pathlib import Path

import pytest

from clusterzeta.cli import (
    EXIT_OK,
    EXIT_USAGE,
    EXIT_VERDICT,
    iter_inputs,
    parse_cluster_file,
    render_cluster_file,
    run,
)
from clusterzeta.constellation import random_idealistic_cluster
from clusterzeta.errors import ClusterSyntaxError, LabelClash, OrderViolation
from clusterzeta.fixtures import FIXTURES, fixture

GOLDEN_DIR = Path(__file__).parent / "golden"

# (golden file stem, fixture, command line after the subcommand's file argument)
GOLDEN_CASES = [
    ("info_five_point", "five_point", ["info"]),
    ("chi_chain_3_3", "chain_3_3", ["chi"]),
    ("classify_shared_candidate", "shared_candidate", ["classify"]),
    ("zeta_single_m2", "single_m2", ["zeta"]),
    ("zeta_r2_single_m2", "single_m2", ["zeta", "--r", "2"]),
    ("poles_shared_candidate", "shared_candidate", ["poles"]),
    ("monodromy_five_point", "five_point", ["monodromy"]),
    ("check_shared_candidate", "shared_candidate", ["check"]),
    ("ideal_five_point", "five_point", ["ideal", "--general", "1"]),
    ("validate_five_point", "five_point", ["validate"]),
]


def invoke(argv, stdin_text: str | None = None, monkeypatch=None) -> tuple[int, str, str]:
    out, err = io.StringIO(), io.StringIO()
    if stdin_text is not None:
        monkeypatch.setattr("sys.stdin", io.StringIO(stdin_text))
    code = run(argv, stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def cluster_file(tmp_path):
    def write(name_or_text: str) -> str:
        text = FIXTURES.get(name_or_text, name_or_text)
        path = tmp_path / "cluster.txt"
        path.write_text(text, encoding="utf-8")
        return str(path)

    return write


# -- cluster files ---------------------------------------------------------------------------


def test_parse_five_point_file(five_point):
    text = "# the five-point example\n1 - - 3\n2 1 1 2\n\n3 1 3 1\n4 2 1 1\n5 2 2 1"
    assert parse_cluster_file(text) == five_point


def test_parse_single_point():
    cl = parse_cluster_file("1 - - 2")
    assert cl.r == 1 and cl.m(1) == 2


@pytest.mark.parametrize(
    "text, error, line",
    [
        ("1 - - 3\n2 1 1 2\n3 1 1 1", LabelClash, 3),
        ("1 - - 3\n3 1 1 2", OrderViolation, 2),
        ("1 - - 3\n2 2 1 2", OrderViolation, 2),
        ("1 1 1 3", OrderViolation, 1),
        ("1 - - 3\n2 - - 1", OrderViolation, 2),
        ("1 - - 3\n2 1 4 1", ClusterSyntaxError, 2),
        ("1 - - x", ClusterSyntaxError, 1),
        ("1 - - -1", ClusterSyntaxError, 1),
        ("1 - 2 3", ClusterSyntaxError, 1),
        ("1 - -", ClusterSyntaxError, 1),
        ("# nothing\n", ClusterSyntaxError, 0),
    ],
)
def test_parse_errors_carry_line_numbers(text, error, line):
    with pytest.raises(error) as info:
        parse_cluster_file(text)
    assert info.value.line == line


def test_zero_multiplicity_parses():
    assert parse_cluster_file("1 - - 1\n2 1 1 0").multiplicities == (1, 0)


@pytest.mark.parametrize("seed", range(20))
def test_render_round_trip(seed):
    cl = random_idealistic_cluster(1 + seed % 9, seed)
    assert parse_cluster_file(render_cluster_file(cl)) == cl


def test_iter_inputs_plain_and_ndjson():
    assert list(iter_inputs("1 - - 2\n")) == [(1, "1 - - 2\n")]
    ndjson = '{"cluster": "1 - - 1\\n"}\n\n{"cluster": "1 - - 2\\n"}\n'
    assert list(iter_inputs(ndjson)) == [(1, "1 - - 1\n"), (3, "1 - - 2\n")]
    with pytest.raises(ClusterSyntaxError):
        list(iter_inputs('{"points": 3}\n'))


# -- commands and exit codes ------------------------------------------------------------------


def test_zeta_text_output(cluster_file):
    code, out, _ = invoke(["zeta", cluster_file("single_m2")])
    assert code == EXIT_OK and out == "(s+3)/((2s+3)(s+1))\n"


def test_json_flag_position_is_free(cluster_file):
    path = cluster_file("single_m2")
    before = invoke(["--json", "zeta", "--r", "2", path])
    after = invoke(["zeta", "--r", "2", path, "--json"])
    assert before == after
    assert json.loads(before[1])["zeta"]["text"] == "1/(2s+3)"


def test_stdin_input(monkeypatch):
    code, out, _ = invoke(["zeta"], FIXTURES["single_m1"], monkeypatch)
    assert code == EXIT_OK and out == "1/(s+1)\n"


def test_nine_point_check(cluster_file):
    code, out, _ = invoke(["--json", "check", cluster_file("shared_candidate")])
    report = json.loads(out)
    assert code == EXIT_OK and report["verdict"] is True
    assert {p["s0"] for p in report["poles"]} == {"-3/14", "-47/192", "-43/168", "-5/19", "-1"}


def test_non_idealistic_exits_1(cluster_file):
    path = cluster_file("1 - - 1\n2 1 1 2\n")
    code, _, err = invoke(["zeta", path])
    assert code == EXIT_VERDICT and "proximity inequality" in err
    code, out, _ = invoke(["--json", "validate", path])
    assert code == EXIT_VERDICT and json.loads(out)["idealistic"] is False


def test_zero_multiplicity_analysis_exits_1(cluster_file):
    code, _, err = invoke(["chi", cluster_file("1 - - 1\n2 1 1 0\n")])
    assert code == EXIT_VERDICT and "m_2 = 0" in err


def test_parse_error_exits_2(cluster_file):
    code, _, err = invoke(["info", cluster_file("1 - - 3\n2 1 1 2\n3 1 1 1\n")])
    assert code == EXIT_USAGE and "line 3" in err


def test_missing_file_exits_2(tmp_path):
    code, _, err = invoke(["info", str(tmp_path / "absent.txt")])
    assert code == EXIT_USAGE and "error" in err


def test_usage_errors_exit_2(capsys):
    assert run(["frobnicate"]) == EXIT_USAGE
    assert run(["random", "--points", "3"]) == EXIT_USAGE
    assert run(["random", "--points", "0", "--seed", "1"], io.StringIO(), io.StringIO()) == EXIT_USAGE


def test_bound_overflow_exits_1(cluster_file, monkeypatch):
    monkeypatch.setenv("CLUSTERZETA_BOUND_CEILING", "4")
    code, _, err = invoke(["ideal", cluster_file("five_point")])
    assert code == EXIT_VERDICT and "ceiling" in err


def test_monodromy_text(cluster_file):
    code, out, _ = invoke(["monodromy", cluster_file("five_point")])
    assert code == EXIT_OK
    assert "Phi_1^2 Phi_3^2 Phi_5^1" in out and "Milnor number: 10" in out


def test_ideal_general_element_is_deterministic(cluster_file):
    path = cluster_file("five_point")
    first = invoke(["--json", "ideal", path, "--general", "5"])
    assert first == invoke(["--json", "ideal", path, "--general", "5"])
    terms = json.loads(first[1])["ideal"]["general_element"]["terms"]
    assert len(terms) == 10


def test_selftest_passes():
    code, out, _ = invoke(["selftest", "--corpus", "20"])
    assert code == EXIT_OK
    assert out.count("PASS") == 6 and "FAIL" not in out


# -- random corpus and batch mode ----------------------------------------------------------------


def test_random_single_cluster_text():
    code, out, _ = invoke(["random", "--points", "4", "--seed", "3"])
    assert code == EXIT_OK
    assert parse_cluster_file(out) == random_idealistic_cluster(4, 3)


def test_random_batch_seeds_are_consecutive():
    _, out, _ = invoke(["random", "--points", "5", "--seed", "10", "--count", "3"])
    rows = [json.loads(line) for line in out.splitlines()]
    assert [r["seed"] for r in rows] == [10, 11, 12]
    assert all(parse_cluster_file(r["cluster"]) == random_idealistic_cluster(5, r["seed"]) for r in rows)


def test_random_to_check_pipeline(monkeypatch):
    _, corpus, _ = invoke(["random", "--points", "8", "--seed", "7", "--count", "100"])
    code, out, err = invoke(["--json", "check"], corpus, monkeypatch)
    assert code == EXIT_OK, err
    reports = [json.loads(line) for line in out.splitlines()]
    assert len(reports) == 100 and all(r["verdict"] for r in reports)


def test_batch_text_output_marks_each_input(monkeypatch):
    _, corpus, _ = invoke(["random", "--points", "3", "--seed", "1", "--count", "2"])
    _, out, _ = invoke(["zeta"], corpus, monkeypatch)
    assert out.startswith("# input 1: ok\n") and "# input 2: ok\n" in out


def test_batch_with_bad_cluster_exits_1(monkeypatch):
    lines = [json.dumps({"cluster": FIXTURES["single_m2"]}), json.dumps({"cluster": "1 - - 1\n2 1 1 2\n"})]
    code, out, err = invoke(["--json", "zeta"], "\n".join(lines) + "\n", monkeypatch)
    assert code == EXIT_VERDICT and "input 2" in err
    assert len(out.splitlines()) == 2


# -- golden JSON reports ---------------------------------------------------------------------------


def render_golden(name: str, args: list[str], tmp_path: Path) -> str:
    path = tmp_path / f"{name}.txt"
    path.write_text(FIXTURES[name], encoding="utf-8")
    command, *options = args
    code, out, err = invoke(["--json", command, str(path), *options])
    assert code == EXIT_OK, err
    return out


@pytest.mark.parametrize("stem, name, args", GOLDEN_CASES, ids=[c[0] for c in GOLDEN_CASES])
def test_golden_json(stem, name, args, tmp_path):
    out = render_golden(name, args, tmp_path)
    assert out == (GOLDEN_DIR / f"{stem}.json").read_text(encoding="utf-8")
    # output is deterministic and the JSON round-trips
    assert out == render_golden(name, args, tmp_path)
    payload = json.loads(out)
    assert json.loads(json.dumps(payload, sort_keys=True, indent=2) + "\n") == payload


def test_report_field_names(cluster_file):
    path = cluster_file("five_point")
    keys = {
        "info": "numerical_data",
        "chi": "strata",
        "zeta": "zeta",
        "poles": "poles",
        "monodromy": "monodromy",
        "classify": "classification",
        "ideal": "ideal",
        "check": "holomorphy",
    }
    for command, key in keys.items():
        code, out, _ = invoke(["--json", command, path])
        assert code == EXIT_OK and key in json.loads(out)


def test_rationals_are_strings_not_floats(cluster_file):
    _, out, _ = invoke(["--json", "poles", cluster_file("shared_candidate")])
    assert "." not in out
    payload = json.loads(out)
    assert all(isinstance(p["s0"], str) for p in payload["poles"])
    # sorted by |s0|, then denominator
    from fractions import Fraction

    values = [Fraction(p["s0"]) for p in payload["poles"]]
    assert values == sorted(values, key=lambda v: (abs(v), v.denominator))


def test_fixture_helper_uses_parser():
    assert fixture("single_m2") == parse_cluster_file("1 - - 2\n")
