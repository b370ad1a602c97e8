import io
import json
import os
import subprocess
import sys

import jsonschema
import pytest

from norm1lab.cli import load_schema, run

GOLDEN = os.path.join(os.path.dirname(__file__), "golden")


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    status = run(list(argv), out, err)
    return status, out.getvalue(), err.getvalue()


def call_json(*argv):
    status, text, err = call(*argv, "--format", "json")
    assert status == 0, err
    return json.loads(text)


def test_qz_kernels_golden():
    status, text, _ = call("qz-kernels", "--p", "3")
    assert status == 0
    with open(os.path.join(GOLDEN, "qz_kernels_p3.md"), encoding="utf-8") as fh:
        assert text == fh.read()


def test_sha_empty_places():
    doc = call_json("sha", "--p", "3", "--stabilizer", "a", "--places", "")
    assert doc["sha"]["factors"] == [3]
    assert doc["A"]["factors"] == []
    assert doc["tamagawa"] == 1
    assert doc["case"] == "2-II"


def test_sha_markdown_and_generators():
    status, text, _ = call("sha", "--p", "3", "--places", "K0;gens:0,1,0/0,0,1")
    assert status == 0
    assert "case: 1-I" in text and "tau(T) = 9" in text


def test_cohomology_full_group_chevalley_module():
    status, text, _ = call("cohomology", "--p", "3", "--subgroup", "Full", "--coeff", "J", "--degree", "2", "--stabilizer", "a")
    assert status == 0
    assert text.strip().endswith("= Z/3 + Z/3")


@pytest.mark.parametrize("argv, schema", [
    (("info", "--p", "5"), "info"),
    (("qz-kernels", "--p", "5"), "table"),
    (("jg-kernels", "--p", "3", "--stabilizer", "a"), "table"),
    (("cohomology", "--subgroup", "K0", "--coeff", "ZGH", "--degree", "2"), "cohomology"),
    (("sha", "--places", "K0;K3"), "sha_report"),
    (("sweep", "--stabilizer", "a"), "sweep"),
])
def test_json_output_matches_schema(argv, schema):
    doc = call_json(*argv)
    jsonschema.validate(doc, load_schema(schema))


def test_info_lists_all_classes():
    doc = call_json("info", "--p", "7")
    assert len(doc["classes"]) == 2 * 7 + 5
    assert doc["order"] == 343


def test_usage_errors_exit_one():
    assert call("qz-kernels", "--p", "4")[0] == 1
    assert call("sha", "--places", "K9")[0] == 1
    assert call("cohomology", "--subgroup", "K0", "--coeff", "Q", "--degree", "1")[0] == 1
    assert call("cohomology", "--subgroup", "K0", "--coeff", "Z", "--degree", "-1")[0] == 1
    assert call()[0] == 1
    assert call("frobnicate")[0] == 1


def test_assertion_failures_exit_two(monkeypatch):
    from norm1lab import selftest
    from norm1lab.selftest import Check

    monkeypatch.setattr(selftest, "run_selftest", lambda level: [Check("forced", False, "x", 0.0)])
    status, text, _ = call("selftest")
    assert status == 2 and "FAIL" in text


def test_selftest_quick_passes():
    doc = call_json("selftest", "--level", "quick")
    assert doc["passed"], [c for c in doc["checks"] if not c["passed"]]
    jsonschema.validate(doc, load_schema("selftest"))


def test_output_is_deterministic():
    a = call("sha", "--p", "3", "--places", "K1;H2", "--format", "json")
    b = call("sha", "--p", "3", "--places", "K1;H2", "--format", "json")
    assert a == b


def test_cache_round_trip(tmp_path):
    cache = str(tmp_path / "cache")
    first = call("jg-kernels", "--stabilizer", "a", "--cache", cache)
    assert len(os.listdir(cache)) == 1
    second = call("jg-kernels", "--stabilizer", "a", "--cache", cache)
    assert first == second
    # a different request gets its own entry
    call("jg-kernels", "--stabilizer", "1", "--cache", cache)
    assert len(os.listdir(cache)) == 2


def test_plot_dir(tmp_path):
    d = tmp_path / "figs"
    assert call("jg-kernels", "--stabilizer", "a", "--plot-dir", str(d))[0] == 0
    assert call("sweep", "--stabilizer", "1", "--plot-dir", str(d))[0] == 0
    names = sorted(os.listdir(d))
    assert names == ["kernels_p3_jga.png", "sweep_p3_H1.png"]
    for n in names:
        with open(d / n, "rb") as fh:
            assert fh.read(8) == b"\x89PNG\r\n\x1a\n"


def test_dumps(tmp_path):
    status, _, _ = call("cohomology", "--subgroup", "H0", "--coeff", "J", "--degree", "2",
                        "--dump-lattices", str(tmp_path / "lat"), "--dump-cocycles", str(tmp_path / "coc"),
                        "--dump-matrices", str(tmp_path / "mat"))
    assert status == 0
    with open(tmp_path / "lat" / "J_H0_p3.json") as fh:
        lat = json.load(fh)
    assert lat["rank"] == 8 and "a" in lat["generators"]
    cocycles = os.listdir(tmp_path / "coc")
    assert len(cocycles) == 2
    with open(tmp_path / "coc" / sorted(cocycles)[0]) as fh:
        assert json.load(fh)["degree"] == 2
    assert sorted(os.listdir(tmp_path / "mat")) == ["d1_H0_J.json", "d2_H0_J.json"]


def test_budget_error_names_limit():
    env = dict(os.environ, NORM1_BUDGET="100")
    proc = subprocess.run(
        [sys.executable, "-m", "norm1lab.cli", "cohomology", "--subgroup", "G", "--coeff", "Z", "--degree", "2"],
        capture_output=True, text=True, env=env,
    )
    assert proc.returncode == 1
    assert "budget exceeded" in proc.stderr and "100" in proc.stderr
