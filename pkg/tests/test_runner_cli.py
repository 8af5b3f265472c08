import json
import os
import subprocess
import sys

import pytest

from strongmorse import fileio
from strongmorse.cli import main
from strongmorse.runner import (InputNotFound, RunConfig, VerificationFailure,
                                aggregate_statistics, bench, replay_result,
                                rows_to_csv, rows_to_wide_csv, run)

from conftest import DATA_DIR

DUNCE = str(DATA_DIR / "dunce_hat.txt")
BD3 = str(DATA_DIR / "boundary_delta3.txt")


def test_run_config_validation():
    with pytest.raises(ValueError):
        RunConfig(DUNCE, "strong-internal", 0, iterations=0)
    with pytest.raises(ValueError):
        RunConfig(DUNCE, "no-such-method", 0)


def test_run_missing_input():
    with pytest.raises(InputNotFound):
        run(RunConfig("does_not_exist.txt", "strong-core", 0))


def test_run_report_shape():
    report = run(RunConfig(DUNCE, "strong-internal", 3, iterations=4, verify=True))
    assert len(report.outcomes) == 4
    assert report.input_size == 49
    assert report.all_verified
    doc = report.to_json()
    assert doc["provenance"]["method"] == "strong-internal"
    assert doc["provenance"]["iterations"] == 4
    assert len(doc["iterations"]) == 4
    assert doc["aggregate"]["mean_size"] == report.mean_size


def test_run_strong_core_constant_on_boundary():
    report = run(RunConfig(BD3, "strong-core", 1, iterations=5))
    assert [o.size for o in report.outcomes] == [14] * 5


def test_canonical_reports_byte_identical():
    a = run(RunConfig(DUNCE, "weak-then-strong", 5, iterations=3, verify=True))
    b = run(RunConfig(DUNCE, "weak-then-strong", 5, iterations=3, verify=True))
    assert fileio.dumps(a.to_json(canonical=True)) == fileio.dumps(b.to_json(canonical=True))


def test_worker_pool_matches_sequential():
    sequential = run(RunConfig(DUNCE, "strong-internal", 7, iterations=4))
    os.environ["STRONGMORSE_WORKERS"] = "2"
    try:
        pooled = run(RunConfig(DUNCE, "strong-internal", 7, iterations=4))
    finally:
        del os.environ["STRONGMORSE_WORKERS"]
    assert fileio.dumps(sequential.to_json(canonical=True)) == \
        fileio.dumps(pooled.to_json(canonical=True))


def test_aggregate_statistics_examples():
    report = run(RunConfig(DUNCE, "strong-internal", 0, iterations=2))
    rows = aggregate_statistics([report])
    assert rows[0]["mean_size"] == sum(o.size for o in report.outcomes) / 2
    single = run(RunConfig(BD3, "strong-core", 0, iterations=1))
    rows = aggregate_statistics([single])
    assert rows[0]["mean_size"] == 14
    with pytest.raises(ValueError):
        aggregate_statistics([])


def test_csv_layouts():
    reports = [run(RunConfig(BD3, m, 0, iterations=2))
               for m in ("strong-core", "strong-internal")]
    rows = aggregate_statistics(reports)
    text = rows_to_csv(rows)
    lines = text.strip().splitlines()
    assert lines[0] == "name,original_size,method,mean_size,mean_time_sec"
    assert len(lines) == 3
    wide = rows_to_wide_csv(rows, canonical=True)
    wlines = wide.strip().splitlines()
    assert wlines[0] == "name,original_size,strong-core,strong-internal"
    assert wlines[1].startswith("boundary_delta3,14,14.00,8.00")


def test_bench_manifest(tmp_path):
    manifest = {"seed": 1, "iterations": 2, "verify": True,
                "inputs": [DUNCE], "methods": ["strong-core", "strong-internal"]}
    reports = bench(manifest, base_dir=tmp_path)
    assert len(reports) == 2
    assert all(r.all_verified for r in reports)


def test_replay_result_function():
    cx, _ = fileio.load_complex(DUNCE)
    report = run(RunConfig(DUNCE, "strong-internal", 2, iterations=1))
    assert replay_result(cx, report.outcomes[0].result)


# -- CLI ---------------------------------------------------------------------


def test_cli_homology_output(capsys):
    assert main(["homology", "--input", BD3]) == 0
    assert capsys.readouterr().out.strip() == '{"betti":[1,0,1],"torsion":[[],[],[]]}'


def test_cli_reduce_csv(capsys):
    code = main(["reduce", "--input", BD3, "--method", "strong-core",
                 "--seed", "4", "--iterations", "5", "--format", "csv"])
    assert code == 0
    out = capsys.readouterr().out.strip().splitlines()
    assert out[1].startswith("boundary_delta3,14,strong-core,14.00")


def test_cli_reduce_verify_and_replay(tmp_path, capsys):
    out = tmp_path / "report.json"
    code = main(["reduce", "--input", DUNCE, "--method", "weak-then-strong",
                 "--seed", "6", "--iterations", "2", "--verify", "--out", str(out)])
    assert code == 0
    code = main(["replay", "--trace", str(out), "--input", DUNCE])
    assert code == 0
    # tamper with the stored poset: replay must fail
    doc = json.loads(out.read_text())
    doc["iterations"][0]["result"]["critical_poset"]["covers"] = []
    tampered = tmp_path / "tampered.json"
    tampered.write_text(json.dumps(doc))
    assert main(["replay", "--trace", str(tampered), "--input", DUNCE]) == 1


def test_cli_reduce_canonical_byte_identical(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for target in (a, b):
        code = main(["reduce", "--input", DUNCE, "--method", "strong-internal",
                     "--seed", "8", "--iterations", "3", "--canonical",
                     "--out", str(target)])
        assert code == 0
    assert a.read_bytes() == b.read_bytes()


def test_cli_validate(tmp_path, capsys):
    good = tmp_path / "good.json"
    good.write_text('{"pairs": [[[1],[1,2]]]}')
    assert main(["validate", "--input", BD3, "--matching", str(good)]) == 0
    multi = tmp_path / "multi.json"
    multi.write_text('{"pairs": [[[0],[0,1]],[[2],[1,2]]]}')
    assert main(["validate", "--input", BD3, "--matching", str(multi)]) == 0
    capsys.readouterr()
    # the alternating cycle around a hollow triangle is rejected
    bad = tmp_path / "bad.json"
    bad.write_text('{"pairs": [[[0],[0,1]],[[1],[1,2]],[[2],[0,2]]]}')
    circle = tmp_path / "circle.txt"
    circle.write_text("[[0,1],[1,2],[0,2]]")
    assert main(["validate", "--input", str(circle), "--matching", str(bad)]) == 1
    out = json.loads(capsys.readouterr().out)
    assert not out["acyclic"] and out["witness_cycle"]


def test_cli_bench(tmp_path, capsys):
    manifest = tmp_path / "m.json"
    manifest.write_text(json.dumps({
        "seed": 0, "iterations": 2,
        "inputs": [DUNCE, BD3],
        "methods": ["strong-core", "weak-core", "strong-internal"]}))
    assert main(["bench", "--manifest", str(manifest)]) == 0
    out = capsys.readouterr().out.strip().splitlines()
    assert len(out) == 1 + 6  # header + 2 inputs x 3 methods
    assert main(["bench", "--manifest", str(manifest), "--wide"]) == 0
    wide = capsys.readouterr().out.strip().splitlines()
    assert len(wide) == 1 + 2


def test_cli_exit_codes(tmp_path, capsys):
    assert main(["homology", "--input", "missing.txt"]) == 2
    broken = tmp_path / "broken.txt"
    broken.write_text("[[1,2],[2]")
    assert main(["homology", "--input", str(broken)]) == 2
    with pytest.raises(SystemExit) as exc:
        main(["reduce", "--input", BD3, "--method", "bogus", "--seed", "1"])
    assert exc.value.code == 2


def test_run_inline_triangle(tmp_path):
    path = tmp_path / "triangle.txt"
    path.write_text("[[0,1,2]]")
    for method in ("strong-core", "weak-core", "strong-internal", "weak-then-strong"):
        report = run(RunConfig(str(path), method, 0))
        assert [o.size for o in report.outcomes] == [1]


def test_cli_reduce_cone_to_point(capsys):
    code = main(["reduce", "--input", str(DATA_DIR / "cone_dunce_hat.txt"),
                 "--method", "strong-core", "--seed", "2", "--format", "csv"])
    assert code == 0
    out = capsys.readouterr().out.strip().splitlines()
    assert out[1].startswith("cone_dunce_hat,99,strong-core,1.00")


def test_cli_entry_point_subprocess():
    proc = subprocess.run([sys.executable, "-m", "strongmorse.cli",
                           "homology", "--input", BD3],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.strip() == '{"betti":[1,0,1],"torsion":[[],[],[]]}'
