import json

import pytest

from braidweight.cli import main, validate_result
from braidweight.curves import hopf_link, split_unlink, torus_link_2_4


@pytest.fixture()
def hopf_file(tmp_path):
    path = tmp_path / "hopf.json"
    hopf_link().save(str(path))
    return str(path)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_dims_table(capsys, tmp_path):
    code, out, _ = run(capsys, "dims", "--n", "3", "--parity", "even",
                       "--kmax", "3", "--cache-dir", str(tmp_path / "c"))
    assert code == 0
    assert "1 3 7 15" in out


def test_dims_n2_and_n4(capsys, tmp_path):
    code, out, _ = run(capsys, "dims", "--n", "2", "--parity", "even",
                       "--kmax", "4", "--cache-dir", str(tmp_path / "c"))
    assert code == 0 and "1 1 1 1 1" in out
    code, out, _ = run(capsys, "dims", "--n", "4", "--kmax", "2",
                       "--cache-dir", str(tmp_path / "c"))
    assert code == 0 and "1 6 25" in out


def test_dims_cache_rerun_identical(capsys, tmp_path):
    from braidweight.algebra import _BASIS_MEMO
    cache = str(tmp_path / "c")
    _BASIS_MEMO.clear()
    _, out1, _ = run(capsys, "dims", "--n", "3", "--kmax", "3",
                     "--cache-dir", cache)
    _BASIS_MEMO.clear()
    _, out2, _ = run(capsys, "dims", "--n", "3", "--kmax", "3",
                     "--cache-dir", cache)
    assert out1.splitlines()[-1] == out2.splitlines()[-1]
    assert "[cache hit]" in out2
    code, out, _ = run(capsys, "cache", "clear", "--cache-dir", cache)
    assert code == 0
    _BASIS_MEMO.clear()
    _, out3, _ = run(capsys, "dims", "--n", "3", "--kmax", "3",
                     "--cache-dir", cache)
    assert out3.splitlines()[-1] == out1.splitlines()[-1]


def test_nf_examples(capsys, tmp_path):
    cache = str(tmp_path / "c")
    code, out, _ = run(capsys, "nf", "[X12, X13+X23]", "--n", "3",
                       "--cache-dir", cache)
    assert code == 0 and out.strip() == "0"
    code, out, _ = run(capsys, "nf", "X12*X12", "--n", "2", "--cache-dir", cache)
    assert code == 0 and out.strip() == "X12*X12"
    code, out, _ = run(capsys, "nf", "[X12, X34]", "--n", "4",
                       "--cache-dir", cache)
    assert code == 0 and out.strip() == "0"


def test_nf_parse_error_exit_code(capsys, tmp_path):
    code, _, err = run(capsys, "nf", "X12 ++", "--n", "3",
                       "--cache-dir", str(tmp_path / "c"))
    assert code == 2
    assert "position" in err


def test_capacity_exit_code(capsys, tmp_path):
    code, _, err = run(capsys, "dims", "--n", "6", "--kmax", "12",
                       "--cache-dir", str(tmp_path / "c"))
    assert code == 4
    assert "capacity" in err.lower()


def test_closure_output_format(capsys):
    code, out, _ = run(capsys, "closure", "X12", "--n", "2", "--perm", "2 1")
    assert code == 0
    assert "circle 1:" in out and "chord:" in out
    from braidweight.circles import parse_diagram
    body = "\n".join(l for l in out.splitlines() if not l.startswith("#"))
    d = parse_diagram(body)
    assert d.circle_count == 1 and d.chord_count == 1


def test_decorated_nf_cli(capsys):
    code, out, _ = run(capsys, "decorated-nf", "[X12:a, X23:A + X13]",
                       "--n", "3", "--rank", "1")
    assert code == 0 and out.strip() == "0"
    code, out, _ = run(capsys, "decorated-nf", "X12:abA", "--n", "3",
                       "--rank", "2")
    assert code == 0 and out.strip() == "X12:abA"


def test_lk_json_record(capsys, hopf_file, tmp_path):
    out_path = tmp_path / "lk.json"
    code, _, _ = run(capsys, "lk", hopf_file, "--nodes", "48",
                     "--out", str(out_path))
    assert code == 0
    record = json.loads(out_path.read_text())
    assert validate_result(record)
    assert abs(abs(record["value"]) - 1.0) < 1e-3
    assert record["config"]["gl_nodes"] == 48


def test_lk_component_count_validation(capsys, tmp_path):
    path = tmp_path / "three.json"
    split_unlink(3, 10.0).save(str(path))
    code, _, err = run(capsys, "lk", str(path))
    assert code == 2
    assert "2-component" in err


def test_lk_missing_file(capsys):
    code, _, _ = run(capsys, "lk", "/nonexistent/link.json")
    assert code == 2


def test_singularity_exit_code(capsys, tmp_path):
    # identical components violate the embedding clearance
    path = tmp_path / "bad.json"
    link = hopf_link()
    text = link.to_json()
    data = json.loads(text)
    data["components"][1] = data["components"][0]
    path.write_text(json.dumps(data))
    code, _, err = run(capsys, "lk", str(path))
    assert code == 3
    assert "singularity" in err.lower()


def test_shuffle_test_cli(capsys, hopf_file):
    code, out, _ = run(capsys, "shuffle-test", hopf_file, "--nodes", "64")
    assert code == 0
    record = json.loads(out)
    assert validate_result(record)
    assert record["defect"] < 1e-6


def test_order2_cli_runs_small(capsys, tmp_path):
    path = tmp_path / "unlink3.json"
    split_unlink(3, 12.0).save(str(path))
    code, out, _ = run(capsys, "order2", str(path), "--nodes", "16",
                       "--mc-samples", "20000")
    assert code == 0
    record = json.loads(out)
    assert validate_result(record)
    assert abs(record["total"]) < record["error_budget"] + 1e-9


def test_json_records_roundtrip(capsys, hopf_file):
    code, out, _ = run(capsys, "lk", hopf_file, "--nodes", "32")
    record = json.loads(out)
    assert validate_result(record)
    assert json.loads(json.dumps(record)) == record


def test_validate_result_rejects_missing_config():
    with pytest.raises(ValueError):
        validate_result({"command": "lk", "value": 1.0})
    with pytest.raises(ValueError):
        validate_result({"command": "lk", "value": 1.0,
                         "config": {"gl_nodes": 4}})
