import json


from latintrav.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_construct_writes_text_grid(capsys, tmp_path):
    code, out, _ = run(capsys, "construct", "--family", "T", "--order", "12")
    assert code == 0
    lines = out.strip().split("\n")
    assert lines[0] == "12"
    assert len(lines) == 13
    path = tmp_path / "t12.txt"
    code, _, _ = run(capsys, "construct", "--family", "T", "--order", "12",
                     "-o", str(path))
    assert code == 0
    assert path.read_text().startswith("12\n")


def test_construct_L_by_m(capsys):
    code, out, _ = run(capsys, "construct", "--family", "L", "--m", "3")
    assert code == 0
    assert out.startswith("9\n")


def test_construct_domain_error_exit_2(capsys):
    code, _, err = run(capsys, "construct", "--family", "T", "--order", "13")
    assert code == 2
    assert "error" in err


def test_classify_exceptional_6(capsys):
    code, out, _ = run(capsys, "classify", "--family", "EX6", "--no-meta")
    assert code == 0
    data = json.loads(out)
    assert data["tau"] == 16
    assert data["hasTransversal"] is True


def test_classify_cayley_6(capsys):
    code, out, _ = run(capsys, "classify", "--family", "CAYLEY", "--order", "6",
                       "--no-meta")
    assert code == 0
    data = json.loads(out)
    assert data["tau"] == 36
    assert data["hasTransversal"] is False


def test_classify_square_file(capsys, tmp_path):
    path = tmp_path / "v10.txt"
    run(capsys, "construct", "--family", "V", "--order", "10", "-o", str(path))
    code, out, _ = run(capsys, "classify", str(path), "--no-meta")
    assert code == 0
    data = json.loads(out)
    assert data["tau"] == 34
    assert data["pinned"] == [[1, 0, 3]]


def test_classify_parse_error_exit_2(capsys, tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("2\n0 1\n0 1\n")
    code, _, err = run(capsys, "classify", str(path))
    assert code == 2
    assert "column" in err


def test_classify_no_meta_is_deterministic(capsys):
    _, out1, _ = run(capsys, "classify", "--family", "V", "--order", "10", "--no-meta")
    _, out2, _ = run(capsys, "classify", "--family", "V", "--order", "10", "--no-meta")
    assert out1 == out2
    _, with_meta, _ = run(capsys, "classify", "--family", "V", "--order", "10")
    assert "meta" in json.loads(with_meta)


def test_transversal_find_and_count(capsys):
    code, out, _ = run(capsys, "transversal", "find", "--family", "T",
                       "--order", "12", "--no-meta")
    assert code == 0
    assert json.loads(out)["found"] is True
    code, out, _ = run(capsys, "transversal", "count", "--family", "CAYLEY",
                       "--order", "3", "--no-meta")
    assert json.loads(out)["count"] == 3


def test_transversal_constraints_flags(capsys):
    code, out, _ = run(capsys, "transversal", "find", "--family", "T", "--order", "12",
                       "--require", "1,0,3", "--no-meta")
    data = json.loads(out)
    assert data["found"] and data["cols"][1] == 0
    code, out, _ = run(capsys, "transversal", "find", "--family", "T", "--order", "12",
                       "--forbid", "1,0", "--no-meta")
    assert json.loads(out)["found"] is False


def test_transversal_disjoint_pair(capsys):
    code, out, _ = run(capsys, "transversal", "disjoint-pair", "--family", "CAYLEY",
                       "--order", "5", "--no-meta")
    assert code == 0
    assert json.loads(out)["found"] is True


def test_pinned_command(capsys):
    code, out, _ = run(capsys, "pinned", "--family", "T", "--order", "12", "--no-meta")
    assert code == 0
    data = json.loads(out)
    assert data["certificate"]["valid"] is True
    assert data["floor"] == 2
    assert [e["entry"] for e in data["entries"]] == [[1, 0, 3], [2, 1, 4]]
    assert all(e["pinned"] for e in data["entries"])


def test_bounds_command(capsys):
    code, out, _ = run(capsys, "bounds", "--family", "U", "--order", "14", "--no-meta")
    assert code == 0
    data = json.loads(out)
    assert data["subsetOK"] is True
    assert data["tau"] == 88
    assert data["formulaValue"] == 70
    assert data["unionSize"] >= 70


def test_bounds_sets_only(capsys):
    code, out, _ = run(capsys, "bounds", "--family", "T", "--order", "96",
                       "--sets-only", "--no-meta")
    assert code == 0
    data = json.loads(out)
    assert data["subsetOK"] is None
    assert data["unionSize"] >= data["formulaValue"]


def test_blocks_command(capsys):
    code, out, _ = run(capsys, "blocks", "--m", "3", "--no-meta")
    assert code == 0
    data = json.loads(out)
    assert data["pass"] is True
    assert data["block22OK"] and data["block11OK"]


def test_table1_fast(capsys):
    code, out, _ = run(capsys, "table1", "--max-order", "12", "--no-meta")
    assert code == 0
    rows = json.loads(out)["rows"]
    assert rows[0] == {"label": "V10", "order": 10, "family": "V",
                       "lowerBound": 27, "tau": 34}
    assert rows[1]["label"] == "T12" and rows[1]["tau"] == 67


def test_classify_text_format(capsys):
    code, out, _ = run(capsys, "classify", "--family", "EX6", "--format", "text")
    assert code == 0
    assert "tau 16" in out


def test_table1_text_format(capsys):
    code, out, _ = run(capsys, "table1", "--max-order", "10", "--format", "text")
    assert code == 0
    assert "V10" in out and "27" in out and "34" in out


def test_table1_refuses_large_without_long(capsys):
    code, _, err = run(capsys, "table1", "--max-order", "18")
    assert code == 2
    assert "--long" in err


def test_table1_rejects_bad_order(capsys):
    code, _, _ = run(capsys, "table1", "--max-order", "11")
    assert code == 2


def test_budget_exhaustion_exit_3(capsys):
    code, _, err = run(capsys, "classify", "--family", "V", "--order", "10",
                       "--budget", "5")
    assert code == 3
