"""Command-line interface: exit codes, JSON documents, determinism."""

from __future__ import annotations

import json

from groupcover.cli import main

from conftest import grp


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_sigma_document_to_stdout(capsys):
    code, out, err = run(capsys, "sigma", "catalog:Sym(3)")
    assert code == 0
    doc = json.loads(out)
    assert doc["group"] == "Sym(3)"
    assert doc["order"] == 6 and doc["degree"] == 3
    assert doc["sigma"] == 4
    assert doc["interval"] is None
    assert len(doc["cover"]) == 4
    assert all(isinstance(fam, list) for fam in doc["cover"])
    assert doc["stats"]["rows"] == 4 and doc["stats"]["columns"] == 4
    assert list(doc) == [
        "group",
        "order",
        "degree",
        "sigma",
        "interval",
        "cover",
        "certificates",
        "unique",
        "optimal_count",
        "stats",
    ]


def test_sigma_infinity_for_cyclic(capsys):
    code, out, _ = run(capsys, "sigma", "catalog:Cyclic(12)")
    assert code == 0
    doc = json.loads(out)
    assert doc["sigma"] == "infinity"
    assert doc["cover"] is None


def test_sigma_out_file_and_summary_line(tmp_path, capsys):
    out_file = tmp_path / "res.json"
    code, out, _ = run(capsys, "sigma", "catalog:Alt(4)", "--out", str(out_file))
    assert code == 0
    assert "sigma(Alt(4)) = 5" in out
    doc = json.loads(out_file.read_text())
    assert doc["sigma"] == 5


def test_sigma_documents_are_byte_identical(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert run(capsys, "sigma", "catalog:Alt(5)", "--out", str(a))[0] == 0
    assert run(capsys, "sigma", "catalog:Alt(5)", "--out", str(b))[0] == 0
    assert a.read_bytes() == b.read_bytes()


def test_sigma_enumerate_all(capsys):
    code, out, _ = run(
        capsys, "sigma", "catalog:Alt(5)", "--enumerate-all", "--limit", "1000"
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["optimal_count"] == 15
    assert doc["unique"] is False


def test_verify_round_trip(tmp_path, capsys):
    res_file = tmp_path / "alt4.json"
    assert run(capsys, "sigma", "catalog:Alt(4)", "--out", str(res_file))[0] == 0
    code, out, _ = run(capsys, "verify", "catalog:Alt(4)", str(res_file))
    assert code == 0
    assert "accepted" in out


def test_verify_bare_cover_array(tmp_path, capsys):
    res = json.loads(
        run(capsys, "sigma", "catalog:Sym(3)")[1]
    )
    bare = tmp_path / "bare.json"
    bare.write_text(json.dumps(res["cover"]))
    code, out, _ = run(capsys, "verify", "catalog:Sym(3)", str(bare))
    assert code == 0 and "accepted" in out


def test_verify_rejects_short_cover(tmp_path, capsys):
    doc = json.loads(run(capsys, "sigma", "catalog:Alt(4)")[1])
    doc["cover"] = doc["cover"][:-1]
    broken = tmp_path / "broken.json"
    broken.write_text(json.dumps(doc))
    code, out, _ = run(capsys, "verify", "catalog:Alt(4)", str(broken))
    assert code == 1
    assert "rejected" in out and "element-uncovered" in out


def test_verify_bad_json_is_parse_error(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{nope")
    code, _, err = run(capsys, "verify", "catalog:Sym(3)", str(bad))
    assert code == 2


def test_verify_document_without_cover(tmp_path, capsys):
    f = tmp_path / "no_cover.json"
    f.write_text(json.dumps({"sigma": 4}))
    code, _, err = run(capsys, "verify", "catalog:Sym(3)", str(f))
    assert code == 2


def test_elementary_document(capsys):
    code, out, _ = run(capsys, "elementary", "catalog:Sym(4)")
    assert code == 0
    doc = json.loads(out)
    assert doc["group"] == "Sym(4)"
    assert doc["sigma"] == 4
    assert doc["elementary"] is False
    assert doc["witness"]["normal_order"] == 4
    assert doc["witness"]["quotient_sigma"] == 4


def test_elementary_positive(capsys):
    code, out, _ = run(capsys, "elementary", "catalog:Alt(4)")
    assert code == 0
    doc = json.loads(out)
    assert doc["elementary"] is True and doc["witness"] is None


def test_group_file_input(tmp_path, capsys):
    f = tmp_path / "klein.grp"
    f.write_text("degree 4\ngen (1 2)(3 4)\ngen (1 3)(2 4)\n")
    code, out, _ = run(capsys, "sigma", str(f))
    assert code == 0
    assert json.loads(out)["sigma"] == 3
    g = tmp_path / "d5.grp"
    g.write_text("catalog: Dihedral(5)\n")
    code, out, _ = run(capsys, "sigma", str(g))
    assert code == 0 and json.loads(out)["sigma"] == 6


def test_parse_failures_exit_2(capsys):
    assert run(capsys, "sigma", "catalog:Nope(3)")[0] == 2
    assert run(capsys, "sigma", "/nonexistent/file.grp")[0] == 2
    assert run(capsys, "sigma", "catalog:Sym(4)", "--cap", "0")[0] == 2
    assert run(capsys, "sigma", "catalog:Sym(4)", "--threads", "0")[0] == 2
    assert run(capsys, "table", "--max-sum", "2")[0] == 2


def test_cap_exhaustion_exits_3(capsys):
    code, _, err = run(capsys, "sigma", "catalog:Alt(8)")
    assert code == 3
    assert "cap" in err


def test_node_budget_exhaustion_exits_3(tmp_path, capsys):
    f = tmp_path / "fresh_a5.grp"
    G = grp("Alt(5)")
    f.write_text(
        "degree 5\n" + "".join(f"gen {g.cycle_string()}\n" for g in G.generators)
    )
    code, out, _ = run(capsys, "sigma", str(f), "--node-budget", "1")
    assert code == 3
    doc = json.loads(out)
    assert doc["sigma"] is None
    lo, hi = doc["interval"]
    assert lo <= 10 <= hi


def test_usage_errors(capsys):
    assert main([]) == 2
    assert main(["frobnicate"]) == 2
    assert main(["--help"]) == 0


def test_table_text_and_json(tmp_path, capsys):
    out_file = tmp_path / "table.json"
    code, out, _ = run(capsys, "table", "--max-sum", "25", "--out", str(out_file))
    assert code == 0
    doc = json.loads(out_file.read_text())
    assert doc["ok"] is True
    assert doc["max_sum"] == 25
    # the printed text table mentions the flagship rows
    assert "M11" in out
    assert "Sym(6)" in out
