import json
import subprocess
import sys

import pytest

from hiersumm import InputError, ParseError
from hiersumm.cli import main
from hiersumm.formats import (
    ingest,
    read_hierarchy,
    read_weights,
    write_facts,
    write_instance,
)
from hiersumm.generators import gen_power_conflict, gen_random, gen_two_tree_example

FIG1_FACTS = "dim1,dim2,metric_pre,metric_cur\na1,a2,1,2\nb1,a2,1,2\na1,b2,1,0\nb1,b2,1,0\n"


def _fig1_files(tmp_path, facts=FIG1_FACTS):
    for i in (1, 2):
        (tmp_path / f"dim{i}.csv").write_text(f"id,parent_id,name\nr{i},,R{i}\na{i},r{i},A{i}\nb{i},r{i},B{i}\n")
    (tmp_path / "facts.csv").write_text(facts)
    return [str(tmp_path / "dim1.csv"), str(tmp_path / "dim2.csv")], str(tmp_path / "facts.csv")


def _run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_ingest_fig1(tmp_path):
    hier, facts = _fig1_files(tmp_path)
    space, cells = ingest(hier, facts)
    assert space.n == 9
    assert len(cells) == 4


def test_ingest_sums_repeated_cells(tmp_path):
    hier, facts = _fig1_files(tmp_path, FIG1_FACTS + "a1,a2,2,5\n")
    space, cells = ingest(hier, facts)
    assert cells.merged()[space.node("a1", "a2")] == (3.0, 7.0)


def test_ingest_rejects_internal_node(tmp_path):
    hier, facts = _fig1_files(tmp_path, FIG1_FACTS + "r1,a2,1,1\n")
    with pytest.raises(InputError, match=":6:"):
        ingest(hier, facts)


def test_ingest_errors(tmp_path):
    hier, facts = _fig1_files(tmp_path, FIG1_FACTS + "a1,zz,1,1\n")
    with pytest.raises(InputError, match="unknown node id"):
        ingest(hier, facts)
    hier, facts = _fig1_files(tmp_path, FIG1_FACTS + "a1,a2,x,1\n")
    with pytest.raises(ParseError) as exc:
        ingest(hier, facts)
    assert exc.value.line == 6
    cyc = tmp_path / "cyc.csv"
    cyc.write_text("id,parent_id,name\nr,,R\nx,y,X\ny,x,Y\n")
    with pytest.raises(InputError):
        read_hierarchy(cyc)
    bad = tmp_path / "bad.csv"
    bad.write_text("id,parent\nr,\n")
    with pytest.raises(ParseError):
        read_hierarchy(bad)


def test_round_trip_is_byte_stable(tmp_path):
    inst = gen_random(3, [4, 3, 5], cell_density=0.6, seed=4)
    first = tmp_path / "a"
    files = write_instance(first, inst.space, cells=inst.cells)
    space, cells = ingest(files["hierarchies"], files["facts"])
    second = tmp_path / "b"
    write_instance(second, space, cells=cells)
    for name in ["dim1.csv", "dim2.csv", "dim3.csv", "facts.csv"]:
        assert (first / name).read_bytes() == (second / name).read_bytes()


def test_weights_round_trip(tmp_path):
    inst = gen_power_conflict(1)
    files = write_instance(tmp_path, inst.space, weights=inst.weights)
    space = inst.space
    assert read_weights(files["weights"], space).sparse == inst.weights.sparse


def test_summarize_fig1(tmp_path, capsys):
    hier, facts = _fig1_files(tmp_path)
    out = tmp_path / "report.json"
    code, _, _ = _run(capsys, "--hierarchy", hier[0], "--hierarchy", hier[1], "--facts", facts,
                      "--k", "2", "--out", str(out))
    assert code == 0
    report = json.loads(out.read_text())
    assert report["schema"] == 1
    assert report["summary"]["total_weight"] == 4.0
    assert report["summary"]["grand_total_pre"] == 4.0
    coords = sorted(tuple(e["coordinates"]) for e in report["entries"])
    assert coords == [("R1", "A2"), ("R1", "B2")]
    entry = report["entries"][0]
    assert entry["delta"] == entry["l_v"] - entry["t_v"]
    assert entry["share_pre"] == 0.5


def test_report_entries_sorted_and_consistent(capsys):
    code, out, _ = _run(capsys, "--generator", "random", "--dims", "3", "--tree-size", "4",
                        "--seed", "3", "--k", "6")
    assert code == 0
    report = json.loads(out)
    ws = [e["weight"] for e in report["entries"]]
    assert ws == sorted(ws, reverse=True)
    assert report["summary"]["total_weight"] == pytest.approx(sum(ws))


def test_k_zero_rejected(tmp_path, capsys):
    hier, facts = _fig1_files(tmp_path)
    with pytest.raises(SystemExit) as exc:
        main(["--hierarchy", hier[0], "--hierarchy", hier[1], "--facts", facts, "--k", "0"])
    assert exc.value.code == 2


def test_composition_with_zero_period(tmp_path, capsys):
    hier, facts = _fig1_files(tmp_path, "dim1,dim2,metric_pre,metric_cur\na1,a2,0,3\n")
    code, _, err = _run(capsys, "--hierarchy", hier[0], "--hierarchy", hier[1], "--facts", facts,
                        "--k", "2", "--weight", "composition")
    assert code == 1
    assert json.loads(err)["error"] == "ConfigError"


def test_missing_file_is_structured_error(capsys):
    code, _, err = _run(capsys, "--hierarchy", "/nonexistent.csv", "--facts", "/nope.csv", "--k", "1")
    assert code == 1
    assert "error" in json.loads(err)


@pytest.mark.parametrize("generator, solver, optimal", [
    ("simple-conflict", 2.0, 3.0),
    ("power-conflict", 4.0, 9.0),
])
def test_verify_conflicts(capsys, generator, solver, optimal):
    code, out, _ = _run(capsys, "--mode", "verify", "--generator", generator, "--m", "2")
    assert code == 0
    doc = json.loads(out)
    assert doc["solver_weight"] == solver
    assert doc["optimal_weight"] == optimal
    assert doc["within_bound"]
    if generator == "simple-conflict":
        assert doc["ratio"] == 1.5


def test_verify_two_dimensions_ratio_one(capsys):
    code, out, _ = _run(capsys, "--mode", "verify", "--generator", "random", "--dims", "2",
                        "--tree-size", "5", "--k", "3", "--seed", "11")
    assert code == 0
    assert json.loads(out)["ratio"] == 1


def test_generate_then_summarize(tmp_path, capsys):
    code, _, _ = _run(capsys, "--mode", "generate", "--generator", "two-tree", "--x", "1",
                      "--out", str(tmp_path))
    assert code == 0
    meta = json.loads((tmp_path / "instance.json").read_text())
    assert meta["known"]["optimum_k2"] == 4.0
    args = [a for h in meta["files"]["hierarchies"] for a in ("--hierarchy", h)]
    code, out, _ = _run(capsys, *args, "--facts", meta["files"]["facts"], "--k", "2")
    assert json.loads(out)["summary"]["total_weight"] == 4.0


def test_generate_weights_instance(tmp_path, capsys):
    code, _, _ = _run(capsys, "--mode", "generate", "--generator", "mis", "--vertices", "4",
                      "--seed", "2", "--out", str(tmp_path))
    assert code == 0
    meta = json.loads((tmp_path / "instance.json").read_text())
    args = [a for h in meta["files"]["hierarchies"] for a in ("--hierarchy", h)]
    code, out, _ = _run(capsys, "--mode", "verify", *args, "--weights", meta["files"]["weights"],
                        "--k", str(meta["k"]))
    assert code == 0


def test_facts_writer_merges(tmp_path):
    inst = gen_two_tree_example(1.0)
    path = tmp_path / "f.csv"
    write_facts(inst.cells, path)
    assert path.read_text().splitlines()[0] == "dim1,dim2,metric_pre,metric_cur"
    assert "a1,a2,1,2" in path.read_text()


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "hiersumm", "--generator", "two-tree", "--k", "2"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["summary"]["total_weight"] == 4.0
