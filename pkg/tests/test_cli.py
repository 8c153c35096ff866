import csv
import json

import pytest

from wmnca.cli import main
from wmnca.topology import generate_grid, load_assignment, load_topology

REFERENCE = "CEN_C CLQ_C CEN_E CLQ_E BFS_C BFS_E MIS_C MIS_E GSCA".split()
TID_SEQ = "BFS_E CLQ_C MIS_E BFS_C CEN_E CEN_C CLQ_E MIS_C GSCA".split()
CDAL_SEQ = "CEN_C CEN_E CLQ_C CLQ_E MIS_C BFS_E BFS_C MIS_E GSCA".split()


def run(*argv):
    return main([str(a) for a in argv])


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


@pytest.fixture
def population(tmp_path):
    assert run("gen", "--grid", "5x5", "--spacing", 200, "--radios", 2, "--out", tmp_path) == 0
    assert run("assign", "--topology", tmp_path / "topology.json", "--scheme", "population",
               "--seed", 1, "--budget", 2000, "--out", tmp_path / "cas") == 0
    return tmp_path, sorted((tmp_path / "cas").glob("ca_*.json"))


def published_fixture(d):
    """Metrics and simulation files whose orderings are the published sequences."""
    with open(d / "metrics.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["ca_label", "tid", "cdal_cost"])
        for lab in REFERENCE:
            w.writerow([lab, 100 - TID_SEQ.index(lab), 10 - CDAL_SEQ.index(lab)])
    with open(d / "simulation.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["ca_label", "scenario", "aggregate_throughput_mbps", "plr_proxy"])
        for k, lab in enumerate(REFERENCE):
            w.writerow([lab, 5, 10 + k, 0.9 - 0.05 * k])


class TestGen:
    def test_5x5(self, tmp_path, capsys):
        assert run("gen", "--grid", "5x5", "--spacing", 200, "--radios", 2, "--out", tmp_path) == 0
        g = load_topology(tmp_path / "topology.json")
        assert g == generate_grid(5, 5, 200, 2)
        assert len(g.radios) == 50
        assert "25 nodes" in capsys.readouterr().out

    def test_pair(self, tmp_path):
        assert run("gen", "--grid", "1x2", "--radios", 1, "--out", tmp_path) == 0
        assert load_topology(tmp_path / "topology.json").n == 2

    @pytest.mark.parametrize("grid", ["0x5", "5x0", "axb"])
    def test_invalid_dimensions(self, tmp_path, capsys, grid):
        assert run("gen", "--grid", grid, "--out", tmp_path) == 2
        assert "invalid dimensions" in capsys.readouterr().err

    def test_bad_flag(self):
        with pytest.raises(SystemExit) as exc:
            run("gen", "--radios", "two")
        assert exc.value.code == 2


class TestAssign:
    def test_population_round_trip(self, population):
        d, files = population
        assert [f.stem for f in files] == sorted(f"ca_{lab}" for lab in REFERENCE)
        for f in files:
            ca, cs = load_assignment(f)
            assert len(ca) == 50 and cs.channels == (1, 2, 3)

    def test_single_scheme(self, tmp_path):
        run("gen", "--grid", "3x3", "--out", tmp_path)
        assert run("assign", "--topology", tmp_path / "topology.json", "--scheme", "OIS", "--out", tmp_path) == 0
        assert (tmp_path / "ca_OIS.json").exists()

    def test_unknown_scheme(self, tmp_path):
        run("gen", "--grid", "3x3", "--out", tmp_path)
        assert run("assign", "--topology", tmp_path / "topology.json", "--scheme", "TABU", "--out", tmp_path) == 2

    def test_missing_topology(self, tmp_path):
        assert run("assign", "--topology", tmp_path / "nope.json", "--scheme", "CEN") == 3


class TestEstimate:
    def test_population_nine_rows(self, population):
        d, files = population
        assert run("estimate", "--topology", d / "topology.json", "--ca", *files, "--out", d) == 0
        rows = read_csv(d / "metrics.csv")
        assert len(rows) == 9
        assert all(r["tid_c"] and r["tid_e"] and r["cdal_cost"] for r in rows)
        assert {r["cdal_rule"] for r in rows} == {"uniform"}

    def test_literal_kp_flagged(self, population):
        d, files = population
        assert run("estimate", "--topology", d / "topology.json", "--ca", *files, "--literal-kp", "--out", d) == 0
        assert {r["cdal_rule"] for r in read_csv(d / "metrics.csv")} == {"literal-kp"}

    def test_empty_link_set(self, tmp_path):
        run("gen", "--grid", "1x2", "--radios", 1, "--out", tmp_path)
        (tmp_path / "ca_split.json").write_text(json.dumps({"channels": [1, 2], "assignment": {"0/0": 1, "1/0": 2}}))
        assert run("estimate", "--topology", tmp_path / "topology.json", "--ca", tmp_path / "ca_split.json",
                   "--out", tmp_path) == 0
        (row,) = read_csv(tmp_path / "metrics.csv")
        assert (row["ca_label"], row["tid_c"], row["tid_e"], float(row["cdal_cost"])) == ("split", "0", "0", 0.0)

    def test_json_format(self, population):
        d, files = population
        assert run("estimate", "--topology", d / "topology.json", "--ca", files[0], "--format", "json",
                   "--out", d) == 0
        (entry,) = json.loads((d / "metrics.json").read_text())
        assert set(entry) >= {"ca_label", "tid_c", "tid_e", "cdal_cost", "distribution"}

    def test_malformed(self, tmp_path):
        run("gen", "--grid", "1x2", "--radios", 1, "--out", tmp_path)
        (tmp_path / "ca_bad.json").write_text("{not json")
        assert run("estimate", "--topology", tmp_path / "topology.json", "--ca", tmp_path / "ca_bad.json") == 3

    def test_incomplete_assignment(self, tmp_path, capsys):
        run("gen", "--grid", "1x2", "--radios", 1, "--out", tmp_path)
        (tmp_path / "ca_x.json").write_text(json.dumps({"channels": [1], "assignment": {"0/0": 1}}))
        assert run("estimate", "--topology", tmp_path / "topology.json", "--ca", tmp_path / "ca_x.json") == 3
        assert "unassigned radio" in capsys.readouterr().err


class TestSimulate:
    def test_csv_and_json(self, population):
        d, files = population
        assert run("simulate", "--topology", d / "topology.json", "--ca", *files[:2], "--scenario", 5,
                   "--scenario", 12, "--format", "json", "--out", d) == 0
        rows = read_csv(d / "simulation.csv")
        assert [(r["scenario"]) for r in rows] == ["5", "12", "5", "12"]
        assert len(list(d.glob("flows_*.json"))) == 4

    def test_non_grid(self, tmp_path):
        run("gen", "--grid", "2x2", "--out", tmp_path)
        run("assign", "--topology", tmp_path / "topology.json", "--scheme", "CEN", "--out", tmp_path)
        assert run("simulate", "--topology", tmp_path / "topology.json", "--ca", tmp_path / "ca_CEN_C.json") == 2


class TestEvaluate:
    def test_published_sequences(self, tmp_path, capsys):
        published_fixture(tmp_path)
        assert run("evaluate", "--metrics", tmp_path / "metrics.csv", "--simulation", tmp_path / "simulation.csv",
                   "--out", tmp_path) == 0
        rows = {(r["estimator"], r["performance_metric"]): r for r in read_csv(tmp_path / "ranking.csv")}
        for metric in ("avg_throughput", "avg_plr"):
            assert float(rows[("tid", metric)]["eis"]) == 15
            assert float(rows[("cdal_cost", metric)]["eis"]) == 4
            assert float(rows[("tid", metric)]["doc_percent"]) == pytest.approx(58.33, abs=0.01)
            assert float(rows[("cdal_cost", metric)]["doc_percent"]) == pytest.approx(88.89, abs=0.01)
        assert (tmp_path / "plot_avg_throughput_vs_cdal_cost.csv").exists()
        assert (tmp_path / "plot.py").exists()

    def test_single_ca(self, tmp_path, capsys):
        (tmp_path / "m.csv").write_text("ca_label,tid,cdal_cost\nA,1,1\n")
        (tmp_path / "s.csv").write_text("ca_label,scenario,aggregate_throughput_mbps,plr_proxy\nA,5,1,0.5\n")
        assert run("evaluate", "--metrics", tmp_path / "m.csv", "--simulation", tmp_path / "s.csv",
                   "--out", tmp_path) == 4
        assert "need >= 2 CAs" in capsys.readouterr().err

    def test_label_mismatch(self, tmp_path):
        (tmp_path / "m.csv").write_text("ca_label,tid,cdal_cost\nA,1,1\nB,2,2\n")
        (tmp_path / "s.csv").write_text(
            "ca_label,scenario,aggregate_throughput_mbps,plr_proxy\nA,5,1,0.5\nC,5,2,0.4\n")
        assert run("evaluate", "--metrics", tmp_path / "m.csv", "--simulation", tmp_path / "s.csv",
                   "--out", tmp_path) == 4

    def test_ties_reported(self, tmp_path, capsys):
        (tmp_path / "m.csv").write_text("ca_label,cdal_cost\nA,1\nB,1\nC,1\n")
        (tmp_path / "s.csv").write_text(
            "ca_label,scenario,aggregate_throughput_mbps,plr_proxy\nA,5,1,0.5\nB,5,2,0.4\nC,5,3,0.3\n")
        assert run("evaluate", "--metrics", tmp_path / "m.csv", "--simulation", tmp_path / "s.csv",
                   "--tie-policy", "full", "--out", tmp_path) == 0
        out = capsys.readouterr().out
        assert "3 tied pairs, policy full" in out
        assert float(read_csv(tmp_path / "ranking.csv")[0]["eis"]) == 3

    def test_missing_file(self, tmp_path):
        assert run("evaluate", "--metrics", tmp_path / "m.csv", "--simulation", tmp_path / "s.csv") == 3


def test_run_all_deterministic(tmp_path):
    argv = ["run-all", "--grid", "3x3", "--reps", 2, "--budget", 300, "--scenario", 5]
    assert run(*argv, "--out", tmp_path / "a") == 0
    assert run(*argv, "--out", tmp_path / "b") == 0
    files = sorted(p.relative_to(tmp_path / "a") for p in (tmp_path / "a").rglob("*") if p.is_file())
    assert files
    for rel in files:
        assert (tmp_path / "a" / rel).read_bytes() == (tmp_path / "b" / rel).read_bytes(), rel
    assert {r["seed"] for r in read_csv(tmp_path / "a" / "summary.csv")} == {"0", "1"}
