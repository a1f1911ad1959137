import csv
import json
from pathlib import Path

import pytest

from refpoint.cli import main


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


class TestDemoMdp:
    def test_writes_model_and_sweeps(self, tmp_path, capsys):
        out = tmp_path / "mdp"
        code = main(["demo", "mdp", "--seed", "1", "--states", "5", "--horizon", "6",
                     "--n", "6", "--out", str(out)])
        assert code == 0
        assert (out / "model.json").exists()
        weights = read_csv(out / "sweep_weights.csv")
        refs = read_csv(out / "sweep_refpoint.csv")
        assert weights[0] == ["method", "index", "C_1", "C_2"]
        assert len(weights) == 7 and len(refs) == 7
        distinct = lambda rows: {tuple(round(float(v), 6) for v in r[2:]) for r in rows[1:]}
        assert len(distinct(refs)) >= len(distinct(weights))

    def test_sweep_command_on_generated_model(self, tmp_path, capsys):
        out = tmp_path / "mdp"
        main(["demo", "mdp", "--seed", "2", "--states", "4", "--horizon", "5",
              "--n", "4", "--out", str(out)])
        csv_path = tmp_path / "sweep.csv"
        code = main(["sweep", "--model", str(out / "model.json"), "--n", "5",
                     "--method", "weights", "--out", str(csv_path)])
        assert code == 0
        rows = read_csv(csv_path)
        assert rows[0] == ["method", "index", "C_1", "C_2"]
        assert len(rows) == 6


class TestSolve:
    def test_wrong_arity_exits_2(self, tmp_path, capsys):
        out = tmp_path / "mdp"
        main(["demo", "mdp", "--seed", "1", "--states", "4", "--horizon", "4",
              "--n", "4", "--out", str(out)])
        code = main(["solve", "--model", str(out / "model.json"), "--ref", "1.0"])
        assert code == 2

    def test_solve_prints_result(self, tmp_path, capsys):
        out = tmp_path / "mdp"
        main(["demo", "mdp", "--seed", "1", "--states", "4", "--horizon", "4",
              "--n", "4", "--out", str(out)])
        capsys.readouterr()
        code = main(["solve", "--model", str(out / "model.json"), "--ref", "3.0,3.0"])
        assert code == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["status"] == "optimal"
        assert len(payload["criteria"]) == 2

    def test_missing_model_file(self, capsys):
        assert main(["solve", "--model", "no-such.json", "--ref", "1,2"]) == 1


class TestDemoGrid:
    def test_compare_outputs(self, tmp_path, capsys):
        out = tmp_path / "grid"
        code = main(["demo", "grid", "--seed", "4", "--rows", "4", "--cols", "4",
                     "--k", "2", "--samples", "40", "--keep", "4", "--out", str(out)])
        assert code == 0
        rows = read_csv(out / "compare.csv")
        assert rows[0] == ["pair", "method", "wtt", "carbon", "species_1",
                           "species_2", "species_3", "min_gap"]
        pairs = (len(rows) - 1) // 2
        masks = sorted((out / "masks").glob("*.txt"))
        assert len(masks) == pairs
        mask = masks[0].read_text().splitlines()
        assert len(mask) == 4 and set("".join(mask)) <= {"0", "1"}
        gaps = [float(r[-1]) for r in rows[1:] if r[1] == "refpoint"]
        assert all(g >= -1e-9 for g in gaps)


class TestCompareExplicit:
    def test_small_run(self, tmp_path, capsys):
        csv_path = tmp_path / "cmp.csv"
        code = main(["compare-explicit", "--seed", "5", "--rows", "4", "--cols", "4",
                     "--k", "2", "--samples", "60", "--keep", "5",
                     "--out", str(csv_path)])
        assert code == 0
        rows = read_csv(csv_path)
        assert rows[0][-1] == "min_gap"
        text = capsys.readouterr().out
        assert "mean min relative gap" in text


class TestValidate:
    def test_good_model(self, tmp_path, capsys):
        out = tmp_path / "mdp"
        main(["demo", "mdp", "--seed", "1", "--states", "3", "--horizon", "3",
              "--n", "4", "--out", str(out)])
        assert main(["validate", "--model", str(out / "model.json")]) == 0

    def test_bad_model(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text(json.dumps({"variables": [], "constraints": [], "objectives": []}))
        assert main(["validate", "--model", str(bad)]) == 1
