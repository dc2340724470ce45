import json

import pytest

from fodamp.cli import EXIT_BREAKDOWN, EXIT_OK, EXIT_USAGE, main, parse_grid
from fodamp.reference import GA_RESULTS
from fodamp.refmodel import FitCriterion
from fodamp.fosystems import SystemClass


class TestGridSyntax:
    def test_canonical_alpha_grid(self):
        assert parse_grid("1.1:1.9:0.1") == [1.1, 1.2, 1.3, 1.4, 1.5, 1.6, 1.7, 1.8, 1.9]

    def test_inclusive_endpoint_snapping(self):
        got = parse_grid("0.1:0.4:0.1")
        assert got == [0.1, 0.2, 0.3, 0.4]

    def test_comma_list_and_single(self):
        assert parse_grid("1.5") == [1.5]
        assert parse_grid("1.2,1.8") == [1.2, 1.8]

    @pytest.mark.parametrize("bad", ["1:2", "2:1:0.1", "1:2:-0.5", "1:2:0.1:9"])
    def test_bad_grids(self, bad):
        with pytest.raises(ValueError):
            parse_grid(bad)


class TestSimulate:
    def test_writes_expected_rows_and_manifest(self, tmp_path):
        out = tmp_path / "r.csv"
        code = main(["simulate", "--class", "pseudo", "--alpha", "1.5",
                     "--input", "step", "--out", str(out)])
        assert code == EXIT_OK
        lines = out.read_text().splitlines()
        assert lines[0] == "t,y"
        assert len(lines) == 1 + 2501 + 1  # header + samples + reliability comment
        manifest = json.loads((tmp_path / "r.csv.manifest.json").read_text())
        assert manifest["command"] == "simulate"
        assert manifest["outputs"] == [str(out)]
        assert "duration_s" in manifest

    def test_byte_identical_reruns(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        for out in (a, b):
            assert main(["simulate", "--class", "meta1", "--alpha", "1.3",
                         "--input", "impulse", "--out", str(out)]) == EXIT_OK
        assert a.read_bytes() == b.read_bytes()

    def test_meta1_impulse_starts_near_unity(self, tmp_path):
        out = tmp_path / "imp.csv"
        main(["simulate", "--class", "meta1", "--alpha", "1.3", "--input", "impulse",
              "--t-max", "1", "--out", str(out)])
        first = out.read_text().splitlines()[2]  # first positive-time sample
        assert float(first.split(",")[1]) == pytest.approx(1.0, abs=0.02)

    def test_horizon_violation_exit_code(self, tmp_path):
        code = main(["simulate", "--class", "meta2", "--alpha", "1.5",
                     "--t-max", "26", "--out", str(tmp_path / "x.csv")])
        assert code == EXIT_BREAKDOWN
        code = main(["simulate", "--class", "meta2", "--alpha", "1.5", "--t-max", "26",
                     "--allow-beyond-horizon", "--out", str(tmp_path / "x.csv")])
        assert code == EXIT_OK

    def test_bad_alpha_is_usage_error(self, tmp_path):
        code = main(["simulate", "--class", "pseudo", "--alpha", "2.5",
                     "--out", str(tmp_path / "x.csv")])
        assert code == EXIT_USAGE


class TestFit:
    def test_deterministic_bytes(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        for out in (a, b):
            assert main(["fit", "--class", "pseudo", "--alpha", "1.9",
                         "--criterion", "ise", "--seed", "11", "--out", str(out)]) == EXIT_OK
        assert a.read_bytes() == b.read_bytes()
        row = a.read_text().splitlines()[1].split(",")
        tau, xi = float(row[4]), float(row[5])
        ref = GA_RESULTS[(SystemClass.PSEUDO, FitCriterion.ISE)][-1]
        assert tau == pytest.approx(ref.tau, abs=0.05)
        assert xi == pytest.approx(ref.xi, abs=0.05)


class TestReproduce:
    def test_table_4_is_a_usage_error(self, tmp_path, capsys):
        code = main(["reproduce", "--table", "4", "--out-dir", str(tmp_path)])
        assert code == EXIT_USAGE
        assert "ann-sweep" in capsys.readouterr().err

    def test_table_7_check_passes(self, tmp_path):
        code = main(["reproduce", "--table", "7", "--seed", "0",
                     "--out-dir", str(tmp_path), "--check"])
        assert code == EXIT_OK
        lines = (tmp_path / "table7.csv").read_text().splitlines()
        assert lines[0].startswith("class,alpha,tau,xi,target_tau,target_xi")
        assert len(lines) == 1 + 27
        assert all(line.endswith(",1") for line in lines[1:])
        assert (tmp_path / "table7.csv.manifest.json").exists()
        # reference-prediction spot values still reproduce within tolerance
        by_key = {(f[0], f[1]): f for f in (l.split(",") for l in lines[1:])}
        for klass, alpha, ref_tau, ref_xi in [
            ("meta2", "1.9", 1.002982, 0.070353),
            ("meta1", "1.6", 0.7352, 0.4091),
            ("pseudo", "1.5", 0.898188, 0.387535),
        ]:
            row = by_key[(klass, alpha)]
            assert float(row[2]) == pytest.approx(ref_tau, abs=0.05)
            assert float(row[3]) == pytest.approx(ref_xi, abs=0.05)


class TestAnnCommands:
    def test_train_zero_epochs_keeps_initialization(self, tmp_path):
        out = tmp_path / "m.json"
        code = main(["ann-train", "--dataset", "pseudo", "--max-epochs", "0",
                     "--seed", "3", "--out", str(out)])
        assert code == EXIT_OK
        doc = json.loads(out.read_text())
        assert doc["training"]["epochs"] == 0
        assert doc["format_version"] == 1

    def test_predict_interpolates_between_neighbors(self, tmp_path):
        model = tmp_path / "m.json"
        assert main(["ann-train", "--dataset", "pseudo", "--runs", "25",
                     "--seed", "0", "--out", str(model)]) == EXIT_OK
        pred = tmp_path / "p.csv"
        assert main(["ann-predict", "--model", str(model), "--alphas", "1.45",
                     "--out", str(pred)]) == EXIT_OK
        _, tau, xi = (float(v) for v in pred.read_text().splitlines()[1].split(","))
        # between the alpha=1.4 and alpha=1.5 ITSE optima
        assert 0.8457 < tau < 0.8998
        assert 0.3878 < xi < 0.4635

    def test_sweep_csv_shape(self, tmp_path):
        out = tmp_path / "sweep.csv"
        code = main(["ann-sweep", "--dataset", "meta2", "--runs", "1",
                     "--seed", "8", "--max-epochs", "5", "--out", str(out)])
        assert code == EXIT_OK
        lines = out.read_text().splitlines()
        assert lines[0] == "layers,neurons,act1,act2,avg_mse,min_mse,std_mse,failed_runs"
        assert len(lines) == 1 + 30
        one_layer = [l for l in lines[1:] if l.startswith("1,")]
        assert len(one_layer) == 10
        assert all(l.split(",")[3] == "" for l in one_layer)

    def test_dataset_csv_input(self, tmp_path):
        data = tmp_path / "d.csv"
        data.write_text("alpha,tau,xi\n" + "\n".join(
            f"{a},{t},{x}" for a, t, x in [
                (1.1, 0.4, 1.0), (1.3, 0.55, 0.7), (1.5, 0.7, 0.5),
                (1.7, 0.8, 0.35), (1.9, 0.88, 0.2),
            ]))
        out = tmp_path / "m.json"
        code = main(["ann-train", "--dataset-csv", str(data), "--seed", "1",
                     "--out", str(out)])
        assert code == EXIT_OK

    def test_dataset_csv_missing_columns(self, tmp_path):
        data = tmp_path / "d.csv"
        data.write_text("a,b\n1,2\n")
        code = main(["ann-train", "--dataset-csv", str(data), "--out",
                     str(tmp_path / "m.json")])
        assert code == EXIT_USAGE


class TestUsage:
    def test_unknown_class_rejected(self, tmp_path):
        assert main(["simulate", "--class", "nope", "--alpha", "1.5"]) == EXIT_USAGE

    def test_missing_subcommand(self):
        assert main([]) == EXIT_USAGE
