import sys

import pandas as pd
import pytest
from typer.testing import CliRunner

import main
from src.repository.results import CURVE_COLUMNS

runner = CliRunner()


@pytest.fixture
def study(write_study, rng):
    def subjects(shift, count=2):
        return [rng.uniform(0.0, 5.0, 80) + shift for _ in range(count)]

    return write_study({"CTRL": subjects(0.0), "AD": subjects(0.2), "MCI": subjects(0.1)},
                       hemispheres=("left", "right"))


def invoke(*args):
    return runner.invoke(main.app, [str(a) for a in args])


class TestSimulate:
    def test_same_seed_same_file(self, tmp_path):
        paths = [tmp_path / "a.txt", tmp_path / "b.txt"]
        for path in paths:
            result = invoke("simulate", "--eta", 50, "--n", 500, "--seed", 5, "--out", path)
            assert result.exit_code == 0, result.output
        assert paths[0].read_bytes() == paths[1].read_bytes()
        assert len(paths[0].read_text().splitlines()) == 500

    def test_default_file_name(self, tmp_path):
        result = invoke("simulate", "--r", 1.2, "--n", 10, "--seed", 3, "--out-dir", tmp_path)
        assert result.exit_code == 0, result.output
        assert (tmp_path / "sim_eta0_r1.2_seed3.txt").exists()

    def test_eta_out_of_range(self, tmp_path):
        result = invoke("simulate", "--eta", 2059, "--out-dir", tmp_path)
        assert result.exit_code == 1


class TestAnalyze:
    def test_censored(self, study, tmp_path):
        out = tmp_path / "out"
        result = invoke("analyze", study, "--delta", 0.5, "--out-dir", out)
        assert result.exit_code == 0, result.output
        frame = pd.read_csv(out / "analysis_left.csv", keep_default_na=False)
        assert list(frame.columns[:11]) == ["hemisphere", "step", "gamma_mm", "test",
                                            "comparison", "alternative", "statistic", "df1",
                                            "df2", "p_value", "reliable"]
        assert list(frame.columns[11:]) == ["n_group1", "n_group2", "n_group3", "reason"]
        assert set(frame["comparison"]) == {"all", "CTRL:AD", "CTRL:MCI", "AD:MCI"}
        assert (out / "analysis_right.csv").exists()
        assert (out / "analysis_left_kruskal_wallis.svg").exists()
        clip = pd.read_csv(out / "clip_report.csv")
        assert len(clip) == 12

    def test_pairs_and_threads(self, study, tmp_path):
        result = invoke("analyze", study, "--delta", 0.5, "--pair", "AD:CTRL", "--threads", 2,
                        "--no-svg", "--out-dir", tmp_path)
        assert result.exit_code == 0, result.output
        frame = pd.read_csv(tmp_path / "analysis_right.csv")
        assert set(frame["comparison"]) == {"all", "AD:CTRL"}
        assert not list(tmp_path.glob("*.svg"))

    def test_pooled_with_holm(self, study, tmp_path):
        result = invoke("analyze", study, "--pooled", "--holm", "--n-mc", 50, "--seed", 1,
                        "--out-dir", tmp_path)
        assert result.exit_code == 0, result.output
        frame = pd.read_csv(tmp_path / "pooled_left.csv")
        assert frame.columns[-1] == "p_adjusted"
        assert "ks_two_sample" in set(frame["test"])

    def test_holm_needs_pooled(self, study, tmp_path):
        assert invoke("analyze", study, "--holm", "--out-dir", tmp_path).exit_code == 1

    def test_single_group(self, write_study, tmp_path):
        manifest = write_study({"CTRL": [[1.0, 2.0], [1.5, 2.5]]})
        assert invoke("analyze", manifest, "--out-dir", tmp_path).exit_code == 2

    def test_missing_manifest(self, tmp_path):
        assert invoke("analyze", tmp_path / "absent.csv", "--out-dir", tmp_path).exit_code == 2


class TestMonteCarlo:
    def test_size(self, tmp_path):
        result = invoke("mc", "size", "--n", 200, "--n-mc", 4, "--delta", 0.5, "--seed", 3,
                        "--out-dir", tmp_path)
        assert result.exit_code == 0, result.output
        frame = pd.read_csv(tmp_path / "mc_size_null-eq10.csv")
        assert list(frame.columns) == CURVE_COLUMNS
        assert frame["n_valid"].max() == 4
        assert (tmp_path / "mc_size_null-eq10_wilcoxon_X-Y.svg").exists()

    def test_threads_do_not_change_the_csv(self, tmp_path):
        outputs = []
        for threads in (1, 8):
            out = tmp_path / f"t{threads}"
            result = invoke("mc", "power", "--quick", "--n", 150, "--n-mc", 8, "--delta", 0.5,
                            "--seed", 11, "--threads", threads, "--no-svg", "--out-dir", out)
            assert result.exit_code == 0, result.output
            outputs.append((out / "mc_power_alt-eq12.csv").read_bytes())
        assert outputs[0] == outputs[1]

    def test_custom_samples(self, tmp_path):
        result = invoke("mc", "power", "--sample", "A:0:1.0:150", "--sample", "B:0:1.2:150",
                        "--test", "wilcoxon", "--n-mc", 3, "--delta", 0.5, "--no-svg",
                        "--out-dir", tmp_path)
        assert result.exit_code == 0, result.output
        frame = pd.read_csv(tmp_path / "mc_power_custom.csv")
        assert set(frame["comparison"]) == {"A:B"}

    def test_unknown_preset(self, tmp_path):
        assert invoke("mc", "size", "--preset", "eq99", "--out-dir", tmp_path).exit_code == 1

    def test_bad_sample(self, tmp_path):
        result = invoke("mc", "power", "--sample", "A:0:3.0:10", "--sample", "B:0:1:10",
                        "--out-dir", tmp_path)
        assert result.exit_code == 1


class TestKde:
    def test_files(self, tmp_path):
        a, b = tmp_path / "a.txt", tmp_path / "b.txt"
        a.write_text("0.5\n1.0\n1.5\n2.0\n", encoding="utf-8")
        b.write_text("1.0\n2.0\n2.5\n3.5\n", encoding="utf-8")
        result = invoke("kde", a, b, "--ecdf", "--grid-points", 64, "--out-dir", tmp_path)
        assert result.exit_code == 0, result.output
        frame = pd.read_csv(tmp_path / "kde.csv")
        assert list(frame.columns) == ["grid_mm", "a", "b", "ecdf_a", "ecdf_b"]
        assert len(frame) == 64
        assert (tmp_path / "kde.svg").exists()

    def test_identical_files_give_identical_curves(self, tmp_path):
        text = "0.5\n1.0\n1.25\n2.0\n3.5\n"
        for name in ("first.txt", "second.txt"):
            (tmp_path / name).write_text(text, encoding="utf-8")
        result = invoke("kde", tmp_path / "first.txt", tmp_path / "second.txt", "--no-svg",
                        "--out-dir", tmp_path)
        assert result.exit_code == 0, result.output
        frame = pd.read_csv(tmp_path / "kde.csv")
        assert frame["first"].tolist() == frame["second"].tolist()

    def test_manifest(self, study, tmp_path):
        result = invoke("kde", "--manifest", study, "--no-svg", "--out-dir", tmp_path / "out")
        assert result.exit_code == 0, result.output
        frame = pd.read_csv(tmp_path / "out" / "kde_left.csv")
        assert list(frame.columns) == ["grid_mm", "CTRL", "AD", "MCI"]

    def test_preset(self, tmp_path):
        result = invoke("kde", "--preset", "alt-eq12", "--quick", "--counts", "--no-svg",
                        "--out-dir", tmp_path)
        assert result.exit_code == 0, result.output
        assert list(pd.read_csv(tmp_path / "kde_alt-eq12.csv").columns) == \
            ["grid_mm", "X", "Y", "Z"]

    def test_empty_file(self, tmp_path):
        empty = tmp_path / "empty.txt"
        empty.write_text("", encoding="utf-8")
        assert invoke("kde", empty, "--out-dir", tmp_path).exit_code == 2

    def test_undecodable_file(self, tmp_path):
        bad = tmp_path / "bad.txt"
        bad.write_bytes(b"0.5\n\xff\xfe1.0\n")
        assert invoke("kde", bad, "--out-dir", tmp_path).exit_code == 2

    def test_needs_one_source(self, tmp_path):
        assert invoke("kde", "--out-dir", tmp_path).exit_code == 1


class TestEntryPoint:
    def test_success(self, tmp_path, monkeypatch):
        monkeypatch.setattr(sys, "argv", ["censormorph", "simulate", "--n", "5",
                                          "--out-dir", str(tmp_path)])
        with pytest.raises(SystemExit) as exc:
            main.run()
        assert exc.value.code == 0

    def test_usage_error_exits_with_one(self, monkeypatch):
        monkeypatch.setattr(sys, "argv", ["censormorph", "simulate", "--bogus"])
        with pytest.raises(SystemExit) as exc:
            main.run()
        assert exc.value.code == 1

    def test_data_error_exit_code(self, tmp_path, monkeypatch):
        empty = tmp_path / "empty.txt"
        empty.write_text("", encoding="utf-8")
        monkeypatch.setattr(sys, "argv", ["censormorph", "kde", str(empty),
                                          "--out-dir", str(tmp_path)])
        with pytest.raises(SystemExit) as exc:
            main.run()
        assert exc.value.code == 2

    def test_bad_log_level(self, monkeypatch):
        monkeypatch.setattr(sys, "argv", ["censormorph", "--log-level", "LOUD", "simulate"])
        with pytest.raises(SystemExit) as exc:
            main.run()
        assert exc.value.code == 1
