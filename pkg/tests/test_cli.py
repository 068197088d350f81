import json

import pytest

from radabound.cli import (
    EXIT_BAD_CONFIG,
    EXIT_OK,
    TRACE_HEADER,
    RunConfig,
    load_run_config,
    main,
)
from radabound.errors import ConfigurationError


def small_config_dict(output_dir, **overrides):
    cfg = {
        "experiment": {
            "m_train": 100,
            "m_holdout": 80,
            "m_fresh": 60,
            "d": 5,
            "n_biased": 1,
            "bias": 0.5,
            "seed": 7,
        },
        "guard": {
            "epsilon": 0.3,
            "delta": 0.1,
            "n_vectors": 8,
            "method": "mclt",
            "seed": 7,
        },
        "epsilon_list": [0.2, 0.3],
        "output_dir": str(output_dir),
    }
    cfg.update(overrides)
    return cfg


def write_config(tmp_path, cfg):
    path = tmp_path / "config.json"
    path.write_text(json.dumps(cfg))
    return path


class TestRunConfig:
    def test_epsilons_default_to_guard_epsilon(self, tmp_path):
        cfg = RunConfig.from_dict(small_config_dict(tmp_path, epsilon_list=[]))
        assert cfg.epsilons == (0.3,)

    def test_epsilon_list_must_increase(self, tmp_path):
        with pytest.raises(ConfigurationError):
            RunConfig.from_dict(small_config_dict(tmp_path, epsilon_list=[0.3, 0.2]))

    def test_epsilon_list_range_checked(self, tmp_path):
        with pytest.raises(ConfigurationError):
            RunConfig.from_dict(small_config_dict(tmp_path, epsilon_list=[0.5, 1.5]))

    def test_seed_env_override(self, tmp_path, monkeypatch):
        path = write_config(tmp_path, small_config_dict(tmp_path))
        monkeypatch.setenv("RADABOUND_SEED", "42")
        cfg = load_run_config(path)
        assert cfg.experiment.seed == 42
        assert cfg.guard.seed == 42

    def test_seed_env_override_must_be_int(self, tmp_path, monkeypatch):
        path = write_config(tmp_path, small_config_dict(tmp_path))
        monkeypatch.setenv("RADABOUND_SEED", "not-a-number")
        with pytest.raises(ConfigurationError):
            load_run_config(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigurationError):
            load_run_config(tmp_path / "nope.json")


class TestRunExperimentCommand:
    def test_outputs_and_determinism(self, tmp_path):
        out_a = tmp_path / "a"
        out_b = tmp_path / "b"
        path_a = write_config(tmp_path, small_config_dict(out_a))
        assert main(["run-experiment", "--config", str(path_a)]) == EXIT_OK

        for eps in ("0.2", "0.3"):
            trace = out_a / f"trace_eps{eps}.csv"
            assert trace.exists()
            lines = trace.read_text().strip().split("\n")
            assert lines[0] == TRACE_HEADER
            assert len(lines) >= 2

        summary = json.loads((out_a / "summary.json").read_text())
        assert len(summary["runs"]) == 2
        assert summary["runs"][0]["epsilon"] == 0.2
        assert sorted(summary["column_permutation"]) == list(range(5))

        # byte-identical rerun into a second directory
        (tmp_path / "cfg_b").mkdir()
        path_b = tmp_path / "cfg_b" / "config.json"
        path_b.write_text(json.dumps(small_config_dict(out_b)))
        assert main(["run-experiment", "--config", str(path_b)]) == EXIT_OK
        for name in ("trace_eps0.2.csv", "trace_eps0.3.csv"):
            assert (out_a / name).read_bytes() == (out_b / name).read_bytes()
        # summaries differ only in output_dir; compare with it normalized
        sa = json.loads((out_a / "summary.json").read_text())
        sb = json.loads((out_b / "summary.json").read_text())
        sa["config"]["output_dir"] = sb["config"]["output_dir"] = ""
        assert sa == sb

    def test_dataset_dump_emitted_on_request(self, tmp_path):
        out = tmp_path / "out"
        cfg = small_config_dict(out, epsilon_list=[], emit_dataset_dump=True)
        path = write_config(tmp_path, cfg)
        assert main(["run-experiment", "--config", str(path)]) == EXIT_OK
        for name in ("train", "holdout", "fresh"):
            assert (out / f"dataset_{name}.csv").exists()

    def test_bad_config_exit_code(self, tmp_path):
        cfg = small_config_dict(tmp_path)
        cfg["guard"]["epsilon"] = 0.0
        path = write_config(tmp_path, cfg)
        assert main(["run-experiment", "--config", str(path)]) == EXIT_BAD_CONFIG

    def test_missing_config_exit_code(self, tmp_path):
        assert (
            main(["run-experiment", "--config", str(tmp_path / "nope.json")])
            == EXIT_BAD_CONFIG
        )


class TestCompareBoundsCommand:
    def test_default_table(self, capsys):
        assert main(["compare-bounds"]) == EXIT_OK
        lines = capsys.readouterr().out.strip().split("\n")
        assert lines[0] == "l,mcdiarmid,bernstein,mclt"
        assert len(lines) == 7  # l in {2, 4, 8, 16, 32, 64}
        for line in lines[1:]:
            _, mcd, bern, mclt = map(float, line.split(","))
            assert mclt <= bern <= mcd

    def test_single_l_override(self, capsys):
        assert main(["compare-bounds", "--l", "1"]) == EXIT_OK
        lines = capsys.readouterr().out.strip().split("\n")
        assert len(lines) == 2
        assert lines[1].startswith("1,")

    def test_output_file(self, tmp_path):
        out = tmp_path / "table.csv"
        assert main(["compare-bounds", "--output", str(out)]) == EXIT_OK
        assert out.read_text().startswith("l,mcdiarmid,bernstein,mclt\n")

    def test_bad_eps_exit_code(self, capsys):
        assert main(["compare-bounds", "--eps", "0"]) == EXIT_BAD_CONFIG
        assert "error" in capsys.readouterr().err


class TestThresholdoutSizeCommand:
    def test_worked_example_reports_both_numbers(self, capsys):
        rc = main(
            [
                "thresholdout-size",
                "--k", "10", "--b", "1", "--eps", "0.5", "--delta", "0.1",
            ]
        )
        assert rc == EXIT_OK
        report = json.loads(capsys.readouterr().out)
        assert report["formula_n"] == pytest.approx(3.68e4, rel=1e-2)
        assert report["paper_printed_n"] == 3.7e6
        assert report["radabound_m"] == 4000

    def test_missing_required_flag(self):
        with pytest.raises(SystemExit) as exc:
            main(["thresholdout-size", "--k", "10"])
        assert exc.value.code == 2

    def test_bad_params_exit_code(self, capsys):
        rc = main(
            [
                "thresholdout-size",
                "--k", "0", "--b", "1", "--eps", "0.5", "--delta", "0.1",
            ]
        )
        assert rc == EXIT_BAD_CONFIG
