import pytest

from vmpic.cli import CSV_COLUMNS, main
from vmpic.config import dump_toml, load_toml, preset_config


class TestConfigRoundTrip:
    @pytest.mark.parametrize("name", ["weibel", "streaming_weibel", "landau"])
    def test_toml_roundtrip(self, name, tmp_path):
        config = preset_config(name)
        path = tmp_path / "config.toml"
        with open(path, "w") as fh:
            dump_toml(config, fh)
        assert load_toml(path) == config

    def test_roundtrip_with_overrides(self, tmp_path):
        config = preset_config("weibel", propagator="order4_10lie", dt=0.025,
                               n_particles=12345, fit_windows=((1.0, 2.0),),
                               antithetic=False, include_modified=False)
        path = tmp_path / "config.toml"
        with open(path, "w") as fh:
            dump_toml(config, fh)
        assert load_toml(path) == config

    def test_invalid_propagator_rejected(self):
        with pytest.raises(ValueError):
            preset_config("weibel", propagator="euler")

    def test_invalid_degree_rejected(self):
        with pytest.raises(ValueError):
            preset_config("weibel", degree=1)


class TestCliRuns:
    def test_zero_steps_writes_header_plus_one_row(self, tmp_path, capsys):
        out = tmp_path / "run.csv"
        code = main(["--case", "weibel", "--steps", "0", "--particles", "200",
                     "--out", str(out)])
        assert code == 0
        lines = out.read_text().strip().splitlines()
        assert lines[0] == ",".join(CSV_COLUMNS)
        assert len(lines) == 2
        # the preset fit window has no samples at t_end = 0; it is skipped
        assert "growth_rate_1=" not in capsys.readouterr().out

    def test_short_run_summary_and_schema(self, tmp_path, capsys):
        out = tmp_path / "run.csv"
        code = main(["--case", "weibel", "--steps", "5", "--particles", "400",
                     "--out", str(out)])
        assert code == 0
        captured = capsys.readouterr().out
        assert "max_energy_error=" in captured
        assert "max_gauss_residual=" in captured
        assert "growth_rate_1=" not in captured  # window lies beyond t_end
        lines = out.read_text().strip().splitlines()
        assert lines[0] == ",".join(CSV_COLUMNS)
        assert len(lines) == 7  # header + t=0 + 5 steps
        first = dict(zip(CSV_COLUMNS, map(float, lines[1].split(","))))
        assert first["time"] == 0.0
        assert first["total_err"] == 0.0

    def test_full_precision_roundtrip(self, tmp_path):
        out = tmp_path / "run.csv"
        main(["--case", "weibel", "--steps", "2", "--particles", "400",
              "--out", str(out)])
        lines = out.read_text().strip().splitlines()
        row = lines[2].split(",")
        # repr round-trips doubles exactly
        assert float(row[5]) == float(repr(float(row[5])))

    def test_malformed_config_exits_1(self, tmp_path):
        bad = tmp_path / "bad.toml"
        bad.write_text("[case]\nid = \"weibel\"\n\n[time]\ndt = -0.5\n")
        assert main(["--config", str(bad)]) == 1

    def test_unknown_case_exits_1(self, tmp_path):
        missing = tmp_path / "nope.toml"
        assert main(["--config", str(missing)]) == 1

    def test_boris_dispatch(self, tmp_path, capsys):
        out = tmp_path / "run.csv"
        code = main(["--case", "weibel", "--steps", "3", "--particles", "400",
                     "--propagator", "boris", "--out", str(out)])
        assert code == 0
        lines = out.read_text().strip().splitlines()
        assert len(lines) == 5

    def test_steps_flag_overrides_preset_t_end(self, tmp_path):
        out = tmp_path / "run.csv"
        main(["--case", "landau", "--steps", "4", "--particles", "400",
              "--out", str(out), "--dt", "0.1"])
        lines = out.read_text().strip().splitlines()
        last = dict(zip(CSV_COLUMNS, map(float, lines[-1].split(","))))
        assert last["time"] == pytest.approx(0.4)


class TestFitWindowPlumbing:
    def test_window_fit_from_cli(self, tmp_path, capsys):
        # a tiny landau run long enough for the first fit window
        out = tmp_path / "run.csv"
        code = main(["--case", "landau", "--particles", "4000",
                     "--t-end", "3.0", "--out", str(out),
                     "--fit-window", "0.2", "2.8", "--fit-peaks", "false",
                     "--fit-field", "e1"])
        assert code == 0
        captured = capsys.readouterr().out
        line = [l for l in captured.splitlines() if l.startswith("growth_rate_1=")]
        assert len(line) == 1
        float(line[0].split("=")[1])
