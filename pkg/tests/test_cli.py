from dataclasses import replace
from pathlib import Path

import numpy as np
import pytest

import oscbath.cli as cli
from oscbath.bath import BathSpec, build_coefficient_table
from oscbath.entanglement import EntanglementReport
from oscbath.errors import ConfigError, NoSignChange, QuadratureFailure
from oscbath.model import SystemParams
from oscbath.states import AsymmetricStateSpec, GhzStateSpec


def tiny_config(tmp_path, **overrides) -> cli.RunConfig:
    base = cli.default_config()
    fields = {"t_max": 0.2, "output_dir": tmp_path / "out"}
    fields.update(overrides)
    return replace(base, **fields)


class TestConfigValidation:
    def test_default_config_is_valid(self):
        freqs = cli.validate_config(cli.default_config())
        assert freqs.omega_f == pytest.approx(1.0)
        assert freqs.omega_n == pytest.approx(1.0)

    def test_rejects_nonpositive_t_max(self, tmp_path):
        with pytest.raises(ConfigError):
            cli.validate_config(tiny_config(tmp_path, t_max=0.0))

    def test_rejects_oversized_dt(self, tmp_path):
        with pytest.raises(ConfigError):
            cli.validate_config(tiny_config(tmp_path, dt=0.06))

    def test_rejects_bad_sample_every(self, tmp_path):
        with pytest.raises(ConfigError):
            cli.validate_config(tiny_config(tmp_path, sample_every=0))

    def test_rejects_unknown_output(self, tmp_path):
        with pytest.raises(ConfigError):
            cli.validate_config(tiny_config(tmp_path, outputs=("movie",)))

    def test_rejects_state_mode_mismatch(self, tmp_path):
        config = tiny_config(tmp_path,
                             system=SystemParams(n_modes=2),
                             initial_state=GhzStateSpec(3, 1.0))
        with pytest.raises(ConfigError):
            cli.validate_config(config)

    def test_asymmetric_needs_three_modes(self, tmp_path):
        config = tiny_config(tmp_path,
                             system=SystemParams(n_modes=2),
                             initial_state=AsymmetricStateSpec(1.0, 1.489))
        with pytest.raises(ConfigError):
            cli.validate_config(config)


class TestConfigFile:
    def test_round_trip(self, tmp_path):
        config = tiny_config(
            tmp_path,
            system=SystemParams(n_modes=3, coupling=0.8),
            bath=BathSpec(gamma0=0.07, temperature=7.5),
            initial_state=AsymmetricStateSpec(1.1, 0.9),
            t_max=12.5, sample_every=50, include_frequency_shift=True,
        )
        path = tmp_path / "config.ini"
        cli.dump_effective_config(config, path)
        assert cli.load_config(path) == config

    def test_dump_deterministic(self, tmp_path):
        config = tiny_config(tmp_path)
        a, b = tmp_path / "a.ini", tmp_path / "b.ini"
        cli.dump_effective_config(config, a)
        cli.dump_effective_config(config, b)
        assert a.read_bytes() == b.read_bytes()

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError):
            cli.load_config(tmp_path / "nope.ini")

    def test_unknown_section(self, tmp_path):
        path = tmp_path / "c.ini"
        path.write_text("[reservoir]\ngamma0 = 0.05\n")
        with pytest.raises(ConfigError):
            cli.load_config(path)

    def test_unknown_key(self, tmp_path):
        path = tmp_path / "c.ini"
        path.write_text("[bath]\nstrength = 0.05\n")
        with pytest.raises(ConfigError):
            cli.load_config(path)

    def test_unknown_state_kind(self, tmp_path):
        path = tmp_path / "c.ini"
        path.write_text("[initial_state]\nkind = thermal\n")
        with pytest.raises(ConfigError):
            cli.load_config(path)

    def test_invalid_value_wrapped(self, tmp_path):
        path = tmp_path / "c.ini"
        path.write_text("[bath]\ngamma0 = -1.0\n")
        with pytest.raises(ConfigError):
            cli.load_config(path)

    def test_defaults_fill_missing_sections(self, tmp_path):
        path = tmp_path / "c.ini"
        path.write_text("[run]\nt_max = 5.0\n")
        config = cli.load_config(path)
        assert config.t_max == 5.0
        assert config.bath == BathSpec()
        assert isinstance(config.initial_state, GhzStateSpec)


class TestApplyParameter:
    def test_squeezing(self):
        config = cli.apply_parameter(cli.default_config(), "r", 1.7)
        assert config.initial_state.r == 1.7

    def test_bath_and_coupling(self):
        base = cli.default_config()
        assert cli.apply_parameter(base, "gamma0", 0.4).bath.gamma0 == 0.4
        assert cli.apply_parameter(base, "temperature", 3.0).bath.temperature == 3.0
        assert cli.apply_parameter(base, "lambda", 0.8).system.coupling == 0.8

    def test_asymmetric_parameters(self):
        base = replace(cli.default_config(),
                       initial_state=AsymmetricStateSpec(1.0, 1.489))
        assert cli.apply_parameter(base, "r0", 2.0).initial_state.r0 == 2.0
        assert cli.apply_parameter(base, "rs", 0.5).initial_state.rs == 0.5

    def test_state_kind_mismatch(self):
        base = cli.default_config()
        with pytest.raises(ConfigError):
            cli.apply_parameter(base, "r0", 2.0)
        asym = replace(base, initial_state=AsymmetricStateSpec(1.0, 1.489))
        with pytest.raises(ConfigError):
            cli.apply_parameter(asym, "r", 2.0)


class TestRun:
    def test_writes_all_outputs(self, tmp_path):
        config = tiny_config(tmp_path)
        cli.run(config, make_plots=True)
        out = config.output_dir
        for name in ("effective_config.ini", "trajectory.csv",
                     "entanglement.csv", "coefficients.csv",
                     "entanglement.svg"):
            assert (out / name).exists(), name

    def test_respects_output_selection(self, tmp_path):
        config = tiny_config(tmp_path, outputs=("entanglement",))
        cli.run(config, make_plots=False)
        out = config.output_dir
        assert (out / "entanglement.csv").exists()
        assert not (out / "trajectory.csv").exists()
        assert not (out / "coefficients.csv").exists()
        assert not (out / "entanglement.svg").exists()

    def test_deterministic(self, tmp_path):
        config_a = tiny_config(tmp_path, output_dir=tmp_path / "a")
        config_b = tiny_config(tmp_path, output_dir=tmp_path / "b")
        cli.run(config_a, make_plots=False)
        cli.run(config_b, make_plots=False)
        for name in ("trajectory.csv", "entanglement.csv", "coefficients.csv"):
            assert ((tmp_path / "a" / name).read_bytes()
                    == (tmp_path / "b" / name).read_bytes()), name

    def test_effective_config_reloads(self, tmp_path):
        config = tiny_config(tmp_path, outputs=("coefficients",))
        cli.run(config, make_plots=False)
        reloaded = cli.load_config(config.output_dir / "effective_config.ini")
        assert reloaded == config


class TestVerdictMachinery:
    def test_horizon_extends_past_t_max(self, table_uncoupled):
        t_h = cli._verdict_horizon(table_uncoupled, 30.0, 1.0)
        gamma_inf = table_uncoupled.plateau()[1]
        assert t_h == pytest.approx(cli.EQUILIBRATION_FOLDS / gamma_inf,
                                    rel=1e-12)

    def test_horizon_keeps_longer_t_max(self, table_uncoupled):
        assert cli._verdict_horizon(table_uncoupled, 500.0, 1.0) == 500.0

    def test_horizon_capped_without_relaxation(self, freqs_uncoupled):
        bath = BathSpec(gamma0=0.0)
        table = build_coefficient_table(bath, freqs_uncoupled,
                                        t_max=0.1, dt=1e-3)
        with pytest.warns(UserWarning):
            t_h = cli._verdict_horizon(table, 0.1, 1.0)
        assert t_h == 2000.0

    def test_late_window_stats(self):
        reports = [
            EntanglementReport(time=float(t), eta=(np.sin(t), 1.0, 1.0),
                               combined_variances=(1.0,) * 6,
                               best_variance=0.5, params=None)
            for t in np.linspace(0.0, 10.0, 101)
        ]
        eta_mean, eta_amp, var_mean = cli._late_window_stats(reports, 10.0)
        tail = np.linspace(8.0, 10.0, 21)
        assert eta_mean == pytest.approx(np.mean(np.sin(tail)), rel=1e-12)
        assert eta_amp == pytest.approx(
            np.max(np.sin(tail)) - np.min(np.sin(tail)), rel=1e-12)
        assert var_mean == 0.5


class TestSweep:
    def test_rows_sorted_and_ok(self, tmp_path, monkeypatch):
        monkeypatch.setattr(cli, "EQUILIBRATION_FOLDS", 0.0)
        base = tiny_config(tmp_path, t_max=2.0)
        spec = cli.SweepSpec(parameter="r", values=(2.0, 1.0, 1.5), base=base)
        n_ok = cli.sweep(spec, tmp_path / "scan")
        assert n_ok == 3
        lines = (tmp_path / "scan" / "sweep.csv").read_text().splitlines()
        assert lines[0] == ("parameter,value,status,eta_late_mean,"
                            "eta_late_amplitude,var_late_mean")
        values = [float(line.split(",")[1]) for line in lines[1:]]
        assert values == [1.0, 1.5, 2.0]
        assert all(line.split(",")[2] == "ok" for line in lines[1:])

    def test_failed_row_is_reported(self, tmp_path, monkeypatch):
        monkeypatch.setattr(cli, "EQUILIBRATION_FOLDS", 0.0)
        real_verdict = cli._verdict_run

        def flaky(config, freqs, table, t_h):
            if config.initial_state.r == 1.5:
                raise QuadratureFailure("synthetic failure")
            return real_verdict(config, freqs, table, t_h)

        monkeypatch.setattr(cli, "_verdict_run", flaky)
        base = tiny_config(tmp_path, t_max=2.0)
        spec = cli.SweepSpec(parameter="r", values=(1.0, 1.5), base=base)
        n_ok = cli.sweep(spec, tmp_path / "scan")
        assert n_ok == 1
        lines = (tmp_path / "scan" / "sweep.csv").read_text().splitlines()
        statuses = {line.split(",")[1]: line.split(",")[2] for line in lines[1:]}
        assert statuses["1.0"] == "ok"
        assert statuses["1.5"] == "error: QuadratureFailure"

    def test_empty_values_rejected(self, tmp_path):
        spec = cli.SweepSpec(parameter="r", values=(), base=tiny_config(tmp_path))
        with pytest.raises(ConfigError):
            cli.sweep(spec, tmp_path / "scan")

    def test_unknown_parameter_rejected(self, tmp_path):
        spec = cli.SweepSpec(parameter="mass", values=(1.0,),
                             base=tiny_config(tmp_path))
        with pytest.raises(ConfigError):
            cli.sweep(spec, tmp_path / "scan")


class TestThresholdValidation:
    def test_needs_symmetric_state(self, tmp_path):
        base = replace(tiny_config(tmp_path),
                       initial_state=AsymmetricStateSpec(1.0, 1.489))
        with pytest.raises(ConfigError):
            cli.threshold_find(base, 1.0, 2.0)

    def test_needs_ordered_range(self, tmp_path):
        with pytest.raises(ConfigError):
            cli.threshold_find(tiny_config(tmp_path), 2.0, 1.0)


class TestMain:
    def test_run_exit_zero(self, tmp_path):
        out = tmp_path / "out"
        code = cli.main(["run", "--out", str(out), "--tmax", "0.2",
                         "--no-plots"])
        assert code == 0
        assert (out / "entanglement.csv").exists()

    def test_run_with_config_file(self, tmp_path):
        path = tmp_path / "config.ini"
        path.write_text(
            "[run]\nt_max = 0.2\noutputs = coefficients\n"
            f"output_dir = {tmp_path / 'out'}\n")
        code = cli.main(["run", "--config", str(path), "--no-plots"])
        assert code == 0
        assert (tmp_path / "out" / "coefficients.csv").exists()

    def test_bad_config_exit_two(self, tmp_path, capsys):
        path = tmp_path / "config.ini"
        path.write_text("[bath]\ngamma0 = -2.0\n")
        code = cli.main(["run", "--config", str(path)])
        assert code == 2
        assert "error:" in capsys.readouterr().err

    def test_oversized_dt_exit_two(self, tmp_path, capsys):
        code = cli.main(["run", "--out", str(tmp_path), "--dt", "0.06",
                         "--tmax", "1.0"])
        assert code == 2
        assert "error:" in capsys.readouterr().err

    def test_no_sign_change_exit_three(self, tmp_path, capsys, monkeypatch):
        def no_flip(base, r_lo, r_hi, tol=1e-3):
            raise NoSignChange("no flip")

        monkeypatch.setattr(cli, "threshold_find", no_flip)
        code = cli.main(["threshold", "--out", str(tmp_path)])
        assert code == 3
        assert "error:" in capsys.readouterr().err

    def test_sweep_all_failed_exit_three(self, tmp_path, capsys, monkeypatch):
        monkeypatch.setattr(cli, "sweep", lambda spec, out_dir: 0)
        code = cli.main(["sweep", "--parameter", "r", "--values", "1.0",
                         "--out", str(tmp_path)])
        assert code == 3
        assert "error:" in capsys.readouterr().err

    def test_dump_coefficients(self, tmp_path):
        out = tmp_path / "out"
        code = cli.main(["dump-coefficients", "--out", str(out),
                         "--tmax", "0.2"])
        assert code == 0
        lines = (out / "coefficients.csv").read_text().splitlines()
        assert lines[0] == "t,omega_shift_sq,gamma_n,d_n,f_n"

    def test_preset_smoke(self, tmp_path):
        out = tmp_path / "figs"
        code = cli.main(["preset", "fig2", "--out", str(out),
                         "--tmax", "0.5"])
        assert code == 0
        assert (out / "fig2" / "fig2.svg").exists()
        sub = sorted(p.name for p in (out / "fig2").iterdir() if p.is_dir())
        assert sub == ["r_1", "r_1.498", "r_2"]
        for name in sub:
            assert (out / "fig2" / name / "entanglement.csv").exists()

    def test_unknown_preset_rejected(self, capsys):
        with pytest.raises(SystemExit):
            cli.main(["preset", "fig9"])
