"""Command-line interface: configured runs, figure presets, parameter sweeps,
and the squeezing-threshold search.

Config files are INI-style with sections [system], [bath], [initial_state],
[run]; every key is optional and defaults to the values below. The effective
configuration (all fields resolved) is dumped next to the outputs so a run
can be reproduced from its own artifacts.

Late-time verdicts (sweep rows, threshold bisection) are averaged over the
tail [0.8 t_h, t_h] of an equilibrated horizon t_h = max(t_max, 8 / gamma_inf)
rather than the plotting window t_max: at weak damping the collective mode
has not relaxed by t = 30, and judging stationarity there biases the
threshold estimate visibly.
"""
from __future__ import annotations

import argparse
import math
import os
import sys
import warnings
from concurrent.futures import ThreadPoolExecutor
from configparser import ConfigParser
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .bath import BathSpec, build_coefficient_table, write_coefficient_csv
from .dynamics import Trajectory, evolve, write_trajectory_csv
from .entanglement import entanglement_report, write_report_csv
from .errors import (ConfigError, FrequencyImaginary, GridTooCoarse,
                     InvalidModeCount, NoSignChange, OscbathError,
                     QuadratureFailure, StepTooLarge, TimeOutOfRange,
                     UnsupportedModeCount)
from .model import (EffectiveFrequencies, SystemParams, effective_frequencies,
                    expand_to_phase_space, mode_transform)
from .states import (AsymmetricStateSpec, GhzStateSpec,
                     asymmetric_initial_covariance, ghz_initial_covariance)

OUTPUT_KINDS = ("trajectory", "entanglement", "coefficients")
SWEEP_PARAMETERS = ("r", "r0", "rs", "gamma0", "lambda", "temperature")

# late-time verdicts wait this many relaxation times 1/gamma_inf
EQUILIBRATION_FOLDS = 8.0
LATE_WINDOW_FRACTION = 0.8


@dataclass(frozen=True)
class RunConfig:
    """One fully specified simulation run."""
    system: SystemParams
    bath: BathSpec
    initial_state: GhzStateSpec | AsymmetricStateSpec
    t_max: float = 30.0
    dt: float = 1e-3
    outputs: tuple[str, ...] = OUTPUT_KINDS
    output_dir: Path = Path("out")
    sample_every: int = 100
    include_frequency_shift: bool = False


@dataclass(frozen=True)
class SweepSpec:
    """A one-parameter scan around a base configuration."""
    parameter: str
    values: tuple[float, ...]
    base: RunConfig


def default_config() -> RunConfig:
    return RunConfig(system=SystemParams(n_modes=3), bath=BathSpec(),
                     initial_state=GhzStateSpec(n_modes=3, r=1.0))


def validate_config(config: RunConfig) -> EffectiveFrequencies:
    """Check the cross-field invariants; returns the mode frequencies."""
    if config.t_max <= 0:
        raise ConfigError(f"t_max must be positive, got {config.t_max}")
    if config.dt <= 0:
        raise ConfigError(f"dt must be positive, got {config.dt}")
    if config.sample_every < 1:
        raise ConfigError(f"sample_every must be >= 1, got {config.sample_every}")
    bad = [k for k in config.outputs if k not in OUTPUT_KINDS]
    if bad:
        raise ConfigError(f"unknown outputs {bad}; valid: {OUTPUT_KINDS}")
    state = config.initial_state
    if isinstance(state, GhzStateSpec):
        if state.n_modes != config.system.n_modes:
            raise ConfigError(
                f"initial state has {state.n_modes} modes, system has "
                f"{config.system.n_modes}")
    elif isinstance(state, AsymmetricStateSpec):
        if config.system.n_modes != 3:
            raise ConfigError("the asymmetric state needs n_modes = 3")
    else:
        raise ConfigError(f"unsupported initial state {type(state).__name__}")
    freqs = effective_frequencies(config.system)
    bound = 0.05 / max(freqs.omega_n, freqs.omega_f)
    if config.dt > bound * (1.0 + 1e-12):
        raise ConfigError(
            f"dt = {config.dt:g} exceeds the integration step bound {bound:g}")
    return freqs


_SECTION_KEYS = {
    "system": {"n_modes", "mass", "omega", "lambda"},
    "bath": {"gamma0", "cutoff", "ohmicity", "temperature"},
    "initial_state": {"kind", "r", "r0", "rs"},
    "run": {"t_max", "dt", "outputs", "output_dir", "sample_every",
            "include_frequency_shift"},
}


def load_config(path) -> RunConfig:
    """Parse an INI config file; unknown sections or keys are errors."""
    cp = ConfigParser()
    if not cp.read(path):
        raise ConfigError(f"cannot read config file {path}")
    for section in cp.sections():
        if section not in _SECTION_KEYS:
            raise ConfigError(f"unknown config section [{section}]")
        extra = set(cp[section]) - _SECTION_KEYS[section]
        if extra:
            raise ConfigError(
                f"unknown keys in [{section}]: {sorted(extra)}")
    try:
        system = SystemParams(
            n_modes=cp.getint("system", "n_modes", fallback=3),
            mass=cp.getfloat("system", "mass", fallback=1.0),
            omega=cp.getfloat("system", "omega", fallback=1.0),
            coupling=cp.getfloat("system", "lambda", fallback=0.0))
        bath = BathSpec(
            gamma0=cp.getfloat("bath", "gamma0", fallback=0.05),
            cutoff=cp.getfloat("bath", "cutoff", fallback=100.0),
            ohmicity=cp.getfloat("bath", "ohmicity", fallback=1.0),
            temperature=cp.getfloat("bath", "temperature", fallback=10.0))
        kind = cp.get("initial_state", "kind", fallback="ghz").strip().lower()
        if kind == "ghz":
            state = GhzStateSpec(
                n_modes=system.n_modes,
                r=cp.getfloat("initial_state", "r", fallback=1.0))
        elif kind == "asymmetric":
            state = AsymmetricStateSpec(
                r0=cp.getfloat("initial_state", "r0", fallback=1.0),
                rs=cp.getfloat("initial_state", "rs", fallback=1.489))
        else:
            raise ConfigError(f"unknown initial state kind {kind!r}")
        outputs_raw = cp.get("run", "outputs",
                             fallback=", ".join(OUTPUT_KINDS))
        outputs = tuple(k.strip() for k in outputs_raw.split(",") if k.strip())
        config = RunConfig(
            system=system, bath=bath, initial_state=state,
            t_max=cp.getfloat("run", "t_max", fallback=30.0),
            dt=cp.getfloat("run", "dt", fallback=1e-3),
            outputs=outputs,
            output_dir=Path(cp.get("run", "output_dir", fallback="out")),
            sample_every=cp.getint("run", "sample_every", fallback=100),
            include_frequency_shift=cp.getboolean(
                "run", "include_frequency_shift", fallback=False))
    except (ValueError, InvalidModeCount, UnsupportedModeCount) as exc:
        raise ConfigError(f"invalid config value: {exc}") from exc
    return config


def dump_effective_config(config: RunConfig, path) -> None:
    """Write the fully resolved configuration; re-ingesting it reproduces
    the same RunConfig."""
    state = config.initial_state
    if isinstance(state, GhzStateSpec):
        state_lines = [("kind", "ghz"), ("r", repr(float(state.r)))]
    else:
        state_lines = [("kind", "asymmetric"), ("r0", repr(float(state.r0))),
                       ("rs", repr(float(state.rs)))]
    sections = [
        ("system", [("n_modes", str(config.system.n_modes)),
                    ("mass", repr(float(config.system.mass))),
                    ("omega", repr(float(config.system.omega))),
                    ("lambda", repr(float(config.system.coupling)))]),
        ("bath", [("gamma0", repr(float(config.bath.gamma0))),
                  ("cutoff", repr(float(config.bath.cutoff))),
                  ("ohmicity", repr(float(config.bath.ohmicity))),
                  ("temperature", repr(float(config.bath.temperature)))]),
        ("initial_state", state_lines),
        ("run", [("t_max", repr(float(config.t_max))),
                 ("dt", repr(float(config.dt))),
                 ("outputs", ", ".join(config.outputs)),
                 ("output_dir", str(config.output_dir)),
                 ("sample_every", str(config.sample_every)),
                 ("include_frequency_shift",
                  str(config.include_frequency_shift).lower())]),
    ]
    with open(path, "w") as fh:
        for name, pairs in sections:
            fh.write(f"[{name}]\n")
            for key, value in pairs:
                fh.write(f"{key} = {value}\n")
            fh.write("\n")


def _initial_covariance(config: RunConfig):
    state = config.initial_state
    if isinstance(state, GhzStateSpec):
        return ghz_initial_covariance(state)
    return asymmetric_initial_covariance(state)


def _time_grid(t_end: float, dt: float) -> np.ndarray:
    return np.arange(round(t_end / dt) + 1) * dt


def _sample_reports(config: RunConfig, traj: Trajectory):
    """Entanglement reports at every sample_every-th trajectory point.

    Symmetric states are analyzed in the bare basis (negativity and, for
    three modes, the squeezing witness); the asymmetric state is analyzed
    per collective mode in the transformed basis, where the per-mode
    transpositions match the figure's eta_2 / eta_3 labels.
    """
    s = None
    if isinstance(config.initial_state, GhzStateSpec):
        s = expand_to_phase_space(mode_transform(config.system.n_modes))
    return [entanglement_report(traj.state(k), s)
            for k in range(0, len(traj), config.sample_every)]


def _pipeline(config: RunConfig, *, freqs=None, table=None, t_end=None):
    """Shared run core: table, evolution, sampled entanglement reports."""
    if freqs is None:
        freqs = validate_config(config)
    if t_end is None:
        t_end = config.t_max
    if table is None:
        table = build_coefficient_table(config.bath, freqs, t_max=t_end,
                                        dt=config.dt, mass=config.system.mass)
    v0 = _initial_covariance(config)
    traj = evolve(v0, _time_grid(t_end, config.dt), table, freqs=freqs,
                  mass=config.system.mass,
                  include_frequency_shift=config.include_frequency_shift)
    return freqs, table, traj, _sample_reports(config, traj)


def run(config: RunConfig, *, make_plots: bool = True) -> None:
    """Execute one configured run and write its artifacts."""
    out = Path(config.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    freqs = validate_config(config)
    dump_effective_config(config, out / "effective_config.ini")
    _, table, traj, reports = _pipeline(config, freqs=freqs)
    if "trajectory" in config.outputs:
        write_trajectory_csv(traj, out / "trajectory.csv",
                             every=config.sample_every)
    if "entanglement" in config.outputs:
        write_report_csv(reports, out / "entanglement.csv")
    if "coefficients" in config.outputs:
        write_coefficient_csv(table, out / "coefficients.csv")
    if make_plots:
        _plot_run(reports, out / "entanglement.svg")


# --- plots ------------------------------------------------------------------

def _pyplot():
    import matplotlib
    matplotlib.use("Agg", force=True)
    matplotlib.rcParams["svg.hashsalt"] = "oscbath"
    import matplotlib.pyplot as plt
    return plt


def _save(fig, path):
    fig.savefig(path, format="svg", metadata={"Date": None})


def _plot_run(reports, path) -> None:
    plt = _pyplot()
    ts = [r.time for r in reports]
    n = len(reports[0].eta)
    fig, (ax1, ax2) = plt.subplots(2, 1, sharex=True, figsize=(6.4, 6.0))
    for j in range(n):
        ax1.plot(ts, [-r.eta[j] for r in reports], label=rf"$-\eta_{j + 1}$")
    ax1.axhline(0.0, color="0.75", lw=0.8)
    ax1.set_ylabel(r"$-\eta_j$")
    ax1.legend(loc="best", fontsize=8)
    ax2.plot(ts, [r.best_variance for r in reports], color="tab:red")
    ax2.axhline(1.0, color="0.75", lw=0.8)
    ax2.set_ylabel("min combined variance")
    ax2.set_xlabel("t")
    fig.tight_layout()
    _save(fig, path)
    plt.close(fig)


def _plot_preset(curves, path, *, per_mode: bool = False) -> None:
    """Combined preset figure: -eta vs t, one curve set per parameter value."""
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    styles = ["-", "--", ":", "-."]
    for k, (label, reports) in enumerate(curves):
        ts = [r.time for r in reports]
        if per_mode:
            ax.plot(ts, [-r.eta[1] for r in reports], styles[k % 4],
                    label=rf"$-\eta_2$, {label}")
            ax.plot(ts, [-r.eta[2] for r in reports], styles[k % 4],
                    alpha=0.45, label=rf"$-\eta_3$, {label}")
        else:
            ax.plot(ts, [-min(r.eta) for r in reports], styles[k % 4],
                    label=label)
    ax.axhline(0.0, color="0.75", lw=0.8)
    ax.set_xlabel("t")
    ax.set_ylabel(r"$-\eta$")
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    _save(fig, path)
    plt.close(fig)


# --- presets ------------------------------------------------------------------

def _preset_base() -> RunConfig:
    return default_config()


def _preset_runs(name: str) -> tuple[RunConfig, str, tuple[float, ...]]:
    base = _preset_base()
    if name == "fig2":
        return base, "r", (1.0, 1.498, 2.0)
    if name == "fig3":
        base = replace(base, initial_state=GhzStateSpec(n_modes=3, r=1.6))
        return base, "gamma0", (0.05, 1.0, 5.0)
    if name == "fig4":
        base = replace(base, system=SystemParams(n_modes=3, coupling=0.8))
        return base, "r", (1.0, 1.498, 2.0)
    if name == "fig5":
        base = replace(base, initial_state=AsymmetricStateSpec(r0=1.0, rs=1.489))
        return base, "r0", (1.0, 1.489, 2.0)
    raise ConfigError(f"unknown preset {name!r}")


def apply_parameter(config: RunConfig, name: str, value: float) -> RunConfig:
    """Return the config with one sweepable parameter replaced."""
    if name == "gamma0":
        return replace(config, bath=replace(config.bath, gamma0=value))
    if name == "temperature":
        return replace(config, bath=replace(config.bath, temperature=value))
    if name == "lambda":
        return replace(config, system=replace(config.system, coupling=value))
    state = config.initial_state
    if name == "r":
        if not isinstance(state, GhzStateSpec):
            raise ConfigError("parameter 'r' needs the symmetric initial state")
        return replace(config, initial_state=replace(state, r=value))
    if name in ("r0", "rs"):
        if not isinstance(state, AsymmetricStateSpec):
            raise ConfigError(
                f"parameter {name!r} needs the asymmetric initial state")
        return replace(config, initial_state=replace(state, **{name: value}))
    raise ConfigError(f"unknown sweep parameter {name!r}; "
                      f"valid: {SWEEP_PARAMETERS}")


def preset(name: str, out_dir, *, dt: float | None = None,
           t_max: float | None = None, make_plots: bool = True) -> None:
    """Run one of the canned figure scenarios into out_dir/<name>/."""
    base, param, values = _preset_runs(name)
    if dt is not None:
        base = replace(base, dt=dt)
    if t_max is not None:
        base = replace(base, t_max=t_max)
    root = Path(out_dir) / name
    curves = []
    cache: dict = {}
    for value in values:
        config = apply_parameter(base, param, value)
        config = replace(config, output_dir=root / f"{param}_{value:g}")
        freqs = validate_config(config)
        key = (config.bath, freqs, config.system.mass, config.dt)
        out = Path(config.output_dir)
        out.mkdir(parents=True, exist_ok=True)
        dump_effective_config(config, out / "effective_config.ini")
        if key not in cache:
            cache[key] = build_coefficient_table(
                config.bath, freqs, t_max=config.t_max, dt=config.dt,
                mass=config.system.mass)
        _, table, traj, reports = _pipeline(config, freqs=freqs,
                                            table=cache[key])
        if "trajectory" in config.outputs:
            write_trajectory_csv(traj, out / "trajectory.csv",
                                 every=config.sample_every)
        if "entanglement" in config.outputs:
            write_report_csv(reports, out / "entanglement.csv")
        if "coefficients" in config.outputs:
            write_coefficient_csv(table, out / "coefficients.csv")
        curves.append((f"{param}={value:g}", reports))
    if make_plots:
        _plot_preset(curves, root / f"{name}.svg", per_mode=name == "fig5")


# --- equilibrated late-time verdicts -----------------------------------------

def _verdict_horizon(table, t_max: float, omega_n: float) -> float:
    """Time to integrate to before judging stationary behavior."""
    gamma_inf = table.plateau()[1]
    cap = max(t_max, 2000.0 / omega_n)
    if gamma_inf <= 0.0:
        warnings.warn("no relaxation detected; capping the verdict horizon "
                      f"at t = {cap:g}", stacklevel=2)
        return cap
    t_h = max(t_max, EQUILIBRATION_FOLDS / gamma_inf)
    if t_h > cap:
        warnings.warn(f"relaxation time 1/{gamma_inf:g} pushes the verdict "
                      f"horizon past t = {cap:g}; capping", stacklevel=2)
        t_h = cap
    return t_h


def _equilibrated_table(config: RunConfig, freqs: EffectiveFrequencies):
    """Coefficient table long enough for the equilibrated verdict window."""
    table = build_coefficient_table(config.bath, freqs, t_max=config.t_max,
                                    dt=config.dt, mass=config.system.mass)
    t_h = _verdict_horizon(table, config.t_max, freqs.omega_n)
    if t_h > table.t_max + 1e-9:
        table = build_coefficient_table(config.bath, freqs, t_max=t_h,
                                        dt=config.dt, mass=config.system.mass)
    return table, t_h


def _late_window_stats(reports, t_h: float) -> tuple[float, float, float]:
    """(mean, amplitude) of min eta and mean min variance over the tail."""
    tail = [r for r in reports if r.time >= LATE_WINDOW_FRACTION * t_h - 1e-9]
    etas = [min(r.eta) for r in tail]
    variances = [r.best_variance for r in tail]
    return (float(np.mean(etas)), float(np.max(etas) - np.min(etas)),
            float(np.mean(variances)))


def _verdict_run(config: RunConfig, freqs, table, t_h: float):
    """Evolve to the verdict horizon and report tail statistics."""
    config = replace(config, t_max=t_h)
    _, _, _, reports = _pipeline(config, freqs=freqs, table=table, t_end=t_h)
    return _late_window_stats(reports, t_h)


# --- sweep --------------------------------------------------------------------

def sweep(spec: SweepSpec, out_dir) -> int:
    """Run the scan, write sweep.csv, return the number of successful rows."""
    if not spec.values:
        raise ConfigError("sweep needs a nonempty value list")
    if spec.parameter not in SWEEP_PARAMETERS:
        raise ConfigError(f"unknown sweep parameter {spec.parameter!r}; "
                          f"valid: {SWEEP_PARAMETERS}")
    values = tuple(sorted(spec.values))
    configs = [apply_parameter(spec.base, spec.parameter, v) for v in values]

    # tables are built serially (shared across rows where the bath and
    # frequencies coincide); rows then evolve concurrently
    prepared = []
    cache: dict = {}
    for config in configs:
        freqs = validate_config(config)
        key = (config.bath, freqs, config.system.mass, config.dt)
        if key not in cache:
            cache[key] = _equilibrated_table(config, freqs)
        table, t_h = cache[key]
        prepared.append((config, freqs, table, t_h))

    def row(job):
        config, freqs, table, t_h = job
        try:
            eta_mean, eta_amp, var_mean = _verdict_run(config, freqs, table, t_h)
            return ("ok", eta_mean, eta_amp, var_mean)
        except OscbathError as exc:
            return (f"error: {type(exc).__name__}", math.nan, math.nan, math.nan)

    env = os.environ.get("OSCBATH_THREADS", "")
    max_workers = min(len(prepared), os.cpu_count() or 1, 8)
    if env.strip():
        max_workers = max(1, min(max_workers, int(env)))
    with ThreadPoolExecutor(max_workers=max_workers) as pool:
        results = list(pool.map(row, prepared))

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "sweep.csv", "w", newline="") as fh:
        fh.write("parameter,value,status,eta_late_mean,eta_late_amplitude,"
                 "var_late_mean\n")
        for value, (status, eta_mean, eta_amp, var_mean) in zip(values, results):
            fh.write(",".join([spec.parameter, repr(float(value)), status,
                               repr(float(eta_mean)), repr(float(eta_amp)),
                               repr(float(var_mean))]) + "\n")
    return sum(1 for r in results if r[0] == "ok")


# --- threshold ----------------------------------------------------------------

def threshold_find(base: RunConfig, r_lo: float, r_hi: float,
                   tol: float = 1e-3) -> float:
    """Bisect the squeezing r at which late-time entanglement appears.

    The verdict at each r is the sign of the tail-averaged min eta on the
    equilibrated horizon. Raises NoSignChange when both endpoints agree.
    """
    if not isinstance(base.initial_state, GhzStateSpec):
        raise ConfigError("threshold search varies 'r'; it needs the "
                          "symmetric initial state")
    if not r_lo < r_hi:
        raise ConfigError(f"need r_lo < r_hi, got {r_lo} >= {r_hi}")
    freqs = validate_config(base)
    table, t_h = _equilibrated_table(base, freqs)

    def entangled(r: float) -> bool:
        config = apply_parameter(base, "r", r)
        eta_mean, _, _ = _verdict_run(config, freqs, table, t_h)
        return eta_mean < 0.0

    lo_state = entangled(r_lo)
    hi_state = entangled(r_hi)
    if lo_state == hi_state:
        raise NoSignChange(
            f"late-time verdict does not change over [{r_lo:g}, {r_hi:g}]")
    lo, hi = r_lo, r_hi
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if entangled(mid) == lo_state:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


# --- argument parsing ---------------------------------------------------------

def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", type=Path, default=None,
                        help="INI config file (defaults applied per key)")
    parser.add_argument("--out", type=Path, default=None,
                        help="output directory (overrides the config)")
    parser.add_argument("--dt", type=float, default=None,
                        help="integration step override")
    parser.add_argument("--tmax", type=float, default=None,
                        help="simulated time override")
    parser.add_argument("--no-plots", action="store_true",
                        help="skip SVG plot emission")


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="oscbath",
        description="Covariance dynamics and entanglement diagnostics of "
                    "oscillators relaxing through a common reservoir.")
    sub = parser.add_subparsers(dest="command", required=True)
    _add_common(sub.add_parser("run", help="one configured run"))
    p_sweep = sub.add_parser("sweep", help="scan one parameter")
    _add_common(p_sweep)
    p_sweep.add_argument("--parameter", required=True,
                         choices=SWEEP_PARAMETERS)
    p_sweep.add_argument("--values", required=True,
                         help="comma-separated list, e.g. 1.0,1.5,2.0")
    p_thr = sub.add_parser("threshold",
                           help="bisect the late-time entanglement threshold in r")
    _add_common(p_thr)
    p_thr.add_argument("--r-lo", type=float, default=1.0)
    p_thr.add_argument("--r-hi", type=float, default=2.0)
    p_preset = sub.add_parser("preset", help="run a canned figure scenario")
    _add_common(p_preset)
    p_preset.add_argument("name", choices=("fig2", "fig3", "fig4", "fig5"))
    _add_common(sub.add_parser("dump-coefficients",
                               help="write the bath coefficient table as CSV"))
    return parser


def _config_from_args(args) -> RunConfig:
    config = load_config(args.config) if args.config else default_config()
    if args.out is not None:
        config = replace(config, output_dir=Path(args.out))
    if args.dt is not None:
        config = replace(config, dt=args.dt)
    if args.tmax is not None:
        config = replace(config, t_max=args.tmax)
    return config


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        if args.command == "run":
            run(_config_from_args(args), make_plots=not args.no_plots)
        elif args.command == "sweep":
            config = _config_from_args(args)
            values = tuple(float(v) for v in args.values.split(",") if v.strip())
            spec = SweepSpec(parameter=args.parameter, values=values,
                             base=config)
            n_ok = sweep(spec, config.output_dir)
            if n_ok == 0:
                print("error: every sweep row failed", file=sys.stderr)
                return 3
        elif args.command == "threshold":
            config = _config_from_args(args)
            r_star = threshold_find(config, args.r_lo, args.r_hi)
            print(f"{r_star:.6f}")
        elif args.command == "preset":
            out = args.out if args.out is not None else Path("out")
            preset(args.name, out, dt=args.dt, t_max=args.tmax,
                   make_plots=not args.no_plots)
        elif args.command == "dump-coefficients":
            config = _config_from_args(args)
            freqs = validate_config(config)
            table = build_coefficient_table(
                config.bath, freqs, t_max=config.t_max, dt=config.dt,
                mass=config.system.mass)
            out = Path(config.output_dir)
            out.mkdir(parents=True, exist_ok=True)
            write_coefficient_csv(table, out / "coefficients.csv")
    except (ConfigError, GridTooCoarse, StepTooLarge, InvalidModeCount,
            UnsupportedModeCount, FrequencyImaginary, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (QuadratureFailure, TimeOutOfRange, NoSignChange,
            OscbathError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
