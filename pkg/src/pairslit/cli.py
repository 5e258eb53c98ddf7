"""Command-line front end: named scenarios, config files, CSV/JSON export.

Each subcommand runs one scenario and writes per-trajectory CSV files plus a
summary.json into the output directory. Physics for the named scenarios is
pinned in code; a JSON config file (documented in the README, versioned via
config_version) can adjust batch settings everywhere and the physics for the
custom scenario. Command-line flags win over file values.

Exit codes: 0 success; 1 configuration problem; 2 runtime failure (abort
fraction above threshold, or a failed four-slit property check).
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from . import __version__
from .ensemble import run_ensemble
from .errors import ConfigError, PairslitError
from .fourslit import (
    SlitRegion,
    corrected_four_slit_psi,
    corrected_velocity,
    map_trajectory_to_double_slit,
    naive_four_slit_psi,
    naive_velocity,
)
from .integrator import IntegratorConfig, Trajectory, TrajectoryStatus, integrate_trajectory
from .params import PairConfiguration, PhysicalParams, SpinStatistics
from .sampling import SamplerConfig
from .wavefunction import Slit, psi_pair, psi_slit

SCENARIOS = ("fig3a", "fig3b", "fig4a", "fig4b", "four-slit-check", "equivariance", "custom")

_SCENARIO_HELP = {
    "fig3a": "fan of sampled pair trajectories, fast flight (packets barely spread)",
    "fig3b": "fan of sampled pair trajectories, slow flight (packets strongly spread)",
    "fig4a": "three mirror-symmetric pairs whose tracks stay symmetric",
    "fig4b": "three pairs released off-axis; one lower track crosses the axis",
    "four-slit-check": "pass/fail property report for the facing double-slit setup",
    "equivariance": "transported ensemble scored against the exact density",
    "custom": "physics and batch settings taken from a config file",
}

_SPEED_FAST = 2.0e7
_SPEED_SLOW = 2.0e6
_ABORT_THRESHOLD = 1e-3
_N_TIMES_TRAJECTORIES = 101
_CONFIG_VERSION = 1

_TOP_KEYS = ("config_version", "scenario", "stats", "output_dir", "params", "sampler", "integrator")
_PARAM_KEYS = ("m", "hbar", "sigma0", "Y", "kx", "ky", "d", "L")
_SAMPLER_KEYS = ("method", "n_pairs", "seed")
_INTEGRATOR_KEYS = ("rel_tol", "abs_tol", "h_init", "h_min", "h_max", "density_floor")


@dataclass(frozen=True)
class ScenarioConfig:
    """Everything one scenario run needs, fully validated."""

    scenario: str
    params: PhysicalParams
    sampler: SamplerConfig
    integrator: IntegratorConfig
    stats: SpinStatistics
    output_dir: str


def default_config(scenario: str, output_dir: str | None = None) -> ScenarioConfig:
    """Pinned defaults for a named scenario (electron baseline geometry)."""
    if scenario not in SCENARIOS:
        raise ConfigError([f"scenario: unknown name {scenario!r}"])
    slow = ("fig3b", "fig4a", "fig4b", "equivariance", "four-slit-check")
    speed = _SPEED_SLOW if scenario in slow else _SPEED_FAST
    params = PhysicalParams.baseline(x_speed=speed)
    if scenario in ("fig3a", "fig3b"):
        sampler = SamplerConfig(method="independent_gaussian", n_pairs=25, seed=0)
    elif scenario in ("fig4a", "fig4b"):
        sampler = SamplerConfig(method="all_symmetric", n_pairs=3, seed=0)
    elif scenario == "equivariance":
        sampler = SamplerConfig(method="exact_rejection", n_pairs=1000, seed=0)
    else:
        sampler = SamplerConfig()
    return ScenarioConfig(
        scenario=scenario,
        params=params,
        sampler=sampler,
        integrator=IntegratorConfig(),
        stats=SpinStatistics.BOSON,
        output_dir=output_dir or "runs_" + scenario.replace("-", "_"),
    )


def serialize_config(cfg: ScenarioConfig) -> dict:
    """JSON-ready dict; validate_config of the dump reproduces cfg exactly."""
    return {
        "config_version": _CONFIG_VERSION,
        "scenario": cfg.scenario,
        "stats": cfg.stats.value,
        "output_dir": cfg.output_dir,
        "params": {k: getattr(cfg.params, k) for k in _PARAM_KEYS},
        "sampler": {k: getattr(cfg.sampler, k) for k in _SAMPLER_KEYS},
        "integrator": {k: getattr(cfg.integrator, k) for k in _INTEGRATOR_KEYS},
    }


def _check_number(raw: dict, section: str, key: str, problems: list, allow_none=False):
    value = raw[key]
    if value is None and allow_none:
        return value
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        problems.append(f"{section}{key}: expected a number, got {value!r}")
        return None
    return value


def _build_section(raw, section, keys, problems) -> dict:
    if not isinstance(raw, dict):
        problems.append(f"{section.rstrip('.')}: expected an object")
        return {}
    for key in sorted(set(raw) - set(keys)):
        problems.append(f"{section}{key}: unknown key")
    return {k: raw[k] for k in keys if k in raw}


def validate_config(path, expected_scenario: str | None = None) -> ScenarioConfig:
    """Load and fully validate a JSON scenario config.

    Unknown keys anywhere are rejected. Named scenarios may not override the
    params section (the scenario pins the physics); batch settings (sampler,
    integrator, stats, output_dir) may be adjusted for any scenario. Raises
    ConfigError carrying one diagnostic per offending field.
    """
    problems: list[str] = []
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError([f"cannot read config: {exc}"]) from exc
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError([f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}"]) from exc
    if not isinstance(raw, dict):
        raise ConfigError(["top level: expected an object"])

    for key in sorted(set(raw) - set(_TOP_KEYS)):
        problems.append(f"{key}: unknown key")
    version = raw.get("config_version", _CONFIG_VERSION)
    if version != _CONFIG_VERSION:
        problems.append(f"config_version: expected {_CONFIG_VERSION}, got {version!r}")

    scenario = raw.get("scenario", expected_scenario or "custom")
    if scenario not in SCENARIOS:
        problems.append(f"scenario: must be one of {', '.join(SCENARIOS)}")
        raise ConfigError(problems)
    if expected_scenario is not None and scenario != expected_scenario:
        problems.append(
            f"scenario: file says {scenario!r} but the {expected_scenario!r} subcommand was invoked"
        )

    cfg = default_config(scenario)

    if "params" in raw:
        fields = _build_section(raw["params"], "params.", _PARAM_KEYS, problems)
        numbers = {
            k: v
            for k, v in fields.items()
            if _check_number(fields, "params.", k, problems) is not None
        }
        if scenario != "custom":
            # named scenarios pin the physics; tolerate an exact echo so a
            # serialized config validates, reject any actual override
            for key, value in numbers.items():
                pinned = getattr(cfg.params, key)
                if value != pinned:
                    problems.append(
                        f"params.{key}: the {scenario!r} scenario pins this to {pinned!r}; "
                        "only 'custom' accepts overrides"
                    )
        else:
            try:
                cfg = replace(cfg, params=replace(cfg.params, **numbers))
            except ValueError as exc:
                problems.append(f"params.{exc}")

    if "sampler" in raw:
        fields = _build_section(raw["sampler"], "sampler.", _SAMPLER_KEYS, problems)
        for key in ("n_pairs", "seed"):
            if key in fields and (isinstance(fields[key], bool) or not isinstance(fields[key], int)):
                problems.append(f"sampler.{key}: expected an integer, got {fields[key]!r}")
                fields.pop(key)
        try:
            cfg = replace(cfg, sampler=replace(cfg.sampler, **fields))
        except ValueError as exc:
            problems.append(f"sampler.{exc}")

    if "integrator" in raw:
        fields = _build_section(raw["integrator"], "integrator.", _INTEGRATOR_KEYS, problems)
        numbers = {}
        for k, v in fields.items():
            allow_none = k.startswith("h_")
            checked = _check_number(fields, "integrator.", k, problems, allow_none=allow_none)
            if checked is not None or (v is None and allow_none):
                numbers[k] = v
        try:
            cfg = replace(cfg, integrator=replace(cfg.integrator, **numbers))
        except ValueError as exc:
            problems.append(f"integrator.{exc}")

    if "stats" in raw:
        try:
            cfg = replace(cfg, stats=SpinStatistics(raw["stats"]))
        except ValueError:
            problems.append(f"stats: expected 'boson' or 'fermion', got {raw['stats']!r}")
    if "output_dir" in raw:
        if isinstance(raw["output_dir"], str) and raw["output_dir"]:
            cfg = replace(cfg, output_dir=raw["output_dir"])
        else:
            problems.append("output_dir: expected a non-empty string")

    if problems:
        raise ConfigError(problems)
    return cfg


def _pinned_initials(cfg: ScenarioConfig) -> list[PairConfiguration] | None:
    """Fixed initial conditions for the three-pair scenarios, else None."""
    Y, s0 = cfg.params.Y, cfg.params.sigma0
    if cfg.scenario == "fig4a":
        uppers = (Y - 1.5 * s0, Y, Y + 1.5 * s0)
        return [PairConfiguration(0.0, y, 0.0, -y, 0.0) for y in uppers]
    if cfg.scenario == "fig4b":
        lowers = (-Y + 1.5 * s0, -Y, -Y - 1.5 * s0)
        return [PairConfiguration(0.0, Y, 0.0, y2, 0.0) for y2 in lowers]
    return None


def _write_trajectory_csv(path: Path, traj: Trajectory) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["t", "x1", "y1", "x2", "y2", "vy1", "vy2"])
        for conf, vel in traj.samples:
            row = (conf.t, conf.x1, conf.y1, conf.x2, conf.y2, vel.vy1, vel.vy2)
            writer.writerow([f"{v:.15e}" for v in row])


def _write_summary(out: Path, cfg: ScenarioConfig, fields: dict) -> None:
    summary = {
        "scenario": cfg.scenario,
        "seed": cfg.sampler.seed,
        "version": __version__,
        "config": serialize_config(cfg),
    }
    summary.update(fields)
    with open(out / "summary.json", "w") as fh:
        json.dump(summary, fh, indent=2)
        fh.write("\n")


def run_scenario(cfg: ScenarioConfig) -> int:
    """Run one scenario, write artifacts, and return the process exit code."""
    out = Path(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    if cfg.scenario == "four-slit-check":
        return _run_four_slit_check(cfg, out)

    t_end = cfg.params.flight_time
    sample_times = np.linspace(0.0, t_end, _N_TIMES_TRAJECTORIES)
    sample_times[-1] = t_end
    fixed = _pinned_initials(cfg)
    if fixed is not None:
        trajectories = [
            integrate_trajectory(c, t_end, cfg.integrator, cfg.stats, cfg.params, sample_times)
            for c in fixed
        ]
        ends = np.array(
            [
                (tr.endpoint.y1, tr.endpoint.y2)
                for tr in trajectories
                if tr.status is TrajectoryStatus.COMPLETED
            ]
        ).reshape(-1, 2)
        com0 = np.array([0.5 * (c.y1 + c.y2) for c in fixed])
        aborted = sum(1 for tr in trajectories if tr.status is not TrajectoryStatus.COMPLETED)
        n_requested = len(fixed)
        fields = {
            "n_requested": n_requested,
            "n_completed": int(ends.shape[0]),
            "aborted_count": aborted,
            "same_side_fraction": float(np.mean(ends[:, 0] * ends[:, 1] > 0.0))
            if len(ends)
            else math.nan,
            "delta_y0_estimate": float(np.sqrt(np.mean(com0**2))),
            "density_distance": None,
            "density_distance_baseline": None,
        }
    else:
        times = sample_times if cfg.scenario != "equivariance" else np.array([0.0, t_end])
        result = run_ensemble(
            cfg.sampler,
            cfg.integrator,
            cfg.stats,
            cfg.params,
            t_end,
            sample_times=times,
            keep_trajectories=True,
        )
        trajectories = list(result.trajectories)
        aborted = result.aborted_count
        n_requested = result.n_requested
        fields = {
            "n_requested": result.n_requested,
            "n_completed": result.n_completed,
            "aborted_count": result.aborted_count,
            "same_side_fraction": result.same_side_fraction,
            "delta_y0_estimate": result.delta_y0_estimate,
            "density_distance": result.density_distance,
            "density_distance_baseline": result.density_distance_baseline,
        }

    width = max(3, len(str(len(trajectories) - 1)))
    for i, traj in enumerate(trajectories):
        _write_trajectory_csv(out / f"trajectory_{i:0{width}d}.csv", traj)
    _write_summary(out, cfg, fields)
    print(f"{cfg.scenario}: {fields['n_completed']}/{n_requested} trajectories completed, "
          f"{aborted} aborted, output in {out}")
    if aborted > _ABORT_THRESHOLD * n_requested:
        print(f"abort fraction {aborted / n_requested:.2%} exceeds {_ABORT_THRESHOLD:.1%}",
              file=sys.stderr)
        return 2
    return 0


def _run_four_slit_check(cfg: ScenarioConfig, out: Path) -> int:
    """Numeric property report for the facing double-slit reductions."""
    p = cfg.params
    rng = np.random.default_rng(cfg.sampler.seed)
    checks: list[tuple[str, bool, str]] = []
    s0 = p.sigma0

    def record(name: str, ok: bool, detail: str) -> None:
        checks.append((name, bool(ok), detail))

    # Longitudinal freeze of the globally symmetrized state, both signs.
    # Skip draws too close to an interference node, where the amplitude ratio
    # in the finite difference is dominated by rounding.
    def well_conditioned_draw(stats: SpinStatistics) -> PairConfiguration:
        while True:
            c = PairConfiguration(
                float(rng.uniform(-3 * s0, 3 * s0)),
                float(rng.uniform(-2 * p.Y, 2 * p.Y)),
                float(rng.uniform(-3 * s0, 3 * s0)),
                float(rng.uniform(-2 * p.Y, 2 * p.Y)),
                float(rng.uniform(0.0, p.flight_time)),
            )
            scale = max(abs(psi_slit(s, c.x1, c.y1, c.t, p)) for s in Slit) * max(
                abs(psi_slit(s, c.x2, c.y2, c.t, p)) for s in Slit
            )
            if abs(naive_four_slit_psi(stats, c, p)) > 0.1 * scale:
                return c

    worst = 0.0
    for stats in SpinStatistics:
        for _ in range(20):
            vel = naive_velocity(well_conditioned_draw(stats), stats, p)
            worst = max(worst, abs(vel.vx1), abs(vel.vx2))
    record(
        "naive state: longitudinal velocities vanish",
        worst < 1e-5 * p.x_speed,
        f"max |vx| = {worst:.3e} m/s vs drift {p.x_speed:.3e} m/s",
    )

    # Factorization: the state times the longitudinal factor evaluated at
    # swapped x-pairs is symmetric (ratio identity without division).
    worst = 0.0
    for stats in SpinStatistics:
        factor = math.cos if stats is SpinStatistics.BOSON else math.sin
        for _ in range(20):
            y1, y2 = rng.uniform(-2 * p.Y, 2 * p.Y, size=2)
            xa, xb, xc, xd = rng.uniform(-3 * s0, 3 * s0, size=4)
            t = float(rng.uniform(0.0, p.flight_time))
            lhs = naive_four_slit_psi(
                stats, PairConfiguration(xa, y1, xb, y2, t), p
            ) * factor(p.kx * (xc - xd))
            rhs = naive_four_slit_psi(
                stats, PairConfiguration(xc, y1, xd, y2, t), p
            ) * factor(p.kx * (xa - xb))
            scale = max(abs(lhs), abs(rhs), 1e-300)
            worst = max(worst, abs(lhs - rhs) / scale)
    record(
        "naive state: factors into longitudinal interference times a transverse pair state",
        worst < 1e-9,
        f"max relative asymmetry {worst:.3e}",
    )

    # Corrected state equals the symmetric double-slit state with one
    # longitudinal coordinate reflected, up to one constant.
    x0 = 2.0 * p.d
    ratios = []
    for _ in range(20):
        c = PairConfiguration(
            x0 + float(rng.uniform(0.0, 2 * s0)),
            float(rng.uniform(-2 * p.Y, 2 * p.Y)),
            -x0 - float(rng.uniform(0.0, 2 * s0)),
            float(rng.uniform(-2 * p.Y, 2 * p.Y)),
            float(rng.uniform(0.0, 0.5 * p.flight_time)),
        )
        reflected = PairConfiguration(c.x1, c.y1, -c.x2, c.y2, c.t)
        ratios.append(
            corrected_four_slit_psi(SlitRegion.RIGHT_LEFT, c, p)
            / psi_pair(SpinStatistics.BOSON, reflected, p)
        )
    spread = max(abs(r - ratios[0]) for r in ratios) / abs(ratios[0])
    record(
        "corrected state: x2-reflection reproduces the double-slit pair state",
        spread < 1e-9,
        f"ratio spread {spread:.3e} about {ratios[0]:.6g}",
    )

    # Reflected double-slit trajectories obey the corrected state's guidance.
    t_end = 1.0e-8 if p.flight_time > 1.0e-8 else p.flight_time
    times = np.linspace(0.0, t_end, 9)
    worst_y = worst_x = 0.0
    for y1 in (p.Y, p.Y - 1.5 * s0):
        start = PairConfiguration(x0, y1, x0, -p.Y + 0.5 * s0, 0.0)
        traj = integrate_trajectory(
            start, t_end, cfg.integrator, SpinStatistics.BOSON, p, times
        )
        mapped = map_trajectory_to_double_slit(traj, SlitRegion.RIGHT_LEFT)
        for conf, vel in mapped.samples:
            fd = corrected_velocity(SlitRegion.RIGHT_LEFT, conf, p)
            v_scale = max(abs(vel.vy1), abs(vel.vy2), 1e-9 * p.x_speed)
            worst_y = max(worst_y, abs(fd.vy1 - vel.vy1) / v_scale, abs(fd.vy2 - vel.vy2) / v_scale)
            worst_x = max(
                worst_x,
                abs(fd.vx1 - vel.vx1) / p.x_speed,
                abs(fd.vx2 - vel.vx2) / p.x_speed,
            )
    record(
        "mapped trajectories: transverse velocities match the corrected state",
        worst_y < 1e-5,
        f"max relative deviation {worst_y:.3e}",
    )
    record(
        "mapped trajectories: longitudinal velocities are +-drift",
        worst_x < 1e-4,
        f"max relative deviation {worst_x:.3e}",
    )

    all_ok = all(ok for _, ok, _ in checks)
    lines = [f"{'PASS' if ok else 'FAIL'}  {name}  ({detail})" for name, ok, detail in checks]
    print("\n".join(lines))
    report = {
        "checks": [
            {"name": name, "passed": ok, "detail": detail} for name, ok, detail in checks
        ],
        "all_passed": all_ok,
    }
    _write_summary(out, cfg, report)
    return 0 if all_ok else 2


def _apply_flags(cfg: ScenarioConfig, args: argparse.Namespace) -> ScenarioConfig:
    if args.seed is not None:
        cfg = replace(cfg, sampler=replace(cfg.sampler, seed=args.seed))
    if args.n_pairs is not None:
        if cfg.scenario in ("fig4a", "fig4b"):
            print(f"{cfg.scenario} uses fixed initial conditions; --n-pairs ignored",
                  file=sys.stderr)
        else:
            cfg = replace(cfg, sampler=replace(cfg.sampler, n_pairs=args.n_pairs))
    if args.out is not None:
        cfg = replace(cfg, output_dir=args.out)
    if args.stats is not None:
        cfg = replace(cfg, stats=SpinStatistics(args.stats))
    tol = {}
    if args.rel_tol is not None:
        tol["rel_tol"] = args.rel_tol
    if args.abs_tol is not None:
        tol["abs_tol"] = args.abs_tol
    if tol:
        cfg = replace(cfg, integrator=replace(cfg.integrator, **tol))
    return cfg


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pairslit",
        description="Two-particle double-slit trajectory simulator",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="scenario", required=True)
    for name in SCENARIOS:
        sp = sub.add_parser(name, help=_SCENARIO_HELP[name])
        sp.add_argument("--config", help="JSON config file (flags win over file values)")
        sp.add_argument("--seed", type=int, help="sampler seed")
        sp.add_argument("--n-pairs", type=int, dest="n_pairs", help="batch size")
        sp.add_argument("--out", help="output directory")
        sp.add_argument("--stats", choices=["boson", "fermion"], help="exchange statistics")
        sp.add_argument("--rel-tol", type=float, dest="rel_tol", help="integrator relative tolerance")
        sp.add_argument("--abs-tol", type=float, dest="abs_tol",
                        help="integrator absolute tolerance (units of sigma0)")
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on bad usage; fold that into the config-error code.
        return 0 if exc.code in (0, None) else 1
    try:
        if args.config is not None:
            cfg = validate_config(args.config, expected_scenario=args.scenario)
        else:
            cfg = default_config(args.scenario)
        cfg = _apply_flags(cfg, args)
    except ConfigError as exc:
        for problem in exc.problems:
            print(f"config error: {problem}", file=sys.stderr)
        return 1
    try:
        return run_scenario(cfg)
    except (PairslitError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
