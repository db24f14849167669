"""Command-line pipelines: spectra, sweeps, refrigerator tables, self checks.

Summaries go to stdout, tables to files, logs to stderr.  Exit codes: 0
success, 1 self-check failure, 2 numerical failure, 3 config or IO failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import logging
import os
import sys

import numpy as np

from .channels import (
    ThermalEnvironment,
    build_heat_exchange,
    swap_window,
    verify_davies_blocks,
    verify_gad_equivalence,
)
from .config_io import ExperimentConfig, load_config, write_table
from .exceptions import ConfigError, MpembaSimError
from .liouville import decompose, devectorize, extract_generator, \
    propagate_spectral, vectorize
from .mpemba import build_theta_family, cooling_curves, free_energy_surface, \
    heat_exchange_builder
from .numerics import expm
from .operators import density_from_bloch, qubit_hamiltonian
from .otto import default_delta_grid, distance_curves, energy_balance, \
    power_ratio, run_cycle, threshold_times
from .thermo import detect_crossing, f_neq, gibbs_state, kl_divergence, \
    trace_distance

LOG = logging.getLogger("mpembasim.cli")


def _populations_arg(text: str) -> tuple:
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(
            f"expected two comma-separated weights, got {text!r}"
        )
    try:
        return tuple(float(piece) for piece in parts)
    except ValueError:
        raise argparse.ArgumentTypeError(f"non-numeric weight in {text!r}") from None


def _resolve_config(args: argparse.Namespace) -> ExperimentConfig:
    path = args.config or os.environ.get("MPEMBA_CONFIG")
    config = load_config(path) if path else ExperimentConfig()
    overrides = {}
    if getattr(args, "populations", None) is not None:
        overrides["populations"] = args.populations
    if getattr(args, "no_mpemba", False):
        overrides["use_mpemba"] = False
    if getattr(args, "tau_steps", None) is not None:
        overrides["tau_steps"] = args.tau_steps
    if getattr(args, "theta_steps", None) is not None:
        overrides["theta_steps"] = args.theta_steps
    if overrides:
        config = dataclasses.replace(config, **overrides)
    return config


def _base_state(config: ExperimentConfig) -> np.ndarray:
    # weights on the two x eigenstates: Bloch vector (p0 - p1) along x
    p0, p1 = config.populations
    return density_from_bloch((p0 - p1, 0.0, 0.0))


def _tau_grid(config: ExperimentConfig) -> np.ndarray:
    return np.linspace(0.0, swap_window(config.j_hz), config.tau_steps)


def _hot_environment(config: ExperimentConfig) -> ThermalEnvironment:
    return ThermalEnvironment(
        temperature=config.t_hot_khz, gap_frequency=config.nu1_khz
    )


def cmd_spectrum(args: argparse.Namespace) -> int:
    config = _resolve_config(args)
    tau = args.tau
    channel = build_heat_exchange(_hot_environment(config), config.j_hz, tau)
    decomposition = decompose(extract_generator(channel, tau))

    rows = []
    print(f"exchange-generator spectrum at tau = {tau:g} ms (rates in 1/ms):")
    for k, eigenvalue in enumerate(decomposition.eigenvalues, start=1):
        mode = devectorize(decomposition.right[:, k - 1])
        off_weight = abs(mode[0, 1]) + abs(mode[1, 0])
        on_weight = abs(mode[0, 0]) + abs(mode[1, 1])
        kind = "population" if off_weight <= 1e-8 * max(on_weight, 1.0) else "coherence"
        print(
            f"  lambda_{k} = {eigenvalue.real:+.9f} {eigenvalue.imag:+.9f}i  [{kind}]"
        )
        rows.append(
            {
                "index": k,
                "re_per_ms": eigenvalue.real,
                "im_per_ms": eigenvalue.imag,
                "kind": kind,
            }
        )
    fp = decomposition.fixed_point
    print(
        f"fixed-point populations: {fp[0, 0].real:.9f}, {fp[1, 1].real:.9f}"
    )
    if args.out:
        write_table(
            rows,
            ["index", "re_per_ms", "im_per_ms", "kind"],
            args.out,
            args.format,
            config.output_precision,
        )
    return 0


def cmd_surface(args: argparse.Namespace) -> int:
    config = _resolve_config(args)
    family = build_theta_family(
        _base_state(config), np.linspace(0.0, 2.0 * np.pi, config.theta_steps)
    )
    h = qubit_hamiltonian(config.nu1_khz, axis="z")
    env = _hot_environment(config)
    raw = free_energy_surface(
        family,
        heat_exchange_builder(env, config.j_hz),
        _tau_grid(config),
        h,
        config.t_hot_khz,
    )
    f_eq = f_neq(gibbs_state(h, config.t_hot_khz), h, config.t_hot_khz)
    rows = [
        {
            "theta_rad": row["theta_rad"],
            "tau_ms": row["tau_ms"],
            "delta_f_neq_khz": row["f_neq_khz"] - f_eq,
        }
        for row in raw
    ]
    write_table(
        rows,
        ["theta_rad", "tau_ms", "delta_f_neq_khz"],
        args.out,
        args.format,
        config.output_precision,
    )
    initial = [row for row in rows if row["tau_ms"] == rows[0]["tau_ms"]]
    lowest = min(initial, key=lambda row: row["delta_f_neq_khz"])
    print(f"surface: {len(rows)} rows -> {args.out}")
    print(
        f"lowest initial excess {lowest['delta_f_neq_khz']:.6f} kHz "
        f"at theta = {lowest['theta_rad']:.6f} rad"
    )
    return 0


def cmd_cooling(args: argparse.Namespace) -> int:
    config = _resolve_config(args)
    base = _base_state(config)
    env = _hot_environment(config)
    grid = _tau_grid(config)
    plain = cooling_curves(base, env, config.j_hz, grid, with_mpemba=False)
    accelerated = cooling_curves(base, env, config.j_hz, grid, with_mpemba=True)

    rows = [
        {
            "tau_ms": float(t),
            "delta_f_plain_khz": float(fp),
            "delta_f_mb_khz": float(fm),
            "dist_plain": float(dp),
            "dist_mb": float(dm),
        }
        for t, fp, fm, dp, dm in zip(
            grid,
            plain.f_neq,
            accelerated.f_neq,
            plain.trace_dist,
            accelerated.trace_dist,
        )
    ]
    write_table(
        rows,
        ["tau_ms", "delta_f_plain_khz", "delta_f_mb_khz", "dist_plain", "dist_mb"],
        args.out,
        args.format,
        config.output_precision,
    )
    crossing = detect_crossing(accelerated, plain, observable="f_neq")
    if crossing.exists:
        kind = "persistent" if crossing.persistent else "transient"
        print(
            f"cooling: crossing detected, {kind}, t_cross = {crossing.t_cross:.6f} ms"
        )
    else:
        print("cooling: no crossing on this grid")
    eps = config.epsilon_equilibrium_khz
    for trajectory in (plain, accelerated):
        inside = np.flatnonzero(trajectory.f_neq <= eps)
        when = f"tau = {grid[inside[0]]:.6f} ms" if inside.size else "never"
        print(
            f"cooling: {trajectory.label} curve enters the {eps:g} kHz "
            f"neighborhood at {when}"
        )
    return 0


def cmd_otto_distance(args: argparse.Namespace) -> int:
    config = _resolve_config(args)
    cycle = config.cycle_config()
    grid = _tau_grid(config)
    plain, accelerated = distance_curves(cycle, grid)
    rows = [
        {"tau2_ms": float(t), "dist_plain": float(dp), "dist_mb": float(dm)}
        for t, dp, dm in zip(grid, plain.trace_dist, accelerated.trace_dist)
    ]
    write_table(
        rows,
        ["tau2_ms", "dist_plain", "dist_mb"],
        args.out,
        args.format,
        config.output_precision,
    )
    crossing = detect_crossing(accelerated, plain, observable="trace_dist")
    if crossing.exists:
        print(f"otto-distance: crossing at tau2 = {crossing.t_cross:.6f} ms")
        gap = plain.trace_dist - accelerated.trace_dist
        peak = int(np.argmax(gap))
        print(
            f"otto-distance: maximum separation {gap[peak]:.6f} "
            f"at tau2 = {grid[peak]:.6f} ms"
        )
    else:
        print("otto-distance: no crossing on this grid")
    return 0


def cmd_otto_ratio(args: argparse.Namespace) -> int:
    config = _resolve_config(args)
    cycle = config.cycle_config()
    reports = power_ratio(cycle, tau2_grid=_tau_grid(config))
    rows = [
        {
            "delta": report.delta,
            "tau2_plain_ms": report.tau2_plain,
            "tau2_mb_ms": report.tau2_mb,
            "ratio": report.ratio,
        }
        for report in reports
    ]
    write_table(
        rows,
        ["delta", "tau2_plain_ms", "tau2_mb_ms", "ratio"],
        args.out,
        args.format,
        config.output_precision,
    )
    peak = max(reports, key=lambda report: report.ratio)
    print(
        f"otto-ratio: peak ratio {peak.ratio:.6f} at delta = {peak.delta:.6f} "
        f"(tau2_plain = {peak.tau2_plain:.6f} ms, tau2_mb = {peak.tau2_mb:.6f} ms)"
    )
    return 0


def _random_density(rng: np.random.Generator) -> np.ndarray:
    a = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    rho = a @ a.conj().T
    return rho / np.trace(rho).real


def cmd_verify(args: argparse.Namespace) -> int:
    all_passed = True

    def report(name: str, passed: bool, detail: str = "") -> None:
        nonlocal all_passed
        all_passed = all_passed and passed
        suffix = f"  ({detail})" if detail else ""
        print(f"{'PASS' if passed else 'FAIL'} {name}{suffix}")

    try:
        config = _resolve_config(args)
        env = _hot_environment(config)
        window = swap_window(config.j_hz)

        worst = 0.0
        for tau in np.linspace(0.0, window, 50):
            channel = build_heat_exchange(env, config.j_hz, float(tau))
            total = sum(k.conj().T @ k for k in channel.operators)
            worst = max(worst, float(np.abs(total - np.eye(2)).max()))
        report("kraus-completeness", worst <= 1e-12, f"max defect {worst:.3e}")

        probe_tau = 1.0 if window > 1.0 else 0.43 * window
        channel = build_heat_exchange(env, config.j_hz, probe_tau)
        gad = verify_gad_equivalence(channel)
        report("damping-equivalence", gad.passed, f"deviation {gad.max_deviation:.3e}")

        generator = extract_generator(channel, probe_tau)
        decomposition = decompose(generator)
        residual = float(
            np.abs(decomposition.left @ decomposition.right - np.eye(4)).max()
        )
        report("biorthonormality", residual <= 1e-10, f"residual {residual:.3e}")

        davies = verify_davies_blocks(generator, np.eye(2))
        report(
            "population-coherence-decoupling",
            davies.passed,
            f"max coupling {davies.max_coupling:.3e}",
        )

        h = qubit_hamiltonian(config.nu1_khz, axis="z")
        equilibrium = gibbs_state(h, config.t_hot_khz)
        f_eq = f_neq(equilibrium, h, config.t_hot_khz)
        rng = np.random.default_rng(20260822)
        worst = 0.0
        for _ in range(100):
            rho = _random_density(rng)
            excess = f_neq(rho, h, config.t_hot_khz) - f_eq
            identity = config.t_hot_khz * kl_divergence(rho, equilibrium)
            worst = max(worst, abs(excess - identity))
        report("free-energy-identity", worst <= 1e-10, f"max defect {worst:.3e}")

        worst = 0.0
        for _ in range(10):
            rho = _random_density(rng)
            t = float(rng.uniform(0.1, 5.0))
            spectral = propagate_spectral(decomposition, rho, t)
            direct = devectorize(expm(generator * t) @ vectorize(rho))
            worst = max(worst, float(np.abs(spectral - direct).max()))
        report("spectral-propagation", worst <= 1e-8, f"max defect {worst:.3e}")

        cycle = config.cycle_config()
        h_cold = qubit_hamiltonian(config.nu0_khz, axis="x")
        cold_state = gibbs_state(h_cold, config.t_cold_khz)
        worst_state = worst_energy = 0.0
        for k in range(10):
            records = run_cycle(
                dataclasses.replace(cycle, use_mpemba=bool(k % 2)),
                float(rng.uniform(0.0, window)),
            )
            final = records[-1].state_after
            worst_state = max(worst_state, float(np.abs(final - cold_state).max()))
            worst_energy = max(worst_energy, abs(energy_balance(records)))
        report("cycle-closure", worst_state <= 1e-10, f"max defect {worst_state:.3e}")
        report("energy-balance", worst_energy <= 1e-8, f"max defect {worst_energy:.3e}")

        curves = distance_curves(cycle, _tau_grid(config))
        ratios = []
        for delta in default_delta_grid(curves):
            tau2_plain, tau2_mb = threshold_times(curves, float(delta))
            ratios.append(
                (cycle.tau_bar + tau2_plain)
                / (cycle.tau_bar + cycle.mpemba_duration + tau2_mb)
            )
        floor = min(ratios)
        report("power-ratio-floor", floor >= 1.0 - 1e-12, f"min ratio {floor:.12f}")
    except (MpembaSimError, ValueError) as exc:
        report("construction", False, str(exc))
    return 0 if all_passed else 1


def _add_common(parser: argparse.ArgumentParser, table: bool) -> None:
    parser.add_argument(
        "--config",
        metavar="PATH",
        help="config file (default: $MPEMBA_CONFIG, else built-in defaults)",
    )
    parser.add_argument(
        "--populations",
        type=_populations_arg,
        metavar="A,B",
        help="weights of the two x eigenstates in the base state",
    )
    parser.add_argument(
        "--no-mpemba",
        action="store_true",
        help="disable the accelerating stroke in cycle checks",
    )
    parser.add_argument("--tau-steps", type=int, metavar="N", help="delay-grid size")
    parser.add_argument(
        "--theta-steps", type=int, metavar="N", help="angle-grid size"
    )
    if table:
        parser.add_argument(
            "--out", required=True, metavar="PATH", help="output table path"
        )
        parser.add_argument("--format", choices=("csv", "json"), default="csv")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mpembasim",
        description="Spectral simulator for anomalous thermal relaxation and "
        "a Mpemba-boosted Otto refrigerator.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    spectrum = sub.add_parser(
        "spectrum", help="exchange-generator eigenvalues and fixed point"
    )
    _add_common(spectrum, table=False)
    spectrum.add_argument(
        "--tau", type=float, default=1.0, metavar="MS", help="exchange delay in ms"
    )
    spectrum.add_argument("--out", metavar="PATH", help="optional table path")
    spectrum.add_argument("--format", choices=("csv", "json"), default="csv")
    spectrum.set_defaults(handler=cmd_spectrum)

    surface = sub.add_parser(
        "surface", help="free-energy excess over the angle/delay grid"
    )
    _add_common(surface, table=True)
    surface.set_defaults(handler=cmd_surface)

    cooling = sub.add_parser(
        "cooling", help="relaxation curves with and without the acceleration"
    )
    _add_common(cooling, table=True)
    cooling.set_defaults(handler=cmd_cooling)

    otto_distance = sub.add_parser(
        "otto-distance", help="exchange-stroke distance curves of the cycle"
    )
    _add_common(otto_distance, table=True)
    otto_distance.set_defaults(handler=cmd_otto_distance)

    otto_ratio = sub.add_parser(
        "otto-ratio", help="cycle-power ratio across distance thresholds"
    )
    _add_common(otto_ratio, table=True)
    otto_ratio.set_defaults(handler=cmd_otto_ratio)

    verify = sub.add_parser("verify", help="run the full invariant battery")
    _add_common(verify, table=False)
    verify.set_defaults(handler=cmd_verify)
    return parser


def main(argv=None) -> int:
    logging.basicConfig(
        stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s"
    )
    args = _build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return 3
    except MpembaSimError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
