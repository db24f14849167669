"""Four-stroke qubit refrigerator with an optional accelerating unitary.

Stroke layout and bookkeeping
-----------------------------
One cycle runs: gap expansion along x (nu0 -> nu1), an optional accelerating
unitary into the exchange stroke's energy basis, a tunable heat-exchange
stroke of delay tau2 against the hot-gap auxiliary, the reversed compression
ramp, and a full-window exchange with the cold environment that resets the
medium to the cold Gibbs state.  The enum labels the strokes by their role
in the cycle: COOLING is the tunable stroke (it drains the working medium's
excited population through the large gap), HOT_RESET the closing reset.

Every cycle emits all five records, the accelerating stroke included; when
disabled it carries the identity unitary and still bridges the bookkeeping
frame from the drive axis (x) to the exchange axis (z).  Boundary energies
are evaluated so consecutive records share the same Hamiltonian and state at
each junction, which makes the closed-cycle energy balance telescope to zero
at machine precision.  Energies are in h*kHz, times in ms.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np

from . import liouville
from .channels import ThermalEnvironment, apply_channel, build_heat_exchange, \
    conjugate_channel, swap_window
from .exceptions import (
    GridMismatchError,
    MissingStrokeError,
    Tau2OutOfRangeError,
    ThresholdUnreachableError,
)
from .mpemba import mpemba_unitary
from .operators import IDENTITY, PAULIS, TWO_PI, X_EIGENBASIS, mean_energy, \
    qubit_hamiltonian
from .thermo import RelaxationTrajectory, detect_crossing, f_neq, gibbs_state, \
    trace_distance

#: slack for "curve reached the threshold" comparisons
THRESHOLD_TOL = 1e-12

#: probe delay for the generator decomposition, as a fraction of the window
PROBE_FRACTION = 0.43


class StrokeName(Enum):
    EXPANSION = "expansion"
    MPEMBA = "mpemba"
    COOLING = "cooling"
    COMPRESSION = "compression"
    HOT_RESET = "hot_reset"


#: strokes realized by unitaries (their energy change is work)
UNITARY_STROKES = frozenset(
    {StrokeName.EXPANSION, StrokeName.MPEMBA, StrokeName.COMPRESSION}
)


@dataclass(frozen=True)
class CycleConfig:
    """Cycle parameters; frequencies in kHz, coupling in Hz, times in ms.

    ``tau3`` and ``tau4`` default to the compression-mirrors-expansion and
    full-exchange-window choices when left unset.  ``tau_bar`` is the fixed
    per-cycle overhead used in the power ratio; it is deliberately a free
    knob rather than being derived from the stroke times.  ``mpemba_duration``
    is the cost of the accelerating pulse, 0 for an instantaneous pulse.
    """

    nu0: float = 1.0
    nu1: float = 2.0
    j_hz: float = 215.1
    t_hot: float = 4.77
    t_cold: float = 2.38
    tau1: float = 0.1
    tau3: float | None = None
    tau4: float | None = None
    tau_bar: float = 4.65
    use_mpemba: bool = True
    mpemba_duration: float = 0.0

    def __post_init__(self):
        if self.tau3 is None:
            object.__setattr__(self, "tau3", self.tau1)
        if self.tau4 is None:
            object.__setattr__(self, "tau4", swap_window(self.j_hz))
        if not 0.0 < self.nu0 < self.nu1:
            raise ValueError(f"need nu1 > nu0 > 0, got {self.nu0}, {self.nu1}")
        if self.t_hot <= 0.0 or self.t_cold <= 0.0:
            raise ValueError("temperatures must be positive")
        if min(self.j_hz, self.tau1, self.tau3, self.tau4, self.tau_bar) <= 0.0:
            raise ValueError("coupling and stroke times must be positive")
        if self.mpemba_duration < 0.0:
            raise ValueError("accelerating-pulse duration cannot be negative")


@dataclass(frozen=True)
class StrokeRecord:
    name: StrokeName
    duration: float
    energy_in: float
    energy_out: float
    state_after: np.ndarray


@dataclass(frozen=True)
class PowerReport:
    """Threshold times and cycle-power ratio at one trace-distance target."""

    delta: float
    tau2_plain: float
    tau2_mb: float
    ratio: float

    def __post_init__(self):
        if self.ratio < 1.0 - 1e-12:
            raise ValueError(
                f"ratio {self.ratio} below 1; delta {self.delta} lies outside "
                "the advantage window"
            )


def ramp_unitary(
    nu_start: float, nu_end: float, duration: float, axis: str = "x"
) -> np.ndarray:
    """Exact propagator of a linear gap ramp along one fixed axis.

    The Hamiltonian stays proportional to one Pauli operator throughout, so
    the time-ordered evolution collapses to a single rotation by the angle
    ``2 pi * (nu_start + nu_end)/2 * duration``.
    """
    if duration <= 0.0:
        raise ValueError(f"ramp duration {duration} must be positive")
    phi = TWO_PI * 0.5 * (nu_start + nu_end) * duration
    return np.cos(phi) * IDENTITY + 1j * np.sin(phi) * PAULIS[axis]


def exchange_decomposition(cfg: CycleConfig) -> liouville.SpectralDecomposition:
    """Spectral decomposition of the hot-exchange generator for this cycle."""
    env = ThermalEnvironment(temperature=cfg.t_hot, gap_frequency=cfg.nu1)
    probe_tau = PROBE_FRACTION * swap_window(cfg.j_hz)
    channel = build_heat_exchange(env, cfg.j_hz, probe_tau)
    return liouville.decompose(liouville.extract_generator(channel, probe_tau))


def run_cycle(
    cfg: CycleConfig,
    tau2: float,
    decomposition: liouville.SpectralDecomposition | None = None,
) -> list:
    """Execute one full cycle and return its five stroke records.

    ``tau2`` is the exchange delay of the tunable stroke, restricted to the
    swap window.  ``decomposition`` optionally reuses a precomputed exchange
    generator for the accelerating stroke's overlap diagnostics (sweeps pass
    it to avoid rebuilding per point).
    """
    window = swap_window(cfg.j_hz)
    if not -1e-9 <= tau2 <= window + 1e-9:
        raise Tau2OutOfRangeError(
            f"tau2={tau2} ms outside [0, {window:.6f}] ms"
        )
    h_cold = qubit_hamiltonian(cfg.nu0, axis="x")
    h_drive = qubit_hamiltonian(cfg.nu1, axis="x")
    h_exchange = qubit_hamiltonian(cfg.nu1, axis="z")

    rho0 = gibbs_state(h_cold, cfg.t_cold)
    records = []

    u_exp = ramp_unitary(cfg.nu0, cfg.nu1, cfg.tau1, axis="x")
    rho1 = u_exp @ rho0 @ u_exp.conj().T
    records.append(
        StrokeRecord(
            StrokeName.EXPANSION,
            cfg.tau1,
            mean_energy(rho0, h_cold),
            mean_energy(rho1, h_drive),
            rho1,
        )
    )

    if cfg.use_mpemba:
        transform = mpemba_unitary(rho1, h_exchange, cfg.t_hot, decomposition)
        rho2 = transform.target_state
    else:
        rho2 = rho1
    # Frame bridge: in-energy on the drive axis, out-energy on the exchange
    # axis, also when the unitary is the identity.
    records.append(
        StrokeRecord(
            StrokeName.MPEMBA,
            cfg.mpemba_duration,
            mean_energy(rho1, h_drive),
            mean_energy(rho2, h_exchange),
            rho2,
        )
    )

    env_hot = ThermalEnvironment(temperature=cfg.t_hot, gap_frequency=cfg.nu1)
    rho3 = apply_channel(build_heat_exchange(env_hot, cfg.j_hz, tau2), rho2)
    records.append(
        StrokeRecord(
            StrokeName.COOLING,
            tau2,
            mean_energy(rho2, h_exchange),
            mean_energy(rho3, h_exchange),
            rho3,
        )
    )

    u_comp = ramp_unitary(cfg.nu1, cfg.nu0, cfg.tau3, axis="x")
    rho4 = u_comp @ rho3 @ u_comp.conj().T
    records.append(
        StrokeRecord(
            StrokeName.COMPRESSION,
            cfg.tau3,
            mean_energy(rho3, h_exchange),
            mean_energy(rho4, h_cold),
            rho4,
        )
    )

    env_cold = ThermalEnvironment(temperature=cfg.t_cold, gap_frequency=cfg.nu0)
    reset = conjugate_channel(
        build_heat_exchange(env_cold, cfg.j_hz, cfg.tau4), X_EIGENBASIS
    )
    rho5 = apply_channel(reset, rho4)
    records.append(
        StrokeRecord(
            StrokeName.HOT_RESET,
            cfg.tau4,
            mean_energy(rho4, h_cold),
            mean_energy(rho5, h_cold),
            rho5,
        )
    )
    return records


def heat_extracted(records: Sequence[StrokeRecord], cfg: CycleConfig) -> float:
    """Cold-side heat figure ``Tr[H1 rho_eq_c] - Tr[H0 rho_tau3]`` in kHz.

    ``H0`` and ``H1`` are the drive-axis Hamiltonians at the two gap values
    and ``rho_tau3`` the post-compression state.  Negative values mean heat
    is dumped into the cold bath.  The stroke-resolved alternative lives in
    :func:`stroke_energy_ledger`.
    """
    by_name = {record.name: record for record in records}
    if StrokeName.COMPRESSION not in by_name:
        raise MissingStrokeError("records carry no compression stroke")
    rho_tau3 = by_name[StrokeName.COMPRESSION].state_after
    h0 = qubit_hamiltonian(cfg.nu0, axis="x")
    h1 = qubit_hamiltonian(cfg.nu1, axis="x")
    rho_eq_c = gibbs_state(h0, cfg.t_cold)
    return mean_energy(rho_eq_c, h1) - mean_energy(rho_tau3, h0)


def stroke_energy_ledger(records: Sequence[StrokeRecord]) -> dict:
    """Per-stroke energy changes split into work and heat totals (kHz)."""
    per_stroke = {}
    work = heat = 0.0
    for record in records:
        delta = record.energy_out - record.energy_in
        per_stroke[record.name.value] = delta
        if record.name in UNITARY_STROKES:
            work += delta
        else:
            heat += delta
    return {
        "work_khz": work,
        "heat_khz": heat,
        "net_khz": work + heat,
        "per_stroke": per_stroke,
    }


def energy_balance(records: Sequence[StrokeRecord]) -> float:
    """Net boundary-energy change over the records; 0 for a closed cycle."""
    return float(sum(r.energy_out - r.energy_in for r in records))


def distance_curves(
    cfg: CycleConfig, tau2_grid: Sequence[float]
) -> tuple[RelaxationTrajectory, RelaxationTrajectory]:
    """Exchange-stroke trace distance to the hot target, without and with
    the accelerating unitary, over a grid of tau2 delays."""
    taus = np.asarray(tau2_grid, dtype=float)
    h_cold = qubit_hamiltonian(cfg.nu0, axis="x")
    h_exchange = qubit_hamiltonian(cfg.nu1, axis="z")
    target = gibbs_state(h_exchange, cfg.t_hot)
    f_eq = f_neq(target, h_exchange, cfg.t_hot)
    env_hot = ThermalEnvironment(temperature=cfg.t_hot, gap_frequency=cfg.nu1)

    u_exp = ramp_unitary(cfg.nu0, cfg.nu1, cfg.tau1, axis="x")
    rho_cold = gibbs_state(h_cold, cfg.t_cold)
    rho_plain = u_exp @ rho_cold @ u_exp.conj().T
    decomposition = exchange_decomposition(cfg)
    rho_mb = mpemba_unitary(
        rho_plain, h_exchange, cfg.t_hot, decomposition
    ).target_state

    def sweep(rho_in: np.ndarray, label: str) -> RelaxationTrajectory:
        states, excess, dist = [], [], []
        for tau in taus:
            evolved = apply_channel(
                build_heat_exchange(env_hot, cfg.j_hz, float(tau)), rho_in
            )
            states.append(evolved)
            excess.append(f_neq(evolved, h_exchange, cfg.t_hot) - f_eq)
            dist.append(trace_distance(evolved, target))
        return RelaxationTrajectory(
            times=taus,
            states=states,
            f_neq=np.array(excess),
            trace_dist=np.array(dist),
            label=label,
        )

    return sweep(rho_plain, "plain"), sweep(rho_mb, "mpemba")


def threshold_times(
    curves: tuple[RelaxationTrajectory, RelaxationTrajectory], delta: float
) -> tuple[float, float]:
    """Earliest delays at which each curve first comes down to ``delta``.

    Times are linearly interpolated between grid points.  A threshold the
    curve never reaches raises ThresholdUnreachableError; one already met at
    the first grid point reports that point's time.
    """
    plain, mb = curves
    if plain.times.size != mb.times.size or not np.allclose(
        plain.times, mb.times, rtol=0.0, atol=1e-12
    ):
        raise GridMismatchError("threshold curves use different tau2 grids")

    def first_reach(trajectory: RelaxationTrajectory) -> float:
        values = trajectory.trace_dist
        times = trajectory.times
        hit = np.flatnonzero(values <= delta + THRESHOLD_TOL)
        if hit.size == 0:
            raise ThresholdUnreachableError(
                f"delta={delta:.6g} below the curve minimum {values.min():.6g}"
            )
        i = int(hit[0])
        if i == 0:
            return float(times[0])
        v0, v1 = values[i - 1], values[i]
        if v0 - v1 <= THRESHOLD_TOL:
            return float(times[i])
        t = times[i - 1] + (times[i] - times[i - 1]) * (v0 - delta) / (v0 - v1)
        return float(min(t, times[i]))

    return first_reach(plain), first_reach(mb)


def default_delta_grid(
    curves: tuple[RelaxationTrajectory, RelaxationTrajectory], count: int = 40
) -> np.ndarray:
    """Thresholds spanning the advantage window, crossing point to full swap.

    The values are the plain curve's own heights on that window, so every
    delta is reached by both curves and the accelerated branch is never the
    slower one.
    """
    plain, mb = curves
    crossing = detect_crossing(mb, plain, observable="trace_dist")
    if not crossing.exists:
        raise ThresholdUnreachableError(
            "distance curves do not cross; no advantage window to sample"
        )
    sample_times = np.linspace(crossing.t_cross, plain.times[-1], count)
    return np.interp(sample_times, plain.times, plain.trace_dist)


def power_ratio(
    cfg: CycleConfig,
    delta_grid: Sequence[float] | None = None,
    tau2_grid: Sequence[float] | None = None,
) -> list:
    """Cycle-power ratio with/without the accelerating stroke per threshold.

    The ratio is ``(tau_bar + tau2_plain) / (tau_bar + overhead + tau2_mb)``
    with ``overhead`` the accelerating pulse's duration.  The default grids
    are 64 delays across the swap window and 40 thresholds across the
    advantage window.
    """
    if tau2_grid is None:
        tau2_grid = np.linspace(0.0, swap_window(cfg.j_hz), 64)
    curves = distance_curves(cfg, tau2_grid)
    if delta_grid is None:
        delta_grid = default_delta_grid(curves)
    reports = []
    for delta in np.asarray(delta_grid, dtype=float):
        tau2_plain, tau2_mb = threshold_times(curves, float(delta))
        ratio = (cfg.tau_bar + tau2_plain) / (
            cfg.tau_bar + cfg.mpemba_duration + tau2_mb
        )
        reports.append(
            PowerReport(
                delta=float(delta),
                tau2_plain=tau2_plain,
                tau2_mb=tau2_mb,
                ratio=float(ratio),
            )
        )
    return reports
