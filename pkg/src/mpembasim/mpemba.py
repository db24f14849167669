"""Anomalous-relaxation toolkit: the slow-mode-killing unitary and sweeps.

The accelerating transformation diagonalizes a state in the energy eigenbasis
with its populations inverted (largest eigenvalue on the highest level).  The
result carries no coherence in that basis, so its overlap with the slowly
decaying pair of generator modes vanishes identically while its free energy
goes up, the combination that makes the subsequent relaxation anomalously
fast.  The sweep helpers generate the theta-rotated family of initial states
and the free-energy / trace-distance curves over the exchange-delay grid.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from . import liouville
from .channels import ThermalEnvironment, apply_channel, build_heat_exchange, \
    conjugate_channel, swap_window
from .exceptions import DegenerateHamiltonianError
from .operators import qubit_hamiltonian, rotation_y, validate_density_matrix
from .thermo import RelaxationTrajectory, f_neq, gibbs_state, trace_distance

#: unitarity / conjugation defect tolerated in a constructed transform
TRANSFORM_TOL = 1e-12

#: residual slow-mode weight tolerated after the transformation
OVERLAP_KILL_TOL = 1e-10

#: relative spectral gap below which energy-level pairing is ill defined
DEGENERACY_TOL = 1e-9

#: exchange coupling used only to realize a probe generator for the overlap
#: diagnostics; the mode structure the overlaps test is coupling independent
PROBE_COUPLING_HZ = 215.1


@dataclass(frozen=True)
class MpembaTransform:
    """A constructed accelerating unitary together with its diagnostics.

    ``f_neq_gain`` is the free-energy increase (kHz) paid for the speedup;
    the two overlaps are the bilinear weights of the slowest decaying mode
    in the source and target states.
    """

    unitary: np.ndarray
    source_state: np.ndarray
    target_state: np.ndarray
    f_neq_gain: float
    slow_overlap_before: complex
    slow_overlap_after: complex

    def __post_init__(self):
        u = np.asarray(self.unitary, dtype=complex)
        object.__setattr__(self, "unitary", u)
        eye = np.eye(u.shape[0])
        if np.abs(u.conj().T @ u - eye).max() > TRANSFORM_TOL:
            raise ValueError("transform matrix is not unitary")
        rotated = u @ self.source_state @ u.conj().T
        if np.abs(rotated - self.target_state).max() > TRANSFORM_TOL:
            raise ValueError("target state does not match U rho U^dag")


@dataclass(frozen=True)
class ThetaFamily:
    """Base state and its y-axis rotations ``R_y(theta) rho R_y(-theta)``."""

    base_state: np.ndarray
    angles: np.ndarray
    rotated_states: tuple

    def __post_init__(self):
        object.__setattr__(self, "angles", np.asarray(self.angles, dtype=float))
        object.__setattr__(self, "rotated_states", tuple(self.rotated_states))
        if len(self.rotated_states) != self.angles.size:
            raise ValueError("one rotated state required per angle")


def _phase_fixed(columns: np.ndarray) -> np.ndarray:
    """Rotate each column so its first nonzero entry is real positive."""
    fixed = np.array(columns, dtype=complex)
    for j in range(fixed.shape[1]):
        col = fixed[:, j]
        lead = col[np.flatnonzero(np.abs(col) > 1e-14)[0]]
        fixed[:, j] = col * (np.abs(lead) / lead)
    return fixed


def _probe_decomposition(
    basis: np.ndarray, gap_khz: float, temperature: float
) -> liouville.SpectralDecomposition:
    # Any exchange generator with this fixed basis has the same mode
    # structure; delay and coupling only scale the rates.
    env = ThermalEnvironment(temperature=temperature, gap_frequency=gap_khz)
    probe_tau = 0.43 * swap_window(PROBE_COUPLING_HZ)
    channel = conjugate_channel(
        build_heat_exchange(env, PROBE_COUPLING_HZ, probe_tau), basis
    )
    return liouville.decompose(liouville.extract_generator(channel, probe_tau))


def mpemba_unitary(
    rho: np.ndarray,
    h: np.ndarray,
    temperature: float,
    decomposition: liouville.SpectralDecomposition | None = None,
) -> MpembaTransform:
    """Build the population-inverting unitary for ``rho`` under ``h``.

    Parameters
    ----------
    rho : ndarray
        Source density matrix.
    h : ndarray
        Hermitian Hamiltonian in angular units with a nondegenerate
        spectrum.
    temperature : float
        Temperature (kHz) used for the free-energy bookkeeping and, when no
        decomposition is supplied, for the probe generator.
    decomposition : SpectralDecomposition, optional
        Generator decomposition against which the slow-mode overlaps are
        evaluated.  By default a heat-exchange generator with ``h``'s
        eigenbasis and gap is constructed for the purpose.

    Returns
    -------
    MpembaTransform
        The unitary maps eigenvectors of ``rho`` onto eigenvectors of ``h``
        so that the largest population lands on the highest energy level.

    Raises
    ------
    DegenerateHamiltonianError
        If ``h`` has a (near-)degenerate spectrum, which leaves the level
        pairing undefined.
    """
    rho = validate_density_matrix(rho, herm_tol=1e-10, trace_tol=1e-10)
    h = np.asarray(h, dtype=complex)
    energies, levels = np.linalg.eigh(h)
    scale = max(1.0, float(np.abs(energies).max()))
    if energies.size > 1 and np.diff(energies).min() <= DEGENERACY_TOL * scale:
        raise DegenerateHamiltonianError(
            f"level spacing below {DEGENERACY_TOL:g} of the spectral scale"
        )

    populations, directions = np.linalg.eigh(rho)
    # eigh sorts both spectra ascending, so pairing column k with column k
    # puts the largest population on the highest level.
    levels = _phase_fixed(levels)
    directions = _phase_fixed(directions)
    unitary = levels @ directions.conj().T
    target = unitary @ rho @ unitary.conj().T

    if decomposition is None:
        gap_khz = float(energies[-1] - energies[0]) / (4.0 * np.pi)
        decomposition = _probe_decomposition(levels, gap_khz, temperature)
    k2, k3 = liouville.slow_pair_indices(decomposition)
    before = liouville.mode_overlap(decomposition, k2, rho)
    after = liouville.mode_overlap(decomposition, k2, target)
    after_partner = liouville.mode_overlap(decomposition, k3, target)
    if max(abs(after), abs(after_partner)) > OVERLAP_KILL_TOL:
        raise ValueError(
            "slow-mode weight survived the transformation; the supplied "
            "decomposition does not share the Hamiltonian eigenbasis"
        )

    gain = f_neq(target, h, temperature) - f_neq(rho, h, temperature)
    return MpembaTransform(
        unitary=unitary,
        source_state=rho,
        target_state=target,
        f_neq_gain=gain,
        slow_overlap_before=before,
        slow_overlap_after=after,
    )


def build_theta_family(base: np.ndarray, theta_grid: Sequence[float]) -> ThetaFamily:
    """Rotate ``base`` about the y axis by every angle in the grid."""
    base = validate_density_matrix(base, herm_tol=1e-10, trace_tol=1e-10)
    angles = np.asarray(theta_grid, dtype=float)
    if angles.size == 0 or not np.all(np.isfinite(angles)):
        raise ValueError("theta grid must be nonempty and finite")
    states = []
    for theta in angles:
        r = rotation_y(theta)
        states.append(validate_density_matrix(r @ base @ r.conj().T))
    return ThetaFamily(base_state=base, angles=angles, rotated_states=states)


def heat_exchange_builder(
    env: ThermalEnvironment, j_hz: float
) -> Callable[[float], object]:
    """Return ``tau -> channel`` for one environment and coupling."""
    return lambda tau_ms: build_heat_exchange(env, j_hz, tau_ms)


def free_energy_surface(
    family: ThetaFamily,
    channel_builder: Callable[[float], object],
    tau_grid: Sequence[float],
    h: np.ndarray,
    temperature: float,
) -> list:
    """Free energy of every rotated state after every exchange delay.

    Returns rows ``{"theta_rad", "tau_ms", "f_neq_khz"}`` in theta-major
    order.  Each rotated state is pushed through the channel for each delay
    independently (one collision of duration tau, not an iterated map).
    """
    taus = np.asarray(tau_grid, dtype=float)
    if taus.size == 0:
        raise ValueError("tau grid must be nonempty")
    channels = [channel_builder(float(tau)) for tau in taus]
    rows = []
    for theta, state in zip(family.angles, family.rotated_states):
        for tau, channel in zip(taus, channels):
            evolved = apply_channel(channel, state)
            rows.append(
                {
                    "theta_rad": float(theta),
                    "tau_ms": float(tau),
                    "f_neq_khz": f_neq(evolved, h, temperature),
                }
            )
    return rows


def cooling_curves(
    rho0: np.ndarray,
    env: ThermalEnvironment,
    j_hz: float,
    tau_grid: Sequence[float],
    with_mpemba: bool,
) -> RelaxationTrajectory:
    """Relaxation observables of ``rho0`` along the exchange protocol.

    With ``with_mpemba`` the accelerating unitary is applied first.  The
    trajectory records the free-energy excess over equilibrium (kHz) and the
    trace distance to the thermal target for every delay in the grid.
    """
    taus = np.asarray(tau_grid, dtype=float)
    h = qubit_hamiltonian(env.gap_frequency, axis="z")
    target = gibbs_state(h, env.temperature)
    f_eq = f_neq(target, h, env.temperature)

    label = "mpemba" if with_mpemba else "plain"
    state0 = validate_density_matrix(rho0, herm_tol=1e-10, trace_tol=1e-10)
    if with_mpemba:
        state0 = mpemba_unitary(state0, h, env.temperature).target_state

    states, excess, dist = [], [], []
    for tau in taus:
        evolved = apply_channel(build_heat_exchange(env, j_hz, float(tau)), state0)
        states.append(evolved)
        excess.append(f_neq(evolved, h, env.temperature) - f_eq)
        dist.append(trace_distance(evolved, target))
    return RelaxationTrajectory(
        times=taus,
        states=states,
        f_neq=np.array(excess),
        trace_dist=np.array(dist),
        label=label,
    )
