"""Heat-exchange Kraus channel between a qubit and a thermally prepared partner.

The channel models a working qubit coupled to an auxiliary qubit through a
``sigma_z sigma_z`` scalar coupling of strength ``J``, with the auxiliary
freshly prepared in a Gibbs state before each run.  Tracing the auxiliary out
leaves a four-operator Kraus map on the working qubit whose swap angle grows
as ``pi J tau``; at ``tau = (2J)^-1`` the exchange is complete and every input
collapses onto the auxiliary's thermal populations.

The map is exactly a generalized amplitude damping channel with decay
parameter ``eta = sin^2(pi J tau)`` and bias given by the auxiliary's excited
population; :func:`verify_gad_equivalence` checks that identification
numerically rather than assuming it.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import liouville
from .exceptions import TauOutOfRangeError
from .operators import hermitize, validate_density_matrix

#: max |sum K^dag K - I| tolerated for a channel to count as trace preserving
COMPLETENESS_TOL = 1e-12


@dataclass(frozen=True)
class ThermalEnvironment:
    """Thermal partner defined by its temperature and level splitting.

    ``temperature`` is ``k_B T / h`` in kHz; ``gap_frequency`` is ``nu`` in
    kHz for a partner Hamiltonian ``-2 pi nu sigma_z`` (splitting ``2 nu`` in
    h*kHz).
    """

    temperature: float
    gap_frequency: float

    def __post_init__(self):
        if self.temperature <= 0.0:
            raise ValueError(f"temperature {self.temperature} must be positive")
        if self.gap_frequency <= 0.0:
            raise ValueError(f"gap frequency {self.gap_frequency} must be positive")

    @property
    def excited_population(self) -> float:
        """Gibbs weight of the upper level, ``1 / (1 + exp(2 nu / T))``."""
        return 1.0 / (1.0 + np.exp(2.0 * self.gap_frequency / self.temperature))

    def populations(self) -> np.ndarray:
        """Ground and excited Gibbs weights ``(1 - p, p)``."""
        p = self.excited_population
        return np.array([1.0 - p, p])


@dataclass(frozen=True)
class KrausChannel:
    """A completely positive trace-preserving map given by Kraus operators."""

    operators: tuple = field()
    delay: float = 0.0
    bias: float = 0.0

    def __post_init__(self):
        ops = tuple(np.asarray(k, dtype=complex) for k in self.operators)
        object.__setattr__(self, "operators", ops)
        d = ops[0].shape[0]
        completeness = sum(k.conj().T @ k for k in ops)
        deviation = float(np.max(np.abs(completeness - np.eye(d))))
        if deviation > COMPLETENESS_TOL:
            raise ValueError(
                f"Kraus completeness violated by {deviation:.3e} (tol {COMPLETENESS_TOL})"
            )

    @property
    def dim(self) -> int:
        return self.operators[0].shape[0]


def swap_window(j_hz: float) -> float:
    """Full-exchange delay ``(2J)^-1`` in ms for a coupling in Hz."""
    if j_hz <= 0.0:
        raise ValueError(f"coupling {j_hz} Hz must be positive")
    return 500.0 / j_hz


def build_heat_exchange(
    environment: ThermalEnvironment, j_hz: float, tau_ms: float
) -> KrausChannel:
    """Heat-exchange channel after a free-evolution delay ``tau``.

    Parameters
    ----------
    environment:
        Thermal preparation of the auxiliary qubit; its excited population
        sets the channel bias and fixed point.
    j_hz:
        Scalar coupling in Hz.
    tau_ms:
        Exchange delay in ms, restricted to ``[0, (2J)^-1]``.

    Raises
    ------
    TauOutOfRangeError
        If ``tau`` leaves the physical window.
    """
    window = swap_window(j_hz)
    if not -1e-9 <= tau_ms <= window + 1e-9:
        raise TauOutOfRangeError(
            f"tau={tau_ms} ms outside [0, {window:.6f}] ms for J={j_hz} Hz"
        )
    angle = np.pi * (j_hz / 1000.0) * tau_ms
    c, s = np.cos(angle), np.sin(angle)
    p = environment.excited_population
    k1 = np.sqrt(1.0 - p) * np.array([[1.0, 0.0], [0.0, c]], dtype=complex)
    k2 = np.sqrt(1.0 - p) * np.array([[0.0, s], [0.0, 0.0]], dtype=complex)
    k3 = np.sqrt(p) * np.array([[c, 0.0], [0.0, 1.0]], dtype=complex)
    k4 = np.sqrt(p) * np.array([[0.0, 0.0], [-s, 0.0]], dtype=complex)
    return KrausChannel(operators=(k1, k2, k3, k4), delay=tau_ms, bias=p)


def conjugate_channel(channel: KrausChannel, basis: np.ndarray) -> KrausChannel:
    """The same channel acting in a rotated basis, ``K -> V K V^dag``."""
    v = np.asarray(basis, dtype=complex)
    ops = tuple(v @ k @ v.conj().T for k in channel.operators)
    return KrausChannel(operators=ops, delay=channel.delay, bias=channel.bias)


def apply_channel(channel: KrausChannel, rho: np.ndarray) -> np.ndarray:
    """Apply the Kraus map and re-validate the output state."""
    rho = validate_density_matrix(rho, herm_tol=1e-10, trace_tol=1e-10)
    out = np.zeros_like(np.asarray(rho, dtype=complex))
    for k in channel.operators:
        out += k @ rho @ k.conj().T
    out = hermitize(out)
    return validate_density_matrix(out, herm_tol=1e-10, trace_tol=1e-10)


def choi_matrix(channel: KrausChannel) -> np.ndarray:
    """Choi matrix ``sum_j vec(K_j) vec(K_j)^dag`` (row stacking)."""
    vecs = [liouville.vectorize(k) for k in channel.operators]
    d2 = vecs[0].size
    choi = np.zeros((d2, d2), dtype=complex)
    for v in vecs:
        choi += np.outer(v, v.conj())
    return choi


@dataclass(frozen=True)
class GadEquivalenceReport:
    """Outcome of fitting a channel to the generalized amplitude damping form."""

    eta: float
    bias: float
    max_deviation: float
    passed: bool


def verify_gad_equivalence(
    channel: KrausChannel, tolerance: float = 1e-10
) -> GadEquivalenceReport:
    """Fit the channel's action to a two-parameter damping form and compare.

    The decay parameter ``eta`` is read off the population transfer out of
    each computational basis state and the bias from the branching ratio; an
    ideal generalized-amplitude-damping transfer matrix with those parameters
    is then compared entrywise against the channel's.
    """
    if channel.dim != 2:
        raise ValueError("equivalence check is defined for qubit channels")
    ground = np.array([[1.0, 0.0], [0.0, 0.0]], dtype=complex)
    excited = np.array([[0.0, 0.0], [0.0, 1.0]], dtype=complex)
    up = float(apply_channel(channel, ground)[1, 1].real)      # eta * p
    down = float(apply_channel(channel, excited)[0, 0].real)   # eta * (1 - p)
    eta = up + down
    bias = up / eta if eta > 1e-14 else float("nan")

    if eta > 1e-14:
        ce, se = np.sqrt(max(0.0, 1.0 - eta)), np.sqrt(min(1.0, eta))
        e1 = np.sqrt(1.0 - bias) * np.array([[1.0, 0.0], [0.0, ce]], dtype=complex)
        e2 = np.sqrt(1.0 - bias) * np.array([[0.0, se], [0.0, 0.0]], dtype=complex)
        e3 = np.sqrt(bias) * np.array([[ce, 0.0], [0.0, 1.0]], dtype=complex)
        e4 = np.sqrt(bias) * np.array([[0.0, 0.0], [se, 0.0]], dtype=complex)
        ideal = liouville.transfer_matrix([e1, e2, e3, e4])
    else:
        ideal = np.eye(4, dtype=complex)
    actual = liouville.transfer_matrix(channel.operators)
    deviation = float(np.max(np.abs(actual - ideal)))
    return GadEquivalenceReport(eta, bias, deviation, deviation < tolerance)


@dataclass(frozen=True)
class DaviesBlockReport:
    """Cross-coupling between population and coherence sectors of a generator."""

    max_coupling: float
    passed: bool


def verify_davies_blocks(
    generator: np.ndarray, energy_basis: np.ndarray, tolerance: float = 1e-9
) -> DaviesBlockReport:
    """Check that a qubit generator decouples populations from coherences.

    The generator is rewritten in the given energy eigenbasis (columns of
    ``energy_basis``); the population sector lives on the diagonal row-stacked
    indices ``{0, 3}``, the coherence sector on ``{1, 2}``.
    """
    gen = np.asarray(generator, dtype=complex)
    if gen.shape != (4, 4):
        raise ValueError("block check is defined for qubit generators (4 x 4)")
    w = liouville.basis_change_superoperator(energy_basis)
    rotated = w @ gen @ np.linalg.inv(w)
    pop, coh = [0, 3], [1, 2]
    coupling = max(
        float(np.max(np.abs(rotated[np.ix_(pop, coh)]))),
        float(np.max(np.abs(rotated[np.ix_(coh, pop)]))),
    )
    return DaviesBlockReport(coupling, coupling < tolerance)
