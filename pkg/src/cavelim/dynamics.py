"""State-vector propagation and comparison observables.

The propagator is a fixed-step classical 4th-order integrator of
i dpsi/dt = H(t) psi.  Norm is not renormalized by default; its drift is a
diagnostic.  The stability guard requires dt * max(|frequencies|, |H|
bound) <= 0.1 so the rotating phases stay resolved.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ExtractionError, IntegrationQualityError, ValidationError
from .model import RotatingHamiltonian, SystemSpec

STABILITY_LIMIT = 0.1


@dataclass(frozen=True)
class StateVector:
    """Normalized amplitudes over the atom (x) Fock product basis."""

    amplitudes: np.ndarray
    n_levels: int
    fock_dim: int

    def __post_init__(self):
        amp = np.asarray(self.amplitudes, dtype=complex)
        if amp.shape != (self.n_levels * self.fock_dim,):
            raise ValidationError("amplitude length does not match basis")
        if abs(np.linalg.norm(amp) - 1.0) > 1e-9:
            raise ValidationError("state vector must be normalized to 1e-9")
        object.__setattr__(self, "amplitudes", amp)

    @property
    def dim(self) -> int:
        return self.n_levels * self.fock_dim

    def basis_labels(self) -> list[tuple[int, int]]:
        return [(lv, n) for lv in range(self.n_levels) for n in range(self.fock_dim)]


def basis_state(spec: SystemSpec, level: int, n_photons: int) -> StateVector:
    n_levels, fock_dim = spec.n + 1, spec.fock_cutoff + 1
    if not (0 <= level < n_levels and 0 <= n_photons < fock_dim):
        raise ValidationError("basis state outside the truncated space")
    amp = np.zeros(n_levels * fock_dim, dtype=complex)
    amp[level * fock_dim + n_photons] = 1.0
    return StateVector(amp, n_levels, fock_dim)


def populations(state: StateVector) -> np.ndarray:
    """Per-level probabilities, photon index traced out."""
    grid = np.abs(state.amplitudes.reshape(state.n_levels, state.fock_dim)) ** 2
    return grid.sum(axis=1)


@dataclass(frozen=True)
class Trajectory:
    times: np.ndarray
    states: np.ndarray  # (n_samples, dim)
    populations: np.ndarray  # (n_samples, n_levels)
    photon_expectation: np.ndarray
    norms: np.ndarray
    n_levels: int
    fock_dim: int
    dt: float

    @property
    def norm_drift(self) -> np.ndarray:
        return np.abs(self.norms - 1.0)

    def fidelity_against(self, other: "Trajectory") -> np.ndarray:
        if not np.array_equal(self.times, other.times):
            raise ValidationError("trajectories live on different time grids")
        return np.abs(np.einsum("ij,ij->i", self.states.conj(), other.states))


def _term_arrays(h: RotatingHamiltonian):
    mats, freqs, envs, conjs = [], [], [], []
    for term in h.terms:
        mats.append(term.operator.to_dense())
        freqs.append(term.frequency)
        envs.append(term.envelope)
        conjs.append(False)
        if term.include_hc:
            mats.append(term.operator.dagger().to_dense())
            freqs.append(-term.frequency)
            envs.append(term.envelope)
            conjs.append(True)
    mats = np.array(mats) if mats else np.zeros((0, h.dim, h.dim), dtype=complex)
    return mats, np.array(freqs, dtype=float), envs, conjs


def _coefficients(envs, conjs, amps_const, freqs, t):
    if amps_const is not None:
        amps = amps_const
    else:
        amps = np.array(
            [np.conj(e.value(t)) if c else e.value(t) for e, c in zip(envs, conjs)]
        )
    return amps * np.exp(1j * freqs * t)


def propagate(
    h: RotatingHamiltonian,
    psi0: StateVector,
    t_final: float,
    dt: float,
    stride: int | None = None,
    norm_tolerance: float = 1e-6,
    renormalize: bool = False,
) -> Trajectory:
    """Fixed-step 4th-order integration with observables sampled every
    `stride` steps (chosen automatically when omitted)."""
    if dt <= 0:
        raise ValidationError("dt must be positive")
    if t_final <= 0:
        raise ValidationError("t_final must be positive")
    if psi0.dim != h.dim:
        raise ValidationError("initial state dimension does not match Hamiltonian")
    scale = max(h.max_frequency(), h.norm_bound())
    if dt * scale > STABILITY_LIMIT * (1 + 1e-12):
        raise ValidationError(
            f"stability guard: dt*max(|freq|,|H|) = {dt * scale:.3g} exceeds {STABILITY_LIMIT}"
        )

    n_steps = max(1, int(math.ceil(t_final / dt - 1e-12)))
    if stride is None:
        stride = max(1, n_steps // 2000)

    mats, freqs, envs, conjs = _term_arrays(h)
    dim = h.dim
    n_terms = mats.shape[0]
    flat = mats.reshape(n_terms, dim * dim) if n_terms else None
    all_const = all(getattr(e, "is_constant", False) for e in envs)
    amps_const = None
    if all_const and n_terms:
        amps_const = np.array(
            [np.conj(e.value(0.0)) if c else e.value(0.0) for e, c in zip(envs, conjs)]
        )

    def hamiltonian(t):
        if n_terms == 0:
            return np.zeros((dim, dim), dtype=complex)
        coefs = _coefficients(envs, conjs, amps_const, freqs, t)
        return (coefs @ flat).reshape(dim, dim)

    psi = psi0.amplitudes.copy()
    times, states = [0.0], [psi.copy()]
    t = 0.0
    half = 0.5 * dt
    sixth = dt / 6.0
    fast = amps_const is not None
    if fast:
        # recursive half-step phases; re-anchored periodically against
        # multiplicative roundoff
        phase_half = np.exp(1j * freqs * half)
        phases = amps_const.copy()  # amplitudes at t = 0
        h_t = (phases @ flat).reshape(dim, dim)
    else:
        h_t = hamiltonian(0.0)
    for step in range(1, n_steps + 1):
        if fast:
            phases = phases * phase_half
            h_half = (phases @ flat).reshape(dim, dim)
            phases = phases * phase_half
            h_next = (phases @ flat).reshape(dim, dim)
            if step % 4096 == 0:
                phases = amps_const * np.exp(1j * freqs * (t + dt))
        else:
            h_half = hamiltonian(t + half)
            h_next = hamiltonian(t + dt)
        k1 = h_t @ psi
        k2 = h_half @ (psi - 1j * half * k1)
        k3 = h_half @ (psi - 1j * half * k2)
        k4 = h_next @ (psi - 1j * dt * k3)
        psi = psi - 1j * sixth * (k1 + 2.0 * (k2 + k3) + k4)
        if renormalize:
            psi = psi / np.linalg.norm(psi)
        t += dt
        h_t = h_next
        if step % stride == 0 or step == n_steps:
            drift = abs(np.linalg.norm(psi) - 1.0)
            if not renormalize and drift > norm_tolerance:
                raise IntegrationQualityError(
                    f"norm drift {drift:.3e} beyond tolerance at step {step}", step=step
                )
            times.append(t)
            states.append(psi.copy())

    states = np.array(states)
    times = np.array(times)
    grid = np.abs(states.reshape(len(times), psi0.n_levels, psi0.fock_dim)) ** 2
    pops = grid.sum(axis=2)
    photon = (grid * np.arange(psi0.fock_dim)).sum(axis=(1, 2))
    norms = np.linalg.norm(states, axis=1)
    return Trajectory(
        times, states, pops, photon, norms, psi0.n_levels, psi0.fock_dim, dt
    )


def extract_rabi_frequency(traj: Trajectory, level: int, min_swing: float = 1e-6) -> float:
    """2 pi / period, the period taken between the first two times the
    population crosses its midrange going upward."""
    p = traj.populations[:, level]
    swing = p.max() - p.min()
    if swing < min_swing:
        raise ExtractionError(f"population of level {level} shows no oscillation")
    mid = 0.5 * (p.max() + p.min())
    t = traj.times
    crossings = []
    for k in range(1, len(t)):
        if p[k - 1] < mid <= p[k]:
            frac = (mid - p[k - 1]) / (p[k] - p[k - 1])
            crossings.append(t[k - 1] + frac * (t[k] - t[k - 1]))
            if len(crossings) == 2:
                break
    if len(crossings) < 2:
        raise ExtractionError(
            f"level {level} does not complete an oscillation in the window"
        )
    return 2.0 * math.pi / (crossings[1] - crossings[0])


@dataclass(frozen=True)
class ComparisonReport:
    max_error_per_level: dict
    max_error: float
    rms_error: float
    leakage_max: float
    rabi_full: float | None
    rabi_effective: float | None
    rabi_relative_error: float | None


def compare(full: Trajectory, effective: Trajectory, retained=None) -> ComparisonReport:
    """Population-error summary between a full and an effective run on the
    retained levels (default: ground and top)."""
    if not np.array_equal(full.times, effective.times):
        raise ValidationError("trajectories live on different time grids")
    if full.n_levels != effective.n_levels:
        raise ValidationError("trajectories have different level structure")
    top = full.n_levels - 1
    retained = tuple(retained) if retained is not None else (0, top)
    per_level = {}
    for lv in retained:
        per_level[lv] = float(np.max(np.abs(full.populations[:, lv] - effective.populations[:, lv])))
    diffs = np.concatenate(
        [full.populations[:, lv] - effective.populations[:, lv] for lv in retained]
    )
    intermediate = [lv for lv in range(full.n_levels) if lv not in retained]
    leakage = 0.0
    if intermediate:
        leakage = float(np.max(full.populations[:, intermediate].sum(axis=1)))
    rabi_full = rabi_eff = rel = None
    try:
        rabi_full = extract_rabi_frequency(full, top)
        rabi_eff = extract_rabi_frequency(effective, top)
        rel = abs(rabi_full - rabi_eff) / abs(rabi_full)
    except ExtractionError:
        pass
    return ComparisonReport(
        max_error_per_level=per_level,
        max_error=float(max(per_level.values())),
        rms_error=float(np.sqrt(np.mean(diffs**2))),
        leakage_max=leakage,
        rabi_full=rabi_full,
        rabi_effective=rabi_eff,
        rabi_relative_error=rel,
    )


def rabi_match_report(measured: float, predictions: dict, tolerance: float = 0.15) -> dict:
    """Compare a measured oscillation frequency against named predictions.

    Returns per-candidate relative deviations and a determination: the
    unique candidate within tolerance, 'none' (with the closest named), or
    'ambiguous' when several qualify.
    """
    if measured <= 0:
        raise ValidationError("measured frequency must be positive")
    deviations = {
        name: abs(measured - abs(value)) / measured for name, value in predictions.items()
    }
    within = sorted(name for name, dev in deviations.items() if dev <= tolerance)
    if len(within) == 1:
        determination = within[0]
    elif not within:
        closest = min(deviations, key=deviations.get)
        determination = f"none (closest: {closest} at {deviations[closest]:.1%})"
    else:
        determination = "ambiguous: " + ", ".join(within)
    return {
        "measured": measured,
        "deviations": deviations,
        "tolerance": tolerance,
        "determination": determination,
    }


def trajectory_csv_lines(traj: Trajectory, level_names=None) -> list[str]:
    """Decimal-text rows (12 significant digits): t, per-level populations,
    photon expectation, norm."""
    if level_names is None:
        level_names = ["g"] + [str(k) for k in range(1, traj.n_levels)]
    header = "t," + ",".join(f"P_{name}" for name in level_names) + ",n_expect,norm"
    lines = [header]
    for k in range(len(traj.times)):
        cells = [f"{traj.times[k]:.12g}"]
        cells += [f"{p:.12g}" for p in traj.populations[k]]
        cells.append(f"{traj.photon_expectation[k]:.12g}")
        cells.append(f"{traj.norms[k]:.12g}")
        lines.append(",".join(cells))
    return lines
