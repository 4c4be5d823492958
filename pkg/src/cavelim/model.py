"""Physical system declaration and interaction-picture Hamiltonian assembly.

A system is an (N+1)-level ladder g, 1, .., N with N-1 classical drives on
the successive transitions and one quantized cavity mode on the N-1 <-> N
transition.  In the rotating frame each coupling becomes a term
envelope(t) * exp(i * frequency * t) * operator (+ h.c.), with the
frequency given by the corresponding detuning.

Two cavity coupling orientations exist and are not gauge equivalent:

  absorption:  a sigma_{N,N-1}  (photon absorbed while the atom climbs)
  emission:    a sigma_{N-1,N}  (photon absorbed while the atom drops;
                                 the h.c. emits while climbing)

The lambda-type Raman configuration is the emission form; a pure
absorption ladder is the absorption form.  SystemSpec carries the choice.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import ValidationError
from .hilbert import AtomSpace, FockSpace, SparseOperator, annihilator, sigma, tensor

ABSORPTION = "absorption"
EMISSION = "emission"


@dataclass(frozen=True)
class DriveEnvelope:
    """Slowly varying complex drive amplitude Omega(t).

    kinds: constant; gaussian (amplitude * exp(-(t-center)^2 / 2 width^2));
    pwl (linear interpolation through (t, scale) breakpoints, clamped).
    """

    kind: str = "constant"
    amplitude: complex = 0j
    center: float = 0.0
    width: float = 1.0
    breakpoints: tuple = ()

    def __post_init__(self):
        if self.kind not in ("constant", "gaussian", "pwl"):
            raise ValidationError(f"unknown envelope kind {self.kind!r}")
        if self.kind == "gaussian" and not self.width > 0:
            raise ValidationError("gaussian envelope needs width > 0")
        if self.kind == "pwl":
            if len(self.breakpoints) < 2:
                raise ValidationError("pwl envelope needs >= 2 breakpoints")
            ts = [t for t, _ in self.breakpoints]
            if sorted(ts) != ts:
                raise ValidationError("pwl breakpoints must be time-ordered")

    @property
    def is_constant(self) -> bool:
        return self.kind == "constant"

    def value(self, t: float) -> complex:
        if self.kind == "constant":
            return complex(self.amplitude)
        if self.kind == "gaussian":
            arg = (t - self.center) / self.width
            return complex(self.amplitude) * math.exp(-0.5 * arg * arg)
        ts = [p for p, _ in self.breakpoints]
        vals = [v for _, v in self.breakpoints]
        scale = np.interp(t, ts, vals)
        return complex(self.amplitude) * float(scale)

    def peak(self) -> float:
        """Upper bound for |value(t)| over all t."""
        if self.kind == "pwl":
            return abs(self.amplitude) * max(abs(v) for _, v in self.breakpoints)
        return abs(self.amplitude)


def constant_drive(amplitude: complex) -> DriveEnvelope:
    return DriveEnvelope(kind="constant", amplitude=amplitude)


@dataclass(frozen=True)
class SystemSpec:
    """Ladder + drives + cavity declaration.

    detunings: (Delta_1, .., Delta_N), Delta_N being the cavity detuning.
    drives: (Omega_1, .., Omega_{N-1}).  eta: cavity coupling.
    """

    n: int
    detunings: tuple[float, ...]
    drives: tuple[DriveEnvelope, ...]
    eta: float
    fock_cutoff: int
    cavity_form: str = EMISSION

    def violations(self) -> list[str]:
        out = []
        if self.n < 2:
            out.append("N >= 2 required")
        if len(self.detunings) != self.n:
            out.append(f"expected {self.n} detunings, got {len(self.detunings)}")
        for k, d in enumerate(self.detunings, start=1):
            if d == 0:
                out.append(f"zero detuning at index {k}")
            if not math.isfinite(d):
                out.append(f"non-finite detuning at index {k}")
        if len(self.drives) != self.n - 1:
            out.append(f"expected {self.n - 1} drives, got {len(self.drives)}")
        if self.eta < 0:
            out.append("eta must be >= 0")
        if self.fock_cutoff < 1:
            out.append("fock_cutoff must be >= 1")
        if self.cavity_form not in (ABSORPTION, EMISSION):
            out.append(f"cavity_form must be one of {ABSORPTION!r}, {EMISSION!r}")
        return out

    def require_valid(self) -> None:
        problems = self.violations()
        if problems:
            raise ValidationError("; ".join(problems))

    @property
    def atom(self) -> AtomSpace:
        return AtomSpace(self.n + 1)

    @property
    def fock(self) -> FockSpace:
        return FockSpace(self.fock_cutoff)

    @property
    def dim(self) -> int:
        return (self.n + 1) * (self.fock_cutoff + 1)

    def level_label(self, idx: int) -> str:
        return self.atom.labels[idx]

    def scaled_detunings(self, s: float) -> "SystemSpec":
        return replace(self, detunings=tuple(s * d for d in self.detunings))


def validate(spec: SystemSpec) -> list[str]:
    """Empty list iff the spec satisfies all invariants."""
    return spec.violations()


def spec_from_frequencies(
    level_energies: tuple[float, ...],
    laser_frequencies: tuple[float, ...],
    cavity_frequency: float,
    drives: tuple[DriveEnvelope, ...],
    eta: float,
    fock_cutoff: int,
    cavity_form: str = EMISSION,
) -> SystemSpec:
    """Build a spec from bare level energies (E_g first, hbar = 1) and
    laser/cavity frequencies: Delta_k = (E_k - E_{k-1}) - omega_k for the
    classical drives and Delta_N = (E_N - E_g) - omega_cavity."""
    e = tuple(level_energies)
    n = len(e) - 1
    if len(laser_frequencies) != n - 1:
        raise ValidationError("need one laser frequency per classical drive")
    dets = [
        (e[k] - e[k - 1]) - laser_frequencies[k - 1] for k in range(1, n)
    ]
    dets.append((e[n] - e[0]) - cavity_frequency)
    return SystemSpec(
        n=n,
        detunings=tuple(dets),
        drives=tuple(drives),
        eta=eta,
        fock_cutoff=fock_cutoff,
        cavity_form=cavity_form,
    )


@dataclass(frozen=True)
class RotatingTerm:
    """One interaction-picture term envelope(t) e^{i freq t} op (+ h.c.)."""

    operator: SparseOperator
    envelope: object  # anything with .value(t), .peak(), .is_constant
    frequency: float
    include_hc: bool = True
    label: str = ""


@dataclass(frozen=True)
class RotatingHamiltonian:
    dim: int
    terms: tuple[RotatingTerm, ...]

    def evaluate(self, t: float) -> SparseOperator:
        acc = SparseOperator(self.dim)
        for term in self.terms:
            coeff = term.envelope.value(t) * np.exp(1j * term.frequency * t)
            acc = acc + term.operator.scaled(coeff)
            if term.include_hc:
                acc = acc + term.operator.dagger().scaled(np.conj(coeff))
        return acc

    def norm_bound(self) -> float:
        """Time-independent upper bound on the spectral norm."""
        total = 0.0
        for term in self.terms:
            w = term.envelope.peak() * term.operator.one_norm()
            total += 2 * w if term.include_hc else w
        return total

    def max_frequency(self) -> float:
        return max((abs(t.frequency) for t in self.terms), default=0.0)


def build_full_hamiltonian(spec: SystemSpec) -> RotatingHamiltonian:
    """All N rotating terms of the driven ladder-plus-cavity system:
    drive k on sigma_{k,k-1} at +Delta_k, cavity on a sigma_{N,N-1}
    (absorption) or a sigma_{N-1,N} (emission) at +Delta_N."""
    spec.require_valid()
    atom, fock = spec.atom, spec.fock
    ident_f = SparseOperator.identity(fock.dim)
    a = annihilator(fock)
    terms = []
    for k in range(1, spec.n):
        op = tensor(sigma(atom, k, k - 1), ident_f)
        lab = f"sig_{spec.level_label(k)}{spec.level_label(k - 1)}"
        terms.append(
            RotatingTerm(op, spec.drives[k - 1], spec.detunings[k - 1], True, lab)
        )
    n = spec.n
    if spec.cavity_form == ABSORPTION:
        atom_op = sigma(atom, n, n - 1)
        lab = f"a*sig_{spec.level_label(n)}{spec.level_label(n - 1)}"
    else:
        atom_op = sigma(atom, n - 1, n)
        lab = f"a*sig_{spec.level_label(n - 1)}{spec.level_label(n)}"
    terms.append(
        RotatingTerm(
            tensor(atom_op, a), constant_drive(spec.eta), spec.detunings[n - 1], True, lab
        )
    )
    return RotatingHamiltonian(spec.dim, tuple(terms))
