"""cavelim: effective Hamiltonians for multiphoton transitions of driven
multilevel atoms coupled to a cavity mode, with brute-force dynamical
validation of every effective model."""

from .elimination import (
    EffectiveHamiltonian,
    RecurrenceTable,
    build_recurrence_table,
    gjames_third_order,
    intermediate_hamiltonian,
    james_second_order,
    lambda_amplitude_heff,
    markov_eliminate,
    paulisch_lambda_heff,
    recurrence_base,
    recurrence_step,
    three_photon_candidates,
)
from .dynamics import (
    StateVector,
    Trajectory,
    basis_state,
    compare,
    extract_rabi_frequency,
    populations,
    propagate,
    rabi_match_report,
)
from .hilbert import AtomSpace, FockSpace, SparseOperator, annihilator, apply, sigma, tensor
from .model import (
    DriveEnvelope,
    RotatingHamiltonian,
    RotatingTerm,
    SystemSpec,
    build_full_hamiltonian,
    constant_drive,
    spec_from_frequencies,
    validate,
)

__version__ = "0.1.0"
