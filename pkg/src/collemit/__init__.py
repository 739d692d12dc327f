"""Collective dynamics of driven multilevel emitters in a shared vacuum.

The package models arrays of identical multilevel emitters coupled by the
free-space electromagnetic field: pairwise coherent shifts and collective
decay channels, rotating-frame dressed spectra with exchange-symmetry
tracking, linear Heisenberg-picture dynamics in a Hermitian operator basis,
and second-order photon-coincidence observables for the diamond-configuration
cascade.
"""

__version__ = "0.1.0"

from .em_coupling import (
    C_LIGHT,
    DEFAULT_COUPLING_SCALE,
    CollectiveChannels,
    CouplingTensors,
    TransitionDipole,
    collective_channels,
    coupling_tensors,
    pair_coupling,
    propagator_tensor,
)
from .operator_algebra import (
    OperatorBasis,
    build_collective_basis,
    build_single_basis,
    expand_operator,
    reconstruct_operator,
    site_operator,
    transition_operator,
)
from .system_model import (
    DiamondSystem,
    Drive,
    EmitterArray,
    FrameError,
    LevelScheme,
    RotatingFrame,
    build_h_sys,
    rabi_from_power,
    rb87_diamond,
    single_emitter_hamiltonian,
    swap_operator,
)
from .dressed_spectra import (
    DressedSpectrum,
    asymptotic_states,
    diagonalize,
    dressed_distance_sweep,
    single_atom_closed_form,
    track_labels,
)
from .dynamics import (
    DegenerateSteadyStateError,
    GeneratorMatrix,
    StateVector,
    Trajectory,
    apply_dissipator,
    apply_generator,
    build_generator,
    damping_channels,
    evolve_density_matrix,
    expectation,
    expectation_series,
    identity_functional,
    initial_state,
    integrate,
    integrate_to_steady_state,
    liouvillian_matrix,
    residual,
    state_vector_from_density,
    stationary_density_matrix,
    steady_state,
)
from .observables import (
    CoincidenceResult,
    DressedContribution,
    dressed_decomposition,
    far_field_intensity,
    g2_coincidence,
    g2_split,
    zeta_rows,
)
