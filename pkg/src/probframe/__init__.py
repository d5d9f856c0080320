"""Transition-probability description of quantum states, circuits and channels."""

from .frame import (
    ProjectorSet,
    build_affine_inverse,
    build_forward_matrix,
    build_right_inverse,
    build_standard_set,
    classify,
    compose_right_inverse,
    compose_sets,
    decompose_in_projectors,
    forward_map,
    rank_of_projector_span,
)
from .gates import KrausChannel, amplitude_damping, depolarizing
from .matcore import (
    coords_to_herm,
    herm_to_coords,
    hermitian_pair_basis,
    projector_of,
    tensor_product,
    trace_inner,
    validate_density,
)
from .qubitframe import (
    is_product,
    marginals,
    p_from_tilde,
    pauli_string,
    product_tensor,
    rho_from_tilde,
    six_state_set,
    tilde_from_p,
    tilde_from_rho,
)
from .transfer import (
    PauliTransferMatrix,
    apply_local,
    expectation,
    prob_transfer_of,
    ptm_of_channel,
    ptm_of_unitary,
    so3_of_su2,
    transition_metric,
)

__version__ = "0.1.0"
