"""Exact simulation of the f-conditioned phase transform and the generalized Deutsch-Jozsa classifier."""
from .errors import InputError, PromiseViolation
from .gates import UnitaryMatrix, commutator, qft, qft_inv, r_phase, s_gate, translation, walsh
from .gdj import GdjReport, Mode, brute_sum_s, gdj_run, parity_dot, recover_structure
from .oracle import (
    FunctionTable,
    Label,
    OracleTranscript,
    RealFunctionTable,
    StructureParams,
    apply_uf,
    classify_classically,
    compose_g_of_f,
    discretize,
    make_constant,
    make_evenly_distributed,
    make_r_to_one,
)
from .phasekick import (
    PhaseResult,
    VariantTag,
    f_phase_initialized,
    f_phase_uninitialized,
    f_phase_uninitialized_entangled,
    j_phase,
    j_phase_matrix,
    optimality_witness,
    prepare_eigenstate,
    reference_phase,
)
from .registers import (
    PureState,
    RegisterShape,
    apply,
    basis_state,
    distribution,
    fidelity,
    random_state,
    sample,
    tensor,
)

__version__ = "0.1.0"
