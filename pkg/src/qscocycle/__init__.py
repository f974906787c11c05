"""Desk-scale numerics for Fock-adapted contraction operator cocycles.

Block generators on h + (h (x) k), their associated contraction semigroups,
exact cocycle matrix elements through the semigroup product decomposition,
Schur-criterion and convergence probes, and an independent
repeated-interaction oracle for cross-validation.
"""

from .cocycle import (
    SlicedOperator,
    StepFunction,
    c_operator_fd,
    cocycle_defect,
    exp_inner,
    full_matrix_element,
    sliced_element,
    t_operator_fd,
)
from .generator import (
    BlockGenerator,
    Classification,
    assemble,
    chi,
    classify,
    component,
    contractivity_defect,
    delta_projector,
    form_defect,
    from_hlc,
    hat_vector,
    yosida_approx,
)
from .models import OscillatorSpec, birth_death, inverse_oscillator, random_contractive
from .opcore import mat_exp, max_herm_eig, op_norm, psd_inv_sqrt, schur_product
from .reconstruct import (
    ConvergenceReport,
    Probe,
    ProbeReport,
    make_probe,
    schur_criterion_check,
    screen_family,
    trotter_kato_pipeline,
    varpi_matrix,
)
from .semigroups import (
    GeneratorSlice,
    SemigroupFamily,
    coords_from_f,
    coords_to_f,
    dual_family,
    dual_generator,
    g_generator,
    p_semigroup,
    q_semigroup,
)
from .toyfock import (
    MemoryBudgetError,
    StepContraction,
    ToyLattice,
    oracle_matrix_element,
    oracle_state_norm,
    step_matrix,
)

__version__ = "0.1.0"

__all__ = [
    "BlockGenerator",
    "Classification",
    "ConvergenceReport",
    "GeneratorSlice",
    "MemoryBudgetError",
    "OscillatorSpec",
    "Probe",
    "ProbeReport",
    "SemigroupFamily",
    "SlicedOperator",
    "StepContraction",
    "StepFunction",
    "ToyLattice",
    "assemble",
    "birth_death",
    "c_operator_fd",
    "chi",
    "classify",
    "cocycle_defect",
    "component",
    "contractivity_defect",
    "coords_from_f",
    "coords_to_f",
    "delta_projector",
    "dual_family",
    "dual_generator",
    "exp_inner",
    "form_defect",
    "from_hlc",
    "full_matrix_element",
    "g_generator",
    "hat_vector",
    "inverse_oscillator",
    "make_probe",
    "mat_exp",
    "max_herm_eig",
    "op_norm",
    "oracle_matrix_element",
    "oracle_state_norm",
    "p_semigroup",
    "psd_inv_sqrt",
    "q_semigroup",
    "random_contractive",
    "schur_criterion_check",
    "schur_product",
    "screen_family",
    "sliced_element",
    "step_matrix",
    "t_operator_fd",
    "trotter_kato_pipeline",
    "varpi_matrix",
    "yosida_approx",
]
