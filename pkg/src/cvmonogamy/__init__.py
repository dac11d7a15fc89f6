"""Monogamy of entanglement and steering for tripartite continuous-variable Gaussian states."""

from .fuzz import FuzzReport, build_from_recipe, circuit_recipe, fuzz_monogamy, random_physical_state, random_recipe
from .gaussian import (
    GaussianState,
    TwoModeReduced,
    apply_beamsplitter,
    apply_loss,
    apply_phase_rotation,
    apply_two_mode_squeezing,
    conditional_variance,
    is_physical,
    partial_trace,
    reduced_two_mode,
    tensor,
    thermal_seeded_tms,
    thermal_state,
    two_mode_squeezed,
    vacuum_state,
)
from .montecarlo import (
    SampleBatch,
    empirical_conditional_variance,
    read_batch,
    regression_conditional_variance,
    sample_wigner,
    write_batch,
)
from .network import (
    CircuitParams,
    NoClosedFormError,
    NonPhysicalParameters,
    build_circuit,
    closed_form_covariances,
    closed_form_report,
    scenario_family,
)
from .quantifiers import (
    ent_opt_reduced,
    QuantifierReport,
    UncorrelatedModesError,
    check_monogamy,
    duan_D,
    ent_g,
    ent_opt,
    g_sym,
    monogamy_bound_MB,
    optimal_inference,
    steering_S_collective,
    steering_S_pair,
)
from .sweep import PRESETS, SweepRow, SweepSpec, get_preset, run_sweep, to_csv

__version__ = "0.1.0"
