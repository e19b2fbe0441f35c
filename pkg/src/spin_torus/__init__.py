"""Exact two-spin Heisenberg evolution, the flat-torus geometry of the
evolved states, and their entanglement, with independent cross-checks for
every closed form."""

__version__ = "0.1.0"

from .entanglement import (
    ConcurrenceProfile,
    MaxEntanglement,
    concurrence,
    concurrence_disentangled,
    concurrence_evolved,
    concurrence_profile,
    concurrence_wootters_oracle,
    constant_entanglement_circle,
    max_entanglement_time,
)
from .hamiltonian import (
    EigenSystem,
    SystemParams,
    build_h_int,
    build_h_mf,
    build_hamiltonian,
    eigensystem,
    propagator_analytic,
    propagator_factored,
    propagator_spectral,
)
from .manifold import (
    FamilyInvariants,
    ManifoldKind,
    ManifoldReport,
    MetricTensor2,
    TorusPoint,
    classify,
    diagonalize_check,
    evolve_family,
    evolve_family_sheared,
    family_invariants,
    metric_analytic,
    metric_numeric,
    params_to_point,
)
from .qstate import (
    Operator4,
    PureState2Q,
    apply,
    basis_state,
    fs_distance_sq,
    inner,
    minus_minus_state,
    plus_minus_state,
    plus_plus_state,
    product_state,
    random_state,
    ray_equal,
    up_down,
)
from .scenario import (
    RunRecord,
    ScenarioConfig,
    config_from_dict,
    config_from_json,
    export_record,
    run_scenario,
)

__all__ = [
    "__version__",
    "ConcurrenceProfile",
    "MaxEntanglement",
    "concurrence",
    "concurrence_disentangled",
    "concurrence_evolved",
    "concurrence_profile",
    "concurrence_wootters_oracle",
    "constant_entanglement_circle",
    "max_entanglement_time",
    "EigenSystem",
    "SystemParams",
    "build_h_int",
    "build_h_mf",
    "build_hamiltonian",
    "eigensystem",
    "propagator_analytic",
    "propagator_factored",
    "propagator_spectral",
    "FamilyInvariants",
    "ManifoldKind",
    "ManifoldReport",
    "MetricTensor2",
    "TorusPoint",
    "classify",
    "diagonalize_check",
    "evolve_family",
    "evolve_family_sheared",
    "family_invariants",
    "metric_analytic",
    "metric_numeric",
    "params_to_point",
    "Operator4",
    "PureState2Q",
    "apply",
    "basis_state",
    "fs_distance_sq",
    "inner",
    "minus_minus_state",
    "plus_minus_state",
    "plus_plus_state",
    "product_state",
    "random_state",
    "ray_equal",
    "up_down",
    "RunRecord",
    "ScenarioConfig",
    "config_from_dict",
    "config_from_json",
    "export_record",
    "run_scenario",
]
