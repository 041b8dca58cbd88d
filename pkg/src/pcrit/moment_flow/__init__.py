"""Finite quiver model of the deformation space with its moment-map flow."""

from .flow import (
    ENERGY_SLACK,
    FlowOptions,
    FlowResult,
    FlowVerdict,
    GaugePath,
    HNCluster,
    LimitClassification,
    Summand,
    classify_limit,
    flow,
    flow_verdict,
    gauge_path,
    integrate_flow,
    k_orbit_distance,
    orbit_closed,
    stabilizer_dim,
    write_trace_csv,
)
from .oracle import brute_force_verdict, closed_subsets
from .quiver import (
    LieElement,
    ModelPoint,
    OnePSLimit,
    QuiverModel,
    build_model,
    energy,
    gradient,
    group_action,
    infinitesimal_action,
    lie_inner,
    model_from_json,
    model_to_json,
    moment_map,
    one_ps_limit,
    one_ps_orbit,
    random_hermitian,
    random_model,
    random_point,
    random_unitary,
    subspace_generator,
    subspace_p_value,
    weight_function,
)
