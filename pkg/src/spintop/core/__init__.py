"""Core geometry, wave and verification functionality for :mod:`spintop`."""

from __future__ import annotations

from .constants import (
    DEFAULT_CONSTANTS,
    PRINTED_CURVATURE_TIMES_A2,
    PhysicalConstants,
    a_from_mass,
    conformal_gamma2,
    constants_from_config,
)
from .dynamics import (
    CSV_COLUMNS,
    ClassicalLagrangian,
    ConvergenceStudy,
    Trajectory,
    TrajectoryState,
    ZitterbewegungReport,
    convergence_order,
    fourleg_drift,
    integrate_bundle,
    integrate_trajectory,
    lagrangian_classical,
    velocity_field,
    zitterbewegung_report,
)
from .errors import (
    ConfigError,
    DomainError,
    ImaginaryRadicand,
    NonpositiveGauge,
    NonpositiveMass,
    NonpositiveWeylFactor,
    OffShellMomentum,
    SingularChart,
    SingularMetric,
    SpintopError,
    TooShort,
    UnsupportedRep,
    ZeroAmplitude,
)
from .fields import FieldConfig, em_lift, field_strength, fields_from_config, invariant_f2
from .geometry import (
    MINKOWSKI,
    ConfigPoint,
    CurvatureReport,
    MetricField,
    config_metric,
    conformal_scale,
    curvature,
    laplace_beltrami,
    scalar_curvature,
    scalar_curvature_closed_form,
)
from .lorentz import (
    G,
    EulerAngles,
    InvariantFrame,
    SpinorRep,
    casimir,
    group_metric,
    invariant_frame,
    killing_vectors,
    lorentz_from_euler,
    rep_matrix,
    sl2c_from_euler,
)
from .report import (
    build_calibration_document,
    build_report_document,
    build_trace_summary,
    write_report_document,
    write_trajectory_csv,
)
from .spin import (
    CalibrationReport,
    DiracField,
    SpinorField,
    coefficient_residual,
    delta_j,
    dirac_plane_wave,
    mode_expand,
    reduction_calibration,
    reduction_check,
    squared_dirac_residual,
)
from .suites import SUITE_NAMES, CheckResult, SuiteRun, SuiteSettings, run_suites
from .wave import (
    PotentialPair,
    WaveField,
    continuity_residual,
    current,
    current_divergence,
    hj_residual,
    madelung_decomposition,
    psi_from_potentials,
    wave_residual,
)
from .weyl import (
    GaugeTransform,
    WeylPotential,
    co_covariant_derivative,
    gauge_transform,
    lagrangian_quantum,
    weyl_connection,
    weyl_scalar_curvature,
)

__all__ = [
    "PhysicalConstants",
    "DEFAULT_CONSTANTS",
    "PRINTED_CURVATURE_TIMES_A2",
    "a_from_mass",
    "conformal_gamma2",
    "constants_from_config",
    "ConfigPoint",
    "MINKOWSKI",
    "MetricField",
    "CurvatureReport",
    "config_metric",
    "conformal_scale",
    "curvature",
    "laplace_beltrami",
    "scalar_curvature",
    "scalar_curvature_closed_form",
    "G",
    "EulerAngles",
    "InvariantFrame",
    "SpinorRep",
    "casimir",
    "group_metric",
    "invariant_frame",
    "killing_vectors",
    "lorentz_from_euler",
    "rep_matrix",
    "sl2c_from_euler",
    "FieldConfig",
    "em_lift",
    "field_strength",
    "fields_from_config",
    "invariant_f2",
    "WeylPotential",
    "GaugeTransform",
    "co_covariant_derivative",
    "gauge_transform",
    "lagrangian_quantum",
    "weyl_connection",
    "weyl_scalar_curvature",
    "PotentialPair",
    "WaveField",
    "psi_from_potentials",
    "hj_residual",
    "continuity_residual",
    "wave_residual",
    "current",
    "current_divergence",
    "madelung_decomposition",
    "SpinorField",
    "DiracField",
    "CalibrationReport",
    "mode_expand",
    "delta_j",
    "coefficient_residual",
    "squared_dirac_residual",
    "dirac_plane_wave",
    "reduction_check",
    "reduction_calibration",
    "CSV_COLUMNS",
    "Trajectory",
    "TrajectoryState",
    "ClassicalLagrangian",
    "ConvergenceStudy",
    "ZitterbewegungReport",
    "lagrangian_classical",
    "velocity_field",
    "integrate_trajectory",
    "integrate_bundle",
    "convergence_order",
    "fourleg_drift",
    "zitterbewegung_report",
    "SUITE_NAMES",
    "CheckResult",
    "SuiteSettings",
    "SuiteRun",
    "run_suites",
    "build_report_document",
    "build_calibration_document",
    "build_trace_summary",
    "write_report_document",
    "write_trajectory_csv",
    "SpintopError",
    "ConfigError",
    "DomainError",
    "SingularChart",
    "SingularMetric",
    "UnsupportedRep",
    "NonpositiveWeylFactor",
    "NonpositiveGauge",
    "NonpositiveMass",
    "ZeroAmplitude",
    "ImaginaryRadicand",
    "OffShellMomentum",
    "TooShort",
]
