"""pairlink: entangled-pair source and QKD-link modeling toolkit.

Analytic counting statistics for a dual-wavelength (810/1550 nm) photon
pair source, two-qubit polarization tomography, Franson interference,
asymptotic BBM92 key rates, and a Monte Carlo time-tag oracle that
cross-checks the closed-form model. See the cli module (or the
``pairlink`` entry point) for the file-based workflows.
"""

from .photonics import (
    BeamParams,
    SpectralShape,
    Wavelength,
    bandwidth_lambda_to_nu,
    bandwidth_nu_to_lambda,
    rayleigh_length,
    spdc_partner_wavelength,
    spectral_density,
)
from .polarization import (
    AnalyzerSetting,
    FringeScan,
    TwoQubitState,
    bell_phi_plus,
    coincidence_probability,
    fidelity_to_pure,
    fringe_curve,
    maximally_mixed,
    purity,
    single_qubit_projector,
    uhlmann_fidelity,
    visibility,
    werner,
)
from .tomography import (
    CountRecord,
    ReconstructionResult,
    TomographySetting,
    linear_inversion,
    log_likelihood,
    mle_reconstruct,
    project_to_physical,
    read_count_records,
    simulate_counts,
    standard_16_settings,
    write_count_records,
)
from .pairstats import (
    ChannelSpec,
    CountModel,
    SourceSpec,
    arm_transmission,
    car,
    car_anchor_source,
    count_model,
    pair_rate,
    si_apd_channel,
    snspd_channel,
    table_source,
)
from .timetags import (
    TagStream,
    car_estimate,
    count_coincidences,
    simulate_streams,
)
from .franson import (
    FeasibilityReport,
    FransonConfig,
    franson_feasibility,
    franson_fringe,
    fringe_vs_voltage,
)
from .qkd import (
    KeyRatePoint,
    LinkSpec,
    PumpSweepResult,
    binary_entropy,
    link_qber,
    hybrid_link,
    pump_sweep,
    secret_key_rate,
)
from .estimation import (
    FitResult,
    fit_cos2,
    fit_inverse_power,
    fit_sinc2,
)

__version__ = "0.1.0"

__all__ = [
    "AnalyzerSetting",
    "BeamParams",
    "ChannelSpec",
    "CountModel",
    "CountRecord",
    "FeasibilityReport",
    "FitResult",
    "FransonConfig",
    "FringeScan",
    "KeyRatePoint",
    "LinkSpec",
    "PumpSweepResult",
    "ReconstructionResult",
    "SourceSpec",
    "SpectralShape",
    "TagStream",
    "TomographySetting",
    "TwoQubitState",
    "Wavelength",
    "arm_transmission",
    "bandwidth_lambda_to_nu",
    "bandwidth_nu_to_lambda",
    "bell_phi_plus",
    "binary_entropy",
    "car",
    "car_anchor_source",
    "car_estimate",
    "coincidence_probability",
    "count_coincidences",
    "count_model",
    "fidelity_to_pure",
    "fit_cos2",
    "fit_inverse_power",
    "fit_sinc2",
    "franson_feasibility",
    "franson_fringe",
    "fringe_curve",
    "fringe_vs_voltage",
    "linear_inversion",
    "link_qber",
    "log_likelihood",
    "maximally_mixed",
    "mle_reconstruct",
    "pair_rate",
    "hybrid_link",
    "project_to_physical",
    "pump_sweep",
    "purity",
    "rayleigh_length",
    "read_count_records",
    "secret_key_rate",
    "si_apd_channel",
    "simulate_counts",
    "simulate_streams",
    "single_qubit_projector",
    "snspd_channel",
    "spdc_partner_wavelength",
    "spectral_density",
    "standard_16_settings",
    "table_source",
    "uhlmann_fidelity",
    "visibility",
    "werner",
    "write_count_records",
]
