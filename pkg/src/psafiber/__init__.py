"""Phase-sensitive fiber parametric amplification: closed forms, oracle checks and noise."""

from .bloch_messiah import BMFactors, PoleDetected, decompose, numeric_oracle, reconstruct, rotation_tangents
from .fwm import (
    FiberParams,
    MuNu,
    PumpConfigA,
    PumpConfigB,
    QuadTransfer,
    coeffs_A,
    coeffs_B,
    gain_extrema,
    map_A_to_B_params,
    pm_basis,
    power_gain_A,
    power_gain_B,
    quad_transfer,
)
from .loss import LinkInputs, LinkLayout, LossChannel, layout_ratio, lossy_homodyne_stats, nf_optimum, nf_with_loss
from .noise import (
    GaussianState,
    SnrReport,
    build_s_tot,
    duan_lhs,
    homodyne_stats_A,
    joint_mode_nf_B,
    noise_figure_A,
    output_covariance,
    signal_only_nf_B,
    vacuum_idler_nf_B,
)
from .optimum import optimal_idler_B, optimal_signal_phase_A, pia_stats
from .oracle import (
    FieldState3,
    IntegratorConfig,
    MaxStepsExceeded,
    OracleInaccurate,
    ProbeTooLarge,
    extract_mu_nu,
    integrate,
)

__version__ = "0.1.0"
