"""Complex-trajectory simulation and sliding-mode chaos control of a 2D
charged anisotropic oscillator, with spectral and Lyapunov diagnostics."""

from .control import (
    ControllerConfig,
    SyncRun,
    balance_control,
    control_input,
    control_variation,
    linear_matrix,
    lyapunov_series,
    nonlinear_term,
    reaching_time,
    routh_hurwitz,
    saturation,
    simulate_sync,
    sliding_value,
    switching_control,
)
from .diagnostics import (
    ChaosReportRow,
    LleResult,
    SpectrumResult,
    chaos_report,
    delay_embed,
    dominant_peaks,
    largest_lyapunov,
    periodogram,
    spectral_flatness,
    top_peak_power_fraction,
)
from .errors import (
    ConfigError,
    DegenerateAnisotropyError,
    GridMismatchError,
    NodalSingularityError,
    QchaosError,
    UncontrollableSurfaceError,
    UndefinedExponentError,
    UnsupportedParametersError,
)
from .integrate import PhaseState, Trajectory, integrate, pair_divergence
from .oscillator import (
    ComplexPoint,
    EigenstateSpec,
    OscillatorParams,
    PotentialGrid,
    classical_potential,
    coeff_ckl,
    derive_params,
    energy,
    eval_eigenstate,
    excited_state_field,
    ground_state_field,
    hermite_poly,
    hyp2f1_terminating,
    quantum_potential,
    total_potential_grid,
    velocity_excited,
    velocity_ground,
    velocity_numeric,
)

__version__ = "0.1.0"
