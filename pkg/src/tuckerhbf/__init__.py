"""Tucker2 hybrid beamforming design and sum-rate benchmarks for OFDM mmWave MIMO."""

from .beamforming import (
    AlsReport,
    AnalogPair,
    HybridBeamformer,
    als_stream_pair,
    design_analog,
    design_digital,
    design_hybrid,
    residual_update,
)
from .channel import (
    ChannelParams,
    PathSet,
    channel_from_paths,
    generate_channel,
    load_channel,
    sample_paths,
    save_channel,
    uspa_response,
)
from .harness import (
    ConfigError,
    METHODS,
    SimConfig,
    SweepOutcome,
    TrialResult,
    run_experiment,
    seed_for_trial,
    sweep,
    write_csv,
    write_json,
)
from .metrics import (
    LinkBudget,
    RateResult,
    avg_cov_baseline,
    evaluate_hybrid,
    evaluate_rates,
    optimal_digital,
    optimal_digital_beamformers,
    stream_sinr,
    sum_rate,
)
from .tensor_ops import (
    NumericError,
    SvdResult,
    fold,
    frobenius_norm_sq,
    mode_n_matricize,
    phase_project,
    slice_kron_apply,
    svd,
)

__version__ = "0.1.0"
