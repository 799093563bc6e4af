"""Cell-free massive MIMO-OFDM uplink simulator with behavioral hardware
impairments at the access points: LNA nonlinearity, residual phase noise,
IQ imbalance and low-resolution ADC quantization, analyzed through a
Monte-Carlo effective-channel (gain + colored distortion) decomposition."""

from .bussgang import (BussgangStatistics, estimate_statistics, load_statistics,
                       run_chain_once, save_statistics)
from .channel import (ChannelRealization, SpatialCorrelation, build_correlations,
                      correlation_from_clusters, load_realization,
                      sample_channel, save_realization, sv_power_delay_profile,
                      ula_response)
from .impairments import (AgcState, QuantizerSpec, build_quantizer, compute_agc,
                          gaussian_optimal_step, impairment_chain, iqi_pn, lna,
                          phase_noise_samples, quantize_complex)
from .ofdm import apply_fir_channel, ofdm_demodulate, ofdm_modulate
from .receiver import (CombinerKind, SEResult, evaluate_se, linear_statistics,
                       optimal_combiner, perfect_hardware_se, sinr,
                       unaware_combiner)
from .runner import (ExperimentPlan, apply_ablation, config_hash, format_summary,
                     plan_from_scenario, run_experiment, summarize)
from .scenario import (ConfigError, ImpairmentParams, LayoutParams,
                       MonteCarloParams, NetworkScenario, RadioParams,
                       SystemDims, Toggles, drop_network, load_config,
                       noise_power_dbm, pathloss_db, phase_noise_variance,
                       save_config, scenario_from_config, to_config)
from .seeding import complex_normal, derive_rng

__version__ = "0.1.0"
