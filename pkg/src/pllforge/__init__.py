"""pllforge: behavioral simulator and design toolkit for charge-pump PLLs.

Models the classic synthesizer loop (PFD, charge pump, second-order passive
filter, current-starved VCO, divide-by-N) at the block level, with an exact
piecewise-constant-current filter integrator, a continuous-time linear model
for stability and synthesis, lock detection, and parameter sweeps.
"""

__version__ = "0.1.0"

from .analysis import (
    AnalysisError,
    LinearLoopParams,
    StabilityReport,
    estimate_lock_time,
    linear_step_response,
    loop_params_from_config,
    stability_report,
    synthesize_loop,
)
from .charge_pump import (
    ChargePumpParams,
    LoopFilterState,
    cp_current,
    lf_clamp,
    lf_impedance,
    lf_step,
)
from .config import (
    ConfigError,
    PaperPreset,
    PllConfig,
    config_from_dict,
    config_to_dict,
    load_config,
    paper_preset,
    preset_metadata,
    save_config,
    validate_config,
)
from .divider import (
    TSPC_DIV2_POWER,
    DividerState,
    PowerTable,
    div_step,
    divider_power_estimate,
)
from .engine import (
    LockRangePoint,
    LockReport,
    SimTrace,
    detect_lock,
    simulate,
    sweep_lock_range,
    sweep_vco,
)
from .pfd import PfdState, pfd_average_duty, pfd_step
from .vco import (
    VcoState,
    VcoTuningCurve,
    vco_ctrl_voltage,
    vco_freq,
    vco_gain_global,
    vco_gain_local,
    vco_step,
)
from .cli import RunManifest, emit_plot_script, run_cli, write_trace_csv

__all__ = [
    "AnalysisError",
    "ChargePumpParams",
    "ConfigError",
    "DividerState",
    "LinearLoopParams",
    "LockRangePoint",
    "LockReport",
    "LoopFilterState",
    "PaperPreset",
    "PfdState",
    "PllConfig",
    "PowerTable",
    "RunManifest",
    "SimTrace",
    "StabilityReport",
    "TSPC_DIV2_POWER",
    "VcoState",
    "VcoTuningCurve",
    "config_from_dict",
    "config_to_dict",
    "cp_current",
    "detect_lock",
    "div_step",
    "divider_power_estimate",
    "emit_plot_script",
    "estimate_lock_time",
    "lf_clamp",
    "lf_impedance",
    "lf_step",
    "linear_step_response",
    "load_config",
    "loop_params_from_config",
    "paper_preset",
    "pfd_average_duty",
    "pfd_step",
    "preset_metadata",
    "run_cli",
    "save_config",
    "simulate",
    "stability_report",
    "sweep_lock_range",
    "sweep_vco",
    "synthesize_loop",
    "validate_config",
    "vco_ctrl_voltage",
    "vco_freq",
    "vco_gain_global",
    "vco_gain_local",
    "vco_step",
    "write_trace_csv",
]
