"""Loop configuration: domain types, JSON i/o, validation, reference preset.

All quantities are SI base units (Hz, s, A, ohm, F, V) everywhere; field
names carry the unit in the JSON schema (``ref_freq_hz``, ``c1_f``, ...) and
the semantic name in code (``ref_freq``, ``c1``, ...).

JSON schema (all keys required unless noted)::

    {
      "ref_freq_hz": ..., "divide_ratio": ..., "vdd_v": ...,
      "charge_pump": {"i_pump_a": ..., "leakage_a": ...?},
      "loop_filter": {"r_ohm": ..., "c1_f": ..., "c2_f": ...},
      "vco": {"anchors": [[v, hz], ...]},
      "pfd": {"reset_delay_s": ...},
      "sim": {"dt_s": ..., "t_end_s": ..., "v_ctrl_init_v": ...},
      "lock": {"freq_tol_frac": ..., "phase_tol_rad": ..., "hold_ref_cycles": ...}
    }
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .analysis import synthesize_loop
from .vco import VcoTuningCurve, vco_ctrl_voltage, vco_gain_local


class ConfigError(ValueError):
    """Unreadable, malformed, or invariant-violating configuration."""


@dataclass(frozen=True)
class PllConfig:
    """Full parameterization of the loop. Immutable once validated."""

    ref_freq: float  # Hz
    divide_ratio: int  # positive even integer
    vdd: float  # V
    i_pump: float  # A
    r: float  # ohm
    c1: float  # F
    c2: float  # F
    vco_curve: VcoTuningCurve
    pfd_reset_delay: float  # s
    dt: float  # s
    t_end: float  # s
    v_ctrl_init: float  # V
    lock_freq_tol: float  # dimensionless fraction
    lock_phase_tol: float  # rad
    lock_hold_cycles: int
    leakage: float = 0.0  # A


@dataclass(frozen=True)
class PaperPreset:
    """Preset config bundled with the published silicon figures.

    The silicon numbers are reported measurements of the reference design;
    they are never used in any computation.
    """

    config: PllConfig
    silicon_power_total: float  # W
    silicon_lock_time: float  # s
    vco_power: float  # W
    published_kvco: float  # Hz/V, as published; differs from the anchors' span slope
    silicon_lockin_range: tuple[float, float]  # Hz, input reference
    silicon_output_range: tuple[float, float]  # Hz, at the VCO
    silicon_vco_lock_range: tuple[float, float]  # Hz, quoted lock range = VCO tuning span
    transistor_count: int


def validate_config(cfg: PllConfig) -> list[str]:
    """Return a description of every violated invariant (empty when valid)."""
    problems: list[str] = []
    if cfg.ref_freq <= 0.0:
        problems.append(f"ref_freq must be positive (got {cfg.ref_freq})")
    if not isinstance(cfg.divide_ratio, int) or cfg.divide_ratio < 2:
        problems.append(f"divide_ratio must be an integer >= 2 (got {cfg.divide_ratio})")
    elif cfg.divide_ratio % 2 != 0:
        problems.append(f"divide_ratio must be even (got {cfg.divide_ratio})")
    if cfg.vdd <= 0.0:
        problems.append(f"vdd must be positive (got {cfg.vdd})")
    if cfg.i_pump <= 0.0:
        problems.append(f"i_pump must be positive (got {cfg.i_pump})")
    if cfg.leakage < 0.0:
        problems.append(f"leakage must be >= 0 (got {cfg.leakage})")
    if cfg.r < 0.0:
        problems.append(f"r must be >= 0 (got {cfg.r})")
    if cfg.c1 <= 0.0:
        problems.append(f"c1 must be positive (got {cfg.c1})")
    if cfg.c2 <= 0.0:
        problems.append(f"c2 must be positive (got {cfg.c2})")
    if cfg.pfd_reset_delay < 0.0:
        problems.append(f"pfd_reset_delay must be >= 0 (got {cfg.pfd_reset_delay})")
    dt_limit = 1.0 / (20.0 * cfg.vco_curve.f_max)
    if cfg.dt <= 0.0:
        problems.append(f"dt must be positive (got {cfg.dt})")
    elif not cfg.dt < dt_limit:
        problems.append(
            f"dt must be < 1/(20*f_max) = {dt_limit:.6g} s for at least 20 steps "
            f"per fastest VCO period (got {cfg.dt:.6g})"
        )
    if cfg.ref_freq > 0.0:
        t_min = 100.0 / cfg.ref_freq
        if cfg.t_end < t_min:
            problems.append(
                f"t_end must be >= 100/ref_freq = {t_min:.6g} s (got {cfg.t_end:.6g})"
            )
    if not 0.0 <= cfg.v_ctrl_init <= cfg.vdd:
        problems.append(
            f"v_ctrl_init must be within [0, vdd] = [0, {cfg.vdd}] (got {cfg.v_ctrl_init})"
        )
    if cfg.lock_freq_tol <= 0.0:
        problems.append(f"lock_freq_tol must be positive (got {cfg.lock_freq_tol})")
    if cfg.lock_phase_tol <= 0.0:
        problems.append(f"lock_phase_tol must be positive (got {cfg.lock_phase_tol})")
    if not isinstance(cfg.lock_hold_cycles, int) or cfg.lock_hold_cycles < 1:
        problems.append(
            f"lock_hold_cycles must be a positive integer (got {cfg.lock_hold_cycles})"
        )
    return problems


def _need(mapping: dict, key: str, ctx: str = ""):
    if not isinstance(mapping, dict) or key not in mapping:
        raise ConfigError(f"missing required key '{ctx}{key}'")
    return mapping[key]


def config_from_dict(data: dict) -> PllConfig:
    """Build a PllConfig from the JSON schema dict (no validation pass)."""
    cp = _need(data, "charge_pump")
    lf = _need(data, "loop_filter")
    vco = _need(data, "vco")
    pfd = _need(data, "pfd")
    sim = _need(data, "sim")
    lock = _need(data, "lock")
    anchors = _need(vco, "anchors", "vco.")
    try:
        curve = VcoTuningCurve(anchors=tuple((float(v), float(f)) for v, f in anchors))
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"vco.anchors: {exc}") from exc
    try:
        return PllConfig(
            ref_freq=float(_need(data, "ref_freq_hz")),
            divide_ratio=int(_need(data, "divide_ratio")),
            vdd=float(_need(data, "vdd_v")),
            i_pump=float(_need(cp, "i_pump_a", "charge_pump.")),
            leakage=float(cp.get("leakage_a", 0.0)),
            r=float(_need(lf, "r_ohm", "loop_filter.")),
            c1=float(_need(lf, "c1_f", "loop_filter.")),
            c2=float(_need(lf, "c2_f", "loop_filter.")),
            vco_curve=curve,
            pfd_reset_delay=float(_need(pfd, "reset_delay_s", "pfd.")),
            dt=float(_need(sim, "dt_s", "sim.")),
            t_end=float(_need(sim, "t_end_s", "sim.")),
            v_ctrl_init=float(_need(sim, "v_ctrl_init_v", "sim.")),
            lock_freq_tol=float(_need(lock, "freq_tol_frac", "lock.")),
            lock_phase_tol=float(_need(lock, "phase_tol_rad", "lock.")),
            lock_hold_cycles=int(_need(lock, "hold_ref_cycles", "lock.")),
        )
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"malformed config value: {exc}") from exc


def config_to_dict(cfg: PllConfig) -> dict:
    """Serialize a PllConfig to the JSON schema dict."""
    return {
        "ref_freq_hz": cfg.ref_freq,
        "divide_ratio": cfg.divide_ratio,
        "vdd_v": cfg.vdd,
        "charge_pump": {"i_pump_a": cfg.i_pump, "leakage_a": cfg.leakage},
        "loop_filter": {"r_ohm": cfg.r, "c1_f": cfg.c1, "c2_f": cfg.c2},
        "vco": {"anchors": [list(a) for a in cfg.vco_curve.anchors]},
        "pfd": {"reset_delay_s": cfg.pfd_reset_delay},
        "sim": {"dt_s": cfg.dt, "t_end_s": cfg.t_end, "v_ctrl_init_v": cfg.v_ctrl_init},
        "lock": {
            "freq_tol_frac": cfg.lock_freq_tol,
            "phase_tol_rad": cfg.lock_phase_tol,
            "hold_ref_cycles": cfg.lock_hold_cycles,
        },
    }


def load_config(path) -> PllConfig:
    """Load and validate a JSON config file."""
    p = Path(path)
    if not p.is_file():
        raise ConfigError(f"config file not found: {p}")
    try:
        data = json.loads(p.read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError(f"malformed JSON in {p}: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"config root in {p} must be a JSON object")
    cfg = config_from_dict(data)
    problems = validate_config(cfg)
    if problems:
        raise ConfigError(f"invalid config {p}: " + "; ".join(problems))
    return cfg


def save_config(cfg: PllConfig, path) -> None:
    Path(path).write_text(json.dumps(config_to_dict(cfg), indent=2) + "\n")


# Measured tuning-curve anchors of the 3-stage current-starved VCO:
# tuning span endpoints plus the stated center frequency at 0.9 V.
PRESET_VCO_ANCHORS = ((0.4, 1.066e9), (0.9, 3.208e9), (1.8, 3.731e9))


def paper_preset() -> PllConfig:
    """Runnable config reproducing the published 180 nm reference design.

    150 MHz crystal reference, divide-by-16, 1.8 V supply, measured VCO
    anchors. The publication does not state the pump current, filter
    components, or PFD reset delay, so: i_pump = 100 uA, and (r, c1, c2)
    are synthesized for a 7.5 MHz (= f_ref/20) natural frequency at
    critical damping with c1/c2 = 10, using the local VCO gain at the
    2.4 GHz operating point. The reset delay defaults to 100 ps: small
    against the 6.67 ns reference period, large against the 1 ps step.
    """
    curve = VcoTuningCurve(anchors=PRESET_VCO_ANCHORS)
    ref_freq = 150e6
    n = 16
    i_pump = 100e-6
    v_op = vco_ctrl_voltage(curve, n * ref_freq)
    r, c1, c2 = synthesize_loop(
        i_pump=i_pump,
        kvco_local=vco_gain_local(curve, v_op),
        n=n,
        f_n=ref_freq / 20.0,
        zeta=1.0,
        ripple_ratio=10.0,
    )
    return PllConfig(
        ref_freq=ref_freq,
        divide_ratio=n,
        vdd=1.8,
        i_pump=i_pump,
        leakage=0.0,
        r=r,
        c1=c1,
        c2=c2,
        vco_curve=curve,
        pfd_reset_delay=100e-12,
        dt=1e-12,
        t_end=2e-6,
        v_ctrl_init=0.9,
        lock_freq_tol=1e-3,
        lock_phase_tol=0.05,
        lock_hold_cycles=10,
    )


def preset_metadata() -> PaperPreset:
    """The preset plus the published silicon figures (reported, not simulated)."""
    return PaperPreset(
        config=paper_preset(),
        silicon_power_total=5.15e-3,
        silicon_lock_time=260.03e-9,
        vco_power=1.60e-3,
        published_kvco=1.265e9,
        silicon_lockin_range=(70.4e6, 173e6),
        silicon_output_range=(1.12e9, 2.78e9),
        silicon_vco_lock_range=(1.066e9, 3.731e9),
        transistor_count=111,
    )
