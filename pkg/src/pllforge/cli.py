"""Command-line surface: simulate, design, sweeps, stability, preset report.

Exit codes: 0 success, 1 config/usage error, 2 ``sim --require-lock`` did not
lock, 3 I/O failure. Every file the process writes is listed in a manifest
written last. PLLFORGE_THREADS caps lock-range sweep parallelism.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import time
from dataclasses import asdict, dataclass, replace
from pathlib import Path

from .analysis import (
    AnalysisError,
    LinearLoopParams,
    loop_params_from_config,
    stability_report,
    synthesize_loop,
)
from .config import (
    ConfigError,
    config_to_dict,
    load_config,
    paper_preset,
    preset_metadata,
)
from .engine import SimTrace, simulate, sweep_lock_range, sweep_vco

VERSION = "0.1.0"

TRACE_HEADER = "t_s,v_ctrl_v,i_cp_a,up,dn,f_vco_hz,phase_err_rad,div_level"

PLOT_KINDS = ("acquisition", "tuning_curve", "lock_range")


@dataclass
class RunManifest:
    subcommand: str
    config: dict | None
    outputs: list[str]
    version: str
    duration_s: float


class _CliError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage problems are config-class errors (exit 1)
        raise _CliError(message)


def write_trace_csv(trace: SimTrace, path) -> int:
    """Write the sampled rows as CSV with full round-trip decimal precision."""
    lines = [TRACE_HEADER]
    for i in range(len(trace)):
        lines.append(
            f"{trace.t[i]!r},{trace.v_ctrl[i]!r},{trace.i_cp[i]!r},"
            f"{trace.up[i]},{trace.dn[i]},{trace.f_vco[i]!r},"
            f"{trace.phase_err[i]!r},{trace.div_level[i]}"
        )
    Path(path).write_text("\n".join(lines) + "\n")
    return len(trace)


_PLOT_TEMPLATES = {
    "acquisition": """\
# gnuplot script: control voltage and instantaneous VCO frequency vs time
set datafile separator ","
set xlabel "t (s)"
set ylabel "Vctrl (V)"
set y2label "Frequency (Hz)"
set y2tics
set key left bottom
plot "{csv}" skip 1 using 1:2 with lines title "v_ctrl", \\
     "{csv}" skip 1 using 1:6 with lines axes x1y2 title "f_vco"
""",
    "tuning_curve": """\
# gnuplot script: VCO tuning curve
set datafile separator ","
set xlabel "Vctrl (V)"
set ylabel "Frequency (Hz)"
set key left top
plot "{csv}" skip 1 using 1:2 with linespoints title "f(V)"
""",
    "lock_range": """\
# gnuplot script: steady output frequency and lock verdict vs reference
set datafile separator ","
set xlabel "f_ref (Hz)"
set ylabel "f_out (Hz)"
set key left top
plot "{csv}" skip 1 using 1:4:($2+1) with points pt 7 lc variable \\
     title "f_out (color: locked+1)"
""",
}


def emit_plot_script(csv_path, kind: str, path) -> None:
    """Write a gnuplot script rendering ``csv_path`` for the given plot kind."""
    if kind not in PLOT_KINDS:
        raise ValueError(
            f"unknown plot kind '{kind}'; valid kinds: {', '.join(PLOT_KINDS)}"
        )
    Path(path).write_text(_PLOT_TEMPLATES[kind].format(csv=csv_path))


def _resolve_config(ns):
    if ns.config == "preset":
        cfg = paper_preset()
    else:
        cfg = load_config(ns.config)
    overrides = {}
    if getattr(ns, "dt_s", None) is not None:
        overrides["dt"] = ns.dt_s
    if getattr(ns, "t_end_s", None) is not None:
        overrides["t_end"] = ns.t_end_s
    return replace(cfg, **overrides) if overrides else cfg


def _write_manifest(out_dir: Path, name: str, cfg_dict, outputs: list[Path], t0: float):
    manifest_path = out_dir / "manifest.json"
    man = RunManifest(
        subcommand=name,
        config=cfg_dict,
        outputs=[str(p) for p in outputs] + [str(manifest_path)],
        version=VERSION,
        duration_s=time.perf_counter() - t0,
    )
    manifest_path.write_text(json.dumps(asdict(man), indent=2) + "\n")


def _out_dir(ns) -> Path | None:
    if ns.out is None:
        return None
    d = Path(ns.out)
    d.mkdir(parents=True, exist_ok=True)
    return d


def _cmd_sim(ns) -> int:
    t0 = time.perf_counter()
    cfg = _resolve_config(ns)
    trace, rep = simulate(cfg)
    print(f"locked: {rep.locked}")
    if rep.locked:
        print(f"lock_time_s: {rep.lock_time!r}")
        print(f"f_out_steady_hz: {rep.f_out_steady!r}")
        print(f"v_ctrl_steady_v: {rep.v_ctrl_steady!r}")
        print(f"residual_phase_err_rad: {rep.residual_phase_err!r}")
    else:
        print(f"reason: {rep.reason}")
    out = _out_dir(ns)
    if out is not None:
        csv_path = out / "trace.csv"
        write_trace_csv(trace, csv_path)
        report_path = out / "lock_report.json"
        report_path.write_text(json.dumps(asdict(rep), indent=2) + "\n")
        plot_path = out / "acquisition.gp"
        emit_plot_script(csv_path.name, "acquisition", plot_path)
        _write_manifest(out, "sim", config_to_dict(cfg), [csv_path, report_path, plot_path], t0)
    if ns.require_lock and not rep.locked:
        return 2
    return 0


def _cmd_design(ns) -> int:
    t0 = time.perf_counter()
    r, c1, c2 = synthesize_loop(
        i_pump=ns.i_pump_a,
        kvco_local=ns.kvco_hz_per_v,
        n=ns.n,
        f_n=ns.fn_hz,
        zeta=ns.zeta,
        ripple_ratio=ns.ripple_ratio,
    )
    rep = stability_report(
        LinearLoopParams(
            k_pd=ns.i_pump_a / (2.0 * math.pi),
            k_v=2.0 * math.pi * ns.kvco_hz_per_v,
            n=ns.n,
            r=r,
            c1=c1,
            c2=c2,
        )
    )
    result = {
        "inputs": {
            "i_pump_a": ns.i_pump_a,
            "kvco_hz_per_v": ns.kvco_hz_per_v,
            "n": ns.n,
            "fn_hz": ns.fn_hz,
            "zeta": ns.zeta,
            "ripple_ratio": ns.ripple_ratio,
        },
        "components": {"r_ohm": r, "c1_f": c1, "c2_f": c2},
        "stability": asdict(rep),
    }
    print(f"r_ohm: {r!r}")
    print(f"c1_f: {c1!r}")
    print(f"c2_f: {c2!r}")
    print(f"natural_freq_rad_s: {rep.natural_freq!r}")
    print(f"damping: {rep.damping!r}")
    print(f"crossover_rad_s: {rep.crossover_freq!r}")
    print(f"phase_margin_deg: {rep.phase_margin!r}")
    print(f"stable: {rep.stable}")
    out = _out_dir(ns)
    if out is not None:
        design_path = out / "design.json"
        design_path.write_text(json.dumps(result, indent=2) + "\n")
        _write_manifest(out, "design", None, [design_path], t0)
    return 0


def _cmd_vco_sweep(ns) -> int:
    t0 = time.perf_counter()
    cfg = _resolve_config(ns)
    curve = cfg.vco_curve
    v_lo = ns.from_v if ns.from_v is not None else curve.v_min
    v_hi = ns.to_v if ns.to_v is not None else curve.v_max
    rows = sweep_vco(curve, v_lo, v_hi, ns.points)
    for v, f in rows:
        print(f"{v!r},{f!r}")
    out = _out_dir(ns)
    if out is not None:
        csv_path = out / "tuning_curve.csv"
        csv_path.write_text(
            "v_ctrl_v,f_hz\n" + "".join(f"{v!r},{f!r}\n" for v, f in rows)
        )
        plot_path = out / "tuning_curve.gp"
        emit_plot_script(csv_path.name, "tuning_curve", plot_path)
        _write_manifest(out, "vco-sweep", config_to_dict(cfg), [csv_path, plot_path], t0)
    return 0


def _cmd_lock_range(ns) -> int:
    t0 = time.perf_counter()
    cfg = _resolve_config(ns)
    workers = int(os.environ.get("PLLFORGE_THREADS", "1"))
    points = sweep_lock_range(cfg, ns.from_hz, ns.to_hz, ns.points, max_workers=workers)
    locked = [p for p in points if p.locked]
    print(f"grid points: {len(points)}, locked: {len(locked)}")
    if locked:
        print(f"simulated lock range: [{locked[0].f_ref!r}, {locked[-1].f_ref!r}] Hz")
    meta = preset_metadata()
    lo, hi = meta.silicon_lockin_range
    print(
        f"published silicon lock-in range (reported, not simulated): "
        f"[{lo!r}, {hi!r}] Hz"
    )
    out = _out_dir(ns)
    if out is not None:
        csv_path = out / "lock_range.csv"
        csv_path.write_text(
            "f_ref_hz,locked,lock_time_s,f_out_steady_hz,reason\n"
            + "".join(
                f"{p.f_ref!r},{1 if p.locked else 0},{p.lock_time!r},"
                f"{p.f_out_steady!r},{p.reason}\n"
                for p in points
            )
        )
        plot_path = out / "lock_range.gp"
        emit_plot_script(csv_path.name, "lock_range", plot_path)
        _write_manifest(out, "lock-range", config_to_dict(cfg), [csv_path, plot_path], t0)
    return 0


def _cmd_analyze(ns) -> int:
    t0 = time.perf_counter()
    cfg = _resolve_config(ns)
    try:
        rep = stability_report(loop_params_from_config(cfg))
    except (ValueError, AnalysisError) as exc:
        raise ConfigError(f"cannot analyze config: {exc}") from exc
    print(f"natural_freq_rad_s: {rep.natural_freq!r}")
    print(f"damping: {rep.damping!r}")
    print(f"crossover_rad_s: {rep.crossover_freq!r}")
    print(f"phase_margin_deg: {rep.phase_margin!r}")
    print(f"stable: {rep.stable}")
    out = _out_dir(ns)
    if out is not None:
        path = out / "stability.json"
        path.write_text(json.dumps(asdict(rep), indent=2) + "\n")
        _write_manifest(out, "analyze", config_to_dict(cfg), [path], t0)
    return 0


def _cmd_preset(ns) -> int:
    t0 = time.perf_counter()
    meta = preset_metadata()
    cfg_dict = config_to_dict(meta.config)
    print(json.dumps(cfg_dict, indent=2))
    print()
    print("published silicon figures (reported by the reference design, not simulated):")
    print(f"  total power:        {meta.silicon_power_total!r} W")
    print(f"  vco power:          {meta.vco_power!r} W")
    print(f"  lock time:          {meta.silicon_lock_time!r} s")
    print(f"  published k_vco:    {meta.published_kvco!r} Hz/V")
    print(f"  lock-in range:      {meta.silicon_lockin_range} Hz")
    print(f"  output freq range:  {meta.silicon_output_range} Hz")
    print(f"  quoted lock range:  {meta.silicon_vco_lock_range} Hz (VCO tuning span)")
    print(f"  transistor count:   {meta.transistor_count}")
    out = _out_dir(ns)
    if out is not None:
        cfg_path = out / "preset_config.json"
        cfg_path.write_text(json.dumps(cfg_dict, indent=2) + "\n")
        meta_path = out / "preset_metadata.json"
        meta_dict = asdict(meta)
        del meta_dict["config"]
        meta_dict["note"] = "published silicon figures; reported, not simulated"
        meta_path.write_text(json.dumps(meta_dict, indent=2) + "\n")
        _write_manifest(out, "preset", cfg_dict, [cfg_path, meta_path], t0)
    return 0


def _build_parser() -> _Parser:
    parser = _Parser(prog="pllforge", description=__doc__)
    parser.add_argument("--version", action="version", version=f"pllforge {VERSION}")
    sub = parser.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    def add_common(p, config=True, overrides=False):
        if config:
            p.add_argument(
                "--config",
                default="preset",
                help="path to a JSON config, or 'preset' for the reference design",
            )
        p.add_argument("--out", default=None, help="directory for output files")
        if overrides:
            p.add_argument("--dt-s", type=float, default=None, help="override sim.dt_s")
            p.add_argument("--t-end-s", type=float, default=None, help="override sim.t_end_s")

    p_sim = sub.add_parser("sim", help="run a transient simulation and report lock")
    add_common(p_sim, overrides=True)
    p_sim.add_argument(
        "--require-lock", action="store_true", help="exit 2 if the loop does not lock"
    )
    p_sim.set_defaults(func=_cmd_sim)

    p_design = sub.add_parser("design", help="synthesize loop components and check stability")
    add_common(p_design, config=False)
    p_design.add_argument("--i-pump-a", type=float, default=100e-6)
    p_design.add_argument("--kvco-hz-per-v", type=float, default=4.284e9)
    p_design.add_argument("--n", type=int, default=16)
    p_design.add_argument("--fn-hz", type=float, default=7.5e6)
    p_design.add_argument("--zeta", type=float, default=1.0)
    p_design.add_argument("--ripple-ratio", type=float, default=10.0)
    p_design.set_defaults(func=_cmd_design)

    p_vco = sub.add_parser("vco-sweep", help="tabulate the VCO tuning curve")
    add_common(p_vco)
    p_vco.add_argument("--points", type=int, default=15)
    p_vco.add_argument("--from-v", type=float, default=None)
    p_vco.add_argument("--to-v", type=float, default=None)
    p_vco.set_defaults(func=_cmd_vco_sweep)

    p_lr = sub.add_parser("lock-range", help="sweep reference frequency and report lock")
    add_common(p_lr, overrides=True)
    p_lr.add_argument("--from-hz", type=float, required=True)
    p_lr.add_argument("--to-hz", type=float, required=True)
    p_lr.add_argument("--points", type=int, default=11)
    p_lr.set_defaults(func=_cmd_lock_range)

    p_an = sub.add_parser("analyze", help="stability report for a config")
    add_common(p_an)
    p_an.set_defaults(func=_cmd_analyze)

    p_pre = sub.add_parser("preset", help="print the reference-design preset and metadata")
    add_common(p_pre, config=False)
    p_pre.set_defaults(func=_cmd_preset)

    return parser


def run_cli(args: list[str]) -> int:
    """Dispatch a CLI invocation; returns the process exit status."""
    parser = _build_parser()
    try:
        ns = parser.parse_args(args)
    except _CliError as exc:
        print(f"error: {exc}", flush=True)
        return 1
    except SystemExit as exc:  # --help / --version actions
        return int(exc.code or 0)
    try:
        return ns.func(ns)
    except ConfigError as exc:
        print(f"config error: {exc}", flush=True)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", flush=True)
        return 1
    except OSError as exc:
        print(f"i/o error: {exc}", flush=True)
        return 3


def main() -> int:
    import sys

    return run_cli(sys.argv[1:])
