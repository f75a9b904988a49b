"""Cold-start lock acquisition of the 2.4 GHz reference design.

Runs the full transient (150 MHz reference, divide-by-16, synthesized loop
filter) from v_ctrl = 0.9 V and reports when the lock criterion first holds.
Takes a couple of seconds: two million 1 ps steps. Run:

    python demos/02_lock_acquisition.py
"""

from pathlib import Path

from pllforge import emit_plot_script, paper_preset, preset_metadata, simulate, write_trace_csv

out_dir = Path(__file__).parent / "out"
out_dir.mkdir(exist_ok=True)

cfg = paper_preset()
print(f"simulating {cfg.t_end * 1e6:.1f} us at dt = {cfg.dt * 1e12:.0f} ps ...")
trace, report = simulate(cfg)

print(f"locked:          {report.locked}")
print(f"lock time:       {report.lock_time * 1e9:.1f} ns")
print(f"steady output:   {report.f_out_steady / 1e9:.6f} GHz")
print(f"steady Vctrl:    {report.v_ctrl_steady:.4f} V")
print(f"residual error:  {report.residual_phase_err:.2e} rad")
meta = preset_metadata()
print(
    f"published lock time: {meta.silicon_lock_time * 1e9:.2f} ns "
    "(reported, not simulated; its loop components were never published)"
)

csv_path = out_dir / "acquisition.csv"
n = write_trace_csv(trace, csv_path)
emit_plot_script(csv_path.name, "acquisition", out_dir / "acquisition.gp")
print(f"\nwrote {n} trace rows to {csv_path} plus acquisition.gp")
