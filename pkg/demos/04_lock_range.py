"""Reference-frequency sweep: where does the loop lock?

Every grid point is an independent cold-start transient, so this is the
slowest demo (~10 s serial; set PLLFORGE_THREADS to parallelize). Run:

    python demos/04_lock_range.py
"""

from dataclasses import replace
from pathlib import Path

from pllforge import emit_plot_script, paper_preset, preset_metadata, sweep_lock_range

out_dir = Path(__file__).parent / "out"
out_dir.mkdir(exist_ok=True)

# coarser step and shorter horizon than the headline run keep the sweep quick
cfg = replace(paper_preset(), dt=4e-12, t_end=1.7e-6)
points = sweep_lock_range(cfg, 60e6, 240e6, 13)

print("f_ref (MHz)  locked  lock time (ns)  f_out (GHz)")
for p in points:
    lt = f"{p.lock_time * 1e9:10.1f}" if p.locked else "         -"
    fo = f"{p.f_out_steady / 1e9:8.4f}" if p.f_out_steady == p.f_out_steady else "       -"
    print(f"  {p.f_ref / 1e6:8.1f}   {str(p.locked):5}  {lt}      {fo}")

locked = [p for p in points if p.locked]
meta = preset_metadata()
print()
print(f"simulated lock range on this grid: {locked[0].f_ref / 1e6:.0f}-{locked[-1].f_ref / 1e6:.0f} MHz")
print(f"tuning-curve endpoint bounds:      66.6-233.2 MHz")
print(
    f"published lock-in range:           {meta.silicon_lockin_range[0] / 1e6:.1f}-"
    f"{meta.silicon_lockin_range[1] / 1e6:.0f} MHz (reported, not simulated)"
)

csv_path = out_dir / "lock_range.csv"
csv_path.write_text(
    "f_ref_hz,locked,lock_time_s,f_out_steady_hz,reason\n"
    + "".join(
        f"{p.f_ref!r},{1 if p.locked else 0},{p.lock_time!r},{p.f_out_steady!r},{p.reason}\n"
        for p in points
    )
)
emit_plot_script(csv_path.name, "lock_range", out_dir / "lock_range.gp")
print(f"\nwrote {csv_path} and lock_range.gp")
