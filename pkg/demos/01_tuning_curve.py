"""Tabulate the current-starved VCO tuning curve and its gains.

The curve is anchored on the measured points of the reference design:
(0.4 V, 1.066 GHz), (0.9 V, 3.208 GHz), (1.8 V, 3.731 GHz). Run:

    python demos/01_tuning_curve.py
"""

from pathlib import Path

from pllforge import (
    emit_plot_script,
    paper_preset,
    preset_metadata,
    sweep_vco,
    vco_gain_global,
    vco_gain_local,
)

out_dir = Path(__file__).parent / "out"
out_dir.mkdir(exist_ok=True)

curve = paper_preset().vco_curve
rows = sweep_vco(curve, curve.v_min, curve.v_max, 15)

print("Vctrl (V)   f (GHz)")
for v, f in rows:
    print(f"  {v:6.3f}   {f / 1e9:7.4f}")

print()
print(f"local gain at 0.65 V: {vco_gain_local(curve, 0.65) / 1e9:.3f} GHz/V")
print(f"local gain at 1.20 V: {vco_gain_local(curve, 1.20) / 1e9:.3f} GHz/V")
print(f"full-span gain:       {vco_gain_global(curve) / 1e9:.3f} GHz/V")
meta = preset_metadata()
print(
    f"published K_VCO:      {meta.published_kvco / 1e9:.3f} GHz/V "
    "(reported, not simulated; differs from the span slope of its own anchors)"
)

csv_path = out_dir / "tuning_curve.csv"
csv_path.write_text("v_ctrl_v,f_hz\n" + "".join(f"{v!r},{f!r}\n" for v, f in rows))
emit_plot_script(csv_path.name, "tuning_curve", out_dir / "tuning_curve.gp")
print(f"\nwrote {csv_path} and tuning_curve.gp (render with: gnuplot -p tuning_curve.gp)")
