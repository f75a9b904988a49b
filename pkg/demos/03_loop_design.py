"""Loop-filter synthesis and stability analysis.

Solves (R, C1, C2) for a target natural frequency and damping, reports
phase margin, and estimates settling after a reference frequency step from
the continuous-time model. Run:

    python demos/03_loop_design.py
"""

import math

import numpy as np

from pllforge import (
    LinearLoopParams,
    estimate_lock_time,
    linear_step_response,
    stability_report,
    synthesize_loop,
)

I_PUMP = 100e-6
KVCO = 4.284e9  # local tuning slope at the 2.4 GHz operating point, Hz/V
N = 16

print("f_n (MHz)  zeta   R (kohm)  C1 (pF)  C2 (pF)  PM (deg)  settle to 0.01 rad (ns)")
for f_n, zeta in ((5e6, 1.0), (7.5e6, 1.0), (7.5e6, 0.7), (10e6, 1.0)):
    r, c1, c2 = synthesize_loop(I_PUMP, KVCO, N, f_n, zeta)
    params = LinearLoopParams(
        k_pd=I_PUMP / (2 * math.pi), k_v=2 * math.pi * KVCO, n=N, r=r, c1=c1, c2=c2
    )
    rep = stability_report(params)
    settle = estimate_lock_time(params, delta_f=1.5e6, tol=0.01)
    print(
        f"  {f_n / 1e6:6.1f}   {zeta:4.2f}   {r / 1e3:7.3f}  {c1 * 1e12:7.3f}  "
        f"{c2 * 1e12:7.3f}   {rep.phase_margin:6.2f}    {settle * 1e9:8.1f}"
    )

print()
print("phase-error response to a 1.5 MHz reference step (f_n = 7.5 MHz, zeta = 1):")
r, c1, c2 = synthesize_loop(I_PUMP, KVCO, N, 7.5e6, 1.0)
params = LinearLoopParams(
    k_pd=I_PUMP / (2 * math.pi), k_v=2 * math.pi * KVCO, n=N, r=r, c1=c1, c2=c2
)
t = np.linspace(0.0, 400e-9, 9)
for ti, ei in zip(t, linear_step_response(params, 1.5e6, t)):
    bar = "#" * int(abs(ei) * 400)
    print(f"  t = {ti * 1e9:5.0f} ns   e = {ei:+.4f} rad  {bar}")
