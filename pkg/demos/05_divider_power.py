"""Divide-by-N chain power from the measured divide-by-2 table.

Per-stage power is interpolated log-log between the measured rows and the
chain sums the stages at f_in, f_in/2, ... Run:

    python demos/05_divider_power.py
"""

from pllforge import TSPC_DIV2_POWER, divider_power_estimate

print("measured divide-by-2 rows (input frequency -> power):")
for f, p in TSPC_DIV2_POWER.rows:
    print(f"  {f / 1e6:8.1f} MHz  ->  {p * 1e6:8.3f} uW")

print()
print("chain estimates:")
print("f_in (GHz)   N=2 (uW)   N=4 (uW)   N=8 (uW)   N=16 (uW)")
for f_in in (0.5e9, 1e9, 2e9, 2.4e9, 3e9):
    row = [divider_power_estimate(f_in, n) * 1e6 for n in (2, 4, 8, 16)]
    print(f"  {f_in / 1e9:6.2f}    {row[0]:8.2f}   {row[1]:8.2f}   {row[2]:8.2f}   {row[3]:8.2f}")

p24 = divider_power_estimate(2.4e9, 16)
print()
print(f"divide-by-16 at the 2.4 GHz operating point: {p24 * 1e6:.2f} uW")
