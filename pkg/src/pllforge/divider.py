"""Divide-by-N rising-edge counter and the measured divide-by-2 power table.

The flip-flop chain is abstracted to an ideal toggle counter: the output
level flips every N/2 input rising edges, giving exactly one output rising
edge per N input edges at 50% duty.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass


@dataclass(slots=True)
class DividerState:
    edge_count: int = 0
    # Starting high makes a freshly reset chain of divide-by-2 stages and a
    # monolithic divide-by-N emit identical edge trains.
    level: bool = True


@dataclass(frozen=True)
class PowerTable:
    """Rows of (input frequency Hz, power W) for one divide-by-2 stage."""

    rows: tuple[tuple[float, float], ...]

    def __post_init__(self) -> None:
        rows = tuple((float(f), float(p)) for f, p in self.rows)
        if len(rows) < 2:
            raise ValueError("power table needs at least 2 rows")
        for (f0, p0), (f1, _p1) in zip(rows, rows[1:]):
            if not f1 > f0:
                raise ValueError("table frequencies must be strictly increasing")
        if any(p <= 0.0 for _f, p in rows):
            raise ValueError("table powers must be positive")
        object.__setattr__(self, "rows", rows)


# Measured per-stage power of the TSPC divide-by-2 cell versus input clock.
TSPC_DIV2_POWER = PowerTable(
    rows=(
        (1e6, 0.24e-6),
        (10e6, 2.3e-6),
        (100e6, 9.022e-6),
        (1e9, 94.27e-6),
        (2e9, 188.8e-6),
        (3e9, 362.1e-6),
    )
)


def div_step(
    state: DividerState, in_edge: bool, n: int
) -> tuple[DividerState, bool]:
    """Feed one (possible) input rising edge into a divide-by-``n`` counter.

    Returns the new state and whether the output produced a rising edge.
    """
    if n < 2 or n % 2 != 0:
        raise ValueError(f"divide ratio must be an even integer >= 2 (got {n})")
    if not in_edge:
        return state, False
    count = (state.edge_count + 1) % n
    level = state.level
    rising = False
    if count % (n // 2) == 0:
        level = not level
        rising = level
    return DividerState(edge_count=count, level=level), rising


def _stage_power(f: float, table: PowerTable) -> float:
    rows = table.rows
    if f <= rows[0][0]:
        return rows[0][1]
    if f >= rows[-1][0]:
        return rows[-1][1]
    freqs = [row[0] for row in rows]
    i = bisect_right(freqs, f) - 1
    f0, p0 = rows[i]
    f1, p1 = rows[i + 1]
    if f == f0:
        return p0
    # log-log interpolation: the table spans 3.5 decades and is close to a
    # power law, so linear-in-linear would badly overshoot mid-decade
    t = (math.log(f) - math.log(f0)) / (math.log(f1) - math.log(f0))
    return math.exp(math.log(p0) + t * (math.log(p1) - math.log(p0)))


def divider_power_estimate(
    f_in: float, n: int, table: PowerTable = TSPC_DIV2_POWER
) -> float:
    """Total divider power for a chain of divide-by-2 stages implementing ``n``.

    Stage k runs at f_in / 2**k; per-stage power is interpolated log-log from
    the table and clamped at the table ends.
    """
    if f_in <= 0.0:
        raise ValueError(f"f_in must be positive (got {f_in})")
    if n < 2 or n & (n - 1) != 0:
        raise ValueError(f"divide ratio must be a power of two >= 2 (got {n})")
    stages = n.bit_length() - 1
    return sum(_stage_power(f_in / (2**k), table) for k in range(stages))
