"""Charge pump and second-order passive loop filter.

The filter is the standard charge-pump topology: a series R-C1 branch to
ground in parallel with a shunt C2, with the pump current injected at the
output node. For a current held constant over a step the two node equations

    c2 * dv_out/dt = i - (v_out - v_c1) / r
    c1 * dv_c1/dt  =     (v_out - v_c1) / r

decouple into a conserved-charge coordinate s = (c1*v_c1 + c2*v_out)/(c1+c2),
which ramps linearly, and a difference coordinate w = v_out - v_c1, which
relaxes exponentially with tau = r*c1*c2/(c1+c2) toward i*r*c1/(c1+c2).
``lf_step`` advances that closed form exactly, so there is no truncation
error regardless of step size - the update commutes with step subdivision.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass


@dataclass(frozen=True, slots=True)
class ChargePumpParams:
    i_pump: float
    leakage: float = 0.0  # drawn from the output node continuously

    def __post_init__(self) -> None:
        if self.i_pump <= 0.0:
            raise ValueError(f"i_pump must be positive (got {self.i_pump})")
        if self.leakage < 0.0:
            raise ValueError(f"leakage must be >= 0 (got {self.leakage})")
        if self.leakage > self.i_pump / 100.0:
            warnings.warn(
                f"leakage {self.leakage:.3g} A exceeds i_pump/100 "
                f"({self.i_pump / 100.0:.3g} A); the ideal-pump model assumes "
                "leakage << i_pump",
                stacklevel=2,
            )


@dataclass(slots=True)
class LoopFilterState:
    """The two capacitor-node voltages: the entire analog state of the loop."""

    v_c1: float  # across the series capacitor C1
    v_out: float  # output node across C2; this is the VCO control voltage


def cp_current(up: bool, down: bool, params: ChargePumpParams) -> float:
    """Signed pump current for the given UP/DOWN flags, minus leakage.

    Sourcing when UP alone is high, sinking when DOWN alone is high, zero
    when neither or both (ideal matching).
    """
    if up and not down:
        i = params.i_pump
    elif down and not up:
        i = -params.i_pump
    else:
        i = 0.0
    return i - params.leakage


def lf_step(
    state: LoopFilterState,
    i_in: float,
    dt: float,
    r: float,
    c1: float,
    c2: float,
) -> LoopFilterState:
    """Advance the filter by ``dt`` under a constant input current ``i_in``.

    Exact closed-form update (see module docstring); ``c2 = 0`` and ``r = 0``
    degenerate cleanly (the difference coordinate snaps to its equilibrium).
    """
    if not (math.isfinite(state.v_c1) and math.isfinite(state.v_out) and math.isfinite(i_in)):
        raise ValueError("non-finite filter state or input current")
    if dt <= 0.0 or not math.isfinite(dt):
        raise ValueError(f"dt must be positive and finite (got {dt})")
    if c1 <= 0.0 or c2 < 0.0 or r < 0.0:
        raise ValueError(f"need c1 > 0, c2 >= 0, r >= 0 (got c1={c1}, c2={c2}, r={r})")
    c_sum = c1 + c2
    w = state.v_out - state.v_c1
    s = (c1 * state.v_c1 + c2 * state.v_out) / c_sum
    tau = r * c1 * c2 / c_sum
    decay = math.exp(-dt / tau) if tau > 0.0 else 0.0
    w_ss = i_in * r * c1 / c_sum
    w = w_ss + (w - w_ss) * decay
    s = s + i_in * dt / c_sum
    return LoopFilterState(v_c1=s - w * c2 / c_sum, v_out=s + w * c1 / c_sum)


def lf_clamp(state: LoopFilterState, v_lo: float, v_hi: float) -> LoopFilterState:
    """Clamp the output node to the supply rails.

    The series-capacitor voltage is preserved; the charge on the clamped
    output node adjusts, as it would when a real pump hits a rail.
    """
    if v_lo <= state.v_out <= v_hi:
        return state
    rail = v_lo if state.v_out < v_lo else v_hi
    return LoopFilterState(v_c1=state.v_c1, v_out=rail)


def lf_impedance(omega: float, r: float, c1: float, c2: float) -> complex:
    """Filter impedance Z(j*omega) seen by the charge pump.

    Z = (1 + j*w*R*C1) / (j*w*(C1+C2) * (1 + j*w*R*C1*C2/(C1+C2)))
    """
    if omega <= 0.0:
        raise ValueError(f"omega must be positive (got {omega})")
    jw = 1j * omega
    c_sum = c1 + c2
    return (1.0 + jw * r * c1) / (jw * c_sum * (1.0 + jw * r * c1 * c2 / c_sum))
