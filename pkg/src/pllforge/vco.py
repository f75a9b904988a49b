"""Current-starved ring VCO model: monotone tuning curve plus phase accumulator.

The oscillator is reduced to the two things the rest of the loop can see:
a control-voltage -> frequency map measured at a handful of anchor points,
and the rising-edge times produced by integrating that frequency.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class VcoTuningCurve:
    """Piecewise-linear control-voltage -> frequency map.

    Anchors must be strictly increasing in both voltage and frequency.
    Outside the anchored span the curve clamps to the endpoint frequencies,
    mirroring a real current-starved stage running out of tuning authority.
    """

    anchors: tuple[tuple[float, float], ...]

    def __post_init__(self) -> None:
        anchors = tuple((float(v), float(f)) for v, f in self.anchors)
        if len(anchors) < 2:
            raise ValueError("tuning curve needs at least 2 anchors")
        for (v0, f0), (v1, f1) in zip(anchors, anchors[1:]):
            if not v1 > v0:
                raise ValueError(
                    f"anchor voltages must be strictly increasing: {v0} -> {v1}"
                )
            if not f1 > f0:
                raise ValueError(
                    f"anchor frequencies must be strictly increasing: {f0} -> {f1}"
                )
        if anchors[0][1] <= 0.0:
            raise ValueError("anchor frequencies must be positive")
        object.__setattr__(self, "anchors", anchors)
        # cached coordinate arrays for interpolation
        object.__setattr__(self, "_vs", [a[0] for a in anchors])
        object.__setattr__(self, "_fs", [a[1] for a in anchors])
        object.__setattr__(
            self,
            "_slopes",
            [
                (anchors[i + 1][1] - anchors[i][1]) / (anchors[i + 1][0] - anchors[i][0])
                for i in range(len(anchors) - 1)
            ],
        )

    @property
    def v_min(self) -> float:
        return self.anchors[0][0]

    @property
    def v_max(self) -> float:
        return self.anchors[-1][0]

    @property
    def f_min(self) -> float:
        return self.anchors[0][1]

    @property
    def f_max(self) -> float:
        return self.anchors[-1][1]


@dataclass(slots=True)
class VcoState:
    """Accumulated (unwrapped) phase in radians and the frequency last applied.

    ``phase_comp`` is the compensated-summation carry; it keeps the phase
    accumulator exact over millions of steps.
    """

    phase: float = 0.0
    last_freq: float = 0.0
    phase_comp: float = 0.0


def vco_freq(curve: VcoTuningCurve, v: float) -> float:
    """Oscillation frequency at control voltage ``v`` (clamped to the anchor span)."""
    vs = curve._vs
    fs = curve._fs
    if v <= vs[0]:
        return fs[0]
    if v >= vs[-1]:
        return fs[-1]
    i = bisect_right(vs, v) - 1
    return fs[i] + (v - vs[i]) * curve._slopes[i]


def vco_ctrl_voltage(curve: VcoTuningCurve, freq: float) -> float:
    """Inverse of :func:`vco_freq` for frequencies inside the tuning range."""
    fs = curve._fs
    vs = curve._vs
    if freq < fs[0] or freq > fs[-1]:
        raise ValueError(
            f"frequency {freq:.6g} Hz outside tuning range "
            f"[{fs[0]:.6g}, {fs[-1]:.6g}] Hz"
        )
    if freq == fs[-1]:
        return vs[-1]
    i = bisect_right(fs, freq) - 1
    return vs[i] + (freq - fs[i]) / curve._slopes[i]


def vco_gain_local(curve: VcoTuningCurve, v: float) -> float:
    """Slope (Hz/V) of the linear segment containing ``v``.

    Undefined in the clamp regions; at an interior anchor the slope of the
    segment to the right is returned.
    """
    vs = curve._vs
    if v <= vs[0] or v >= vs[-1]:
        raise ValueError(
            f"local gain undefined at v={v:.6g} V: outside the open span "
            f"({vs[0]:.6g}, {vs[-1]:.6g}) V the curve is clamped"
        )
    i = bisect_right(vs, v) - 1
    return curve._slopes[i]


def vco_gain_global(curve: VcoTuningCurve) -> float:
    """Full-span gain (f_max - f_min) / (v_max - v_min) in Hz/V."""
    return (curve.f_max - curve.f_min) / (curve.v_max - curve.v_min)


def vco_step(
    curve: VcoTuningCurve, state: VcoState, v: float, dt: float
) -> tuple[VcoState, list[float]]:
    """Advance the phase accumulator by ``dt`` under a held control voltage.

    Returns the new state and the times (offsets from the start of the step,
    in (0, dt]) of every rising edge, i.e. every multiple of 2*pi the phase
    crossed. Edge times are linearly interpolated inside the step.
    """
    if dt <= 0.0:
        raise ValueError("dt must be positive")
    f = vco_freq(curve, v)
    omega = TWO_PI * f
    inc = omega * dt
    # Kahan update: phase + inc with carried compensation
    y = inc - state.phase_comp
    new_phase = state.phase + y
    comp = (new_phase - state.phase) - y
    k0 = math.floor(state.phase / TWO_PI)
    k1 = math.floor(new_phase / TWO_PI)
    edges = [(TWO_PI * k - state.phase) / omega for k in range(k0 + 1, k1 + 1)]
    return VcoState(phase=new_phase, last_freq=f, phase_comp=comp), edges
