"""Continuous-time linear model of the loop: synthesis, stability, responses.

The open-loop transfer function is G(s) = k_pd * Z(s) * k_v / (N * s) with
Z(s) the loop-filter impedance, k_pd = i_pump / 2*pi (A/rad) and k_v the VCO
gain in rad/s/V. The loop is type II and third order (the shunt capacitor
contributes the third pole). Two-pole shorthand used throughout:

    omega_n = sqrt(k_pd * k_v / (N * c1))        zeta = r * c1 * omega_n / 2
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy import signal

from .charge_pump import lf_impedance
from .vco import TWO_PI, vco_ctrl_voltage, vco_gain_local


class AnalysisError(RuntimeError):
    """Raised when the linear model cannot produce a meaningful answer."""


@dataclass(frozen=True, slots=True)
class LinearLoopParams:
    k_pd: float  # A/rad
    k_v: float  # rad/s/V
    n: int
    r: float
    c1: float
    c2: float

    def __post_init__(self) -> None:
        for name in ("k_pd", "k_v", "r", "c1", "c2"):
            if getattr(self, name) <= 0.0:
                raise ValueError(f"{name} must be positive (got {getattr(self, name)})")
        if self.n < 1:
            raise ValueError(f"n must be >= 1 (got {self.n})")
        if not self.c2 < self.c1:
            raise ValueError(
                f"need c2 < c1 for a usable phase margin (got c1={self.c1}, c2={self.c2})"
            )


@dataclass(frozen=True, slots=True)
class StabilityReport:
    natural_freq: float  # rad/s
    damping: float
    crossover_freq: float  # rad/s
    phase_margin: float  # degrees
    stable: bool


def loop_params_from_config(cfg, v_op: float | None = None) -> LinearLoopParams:
    """Linearize a PllConfig around an operating point.

    ``v_op`` defaults to the control voltage that tunes the VCO to
    N * f_ref; the VCO gain is the local segment slope there, because the
    tuning curve is far from globally linear.
    """
    if v_op is None:
        v_op = vco_ctrl_voltage(cfg.vco_curve, cfg.divide_ratio * cfg.ref_freq)
    kv_local = vco_gain_local(cfg.vco_curve, v_op)
    return LinearLoopParams(
        k_pd=cfg.i_pump / TWO_PI,
        k_v=TWO_PI * kv_local,
        n=cfg.divide_ratio,
        r=cfg.r,
        c1=cfg.c1,
        c2=cfg.c2,
    )


def synthesize_loop(
    i_pump: float,
    kvco_local: float,
    n: int,
    f_n: float,
    zeta: float,
    ripple_ratio: float = 10.0,
) -> tuple[float, float, float]:
    """Solve for (r, c1, c2) hitting a target natural frequency and damping.

    Direct inversion of the two-pole formulas:
        c1 = k_pd * k_v / (n * omega_n^2),  r = 2*zeta / (omega_n * c1),
        c2 = c1 / ripple_ratio.
    Feeding the result back into :func:`stability_report` recovers
    (omega_n, zeta) exactly, since those definitions ignore the c2 pole.
    """
    for name, val in (
        ("i_pump", i_pump),
        ("kvco_local", kvco_local),
        ("n", n),
        ("f_n", f_n),
        ("zeta", zeta),
        ("ripple_ratio", ripple_ratio),
    ):
        if val <= 0.0:
            raise ValueError(f"{name} must be positive (got {val})")
    if ripple_ratio < 5.0:
        raise ValueError(
            f"ripple_ratio must be >= 5 (got {ripple_ratio}); smaller ratios put "
            "the third pole on top of the crossover"
        )
    w_n = TWO_PI * f_n
    k_pd = i_pump / TWO_PI
    k_v = TWO_PI * kvco_local
    c1 = k_pd * k_v / (n * w_n * w_n)
    r = 2.0 * zeta / (w_n * c1)
    c2 = c1 / ripple_ratio
    return r, c1, c2


def _open_loop(p: LinearLoopParams, omega: float) -> complex:
    return p.k_pd * lf_impedance(omega, p.r, p.c1, p.c2) * p.k_v / (p.n * 1j * omega)


def stability_report(p: LinearLoopParams) -> StabilityReport:
    """Two-pole loop constants plus the numerically located crossover and margin.

    |G(j*omega)| is strictly decreasing for this loop shape, so the unity-gain
    crossover is found by bisection (in log frequency) on the fixed bracket
    [omega_n/100, 100*omega_n].
    """
    w_n = math.sqrt(p.k_pd * p.k_v / (p.n * p.c1))
    zeta = p.r * p.c1 * w_n / 2.0
    lo = w_n / 100.0
    hi = w_n * 100.0
    if abs(_open_loop(p, lo)) < 1.0 or abs(_open_loop(p, hi)) > 1.0:
        raise AnalysisError(
            "no unity-gain crossover in [omega_n/100, 100*omega_n]: "
            "degenerate loop parameters"
        )
    for _ in range(200):
        mid = math.sqrt(lo * hi)
        if abs(_open_loop(p, mid)) > 1.0:
            lo = mid
        else:
            hi = mid
        if hi / lo < 1.0 + 1e-14:
            break
    w_c = math.sqrt(lo * hi)
    pm = 180.0 + math.degrees(cmath.phase(_open_loop(p, w_c)))
    return StabilityReport(
        natural_freq=w_n,
        damping=zeta,
        crossover_freq=w_c,
        phase_margin=pm,
        stable=pm > 0.0,
    )


def _error_tf(p: LinearLoopParams) -> tuple[list[float], list[float]]:
    # phase error / reference frequency step:
    #   e(s) = dw * (1 + s*tau_p) / (tau_p*s^3 + s^2 + K*tau_z*s + K)
    # with K = k_pd*k_v/(N*(c1+c2)), tau_z = R*C1, tau_p = R*C1*C2/(C1+C2)
    c_sum = p.c1 + p.c2
    big_k = p.k_pd * p.k_v / (p.n * c_sum)
    tau_z = p.r * p.c1
    tau_p = p.r * p.c1 * p.c2 / c_sum
    num = [tau_p, 1.0]
    den = [tau_p, 1.0, big_k * tau_z, big_k]
    return num, den


def linear_step_response(
    p: LinearLoopParams, delta_f: float, t_grid
) -> np.ndarray:
    """Phase-error trajectory (rad) after a reference frequency step of ``delta_f`` Hz.

    The step enters the loop as a phase ramp; the closed-loop error transfer
    function is integrated in state space on ``t_grid``. A type-II loop drives
    the error back to zero.
    """
    t = np.asarray(t_grid, dtype=float)
    if t.ndim != 1 or t.size < 2:
        raise ValueError("t_grid must be a 1-d grid with at least 2 points")
    if np.any(np.diff(t) <= 0.0) or t[0] < 0.0:
        raise ValueError("t_grid must be increasing and nonnegative")
    num, den = _error_tf(p)
    d_omega = TWO_PI * delta_f
    # impulse response of e(s)/dw, scaled by the step size
    _tout, y = signal.impulse(signal.lti(num, den), T=t)
    return d_omega * np.asarray(y)


def estimate_lock_time(p: LinearLoopParams, delta_f: float, tol: float) -> float:
    """First time after which |phase error| of the linear model stays below ``tol``.

    Computed from the sampled step response, extending the horizon until the
    response has settled; linear pull-in is assumed (large steps saturate the
    real detector and are out of model).
    """
    if tol <= 0.0:
        raise ValueError(f"tol must be positive (got {tol})")
    w_n = math.sqrt(p.k_pd * p.k_v / (p.n * p.c1))
    zeta = p.r * p.c1 * w_n / 2.0
    horizon = 40.0 / (zeta * w_n)
    limit = 1e6 / w_n
    while True:
        t = np.linspace(0.0, horizon, max(4000, int(50.0 * horizon * w_n / TWO_PI)))
        resp = np.abs(linear_step_response(p, delta_f, t))
        above = np.nonzero(resp > tol)[0]
        if above.size == 0:
            return 0.0
        last = above[-1]
        if last < t.size - max(2, t.size // 50):
            return float(t[last + 1])
        if horizon >= limit:
            raise AnalysisError(
                f"response did not settle below {tol:.3g} rad within {limit:.3g} s"
            )
        horizon = min(horizon * 2.0, limit)
