"""Shared independent oracles for the test suite.

These deliberately avoid the code paths they check: the PFD duty oracle
drives the state machine with explicit event streams and integrates the
flag waveform; the filter oracle is a plain RK4 integrator of the raw node
equations.
"""

from __future__ import annotations

import math

from pllforge.pfd import PfdState, pfd_step

TWO_PI = 2.0 * math.pi


def pfd_duty_oracle(
    delta_phi: float,
    f_ref: float = 150e6,
    reset_delay: float = 100e-12,
    n_periods: int = 400,
    warmup: int = 5,
    f_div: float | None = None,
) -> float:
    """Time-average of (UP - DOWN) from event-driven stepping of ``pfd_step``.

    Two edge trains at ``f_ref`` and ``f_div`` (defaults to equal frequency)
    are offset by ``delta_phi``; the average is taken over ``n_periods``
    whole reference periods after a warmup. Positive offset = reference
    leads = feedback edges arrive later.
    """
    period = 1.0 / f_ref
    offset = delta_phi / TWO_PI * period
    shift = 2.0 * period  # keep every event time positive
    n_total = n_periods + 2 * warmup + 2
    ref = [shift + k * period for k in range(n_total)]
    d_period = 1.0 / (f_div if f_div is not None else f_ref)
    div = [shift + k * d_period + offset for k in range(n_total)]
    w0 = ref[warmup]
    w1 = ref[warmup + n_periods]

    state = PfdState()
    t = shift - period  # before any edge, detector neutral
    acc = 0.0
    deadline = math.inf
    ir = 0
    idv = 0
    while t < w1:
        ref_e = ir < n_total and ref[ir] == t
        div_e = idv < n_total and div[idv] == t
        if ref_e:
            ir += 1
        if div_e:
            idv += 1
        # a fresh overlap (possibly created by these edges) arms the reset
        will_up = state.up_active or ref_e
        will_dn = state.down_active or div_e
        if will_up and will_dn and not (state.up_active and state.down_active):
            deadline = t + reset_delay
        nxt = min(
            ref[ir] if ir < n_total else math.inf,
            div[idv] if idv < n_total else math.inf,
            deadline,
        )
        if nxt == math.inf:
            break
        state, up, dn = pfd_step(state, ref_e, div_e, nxt - t, reset_delay)
        if not (up and dn):
            deadline = math.inf
        a = max(t, w0)
        b = min(nxt, w1)
        if b > a:
            acc += ((1 if up else 0) - (1 if dn else 0)) * (b - a)
        t = nxt
    return acc / (w1 - w0)


def lf_rk4_reference(
    v_c1: float,
    v_out: float,
    i_in: float,
    dt: float,
    r: float,
    c1: float,
    c2: float,
    n_sub: int = 1000,
) -> tuple[float, float]:
    """Classic RK4 on the raw filter node equations, ``n_sub`` substeps."""

    def deriv(x1: float, x2: float) -> tuple[float, float]:
        i_r = (x2 - x1) / r
        return i_r / c1, (i_in - i_r) / c2

    h = dt / n_sub
    a, b = v_c1, v_out
    for _ in range(n_sub):
        k1a, k1b = deriv(a, b)
        k2a, k2b = deriv(a + 0.5 * h * k1a, b + 0.5 * h * k1b)
        k3a, k3b = deriv(a + 0.5 * h * k2a, b + 0.5 * h * k2b)
        k4a, k4b = deriv(a + h * k3a, b + h * k3b)
        a += h * (k1a + 2 * k2a + 2 * k3a + k4a) / 6.0
        b += h * (k1b + 2 * k2b + 2 * k3b + k4b) / 6.0
    return a, b
