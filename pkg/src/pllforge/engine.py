"""Fixed-step transient simulator for the full loop, plus lock detection and sweeps.

Composes PFD -> charge pump -> loop filter -> VCO -> divide-by-N with negative
feedback. Each step of length ``dt`` is subdivided at reference edges, divider
rising edges, and PFD reset completions, so the charge-pump current is exactly
piecewise constant and the loop filter can be advanced with its exact
closed-form update on every segment. The VCO control voltage is held for one
full step (zero-order hold of the filter output), so oscillator frequency
changes only at step boundaries.

The inner loop is written against plain floats: a 2 us run at 1 ps steps is
two million iterations, and per-step object churn would dominate the runtime.
The block modules (:mod:`pfd`, :mod:`charge_pump`, :mod:`vco`, :mod:`divider`)
define the same transitions over value-semantics state and are the reference
for unit-level behavior.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

from .config import ConfigError, PllConfig, validate_config

TWO_PI = 2.0 * math.pi


@dataclass
class SimTrace:
    """Decimated sample rows plus full-resolution edge-time lists."""

    t: list[float]
    v_ctrl: list[float]
    i_cp: list[float]
    up: list[int]
    dn: list[int]
    f_vco: list[float]
    phase_err: list[float]
    div_level: list[int]
    ref_edges: list[float]
    div_edges: list[float]

    def __len__(self) -> int:
        return len(self.t)


@dataclass(frozen=True)
class LockReport:
    locked: bool
    lock_time: float  # s; nan when not locked
    f_out_steady: float  # Hz
    v_ctrl_steady: float  # V
    residual_phase_err: float  # rad
    reason: str = ""


@dataclass(frozen=True, slots=True)
class LockRangePoint:
    f_ref: float
    locked: bool
    lock_time: float
    f_out_steady: float
    reason: str = ""


def simulate(
    cfg: PllConfig,
    *,
    ref_step: tuple[float, float] | None = None,
    decimation: int = 100,
) -> tuple[SimTrace, LockReport]:
    """Run the loop from cold start at t = 0 to t_end.

    ``ref_step = (t_switch, new_freq)`` optionally steps the reference
    frequency once, at the reference edge nearest ``t_switch`` (used for
    small-signal cross-validation against the linear model). ``decimation``
    controls how many steps apart trace rows are sampled; edge lists are
    always full resolution.

    Non-convergent configurations do not raise: the report comes back with
    ``locked = False`` and a reason.
    """
    problems = validate_config(cfg)
    if problems:
        raise ConfigError("invalid config: " + "; ".join(problems))
    if decimation < 1:
        raise ValueError("decimation must be >= 1")

    exp = math.exp
    f1 = cfg.ref_freq
    dt = cfg.dt
    n_steps = int(round(cfg.t_end / dt))
    n_div = cfg.divide_ratio
    inv_n = 1.0 / n_div
    half_n = n_div // 2
    vdd = cfg.vdd
    i_pump = cfg.i_pump
    leak = cfg.leakage
    delay = cfg.pfd_reset_delay

    sched = ref_step is not None
    if sched:
        t_sw_req, f2 = ref_step
        if f2 <= 0.0:
            raise ValueError("stepped reference frequency must be positive")
        k_sw = max(1, round(t_sw_req * f1))  # snap the switch to a reference edge
        t_sw = k_sw / f1
    else:
        k_sw = 0
        t_sw = math.inf
        f2 = f1

    # tuning curve tables, unpacked for the inline interpolation
    anchors = cfg.vco_curve.anchors
    cv = [a[0] for a in anchors]
    cf = [a[1] for a in anchors]
    cs = [(cf[i + 1] - cf[i]) / (cv[i + 1] - cv[i]) for i in range(len(cv) - 1)]
    n_seg = len(cs)
    cv0 = cv[0]
    cv_last = cv[-1]
    cf0 = cf[0]
    cf_last = cf[-1]

    # loop-filter constants; state is (w, s) = (v_out - v_c1, charge coordinate)
    r = cfg.r
    c1 = cfg.c1
    c2 = cfg.c2
    c_sum = c1 + c2
    inv_csum = 1.0 / c_sum
    w_gain = r * c1 * inv_csum
    b_out = c1 * inv_csum
    b_c1 = c2 * inv_csum
    tau = r * c1 * c2 * inv_csum
    inv_tau = 1.0 / tau if tau > 0.0 else 0.0
    decay_dt = exp(-dt * inv_tau) if tau > 0.0 else 0.0
    has_tau = tau > 0.0

    # state
    s = cfg.v_ctrl_init
    w = 0.0
    v = s
    if v <= cv0:
        f_now = cf0
    elif v >= cv_last:
        f_now = cf_last
    else:
        f_now = cf_last
        for i in range(n_seg):
            if v < cv[i + 1]:
                f_now = cf[i] + (v - cv[i]) * cs[i]
                break
    omega = TWO_PI * f_now
    phase = 0.0
    pcomp = 0.0  # compensated-summation carry for the phase accumulator
    up = False
    dn = False
    t_rst = math.inf
    div_j = 1
    div_target = TWO_PI * n_div
    anchor = 0.0  # multiple of 2*pi subtracted from the raw phase error
    t = 0.0

    rows_t: list[float] = []
    rows_v: list[float] = []
    rows_i: list[float] = []
    rows_up: list[int] = []
    rows_dn: list[int] = []
    rows_f: list[float] = []
    rows_pe: list[float] = []
    rows_lvl: list[int] = []
    ref_edges: list[float] = []
    div_edges: list[float] = []
    div_append = div_edges.append

    # Reference phase starts at 0 at t = 0, so - like the VCO and divider -
    # its first rising edge is the first 2*pi crossing, at t = 1/f_ref. An
    # already-locked start then sees reference and feedback edges coincide.
    ref_j = 1  # index of the next reference edge
    t_ref_next = 1.0 / f1 if (not sched or ref_j <= k_sw) else t_sw + (ref_j - k_sw) / f2
    i_cur = -leak

    rows_t.append(0.0)
    rows_v.append(v)
    rows_i.append(i_cur)
    rows_up.append(0)
    rows_dn.append(0)
    rows_f.append(omega / TWO_PI)
    rows_pe.append(0.0)
    rows_lvl.append(1)

    for k in range(n_steps):
        t_step = (k + 1) * dt
        first_seg = True
        while True:
            # next divider rising edge under the current (held) frequency
            dphi = div_target - phase
            t_div = t if dphi <= 0.0 else t + dphi / omega
            t_next = t_step
            if t_div < t_next:
                t_next = t_div
            if t_ref_next < t_next:
                t_next = t_ref_next
            if t_rst < t_next:
                t_next = t_rst
            h = t_next - t
            if h > 0.0:
                s += i_cur * h * inv_csum
                if has_tau:
                    d = decay_dt if (first_seg and t_next == t_step) else exp(-h * inv_tau)
                    w_ss = i_cur * w_gain
                    w = w_ss + (w - w_ss) * d
                else:
                    w = i_cur * w_gain
                inc = omega * h
                y = inc - pcomp
                tp = phase + y
                pcomp = (tp - phase) - y
                phase = tp
                t = t_next
            first_seg = False
            fired = False
            if t == t_rst:
                # reset completes before any coincident edges are honored
                up = False
                dn = False
                t_rst = math.inf
                fired = True
                phi_ref = (
                    TWO_PI * (k_sw + (t - t_sw) * f2) if (sched and t >= t_sw) else TWO_PI * f1 * t
                )
                raw = phi_ref - phase * inv_n
                anchor = TWO_PI * round(raw / TWO_PI)
            if t == t_div:
                dn = True
                div_append(t)
                div_j += 1
                div_target = TWO_PI * n_div * div_j
                fired = True
            if t == t_ref_next:
                up = True
                ref_edges.append(t)
                ref_j += 1
                if not sched or ref_j <= k_sw:
                    t_ref_next = ref_j / f1
                else:
                    t_ref_next = t_sw + (ref_j - k_sw) / f2
                fired = True
            if fired:
                if up and dn and t_rst == math.inf:
                    t_rst = t + delay
                if up and not dn:
                    i_cur = i_pump - leak
                elif dn and not up:
                    i_cur = -i_pump - leak
                else:
                    i_cur = -leak
            if t == t_step:
                break
        # step boundary: refresh the held control voltage and frequency
        v = s + b_out * w
        if v < 0.0 or v > vdd:
            v_c1 = s - b_c1 * w
            v = 0.0 if v < 0.0 else vdd
            w = v - v_c1
            s = (c1 * v_c1 + c2 * v) * inv_csum
        if v <= cv0:
            f_now = cf0
        elif v >= cv_last:
            f_now = cf_last
        else:
            f_now = cf_last
            for i in range(n_seg):
                if v < cv[i + 1]:
                    f_now = cf[i] + (v - cv[i]) * cs[i]
                    break
        omega = TWO_PI * f_now
        if (k + 1) % decimation == 0:
            phi_ref = (
                TWO_PI * (k_sw + (t - t_sw) * f2) if (sched and t >= t_sw) else TWO_PI * f1 * t
            )
            pe = phi_ref - phase * inv_n - anchor
            if pe > TWO_PI:
                pe = TWO_PI
            elif pe < -TWO_PI:
                pe = -TWO_PI
            count = int(phase / TWO_PI)
            rows_t.append(t)
            rows_v.append(v)
            rows_i.append(i_cur)
            rows_up.append(1 if up else 0)
            rows_dn.append(1 if dn else 0)
            rows_f.append(f_now)
            rows_pe.append(pe)
            rows_lvl.append(1 if (count % n_div) < half_n else 0)

    trace = SimTrace(
        t=rows_t,
        v_ctrl=rows_v,
        i_cp=rows_i,
        up=rows_up,
        dn=rows_dn,
        f_vco=rows_f,
        phase_err=rows_pe,
        div_level=rows_lvl,
        ref_edges=ref_edges,
        div_edges=div_edges,
    )
    return trace, detect_lock(trace, cfg)


def detect_lock(trace: SimTrace, cfg: PllConfig) -> LockReport:
    """Apply the lock criterion to a finished trace.

    Each divider rising edge is paired with its nearest reference edge (one
    comparison slot per reference cycle; binning by period interval would be
    knife-edged exactly in lock, when the edges coincide). A slot qualifies
    when it received a comparison and every divider edge assigned to it
    satisfies both the frequency tolerance (divided frequency from divider
    edge spacing, reference frequency from the trace's own reference edge
    spacing) and the phase tolerance. Lock requires ``lock_hold_cycles``
    consecutive qualifying slots; lock_time is the first comparison of that
    run.
    """
    ref = trace.ref_edges
    div = trace.div_edges
    hold = cfg.lock_hold_cycles
    n_ref = len(ref)

    def _tail_v() -> float:
        rows = trace.v_ctrl
        if not rows:
            return math.nan
        tail = rows[-max(1, len(rows) // 10):]
        return sum(tail) / len(tail)

    def _tail_f_out() -> float:
        m = min(hold + 1, len(div))
        if m < 2:
            return math.nan
        span = div[-1] - div[-m]
        return cfg.divide_ratio * (m - 1) / span if span > 0 else math.nan

    if n_ref < hold + 1 or len(div) < 2:
        return LockReport(
            locked=False,
            lock_time=math.nan,
            f_out_steady=_tail_f_out(),
            v_ctrl_steady=_tail_v(),
            residual_phase_err=math.nan,
            reason="too few edges to evaluate the lock criterion",
        )

    slot_has = [False] * n_ref
    slot_ok = [True] * n_ref
    pe_list: list[float] = []
    j = 0
    for i in range(1, len(div)):
        t_d = div[i]
        while j + 1 < n_ref and abs(ref[j + 1] - t_d) <= abs(ref[j] - t_d):
            j += 1
        t_loc = ref[j + 1] - ref[j] if j + 1 < n_ref else ref[j] - ref[j - 1]
        f_ref_j = 1.0 / t_loc
        f_div = 1.0 / (t_d - div[i - 1])
        pe = TWO_PI * f_ref_j * (t_d - ref[j])
        pe_list.append(pe)
        good = (
            abs(f_div - f_ref_j) <= cfg.lock_freq_tol * f_ref_j
            and abs(pe) <= cfg.lock_phase_tol
        )
        slot_has[j] = True
        slot_ok[j] = slot_ok[j] and good

    run = 0
    start = -1
    for idx in range(n_ref):
        if slot_has[idx] and slot_ok[idx]:
            run += 1
            if run == hold:
                start = idx - hold + 1
                break
        else:
            run = 0

    v_steady = _tail_v()
    if start < 0:
        if v_steady >= 0.98 * cfg.vdd:
            reason = (
                f"control voltage railed near vdd ({v_steady:.4g} V): requested "
                "output is above the tuning range"
            )
        elif v_steady <= 0.02 * cfg.vdd:
            reason = (
                f"control voltage railed near 0 V ({v_steady:.4g} V): requested "
                "output is below the tuning range"
            )
        else:
            reason = (
                f"lock criterion never held for {hold} consecutive reference periods"
            )
        return LockReport(
            locked=False,
            lock_time=math.nan,
            f_out_steady=_tail_f_out(),
            v_ctrl_steady=v_steady,
            residual_phase_err=math.nan,
            reason=reason,
        )

    m = min(hold, len(pe_list))
    residual = sum(pe_list[-m:]) / m
    return LockReport(
        locked=True,
        lock_time=ref[start],
        f_out_steady=_tail_f_out(),
        v_ctrl_steady=v_steady,
        residual_phase_err=residual,
        reason="",
    )


def _lock_range_point(args: tuple[PllConfig, float]) -> LockRangePoint:
    cfg, f = args
    pt_cfg = replace(cfg, ref_freq=f)
    problems = validate_config(pt_cfg)
    if problems:
        return LockRangePoint(
            f_ref=f,
            locked=False,
            lock_time=math.nan,
            f_out_steady=math.nan,
            reason="invalid config: " + "; ".join(problems),
        )
    _trace, rep = simulate(pt_cfg)
    return LockRangePoint(
        f_ref=f,
        locked=rep.locked,
        lock_time=rep.lock_time,
        f_out_steady=rep.f_out_steady,
        reason=rep.reason,
    )


def sweep_lock_range(
    cfg: PllConfig,
    f_lo: float,
    f_hi: float,
    n_points: int,
    max_workers: int | None = None,
) -> list[LockRangePoint]:
    """Run independent simulations on a uniform reference-frequency grid.

    Each point starts from a fresh cold state. Grid points are independent,
    so they may run on worker processes; results are always ordered by grid
    index. ``max_workers`` defaults to the PLLFORGE_THREADS environment
    variable (serial when unset).
    """
    if not f_lo < f_hi:
        raise ValueError(f"need f_lo < f_hi (got {f_lo}, {f_hi})")
    if n_points < 2:
        raise ValueError(f"n_points must be >= 2 (got {n_points})")
    if max_workers is None:
        max_workers = int(os.environ.get("PLLFORGE_THREADS", "1"))
    jobs = [(cfg, f) for f in _grid(f_lo, f_hi, n_points)]
    if max_workers > 1:
        with ProcessPoolExecutor(max_workers=min(max_workers, n_points)) as pool:
            return list(pool.map(_lock_range_point, jobs))
    return [_lock_range_point(job) for job in jobs]


def _grid(lo: float, hi: float, n: int) -> list[float]:
    # uniform grid with both endpoints exact
    pts = [lo + (hi - lo) * i / (n - 1) for i in range(n)]
    pts[0] = lo
    pts[-1] = hi
    return pts


def sweep_vco(curve, v_lo: float, v_hi: float, n_points: int) -> list[tuple[float, float]]:
    """Tabulate the tuning curve on a uniform voltage grid."""
    from .vco import vco_freq

    if not v_lo < v_hi:
        raise ValueError(f"need v_lo < v_hi (got {v_lo}, {v_hi})")
    if n_points < 2:
        raise ValueError(f"n_points must be >= 2 (got {n_points})")
    return [(v, vco_freq(curve, v)) for v in _grid(v_lo, v_hi, n_points)]
