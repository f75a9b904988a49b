"""Three-state phase-frequency detector with a finite reset delay.

Behavioral model of the dual flip-flop + AND-reset structure: a reference
rising edge raises UP, a feedback rising edge raises DOWN, and once both are
high an internal reset clears them after ``reset_delay`` seconds. The nonzero
reset delay is what keeps the detector linear through zero phase error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True, slots=True)
class PfdState:
    up_active: bool = False
    down_active: bool = False
    # time remaining until reset completes; meaningful only while both
    # flags are active
    reset_timer: float = 0.0


def pfd_step(
    state: PfdState,
    ref_edge: bool,
    div_edge: bool,
    dt: float,
    reset_delay: float,
) -> tuple[PfdState, bool, bool]:
    """Advance the detector by one step of duration ``dt``.

    ``ref_edge`` / ``div_edge`` flag rising edges occurring at the start of
    the step. Simultaneous edges raise both flags and start the reset timer
    immediately. The returned (up, down) reflect the post-step flags.
    """
    if dt <= 0.0:
        raise ValueError("dt must be positive")
    up = state.up_active or ref_edge
    down = state.down_active or div_edge
    timer = state.reset_timer
    if up and down:
        if not (state.up_active and state.down_active):
            timer = reset_delay  # overlap begins this step
        timer -= dt
        # tolerance absorbs float error when dt segments sum to reset_delay
        if timer <= reset_delay * 1e-9:
            up = False
            down = False
            timer = 0.0
    else:
        timer = 0.0
    return PfdState(up, down, timer), up, down


def pfd_average_duty(delta_phi: float) -> float:
    """Ideal per-period average of (UP - DOWN) for phase offset ``delta_phi``.

    Positive when the reference leads. Only defined over the detector's
    single-cycle linear range |delta_phi| < 2*pi.
    """
    if abs(delta_phi) >= TWO_PI:
        raise ValueError(
            f"|delta_phi| = {abs(delta_phi):.6g} rad is outside the PFD's "
            "linear range (-2*pi, 2*pi)"
        )
    return delta_phi / TWO_PI
