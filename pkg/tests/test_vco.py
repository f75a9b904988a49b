import math

import pytest

from pllforge.vco import (
    TWO_PI,
    VcoState,
    VcoTuningCurve,
    vco_ctrl_voltage,
    vco_freq,
    vco_gain_global,
    vco_gain_local,
    vco_step,
)

ANCHORS = ((0.4, 1.066e9), (0.9, 3.208e9), (1.8, 3.731e9))


@pytest.fixture()
def curve():
    return VcoTuningCurve(anchors=ANCHORS)


def test_anchor_frequencies_are_exact(curve):
    for v, f in ANCHORS:
        assert vco_freq(curve, v) == f


def test_segment_midpoint(curve):
    # midpoint of the (0.4, 1.066e9)-(0.9, 3.208e9) segment
    assert vco_freq(curve, 0.65) == pytest.approx((1.066e9 + 3.208e9) / 2.0, rel=1e-12)


def test_clamping_outside_span(curve):
    assert vco_freq(curve, 0.2) == 1.066e9
    assert vco_freq(curve, -5.0) == 1.066e9
    assert vco_freq(curve, 2.5) == 3.731e9


def test_monotone_with_equality_only_in_clamp(curve):
    vs = [i * 0.05 - 0.2 for i in range(50)]
    fs = [vco_freq(curve, v) for v in vs]
    for (v0, f0), (v1, f1) in zip(zip(vs, fs), zip(vs[1:], fs[1:])):
        assert f1 >= f0
        if v0 >= curve.v_min and v1 <= curve.v_max:
            assert f1 > f0


def test_inverse_round_trip(curve):
    for f in (1.066e9, 1.9e9, 2.4e9, 3.208e9, 3.5e9, 3.731e9):
        v = vco_ctrl_voltage(curve, f)
        assert vco_freq(curve, v) == pytest.approx(f, rel=1e-12)
    with pytest.raises(ValueError):
        vco_ctrl_voltage(curve, 4.0e9)
    with pytest.raises(ValueError):
        vco_ctrl_voltage(curve, 0.9e9)


def test_local_gain_segment_slopes(curve):
    lo_slope = (3.208e9 - 1.066e9) / (0.9 - 0.4)
    hi_slope = (3.731e9 - 3.208e9) / (1.8 - 0.9)
    assert vco_gain_local(curve, 0.65) == pytest.approx(lo_slope, rel=1e-12)
    assert vco_gain_local(curve, 1.2) == pytest.approx(hi_slope, rel=1e-12)
    # constant across a segment
    assert vco_gain_local(curve, 0.5) == vco_gain_local(curve, 0.8)


def test_local_gain_undefined_in_clamp(curve):
    for v in (0.4, 0.3, 1.8, 2.0):
        with pytest.raises(ValueError):
            vco_gain_local(curve, v)


def test_global_gain_full_span(curve):
    assert vco_gain_global(curve) == pytest.approx(
        (3.731e9 - 1.066e9) / (1.8 - 0.4), rel=1e-12
    )
    two = VcoTuningCurve(anchors=((0.0, 1e9), (1.0, 2e9)))
    assert vco_gain_global(two) == pytest.approx(1e9, rel=1e-12)


def test_curve_construction_rejects_non_monotone():
    with pytest.raises(ValueError):
        VcoTuningCurve(anchors=((0.0, 1e9), (1.0, 1e9)))
    with pytest.raises(ValueError):
        VcoTuningCurve(anchors=((0.0, 2e9), (1.0, 1e9)))
    with pytest.raises(ValueError):
        VcoTuningCurve(anchors=((1.0, 1e9), (0.5, 2e9)))
    with pytest.raises(ValueError):
        VcoTuningCurve(anchors=((0.0, 1e9),))


def test_step_no_edge_far_from_crossing(curve):
    flat = VcoTuningCurve(anchors=((0.0, 1e9), (2.0, 1.0000001e9)))
    state, edges = vco_step(flat, VcoState(), 0.0, 1e-12)
    assert edges == []
    assert state.phase == pytest.approx(TWO_PI * 1e9 * 1e-12, rel=1e-12)


def test_step_exactly_one_period_gives_one_edge():
    flat = VcoTuningCurve(anchors=((0.0, 1e9), (2.0, 2e9)))
    state, edges = vco_step(flat, VcoState(phase=1e-9), 0.0, 1e-9)
    assert len(edges) == 1
    state2, edges2 = vco_step(flat, VcoState(), 0.0, 1e-9)
    assert len(edges2) == 1
    assert edges2[0] == pytest.approx(1e-9, rel=1e-12)


def test_step_rejects_bad_dt(curve):
    with pytest.raises(ValueError):
        vco_step(curve, VcoState(), 0.5, 0.0)


def test_long_run_edge_count_and_spacing(curve):
    # constant voltage: closed-form expected count, uniform edge spacing
    v = 0.9
    f = vco_freq(curve, v)
    dt = 40e-12
    n = 10**6
    state = VcoState()
    count = 0
    first = last = None
    prev_abs = None
    max_rel = 0.0
    for k in range(n):
        state, edges = vco_step(curve, state, v, dt)
        for off in edges:
            t_abs = k * dt + off
            if first is None:
                first = t_abs
            else:
                gap = t_abs - prev_abs
                max_rel = max(max_rel, abs(gap * f - 1.0))
            prev_abs = t_abs
            last = t_abs
            count += 1
    total = n * dt
    assert abs(count - math.floor(f * total)) <= 1
    mean_gap = (last - first) / (count - 1)
    assert mean_gap == pytest.approx(1.0 / f, rel=1e-9)
    assert max_rel < 1e-9


def test_phase_consistency_against_fsum(curve):
    import random

    rng = random.Random(42)
    state = VcoState()
    contribs = []
    for _ in range(2000):
        v = rng.uniform(0.3, 1.9)
        dt = rng.uniform(0.1e-12, 5e-12)
        f = vco_freq(curve, v)
        contribs.append(TWO_PI * f * dt)
        state, _ = vco_step(curve, state, v, dt)
    assert state.phase == pytest.approx(math.fsum(contribs), rel=1e-12)


def test_edge_count_matches_phase_floor(curve):
    import random

    rng = random.Random(1)
    state = VcoState()
    total_edges = 0
    for _ in range(5000):
        v = rng.uniform(0.2, 2.0)
        dt = rng.uniform(1e-12, 200e-12)
        prev_phase = state.phase
        state, edges = vco_step(curve, state, v, dt)
        assert len(edges) == math.floor(state.phase / TWO_PI) - math.floor(prev_phase / TWO_PI)
        total_edges += len(edges)
    assert total_edges > 0
