import math

import numpy as np
import pytest

from pllforge.analysis import (
    AnalysisError,
    LinearLoopParams,
    estimate_lock_time,
    linear_step_response,
    loop_params_from_config,
    stability_report,
    synthesize_loop,
)
from pllforge.charge_pump import lf_impedance
from pllforge.config import paper_preset

TWO_PI = 2.0 * math.pi

I_PUMP = 100e-6
KV = 4.284e9  # local tuning slope at the 2.4 GHz operating point
N = 16
F_N = 7.5e6


def _params(zeta=1.0, ripple=10.0):
    r, c1, c2 = synthesize_loop(I_PUMP, KV, N, F_N, zeta, ripple)
    return LinearLoopParams(
        k_pd=I_PUMP / TWO_PI, k_v=TWO_PI * KV, n=N, r=r, c1=c1, c2=c2
    )


def test_synthesis_round_trips_through_stability_report():
    p = _params()
    rep = stability_report(p)
    assert rep.natural_freq == pytest.approx(TWO_PI * F_N, rel=1e-9)
    assert rep.damping == pytest.approx(1.0, rel=1e-9)
    assert rep.stable


def test_doubling_pump_current_doubles_c1_and_halves_r():
    r1, c1_a, c2_a = synthesize_loop(I_PUMP, KV, N, F_N, 1.0, 10.0)
    r2, c1_b, c2_b = synthesize_loop(2 * I_PUMP, KV, N, F_N, 1.0, 10.0)
    assert c1_b == pytest.approx(2 * c1_a, rel=1e-12)
    assert c2_b == pytest.approx(2 * c2_a, rel=1e-12)
    assert r2 == pytest.approx(r1 / 2, rel=1e-12)


def test_synthesis_rejects_bad_inputs():
    with pytest.raises(ValueError):
        synthesize_loop(I_PUMP, KV, N, F_N, 0.0, 10.0)
    with pytest.raises(ValueError):
        synthesize_loop(-1e-6, KV, N, F_N, 1.0, 10.0)
    with pytest.raises(ValueError):
        synthesize_loop(I_PUMP, KV, N, F_N, 1.0, 2.0)


def test_params_validation():
    with pytest.raises(ValueError):
        LinearLoopParams(k_pd=1e-5, k_v=1e9, n=16, r=1e3, c1=1e-12, c2=2e-12)
    with pytest.raises(ValueError):
        LinearLoopParams(k_pd=-1e-5, k_v=1e9, n=16, r=1e3, c1=1e-11, c2=1e-12)


def test_phase_margin_matches_two_pole_classic_with_negligible_third_pole():
    # zeta = 1 with c2 -> c1/1000: crossover at omega_n*sqrt(2+sqrt(5)),
    # margin atan(w_c/w_z) minus the residual third-pole contribution
    p = _params(zeta=1.0, ripple=1000.0)
    rep = stability_report(p)
    w_c_expected = rep.natural_freq * math.sqrt(2.0 + math.sqrt(5.0))
    w_z = 1.0 / (p.r * p.c1)
    w_p3 = (p.c1 + p.c2) / (p.r * p.c1 * p.c2)
    pm_expected = math.degrees(
        math.atan(w_c_expected / w_z) - math.atan(w_c_expected / w_p3)
    )
    assert rep.phase_margin == pytest.approx(pm_expected, abs=0.2)
    assert rep.phase_margin == pytest.approx(76.3, abs=1.0)


def test_crossover_is_unity_gain_and_phase_checks_against_impedance():
    p = _params()
    rep = stability_report(p)
    g = p.k_pd * lf_impedance(rep.crossover_freq, p.r, p.c1, p.c2) * p.k_v / (
        p.n * 1j * rep.crossover_freq
    )
    assert abs(g) == pytest.approx(1.0, rel=1e-9)
    assert 180.0 + math.degrees(math.atan2(g.imag, g.real)) == pytest.approx(
        rep.phase_margin, abs=1e-6
    )


def test_gain_and_c1_rescaling_preserves_loop_constants():
    # scaling the k_pd*k_v product by alpha, c1 by alpha, and r by 1/alpha
    # leaves both omega_n and zeta unchanged
    p = _params()
    base = stability_report(p)
    alpha = 3.7
    scaled = LinearLoopParams(
        k_pd=p.k_pd * alpha,
        k_v=p.k_v,
        n=p.n,
        r=p.r / alpha,
        c1=p.c1 * alpha,
        c2=p.c2,
    )
    rep = stability_report(scaled)
    assert rep.natural_freq == pytest.approx(base.natural_freq, rel=1e-12)
    assert rep.damping == pytest.approx(base.damping, rel=1e-12)


def test_phase_margin_strictly_decreasing_in_c2():
    p = _params()
    margins = []
    for ratio in (1000.0, 100.0, 30.0, 10.0, 6.0):
        q = LinearLoopParams(
            k_pd=p.k_pd, k_v=p.k_v, n=p.n, r=p.r, c1=p.c1, c2=p.c1 / ratio
        )
        margins.append(stability_report(q).phase_margin)
    for a, b in zip(margins, margins[1:]):
        assert b < a


def test_no_crossover_raises():
    # absurd damping with the third pole pushed past the bracket keeps
    # |G| above unity through 100*omega_n
    p = _params()
    q = LinearLoopParams(
        k_pd=p.k_pd, k_v=p.k_v, n=p.n, r=p.r * 120.0, c1=p.c1, c2=p.c1 / 50000.0
    )
    with pytest.raises(AnalysisError):
        stability_report(q)


def test_loop_params_from_config_uses_local_gain():
    cfg = paper_preset()
    p = loop_params_from_config(cfg)
    assert p.k_pd == pytest.approx(cfg.i_pump / TWO_PI, rel=1e-12)
    assert p.k_v == pytest.approx(TWO_PI * 4.284e9, rel=1e-12)
    assert p.n == 16


def test_step_response_starts_at_zero_and_settles_to_zero():
    p = _params()
    t = np.linspace(0.0, 30.0 / (TWO_PI * F_N) * TWO_PI, 4000)
    resp = linear_step_response(p, 1.5e6, t)
    assert resp[0] == pytest.approx(0.0, abs=1e-12)
    peak = np.max(np.abs(resp))
    assert peak > 0.01
    # type-II loop: zero steady-state phase error after a frequency step
    assert abs(resp[-1]) < 1e-6 * peak


def test_step_response_is_linear_in_step_size():
    p = _params()
    t = np.linspace(0.0, 1e-6, 500)
    r1 = linear_step_response(p, 1e6, t)
    r2 = linear_step_response(p, 2e6, t)
    assert np.allclose(r2, 2.0 * r1, rtol=1e-9, atol=1e-15)


def test_step_response_validates_grid():
    p = _params()
    with pytest.raises(ValueError):
        linear_step_response(p, 1e6, [0.0, 0.0, 1e-9])
    with pytest.raises(ValueError):
        linear_step_response(p, 1e6, [-1e-9, 0.0])


def test_estimate_lock_time_vacuous_tolerance():
    assert estimate_lock_time(_params(), 1.5e6, math.inf) == 0.0


def test_estimate_lock_time_monotone_in_tolerance():
    p = _params()
    estimates = [estimate_lock_time(p, 1.5e6, tol) for tol in (0.05, 0.01, 0.002)]
    for a, b in zip(estimates, estimates[1:]):
        assert b >= a


def test_estimate_lock_time_order_of_magnitude():
    # zeta = 1, f_n = 7.5 MHz: settle to 1% of peak on the order of
    # 5/(zeta*omega_n) ~ 106 ns
    p = _params()
    t = np.linspace(0.0, 2e-6, 8000)
    peak = float(np.max(np.abs(linear_step_response(p, 1.5e6, t))))
    est = estimate_lock_time(p, 1.5e6, 0.01 * peak)
    assert 3e-8 < est < 3e-7
