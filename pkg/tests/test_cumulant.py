import numpy as np
import pytest
from scipy.special import j0, jn_zeros

from zzmit import (CumulantSpec, NoCumulantZeroError, cumulant_curve,
                   error_cumulant, find_gamma, modulation_peak)
from zzmit.cumulant import (GAMMA_HALF_TURN, GAMMA_QUARTER_TURN,
                            capped_base_amplitude, select_k)
from zzmit.envelopes import Modulation, SinSquared, Sum


def bessel_cumulant(spec: CumulantSpec) -> float:
    """Closed form via the standard Bessel integral.

    With chi = 2 c sin^2(pi t / tau) = c (1 - cos(2 pi t / tau)), c = omega
    tau / pi, the period integrals reduce to tau cos(c) J0(c) and
    tau sin(c) J0(c).
    """
    c = spec.omega * spec.tau / np.pi
    return spec.eta * spec.tau * abs(j0(c)) * (abs(np.cos(c)) + abs(np.sin(c)))


def test_zero_gamma_gives_full_cumulant():
    spec = CumulantSpec(area=np.pi / 4, k=4, gamma=0.0, eta=0.3)
    assert error_cumulant(spec) == pytest.approx(0.3 * spec.tau, abs=1e-12)


def test_quadrature_matches_bessel_form():
    rng = np.random.default_rng(17)
    for _ in range(50):
        spec = CumulantSpec(area=rng.uniform(0.3, 2.5),
                            k=int(rng.integers(1, 9)),
                            gamma=rng.uniform(0.0, 7.0),
                            eta=rng.uniform(0.1, 2.0))
        assert error_cumulant(spec) == pytest.approx(bessel_cumulant(spec), abs=1e-9)


def test_cumulant_linear_in_eta():
    base = CumulantSpec(np.pi / 2, 4, 1.7, eta=1.0)
    double = CumulantSpec(np.pi / 2, 4, 1.7, eta=2.0)
    assert error_cumulant(double) == pytest.approx(2 * error_cumulant(base), rel=1e-12)


def test_cumulant_segment_independent():
    spec = CumulantSpec(np.pi / 4, 4, 3.3, eta=0.5)
    ref = error_cumulant(spec, segment=1)
    for seg in (2, 3, 4):
        assert abs(error_cumulant(spec, segment=seg) - ref) < 1e-12


def test_cumulant_nonnegative():
    for gamma in np.linspace(0, 6, 25):
        assert error_cumulant(CumulantSpec(np.pi / 2, 2, float(gamma))) >= 0.0


def test_rounded_published_ratio_nearly_zeroes_cumulant():
    # 4.81 is the two-decimal rounding of the exact root; the residual stays
    # three orders below the untuned cumulant
    for k in (1, 4):
        spec = CumulantSpec(np.pi / 4, k, 4.81, eta=1.0)
        assert error_cumulant(spec) < 1e-3 * spec.tau


def test_find_gamma_quarter_turn():
    root = find_gamma(np.pi / 4, k=4)
    assert root.gamma == pytest.approx(4.81, abs=0.01)
    # cross-check against the Bessel-zero oracle
    assert root.gamma == pytest.approx(2 * jn_zeros(0, 1)[0], abs=1e-6)
    assert root.cumulant < 1e-9


def test_find_gamma_half_turn():
    root = find_gamma(np.pi / 2, k=4)
    assert root.gamma == pytest.approx(2.40, abs=0.01)
    assert root.gamma == pytest.approx(jn_zeros(0, 1)[0], abs=1e-6)


def test_find_gamma_independent_of_k():
    roots = [find_gamma(np.pi / 4, k=k).gamma for k in (1, 2, 4, 8)]
    assert max(roots) - min(roots) < 1e-6


def test_find_gamma_second_root():
    # the cumulant zeros sit at the Bessel zeros; the second needs a wider span
    root = find_gamma(np.pi / 2, k=4, bracket=(0.5, 8.0), root_index=2)
    assert root.gamma == pytest.approx(jn_zeros(0, 2)[1], abs=1e-6)


def test_find_gamma_no_zero_in_bracket():
    with pytest.raises(NoCumulantZeroError) as exc:
        find_gamma(np.pi / 4, k=4, bracket=(0.5, 2.0))
    assert exc.value.best_cumulant > 0
    assert 0.5 - 1e-9 <= exc.value.best_gamma <= 2.0 + 1e-9


def test_module_constants_are_the_first_zeros():
    assert GAMMA_QUARTER_TURN == pytest.approx(2 * jn_zeros(0, 1)[0], abs=1e-12)
    assert GAMMA_HALF_TURN == pytest.approx(jn_zeros(0, 1)[0], abs=1e-12)


def test_cumulant_curve_matches_pointwise():
    gammas = [0.0, 1.0, 2.5]
    curve = cumulant_curve(np.pi / 2, 4, gammas)
    for g, val in zip(gammas, curve):
        assert val == pytest.approx(error_cumulant(CumulantSpec(np.pi / 2, 4, g)), rel=1e-12)


def test_modulation_peak_vs_brute_force():
    for k, gamma in ((4, GAMMA_QUARTER_TURN), (2, GAMMA_HALF_TURN)):
        s = np.linspace(0, 1, 1_000_001)
        brute = np.abs(np.sin(np.pi * s) ** 2 + gamma * k * np.sin(2 * np.pi * k * s)).max()
        assert modulation_peak(k, gamma) == pytest.approx(brute, rel=1e-5)


def test_capped_base_amplitude():
    cap = 2.0
    om0 = capped_base_amplitude(cap, 4, GAMMA_QUARTER_TURN)
    env = Sum([SinSquared(om0, 1.0), Modulation(GAMMA_QUARTER_TURN * 4 * om0, 0.25)])
    assert env.max_abs(0.0, 1.0) == pytest.approx(cap, rel=1e-6)


def test_spec_validation():
    with pytest.raises(ValueError):
        CumulantSpec(area=-1.0, k=4, gamma=1.0)
    with pytest.raises(ValueError):
        CumulantSpec(area=1.0, k=0, gamma=1.0)
    with pytest.raises(ValueError):
        error_cumulant(CumulantSpec(1.0, 2, 1.0), segment=3)


def test_select_k_single_candidate():
    from zzmit import PropagatorConfig, isolated_x90
    sel = select_k(lambda k: isolated_x90(k=k, capped=True),
                   eta_ratios=[0.0], k_candidates=[4],
                   config=PropagatorConfig(steps_per_period=32))
    assert sel.k == 4
    assert set(sel.worst_infidelity) == {4}


def test_select_k_empty_candidates():
    with pytest.raises(ValueError, match="empty"):
        select_k(lambda k: None, [0.0], [])
