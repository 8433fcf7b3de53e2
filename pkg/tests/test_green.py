import numpy as np
import pytest

from pathamp import (OscillatorNetwork, PoleAtEvaluation, ResonantCoupling,
                     SpectralSource, UnstableMode, convolved_response,
                     freq_kernels, green_quadrature, green_residual,
                     normal_mode_frequencies, pairwise_phase,
                     time_domain_green)


def pair(m=1.0, k=2.0, k12=0.5):
    return OscillatorNetwork.pair(m, k, k12, 0.1, 5)


class TestFreqKernels:
    def test_hand_values(self):
        kern = freq_kernels(pair())
        # denominator 0.25 - 1 = -0.75 at w = 1
        assert kern.a_of_omega(1.0) == pytest.approx(4.0 / 3.0)
        assert kern.b_of_omega(1.0) == pytest.approx(-2.0 / 3.0)

    def test_resonant_frequency(self):
        # w^2 m = k zeroes the diagonal numerator: a = 0, b = 1/k12
        kern = freq_kernels(pair(m=1.0, k=1.0, k12=0.5))
        assert kern.a_of_omega(1.0) == 0.0
        assert kern.b_of_omega(1.0) == pytest.approx(2.0)

    def test_zero_coupling_limit(self):
        kern = freq_kernels(pair(k12=0.0))
        w = 1.3
        assert kern.b_of_omega(w) == 0.0
        assert kern.a_of_omega(w) == pytest.approx(-1.0 / (w * w - 2.0))

    def test_kernels_are_even(self):
        kern = freq_kernels(pair())
        w = np.linspace(0.05, 3.0, 50)
        w = w[np.abs(w - np.sqrt(1.5)) > 0.05]
        w = w[np.abs(w - np.sqrt(2.5)) > 0.05]
        np.testing.assert_allclose(kern.a_of_omega(w), kern.a_of_omega(-w), rtol=1e-14)
        np.testing.assert_allclose(kern.b_of_omega(w), kern.b_of_omega(-w), rtol=1e-14)

    def test_pole_guard(self):
        net = pair()
        kern = freq_kernels(net)
        wp, _ = normal_mode_frequencies(net)
        with pytest.raises(PoleAtEvaluation):
            kern.a_of_omega(wp)

    def test_poles_are_normal_modes(self):
        net = pair()
        kern = freq_kernels(net)
        assert kern.poles[0] == pytest.approx(np.sqrt(2.5))
        assert kern.poles[1] == pytest.approx(np.sqrt(1.5))
        assert not kern.unstable

    def test_unstable_flagged_not_raised(self):
        kern = freq_kernels(pair(k=1.0, k12=1.5))
        assert kern.unstable
        assert np.isnan(kern.poles[1])


class TestTimeDomainGreen:
    def test_zero_coupling_diagonal(self):
        d = time_domain_green(pair(k12=0.0), 0.7)
        assert d[0, 1] == 0.0
        assert d[1, 0] == 0.0

    def test_even_in_tau(self):
        net = pair()
        np.testing.assert_array_equal(time_domain_green(net, 1.3),
                                      time_domain_green(net, -1.3))

    def test_cross_entries_equal(self):
        d = time_domain_green(pair(), 0.4)
        assert d[0, 1] == d[1, 0]
        assert d[0, 0] == d[1, 1]

    def test_unstable_mode_raises(self):
        with pytest.raises(UnstableMode):
            time_domain_green(pair(k=1.0, k12=1.0), 0.5)

    def test_matches_damped_quadrature_at_printed_parameters(self):
        net = pair()
        d = time_domain_green(net, 1.3)
        dq = green_quadrature(net, 1.3, epsilon=1e-3, cutoff=200.0)
        assert np.max(np.abs(d - dq)) <= 1e-3

    @pytest.mark.parametrize("tau", [0.0, -2.1, 4.9])
    def test_matches_damped_quadrature_on_wide_box(self, tau):
        net = pair()
        d = time_domain_green(net, tau)
        dq = green_quadrature(net, tau, epsilon=1e-3, cutoff=2000.0)
        assert np.max(np.abs(d - dq)) <= 1e-3


def gaussian_pulse(t):
    f = np.zeros((t.size, 2))
    f[:, 0] = np.exp(-t ** 2 / (2 * 0.5 ** 2))
    return f


class TestGreenResidual:
    def test_zero_drive_zero_residual(self):
        assert green_residual(pair(), lambda t: np.zeros((t.size, 2))) == 0.0

    def test_gaussian_pulse_satisfies_equation(self):
        assert green_residual(pair(), gaussian_pulse) <= 1e-3

    def test_symmetric_drive_gives_equal_components(self):
        def both(t):
            f = np.empty((t.size, 2))
            f[:, 0] = f[:, 1] = np.exp(-t ** 2 / (2 * 0.4 ** 2))
            return f

        _, q, _ = convolved_response(pair(), both, samples=801)
        np.testing.assert_array_equal(q[:, 0], q[:, 1])


class TestPairwisePhase:
    def test_hand_value(self):
        src = SpectralSource(gamma=1.0, omega0=1.0, j_value=1.0)
        assert pairwise_phase(src, pair()) == pytest.approx(-1.0 / (3.0 * np.pi),
                                                            rel=1e-15)

    def test_zero_partner_impulse(self):
        src = SpectralSource(gamma=1.0, omega0=1.0, j_value=0.0)
        assert pairwise_phase(src, pair()) == 0.0

    def test_resonant_numerator(self):
        # w0^2 m = k: phase reduces to gamma*j/(2 pi hbar k12)
        src = SpectralSource(gamma=1.4, omega0=1.0, j_value=0.7)
        got = pairwise_phase(src, pair(m=1.0, k=1.0, k12=0.5))
        assert got == pytest.approx(1.4 * 0.7 / (2 * np.pi * 0.5), rel=1e-14)

    @pytest.mark.parametrize("factor", [2.0, 3.0, -1.0])
    def test_linear_in_gamma_and_impulse(self, factor):
        base = pairwise_phase(SpectralSource(1.1, 1.0, 0.8), pair())
        scaled_gamma = pairwise_phase(SpectralSource(1.1 * factor, 1.0, 0.8), pair())
        scaled_j = pairwise_phase(SpectralSource(1.1, 1.0, 0.8 * factor), pair())
        assert scaled_gamma == pytest.approx(factor * base, rel=1e-13)
        assert scaled_j == pytest.approx(factor * base, rel=1e-13)

    def test_resonant_coupling_raises(self):
        # k12 = |w0^2 m - k| puts the line on a pole
        src = SpectralSource(gamma=1.0, omega0=1.0, j_value=1.0)
        with pytest.raises(ResonantCoupling):
            pairwise_phase(src, pair(m=1.0, k=2.0, k12=1.0))

    def test_self_terms_add_diagonal_response(self):
        src = SpectralSource(gamma=1.0, omega0=1.0, j_value=1.0)
        net = pair()
        base = pairwise_phase(src, net)
        with_self = pairwise_phase(src, net, include_self_terms=True)
        c = 1.0 - 2.0
        denom = 0.25 - 1.0
        expected = (1.0 + 1.0) * c / (4 * np.pi * denom)
        assert with_self - base == pytest.approx(expected, rel=1e-13)

    def test_hbar_scales_inverse(self):
        src = SpectralSource(1.0, 1.0, 1.0)
        assert pairwise_phase(src, pair(), hbar=2.0) == pytest.approx(
            0.5 * pairwise_phase(src, pair()), rel=1e-14)


class TestSpectralSourceValidation:
    def test_rejects_nonpositive_frequency(self):
        with pytest.raises(ValueError, match="omega0"):
            SpectralSource(1.0, 0.0, 1.0)

    def test_rejects_nonfinite_gamma(self):
        with pytest.raises(ValueError, match="gamma"):
            SpectralSource(np.inf, 1.0, 1.0)


def test_kernels_require_pair():
    net = OscillatorNetwork.single(1.0, 1.0, 0.1, 5)
    with pytest.raises(ValueError):
        freq_kernels(net)
