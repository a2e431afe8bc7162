"""Elementary pulse shapes, both pulse-train constructions, the analytic
spectrum, and the ambiguity-function orthogonality machinery."""

import numpy as np
import pytest
from scipy.signal import find_peaks

from oddm import (
    GridMismatchError,
    OddmParams,
    Waveform,
    ambiguity,
    build_ddop_fourier,
    build_ddop_timedomain,
    ddop_spectrum_analytic,
    m_check,
    make_elementary_pulse,
    nmse_db,
    orthogonality_scan,
)
from oddm.pulse import rc_shape, rrc_shape, sinc_shape, sinc_spectrum


def unit_train(params: OddmParams, kind: str = "rrc"):
    return build_ddop_timedomain(make_elementary_pulse(params, kind), params, normalized=True)


class TestElementaryPulse:
    def test_sinc_nyquist_crossings(self):
        p = OddmParams(M=64, N=16, Q=8, kappa=8)
        a = make_elementary_pulse(p, "sinc")
        center = len(a.samples) // 2
        peak = a.samples[center]
        assert peak == pytest.approx(np.abs(a.samples).max())
        crossings = [a.samples[center + j * p.kappa] for j in range(1, p.Q)]
        assert np.allclose(crossings, 0.0, atol=1e-10 * peak)

    def test_rrc_zero_rolloff_is_sinc(self):
        p = OddmParams(M=64, N=16, Q=8, rho=0.0, kappa=8)
        a_rrc = make_elementary_pulse(p, "rrc")
        a_sinc = make_elementary_pulse(p, "sinc")
        assert np.max(np.abs(a_rrc.samples - a_sinc.samples)) < 1e-12 * np.abs(a_sinc.samples).max()

    @pytest.mark.parametrize("kind", ["rrc", "rc", "sinc"])
    def test_unit_energy_and_even_symmetry(self, kind):
        p = OddmParams(M=64, N=16, Q=8, rho=0.35, kappa=8)
        a = make_elementary_pulse(p, kind)
        assert a.energy == pytest.approx(1.0, abs=1e-12)
        np.testing.assert_array_equal(a.samples, a.samples[::-1])

    def test_rrc_singularity_matches_two_sided_limit(self):
        # closed-form value at t = Ts/(4 rho) against rho +- 1e-6 perturbation
        ts, rho = 1.0 / 64, 0.3
        t_sing = np.array([ts / (4 * rho)])
        exact = rrc_shape(t_sing, ts, rho)[0]
        lo = rrc_shape(t_sing, ts, rho - 1e-6)[0]
        hi = rrc_shape(t_sing, ts, rho + 1e-6)[0]
        assert exact == pytest.approx((lo + hi) / 2, rel=1e-5)

    def test_rc_singularity_matches_two_sided_limit(self):
        ts, rho = 1.0 / 64, 0.3
        t_sing = np.array([ts / (2 * rho)])
        exact = rc_shape(t_sing, ts, rho)[0]
        lo = rc_shape(t_sing, ts, rho - 1e-6)[0]
        hi = rc_shape(t_sing, ts, rho + 1e-6)[0]
        assert exact == pytest.approx((lo + hi) / 2, rel=1e-5)

    def test_rc_is_nyquist(self):
        ts = 1.0 / 32
        t = ts * np.arange(1, 10)
        assert np.allclose(rc_shape(t, ts, 0.4), 0.0, atol=1e-12)

    def test_unknown_kind_rejected(self):
        p = OddmParams(M=64, N=16, Q=8)
        with pytest.raises(ValueError, match="unknown pulse kind"):
            make_elementary_pulse(p, "gaussian")


class TestTimeDomainTrain:
    def test_single_pulse_train_is_elementary(self):
        p = OddmParams(M=64, N=1, Q=8, kappa=8)
        a = make_elementary_pulse(p)
        u = build_ddop_timedomain(a, p)
        np.testing.assert_allclose(u.samples, a.samples.astype(complex), atol=0)
        assert len(u.samples) == p.pulse_len

    def test_train_has_n_equal_peaks(self):
        p = OddmParams(M=512, N=32, Q=16, rho=0.3, kappa=8)
        a = make_elementary_pulse(p)
        u = build_ddop_timedomain(a, p)
        mags = np.abs(u.samples)
        peaks, _ = find_peaks(mags, height=0.5 * mags.max())
        assert len(peaks) == p.N
        expected = p.Q * p.kappa + np.arange(p.N) * p.kappa * p.M
        np.testing.assert_array_equal(peaks, expected)
        np.testing.assert_allclose(mags[peaks], a.samples[len(a.samples) // 2], rtol=1e-15)

    def test_normalized_energy(self):
        p = OddmParams(M=64, N=16, Q=8, kappa=8)
        u = unit_train(p)
        assert u.energy == pytest.approx(1.0, abs=1e-10)
        assert u.normalized

    def test_gaps_are_exactly_zero(self):
        p = OddmParams(M=64, N=4, Q=8, kappa=8)
        u = build_ddop_timedomain(make_elementary_pulse(p), p)
        gap = u.samples[p.pulse_len : p.kappa * p.M]
        assert np.all(gap == 0)

    def test_energy_additivity(self):
        p = OddmParams(M=64, N=16, Q=8, kappa=8)
        a = make_elementary_pulse(p)
        u = build_ddop_timedomain(a, p)
        assert u.energy == pytest.approx(p.N * a.energy, abs=1e-9)

    def test_mismatched_pulse_rejected(self):
        p = OddmParams(M=64, N=16, Q=8, kappa=8)
        other = OddmParams(M=64, N=16, Q=4, kappa=8)
        with pytest.raises(ValueError, match="different parameters"):
            build_ddop_timedomain(make_elementary_pulse(other), p)


class TestFourierTrain:
    def test_matches_time_domain_construction(self):
        p = OddmParams(M=128, N=8, Q=16, rho=0.5, kappa=8)
        u_t = build_ddop_timedomain(make_elementary_pulse(p), p)
        u_f = build_ddop_fourier(p)
        gap_db = nmse_db(u_t.as_waveform(), u_f.as_waveform())
        assert gap_db < -55.0

    def test_fourier_train_near_real(self):
        p = OddmParams(M=64, N=4, Q=8, rho=0.3, kappa=8)
        u_f = build_ddop_fourier(p)
        assert np.abs(u_f.samples.imag).max() < 1e-12 * np.abs(u_f.samples.real).max()

    def test_sinc_case_bins_are_flat(self):
        p = OddmParams(M=64, N=8, Q=8, kappa=8)
        assert m_check(p, "sinc") == p.M
        bins = np.arange(-p.M // 2, p.M // 2 + 1) / p.T0
        values = sinc_spectrum(bins, p.delta_t)
        assert np.all(values == values[0])
        assert values[0] == pytest.approx(np.sqrt(p.delta_t))

    def test_m_check_even_and_covering(self):
        p = OddmParams(M=100, N=8, Q=8, rho=0.35, kappa=8, force=True)
        mc = m_check(p, "rrc")
        assert mc % 2 == 0
        assert mc >= (1 + p.rho) * p.M
        assert mc >= p.M

    def test_sinc_convergence_with_m(self):
        gaps = []
        for m in (64, 128):
            p = OddmParams(M=m, N=8, Q=8, kappa=8)
            u_t = build_ddop_timedomain(make_elementary_pulse(p, "sinc"), p)
            u_f = build_ddop_fourier(p, "sinc")
            gaps.append(nmse_db(u_t.as_waveform(), u_f.as_waveform()))
        assert gaps[1] < gaps[0]


class TestAnalyticSpectrum:
    def test_dc_value_is_envelope_over_t0(self):
        p = OddmParams(M=64, N=16, Q=8, rho=0.3, kappa=8)
        spec = ddop_spectrum_analytic(p, "rrc", freqs=np.array([0.0]))
        assert abs(spec.values[0]) == pytest.approx(np.sqrt(p.delta_t) / p.T0, rel=1e-12)
        assert spec.t_tilde == pytest.approx(p.Q * p.delta_t + (p.N - 1) * p.T0 / 2)

    def test_lobe_count_and_spacing_sinc(self):
        p = OddmParams(M=16, N=4, Q=2, kappa=8)
        spec = ddop_spectrum_analytic(p, "sinc")
        mags = np.abs(spec.values)
        peaks, _ = find_peaks(mags, height=0.5 * mags.max())
        assert len(peaks) == spec.m_check + 1
        centers = spec.freqs[peaks]
        np.testing.assert_allclose(np.diff(centers), 1.0 / p.T0, atol=1e-9)
        np.testing.assert_allclose(centers, np.round(centers * p.T0) / p.T0, atol=1e-9)

    def test_magnitude_even_in_frequency(self):
        p = OddmParams(M=32, N=8, Q=4, rho=0.4, kappa=8)
        f = np.linspace(0.5, 5.0, 64)
        pos = ddop_spectrum_analytic(p, "rrc", freqs=f).values
        neg = ddop_spectrum_analytic(p, "rrc", freqs=-f).values
        np.testing.assert_allclose(np.abs(pos), np.abs(neg), rtol=1e-10, atol=1e-15)

    def test_matches_transform_of_samples(self):
        # oracle: zero-padded FFT of the sampled train, phase-referenced to
        # t_start, shifted to the causal pulse origin and scaled by the
        # window area N*T0 that the closed form absorbs
        p = OddmParams(M=64, N=8, Q=8, rho=0.5, kappa=8)
        u = build_ddop_timedomain(make_elementary_pulse(p), p)
        n_fft = 1 << 18
        raw = np.fft.fft(u.samples, n=n_fft) / p.rate
        freqs = np.fft.fftfreq(n_fft, d=1.0 / p.rate)
        raw *= np.exp(-2j * np.pi * freqs * u.t_start)
        band = np.abs(freqs) <= (1 + p.rho) * p.M / (2 * p.T0)
        oracle = raw[band] * np.exp(-2j * np.pi * freqs[band] * p.Q * p.delta_t)
        oracle /= p.N * p.T0
        spec = ddop_spectrum_analytic(p, "rrc", freqs=freqs[band])
        num = np.sum(np.abs(spec.values - oracle) ** 2)
        den = np.sum(np.abs(oracle) ** 2)
        assert 10 * np.log10(num / den) < -40.0


class TestAmbiguity:
    def test_origin_is_unity_for_normalized(self):
        p = OddmParams(M=32, N=8, Q=4, rho=0.5, kappa=16)
        u = unit_train(p)
        assert ambiguity(u, 0.0, 0.0) == pytest.approx(1.0, abs=1e-10)

    def test_off_grid_delay_rejected(self):
        p = OddmParams(M=32, N=8, Q=4, rho=0.5, kappa=16)
        u = unit_train(p)
        with pytest.raises(GridMismatchError):
            ambiguity(u, 0.3 * p.delta_t / p.kappa, 0.0)

    def test_adjacent_delay_bin_is_tiny(self):
        p = OddmParams(M=32, N=8, Q=4, rho=0.5, kappa=16)
        u = unit_train(p)
        assert abs(ambiguity(u, p.delta_t, 0.0)) < 1e-4

    def test_matches_refined_grid_integration(self):
        values = {}
        for kappa in (16, 32):
            p = OddmParams(M=32, N=8, Q=4, rho=0.5, kappa=kappa)
            u = unit_train(p)
            values[kappa] = ambiguity(u, 3 * p.delta_t, 2 * p.delta_f)
        assert abs(values[16] - values[32]) < 1e-5


class TestOrthogonalityScan:
    @pytest.fixture(scope="class")
    def desk_report(self):
        p = OddmParams(M=32, N=8, Q=4, rho=0.5, kappa=16)
        return orthogonality_scan(unit_train(p))

    def test_origin_value(self, desk_report):
        assert desk_report.origin_value == pytest.approx(1.0, abs=1e-10)

    def test_off_origin_floor(self, desk_report):
        assert desk_report.max_off_origin < 10 ** (-50 / 20)
        assert desk_report.max_off_origin_db < -50.0

    def test_symmetric_pairs_equal(self, desk_report):
        mags = desk_report.magnitudes
        np.testing.assert_allclose(mags, mags[::-1, ::-1], rtol=1e-7, atol=1e-12)

    def test_requires_normalized(self):
        p = OddmParams(M=32, N=8, Q=4, rho=0.5, kappa=16)
        u = build_ddop_timedomain(make_elementary_pulse(p), p, normalized=False)
        with pytest.raises(ValueError, match="unit-energy"):
            orthogonality_scan(u)

    def test_matches_pointwise_ambiguity(self, desk_report):
        p = OddmParams(M=32, N=8, Q=4, rho=0.5, kappa=16)
        u = unit_train(p)
        for m, n in [(1, 0), (-3, 2), (5, -4), (31, 7)]:
            i = m + p.M - 1
            j = n + p.N - 1
            direct = abs(ambiguity(u, m * p.delta_t, n * p.delta_f))
            assert desk_report.magnitudes[i, j] == pytest.approx(direct, abs=1e-12)
