import numpy as np
import pytest

from pulsegate.errors import InsufficientDataError, InvalidArgumentError, InvalidInputError
from pulsegate.signal_core import (
    VideoCube,
    Waveform,
    bandpass_brickwall,
    hilbert_envelope,
    power_spectrum,
    psd_normalized,
    resample_cubic,
    spatial_mean_trace,
    standardize,
)


def sine_wave(freq_hz, fps, duration_s, amplitude=1.0, phase=0.0):
    t = np.arange(int(round(duration_s * fps))) / fps
    return Waveform(amplitude * np.sin(2 * np.pi * freq_hz * t + phase), fps)


class TestTypes:
    def test_waveform_rejects_bad_input(self):
        with pytest.raises(InvalidInputError):
            Waveform(np.array([1.0]), 30.0)
        with pytest.raises(InvalidInputError):
            Waveform(np.array([1.0, np.nan]), 30.0)
        with pytest.raises(InvalidInputError):
            Waveform(np.array([1.0, 2.0]), 0.0)

    def test_cube_rejects_bad_shapes(self):
        with pytest.raises(InvalidInputError):
            VideoCube(np.zeros((1, 4, 4, 3)), 30.0)
        with pytest.raises(InvalidInputError):
            VideoCube(np.zeros((4, 4, 4, 2)), 30.0)
        with pytest.raises(InvalidInputError):
            VideoCube(np.full((4, 4, 4, 3), np.inf), 30.0)


class TestPsdNormalized:
    def test_sine_90bpm_dominant_bin(self):
        w = sine_wave(1.5, 90.0, 10.0)
        psd = psd_normalized(w, nfft=5400, band_bpm=(40.0, 240.0))
        assert psd.bin_resolution_bpm == pytest.approx(1.0)
        assert psd.peak_bpm == pytest.approx(90.0)
        assert not psd.degenerate

    def test_unit_sum_and_band_mask(self):
        rng = np.random.default_rng(3)
        for _ in range(5):
            w = Waveform(rng.standard_normal(600), 60.0)
            psd = psd_normalized(w, nfft=1024)
            assert psd.power.sum() == pytest.approx(1.0, abs=1e-9)
            outside = psd.power[~psd.in_band]
            assert np.all(outside == 0.0)

    def test_constant_signal_degenerate(self):
        psd = psd_normalized(Waveform(np.full(100, 3.3), 30.0), nfft=256)
        assert psd.degenerate
        assert np.all(psd.power == 0.0)

    def test_two_tone_equal_split(self):
        # closed form: with whole cycles on the bin grid the DFT of a two-tone
        # signal puts exactly half the power in each tone's bin
        fps, dur = 90.0, 60.0
        t = np.arange(int(fps * dur)) / fps
        x = np.sin(2 * np.pi * 1.0 * t) + np.sin(2 * np.pi * 2.0 * t)
        psd = psd_normalized(Waveform(x, fps), nfft=5400)
        freqs = psd.freqs_bpm
        near_60 = np.abs(freqs - 60.0) <= 3.0
        near_120 = np.abs(freqs - 120.0) <= 3.0
        assert psd.power[near_60].sum() == pytest.approx(0.5, abs=0.01)
        assert psd.power[near_120].sum() == pytest.approx(0.5, abs=0.01)

    def test_parseval_identity(self):
        rng = np.random.default_rng(11)
        for nfft in (256, 999, 5400):
            x = rng.standard_normal(200)
            power = power_spectrum(x, nfft)
            centered = x - x.mean()
            lhs = np.sum(centered ** 2)
            rhs = power.sum() / nfft
            assert rhs == pytest.approx(lhs, rel=1e-9)

    def test_scale_invariance(self):
        rng = np.random.default_rng(5)
        x = rng.standard_normal(300)
        a = psd_normalized(Waveform(x, 30.0), nfft=512)
        b = psd_normalized(Waveform(7.25 * x, 30.0), nfft=512)
        assert np.argmax(a.power) == np.argmax(b.power)
        np.testing.assert_allclose(a.power, b.power, atol=1e-12)

    def test_nfft_too_short_rejected(self):
        with pytest.raises(InvalidArgumentError):
            psd_normalized(sine_wave(1.0, 30.0, 10.0), nfft=100)


class TestHilbertEnvelope:
    def test_sine_envelope_is_amplitude(self):
        w = sine_wave(2.0, 90.0, 5.0, amplitude=2.0)
        env = hilbert_envelope(w).samples
        edge = int(0.05 * len(env))
        interior = env[edge:-edge]
        assert np.all(np.abs(interior - 2.0) < 0.04)

    def test_zero_signal(self):
        env = hilbert_envelope(Waveform(np.zeros(64), 30.0))
        np.testing.assert_array_equal(env.samples, 0.0)

    def test_am_modulated_sine_tracks_modulator(self):
        fps, dur = 100.0, 20.0
        t = np.arange(int(fps * dur)) / fps
        modulator = 1.0 + 0.5 * np.cos(2 * np.pi * 0.2 * t)
        x = modulator * np.sin(2 * np.pi * 8.0 * t)
        env = hilbert_envelope(Waveform(x, fps)).samples
        edge = int(0.1 * len(env))
        rel = np.abs(env[edge:-edge] - modulator[edge:-edge]) / modulator[edge:-edge]
        assert rel.max() < 0.03

    def test_envelope_dominates_signal(self):
        rng = np.random.default_rng(2)
        x = rng.standard_normal(256)
        w = Waveform(x, 30.0)
        env = hilbert_envelope(w).samples
        edge = int(0.05 * len(x))
        assert np.all(env[edge:-edge] >= np.abs(x[edge:-edge]) - 1e-9)


class TestResampleCubic:
    def test_sine_upsample_matches_analytic(self):
        # oracle: analytic sine; interior error grows ~f^4, values frozen from
        # the oracle itself (4 Hz at 30 fps sits just above 1e-3)
        for freq, bound in [(1.0, 1e-4), (2.0, 1e-4), (3.0, 5e-4), (4.0, 1.5e-3)]:
            fps, dur = 30.0, 10.0
            t = np.arange(int(dur * fps) + 1) / fps
            w = Waveform(np.sin(2 * np.pi * freq * t + 0.3), fps)
            res = resample_cubic(w, 90.0)
            expect = np.sin(2 * np.pi * freq * res.times + 0.3)
            edge = int(0.05 * len(res))
            assert np.abs(res.samples[edge:-edge] - expect[edge:-edge]).max() < bound

    def test_identity_when_fps_matches(self):
        w = sine_wave(1.0, 30.0, 4.0)
        res = resample_cubic(w, 30.0)
        np.testing.assert_array_equal(res.samples, w.samples)

    def test_linear_ramp_stays_linear(self):
        fps = 20.0
        t = np.arange(80) / fps
        w = Waveform(3.0 * t - 1.0, fps)
        res = resample_cubic(w, 50.0)
        np.testing.assert_allclose(res.samples, 3.0 * res.times - 1.0, atol=1e-9)

    def test_round_trip_reproduces_interior(self):
        fps = 30.0
        t = np.arange(300) / fps
        x = np.sin(2 * np.pi * 3.0 * t) + 0.5 * np.sin(2 * np.pi * 6.0 * t)
        up = resample_cubic(Waveform(x, fps), 90.0)
        back = resample_cubic(up, fps)
        n = min(len(back), len(t))
        edge = int(0.05 * n)
        assert np.abs(back.samples[edge:n - edge] - x[edge:n - edge]).max() < 1e-3

    def test_too_short_rejected(self):
        with pytest.raises(InsufficientDataError):
            resample_cubic(Waveform(np.array([0.0, 1.0, 2.0]), 10.0), 20.0)


class TestStandardize:
    def test_basic(self):
        out = standardize(Waveform(np.array([1.0, 2.0, 3.0]), 10.0))
        assert abs(out.samples.mean()) < 1e-12
        assert out.samples.std() == pytest.approx(1.0, abs=1e-12)

    def test_constant_flags_degenerate(self):
        out = standardize(Waveform(np.full(5, 5.0), 10.0))
        assert out.degenerate
        np.testing.assert_array_equal(out.samples, 0.0)

    def test_affine_invariance(self):
        rng = np.random.default_rng(9)
        x = rng.standard_normal(100)
        a = standardize(Waveform(x, 10.0)).samples
        b = standardize(Waveform(2.5 * x + 4.0, 10.0)).samples
        np.testing.assert_allclose(a, b, atol=1e-12)


class TestSpatialMeanTrace:
    def test_uniform_frames(self):
        cube = VideoCube(np.full((5, 4, 4, 3), 0.5), 30.0)
        trace = spatial_mean_trace(cube)
        assert trace.shape == (5, 3)
        np.testing.assert_allclose(trace, 0.5)

    def test_half_half_frame(self):
        frame = np.array([[0.0, 0.0], [1.0, 1.0]])[:, :, None]
        cube = VideoCube(np.stack([frame, frame]), 30.0)
        np.testing.assert_allclose(spatial_mean_trace(cube), 0.5)

    def test_global_signal_passes_through(self):
        g = np.linspace(0.2, 0.8, 20)
        cube = VideoCube(np.ones((20, 3, 3, 1)) * g[:, None, None, None], 30.0)
        np.testing.assert_allclose(spatial_mean_trace(cube)[:, 0], g)


def test_bandpass_brickwall_removes_out_of_band():
    fps = 90.0
    t = np.arange(900) / fps
    x = np.sin(2 * np.pi * 1.5 * t) + np.sin(2 * np.pi * 10.0 * t)
    out = bandpass_brickwall(Waveform(x, fps), (40.0, 240.0))
    # analyze on the native grid so zero-padding leakage cannot reappear
    psd = psd_normalized(out, nfft=900, band_bpm=(1.0, 2690.0))
    freqs = psd.freqs_bpm
    assert psd.power[freqs > 300.0].sum() < 1e-12
    assert psd.peak_bpm == pytest.approx(90.0)
