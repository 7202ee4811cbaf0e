import numpy as np
import pytest

from qchaos import (
    ChaosReportRow,
    UndefinedExponentError,
    chaos_report,
    delay_embed,
    dominant_peaks,
    largest_lyapunov,
    periodogram,
    spectral_flatness,
    top_peak_power_fraction,
)


# --------------------------------------------------------------- spectra

def test_single_tone_peak_location():
    t = np.arange(4096) * 0.05
    spec = periodogram(np.sin(2 * np.pi * 1.7 * t), 0.05)
    f_peak = spec.peaks[0][0]
    df = spec.freqs[1] - spec.freqs[0]
    assert abs(f_peak - 1.7) <= df
    assert len(dominant_peaks(spec)) == 1


def test_two_tone_peaks():
    t = np.arange(8192) * 0.05
    x = np.sin(2 * np.pi * 1.1 * t) + 0.8 * np.sin(2 * np.pi * 2.9 * t)
    spec = periodogram(x, 0.05)
    dom = dominant_peaks(spec)
    assert len(dom) == 2
    found = sorted(f for f, _ in dom)
    assert found[0] == pytest.approx(1.1, abs=0.01)
    assert found[1] == pytest.approx(2.9, abs=0.01)
    assert top_peak_power_fraction(spec) > 0.5


def test_parseval_consistency():
    rng = np.random.default_rng(0)
    x = rng.normal(size=5000)
    spec = periodogram(x, 0.1)
    xw = (x - x.mean()) * np.hanning(x.size)
    assert spec.power.sum() == pytest.approx(np.var(xw), rel=1e-2)


def test_periodogram_rejects_short_series():
    with pytest.raises(ValueError):
        periodogram(np.ones(32), 0.1)


def test_flatness_tone_vs_noise():
    t = np.arange(4096) * 0.05
    tone = periodogram(np.sin(2 * np.pi * 1.3 * t), 0.05)
    assert spectral_flatness(tone) < 0.05
    for seed in range(100):
        rng = np.random.default_rng(seed)
        noise = periodogram(rng.normal(size=4096), 0.05)
        assert spectral_flatness(noise) > 0.5


def test_flatness_matches_result_field():
    rng = np.random.default_rng(1)
    spec = periodogram(rng.normal(size=1024), 1.0)
    assert spec.flatness == pytest.approx(spectral_flatness(spec))


# --------------------------------------------------------------- embedding

def test_embed_identity_for_d1():
    x = np.arange(20.0)
    emb = delay_embed(x, 1, 3)
    assert emb.shape == (20, 1)
    assert np.array_equal(emb[:, 0], x)


def test_embed_count_and_content():
    x = np.arange(100.0)
    d, tau = 4, 7
    emb = delay_embed(x, d, tau)
    assert emb.shape == (100 - (d - 1) * tau, d)
    assert np.array_equal(emb[0], x[0:(d - 1) * tau + 1:tau])
    assert np.array_equal(emb[-1], x[len(emb) - 1::tau][:d])


def test_embedded_sinusoid_has_rank_two():
    t = np.arange(3000) * 0.05
    emb = delay_embed(np.sin(2 * np.pi * 0.9 * t), 6, 5)
    svals = np.linalg.svd(emb - emb.mean(axis=0), compute_uv=False)
    assert svals[2] < 1e-6 * svals[0]


def test_embed_validation():
    with pytest.raises(ValueError):
        delay_embed(np.arange(10.0), 4, 5)
    with pytest.raises(ValueError):
        delay_embed(np.arange(10.0), 0, 1)


# --------------------------------------------------------------- exponents

def test_sinusoid_exponent_is_zero():
    t = np.arange(20001) * 0.1
    res = largest_lyapunov(np.sin(2 * np.pi * 0.23 * t), 0.1, k_max=800)
    assert abs(res.slope) < 0.01
    assert res.slope == pytest.approx(np.median(res.per_delay_slopes))


def test_logistic_map_exponent():
    x = 0.4
    burn, keep = 1000, 5000
    xs = []
    for i in range(burn + keep):
        x = 4.0 * x * (1.0 - x)
        if i >= burn:
            xs.append(x)
    xs = np.array(xs)
    # independent oracle: orbit average of ln |f'(x)| (analytic value ln 2)
    oracle = float(np.mean(np.log(np.abs(4.0 - 8.0 * xs))))
    assert oracle == pytest.approx(np.log(2.0), rel=5e-3)
    res = largest_lyapunov(xs, 1.0, d=2, taus=[1], k_max=60)
    assert res.slope == pytest.approx(np.log(2.0), rel=0.15)
    assert res.slope == pytest.approx(oracle, rel=0.15)


def test_exponent_determinism():
    t = np.arange(6000) * 0.1
    x = np.sin(2 * np.pi * 0.31 * t) + 0.3 * np.sin(2 * np.pi * 0.11 * t)
    a = largest_lyapunov(x, 0.1, k_max=300)
    b = largest_lyapunov(x, 0.1, k_max=300)
    assert a.slope == b.slope
    assert a.per_delay_slopes == b.per_delay_slopes


def test_exponent_errors():
    with pytest.raises(UndefinedExponentError):
        largest_lyapunov(np.ones(5000), 0.1)
    with pytest.raises(ValueError):
        largest_lyapunov(np.sin(np.arange(500) * 0.3), 0.1)


def test_divergence_curve_shapes():
    t = np.arange(4000) * 0.1
    res = largest_lyapunov(np.sin(2 * np.pi * 0.4 * t) + 0.2 * np.sin(t), 0.1,
                           taus=[5, 10], k_max=200)
    assert res.delays == [5, 10]
    assert set(res.divergence_curves) == {5, 10}
    assert all(len(c) == 201 for c in res.divergence_curves.values())
    assert len(res.per_delay_slopes) == 2


# --------------------------------------------------------------- report

def test_empty_report():
    text, csv_text = chaos_report([])
    assert csv_text.strip() == "slave_ic,uncontrolled,controlled,master_ic"
    assert len(text.splitlines()) == 2   # header + rule only


def test_report_layout():
    rows = [
        ChaosReportRow((0.4, 0, 0.4, 0), (2, 0, 2, 0), 0.01, 0.0015),
        ChaosReportRow((1.1, 0, 0, 0), (2, 0, 2, 0), 0.148, 0.004),
        ChaosReportRow((1.1, 0, 1, 0), None, 0.294, None),
    ]
    text, csv_text = chaos_report(rows)
    lines = text.splitlines()
    assert len(lines) == 5
    assert "0.0100" in lines[2] and "0.0015" in lines[2]
    csv_lines = csv_text.splitlines()
    assert len(csv_lines) == 4
    assert csv_lines[1].startswith('"[0.4, 0, 0.4, 0]"')
