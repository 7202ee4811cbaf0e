"""Chaos diagnostics: periodogram spectra, delay embedding, largest Lyapunov exponent.

The exponent estimator is Rosenstein-style: delay-embed the scalar series,
find each point's nearest neighbor outside a temporal exclusion window,
track the scalar separation forward in time, and fit the initial slope of
the mean log-divergence curve. The slope over a delay sweep is reported as
the median, per unit dimensionless time.
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from scipy.spatial import cKDTree

from .errors import UndefinedExponentError

#: dominance cut relative to the strongest peak, dB
DOMINANT_REL_DB = 20.0
#: adjacent local maxima closer than this many bins are merged into one peak
PEAK_GUARD_BINS = 3
#: mean-log divergence curves flattening by less than this range carry no
#: exponential growth; their exponent is read off the flat tail
RANGE_FLOOR_NATS = 1.5

MIN_SERIES_LEN = 64
MIN_LLE_LEN = 2000


@dataclass
class SpectrumResult:
    """One-sided periodogram with peak list and spectral flatness."""

    freqs: np.ndarray                      # cycles per dimensionless time, DC dropped
    power: np.ndarray
    peaks: List[Tuple[float, float]]       # (freq, power), sorted by power descending
    flatness: float


def periodogram(series: Sequence[float], dt_sample: float) -> SpectrumResult:
    """Mean-removed, Hann-windowed periodogram.

    Power is normalized so that sum(power) equals the variance of the
    windowed series exactly (Parseval; the DC bin is dropped). Peaks are
    local maxima above the median power.
    """
    x = np.asarray(series, dtype=float)
    if x.size < MIN_SERIES_LEN:
        raise ValueError(f"series too short for a periodogram: {x.size} < {MIN_SERIES_LEN}")
    if dt_sample <= 0:
        raise ValueError("dt_sample must be positive")
    n = x.size
    xw = (x - x.mean()) * np.hanning(n)
    spec = np.abs(np.fft.rfft(xw)) ** 2
    scale = np.full(spec.shape, 2.0)
    scale[0] = 1.0
    if n % 2 == 0:
        scale[-1] = 1.0
    power = (spec * scale / (n * n))[1:]
    freqs = np.fft.rfftfreq(n, dt_sample)[1:]
    peaks = _local_peaks(freqs, power)
    return SpectrumResult(freqs=freqs, power=power, peaks=peaks,
                          flatness=_flatness(power))


def _local_peaks(freqs: np.ndarray, power: np.ndarray) -> List[Tuple[float, float]]:
    med = float(np.median(power))
    idx = np.where((power[1:-1] > power[:-2]) & (power[1:-1] > power[2:])
                   & (power[1:-1] > med))[0] + 1
    order = idx[np.argsort(power[idx])[::-1]]
    return [(float(freqs[i]), float(power[i])) for i in order]


def _flatness(power: np.ndarray) -> float:
    pos = power[power > 0]
    if pos.size == 0:
        return 0.0
    return float(np.exp(np.mean(np.log(pos))) / np.mean(pos))


def spectral_flatness(spec: SpectrumResult) -> float:
    """Geometric over arithmetic mean of the power bins, in [0, 1]."""
    return _flatness(spec.power)


def dominant_peaks(spec: SpectrumResult, rel_db: float = DOMINANT_REL_DB,
                   guard_bins: int = PEAK_GUARD_BINS) -> List[Tuple[float, float]]:
    """Peaks within rel_db of the strongest one, de-duplicated by a bin guard.

    Local maxima closer than guard_bins bins to an already-kept stronger
    peak are treated as sidelobes of it and dropped.
    """
    if not spec.peaks:
        return []
    df = spec.freqs[1] - spec.freqs[0]
    floor = spec.peaks[0][1] * 10.0 ** (-rel_db / 10.0)
    kept: List[Tuple[float, float]] = []
    for f, p in spec.peaks:
        if p < floor:
            break
        if all(abs(f - fk) > guard_bins * df for fk, _ in kept):
            kept.append((f, p))
    return kept


def top_peak_power_fraction(spec: SpectrumResult, n_peaks: int = 2) -> float:
    """Fraction of total power carried by the n strongest peak bins."""
    total = float(spec.power.sum())
    if total == 0 or not spec.peaks:
        return 0.0
    return float(sum(p for _, p in spec.peaks[:n_peaks]) / total)


def delay_embed(series: Sequence[float], d: int, tau: int) -> np.ndarray:
    """Delay-coordinate vectors (x_t, x_{t+tau}, ..., x_{t+(d-1)tau}); shape (N-(d-1)tau, d)."""
    x = np.asarray(series, dtype=float)
    if d < 1 or tau < 1:
        raise ValueError("need d >= 1 and tau >= 1")
    span = (d - 1) * tau
    if x.size <= span:
        raise ValueError(f"series of length {x.size} too short for d={d}, tau={tau}")
    if d == 1:
        return x[:, None].copy()
    return np.lib.stride_tricks.sliding_window_view(x, span + 1)[:, ::tau].copy()


@dataclass
class LleResult:
    """Largest-Lyapunov-exponent estimate over a delay sweep."""

    embed_dim: int
    delays: List[int]
    divergence_curves: Dict[int, np.ndarray]   # per delay: mean log divergence vs step
    per_delay_slopes: List[float]
    slope: float                               # median of per_delay_slopes, per unit time
    theiler_window: int


def mean_period_samples(series: np.ndarray) -> int:
    """Mean oscillation period in samples, from zero crossings of the centered series."""
    x = series - series.mean()
    crossings = int(np.count_nonzero(np.signbit(x[:-1]) != np.signbit(x[1:])))
    if crossings == 0:
        return len(x)
    return int(np.ceil(2.0 * len(x) / crossings))


def _divergence_curve(x: np.ndarray, d: int, tau: int, theiler: int,
                      k_max: int) -> Optional[np.ndarray]:
    """Mean log scalar separation of nearest-neighbor pairs, tracked k steps ahead.

    Neighbors are nearest in the d-dimensional embedding under a temporal
    exclusion of theiler samples; separation is tracked on the raw series at
    the leading edge of the embedding window.
    """
    span = (d - 1) * tau
    m = x.size - span
    if m - k_max < 50:
        return None
    emb = delay_embed(x, d, tau)
    usable = m - k_max
    tree = cKDTree(emb)
    k_query = min(2 * theiler + 2, m)
    dist, idx = tree.query(emb[:usable], k=k_query)
    rows = np.arange(usable)[:, None]
    valid = (np.abs(idx - rows) > theiler) & (idx + k_max < m) & (dist > 0)
    first = np.argmax(valid, axis=1)
    ok = valid[np.arange(usable), first]
    if not np.any(ok):
        return None
    i_idx = np.arange(usable)[ok] + span
    j_idx = idx[np.arange(usable), first][ok] + span
    curve = np.empty(k_max + 1)
    for k in range(k_max + 1):
        sep = np.abs(x[i_idx + k] - x[j_idx + k])
        sep = sep[sep > 0]
        curve[k] = np.log(sep).mean() if sep.size else -np.inf
    return curve


def _fit_slope(curve: np.ndarray, dt_sample: float, fit_fraction: float,
               range_floor: float) -> float:
    """Slope of the initial linear region, or of the flat tail for saturated curves.

    A curve whose total rise stays under range_floor nats never left the
    neighbor-distance envelope (no exponential growth at neighbor scale):
    its exponent is the least-squares slope of the region past flattening.
    Otherwise the fit covers the first fit_fraction of the curve, cut short
    at flattening (within 0.5 nats of the saturation level).
    """
    k_last = len(curve) - 1
    tail = curve[-max(5, (k_last + 1) // 4):]
    y_sat = float(tail.mean())
    rise = y_sat - curve[0]
    if rise < range_floor:
        flat = np.where(curve >= y_sat - 0.25)[0]
        k0 = int(flat[0]) if flat.size else 0
        kk = np.arange(k0, k_last + 1) * dt_sample
        return float(np.polyfit(kk, curve[k0:], 1)[0])
    k_end = max(4, int(round(fit_fraction * k_last)))
    above = np.where(curve >= y_sat - 0.5)[0]
    if above.size and above[0] > 4:
        k_end = min(k_end, int(above[0]))
    kk = np.arange(k_end + 1) * dt_sample
    return float(np.polyfit(kk, curve[:k_end + 1], 1)[0])


def largest_lyapunov(series: Sequence[float], dt_sample: float, d: int = 6,
                     taus: Iterable[int] = range(5, 16), k_max: int = 600,
                     fit_fraction: float = 0.1,
                     theiler: Optional[int] = None) -> LleResult:
    """Largest Lyapunov exponent of a scalar series, per unit dimensionless time.

    Parameters
    ----------
    series : real scalar time series (the real-axis component of a trajectory)
    dt_sample : sampling interval of the series
    d : embedding dimension
    taus : delay sweep, in samples; the reported slope is the median over it
    k_max : length of the divergence curves, in samples
    theiler : temporal exclusion window; defaults to one mean period
    """
    x = np.asarray(series, dtype=float)
    if x.size < MIN_LLE_LEN:
        raise ValueError(f"series too short for LLE: {x.size} < {MIN_LLE_LEN}")
    if np.ptp(x) == 0.0:
        raise UndefinedExponentError("series is constant; exponent undefined")
    delays = [int(t) for t in taus]
    if not delays:
        raise ValueError("need at least one delay")
    window = mean_period_samples(x) if theiler is None else int(theiler)
    curves: Dict[int, np.ndarray] = {}
    slopes: List[float] = []
    for tau in delays:
        km = min(k_max, x.size - (d - 1) * tau - 100)
        if km < 20:
            raise ValueError(f"series too short for tau={tau} at d={d}")
        curve = _divergence_curve(x, d, tau, window, km)
        if curve is None:
            raise UndefinedExponentError(f"no usable neighbor pairs at tau={tau}")
        curves[tau] = curve
        slopes.append(_fit_slope(curve, dt_sample, fit_fraction, RANGE_FLOOR_NATS))
    return LleResult(embed_dim=d, delays=delays, divergence_curves=curves,
                     per_delay_slopes=slopes, slope=float(np.median(slopes)),
                     theiler_window=window)


@dataclass
class ChaosReportRow:
    slave_ic: Tuple[float, float, float, float]
    master_ic: Optional[Tuple[float, float, float, float]]
    uncontrolled: Optional[float]
    controlled: Optional[float]


def chaos_report(rows: Sequence[ChaosReportRow]) -> Tuple[str, str]:
    """Before/after exponent comparison table, as aligned text and as CSV."""
    header = ("initial position (slave)", "uncontrolled", "controlled",
              "initial position (master)")
    table: List[Tuple[str, str, str, str]] = []
    for row in rows:
        table.append((
            _fmt_ic(row.slave_ic),
            "" if row.uncontrolled is None else f"{row.uncontrolled:.4f}",
            "" if row.controlled is None else f"{row.controlled:.4f}",
            "" if row.master_ic is None else _fmt_ic(row.master_ic),
        ))
    widths = [max(len(header[j]), *(len(r[j]) for r in table)) if table else len(header[j])
              for j in range(4)]
    lines = ["  ".join(h.ljust(w) for h, w in zip(header, widths)).rstrip()]
    lines.append("  ".join("-" * w for w in widths))
    for r in table:
        lines.append("  ".join(v.ljust(w) for v, w in zip(r, widths)).rstrip())
    text = "\n".join(lines) + "\n"
    buf = io.StringIO()
    buf.write("slave_ic,uncontrolled,controlled,master_ic\n")
    for row in table:
        buf.write(",".join('"%s"' % v if "," in v else v for v in row) + "\n")
    return text, buf.getvalue()


def _fmt_ic(ic: Tuple[float, float, float, float]) -> str:
    return "[" + ", ".join("%g" % v for v in ic) + "]"


def spectrum_csv(spec: SpectrumResult) -> str:
    buf = io.StringIO()
    buf.write("freq,power\n")
    for f, p in zip(spec.freqs, spec.power):
        buf.write("%.17g,%.17g\n" % (f, p))
    return buf.getvalue()


def divergence_csv(result: LleResult, dt_sample: float) -> str:
    buf = io.StringIO()
    buf.write("step,t," + ",".join(f"tau_{tau}" for tau in result.delays) + "\n")
    k_len = min(len(c) for c in result.divergence_curves.values())
    for k in range(k_len):
        vals = [result.divergence_curves[tau][k] for tau in result.delays]
        buf.write("%d,%.17g," % (k, k * dt_sample))
        buf.write(",".join("%.17g" % v for v in vals) + "\n")
    return buf.getvalue()
