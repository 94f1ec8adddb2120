"""Measured transmittance series: parsing, histograms, and model fitting.

Input files are plain UTF-8 text with one intensity-transmittance sample per
line ('#' starts a comment line, blank lines are skipped, LF or CRLF both
work).  An optional reference value divides the raw readings, so detector
voltages can be brought to the [0, 1] transmittance scale without external
calibration.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .channel import BeamGeometry, pdt_cdf, weibull_params

# values this far outside [0, 1] are treated as edge noise and clamped
EDGE_TOLERANCE = 0.01

# fit search rectangle: (sigma_b2, a_over_W)
FIT_BOUNDS = ((1e-3, 2.0), (0.2, 4.0))

# spread over the rectangle; simplex search is local, so several restarts
_FIT_STARTS = ((0.05, 0.5), (0.3, 1.0), (0.8, 2.0), (0.15, 3.0))

SMALL_SERIES_WARN = 1000


class SeriesFormatError(ValueError):
    """Raised when a transmittance file cannot be parsed or validated."""

    def __init__(self, message, line_number=None):
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)
        self.line_number = line_number


@dataclass(frozen=True)
class TransmittanceSeries:
    """A validated sequence of intensity-transmittance samples.

    Attributes
    ----------
    samples : ndarray
        Transmittance values, each in [0, 1].
    source_label : str
        Free-text origin of the data (file name, generator settings).
    """

    samples: np.ndarray
    source_label: str = ""

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=float)
        if samples.ndim != 1 or samples.size < 1:
            raise ValueError("series must hold at least one sample")
        if np.any(~np.isfinite(samples)):
            raise ValueError("series contains non-finite samples")
        lo, hi = float(samples.min()), float(samples.max())
        if lo < 0.0 or hi > 1.0:
            raise ValueError(f"samples must lie in [0, 1], found [{lo}, {hi}]")
        object.__setattr__(self, "samples", samples)

    @property
    def count(self) -> int:
        return int(self.samples.size)


@dataclass(frozen=True)
class Histogram:
    """Uniform-width histogram of a transmittance series."""

    bin_edges: np.ndarray
    counts: np.ndarray

    def __post_init__(self):
        edges = np.asarray(self.bin_edges, dtype=float)
        counts = np.asarray(self.counts, dtype=int)
        if edges.ndim != 1 or edges.size < 3:
            raise ValueError("need at least two bins")
        if np.any(np.diff(edges) <= 0):
            raise ValueError("bin edges must be strictly ascending")
        if counts.size != edges.size - 1:
            raise ValueError("counts length must be number of bins")
        if np.any(counts < 0):
            raise ValueError("counts must be non-negative")
        object.__setattr__(self, "bin_edges", edges)
        object.__setattr__(self, "counts", counts)

    @property
    def total(self) -> int:
        return int(self.counts.sum())


def parse_series(stream, reference=None, label="") -> TransmittanceSeries:
    """Read one transmittance sample per line from a text or byte stream.

    Parameters
    ----------
    stream : file-like or str or bytes
        The raw data.  File-like objects may yield str or bytes.
    reference : float, optional
        Positive normalization constant; raw values are divided by it.
    label : str, optional
        Stored as the series source label.

    Returns
    -------
    TransmittanceSeries

    Raises
    ------
    SeriesFormatError
        On an unparsable line, a value outside the [0, 1] tolerance band,
        or an empty stream; the message names the offending line.
    """
    if reference is not None and not (np.isfinite(reference) and reference > 0):
        raise SeriesFormatError(f"reference must be positive, got {reference}")
    if hasattr(stream, "read"):
        raw = stream.read()
    else:
        raw = stream
    if isinstance(raw, bytes):
        try:
            raw = raw.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise SeriesFormatError(f"input is not valid UTF-8: {exc}") from None

    values = []
    for number, line in enumerate(raw.splitlines(), start=1):
        text = line.strip()
        if not text or text.startswith("#"):
            continue
        try:
            value = float(text)
        except ValueError:
            raise SeriesFormatError(f"cannot parse {text!r}", number) from None
        if not math.isfinite(value):
            raise SeriesFormatError(f"non-finite value {text!r}", number)
        if reference is not None:
            value /= reference
        if value < -EDGE_TOLERANCE or value > 1.0 + EDGE_TOLERANCE:
            raise SeriesFormatError(
                f"value {value} outside [{-EDGE_TOLERANCE}, {1.0 + EDGE_TOLERANCE}]",
                number)
        values.append(min(max(value, 0.0), 1.0))
    if not values:
        raise SeriesFormatError("no samples found")
    return TransmittanceSeries(np.array(values), source_label=label)


def histogram(series: TransmittanceSeries, bins: int, value_range=None) -> Histogram:
    """Bin a series into `bins` uniform-width bins.

    The default range is [0, max sample]; samples outside an explicit range
    are dropped from the counts.
    """
    if bins < 2:
        raise ValueError(f"bins must be >= 2, got {bins}")
    if value_range is None:
        hi = float(series.samples.max())
        value_range = (0.0, hi if hi > 0.0 else 1.0)
    lo, hi = float(value_range[0]), float(value_range[1])
    if hi <= lo:
        raise ValueError(f"empty histogram range [{lo}, {hi}]")
    counts, edges = np.histogram(series.samples, bins=bins, range=(lo, hi))
    return Histogram(bin_edges=edges, counts=counts)


@dataclass(frozen=True)
class FitResult:
    """Outcome of fitting the wandering-beam model to a measured series."""

    geometry: BeamGeometry
    gof: float
    boundary: bool = False


def _cdf_distance(t_sorted: np.ndarray, t_grid: np.ndarray,
                  sigma_b2: float, a_over_W: float) -> float:
    params = weibull_params(a_over_W)
    model = pdt_cdf(t_grid, params, sigma_b2)
    empirical = np.searchsorted(t_sorted, t_grid, side="right") / t_sorted.size
    return float(np.mean((empirical - model) ** 2))


def fit_geometry(series: TransmittanceSeries) -> FitResult:
    """Fit (sigma_b2, a_over_W) to a series by empirical-CDF distance.

    The objective is the mean squared difference between the empirical CDF
    of T = sqrt(eta) and the model CDF on a fixed grid, minimized with a
    derivative-free simplex search restarted from several starting points.
    The result is flagged `boundary` when the optimum sits on the edge of
    the search rectangle.

    A constant series is degenerate: it pins sigma_b2 = 0 and inverts the
    maximum-transmittance formula for a_over_W.
    """
    if series.count < SMALL_SERIES_WARN:
        warnings.warn(
            f"fitting {series.count} samples; at least {SMALL_SERIES_WARN} "
            "recommended for a stable fit", UserWarning, stacklevel=2)

    eta = series.samples
    if float(eta.max()) - float(eta.min()) == 0.0:
        eta0 = float(eta[0])
        if not 0.0 < eta0 < 1.0:
            raise ValueError(
                f"constant series at eta = {eta0} has no finite geometry")
        a_over_W = math.sqrt(-math.log1p(-eta0) / 2.0)
        return FitResult(BeamGeometry(a_over_W=a_over_W, sigma_b2=0.0), 0.0)

    t_sorted = np.sort(np.sqrt(eta))
    t_grid = np.linspace(0.0, 1.0, 513)[1:]

    def objective(x):
        return _cdf_distance(t_sorted, t_grid, x[0], x[1])

    best = None
    for start in _FIT_STARTS:
        res = minimize(objective, x0=np.array(start), method="Nelder-Mead",
                       bounds=FIT_BOUNDS,
                       options={"xatol": 1e-6, "fatol": 1e-12, "maxiter": 2000})
        if best is None or res.fun < best.fun:
            best = res
    sigma_b2, a_over_W = (float(v) for v in best.x)
    on_edge = any(
        abs(v - lo) < 1e-9 or abs(v - hi) < 1e-9
        for v, (lo, hi) in zip((sigma_b2, a_over_W), FIT_BOUNDS))
    return FitResult(BeamGeometry(a_over_W=a_over_W, sigma_b2=sigma_b2),
                     gof=float(best.fun), boundary=on_edge)
