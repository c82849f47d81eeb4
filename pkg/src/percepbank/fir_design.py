"""
Windowed-sinc bandpass FIR design and frequency-response evaluation.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .bank_layout import BandSpec, BankPreset, WindowKind
from .errors import DesignError, DomainError, FeasibilityWarning

DEFAULT_TAPS = 63
DEFAULT_SAMPLE_RATE = 50e6
DB_FLOOR = -300.0

# Main-lobe transition width, in units of sample_rate / n_taps.
TRANSITION_FACTOR = {WindowKind.HAMMING: 3.3, WindowKind.BARTLETT: 6.1}


@dataclass(frozen=True)
class FirFilter:
    coefficients: np.ndarray = field(repr=False)
    sample_rate: float
    band: Optional[BandSpec] = None
    window: Optional[WindowKind] = None

    def __post_init__(self):
        coeffs = np.asarray(self.coefficients, dtype=np.float64)
        if coeffs.ndim != 1 or coeffs.size == 0:
            raise DomainError("coefficients must be a non-empty 1-D vector")
        if self.sample_rate <= 0:
            raise DomainError("sample_rate must be positive")
        coeffs.setflags(write=False)
        object.__setattr__(self, "coefficients", coeffs)

    @property
    def n_taps(self) -> int:
        return self.coefficients.size

    def is_symmetric(self) -> bool:
        return bool(np.array_equal(self.coefficients, self.coefficients[::-1]))


@dataclass(frozen=True)
class FrequencyResponse:
    frequencies: np.ndarray
    magnitude_db: np.ndarray
    phase: np.ndarray

    def magnitude_at(self, freq_hz: float) -> float:
        """Magnitude in dB at the grid point nearest ``freq_hz``."""
        return float(self.magnitude_db[np.argmin(np.abs(self.frequencies - freq_hz))])


def _window_kind(kind) -> WindowKind:
    try:
        return WindowKind(str(getattr(kind, "value", kind)).lower())
    except ValueError:
        raise DomainError(f"unknown window {kind!r}") from None


def window_weights(kind, n_taps: int) -> np.ndarray:
    """Bartlett (triangle) or Hamming (0.54/0.46) taper of odd length >= 3."""
    kind = _window_kind(kind)
    if n_taps < 3 or n_taps % 2 == 0:
        raise DomainError(f"n_taps must be odd and >= 3, got {n_taps}")
    n = np.arange(n_taps)
    half = (n_taps - 1) / 2
    if kind is WindowKind.BARTLETT:
        w = 1.0 - np.abs(n - half) / half
    else:
        w = 0.54 - 0.46 * np.cos(2.0 * np.pi * n / (n_taps - 1))
    # Mirror so symmetry is exact regardless of cos() rounding.
    w[n_taps // 2 + 1:] = w[: n_taps // 2][::-1]
    return w


def ideal_bandpass(lower: float, upper: float, sample_rate: float, n_taps: int) -> np.ndarray:
    """Truncated ideal bandpass impulse response centred at ``(n_taps - 1) / 2``."""
    if n_taps < 1 or n_taps % 2 == 0:
        raise DomainError(f"n_taps must be odd and positive, got {n_taps}")
    nyquist = sample_rate / 2
    if not 0 < lower < upper < nyquist:
        raise DesignError(
            f"band {lower:g}-{upper:g} Hz must satisfy 0 < lower < upper < Nyquist ({nyquist:g} Hz)"
        )
    w_lo = 2.0 * np.pi * lower / sample_rate
    w_hi = 2.0 * np.pi * upper / sample_rate
    mid = (n_taps - 1) // 2
    k = np.arange(1, mid + 1, dtype=np.float64)
    side = (np.sin(w_hi * k) - np.sin(w_lo * k)) / (np.pi * k)
    h = np.empty(n_taps)
    h[mid] = (w_hi - w_lo) / np.pi
    h[mid + 1:] = side
    h[:mid] = side[::-1]
    return h


def transition_width(window, n_taps: int, sample_rate: float) -> float:
    return TRANSITION_FACTOR[_window_kind(window)] * sample_rate / n_taps


def is_well_conditioned(band: BandSpec, window, n_taps: int, sample_rate: float) -> bool:
    return band.bandwidth >= transition_width(window, n_taps, sample_rate)


def design_bandpass(band: BandSpec, window, n_taps: int = DEFAULT_TAPS,
                    sample_rate: float = DEFAULT_SAMPLE_RATE, taper=None,
                    normalize: bool = False) -> FirFilter:
    """Windowed-sinc bandpass for ``band``.

    ``taper`` overrides the window weights (length ``n_taps``); it exists so
    the prototype can be checked in isolation. ``normalize`` divides by the
    peak response magnitude.

    A :class:`FeasibilityWarning` is emitted when the band is narrower than
    the window's transition width.
    """
    window = _window_kind(window)
    h = ideal_bandpass(band.lower_cutoff, band.upper_cutoff, sample_rate, n_taps)
    if taper is None:
        weights = window_weights(window, n_taps)
    else:
        weights = np.asarray(taper, dtype=np.float64)
        if weights.shape != h.shape:
            raise DomainError("taper length must equal n_taps")
    h = h * weights
    if not is_well_conditioned(band, window, n_taps, sample_rate):
        warnings.warn(
            f"band {band.lower_cutoff:g}-{band.upper_cutoff:g} Hz is narrower than the "
            f"{window.value} transition width {transition_width(window, n_taps, sample_rate):g} Hz "
            f"at {n_taps} taps",
            FeasibilityWarning,
            stacklevel=2,
        )
    if normalize:
        peak = np.max(np.abs(np.fft.rfft(h, 16 * n_taps)))
        if peak > 0:
            h = h / peak
    return FirFilter(h, float(sample_rate), band, window)


def frequency_response(filt, n_points: int = 1024, db_floor: float = DB_FLOOR) -> FrequencyResponse:
    """Evaluate ``H(w) = sum h[n] exp(-i w n)`` on ``n_points`` points over ``[0, pi]``."""
    if n_points < 2:
        raise DomainError("n_points must be >= 2")
    h = filt.coefficients
    omega = np.linspace(0.0, np.pi, n_points)
    n = np.arange(h.size)
    H = np.exp(-1j * np.outer(omega, n)) @ h
    mag = np.abs(H)
    with np.errstate(divide="ignore"):
        db = np.where(mag > 0, 20.0 * np.log10(np.where(mag > 0, mag, 1.0)), db_floor)
    db = np.maximum(db, db_floor)
    freqs = np.linspace(0.0, filt.sample_rate / 2.0, n_points)
    return FrequencyResponse(freqs, db, np.angle(H))


def phase_slope(response: FrequencyResponse, sample_rate: float) -> float:
    """Least-squares slope of the unwrapped phase, in samples of delay (negative).

    Phase is unwrapped with period pi so the sign flips of a real amplitude
    response do not register as phase jumps.
    """
    omega = 2.0 * np.pi * response.frequencies / sample_rate
    phase = np.unwrap(response.phase, period=np.pi)
    slope, _ = np.polyfit(omega, phase, 1)
    return float(slope)


def design_bank(preset: BankPreset, n_taps: int = DEFAULT_TAPS,
                sample_rate: float = DEFAULT_SAMPLE_RATE, normalize: bool = False) -> list:
    """One filter per preset band with the preset's window, in band order."""
    nyquist = sample_rate / 2
    bad = [(i, b) for i, b in enumerate(preset.bands, start=1) if b.upper_cutoff >= nyquist]
    if bad:
        detail = "; ".join(f"band {i}: upper cutoff {b.upper_cutoff:g} Hz" for i, b in bad)
        raise DesignError(f"{detail} not below Nyquist {nyquist:g} Hz")
    return [
        design_bandpass(band, preset.window_kind, n_taps, sample_rate, normalize=normalize)
        for band in preset.bands
    ]


def design_bands(bands, window, n_taps: int, sample_rate: float) -> list:
    """Like :func:`design_bank` for an arbitrary band list."""
    out = []
    for i, band in enumerate(bands, start=1):
        try:
            out.append(design_bandpass(band, window, n_taps, sample_rate))
        except DesignError as exc:
            raise DesignError(f"band {i}: {exc}") from None
    return out
