"""
Thirteen-band preset tables, their validator, and triangular perceptual banks.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import scales
from .errors import DesignError, DomainError, PresetLookupError

N_BANDS = 13


class ScaleKind(str, enum.Enum):
    MEL = "mel"
    BARK = "bark"


class WindowKind(str, enum.Enum):
    BARTLETT = "bartlett"
    HAMMING = "hamming"


WINDOW_FOR_SCALE = {ScaleKind.MEL: WindowKind.BARTLETT, ScaleKind.BARK: WindowKind.HAMMING}


@dataclass(frozen=True)
class BandSpec:
    """One bandpass band. All frequencies in Hz."""

    lower_cutoff: float
    upper_cutoff: float
    nominal_bandwidth: float

    def __post_init__(self):
        if not self.lower_cutoff < self.upper_cutoff:
            raise DomainError(
                f"lower cutoff {self.lower_cutoff} must be below upper cutoff {self.upper_cutoff}"
            )

    @property
    def bandwidth(self) -> float:
        return self.upper_cutoff - self.lower_cutoff

    @property
    def center(self) -> float:
        return 0.5 * (self.lower_cutoff + self.upper_cutoff)


@dataclass(frozen=True)
class BankPreset:
    scale_kind: ScaleKind
    variant: Optional[int]
    window_kind: WindowKind
    bands: tuple

    def __post_init__(self):
        if len(self.bands) != N_BANDS:
            raise DomainError(f"a preset needs exactly {N_BANDS} bands, got {len(self.bands)}")
        lowers = [b.lower_cutoff for b in self.bands]
        if any(b >= a for a, b in zip(lowers[1:], lowers)):
            raise DomainError("band lower cutoffs must be strictly increasing")
        if self.window_kind is not WINDOW_FOR_SCALE[self.scale_kind]:
            raise DomainError(
                f"{self.scale_kind.value} banks use the {WINDOW_FOR_SCALE[self.scale_kind].value} window"
            )

    @property
    def name(self) -> str:
        suffix = "custom" if self.variant is None else str(self.variant)
        return f"{self.scale_kind.value}-{suffix}"


# (lower, upper, bandwidth) in kHz, rows exactly as tabulated.
_TABLES_KHZ = {
    (ScaleKind.MEL, 1): [
        (50, 250, 200), (250, 450, 200), (450, 650, 200), (650, 850, 200),
        (850, 1062, 212), (1058, 1358, 300), (1350, 1750, 400), (1742, 2262, 520),
        (2256, 2956, 700), (2948, 3758, 810), (3750, 4700, 950), (4692, 5962, 1270),
        (5960, 7625, 1675),
    ],
    (ScaleKind.MEL, 2): [
        (150, 250, 100), (250, 350, 100), (350, 450, 100), (450, 550, 100),
        (550, 670, 120), (665, 825, 160), (820, 1060, 240), (1055, 1415, 360),
        (1410, 1910, 500), (1906, 2606, 700), (2600, 3550, 950), (3545, 3845, 1250),
        (3840, 5490, 1650),
    ],
    (ScaleKind.MEL, 3): [
        (10, 60, 50), (60, 110, 50), (110, 160, 50), (160, 210, 50),
        (210, 360, 150), (340, 690, 350), (670, 1320, 650), (1310, 2360, 1050),
        (2300, 3850, 1550), (3840, 5990, 2150), (5980, 6830, 2850), (6810, 7460, 3650),
        (7440, 11990, 4550),
    ],
    (ScaleKind.BARK, 1): [
        (50, 200, 150), (200, 350, 150), (350, 500, 150), (500, 650, 150),
        (650, 900, 250), (900, 1300, 400), (1300, 1900, 600), (1900, 2750, 850),
        (2750, 3900, 1150), (3900, 5400, 1600), (5400, 7400, 2000), (7400, 9900, 2500),
        (9900, 12900, 3000),
    ],
    (ScaleKind.BARK, 2): [
        (150, 250, 100), (250, 350, 100), (350, 450, 100), (450, 550, 100),
        (550, 700, 150), (700, 900, 200), (900, 1200, 300), (1200, 1650, 450),
        (1650, 2300, 650), (2300, 3100, 800), (3100, 4200, 1100), (4200, 5650, 1450),
        (5650, 7500, 1850),
    ],
    (ScaleKind.BARK, 3): [
        (10, 60, 50), (60, 110, 50), (110, 160, 50), (160, 210, 50),
        (210, 360, 150), (360, 710, 350), (710, 1360, 650), (1360, 2410, 1050),
        (2410, 3960, 1550), (3960, 6110, 2150), (6110, 8960, 2850), (8960, 12610, 3650),
        (12610, 16010, 4000),
    ],
}


def _scale(kind) -> ScaleKind:
    try:
        return ScaleKind(str(getattr(kind, "value", kind)).lower())
    except ValueError:
        raise PresetLookupError(f"unknown scale {kind!r}") from None


def load_preset(scale_kind, variant: int) -> BankPreset:
    """Return the built-in 13-band preset, frequencies converted to Hz."""
    kind = _scale(scale_kind)
    try:
        rows = _TABLES_KHZ[(kind, int(variant))]
    except (KeyError, ValueError, TypeError):
        raise PresetLookupError(f"no {kind.value} preset with variant {variant!r}") from None
    bands = tuple(BandSpec(lo * 1000.0, hi * 1000.0, bw * 1000.0) for lo, hi, bw in rows)
    return BankPreset(kind, int(variant), WINDOW_FOR_SCALE[kind], bands)


def all_presets() -> list:
    return [load_preset(kind, v) for kind, v in _TABLES_KHZ]


def custom_preset(scale_kind, bands) -> BankPreset:
    kind = _scale(scale_kind)
    return BankPreset(kind, None, WINDOW_FOR_SCALE[kind], tuple(bands))


class FindingKind(str, enum.Enum):
    BANDWIDTH_MISMATCH = "BandwidthMismatch"
    OVERLAP = "Overlap"
    GAP = "Gap"


@dataclass(frozen=True)
class Finding:
    """A validator finding.

    ``band`` is 1-based. For Overlap/Gap it names the lower band of the
    adjacent pair (``band`` -> ``band + 1``). ``amount_hz`` is the absolute
    discrepancy.
    """

    band: int
    kind: FindingKind
    amount_hz: float
    details: str


def validate_preset(preset: BankPreset) -> list:
    """Report bandwidth mismatches and adjacency overlaps/gaps; never mutates."""
    findings = []
    for i, band in enumerate(preset.bands, start=1):
        diff = band.bandwidth - band.nominal_bandwidth
        if abs(diff) > 0:
            findings.append(Finding(
                i, FindingKind.BANDWIDTH_MISMATCH, abs(diff),
                f"upper - lower = {band.bandwidth:g} Hz, nominal {band.nominal_bandwidth:g} Hz",
            ))
    for i, (a, b) in enumerate(zip(preset.bands, preset.bands[1:]), start=1):
        step = b.lower_cutoff - a.upper_cutoff
        if step < 0:
            findings.append(Finding(
                i, FindingKind.OVERLAP, -step,
                f"band {i + 1} starts at {b.lower_cutoff:g} Hz, below band {i} upper {a.upper_cutoff:g} Hz",
            ))
        elif step > 0:
            findings.append(Finding(
                i, FindingKind.GAP, step,
                f"band {i + 1} starts at {b.lower_cutoff:g} Hz, above band {i} upper {a.upper_cutoff:g} Hz",
            ))
    return findings


@dataclass(frozen=True)
class TriangularBank:
    scale_kind: ScaleKind
    sample_rate: float
    fft_size: int
    edges_hz: np.ndarray = field(repr=False)
    edge_bins: np.ndarray = field(repr=False)
    weights: np.ndarray = field(repr=False)

    @property
    def n_bands(self) -> int:
        return self.weights.shape[0]

    @property
    def bin_frequencies(self) -> np.ndarray:
        return np.arange(self.weights.shape[1]) * self.sample_rate / self.fft_size

    @property
    def peak_hz(self) -> np.ndarray:
        """Unsnapped peak frequency of each triangle."""
        return self.edges_hz[1:-1]


def snap_to_bin(freq_hz, sample_rate, fft_size):
    # floor(x + 0.5): halves go to the upper bin.
    return np.floor(np.asarray(freq_hz) / sample_rate * fft_size + 0.5).astype(int)


def triangular_bank(scale_kind, f_min, f_max, n_bands, fft_size, sample_rate) -> TriangularBank:
    """Unit-peak triangles equally spaced on the Mel or Bark scale.

    ``n_bands + 2`` edge points are spaced evenly between ``warp(f_min)`` and
    ``warp(f_max)``, mapped back to Hz and snapped to FFT bins. Triangle ``k``
    rises from edge ``k`` to a peak of 1 at edge ``k+1`` and falls to zero at
    edge ``k+2``, so neighbours share half their support.
    """
    kind = _scale(scale_kind)
    if n_bands < 1:
        raise DomainError("n_bands must be >= 1")
    if fft_size < 2 * (n_bands + 1):
        raise DomainError(f"fft_size must be >= {2 * (n_bands + 1)}")
    if sample_rate <= 0:
        raise DomainError("sample_rate must be positive")
    if not 0 <= f_min < f_max:
        raise DomainError("need 0 <= f_min < f_max")
    if f_max > sample_rate / 2:
        raise DomainError(f"f_max {f_max} exceeds Nyquist {sample_rate / 2}")

    points = np.linspace(scales.warp(kind, float(f_min)), scales.warp(kind, float(f_max)), n_bands + 2)
    edges_hz = np.asarray(scales.unwarp(kind, points), dtype=np.float64)
    bins = snap_to_bin(edges_hz, sample_rate, fft_size)
    if np.any(np.diff(bins) < 2):
        raise DesignError(
            f"fft_size {fft_size} too small to separate {n_bands + 2} band edges by at least two bins"
        )

    n_bins = fft_size // 2 + 1
    j = np.arange(n_bins)
    weights = np.zeros((n_bands, n_bins))
    for k in range(n_bands):
        lo, mid, hi = bins[k], bins[k + 1], bins[k + 2]
        rise = (j - lo) / (mid - lo)
        fall = (hi - j) / (hi - mid)
        weights[k] = np.clip(np.minimum(rise, fall), 0.0, 1.0)
    return TriangularBank(kind, float(sample_rate), int(fft_size), edges_hz, bins, weights)


def bands_from_triangular(bank: TriangularBank) -> list:
    """Turn each triangle into a bandpass spec bounded by its half-height points.

    Half-height points are the perceptual-scale midpoints between a
    triangle's peak and its neighbouring edges, so consecutive bands tile the
    range without overlap.
    """
    warped = np.asarray(scales.warp(bank.scale_kind, bank.edges_hz))
    half = scales.unwarp(bank.scale_kind, 0.5 * (warped[:-1] + warped[1:]))
    half = np.asarray(half, dtype=np.float64)
    return [
        BandSpec(float(half[k]), float(half[k + 1]), float(half[k + 1] - half[k]))
        for k in range(bank.n_bands)
    ]


def band_edges_spacing(edges_hz, scale_kind) -> float:
    """Max relative deviation of warped edge spacing from uniform."""
    w = np.diff(np.asarray(scales.warp(scale_kind, np.asarray(edges_hz))))
    return float(np.max(np.abs(w - w.mean())) / abs(w.mean()))


