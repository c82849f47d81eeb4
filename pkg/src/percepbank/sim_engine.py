"""
DDS stimulus, summed filter-bank simulation (float and integer datapaths),
and bank-to-bank comparison.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError
from .fir_design import DB_FLOOR, FirFilter, frequency_response
from .quant_coe import QuantizedFilter, output_bit_width, round_half_away, signed_bits_needed


@dataclass(frozen=True)
class DdsConfig:
    clock_hz: float
    target_hz: float
    accumulator_bits: int = 32
    amplitude: float = 1.0

    def __post_init__(self):
        if not 2 <= self.accumulator_bits <= 64:
            raise DomainError("accumulator_bits must be in [2, 64]")
        if not 0 < self.amplitude <= 1:
            raise DomainError(f"amplitude must be in (0, 1], got {self.amplitude}")
        if self.clock_hz <= 0:
            raise DomainError("clock_hz must be positive")
        if not 0 < self.target_hz < self.clock_hz / 2:
            raise DomainError(
                f"target {self.target_hz:g} Hz must lie in (0, Nyquist={self.clock_hz / 2:g} Hz)"
            )
        if self.tuning_word < 1:
            raise DomainError("target frequency below the accumulator resolution")

    @property
    def tuning_word(self) -> int:
        return int(round_half_away(self.target_hz / self.clock_hz * 2.0 ** self.accumulator_bits))

    @property
    def actual_hz(self) -> float:
        return self.tuning_word / 2.0 ** self.accumulator_bits * self.clock_hz


@dataclass(frozen=True)
class Signal:
    samples: np.ndarray = field(repr=False)
    sample_rate: float

    def __post_init__(self):
        if self.sample_rate <= 0:
            raise DomainError("sample_rate must be positive")
        s = np.asarray(self.samples)
        if s.dtype.kind not in "iu":
            s = s.astype(np.float64)
            if not np.all(np.isfinite(s)):
                raise DomainError("samples must be finite")
        object.__setattr__(self, "samples", s)

    def __len__(self):
        return self.samples.size


def phase_accumulator(tuning_word: int, accumulator_bits: int, n_samples: int) -> np.ndarray:
    """Accumulator states ``n * tuning_word mod 2**bits`` for ``n = 0..n_samples-1``."""
    n = np.arange(n_samples, dtype=np.uint64)
    # uint64 products wrap mod 2**64, which preserves the residue mod 2**bits.
    acc = n * np.uint64(tuning_word % (1 << 64))
    if accumulator_bits < 64:
        acc &= np.uint64((1 << accumulator_bits) - 1)
    return acc


def dds_sine(config: DdsConfig, n_samples: int) -> Signal:
    if n_samples < 1:
        raise DomainError("n_samples must be positive")
    acc = phase_accumulator(config.tuning_word, config.accumulator_bits, n_samples)
    phase = 2.0 * np.pi * (acc.astype(np.float64) / 2.0 ** config.accumulator_bits)
    return Signal(config.amplitude * np.sin(phase), config.clock_hz)


def to_codes(signal: Signal, input_bits: int = 8) -> np.ndarray:
    """Round a [-1, 1] signal to signed ``input_bits`` codes (full scale = max code)."""
    full = (1 << (input_bits - 1)) - 1
    codes = round_half_away(np.asarray(signal.samples) * full)
    return np.clip(codes, -full - 1, full).astype(np.int64)


@dataclass(frozen=True)
class BankRunResult:
    per_filter_outputs: list
    summed_output: Signal
    band_energies: np.ndarray

    @property
    def loudest_band(self) -> int:
        """1-based index of the band with the largest energy."""
        return int(np.argmax(self.band_energies)) + 1


def _filter(x, h):
    return np.convolve(x, h)[: x.size]


def run_bank(filters, signal: Signal) -> BankRunResult:
    """Convolve ``signal`` with every filter (zero state, truncated) and sum."""
    if not filters:
        raise DomainError("bank has no filters")
    if len(signal) == 0:
        raise DomainError("input signal is empty")
    for i, f in enumerate(filters, start=1):
        if f.sample_rate != signal.sample_rate:
            raise DomainError(
                f"filter {i} sample rate {f.sample_rate:g} Hz != input {signal.sample_rate:g} Hz"
            )
    x = np.asarray(signal.samples, dtype=np.float64)
    outputs = [_filter(x, f.coefficients) for f in filters]
    summed = np.sum(outputs, axis=0)
    energies = np.array([np.dot(y, y) for y in outputs])
    return BankRunResult(
        [Signal(y, signal.sample_rate) for y in outputs],
        Signal(summed, signal.sample_rate),
        energies,
    )


@dataclass(frozen=True)
class FixedBankRunResult:
    per_filter_codes: list
    summed_codes: np.ndarray
    band_energies: np.ndarray
    accumulator_bits: int
    max_observed_bits: int
    fraction_bits: int

    def dequantized(self) -> list:
        """Per-filter outputs in input units (coefficient scaling removed)."""
        return [y.astype(np.float64) / (1 << self.fraction_bits) for y in self.per_filter_codes]


def run_bank_fixed_point(quantized, input_codes, input_bits: int = 8) -> FixedBankRunResult:
    """Exact integer multiply-accumulate through each quantized filter.

    ``accumulator_bits`` is the provable per-filter width from
    :func:`output_bit_width`; ``max_observed_bits`` is what the run used.
    The summed output carries ``ceil(log2(n_filters))`` extra bits.
    """
    if not quantized:
        raise DomainError("bank has no filters")
    x = np.asarray(input_codes)
    if x.dtype.kind not in "iu":
        if not np.all(np.asarray(x) == np.round(x)):
            raise DomainError("input codes must be integers")
    x = x.astype(np.int64)
    lo, hi = -(1 << (input_bits - 1)), (1 << (input_bits - 1)) - 1
    if x.size == 0:
        raise DomainError("input is empty")
    if x.min() < lo or x.max() > hi:
        raise DomainError(f"input codes must lie in [{lo}, {hi}]")
    fmts = {q.format for q in quantized}
    if len(fmts) != 1:
        raise DomainError("all filters must share one fixed-point format")
    fmt = fmts.pop()
    n_taps = max(q.codes.size for q in quantized)
    outputs = [_filter(x, q.codes) for q in quantized]
    observed = max(signed_bits_needed(v) for y in outputs for v in (y.min(), y.max()))
    energies = np.array([float(np.dot(y.astype(np.float64), y.astype(np.float64))) for y in outputs])
    return FixedBankRunResult(
        outputs,
        np.sum(outputs, axis=0),
        energies,
        output_bit_width(input_bits, fmt.total_bits, n_taps),
        observed,
        fmt.fraction_bits,
    )


def worst_case_accumulator(q: QuantizedFilter, input_bits: int = 8) -> int:
    """Largest accumulator magnitude any input sequence can produce."""
    return (1 << (input_bits - 1)) * int(np.sum(np.abs(q.codes)))


@dataclass(frozen=True)
class BankComparison:
    per_band_cosine: np.ndarray
    per_band_rms_diff: np.ndarray
    response_rms_diff_db: np.ndarray

    @property
    def mean_cosine(self) -> float:
        return float(np.mean(self.per_band_cosine))

    @property
    def mean_response_rms_diff_db(self) -> float:
        return float(np.mean(self.response_rms_diff_db))


def _cosine(a, b):
    na, nb = np.linalg.norm(a), np.linalg.norm(b)
    if na == 0 or nb == 0:
        return 1.0 if na == nb else 0.0
    return float(np.clip(np.dot(a, b) / (na * nb), -1.0, 1.0))


def _rms(d):
    return float(np.sqrt(np.mean(np.square(d))))


def compare_banks(bank_a, bank_b, n_response_points: int = 512) -> BankComparison:
    """Per-band coefficient cosine/RMS difference and dB-response RMS difference."""
    if len(bank_a) != len(bank_b):
        raise DomainError("banks have different band counts")
    cos, rms, resp = [], [], []
    for i, (fa, fb) in enumerate(zip(bank_a, bank_b), start=1):
        if fa.n_taps != fb.n_taps:
            raise DomainError(f"band {i}: tap counts differ ({fa.n_taps} vs {fb.n_taps})")
        if fa.sample_rate != fb.sample_rate:
            raise DomainError(f"band {i}: sample rates differ")
        a, b = fa.coefficients, fb.coefficients
        cos.append(_cosine(a, b))
        rms.append(_rms(a - b))
        ra = frequency_response(fa, n_response_points, DB_FLOOR).magnitude_db
        rb = frequency_response(fb, n_response_points, DB_FLOOR).magnitude_db
        resp.append(_rms(ra - rb))
    return BankComparison(np.array(cos), np.array(rms), np.array(resp))


def as_filters(coefficient_vectors, sample_rate: float) -> list:
    return [FirFilter(np.asarray(h, dtype=np.float64), sample_rate) for h in coefficient_vectors]
