"""Mel and Bark thirteen-band FIR filter banks for FPGA-style datapaths."""

from .bank_layout import (
    BandSpec, BankPreset, ScaleKind, TriangularBank, WindowKind, bands_from_triangular,
    load_preset, triangular_bank, validate_preset,
)
from .fir_design import FirFilter, design_bandpass, design_bank, frequency_response
from .quant_coe import FixedPointFormat, dequantize, output_bit_width, quantize, read_coe, write_coe
from .scales import bark_to_hz, hz_to_bark, hz_to_mel, mel_to_hz
from .sim_engine import DdsConfig, compare_banks, dds_sine, run_bank, run_bank_fixed_point

__version__ = "0.1.0"
