"""
Fixed-point coefficient quantization, COE files, and MAC bit growth.
"""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass, field

import numpy as np

from .errors import CoeParseError, DomainError

RADICES = (2, 10, 16)


@dataclass(frozen=True)
class FixedPointFormat:
    """Signed two's-complement format; Q1.15 by default."""

    total_bits: int = 16
    fraction_bits: int = 15

    def __post_init__(self):
        if not 2 <= self.total_bits <= 32:
            raise DomainError(f"total_bits must be in [2, 32], got {self.total_bits}")
        if not 0 <= self.fraction_bits <= self.total_bits - 1:
            raise DomainError(
                f"fraction_bits must be in [0, {self.total_bits - 1}], got {self.fraction_bits}"
            )

    @property
    def min_code(self) -> int:
        return -(1 << (self.total_bits - 1))

    @property
    def max_code(self) -> int:
        return (1 << (self.total_bits - 1)) - 1

    @property
    def scale(self) -> float:
        return float(1 << self.fraction_bits)

    @property
    def lsb(self) -> float:
        return 1.0 / self.scale

    def __str__(self):
        return f"Q{self.total_bits - self.fraction_bits}.{self.fraction_bits}"


@dataclass(frozen=True)
class QuantizedFilter:
    codes: np.ndarray = field(repr=False)
    format: FixedPointFormat
    source_hash: str = ""

    def __post_init__(self):
        codes = np.asarray(self.codes, dtype=np.int64)
        if codes.ndim != 1:
            raise DomainError("codes must be 1-D")
        if codes.size and (codes.min() < self.format.min_code or codes.max() > self.format.max_code):
            raise DomainError(f"codes out of range for {self.format}")
        codes.setflags(write=False)
        object.__setattr__(self, "codes", codes)


@dataclass(frozen=True)
class CoeDocument:
    radix: int
    codes: tuple


def round_half_away(x):
    x = np.asarray(x, dtype=np.float64)
    return np.sign(x) * np.floor(np.abs(x) + 0.5)


def quantize(coefficients, fmt: FixedPointFormat = FixedPointFormat()) -> QuantizedFilter:
    """Round each coefficient to the nearest code (halves away from zero), saturating."""
    c = np.asarray(coefficients, dtype=np.float64)
    if not np.all(np.isfinite(c)):
        raise DomainError("coefficients must be finite")
    codes = np.clip(round_half_away(c * fmt.scale), fmt.min_code, fmt.max_code).astype(np.int64)
    digest = hashlib.sha256(np.ascontiguousarray(c).tobytes()).hexdigest()
    return QuantizedFilter(codes.ravel(), fmt, digest)


def dequantize(q: QuantizedFilter) -> np.ndarray:
    return q.codes.astype(np.float64) / q.format.scale


def _format_code(code: int, radix: int, bits: int) -> str:
    if radix == 10:
        return str(code)
    raw = code & ((1 << bits) - 1)
    if radix == 16:
        return format(raw, f"0{(bits + 3) // 4}x")
    return format(raw, f"0{bits}b")


def write_coe(q: QuantizedFilter, radix: int = 16) -> str:
    """Serialize codes as a COE document.

    Layout is ``radix=R;`` then ``coefdata=`` then one code per line, each
    followed by ``,`` except the last which ends with ``;``. Radix 2/16 codes
    are two's complement at the format width; hex is lowercase. No trailing
    newline.
    """
    if radix not in RADICES:
        raise DomainError(f"radix must be one of {RADICES}")
    if q.codes.size == 0:
        raise DomainError("cannot write an empty coefficient vector")
    bits = q.format.total_bits
    body = ",\n".join(_format_code(int(c), radix, bits) for c in q.codes)
    return f"radix={radix};\ncoefdata=\n{body};"


_DIRECTIVE = re.compile(r"^\s*([A-Za-z_]+)\s*=\s*(.*)$")
_RADIX_KEYS = {"radix", "coefficient_radix"}
_DATA_KEYS = {"coefdata", "coefficient_vector"}
_DIGITS = {2: "01", 10: "0123456789", 16: "0123456789abcdef"}


def _parse_code(token: str, radix: int, fmt: FixedPointFormat, line: int) -> int:
    text = token.strip().lower()
    digits = text.lstrip("+-") if radix == 10 else text
    if radix == 10 and text[:1] in "+-" and len(text) - len(digits) > 1:
        raise CoeParseError(f"invalid code {token!r}", line)
    if not digits or any(ch not in _DIGITS[radix] for ch in digits):
        raise CoeParseError(f"invalid digit for radix {radix} in {token!r}", line)
    value = int(text, radix)
    if radix == 10:
        if not fmt.min_code <= value <= fmt.max_code:
            raise CoeParseError(f"code {value} exceeds {fmt.total_bits}-bit range", line)
        return value
    if value >= 1 << fmt.total_bits:
        raise CoeParseError(f"code {token!r} wider than {fmt.total_bits} bits", line)
    if value > fmt.max_code:
        value -= 1 << fmt.total_bits
    return value


def read_coe(text: str, fmt: FixedPointFormat = FixedPointFormat()) -> CoeDocument:
    """Parse a COE document.

    Tolerates CRLF, upper-case digits, blank lines and ``;`` comment lines
    outside the directives. Anything after the terminating ``;`` of the data
    list is ignored.
    """
    radix = None
    codes = []
    in_data = False
    done = False
    for lineno, raw in enumerate(text.replace("\r\n", "\n").replace("\r", "\n").split("\n"), 1):
        line = raw.strip()
        if done or not line:
            continue
        if not in_data:
            if line.startswith(";"):
                continue
            m = _DIRECTIVE.match(line)
            if not m:
                raise CoeParseError(f"unexpected content {line!r}", lineno)
            key, rest = m.group(1).lower(), m.group(2)
            if key in _RADIX_KEYS:
                value = rest.split(";", 1)[0].strip()
                if value not in ("2", "10", "16"):
                    raise CoeParseError(f"unsupported radix {value!r}", lineno)
                radix = int(value)
                continue
            if key in _DATA_KEYS:
                if radix is None:
                    raise CoeParseError("coefdata before radix directive", lineno)
                in_data = True
                line = rest.strip()
                if not line:
                    continue
            else:
                raise CoeParseError(f"unknown directive {key!r}", lineno)
        chunk, sep, _ = line.partition(";")
        for token in re.split(r"[,\s]+", chunk):
            if token:
                codes.append(_parse_code(token, radix, fmt, lineno))
        if sep:
            done = True
    if radix is None:
        raise CoeParseError("missing radix directive")
    if not in_data:
        raise CoeParseError("missing coefdata directive")
    if not done:
        raise CoeParseError("coefdata not terminated by ';'")
    if not codes:
        raise CoeParseError("coefdata is empty")
    return CoeDocument(radix, tuple(codes))


def output_bit_width(input_bits: int, coeff_bits: int, n_taps: int) -> int:
    """Full-precision accumulator width of an ``n_taps`` multiply-accumulate."""
    if min(input_bits, coeff_bits, n_taps) < 1:
        raise DomainError("all arguments must be >= 1")
    return input_bits + coeff_bits + (n_taps - 1).bit_length()


def signed_bits_needed(value: int) -> int:
    """Smallest two's-complement width holding ``value``."""
    value = int(value)
    return (value if value >= 0 else ~value).bit_length() + 1
