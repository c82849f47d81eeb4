import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from percepbank.errors import CoeParseError, DomainError
from percepbank.quant_coe import (
    FixedPointFormat, QuantizedFilter, dequantize, output_bit_width, quantize, read_coe,
    signed_bits_needed, write_coe,
)

Q15 = FixedPointFormat(16, 15)


class TestFormat:
    def test_default_is_q15(self):
        assert FixedPointFormat() == Q15
        assert (Q15.min_code, Q15.max_code) == (-32768, 32767)
        assert str(Q15) == "Q1.15"

    @pytest.mark.parametrize("total,frac", [(1, 0), (33, 0), (16, 16), (8, -1)])
    def test_invalid(self, total, frac):
        with pytest.raises(DomainError):
            FixedPointFormat(total, frac)


class TestQuantize:
    def test_half(self):
        assert quantize([0.5], Q15).codes.tolist() == [16384]

    def test_saturation(self):
        assert quantize([1.0, -1.0, -2.0, 5.0], Q15).codes.tolist() == [32767, -32768, -32768, 32767]

    def test_tiny_negative(self):
        # -0.000015 * 32768 = -0.49152 ; -0.00002 * 32768 = -0.65536
        assert quantize([-0.000015, -0.00002], Q15).codes.tolist() == [0, -1]

    def test_half_away_from_zero(self):
        lsb = 2.0 ** -15
        assert quantize([0.5 * lsb, -0.5 * lsb, 1.5 * lsb, -1.5 * lsb], Q15).codes.tolist() == [1, -1, 2, -2]

    def test_non_finite(self):
        with pytest.raises(DomainError):
            quantize([0.1, float("nan")])

    def test_hash_tracks_source(self):
        assert quantize([0.1, 0.2]).source_hash == quantize([0.1, 0.2]).source_hash
        assert quantize([0.1, 0.2]).source_hash != quantize([0.1, 0.2000001]).source_hash

    def test_dequantize(self):
        q = QuantizedFilter([16384, -32768], Q15)
        assert dequantize(q).tolist() == [0.5, -1.0]

    def test_code_range_enforced(self):
        with pytest.raises(DomainError):
            QuantizedFilter([32768], Q15)


@given(st.lists(st.integers(-32768, 32767), min_size=1, max_size=50))
def test_codes_roundtrip_exact(codes):
    q = QuantizedFilter(codes, Q15)
    assert quantize(dequantize(q), Q15).codes.tolist() == codes


@given(st.floats(-1.0, 32767 / 32768, allow_nan=False))
def test_error_bound(c):
    err = abs(dequantize(quantize([c], Q15))[0] - c)
    assert err <= 2.0 ** -16


@given(st.floats(-4, 4), st.floats(-4, 4))
def test_monotone(a, b):
    lo, hi = sorted((a, b))
    qa, qb = quantize([lo, hi], Q15).codes
    assert qa <= qb


class TestWriteCoe:
    def test_radix10_layout(self):
        assert write_coe(QuantizedFilter([3, -1], Q15), 10) == "radix=10;\ncoefdata=\n3,\n-1;"

    def test_hex_twos_complement(self):
        assert write_coe(QuantizedFilter([-1], Q15), 16) == "radix=16;\ncoefdata=\nffff;"

    def test_binary_twos_complement(self):
        text = write_coe(QuantizedFilter([-32768], Q15), 2)
        assert text.splitlines()[2] == "1000000000000000;"

    def test_hex_width_odd_bits(self):
        fmt = FixedPointFormat(10, 9)
        assert write_coe(QuantizedFilter([-1, 5], fmt), 16).splitlines()[2:] == ["3ff,", "005;"]

    def test_bad_radix(self):
        with pytest.raises(DomainError):
            write_coe(QuantizedFilter([1], Q15), 8)


class TestReadCoe:
    def test_single(self):
        assert read_coe("radix=10;\ncoefdata=\n0;", Q15).codes == (0,)

    def test_hex_negative(self):
        doc = read_coe("radix=16;\ncoefdata=\nffff;", Q15)
        assert doc.codes == (-1,) and doc.radix == 16

    def test_tolerant(self):
        text = ("; generated file\r\n\r\nRadix = 16;\r\n; comment\r\ncoefdata =\r\n"
                "FFFF, 0001,\r\n\r\n7fff;  ; trailing\r\n")
        assert read_coe(text, Q15).codes == (-1, 1, 32767)

    @pytest.mark.parametrize("radix", [2, 10, 16])
    def test_roundtrip_random(self, radix):
        rng = np.random.default_rng(radix)
        codes = rng.integers(-32768, 32768, size=63).tolist()
        q = QuantizedFilter(codes, Q15)
        assert list(read_coe(write_coe(q, radix), Q15).codes) == codes

    @pytest.mark.parametrize("text,line", [
        ("coefdata=\n1;", 1),
        ("radix=10;\n1;", 2),
        ("radix=8;\ncoefdata=\n1;", 1),
        ("radix=2;\ncoefdata=\n0102;", 3),
        ("radix=16;\ncoefdata=\n1,\n10000;", 4),
        ("radix=10;\ncoefdata=\n40000;", 3),
        ("radix=10;\ncoefdata=\n--1;", 3),
    ])
    def test_errors_carry_line(self, text, line):
        with pytest.raises(CoeParseError) as exc:
            read_coe(text, Q15)
        assert exc.value.line == line

    @pytest.mark.parametrize("text", ["", "radix=10;", "radix=10;\ncoefdata=\n1,2"])
    def test_missing_pieces(self, text):
        with pytest.raises(CoeParseError):
            read_coe(text, Q15)


@given(
    st.integers(2, 24).flatmap(lambda bits: st.tuples(
        st.just(bits), st.lists(st.integers(-(1 << (bits - 1)), (1 << (bits - 1)) - 1), min_size=1, max_size=40))),
    st.sampled_from([2, 10, 16]),
)
def test_coe_roundtrip_property(bits_codes, radix):
    bits, codes = bits_codes
    fmt = FixedPointFormat(bits, bits - 1)
    q = QuantizedFilter(codes, fmt)
    doc = read_coe(write_coe(q, radix), fmt)
    assert list(doc.codes) == codes and doc.radix == radix


class TestBitGrowth:
    def test_datapath(self):
        assert output_bit_width(8, 16, 63) == 30

    def test_single_tap(self):
        assert output_bit_width(8, 16, 1) == 24

    def test_one_bit_two_taps_enumerated(self):
        values = (-1, 0)
        sums = [a * c + b * d for a, b, c, d in itertools.product(values, repeat=4)]
        needed = max(signed_bits_needed(s) for s in sums)
        assert needed == 3 == output_bit_width(1, 1, 2)

    @pytest.mark.parametrize("in_bits,c_bits,taps", [(2, 2, 3), (2, 3, 2), (3, 2, 4), (1, 3, 5)])
    def test_exhaustive_small(self, in_bits, c_bits, taps):
        xs = range(-(1 << (in_bits - 1)), 1 << (in_bits - 1))
        cs = range(-(1 << (c_bits - 1)), 1 << (c_bits - 1))
        # extremes of a sum of products are reached per-term, so per-term
        # extremes bound every sequence; enumerate them all anyway
        prods = {x * c for x in xs for c in cs}
        worst = max(signed_bits_needed(taps * p) for p in prods)
        assert worst <= output_bit_width(in_bits, c_bits, taps)
        for combo in itertools.product(sorted(prods), repeat=min(taps, 3)):
            assert signed_bits_needed(sum(combo)) <= output_bit_width(in_bits, c_bits, taps)

    def test_invalid(self):
        with pytest.raises(DomainError):
            output_bit_width(0, 16, 63)

    @pytest.mark.parametrize("v,bits", [(0, 1), (-1, 1), (1, 2), (-2, 2), (127, 8), (-128, 8), (128, 9)])
    def test_signed_bits(self, v, bits):
        assert signed_bits_needed(v) == bits
