import pytest
from hypothesis import given
from hypothesis import strategies as st

from nibbletape.encodings import (DecodeError, DigitAddress, EncodingRangeError,
                                  EncodingScheme, ceil_log2, decode_tuple,
                                  digit_at, digit_length, digits, encode_tuple,
                                  first_primes, from_digits)

GODEL = EncodingScheme.godel()


class TestSchemes:
    def test_godel_example(self):
        assert encode_tuple((2, 1), GODEL) == 12  # 2^2 * 3^1

    def test_max_element_example(self):
        assert encode_tuple((1, 2), EncodingScheme.max_element(3)) == 7

    def test_max_bit_example(self):
        scheme = EncodingScheme.max_bit_for(5)
        assert scheme.base_or_bitwidth == 4
        assert encode_tuple((3, 5), scheme) == 83  # 3 + 5*16

    def test_max_bit_width_is_generous(self):
        # ceil(log2(n)) + 1 even when n is a power of two
        assert EncodingScheme.max_bit_for(4).base_or_bitwidth == 3
        assert EncodingScheme.max_bit_for(8).base_or_bitwidth == 4
        assert EncodingScheme.max_bit_for(1).base_or_bitwidth == 1

    def test_ceil_log2(self):
        assert [ceil_log2(n) for n in (1, 2, 3, 4, 5, 8, 9)] == [0, 1, 2, 2, 3, 3, 4]

    def test_decode_examples(self):
        assert decode_tuple(12, GODEL, 2) == (2, 1)
        assert decode_tuple(7, EncodingScheme.max_element(3), 2) == (1, 2)
        assert decode_tuple(83, EncodingScheme.max_bit(4), 2) == (3, 5)

    def test_decode_godel_with_longer_length_pads_zeros(self):
        assert decode_tuple(12, GODEL, 3) == (2, 1, 0)

    def test_scheme_validation(self):
        with pytest.raises(ValueError):
            EncodingScheme("nope")
        with pytest.raises(ValueError):
            EncodingScheme.max_element(1)
        with pytest.raises(ValueError):
            EncodingScheme.max_bit(0)


class TestErrors:
    def test_empty_tuple(self):
        with pytest.raises(ValueError):
            encode_tuple((), GODEL)

    def test_max_element_range(self):
        with pytest.raises(EncodingRangeError):
            encode_tuple((3,), EncodingScheme.max_element(3))

    def test_max_bit_range(self):
        with pytest.raises(EncodingRangeError):
            encode_tuple((16,), EncodingScheme.max_bit(4))

    def test_negative_element(self):
        with pytest.raises(EncodingRangeError):
            encode_tuple((-1,), GODEL)

    def test_godel_decode_stray_prime(self):
        # 2^2 * 5 has a factor outside the first 2 primes
        with pytest.raises(DecodeError):
            decode_tuple(20, GODEL, 2)

    def test_godel_decode_zero(self):
        with pytest.raises(DecodeError):
            decode_tuple(0, GODEL, 2)

    def test_positional_decode_overflow(self):
        with pytest.raises(DecodeError):
            decode_tuple(9, EncodingScheme.max_element(3), 2)
        with pytest.raises(DecodeError):
            decode_tuple(256, EncodingScheme.max_bit(4), 2)


@given(st.lists(st.integers(0, 63), min_size=1, max_size=6))
def test_roundtrip_godel(t):
    t = tuple(t)
    assert decode_tuple(encode_tuple(t, GODEL), GODEL, len(t)) == t


@given(st.integers(2, 17), st.lists(st.integers(0, 63), min_size=1, max_size=6))
def test_roundtrip_max_element(base, t):
    t = tuple(x % base for x in t)
    scheme = EncodingScheme.max_element(base)
    assert decode_tuple(encode_tuple(t, scheme), scheme, len(t)) == t


@given(st.integers(1, 8), st.lists(st.integers(0, 63), min_size=1, max_size=6))
def test_roundtrip_max_bit(width, t):
    t = tuple(x % (1 << width) for x in t)
    scheme = EncodingScheme.max_bit(width)
    assert decode_tuple(encode_tuple(t, scheme), scheme, len(t)) == t


class TestDigits:
    def test_digit_at_examples(self):
        assert digit_at(557, 0, 16) == 13
        assert digit_at(557, 1, 16) == 2
        assert digit_at(546, 2, 16) == 2

    def test_digit_beyond_msd_is_zero(self):
        assert digit_at(557, 9, 16) == 0

    def test_digit_address(self):
        assert DigitAddress(1, 16).extract(557) == 2
        with pytest.raises(ValueError):
            DigitAddress(-1, 16)

    def test_digit_length_examples(self):
        assert digit_length(5, 2) == 3
        assert digit_length(255, 16) == 2
        assert digit_length(1000, 10) == 4
        assert digit_length(0, 7) == 1

    def test_digit_length_powers(self):
        for base in (2, 3, 10, 16):
            for k in range(21):
                assert digit_length(base ** k, base) == k + 1

    def test_digit_of_positional_code(self):
        scheme = EncodingScheme.max_element(7)
        t = (3, 0, 6, 1)
        n = encode_tuple(t, scheme)
        for i, d in enumerate(t):
            assert digit_at(n, i, 7) == d

    @given(st.integers(0, 10**9), st.integers(2, 20))
    def test_digits_roundtrip(self, n, base):
        assert from_digits(digits(n, base), base) == n


def test_first_primes():
    assert first_primes(10) == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert first_primes(0) == []
    assert len(first_primes(500)) == 500
    assert first_primes(500)[-1] == 3571
