import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from waypath.errors import PGMError
from waypath.pgm import decode_pgm, encode_pgm, read_pgm, write_pgm


@given(arrays(np.uint8, st.tuples(st.integers(1, 20), st.integers(1, 20))))
def test_round_trip(img):
    assert np.array_equal(decode_pgm(encode_pgm(img)), img)


def test_header_comments_are_skipped():
    data = b"P5\n# made by hand\n3 2\n# depth\n255\n" + bytes(range(6))
    assert decode_pgm(data).tolist() == [[0, 1, 2], [3, 4, 5]]


@pytest.mark.parametrize(
    "data",
    [b"P2\n1 1\n255\n0", b"P5\n2 2\n255\n\x00", b"P5\n2 x\n255\n\x00\x00", b"P5\n1 1\n65535\n\x00\x00", b"P5\n1"],
)
def test_corrupt_files_raise(data):
    with pytest.raises(PGMError):
        decode_pgm(data)


def test_file_round_trip(tmp_path):
    img = np.arange(12, dtype=np.uint8).reshape(3, 4)
    write_pgm(tmp_path / "a.pgm", img)
    assert (tmp_path / "a.pgm").read_bytes().startswith(b"P5\n4 3\n255\n")
    assert np.array_equal(read_pgm(tmp_path / "a.pgm"), img)
