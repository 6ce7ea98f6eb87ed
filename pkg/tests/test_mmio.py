import numpy as np
import pytest
import scipy.io
from numpy.testing import assert_array_equal

from realunitary.mmio import MatrixMarketError, read_matrix, read_vector, write_matrix, write_vector


def test_complex_header_and_column_major(tmp_path):
    path = tmp_path / "a.mtx"
    write_matrix(path, np.array([[1 + 2j, 3], [4j, -5.5]]))
    lines = path.read_text().splitlines()
    assert lines[0] == "%%MatrixMarket matrix array complex general"
    assert lines[1] == "2 2"
    assert lines[2:] == ["1 2", "0 4", "3 0", "-5.5 0"]


def test_real_header(tmp_path):
    path = tmp_path / "m.mtx"
    write_matrix(path, np.array([[0.0, -1.0], [1.0, 0.0]]))
    lines = path.read_text().splitlines()
    assert lines[0] == "%%MatrixMarket matrix array real general"
    assert lines[2:] == ["0", "1", "-1", "0"]


def test_round_trip_is_exact(tmp_path):
    rng = np.random.default_rng(0)
    A = rng.standard_normal((5, 3)) + 1j * rng.standard_normal((5, 3))
    A[0, 0] = np.nextafter(1.0, 2.0) + 1e-300j
    write_matrix(tmp_path / "a.mtx", A, comment="test\nsecond line")
    assert_array_equal(read_matrix(tmp_path / "a.mtx"), A)
    R = rng.standard_normal((4, 4))
    write_matrix(tmp_path / "r.mtx", R)
    back = read_matrix(tmp_path / "r.mtx")
    assert back.dtype == np.float64
    assert_array_equal(back, R)


def test_scipy_reads_our_files(tmp_path):
    rng = np.random.default_rng(1)
    A = rng.standard_normal((3, 4)) + 1j * rng.standard_normal((3, 4))
    write_matrix(tmp_path / "a.mtx", A)
    assert_array_equal(scipy.io.mmread(str(tmp_path / "a.mtx")), A)


def test_we_read_scipy_files(tmp_path):
    rng = np.random.default_rng(2)
    A = rng.standard_normal((4, 2))
    scipy.io.mmwrite(str(tmp_path / "s.mtx"), A, precision=17)
    assert_array_equal(read_matrix(tmp_path / "s.mtx"), A)


def test_vector_round_trip(tmp_path):
    v = np.exp(1j * np.array([0.1, 2.0, -3.0]))
    write_vector(tmp_path / "v.mtx", v)
    assert_array_equal(read_vector(tmp_path / "v.mtx"), v)
    write_matrix(tmp_path / "m.mtx", np.eye(2))
    with pytest.raises(MatrixMarketError, match="single column"):
        read_vector(tmp_path / "m.mtx")


@pytest.mark.parametrize(
    "text",
    [
        "",
        "hello\n1 1\n1\n",
        "%%MatrixMarket matrix coordinate real general\n1 1 1\n1 1 1\n",
        "%%MatrixMarket matrix array real symmetric\n1 1\n1\n",
        "%%MatrixMarket matrix array real general\n2 2\n1\n2\n3\n",
        "%%MatrixMarket matrix array real general\n1 1\nabc\n",
    ],
)
def test_malformed_files(tmp_path, text):
    path = tmp_path / "bad.mtx"
    path.write_text(text)
    with pytest.raises(MatrixMarketError):
        read_matrix(path)


def test_missing_file(tmp_path):
    with pytest.raises(MatrixMarketError):
        read_matrix(tmp_path / "nope.mtx")
