import numpy as np
import pytest

from fracid import NonUniformGrid, ParseError, TooShort
from fracid.seriesio import load_series, read_table, write_series


def write(tmp_path, text, name="s.txt"):
    p = tmp_path / name
    p.write_text(text)
    return p


def test_three_column_file(tmp_path):
    p = write(tmp_path, "0 1 0\n0.05 1 0.001\n0.1 1 0.004\n")
    u, y = load_series(p)
    assert u.step == pytest.approx(0.05)
    assert list(u.values) == [1, 1, 1]
    assert list(y.values) == [0, 0.001, 0.004]


def test_two_column_file_has_no_output(tmp_path):
    u, y = load_series(write(tmp_path, "0 0\n1 1\n2 2\n"))
    assert y is None and list(u.values) == [0, 1, 2]


def test_header_and_comments(tmp_path):
    text = "# furnace run 3\ntime input output\n\n0 1 0\n0.5 1 0.1\n1.0 1 0.3\n"
    u, y = load_series(write(tmp_path, text))
    assert u.step == 0.5 and list(y.values) == [0, 0.1, 0.3]


@pytest.mark.parametrize("text", ["0;1;0\n1;1;2\n2;1;3\n", "0,1,0\n1,1,2\n2,1,3\n", "0\t1\t0\n1\t1\t2\n2\t1\t3\n"])
def test_delimiters(tmp_path, text):
    _, y = load_series(write(tmp_path, text))
    assert list(y.values) == [0, 2, 3]


def test_comma_decimal_rejected_with_line(tmp_path):
    p = write(tmp_path, "0 1 0\n0.05 1 0,001\n0.1 1 0.004\n")
    with pytest.raises(ParseError) as exc:
        load_series(p)
    assert exc.value.lineno == 2 and exc.value.token == "0,001"
    assert "comma decimal" in str(exc.value)


def test_bad_token(tmp_path):
    with pytest.raises(ParseError) as exc:
        load_series(write(tmp_path, "0 1 0\n1 x 0\n2 1 0\n"))
    assert exc.value.lineno == 2


def test_non_finite_rejected(tmp_path):
    with pytest.raises(ParseError):
        load_series(write(tmp_path, "0 1 0\n1 nan 0\n2 1 0\n"))


def test_ragged_rows(tmp_path):
    with pytest.raises(ParseError):
        load_series(write(tmp_path, "0 1 0\n1 1\n2 1 0\n"))


def test_non_uniform_grid(tmp_path):
    with pytest.raises(NonUniformGrid) as exc:
        load_series(write(tmp_path, "0 1 0\n0.05 1 0\n0.11 1 0\n"))
    assert "deviates" in str(exc.value)


def test_decreasing_time(tmp_path):
    with pytest.raises(NonUniformGrid):
        load_series(write(tmp_path, "0 1 0\n1 1 0\n1 1 0\n"))


@pytest.mark.parametrize("text", ["", "time input\n", "0 1\n1 1\n"])
def test_too_short(tmp_path, text):
    with pytest.raises(TooShort):
        load_series(write(tmp_path, text))


@pytest.mark.parametrize("step", [0.05, 0.1, 1 / 3, 0.007])
def test_round_trip(tmp_path, step):
    rng = np.random.default_rng(1)
    a, b = rng.normal(size=500), rng.normal(size=500) * 1e-5
    p = tmp_path / "rt.txt"
    write_series(p, step, a, b, names=("time", "input", "output"))
    got_step, cols = read_table(p)
    assert got_step == step
    np.testing.assert_allclose(cols[0], a, rtol=1e-12, atol=0)
    np.testing.assert_allclose(cols[1], b, rtol=1e-12, atol=0)


def test_step_comment_ignored_when_inconsistent(tmp_path):
    step, _ = read_table(write(tmp_path, "# step 0.2\n0 1\n0.1 1\n0.2 1\n"))
    assert step == pytest.approx(0.1)
