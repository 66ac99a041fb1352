"""Fixture text formats round-trip float64 exactly."""

import numpy as np
import pytest

from oupac import ConfigError, random_spd
from oupac.matrixio import (
    format_matrix,
    parse_matrix,
    parse_gaussian,
    read_gaussian,
    read_matrix,
    write_gaussian,
    write_matrix,
)
from oupac.rng import make_rng


def test_matrix_round_trip_exact(tmp_path):
    m = random_spd(5, 0.1, 9.0, seed=1).entries
    path = tmp_path / "m.txt"
    write_matrix(path, m)
    np.testing.assert_array_equal(read_matrix(path), m)


def test_format_has_dim_header_and_17_digits():
    text = format_matrix(np.array([[1.0 / 3.0]]))
    lines = text.splitlines()
    assert lines[0] == "1"
    assert lines[1] == "0.33333333333333331"


def test_parse_rejects_malformed():
    with pytest.raises(ConfigError):
        parse_matrix("")
    with pytest.raises(ConfigError):
        parse_matrix("x\n1.0\n")
    with pytest.raises(ConfigError):
        parse_matrix("2\n1.0 2.0\n")  # missing row
    with pytest.raises(ConfigError):
        parse_matrix("2\n1.0\n2.0 3.0\n")  # short row


def test_gaussian_round_trip_exact(tmp_path):
    mean = make_rng(7).standard_normal(3)
    cov = random_spd(3, 0.5, 2.0, seed=8).entries
    path = tmp_path / "g.txt"
    write_gaussian(path, mean, cov)
    mean_back, cov_back = read_gaussian(path)
    np.testing.assert_array_equal(mean_back, mean)
    np.testing.assert_array_equal(cov_back, cov)


def test_gaussian_dimension_mismatch_rejected():
    with pytest.raises(ConfigError):
        parse_gaussian("2\n1 0\n0 1\n0.5\n")
