# SPDX-License-Identifier: Apache-2.0
"""Closed-form moments against enumeration."""

from __future__ import annotations

import itertools

import numpy as np
import pytest

from mdmix import (AlleleFrequencies, DispersionModel, FactorialOrder,
                   MdmParams, ParameterError, covariance, covariance_matrix,
                   factorial_moment, falling_factorial, mean_matrix,
                   oracle_moment, theta_to_alpha)


def all_orders(n_profiles, n_categories, max_total):
    """Every non-zero order matrix with total at most max_total."""
    cells = n_profiles * n_categories
    for values in itertools.product(range(max_total + 1), repeat=cells):
        if 0 < sum(values) <= max_total:
            rows = tuple(tuple(values[i * n_categories:(i + 1) * n_categories])
                         for i in range(n_profiles))
            yield FactorialOrder(rows)


def test_falling_factorial_small_values():
    assert falling_factorial(5, 0) == 1
    assert falling_factorial(5, 2) == 20
    assert falling_factorial(2, 3) == 0
    with pytest.raises(ParameterError):
        falling_factorial(5, -1)


def test_factorial_moment_flat_pair():
    # single profile of two draws, alpha = (2, 2): E n_1 (n_1 - 1) = 0.6
    params = MdmParams((2,), DispersionModel.from_alpha((2.0, 2.0)))
    assert factorial_moment(FactorialOrder(((2, 0),)), params) == \
        pytest.approx(0.6, abs=1e-15)


def test_factorial_moment_vanishes_beyond_row_capacity():
    params = MdmParams((2,), DispersionModel.from_alpha((2.0, 2.0)))
    assert factorial_moment(FactorialOrder(((2, 1),)), params) == 0.0


def test_factorial_moment_matches_enumeration():
    params = MdmParams((2, 2), DispersionModel.from_alpha((0.5, 1.0, 2.0)))
    for order in all_orders(2, 3, 4):
        closed = factorial_moment(order, params)
        brute = oracle_moment(order, params)
        assert closed == pytest.approx(brute, rel=1e-10, abs=1e-12)


def test_factorial_moment_matches_enumeration_at_theta_zero():
    freqs = AlleleFrequencies((0.2, 0.3, 0.5))
    params = MdmParams((2, 1), theta_to_alpha(freqs, 0.0))
    for order in all_orders(2, 3, 3):
        closed = factorial_moment(order, params)
        brute = oracle_moment(order, params)
        assert closed == pytest.approx(brute, rel=1e-10, abs=1e-12)


def test_mean_matrix_is_rows_times_frequencies():
    freqs = AlleleFrequencies((0.2, 0.3, 0.5))
    params = MdmParams((2, 3), theta_to_alpha(freqs, 0.1))
    means = mean_matrix(params)
    np.testing.assert_allclose(means, [[0.4, 0.6, 1.0], [0.6, 0.9, 1.5]],
                               rtol=1e-14)
    # the mean is free of theta
    flat = mean_matrix(MdmParams((2, 3), theta_to_alpha(freqs, 0.0)))
    np.testing.assert_allclose(means, flat, rtol=1e-14)


def test_covariance_spot_values():
    # two draws per profile, q_a = 0.1, theta = 0.03
    freqs = AlleleFrequencies((0.1, 0.4, 0.5))
    params = MdmParams((2, 2), theta_to_alpha(freqs, 0.03))
    # same cell: 2 * 0.1 * 0.9 * (1 + 0.03)
    assert covariance(params, 0, 0, 0, 0) == pytest.approx(0.1854, abs=1e-14)
    # same category across profiles: 2 * 2 * 0.1 * 0.9 * 0.03
    assert covariance(params, 0, 0, 1, 0) == pytest.approx(0.0108, abs=1e-14)


def test_covariance_matches_factorial_moments():
    # Cov(x, y) = E xy - E x E y with E xy from factorial moments:
    # E xy = E x^(1) y^(1) when the cells differ, E x(x-1) + E x when equal
    params = MdmParams((2, 3), DispersionModel.from_alpha((0.5, 1.0, 2.0)))

    def mean(i, a):
        rows = [[0] * 3, [0] * 3]
        rows[i][a] = 1
        return factorial_moment(FactorialOrder(tuple(map(tuple, rows))), params)

    def raw_second(i, a, j, b):
        rows = [[0] * 3, [0] * 3]
        rows[i][a] += 1
        rows[j][b] += 1
        cross = factorial_moment(FactorialOrder(tuple(map(tuple, rows))),
                                 params)
        if (i, a) == (j, b):
            return cross + mean(i, a)
        return cross

    for i in range(2):
        for a in range(3):
            for j in range(2):
                for b in range(3):
                    derived = raw_second(i, a, j, b) - mean(i, a) * mean(j, b)
                    assert covariance(params, i, a, j, b) == \
                        pytest.approx(derived, abs=1e-12)


def test_covariance_cross_profile_vanishes_at_theta_zero():
    freqs = AlleleFrequencies((0.2, 0.8))
    params = MdmParams((2, 2), theta_to_alpha(freqs, 0.0))
    assert covariance(params, 0, 0, 1, 0) == 0.0
    assert covariance(params, 0, 0, 1, 1) == 0.0


def test_covariance_matrix_properties():
    params = MdmParams((2, 3), DispersionModel.from_alpha((0.5, 1.0, 2.0)))
    cov = covariance_matrix(params)
    assert cov.shape == (6, 6)
    np.testing.assert_allclose(cov, cov.T, atol=1e-15)
    # each profile's row sum is fixed, so covariances against it vanish:
    # summing over the categories of one profile must give zero
    for x in range(6):
        for j in range(2):
            block = cov[x, j * 3:(j + 1) * 3]
            assert block.sum() == pytest.approx(0.0, abs=1e-12)


def test_zero_row_sum_is_handled():
    params = MdmParams((0, 2), DispersionModel.from_alpha((1.0, 1.0)))
    order = FactorialOrder(((1, 0), (0, 0)))
    assert factorial_moment(order, params) == 0.0
    assert mean_matrix(params)[0, 0] == 0.0
    assert covariance(params, 0, 0, 0, 0) == 0.0


def test_order_dimensions_are_checked():
    params = MdmParams((2,), DispersionModel.from_alpha((1.0, 1.0)))
    with pytest.raises(ParameterError):
        factorial_moment(FactorialOrder(((1, 0, 0),)), params)
