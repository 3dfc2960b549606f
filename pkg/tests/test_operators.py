import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qso_dynamics import operators as ops
from qso_dynamics.errors import (
    DimensionError,
    ParamRangeError,
    TensorInvariantError,
)
from qso_dynamics.simplex import CENTER, CYCLE, distance, make_point, permute

from conftest import random_points


def v_polynomials(a, x):
    x1, x2, x3 = x
    return np.array([
        (1 - a) * x1 * x1 + 2 * x1 * x2 + a * x2 * x2,
        (1 - a) * x2 * x2 + 2 * x2 * x3 + a * x3 * x3,
        (1 - a) * x3 * x3 + 2 * x3 * x1 + a * x1 * x1,
    ])


def w_polynomials(a, x):
    x1, x2, x3 = x
    return np.array([
        (1 - a) * x1 * x1 + 2 * x1 * x2 + a * x3 * x3,
        (1 - a) * x2 * x2 + 2 * x2 * x3 + a * x1 * x1,
        (1 - a) * x3 * x3 + 2 * x3 * x1 + a * x2 * x2,
    ])


def two_allele_polynomials(a, b, p, x):
    x1, x2 = x
    return np.array([
        (1 - a) * x1 * x1 + 2 * p * x1 * x2 + b * x2 * x2,
        a * x1 * x1 + 2 * (1 - p) * x1 * x2 + (1 - b) * x2 * x2,
    ])


def test_v0_matches_displayed_polynomials(gen):
    spec = ops.v_alpha(0.0)
    for x in random_points(gen, 50):
        expect = v_polynomials(0.0, x.coords)
        np.testing.assert_allclose(ops.raw_image(spec, x), expect, atol=1e-15)


@pytest.mark.parametrize("alpha", [0.0, 0.17, 0.5, 0.83, 1.0])
def test_v_family_matches_polynomials(gen, alpha):
    spec = ops.v_alpha(alpha)
    for x in random_points(gen, 20):
        np.testing.assert_allclose(
            ops.raw_image(spec, x), v_polynomials(alpha, x.coords), atol=1e-15)


@pytest.mark.parametrize("alpha", [0.0, 0.3, 1.0])
def test_w_family_matches_polynomials(gen, alpha):
    spec = ops.w_alpha(alpha)
    for x in random_points(gen, 20):
        np.testing.assert_allclose(
            ops.raw_image(spec, x), w_polynomials(alpha, x.coords), atol=1e-15)


def test_w1_is_defined_by_the_family_formula():
    # alpha = 1 keeps only the cross terms and the back-shifted squares
    spec = ops.w_alpha(1.0)
    x = make_point((0.5, 0.3, 0.2))
    x1, x2, x3 = x.coords
    expect = [2 * x1 * x2 + x3 * x3, 2 * x2 * x3 + x1 * x1, 2 * x3 * x1 + x2 * x2]
    np.testing.assert_allclose(ops.raw_image(spec, x), expect, atol=1e-16)


def test_two_allele_matches_polynomials(gen):
    a, b, p = 0.3, 0.6, 0.25
    spec = ops.two_allele(a, b, p)
    for x in random_points(gen, 30, m=2):
        np.testing.assert_allclose(
            ops.raw_image(spec, x),
            two_allele_polynomials(a, b, p, x.coords), atol=1e-16)


def test_v_tensor_is_convex_combination_of_endpoints():
    t0 = ops.v_alpha(0.0).tensor.P
    t1 = ops.v_alpha(1.0).tensor.P
    for a in (0.1, 0.37, 0.5, 0.9):
        assert np.array_equal(ops.v_alpha(a).tensor.P, (1 - a) * t0 + a * t1)


def test_apply_examples(gen):
    for a in (0.0, 0.25, 0.5, 1.0):
        assert distance(ops.apply(ops.v_alpha(a), CENTER), CENTER) <= 1e-15
    got = ops.apply(ops.v_alpha(0.0), make_point((0.5, 0.3, 0.2)))
    np.testing.assert_allclose(got.coords, (0.55, 0.21, 0.24), atol=1e-15)
    assert ops.apply(ops.v_alpha(1.0), make_point((1, 0, 0))).coords == (0, 0, 1)
    ta = ops.two_allele(0.0, 0.0, 0.5)
    x = make_point((0.3, 0.7))
    np.testing.assert_allclose(ops.apply(ta, x).coords, x.coords, atol=1e-16)


def test_apply_dimension_mismatch():
    with pytest.raises(DimensionError):
        ops.apply(ops.v_alpha(0.5), make_point((0.4, 0.6)))
    with pytest.raises(DimensionError):
        ops.apply(ops.two_allele(0.1, 0.1, 0.5), make_point((0.3, 0.3, 0.4)))


@pytest.mark.parametrize("bad", [-0.1, 1.1, float("nan")])
def test_param_range_rejected(bad):
    with pytest.raises(ParamRangeError):
        ops.v_alpha(bad)
    with pytest.raises(ParamRangeError):
        ops.w_alpha(bad)


def test_two_allele_param_range():
    with pytest.raises(ParamRangeError):
        ops.two_allele(0.5, 1.5, 0.5)
    with pytest.raises(ParamRangeError):
        ops.two_allele(0.5, 0.5, -0.01)


@pytest.mark.parametrize("family", [ops.v_alpha, ops.w_alpha])
def test_tensor_invariants_across_grid(family):
    for a in np.arange(0.0, 1.0001, 0.01):
        P = family(float(a)).tensor.P
        assert P.min() >= 0.0 and P.max() <= 1.0
        assert np.array_equal(P, P.transpose(1, 0, 2))
        np.testing.assert_allclose(P.sum(axis=2), 1.0, atol=1e-15)


def test_simplex_invariance(gen):
    families = [ops.v_alpha, ops.w_alpha]
    for family in families:
        for a in np.arange(0.0, 1.0001, 0.05):
            spec = family(float(a))
            for x in random_points(gen, 25):
                y = ops.raw_image(spec, x)
                assert abs(y.sum() - 1.0) <= 1e-12
                assert y.min() >= -1e-15


def test_interior_mapping_on_open_edges(gen):
    for a in (0.05, 0.3, 0.5, 0.7, 0.95):
        spec = ops.v_alpha(a)
        for _ in range(50):
            t = 0.01 + 0.98 * gen.next_float()
            for edge in [(t, 1 - t, 0.0), (0.0, t, 1 - t), (1 - t, 0.0, t)]:
                y = ops.raw_image(spec, make_point(edge))
                assert y.min() > 0.0


def test_commutation_with_cycle(gen):
    for _ in range(200):
        a = gen.next_float()
        spec = ops.v_alpha(a)
        x = make_point(gen.simplex_point(3))
        lhs = ops.apply(spec, permute(CYCLE, x))
        rhs = permute(CYCLE, ops.apply(spec, x))
        assert distance(lhs, rhs) <= 1e-14


def test_jacobian_spectrum_at_center_half():
    J = ops.jacobian(ops.v_alpha(0.5), CENTER)
    vals = sorted(np.linalg.eigvals(J), key=lambda z: (z.real, z.imag))
    expect = sorted([0.5 + 1j * math.sqrt(3) / 2, 0.5 - 1j * math.sqrt(3) / 2,
                     2.0 + 0j], key=lambda z: (z.real, z.imag))
    np.testing.assert_allclose(vals, expect, atol=1e-12)


@pytest.mark.parametrize("alpha", [0.0, 0.2, 0.5, 0.8, 1.0])
def test_v_jacobian_at_center_is_circulant(alpha):
    J = ops.jacobian(ops.v_alpha(alpha), CENTER)
    row = np.array([(4 - 2 * alpha) / 3, (2 + 2 * alpha) / 3, 0.0])
    np.testing.assert_allclose(J[0], row, atol=1e-15)
    np.testing.assert_allclose(J[1], np.roll(row, 1), atol=1e-15)
    np.testing.assert_allclose(J[2], np.roll(row, 2), atol=1e-15)


def test_jacobian_columns_sum_to_two(gen):
    specs = [ops.v_alpha(0.3), ops.w_alpha(0.7),
             ops.two_allele(0.2, 0.4, 0.6)]
    for spec in specs:
        for x in random_points(gen, 30, m=spec.m):
            J = ops.jacobian(spec, x)
            np.testing.assert_allclose(J.sum(axis=0), 2.0, atol=1e-12)


def _fd_jacobian(spec, x, h=1e-6):
    """Central-difference Jacobian of the raw quadratic map."""
    m = x.m
    J = np.empty((m, m))
    base = np.asarray(x.coords)
    for l in range(m):
        hi = base.copy()
        lo = base.copy()
        hi[l] += h
        lo[l] -= h
        fhi = np.array([(spec.tensor.P[:, :, k] @ hi @ hi) for k in range(m)])
        flo = np.array([(spec.tensor.P[:, :, k] @ lo @ lo) for k in range(m)])
        J[:, l] = (fhi - flo) / (2 * h)
    return J


def test_jacobian_matches_finite_differences(gen):
    specs = [ops.v_alpha(0.35), ops.w_alpha(0.85),
             ops.two_allele(0.15, 0.55, 0.4)]
    for spec in specs:
        worst = 0.0
        for x in random_points(gen, 100, m=spec.m):
            J = ops.jacobian(spec, x)
            worst = max(worst, np.abs(J - _fd_jacobian(spec, x)).max())
        assert worst <= 1e-6


def test_convex_combine_endpoints():
    t0 = ops.v_alpha(0.0)
    t1 = ops.v_alpha(1.0)
    assert np.array_equal(ops.convex_combine(t0, t1, 0.0).P, t0.tensor.P)
    assert np.array_equal(ops.convex_combine(t0, t1, 1.0).P, t1.tensor.P)


def test_convex_combine_equals_family(gen):
    x = make_point((0.5, 0.3, 0.2))
    comb = ops.generic(ops.convex_combine(ops.w_alpha(0.0), ops.w_alpha(1.0), 0.3))
    direct = ops.w_alpha(0.3)
    assert distance(ops.apply(comb, x), ops.apply(direct, x)) <= 1e-15
    for _ in range(50):
        a = gen.next_float()
        x = make_point(gen.simplex_point(3))
        comb = ops.generic(
            ops.convex_combine(ops.v_alpha(0.0), ops.v_alpha(1.0), a))
        assert distance(ops.apply(comb, x), ops.apply(ops.v_alpha(a), x)) <= 1e-15


def test_convex_combine_dimension_mismatch():
    with pytest.raises(DimensionError):
        ops.convex_combine(ops.v_alpha(0.1), ops.two_allele(0.1, 0.1, 0.5), 0.5)


def test_tensor_json_round_trip():
    t = ops.v_alpha(0.37).tensor
    again = ops.HeredityTensor.from_json(t.to_json())
    assert np.array_equal(t.P, again.P)
    data = json.loads(t.to_json())
    assert data["m"] == 3


def test_tensor_json_shape_mismatch():
    with pytest.raises(TensorInvariantError):
        ops.HeredityTensor.from_json('{"m": 2, "P": ' +
                                     json.dumps(np.zeros((3, 3, 3)).tolist()) + "}")


def test_tensor_validation():
    P = ops.v_alpha(0.3).tensor.P.copy()
    P[0, 1, 0] += 0.3  # break symmetry and stochasticity
    with pytest.raises(TensorInvariantError):
        ops.HeredityTensor(P)
    P = np.zeros((3, 3, 3))
    with pytest.raises(TensorInvariantError):
        ops.HeredityTensor(P)
    with pytest.raises(DimensionError):
        ops.HeredityTensor(np.ones((4, 4, 4)) / 4)


@settings(max_examples=100, deadline=None)
@given(st.floats(min_value=0.0, max_value=1.0),
       st.floats(min_value=0.0, max_value=1.0),
       st.floats(min_value=0.0, max_value=1.0))
def test_two_allele_stays_on_segment(a, b, p):
    spec = ops.two_allele(a, b, p)
    x = make_point((0.7, 0.3))
    for _ in range(5):
        x = ops.apply(spec, x)
        assert abs(sum(x.coords) - 1.0) <= 1e-12
        assert min(x.coords) >= 0.0
