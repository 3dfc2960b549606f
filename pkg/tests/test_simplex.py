import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qso_dynamics.errors import DimensionError, NegativeMassError, ZeroSumError
from qso_dynamics.simplex import (
    CENTER,
    CYCLE,
    E1,
    E2,
    RegionLabel,
    classify_region,
    distance,
    make_point,
    permute,
    to_planar,
)

from conftest import random_points


def test_make_point_vertex_passthrough():
    assert make_point((1, 0, 0)).coords == (1.0, 0.0, 0.0)


def test_make_point_symmetric_normalization():
    assert make_point((1, 1, 1)).coords == (1 / 3, 1 / 3, 1 / 3)


def test_make_point_clamps_tiny_negative():
    p = make_point((0.2, -1e-12, 0.8))
    assert p.coords == (0.2, 0.0, 0.8)


@pytest.mark.parametrize("raw,err", [
    ((0.5, 0.5, 0.0, 0.0), DimensionError),
    ((1.0,), DimensionError),
    ((0.5, -1e-6, 0.5), NegativeMassError),
    ((0.0, 0.0, 0.0), ZeroSumError),
])
def test_make_point_errors(raw, err):
    with pytest.raises(err):
        make_point(raw)


@settings(max_examples=200, deadline=None)
@given(st.lists(st.floats(min_value=1e-12, max_value=1e6), min_size=3, max_size=3))
def test_make_point_normalizes(raw):
    p = make_point(raw)
    assert abs(sum(p.coords) - 1.0) <= 1e-12
    assert all(c >= 0.0 for c in p.coords)


def test_permute_canonical():
    p = permute(CYCLE, make_point((0.5, 0.3, 0.2)))
    assert p.coords == (0.3, 0.2, 0.5)


def test_permute_center_fixed():
    assert permute(CYCLE, CENTER).coords == CENTER.coords


def test_permute_order_three():
    x = make_point((0.7, 0.2, 0.1))
    y = x
    for _ in range(3):
        y = permute(CYCLE, y)
    assert y.coords == x.coords


def test_permute_rejects_two_coordinates():
    with pytest.raises(DimensionError):
        permute(CYCLE, make_point((0.4, 0.6)))


def test_permute_preserves_distance(gen):
    for _ in range(200):
        x = make_point(gen.simplex_point(3))
        y = make_point(gen.simplex_point(3))
        d0 = distance(x, y)
        d1 = distance(permute(CYCLE, x), permute(CYCLE, y))
        assert abs(d0 - d1) <= 1e-15


def test_distance_examples():
    assert distance(E1, E1) == 0.0
    assert distance(E1, E2) == pytest.approx(math.sqrt(2), abs=1e-15)
    assert distance(CENTER, E1) == pytest.approx(math.sqrt(2 / 3), abs=1e-15)


def test_distance_dimension_mismatch():
    with pytest.raises(DimensionError):
        distance(E1, make_point((0.4, 0.6)))


@pytest.mark.parametrize("coords,label", [
    ((0.6, 0.3, 0.1), RegionLabel.S1),
    ((0.585, 0.11, 0.305), RegionLabel.S2),
    ((0.5, 0.25, 0.25), RegionLabel.L1),
    ((0.25, 0.5, 0.25), RegionLabel.L2),
    ((0.25, 0.25, 0.5), RegionLabel.L3),
    ((1 / 3, 1 / 3, 1 / 3), RegionLabel.CENTER),
])
def test_classify_region(coords, label):
    assert classify_region(make_point(coords)).label is label


def test_classify_region_all_sectors():
    cases = {
        (0.6, 0.3, 0.1): RegionLabel.S1,
        (0.6, 0.1, 0.3): RegionLabel.S2,
        (0.3, 0.1, 0.6): RegionLabel.S3,
        (0.1, 0.3, 0.6): RegionLabel.S4,
        (0.1, 0.6, 0.3): RegionLabel.S5,
        (0.3, 0.6, 0.1): RegionLabel.S6,
    }
    for coords, label in cases.items():
        assert classify_region(make_point(coords)).label is label


def test_classify_region_witnessing_order():
    r = classify_region(make_point((0.585, 0.11, 0.305)))
    assert r.order == (0, 2, 1)


# The cycle permutation relabels sectors two steps forward (S1 -> S3 -> S5
# and S2 -> S4 -> S6) and lines backward (l1 -> l3 -> l2), as enumeration
# over sampled points shows.
_SECTOR_IMAGE = {
    RegionLabel.S1: RegionLabel.S3,
    RegionLabel.S2: RegionLabel.S4,
    RegionLabel.S3: RegionLabel.S5,
    RegionLabel.S4: RegionLabel.S6,
    RegionLabel.S5: RegionLabel.S1,
    RegionLabel.S6: RegionLabel.S2,
    RegionLabel.L1: RegionLabel.L3,
    RegionLabel.L2: RegionLabel.L1,
    RegionLabel.L3: RegionLabel.L2,
    RegionLabel.CENTER: RegionLabel.CENTER,
}


def test_permutation_relabels_regions(gen):
    seen = set()
    for x in random_points(gen, 500):
        before = classify_region(x).label
        after = classify_region(permute(CYCLE, x)).label
        assert after is _SECTOR_IMAGE[before]
        seen.add(before)
    for line_pt in [(0.5, 0.25, 0.25), (0.25, 0.5, 0.25), (0.25, 0.25, 0.5)]:
        x = make_point(line_pt)
        assert classify_region(permute(CYCLE, x)).label is \
            _SECTOR_IMAGE[classify_region(x).label]
        seen.add(classify_region(x).label)
    assert len(seen) >= 9


def test_planar_map_is_similarity(gen):
    pts = np.array([gen.simplex_point(3) for _ in range(100)])
    uv = to_planar(pts)
    for _ in range(200):
        i = gen.next_u64() % 100
        j = gen.next_u64() % 100
        d3 = np.linalg.norm(pts[i] - pts[j])
        d2 = np.linalg.norm(uv[i] - uv[j])
        assert abs(d3 - d2 * math.sqrt(2)) <= 1e-14


def test_planar_corners():
    np.testing.assert_allclose(to_planar(np.array([1.0, 0, 0])), [0, 0])
    np.testing.assert_allclose(to_planar(np.array([0, 1.0, 0])), [1, 0])
    np.testing.assert_allclose(
        to_planar(np.array([0, 0, 1.0])), [0.5, math.sqrt(3) / 2])
