import numpy as np
import pytest

from tgeom import (
    Coordinate,
    Discrete,
    DomainError,
    GeometryError,
    SigmaMatrix,
    as_point,
    build_sigma_matrix,
    euclidean_sigma,
    tabulated_sigma,
)

from conftest import sample_points


def test_two_point_euclidean_table():
    m = build_sigma_matrix(euclidean_sigma(2), [(0, 0), (1, 0)])
    assert m.values.tolist() == [[0.0, 0.5], [0.5, 0.0]]
    assert not m.ordered


def test_single_point_table(geometry, rng):
    (p,) = sample_points(geometry, 1, rng)
    assert build_sigma_matrix(geometry, [p]).values.tolist() == [[0.0]]


def test_matches_coordinate_brute_force(rng):
    x = rng.normal(size=(4, 3))
    m = build_sigma_matrix(euclidean_sigma(3), [tuple(r) for r in x])
    for i in range(4):
        for k in range(4):
            expected = 0.5 * sum((x[i, j] - x[k, j]) ** 2 for j in range(3))
            assert abs(m[i, k] - expected) <= 1e-12


def test_diagonal_and_symmetry(geometry, rng):
    pts = sample_points(geometry, 6, rng)
    m = build_sigma_matrix(geometry, pts)
    assert np.all(np.diag(m.values) == 0.0)
    if geometry.symmetric:
        assert np.array_equal(m.values, m.values.T)
    for p in pts:
        q = geometry.validate(p)
        assert abs(geometry.raw(q, q)) < 1e-12


def test_pure(geometry, rng):
    pts = sample_points(geometry, 5, rng)
    assert build_sigma_matrix(geometry, pts) == build_sigma_matrix(geometry, pts)


def test_table_is_read_only():
    m = build_sigma_matrix(euclidean_sigma(1), [(0,), (2,)])
    with pytest.raises(ValueError):
        m.values[0, 1] = 3.0


def test_asymmetric_source_is_ordered():
    wf = tabulated_sigma([[0, 1, 2], [3, 0, 4], [5, 6, 0]])
    m = build_sigma_matrix(wf, [0, 1, 2])
    assert m.ordered
    assert m[0, 1] == 1 and m[1, 0] == 3


@pytest.mark.parametrize(
    "points, index",
    [([(0, 0), (1, 2, 3)], 1), ([(0, 0), 4], 1), ([(0, 0), (1, 1), (float("nan"), 0)], 2)],
)
def test_domain_mismatch_names_index(points, index):
    with pytest.raises(DomainError) as info:
        build_sigma_matrix(euclidean_sigma(2), points)
    assert info.value.index == index
    assert f"point {index}" in str(info.value)


def test_discrete_id_out_of_range():
    wf = tabulated_sigma([[0, 1], [1, 0]])
    with pytest.raises(DomainError, match="point 0"):
        build_sigma_matrix(wf, [2, 0])


def test_empty_tuple_rejected():
    with pytest.raises(GeometryError):
        build_sigma_matrix(euclidean_sigma(2), [])


def test_point_coercion():
    assert as_point(3) == Discrete(3)
    assert as_point([1, 2]) == Coordinate((1.0, 2.0))
    assert as_point(np.int64(2)) == Discrete(2)
    with pytest.raises(GeometryError):
        Discrete(-1)
    with pytest.raises(GeometryError):
        as_point([])


def test_sigma_matrix_must_be_square():
    with pytest.raises(GeometryError):
        SigmaMatrix(np.zeros((2, 3)))
