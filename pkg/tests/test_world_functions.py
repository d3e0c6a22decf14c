import io
import json
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from tgeom import (
    ConfigError,
    DistortionParams,
    DomainError,
    GeometryError,
    RegionSpec,
    SigmaMatrix,
    build_sigma_matrix,
    distorted_sigma,
    euclidean_sigma,
    gram_report,
    load_geometry,
    polygon_region_sigma,
    read_sigma_csv,
    sphere_sigma,
    tabulated_sigma,
    write_sigma_csv,
)
from tgeom.world_functions import CoordinateDomain, WorldFunction

from conftest import GEOMETRIES, sample_points
from oracles import SQUARE, U_REGION, region_sigma

U = polygon_region_sigma(U_REGION)


# -- euclidean


def test_euclidean_examples():
    eu = euclidean_sigma(2)
    assert eu((0, 0), (3, 4)) == 12.5
    assert euclidean_sigma(3)((7, -2, 1), (7, -2, 1)) == 0.0


def test_euclidean_random_pairs(rng):
    eu = euclidean_sigma(5)
    p, q = rng.normal(size=(2, 100, 5))
    for a, b in zip(p, q):
        assert abs(eu(a, b) - 0.5 * np.sum((a - b) ** 2)) <= 1e-12


def test_euclidean_batch_agrees(rng):
    eu = euclidean_sigma(3)
    p, q = rng.normal(size=(2, 50, 3))
    assert np.allclose(eu.sigma_many(p, q), [eu(a, b) for a, b in zip(p, q)], rtol=1e-15, atol=0)


@pytest.mark.parametrize("bad", [0, -1, 1.5, True])
def test_euclidean_rejects_dimension(bad):
    with pytest.raises(GeometryError):
        euclidean_sigma(bad)


# -- distorted


def test_distorted_identity_at_zero(rng):
    eu = euclidean_sigma(2)
    dz = distorted_sigma(eu, DistortionParams(0.0))
    for a, b in rng.uniform(-3, 3, (100, 2, 2)):
        assert dz(a, b) == eu(a, b)


def test_distorted_shift():
    # constant lowering of sigma between distinct points
    assert distorted_sigma(euclidean_sigma(2), 0.1)((0, 0), (1, 0)) == pytest.approx(0.4, abs=1e-15)


def test_distorted_keeps_zero_diagonal(rng):
    wf = distorted_sigma(euclidean_sigma(3), 0.1)
    for p in rng.normal(size=(20, 3)):
        assert wf(p, p) == 0.0


def test_distorted_can_go_negative():
    wf = distorted_sigma(euclidean_sigma(2), 0.1)
    assert wf((0, 0), (0.1, 0)) == pytest.approx(0.005 - 0.1)


def test_distorted_rejects_negative_d():
    with pytest.raises(GeometryError):
        distorted_sigma(euclidean_sigma(2), -0.1)


def test_distorted_over_sphere_uses_projection():
    wf = distorted_sigma(sphere_sigma(1.0), 0.1)
    assert wf((1, 0, 0), (2, 0, 0)) == 0.0
    assert wf((1, 0, 0), (0, 1, 0)) == pytest.approx(0.5 * (math.pi / 2) ** 2 - 0.1)


def test_additive_jump_is_flat_embeddable(rng):
    """sigma + d (d > 0) embeds isometrically: every point just gets its own
    orthogonal offset sqrt(d). Such a deformation cannot widen tubes, which
    is why the shipped deformation lowers sigma instead."""
    eu = euclidean_sigma(2)
    up = WorldFunction(
        "raised", CoordinateDomain(2), True,
        lambda p, q: 0.0 if p == q else eu.raw(p, q) + 0.1,
    )
    pts = [tuple(x) for x in rng.uniform(-1, 1, (6, 2))]
    assert gram_report(up, pts[0], pts[1:]).embeddable
    assert not gram_report(distorted_sigma(eu, 0.1), pts[0], pts[1:]).embeddable


# -- region


def test_convex_square_is_straight():
    wf = polygon_region_sigma(SQUARE)
    assert wf((0, 0), (1, 1)) == 1.0


def test_slit_detour():
    s = U((0.5, 2.5), (2.5, 2.5))
    length = math.sqrt(2 * s)
    assert length > 2
    assert s == pytest.approx(region_sigma((0.5, 2.5), (2.5, 2.5)), rel=1e-12)
    assert length == pytest.approx(2 * math.sqrt(0.9**2 + 1.5**2) + 0.2, rel=1e-12)


def test_unobstructed_pair_is_euclidean():
    p, q = (0.2, 2.8), (1.1, 0.3)
    assert U(p, q) == pytest.approx(euclidean_sigma(2)(p, q), abs=1e-12)
    assert U(p, q) == pytest.approx(region_sigma(p, q), abs=1e-12)


def test_region_matches_visibility_oracle(rng):
    pts = sample_points(U, 12, rng)
    for i in range(len(pts)):
        for k in range(i + 1, len(pts)):
            assert U(pts[i], pts[k]) == pytest.approx(region_sigma(pts[i], pts[k]), rel=1e-10, abs=1e-12)


def test_region_path_along_slit_boundary():
    # both ends on the slit walls: the path wraps around the slit's bottom edge
    s = U((1.4, 2.0), (1.6, 2.0))
    assert math.sqrt(2 * s) == pytest.approx(2.2, rel=1e-12)


def test_region_rejects_outside_point():
    with pytest.raises(DomainError, match="point 1"):
        U((0.5, 0.5), (1.5, 2.0))
    with pytest.raises(DomainError):
        U((0.5, 0.5), (4.0, 0.0))


@pytest.mark.parametrize(
    "verts",
    [
        [(0, 0), (1, 0)],
        [(0, 0), (0, 1), (1, 1), (1, 0)],  # clockwise
        [(0, 0), (1, 1), (1, 0), (0, 1)],  # bow tie
    ],
)
def test_region_spec_validation(verts):
    with pytest.raises(GeometryError):
        RegionSpec(tuple(verts))


def test_convex_region_equals_euclidean(rng):
    wf = polygon_region_sigma(SQUARE)
    eu = euclidean_sigma(2)
    for a, b in rng.uniform(0, 1, (200, 2, 2)):
        assert abs(wf(a, b) - eu(a, b)) <= 1e-10


_inside_u = st.tuples(st.floats(0, 3), st.floats(0, 3)).filter(
    lambda p: not (1.4 < p[0] < 1.6 and p[1] > 1)
)


@settings(max_examples=60, deadline=None)
@given(_inside_u, _inside_u, _inside_u)
def test_region_triangle_inequality(a, b, c):
    rho = lambda p, q: math.sqrt(2 * U(p, q))
    assert rho(a, c) <= rho(a, b) + rho(b, c) + 1e-9


# -- sphere


def test_sphere_quarter_circle():
    assert sphere_sigma(1.0)((0, 0, 1), (1, 0, 0)) == pytest.approx(0.5 * (math.pi / 2) ** 2, rel=1e-15)


@pytest.mark.parametrize("r", [0.5, 1.0, 6371.0])
def test_sphere_antipodes(r):
    assert sphere_sigma(r)((0, 0, 1), (0, 0, -1)) == pytest.approx(0.5 * (math.pi * r) ** 2, rel=1e-15)


def test_sphere_matches_arccos_oracle(rng):
    wf = sphere_sigma(2.0)
    p, q = rng.normal(size=(2, 200, 3))
    for a, b in zip(p, q):
        ang = math.acos(np.dot(a, b) / (np.linalg.norm(a) * np.linalg.norm(b)))
        assert wf(a, b) == pytest.approx(0.5 * (2.0 * ang) ** 2, abs=1e-10)


def test_sphere_projects_and_rejects_zero():
    wf = sphere_sigma(1.0)
    assert wf((0, 0, 5), (0, 0, 1)) == 0.0
    with pytest.raises(DomainError):
        wf((0, 0, 0), (1, 0, 0))
    with pytest.raises(GeometryError):
        sphere_sigma(0.0)


# -- tabulated and files


def test_tabulated_lookup():
    assert tabulated_sigma([[0, 1], [1, 0]])(0, 1) == 1.0


def test_tabulated_round_trip(tmp_path):
    eu = euclidean_sigma(2)
    pts = [(0, 0), (1, 0), (0.3, -2), (5, 5), (-1.25, 0.1)]
    table = build_sigma_matrix(eu, pts)
    path = tmp_path / "g.csv"
    write_sigma_csv(table, path)
    wf = tabulated_sigma(read_sigma_csv(path))
    assert wf.symmetric
    for i, p in enumerate(pts):
        for k, q in enumerate(pts):
            assert wf(i, k) == (eu(p, q) if i != k else 0.0)


def test_tabulated_asymmetric():
    wf = tabulated_sigma([[0, 1, 2], [3, 0, 4], [5, 6, 0]], names=["a", "b", "c"])
    assert not wf.symmetric
    assert (wf(0, 1), wf(1, 0)) == (1.0, 3.0)
    assert wf.point_names == ("a", "b", "c")


def test_tabulated_rejections():
    with pytest.raises(GeometryError, match="diagonal entry 1"):
        tabulated_sigma([[0, 1], [1, 0.5]])
    with pytest.raises(GeometryError):
        tabulated_sigma([[0, 1, 2], [1, 0, 3]])


def test_csv_without_header_and_errors():
    assert read_sigma_csv(io.StringIO("0,2\n2,0\n")).values.tolist() == [[0, 2], [2, 0]]
    with pytest.raises(GeometryError, match="declares n=3"):
        read_sigma_csv(io.StringIO("n=3\n0,2\n2,0\n"))
    with pytest.raises(GeometryError, match="line 2"):
        read_sigma_csv(io.StringIO("0,1\n1,x\n"))


# -- config


def test_load_euclidean():
    wf = load_geometry('{"type": "euclidean", "dimension": 3}')
    assert wf.dimension == 3 and wf((0, 0, 0), (1, 1, 1)) == 1.5


def test_load_nested_distorted():
    wf = load_geometry(json.dumps({"type": "distorted", "base": {"type": "euclidean", "dimension": 2}, "d": 0.1}))
    assert wf((0, 0), (1, 0)) == pytest.approx(0.4)


def test_load_tabulated(tmp_path):
    table = build_sigma_matrix(euclidean_sigma(1), [(0,), (1,), (3,)])
    write_sigma_csv(table, tmp_path / "g.csv")
    wf = load_geometry('{"type": "tabulated", "path": "g.csv"}', base_dir=tmp_path)
    assert wf.domain.size == 3 and wf(0, 2) == 4.5


def test_load_region_and_sphere():
    assert load_geometry(json.dumps({"type": "region", "vertices": U_REGION})).name.startswith("region")
    assert load_geometry('{"type": "sphere", "radius": 2}')((0, 0, 1), (0, 0, -1)) == pytest.approx(2 * math.pi**2)


@pytest.mark.parametrize(
    "text, match",
    [
        ('{"type": "euclidean",\n "dimension": }', "line 2"),
        ('{"type": "hyperbolic"}', r"\$.type"),
        ('{"type": "euclidean", "dimension": 0}', r"\$"),
        ('{"type": "distorted", "base": {"type": "euclidean"}, "d": 0.1}', r"\$.base: missing field 'dimension'"),
        ('{"type": "distorted", "base": {"type": "euclidean", "dimension": 2}, "d": -1}', r"\$"),
        ('{"type": "sphere", "radius": "big"}', r"\$.radius"),
        ('{"type": "region", "vertices": [[0, 0], [1, 1]]}', r"\$"),
        ('{"type": "tabulated", "path": "nope.csv"}', r"\$.path"),
        ('{"type": "euclidean", "dimension": 2, "d": 1}', "unexpected"),
        ("[1, 2]", "expected an object"),
    ],
)
def test_load_errors(text, match):
    with pytest.raises(ConfigError, match=match):
        load_geometry(text)


# -- invariants across the catalog


def test_catalog_invariants(geometry):
    rng = np.random.default_rng(99)
    pts = sample_points(geometry, 1000, rng)
    for p in pts:
        q = geometry.validate(p)
        assert abs(geometry.raw(q, q)) < 1e-12
    if geometry.symmetric:
        for p, q in zip(pts[:-1], pts[1:]):
            assert abs(geometry(p, q) - geometry(q, p)) <= 1e-12
