from __future__ import annotations

import math
from fractions import Fraction as F

import numpy as np
import pytest

from conftest import CASES, case_id, identity, make_spec, random_test_point, trace
from orbitopes.catalog import Verdict, a_coordinates, embed_a, orbit_sample
from orbitopes.coorbitope import (
    NotProportional,
    Proportional,
    check_self_polarity,
    extreme_orbits,
    has_rational_coordinates,
    is_biorbitope,
    polar_membership,
    polar_pencil,
    polar_report,
    polar_value,
    rational_approximation,
)
from orbitopes.errors import NotBiorbitope, NotFullDimensional, UnsupportedWeight
from orbitopes.matrix_core import trace_form
from orbitopes.momentum_polytope import MomentumPolytope
from orbitopes.root_system import weyl_orbit


def nuclear(y):
    return np.linalg.svd(y, compute_uv=False).sum()


# --- polar membership ---------------------------------------------------

def test_operator_ball_polar_is_nuclear_ball():
    spec = make_spec("RectReal", 3, 2, (1, 1))
    rng = np.random.default_rng(0)
    for _ in range(1000):
        y = rng.standard_normal((3, 2)) * rng.uniform(0.1, 0.8)
        r = polar_membership(spec, y)
        assert r.verdict.feasible == (nuclear(y) <= 1) or abs(1 - nuclear(y)) < 1e-8


@pytest.mark.parametrize("case", CASES, ids=case_id)
def test_normalized_base_point_on_boundary(case):
    spec = make_spec(*case)
    if not MomentumPolytope(spec.system, spec.x).is_full_dimensional():
        pytest.skip("degenerate x")
    fam = spec.family
    X = embed_a(fam, [float(t) for t in spec.x.dominant])
    y = X * (1.0 / trace_form(X, X))
    assert polar_membership(spec, y).verdict is Verdict.BOUNDARY
    assert polar_membership(spec, fam.space.zero()).verdict is Verdict.INSIDE


def test_polar_requires_full_dimension():
    spec = make_spec("RectReal", 3, 2, (0, 0))
    with pytest.raises(NotFullDimensional):
        polar_membership(spec, np.zeros((3, 2)))
    with pytest.raises(NotFullDimensional):
        extreme_orbits(spec)


@pytest.mark.parametrize("case", CASES, ids=case_id)
def test_polar_value_is_orbit_maximum(case):
    """polar_value(y) dominates <g x, y> on samples and is attained at a Weyl vertex."""
    spec = make_spec(*case)
    fam = spec.family
    rng = np.random.default_rng(1)
    xs = orbit_sample(spec, 30, seed=2)
    for _ in range(5):
        y = random_test_point(spec, rng)
        if fam.is_hermitian:  # the polar is taken in the traceless part
            y = y - identity(fam) * (trace(y) / fam.n)
        v = polar_value(spec, y)
        assert all(trace_form(g, y) <= v + 1e-9 for g in xs)
        ay = a_coordinates(fam, y).dominant
        best = max(fam.scale * float(np.dot([float(t) for t in w], ay))
                   for w in weyl_orbit(spec.system, spec.x.dominant))
        assert v == pytest.approx(best)


# --- extreme orbits ----------------------------------------------------

@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_so_extreme_points(n):
    zs = {e.z for e in extreme_orbits(make_spec("SquareRealSpecial", n, n, (1,) * n))}
    expected = {(1,) + (0,) * (n - 1), tuple(F(1, n - 2) for _ in range(n - 1)) + (F(-1, n - 2),)}
    if n == 3:
        # D_3: x = I_3 lies on a single wall, the polar has one extreme orbit
        assert zs == {tuple(F(1) for _ in range(2)) + (F(-1),)}
    else:
        assert zs == expected


@pytest.mark.parametrize("n", [2, 3, 4])
def test_rect_real_extreme_points(n):
    z = [e.z for e in extreme_orbits(make_spec("RectReal", n + 1, n, (1,) * n))]
    assert z == [(1,) + (0,) * (n - 1)]
    z = [e.z for e in extreme_orbits(make_spec("RectReal", n + 1, n, (1,) + (0,) * (n - 1)))]
    assert z == [(1,) * n]


@pytest.mark.parametrize("case", CASES, ids=case_id)
def test_extreme_point_supports_orbitope(case):
    spec = make_spec(*case)
    P = MomentumPolytope(spec.system, spec.x)
    if not P.is_full_dimensional():
        pytest.skip("degenerate x")
    verts = weyl_orbit(spec.system, spec.x.dominant)
    for e in extreme_orbits(spec):
        pair = [spec.scale * sum(float(a) * float(b) for a, b in zip(v, e.z)) for v in verts]
        assert max(pair) == pytest.approx(1.0)
        Z = embed_a(spec.family, [float(t) for t in e.z])
        assert polar_membership(spec, Z).verdict is Verdict.BOUNDARY


# --- biorbitopes ---------------------------------------------------------

def test_biorbitope_examples():
    assert is_biorbitope(make_spec("HermComplex", 4, 4, (1, 0, 0, 0))).theorem
    for n in (2, 3, 4):
        b = is_biorbitope(make_spec("RectReal", n + 1, n, (1,) * n))
        assert b.theorem and b.single_facet_class and not b.anomaly
    for n in (4, 5):
        for x in [(1,) * n, (1,) + (0,) * (n - 1), (2, 1) + (0,) * (n - 2)]:
            b = is_biorbitope(make_spec("SquareRealSpecial", n, n, x))
            assert not b.theorem and not b.single_facet_class


def test_biorbitope_needs_nonzero():
    with pytest.raises(NotFullDimensional):
        is_biorbitope(make_spec("HermReal", 3, 3, (1, 1, 1)))


# --- self-polarity -----------------------------------------------------

@pytest.mark.parametrize("x", [3, F(1, 2), 1.5])
def test_rank_one_is_proportional(x):
    spec = make_spec("RectReal", 2, 1, (x,))
    r = check_self_polarity(spec)
    assert isinstance(r, Proportional) and r.agrees
    assert float(r.c) == pytest.approx(1 / float(x) ** 2)


def test_b2_cube_is_not_proportional():
    r = check_self_polarity(make_spec("RectReal", 3, 2, (1, 1)))
    assert isinstance(r, NotProportional) and r.verified
    assert r.z == (1, 0)
    assert r.ratios == pytest.approx((1.0, 0.5))


def test_hermitian_simplex_reported_as_computed():
    r2 = check_self_polarity(make_spec("HermComplex", 2, 2, (1, 0)))
    assert isinstance(r2, Proportional)
    r3 = check_self_polarity(make_spec("HermComplex", 3, 3, (1, 0, 0)))
    assert isinstance(r3, NotProportional) and r3.verified


def test_self_polarity_requires_biorbitope():
    with pytest.raises(NotBiorbitope):
        check_self_polarity(make_spec("SquareRealSpecial", 4, 4, (1, 1, 1, 1)))


# --- rational coordinates ---------------------------------------------

def test_rational_coordinate_examples():
    r = has_rational_coordinates(make_spec("RectReal", 4, 3, (1, 1, 1)))
    assert r.rational and r.b == 1
    r = has_rational_coordinates(make_spec("RectReal", 3, 2, (math.sqrt(2), math.sqrt(2))))
    assert r.rational and r.b == pytest.approx(math.sqrt(2))
    assert not has_rational_coordinates(make_spec("RectReal", 4, 3, (math.sqrt(2), 1, 0))).rational
    assert has_rational_coordinates(make_spec("RectReal", 4, 3, (0.75, 0.5, 0.25))).rational


def test_rational_approximation():
    assert rational_approximation(0.75) == F(3, 4)
    assert rational_approximation(1 / 3) == F(1, 3)
    assert rational_approximation(22 / 7) == F(22, 7)
    assert rational_approximation(math.sqrt(2)) is None
    assert rational_approximation(math.pi) is None


# --- polar pencils -----------------------------------------------------

@pytest.mark.parametrize("tag,m,n,x", [
    ("SquareRealSpecial", 3, 3, (1, 1, 1)), ("SquareRealSpecial", 4, 4, (1, 1, 1, 1)),
    ("RectReal", 4, 3, (1, 1, 1)), ("RectReal", 4, 3, (1, 1, 0)), ("RectComplex", 3, 2, (2, 0)),
    ("RectQuat", 3, 2, (1, 1)), ("HermComplex", 3, 3, (1, 0, 0)), ("HermReal", 4, 4, (1, 1, 0, 0)),
    ("SkewReal", 5, 5, (1, 1)), ("SkewReal", 6, 6, (1, 1, 1)), ("SkewQuat", 2, 2, (1, 1)),
    ("SymComplex", 3, 3, (1, 0, 0)), ("SkewSymComplex", 4, 4, (1, 1)),
])
def test_polar_pencil_agrees(tag, m, n, x):
    spec = make_spec(tag, m, n, x)
    pen = polar_pencil(spec)
    assert len(pen.blocks) == 1
    rng = np.random.default_rng(3)
    for _ in range(100):
        y = spec.family.space.random(rng) * rng.uniform(0.05, 0.6)
        a = polar_membership(spec, y)
        b = pen.membership(y, eps=1e-7)
        assert a.verdict.feasible == b.verdict.feasible or abs(a.slack) <= 1e-7


def test_polar_pencil_examples():
    so = polar_pencil(make_spec("SquareRealSpecial", 4, 4, (1, 1, 1, 1)))
    assert so.blocks[0].kind == "half_spin_plus" and so.blocks[0].level == F(1, 2)
    nuc = polar_pencil(make_spec("RectReal", 4, 3, (1, 1, 1)))
    assert nuc.blocks[0].kind == "exterior_3"
    two = polar_pencil(make_spec("RectReal", 4, 3, (1, 1, 0)))
    assert two.blocks[0].kind == "exterior_2"


def test_polar_pencil_unsupported():
    with pytest.raises(UnsupportedWeight, match="tensor product"):
        polar_pencil(make_spec("RectReal", 4, 3, (2, 1, 0)))
    with pytest.raises(UnsupportedWeight):
        polar_pencil(make_spec("RectReal", 4, 3, (1, math.sqrt(2), 0)))


def test_polar_report_json():
    rep = polar_report(make_spec("RectReal", 3, 2, (1, 1))).to_json()
    assert rep["facet_indices"] == [1]
    assert rep["self_polarity"]["result"] == "NotProportional"
    assert rep["extreme_points"] == [{"index": 1, "z": [1, 0]}]
