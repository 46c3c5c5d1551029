from __future__ import annotations

import itertools
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from orbitopes.errors import DimensionError, InvalidRank, OrbitTooLarge
from orbitopes.root_system import (
    Family,
    apply_witness,
    apply_witness_inverse,
    dominant,
    dot,
    in_chamber,
    in_dual_cone,
    make_system,
    mu_values,
    simple_root_values,
    weyl_group_order,
    weyl_orbit,
)

ALL = [(f, n) for f in Family for n in range(1, 5) if not (f is Family.D and n < 2)]


def signed_permutations(n, even_only=False):
    """Independent enumeration of the hyperoctahedral group (or its even half)."""
    for perm in itertools.permutations(range(n)):
        for signs in itertools.product((1, -1), repeat=n):
            if even_only and signs.count(-1) % 2:
                continue
            yield perm, signs


def group_elements(sys):
    n = sys.ambient
    if sys.family is Family.A:
        return [(p, (1,) * n) for p in itertools.permutations(range(n))]
    return list(signed_permutations(n, even_only=sys.family is Family.D))


# --- make_system ----------------------------------------------------------

def test_d4_coweights():
    s = make_system(Family.D, 4)
    assert s.coweights[2] == (F(1, 2), F(1, 2), F(1, 2), F(-1, 2))
    assert s.coweights[3] == (F(1, 2),) * 4


def test_b2_coweights():
    s = make_system(Family.B, 2)
    assert s.coweights == ((1, 0), (1, 1))


def test_a1_root_and_coweight():
    s = make_system(Family.A, 1)
    assert s.simple_roots == ((1, -1),)
    assert s.coweights == ((F(1, 2), F(-1, 2)),)


@pytest.mark.parametrize("fam,n", ALL)
def test_exact_duality(fam, n):
    s = make_system(fam, n)
    for i, r in enumerate(s.simple_roots):
        for j, h in enumerate(s.coweights):
            assert dot(r, h) == (1 if i == j else 0)
    if fam is Family.A:
        assert all(sum(h) == 0 for h in s.coweights)


def test_simple_roots_by_type():
    assert make_system(Family.C, 2).simple_roots[-1] == (0, 2)
    assert make_system(Family.B, 2).simple_roots[-1] == (0, 1)
    assert make_system(Family.BC, 2).simple_roots == make_system(Family.B, 2).simple_roots
    assert make_system(Family.BC, 2).doubled_root == (0, 2)
    assert make_system(Family.D, 3).simple_roots[-1] == (0, 1, 1)


def test_dynkin_shapes():
    d4 = make_system(Family.D, 4)
    assert d4.neighbours(1) == [0, 2, 3]
    assert sorted(d4.end_nodes()) == [0, 2, 3]
    assert make_system(Family.B, 4).end_nodes() == [0, 3]
    for fam, n in ALL:
        assert make_system(fam, n).is_irreducible or (fam is Family.D and n == 2)


@pytest.mark.parametrize("fam,n", [(Family.D, 1), (Family.A, 0), (Family.B, 0)])
def test_invalid_rank(fam, n):
    with pytest.raises(InvalidRank):
        make_system(fam, n)


# --- dominant ------------------------------------------------------------

def test_dominant_examples():
    assert dominant(make_system("B", 2), (-1, 3)).dominant == (3, 1)
    assert dominant(make_system("D", 3), (-1, -1, -1)).dominant == (1, 1, -1)
    assert dominant(make_system("A", 2), (0, 0, 0)).dominant == (0, 0, 0)


def test_dominant_errors():
    with pytest.raises(DimensionError):
        dominant(make_system("B", 2), (1, 2, 3))
    with pytest.raises(DimensionError):
        dominant(make_system("A", 2), (1, 1, 1))


def test_dominant_d_zero_coordinate_nonnegative():
    assert dominant(make_system("D", 3), (0, -2, 1)).dominant == (2, 1, 0)


@pytest.mark.parametrize("fam,n", [(f, n) for f, n in ALL if n <= 3])
def test_dominant_w_invariant_exhaustive(fam, n):
    s = make_system(fam, n)
    base = [F(3), F(-1, 2), F(2), F(-5, 3)][: s.ambient]
    if fam is Family.A:
        base[-1] = -sum(base[:-1])
    d = dominant(s, base).dominant
    assert in_chamber(s, d)
    for w in group_elements(s):
        v = apply_witness(w, base)
        cv = dominant(s, v)
        assert cv.dominant == d
        assert apply_witness(cv.witness, v) == cv.dominant
        assert apply_witness_inverse(cv.witness, cv.dominant) == tuple(v)


coords = st.fractions(min_value=-5, max_value=5, max_denominator=7)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([("B", 3), ("C", 3), ("D", 3), ("D", 4), ("A", 3)]), st.lists(coords, min_size=5, max_size=5))
def test_dominant_idempotent_and_chamber(sysdef, raw):
    s = make_system(*sysdef)
    v = list(raw[: s.ambient])
    if s.family is Family.A:
        v[-1] = -sum(v[:-1])
    d = dominant(s, v).dominant
    assert all(b >= 0 for b in simple_root_values(s, d))
    assert dominant(s, d).dominant == d


# --- weyl_orbit ----------------------------------------------------------

def test_orbit_examples():
    assert weyl_orbit(make_system("B", 2), (1, 1)) == {(a, b) for a in (1, -1) for b in (1, -1)}
    assert len(weyl_orbit(make_system("A", 2), (1, 0, -1))) == 6
    assert weyl_orbit(make_system("D", 2), (1, 0)) == {(1, 0), (-1, 0), (0, 1), (0, -1)}


@pytest.mark.parametrize("fam,n", ALL)
def test_regular_orbit_size_is_group_order(fam, n):
    s = make_system(fam, n)
    v = [F(k + 2) for k in range(s.ambient)][::-1]
    if fam is Family.A:
        mean = sum(v) / len(v)
        v = [t - mean for t in v]
    elif fam is Family.D:
        v[-1] = F(1)  # regular for D needs x_{n-1} > |x_n|
    orbit = weyl_orbit(s, v)
    assert len(orbit) == weyl_group_order(s)
    brute = {apply_witness(w, v) for w in group_elements(s)}
    assert orbit == brute


def test_orbit_cap():
    with pytest.raises(OrbitTooLarge):
        weyl_orbit(make_system("B", 4), (4, 3, 2, 1), cap=100)


# --- simple roots, mu, dual cone ----------------------------------------

def test_simple_root_value_examples():
    b3 = make_system("B", 3)
    assert simple_root_values(b3, (1, 1, 1)) == (0, 0, 1)
    assert simple_root_values(b3, (1, 0, 0)) == (1, 0, 0)
    for fam, n in ALL:
        s = make_system(fam, n)
        assert all(t == 0 for t in simple_root_values(s, (0,) * s.ambient))


def test_mu_values_partial_sums():
    assert mu_values(make_system("B", 3), (3, 2, 1)) == (3, 5, 6)
    assert mu_values(make_system("D", 4), (1, 1, 1, 1)) == (1, 2, 1, 2)


@settings(max_examples=60, deadline=None)
@given(st.lists(coords, min_size=6, max_size=6))
def test_dominance_difference_lies_in_dual_cone(raw):
    s = make_system("C", 3)
    u = dominant(s, raw[:3]).dominant
    v = dominant(s, raw[3:]).dominant
    diff = [a - b for a, b in zip(u, v)]
    # independent: solve diff = sum c_i beta_i and test c >= 0
    B = np.array([[float(t) for t in r] for r in s.simple_roots]).T
    c = np.linalg.solve(B, np.array([float(t) for t in diff]))
    assert in_dual_cone(s, diff) == bool(np.all(c >= -1e-12))
    assert np.allclose(c, [float(m) for m in mu_values(s, diff)])
