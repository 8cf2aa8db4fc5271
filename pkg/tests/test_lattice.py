import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hexsum.fourier import phi
from hexsum.lattice import (
    HexIndex,
    HexPoint,
    LATTICE,
    fold,
    fold_arrays,
    from_cartesian,
    index_shell,
    indices_up_to,
    is_in_omega,
    to_cartesian,
)

EPS = 1e-12


def test_from_cartesian_frozen_value():
    # the Cartesian point (2/sqrt(3), 0) maps to the lattice vertex (1, 0, -1)
    t = from_cartesian(2.0 / math.sqrt(3.0), 0.0)
    assert abs(t.t1 - 1.0) < 1e-15
    assert t.t2 == 0.0
    assert abs(t.t3 + 1.0) < 1e-15


def test_cartesian_roundtrip():
    rng = np.random.default_rng(7)
    for _ in range(200):
        x1, x2 = rng.uniform(-5, 5, size=2)
        y1, y2 = to_cartesian(from_cartesian(x1, x2))
        assert abs(y1 - x1) < EPS and abs(y2 - x2) < EPS


def test_generator_matrix_and_area():
    a1 = to_cartesian(HexPoint(1.0, 0.0, -1.0))
    a2 = to_cartesian(HexPoint(0.0, 1.0, -1.0))
    det = a1[0] * a2[1] - a2[0] * a1[1]
    assert abs(det - 2.0 * math.sqrt(3.0) / 3.0) < 1e-15
    assert LATTICE.omega_area == 3.0
    assert LATTICE.generator.shape == (2, 2)
    assert abs(LATTICE.generator[0, 0] - math.sqrt(3.0)) < 1e-15


def test_hexpoint_rejects_nonzero_sum():
    with pytest.raises(ValueError):
        HexPoint(0.5, 0.5, 0.5)
    # within tolerance is fine
    HexPoint(0.5, 0.5, -1.0 + 1e-13)


def test_hexindex_rejects_nonzero_sum():
    with pytest.raises(ValueError):
        HexIndex(1, 1, 1)


def test_hexindex_degree_and_negate():
    k = HexIndex(3, -1, -2)
    assert k.degree() == 3
    assert k.negate() == HexIndex(-3, 1, 2)
    assert k.as_tuple() == (3, -1, -2)


def test_z_angles():
    t = HexPoint(1.0, 0.0, -1.0)
    assert abs(t.z1 - 2.0 * math.pi / 3.0) < 1e-15
    assert abs(t.z2 + 4.0 * math.pi / 3.0) < 1e-15
    assert abs(t.z3 - 2.0 * math.pi / 3.0) < 1e-15
    rng = np.random.default_rng(3)
    for _ in range(50):
        a, b = rng.uniform(-2, 2, size=2)
        p = HexPoint(a, b, -a - b)
        assert abs(p.z1 + p.z2 + p.z3) < 1e-12


def test_shell_sizes():
    assert [len(index_shell(nu)) for nu in range(6)] == [1, 6, 12, 18, 24, 30]


def test_shell_matches_brute_force():
    for nu in range(13):
        brute = set()
        for k1 in range(-nu, nu + 1):
            for k2 in range(-nu, nu + 1):
                k3 = -k1 - k2
                if max(abs(k1), abs(k2), abs(k3)) == nu:
                    brute.add((k1, k2, k3))
        got = [k.as_tuple() for k in index_shell(nu)]
        assert set(got) == brute
        assert len(got) == len(brute)
        assert got == sorted(got)


def test_shell_closed_under_negation():
    for nu in (1, 4, 9):
        shell = set(index_shell(nu))
        assert {k.negate() for k in shell} == shell


def test_indices_up_to_count():
    # 1 + sum_{nu<=D} 6 nu = 1 + 3 D (D + 1)
    for d in (0, 1, 5, 8):
        assert len(indices_up_to(d)) == 1 + 3 * d * (d + 1)


def test_negative_arguments_rejected():
    with pytest.raises(ValueError):
        index_shell(-1)
    with pytest.raises(ValueError):
        indices_up_to(-2)


coords = st.floats(
    min_value=-20.0, max_value=20.0, allow_nan=False, allow_infinity=False
)


@given(coords, coords)
@settings(max_examples=200)
def test_fold_lands_in_omega_and_is_idempotent(a, b):
    t = HexPoint(a, b, -(a + b))
    ft = fold(t)
    assert is_in_omega(ft)
    assert fold(ft).as_tuple() == ft.as_tuple()


@given(coords, coords)
@settings(max_examples=100)
def test_fold_preserves_basis_monomials(a, b):
    t = HexPoint(a, b, -(a + b))
    ft = fold(t)
    for k in (HexIndex(1, 0, -1), HexIndex(2, -1, -1), HexIndex(0, 3, -3)):
        assert abs(phi(k, ft) - phi(k, t)) < 1e-9


def test_fold_identity_inside_omega():
    t = HexPoint(0.25, -0.5, 0.25)
    assert fold(t) is t


def test_fold_arrays_matches_scalar():
    rng = np.random.default_rng(11)
    t1 = rng.uniform(-8, 8, size=300)
    t2 = rng.uniform(-8, 8, size=300)
    f1, f2, f3 = fold_arrays(t1, t2)
    for i in range(300):
        ft = fold(HexPoint(t1[i], t2[i], -(t1[i] + t2[i])))
        assert f1[i] == pytest.approx(ft.t1, abs=1e-12)
        assert f2[i] == pytest.approx(ft.t2, abs=1e-12)
        assert f3[i] == pytest.approx(ft.t3, abs=1e-12)


def test_tiling_exactly_one_translate_in_omega():
    rng = np.random.default_rng(5)
    for _ in range(150):
        a, b = rng.uniform(-4, 4, size=2)
        hits = 0
        for j1 in range(-9, 10):
            for j2 in range(-9, 10):
                if (j1 - j2) % 3 != 0:
                    continue
                u, v = a + j1, b + j2
                if is_in_omega(HexPoint(u, v, -u - v)):
                    hits += 1
        assert hits == 1


def test_fold_boundary_rounding_regression():
    # t2 - floor(t2) rounds up to exactly 1.0 here; the reduced point then
    # sits on an excluded edge of the base cell and must be renormalized
    tiny = -3.7977372615123547e-69
    for t in (
        HexPoint(1.0, tiny, -(1.0 + tiny)),
        HexPoint(tiny, 1.0, -(tiny + 1.0)),
        HexPoint(3.0 + tiny, tiny, -(3.0 + 2 * tiny)),
        HexPoint(-1.0 - 1e-18, -1.0 - 1e-18, 2.0 + 2e-18),
    ):
        ft = fold(t)
        assert is_in_omega(ft)
        f1, f2, f3 = fold_arrays(np.array([t.t1]), np.array([t.t2]))
        assert is_in_omega(HexPoint(float(f1[0]), float(f2[0]), float(f3[0])))


def test_omega_membership_boundary():
    assert is_in_omega(HexPoint(-1.0, 0.0, 1.0))     # t1 = -1 included
    assert not is_in_omega(HexPoint(1.0, 0.0, -1.0))  # t1 = 1 excluded
    assert is_in_omega(HexPoint(0.0, -1.0, 1.0))      # t3 = 1 included
    assert not is_in_omega(HexPoint(0.0, 1.0, -1.0))  # t2 = 1 excluded
