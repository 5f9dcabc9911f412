"""Finite-part filtration and backprojection.

The filter is checked against a hand-integrated finite part: for the window
g(lambda) = (1 - lambda^2)^2 on [-1, 1],

    FP int g(lambda) / (lambda - c)^2 dlambda
        = 6 c^2 - 10/3 + g'(c) log((1-c)/(1+c)) - 2 (1 - c^2),

obtained by differentiating the principal-value integral of g/(lambda - c)
in c (the polynomial part integrates term by term). Reconstruction quality
is then measured end to end on small grids.
"""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from funkradon import (
    CoverageError,
    GeometryFamily,
    Phantom,
    Sinogram,
    WindowingError,
    backproject,
    forward_mphi,
    invert,
    pv_filter,
)
from funkradon.fields import Grid
from funkradon.inversion import dcoef_quadrature, reconstruct_riemann
from funkradon.phantom import Gaussian
from funkradon.transform import default_axes, forward_riemann

TAU = 2.0 * np.pi

RADON = GeometryFamily("radon")
HGEO = GeometryFamily("hgeodesic", support_radius=0.7)
PARAB = GeometryFamily("parabola")


def uniform_phi(n, half=False):
    span = np.pi if half else TAU
    return np.arange(n) * (span / n)


def window_sinogram(g_of_lam, m=801, n_phi=4, geom=RADON):
    lam = np.linspace(-1.0, 1.0, m)
    g = g_of_lam(lam)
    data = np.broadcast_to(g, (n_phi, m)).copy()
    return Sinogram(geom, lam, uniform_phi(n_phi), data)


# ---------------------------------------------------------------------------
# normalizer quadrature


def test_dcoef_quadrature_pins():
    assert dcoef_quadrature(RADON, (0.3, -0.2)) == pytest.approx(1.0, rel=1e-12)
    # 1/|grad psi|^2 = 2|x| for the parabola family, constant in phi
    assert dcoef_quadrature(PARAB, (0.3, 0.4)) == pytest.approx(1.0, rel=1e-12)
    assert dcoef_quadrature(HGEO, (0.0, 0.0)) == pytest.approx(0.25, rel=1e-12)


def test_dcoef_quadrature_vectorizes():
    pts = np.array([[0.1, 0.2], [0.3, -0.1], [0.0, 0.4]])
    out = dcoef_quadrature(RADON, pts)
    assert out.shape == (3,)
    assert_allclose(out, 1.0, rtol=1e-12)


def test_dcoef_quadrature_rejects_coarse_grids():
    with pytest.raises(ValueError, match="n_phi >= 8"):
        dcoef_quadrature(RADON, (0.1, 0.1), n_phi=4)


# ---------------------------------------------------------------------------
# finite-part filter


def exact_fp_window(c):
    gp = -4.0 * c + 4.0 * c**3
    return 6.0 * c * c - 10.0 / 3.0 + gp * np.log((1.0 - c) / (1.0 + c)) - 2.0 * (1.0 - c * c)


def test_pv_filter_matches_closed_form_window():
    sino = window_sinogram(lambda lam: (1.0 - lam * lam) ** 2)
    table = pv_filter(sino)
    lam = table.lambda_axis
    interior = np.abs(lam) <= 0.9
    got = table.values[0][interior]
    assert np.max(np.abs(got - exact_fp_window(lam[interior]))) <= 2e-4
    # every phi row saw the same data
    assert np.array_equal(table.values[0], table.values[-1])


def test_pv_filter_center_node_value():
    # FP int (1 - l^2)^2 / l^2 dl = -2 - 4 + 2/3 = -16/3
    sino = window_sinogram(lambda lam: (1.0 - lam * lam) ** 2, m=1601)
    mid = 800
    got = pv_filter(sino).values[0][mid]
    assert got == pytest.approx(-16.0 / 3.0, abs=5e-5)


def test_pv_filter_odd_data_vanishes_at_center():
    sino = window_sinogram(lambda lam: lam * (1.0 - lam * lam) ** 2)
    table = pv_filter(sino)
    scale = np.max(np.abs(table.values))
    assert abs(table.values[0][400]) <= 1e-10 * scale


def test_pv_filter_zero_data():
    sino = window_sinogram(lambda lam: np.zeros_like(lam))
    table = pv_filter(sino)
    assert np.all(table.values == 0.0)


def test_pv_filter_rejects_unwindowed_data():
    lam = np.linspace(-0.5, 0.5, 101)
    phi = uniform_phi(4)
    low = np.exp(-0.5 * ((lam - 0.3) / 0.1) ** 2)
    sino = Sinogram(RADON, lam, phi, np.broadcast_to(low, (4, 101)).copy())
    with pytest.raises(WindowingError, match="upper lambda boundary"):
        pv_filter(sino)
    hi = np.exp(-0.5 * ((lam + 0.3) / 0.1) ** 2)
    sino2 = Sinogram(RADON, lam, phi, np.broadcast_to(hi, (4, 101)).copy())
    with pytest.raises(WindowingError, match="lower lambda boundary"):
        pv_filter(sino2)
    # a looser gate lets the same data through
    pv_filter(sino, boundary_rtol=0.5)


def test_pv_filter_requires_mphi_kind():
    lam = np.linspace(-1.0, 1.0, 11)
    sino = Sinogram(RADON, lam, uniform_phi(4), np.zeros((4, 11)), kind="riemann")
    with pytest.raises(ValueError, match="convert riemann data first"):
        pv_filter(sino)


def test_pv_filter_half_range_doubling_matches_full():
    lam = np.linspace(-1.0, 1.0, 201)
    w = (1.0 - lam * lam) ** 4
    phi_full = uniform_phi(8)
    top = w[None, :] * (1.0 + 0.3 * lam[None, :] * np.cos(phi_full[:4])[:, None])
    # g(-lambda, phi + pi) = g(lambda, phi), imposed bitwise by mirroring
    full = np.concatenate([top, top[:, ::-1]], axis=0)
    half = Sinogram(RADON, lam, uniform_phi(4, half=True), top)
    t_full = pv_filter(Sinogram(RADON, lam, phi_full, full))
    t_half = pv_filter(half)
    assert t_half.phi_axis.size == 8
    assert_allclose(t_half.phi_axis, phi_full, rtol=0, atol=1e-15)
    assert np.array_equal(t_half.values, t_full.values)


def test_pv_filter_half_range_needs_symmetric_axis():
    lam = np.linspace(-0.8, 1.0, 10)
    sino = Sinogram(RADON, lam, uniform_phi(4, half=True), np.zeros((4, 10)))
    with pytest.raises(ValueError, match="symmetric lambda axis"):
        pv_filter(sino)


def test_pv_filter_parabola_even_extension():
    lam = np.linspace(0.0, 1.0, 101)
    g = (lam * (1.0 - lam)) ** 2
    sino = Sinogram(PARAB, lam, uniform_phi(4), np.broadcast_to(g, (4, 101)).copy())
    table = pv_filter(sino)
    assert table.lambda_axis.size == 201
    assert table.lambda_axis[0] == pytest.approx(-1.0)
    assert np.max(np.abs(table.lambda_axis + table.lambda_axis[::-1])) == 0.0
    # even data filters to an even table
    scale = np.max(np.abs(table.values))
    assert np.max(np.abs(table.values - table.values[:, ::-1])) <= 1e-9 * scale


def test_pv_filter_parabola_needs_zero_start():
    lam = np.linspace(0.1, 1.0, 10)
    sino = Sinogram(PARAB, lam, uniform_phi(4), np.zeros((4, 10)))
    with pytest.raises(WindowingError, match="start at 0"):
        pv_filter(sino)


# ---------------------------------------------------------------------------
# backprojection


def test_backproject_zero_table():
    sino = window_sinogram(lambda lam: np.zeros_like(lam), m=33, n_phi=8)
    rec = backproject(pv_filter(sino), Grid.centered(9, 0.5))
    assert np.all(rec.values == 0.0)


def test_backproject_coverage_error():
    sino = Sinogram(
        RADON,
        np.linspace(-0.5, 0.5, 33),
        uniform_phi(8),
        np.zeros((8, 33)),
    )
    with pytest.raises(CoverageError, match="outside the filtered range"):
        backproject(pv_filter(sino), Grid.centered(9, 0.7))


def test_invert_is_homogeneous():
    ph = Phantom((Gaussian((0.06, 0.04), 0.15),))
    lam, phi = default_axes(RADON, 65, 24)
    sino = forward_mphi(ph, RADON, lam, phi, rtol=0.0, n_start=64, n_max=128)
    grid = Grid.centered(11, 0.3)
    one = invert(sino, grid)
    two = invert(Sinogram(RADON, lam, phi, 2.0 * sino.data), grid)
    assert np.array_equal(two.values, 2.0 * one.values)


def test_radon_round_trip():
    ph = Phantom((Gaussian((0.06, 0.04), 0.15),))
    lam, phi = default_axes(RADON, 129, 90)
    sino = forward_mphi(ph, RADON, lam, phi)
    grid = Grid.centered(33, 0.45)
    rec = invert(sino, grid)
    assert rec.rel_l2(ph.rasterize(grid)) <= 0.02


def test_half_range_radon_round_trip():
    ph = Phantom((Gaussian((0.06, 0.04), 0.15),))
    lam, phi = default_axes(RADON, 129, 45, half=True)
    sino = forward_mphi(ph, RADON, lam, phi)
    grid = Grid.centered(33, 0.45)
    rec = invert(sino, grid)
    assert rec.rel_l2(ph.rasterize(grid)) <= 0.02


def test_riemann_round_trip_divides_by_both_weights():
    ph = Phantom((Gaussian((0.04, 0.03), 0.105),))
    lam, phi = default_axes(HGEO, 129, 90)
    sino = forward_riemann(ph, HGEO, lam, phi)
    grid = Grid.centered(25, 0.3)
    rec = reconstruct_riemann(sino, grid)
    assert rec.rel_l2(ph.rasterize(grid)) <= 0.02
