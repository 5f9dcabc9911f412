"""Pins and properties for the seven curve families.

Closed-form values are substituted by hand next to each assertion. Gradient
norms are checked against central finite differences of psi, the normalizer
against its quadrature definition, and the difference polynomials against
direct sampling of psi, so each formula is validated by an independent route.
"""

import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from funkradon import FactorizationUnavailableError, GeometryDomainError, GeometryFamily, parse_geometry
from funkradon.geometry import (
    arc_element,
    dcoef_closed,
    descriptor,
    domain_radius_cap,
    grad_norm,
    lambda_of,
    lambda_range,
    lambda_sign,
    psi,
    psi_branch,
    trig_difference,
    weight_m,
    weight_mu,
)
from funkradon.inversion import dcoef_quadrature
from funkradon.trigpoly import all_real_simple

RADON = GeometryFamily("radon")
FUNK = GeometryFamily("funk", support_radius=0.8)
HGEO = GeometryFamily("hgeodesic", support_radius=0.7)
EQUI = GeometryFamily("equidistant", support_radius=0.4)
CIRCLE = GeometryFamily("ellipse", e1=1.0, e2=1.0)
ELLIPSE = GeometryFamily("ellipse", e1=1.2, e2=0.8, support_radius=0.7)
HYPER = GeometryFamily("hyperbola", eps=2.0)
PARAB = GeometryFamily("parabola")
CORMACK2 = GeometryFamily("cormack", k=2)
CORMACK3 = GeometryFamily("cormack", k=3)


def sample_points(geom, rng, n, rmin=0.05, rmax=None):
    """Random points comfortably inside the family's domain."""
    if rmax is None:
        rmax = {"hgeodesic": 0.8, "equidistant": 0.8, "ellipse": 0.6}.get(geom.tag, 1.0)
    r = rng.uniform(rmin, rmax, size=n)
    th = rng.uniform(0, 2 * math.pi, size=n)
    return np.stack([r * np.cos(th), r * np.sin(th)], axis=-1)


# ------------------------------------------------------------ construction

def test_constructor_validation():
    with pytest.raises(ValueError, match="unknown"):
        GeometryFamily("moebius")
    with pytest.raises(ValueError, match="eps > 1"):
        GeometryFamily("hyperbola", eps=1.0)
    with pytest.raises(ValueError, match="eps > 1"):
        GeometryFamily("hyperbola")
    with pytest.raises(ValueError, match="integer"):
        GeometryFamily("cormack", k=0)
    with pytest.raises(ValueError, match="integer"):
        GeometryFamily("cormack", k=2.5)
    with pytest.raises(ValueError, match="unit disc"):
        GeometryFamily("hgeodesic", support_radius=1.0)
    with pytest.raises(ValueError, match="unit disc"):
        GeometryFamily("equidistant", support_radius=1.2)
    with pytest.raises(ValueError, match="half-axes"):
        GeometryFamily("ellipse", e1=1.0)
    with pytest.raises(ValueError, match="positive"):
        GeometryFamily("ellipse", e1=1.0, e2=-0.5)
    with pytest.raises(ValueError, match="positive"):
        GeometryFamily("radon", support_radius=0.0)
    assert GeometryFamily("cormack", k=3.0).k == 3


def test_parse_and_descriptor_round_trip():
    g = parse_geometry("ellipse:e1=1.2,e2=0.8,support=0.7")
    assert g == ELLIPSE
    assert parse_geometry("ellipse:support=0.7,e2=0.8,e1=1.2") == g
    assert parse_geometry(descriptor(g)) == g
    for geom in (RADON, FUNK, HGEO, EQUI, ELLIPSE, HYPER, PARAB, CORMACK2):
        assert parse_geometry(descriptor(geom)) == geom
    h = parse_geometry("hyperbola:eps=2.0,support=1.5")
    assert h.eps == 2.0 and h.support_radius == 1.5
    assert parse_geometry("cormack:k=2,support=1.0") == GeometryFamily("cormack", k=2)


def test_parse_rejects_malformed():
    with pytest.raises(ValueError, match="elipse"):
        parse_geometry("elipse:e1=1,e2=1")
    with pytest.raises(ValueError, match="not valid"):
        parse_geometry("radon:e1=1")
    with pytest.raises(ValueError, match="non-numeric"):
        parse_geometry("radon:support=abc")
    with pytest.raises(ValueError, match="malformed"):
        parse_geometry("radon:support")
    with pytest.raises(ValueError, match="Radon"):
        parse_geometry("Radon")  # case-sensitive


# -------------------------------------------------------------------- psi

def test_psi_pins():
    assert psi(RADON, (1.0, 0.0), 0.0) == pytest.approx(-1.0)
    for ph in (0.0, 1.0, 2.5):
        assert psi(CIRCLE, (0.0, 0.0), ph) == pytest.approx(1.0)
    assert psi(HYPER, (1.0, 0.0), 0.0) == pytest.approx(1.0)
    assert psi(CORMACK2, (1.0, 0.0), 0.0) == pytest.approx(-1.0)


def test_psi_broadcasts():
    pts = np.zeros((5, 2)) + (0.3, 0.1)
    ph = np.linspace(0, 2 * math.pi, 7, endpoint=False)
    out = psi(RADON, pts[:, None, :], ph)
    assert out.shape == (5, 7)
    assert_allclose(out[2], -(0.3 * np.cos(ph) + 0.1 * np.sin(ph)))


def test_psi_domain_errors():
    with pytest.raises(GeometryDomainError):
        psi(EQUI, (1.0, 0.0), 0.0)
    with pytest.raises(GeometryDomainError):
        psi(HGEO, (0.8, 0.8), 0.0)
    with pytest.raises(GeometryDomainError):
        psi(PARAB, (0.0, 0.0), 0.0)
    with pytest.raises(GeometryDomainError):
        psi(CORMACK2, (0.0, 0.0), 0.0)


def test_parabola_branch_is_signed_square_root():
    x = (0.5, 0.0)
    assert psi_branch(PARAB, x, 0.0) == pytest.approx(-1.0)   # -sqrt(2 * 0.5)
    ph = np.linspace(0, 2 * math.pi, 17)
    assert_allclose(np.abs(psi_branch(PARAB, x, ph)), np.abs(psi(PARAB, x, ph)), atol=1e-14)
    # the fold: psi itself is the nonnegative-radicand square root
    assert psi(PARAB, x, math.pi) == pytest.approx(0.0, abs=1e-12)


# -------------------------------------------------------------- grad_norm

def test_grad_pins():
    assert grad_norm(RADON, (0.3, -0.2), 1.3) == pytest.approx(1.0)
    assert grad_norm(PARAB, (0.5, 0.0), 2.0) == pytest.approx(1.0)
    assert grad_norm(PARAB, (0.0, 0.5), 0.4) == pytest.approx(1.0)
    assert grad_norm(CORMACK2, (0.0, 1.0), 0.7) == pytest.approx(2.0)
    assert grad_norm(FUNK, (0.0, 0.0), 0.2) == pytest.approx(1.0)


def test_grad_rejects_degenerate_point():
    # on the ellipse of centers the gradient magnitude 2|x - e(phi)| vanishes
    with pytest.raises(GeometryDomainError, match="positive"):
        grad_norm(CIRCLE, (1.0, 0.0), 0.0)


def test_grad_matches_finite_differences():
    # hgeodesic included on purpose: its pinned formula is the Euclidean
    # gradient of psi, which this check certifies directly
    rng = np.random.default_rng(5)
    fams = (RADON, EQUI, HGEO, ELLIPSE, HYPER, PARAB, CORMACK2, CORMACK3)
    for geom in fams:
        pts = sample_points(geom, rng, 100, rmin=0.2)
        for x in pts:
            ph = rng.uniform(0, 2 * math.pi)
            if geom.tag == "parabola":
                # keep clear of the branch fold where psi loses smoothness
                th = math.atan2(x[1], x[0])
                while abs(math.cos(0.5 * (ph - th))) < 0.2:
                    ph = rng.uniform(0, 2 * math.pi)
            h = 1e-6 * (1.0 + np.hypot(*x))
            g1 = (psi(geom, x + (h, 0), ph) - psi(geom, x - (h, 0), ph)) / (2 * h)
            g2 = (psi(geom, x + (0, h), ph) - psi(geom, x - (0, h), ph)) / (2 * h)
            want = math.hypot(g1, g2)
            assert grad_norm(geom, x, ph) == pytest.approx(want, rel=1e-6)


def test_grad_factorization_identity():
    # m(x) mu(lambda) reproduces |grad psi| everywhere the split exists,
    # including funk, whose metric gradient is not a finite-difference target
    rng = np.random.default_rng(6)
    for geom in (RADON, FUNK, HGEO, EQUI, CIRCLE, ELLIPSE, PARAB, CORMACK2):
        pts = sample_points(geom, rng, 25, rmin=0.2)
        ph = rng.uniform(0, 2 * math.pi, size=25)
        lam = lambda_of(geom, pts, ph)
        got = weight_m(geom, pts) * weight_mu(geom, lam)
        assert_allclose(got, grad_norm(geom, pts, ph), rtol=1e-12)


# ----------------------------------------------------------------- lambda

def test_lambda_sign_conventions():
    x, ph = (0.4, 0.3), 1.1
    for geom in (RADON, FUNK, HGEO, EQUI, PARAB, CORMACK2):
        assert lambda_sign(geom) == -1.0
        assert lambda_of(geom, x, ph) == pytest.approx(-psi(geom, x, ph))
    for geom in (ELLIPSE, HYPER):
        assert lambda_sign(geom) == 1.0
        assert lambda_of(geom, x, ph) == pytest.approx(psi(geom, x, ph))


def test_lambda_range_pins():
    assert_allclose(lambda_range(RADON, 1.0), (-1.0, 1.0))
    assert_allclose(lambda_range(CIRCLE, 0.9), (0.01, 3.61))
    z = 0.8 / (1.0 - 0.16)
    assert_allclose(lambda_range(EQUI, 0.4), (-z, z))
    assert_allclose(lambda_range(EQUI, 0.5), (-1.0, 1.0))  # clipped
    assert_allclose(lambda_range(HYPER, 1.0), (-3.0, 1.0))
    assert_allclose(lambda_range(PARAB, 1.0), (0.0, math.sqrt(2.0)))
    assert_allclose(lambda_range(CORMACK2, 0.9), (-0.81, 0.81))
    assert_allclose(lambda_range(HGEO, 0.7), (-1.4 / 1.49, 1.4 / 1.49))
    assert_allclose(lambda_range(FUNK, 0.8), (-0.8, 0.8))
    # defaults to the family's own support radius
    assert_allclose(lambda_range(FUNK), lambda_range(FUNK, 0.8))


def test_lambda_range_covers_reachable_values():
    rng = np.random.default_rng(7)
    for geom in (RADON, FUNK, HGEO, EQUI, ELLIPSE, HYPER, PARAB, CORMACK2):
        rho = geom.support_radius
        pts = sample_points(geom, rng, 200, rmin=0.01, rmax=rho)
        ph = rng.uniform(0, 2 * math.pi, size=200)
        lam = lambda_of(geom, pts, ph)
        lo, hi = lambda_range(geom)
        assert np.all(lam >= lo - 1e-12) and np.all(lam <= hi + 1e-12)


# -------------------------------------------------------------- normalizer

def test_dcoef_pins():
    assert dcoef_closed(GeometryFamily("hyperbola", eps=math.sqrt(2.0)), (0.4, 0.1)) == pytest.approx(1.0)
    assert dcoef_closed(RADON, (0.9, -0.3)) == pytest.approx(1.0)
    assert dcoef_closed(EQUI, (0.0, 0.0)) == pytest.approx(0.25)
    assert dcoef_closed(HGEO, (0.0, 0.0)) == pytest.approx(0.25)
    assert dcoef_closed(FUNK, (0.0, 0.0)) == pytest.approx(1.0)
    assert dcoef_closed(PARAB, (0.3, 0.4)) == pytest.approx(1.0)   # 2|x| with |x|=0.5
    assert dcoef_closed(CORMACK2, (0.0, 1.0)) == pytest.approx(0.25)


def test_dcoef_circle_value_and_oracle():
    # centers on the unit circle: D = 1/(4 (1 - |x|^2)) = 1/3 at |x| = 0.5;
    # the angular-mean definition confirms the constant
    got = dcoef_closed(CIRCLE, (0.5, 0.0))
    assert got == pytest.approx(1.0 / 3.0, rel=1e-12)
    assert got == pytest.approx(dcoef_quadrature(CIRCLE, (0.5, 0.0)), rel=1e-10)


def test_dcoef_closed_matches_quadrature_everywhere():
    rng = np.random.default_rng(8)
    fams = (RADON, FUNK, HGEO, EQUI, CIRCLE, ELLIPSE, HYPER, PARAB, CORMACK2, CORMACK3)
    for geom in fams:
        pts = sample_points(geom, rng, 20, rmin=0.15)
        closed = dcoef_closed(geom, pts)
        quads = np.array([dcoef_quadrature(geom, x) for x in pts])
        assert_allclose(closed, quads, rtol=1e-8)


def test_dcoef_ellipse_rejects_point_outside_circle_of_centers():
    with pytest.raises(GeometryDomainError):
        dcoef_closed(CIRCLE, (1.5, 0.0))


# ---------------------------------------------------------------- weights

def test_weight_pins():
    assert weight_m(RADON, (0.2, 0.2)) == pytest.approx(1.0)
    assert weight_mu(RADON, 0.7) == pytest.approx(1.0)
    assert weight_m(CIRCLE, (0.3, 0.1)) == pytest.approx(1.0)
    assert weight_mu(CIRCLE, 4.0) == pytest.approx(4.0)
    assert weight_m(CORMACK3, (2.0, 0.0)) == pytest.approx(12.0)
    assert weight_mu(CORMACK3, 0.3) == pytest.approx(1.0)


def test_hyperbola_does_not_factor():
    with pytest.raises(FactorizationUnavailableError):
        weight_m(HYPER, (0.5, 0.0))
    with pytest.raises(FactorizationUnavailableError):
        weight_mu(HYPER, 0.5)


# ------------------------------------------------------- trig differences

def test_trig_difference_pins():
    t = trig_difference(RADON, (0.0, 0.0), (1.0, 0.0))
    assert_allclose(t.a, (0.0, 1.0), atol=1e-15)
    assert_allclose(t.b, (0.0, 0.0), atol=1e-15)

    t = trig_difference(HYPER, (1.0, 0.0), (0.1, 0.0))
    # eps<x - y, e> - |x| + |y| with nearly antipodal pair on the axis
    want_a = (-0.9, 2.0 * 0.9)
    assert_allclose(t.a, want_a, atol=1e-15)

    # equal-axes ellipse pair: coefficients match direct sampling of psi
    x, y = (0.0, 0.0), (0.5, 0.0)
    t = trig_difference(CIRCLE, x, y)
    ph = np.arange(8) * (2 * math.pi / 8)
    assert_allclose(t.eval(ph), psi(CIRCLE, x, ph) - psi(CIRCLE, y, ph), atol=1e-12)
    assert_allclose(t.a, (-0.25, 1.0), atol=1e-15)


def test_trig_difference_matches_psi_sampling():
    rng = np.random.default_rng(9)
    ph = np.arange(16) * (2 * math.pi / 16)
    fams = (RADON, FUNK, HGEO, EQUI, CIRCLE, ELLIPSE, HYPER, CORMACK2, CORMACK3)
    for geom in fams:
        for _ in range(10):
            x, y = sample_points(geom, rng, 2, rmin=0.1)
            t = trig_difference(geom, x, y)
            assert_allclose(t.eval(ph), psi(geom, x, ph) - psi(geom, y, ph),
                            atol=1e-12, err_msg=geom.tag)


def test_trig_difference_unavailable_for_parabola():
    assert trig_difference(PARAB, (0.5, 0.0), (0.0, 0.5)) is None


def test_trig_difference_rejects_equal_points():
    with pytest.raises(ValueError, match="distinct"):
        trig_difference(RADON, (0.5, 0.5), (0.5, 0.5))


def test_ellipse_support_condition():
    assert ELLIPSE.kernel_condition_ok            # 0.7 < min(1.2, 0.8)
    assert not GeometryFamily("ellipse", e1=1.2, e2=0.8, support_radius=0.9).kernel_condition_ok
    assert RADON.kernel_condition_ok

    # inside the safe radius every pair's difference has simple real zeros
    rng = np.random.default_rng(10)
    for _ in range(50):
        x, y = sample_points(ELLIPSE, rng, 2, rmin=0.05, rmax=0.7)
        assert all_real_simple(trig_difference(ELLIPSE, x, y))

    # beyond the minor axis a nearly radial pair drives the zeros complex
    bad_x = np.array([0.0, 0.88])
    bad_y = 0.95 * bad_x
    t = trig_difference(ELLIPSE, bad_x, bad_y)
    assert not all_real_simple(t)


# ------------------------------------------------------------ arc element

def test_arc_element():
    for geom in (RADON, EQUI, ELLIPSE, HYPER, PARAB, CORMACK2):
        assert arc_element(geom, (0.3, 0.4), (3.0, 4.0)) == pytest.approx(5.0)
    assert arc_element(FUNK, (0.0, 0.0), (1.0, 0.0)) == pytest.approx(1.0)
    # chart point (1,0): radial directions shrink by 1/(1+r^2), transverse
    # ones by 1/sqrt(1+r^2)
    assert arc_element(FUNK, (1.0, 0.0), (1.0, 0.0)) == pytest.approx(0.5)
    assert arc_element(FUNK, (1.0, 0.0), (0.0, 1.0)) == pytest.approx(1.0 / math.sqrt(2.0))


def test_domain_radius_cap():
    assert domain_radius_cap(HGEO) == 1.0
    assert domain_radius_cap(EQUI) == 1.0
    assert math.isinf(domain_radius_cap(RADON))
    assert math.isinf(domain_radius_cap(PARAB))
