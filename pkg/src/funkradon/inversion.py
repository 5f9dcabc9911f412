"""Exact inversion: finite-part filtration in lambda and backprojection.

The reconstruction identity is

    f(x) = -1/(4 pi^2 D(x)) (P)int_0^{2pi} int g(lambda, phi) /
           (lambda - lambda0(x, phi))^2  dlambda dphi,

with g the forward data, lambda0(x, phi) the curve parameter of the family
member through x, and D(x) the angular mean of 1/|grad psi|^2. The inner
finite-part integral is tabulated once per phi row on the data's own lambda
grid (pv_filter); backprojection then samples that table at lambda0 by cubic
interpolation and averages over phi.

The second-order singularity is never attacked head-on: integrating by parts
turns it into a first-order principal value of dg/dlambda, which is computed
by singularity subtraction plus an exact logarithmic correction. Boundary
terms of the by-parts step are kept, which is why the data must be windowed
(near zero at the lambda endpoints) for the result to be meaningful.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import geometry as geo
from .fields import Grid, ScalarField
from .transform import Sinogram, riemann_to_mphi

__all__ = [
    "WindowingError",
    "CoverageError",
    "FilteredSinogram",
    "dcoef_quadrature",
    "pv_filter",
    "backproject",
    "invert",
    "reconstruct_riemann",
]

TAU = 2.0 * np.pi


class WindowingError(ValueError):
    """Sinogram does not decay at the lambda boundaries."""


class CoverageError(ValueError):
    """A grid point needs data outside the filtered lambda range."""


@dataclass(frozen=True, eq=False)
class FilteredSinogram:
    """G(lambda0, phi) tables, one row per phi, on a uniform lambda0 grid.

    The lambda axis may be wider than the input sinogram's: parabola data is
    extended evenly through lambda = 0 before filtering, and radon half-range
    data is doubled to a full phi range.
    """

    geom: geo.GeometryFamily
    lambda_axis: np.ndarray
    phi_axis: np.ndarray
    values: np.ndarray


def dcoef_quadrature(geom: geo.GeometryFamily, x, n_phi: int = 256):
    """Normalizer D(x) as the mean of 1/|grad psi|^2 over a uniform phi grid
    (trapezoid on a periodic integrand, so spectrally accurate)."""
    if n_phi < 8:
        raise ValueError("dcoef_quadrature needs n_phi >= 8")
    x = np.asarray(x, dtype=float)
    phi = np.arange(n_phi) * (TAU / n_phi)
    g = geo.grad_norm(geom, x[..., None, :], phi)
    out = np.mean(1.0 / np.asarray(g) ** 2, axis=-1)
    return out if np.ndim(out) else float(out)


def _fp_rows(g: np.ndarray, lam: np.ndarray) -> np.ndarray:
    """Finite part of int g(lambda)/(lambda - lambda_i)^2 dlambda for every
    row of g and every node lambda_i, via integration by parts:

        g(a)/(a - l) - g(b)/(b - l) + PV int g'(lambda)/(lambda - l) dlambda,

    the PV handled by subtracting g'(l) (the k = i quadrature term becomes
    w_i g''(l)) and adding back g'(l) log|(b - l)/(l - a)|. At the two end
    nodes the log and boundary terms are singular and dropped; windowed data
    vanishes there, and backprojection never samples that close to the edge.
    """
    m = lam.size
    h = lam[1] - lam[0]
    gp = np.gradient(g, h, axis=1, edge_order=2)
    gpp = np.gradient(gp, h, axis=1, edge_order=2)
    w = np.full(m, h)
    w[0] = w[-1] = 0.5 * h
    dif = lam[:, None] - lam[None, :]
    with np.errstate(divide="ignore"):
        A = w[:, None] / dif
    np.fill_diagonal(A, 0.0)
    csum = A.sum(axis=0)
    G = gp @ A - gp * csum[None, :] + gpp * w[None, :]
    with np.errstate(divide="ignore", invalid="ignore"):
        L = np.log((lam[-1] - lam) / (lam - lam[0]))
        bound = g[:, :1] / (lam[0] - lam)[None, :] - g[:, -1:] / (lam[-1] - lam)[None, :]
    L[0] = L[-1] = 0.0
    bound[:, 0] = bound[:, -1] = 0.0
    return G + gp * L[None, :] + bound


def pv_filter(sino: Sinogram, boundary_rtol: float = 1e-6) -> FilteredSinogram:
    """Tabulate the inner finite-part integral on the sinogram's own grid."""
    if sino.kind != "mphi":
        raise ValueError("pv_filter expects kind='mphi' data (convert riemann data first)")
    geom = sino.geom
    lam = sino.lambda_axis
    phi = sino.phi_axis
    g = sino.data

    if geom.tag == "radon" and sino.phi_full == "half":
        # g(-lambda, phi + pi) = g(lambda, phi): mirror the lambda axis to
        # synthesize the second half of the phi range
        if np.max(np.abs(lam + lam[::-1])) > 1e-9 * (1.0 + abs(lam[-1])):
            raise ValueError("half-range doubling needs a symmetric lambda axis")
        g = np.concatenate([g, g[:, ::-1]], axis=0)
        phi = np.concatenate([phi, phi + np.pi])

    if geom.tag == "parabola":
        # physical lambda starts at 0 where the data is genuinely nonzero;
        # the transform is even in lambda, so extend and filter on the
        # symmetric axis, making 0 an interior node
        if abs(lam[0]) > 1e-12 * (1.0 + abs(lam[-1])):
            raise WindowingError(
                "parabola filtering needs the lambda axis to start at 0 "
                "for the even extension"
            )
        lam = np.concatenate([-lam[:0:-1], lam])
        g = np.concatenate([g[:, :0:-1], g], axis=1)

    peak = float(np.max(np.abs(g)))
    if peak > 0.0:
        for side, col in (("lower", g[:, 0]), ("upper", g[:, -1])):
            worst = float(np.max(np.abs(col)))
            if worst > boundary_rtol * peak:
                raise WindowingError(
                    f"data at the {side} lambda boundary reaches {worst:.3e} "
                    f"({worst / peak:.2e} of peak); the scanned range does not "
                    "cover the phantom"
                )
    return FilteredSinogram(geom, lam, phi, _fp_rows(g, lam))


def _cubic_rows(values: np.ndarray, lam: np.ndarray, lam0: np.ndarray, j: int):
    """4-point Lagrange interpolation of one filtered row at lambda0."""
    m = lam.size
    h = lam[1] - lam[0]
    t = (lam0 - lam[0]) / h
    i0 = np.clip(np.floor(t).astype(int) - 1, 0, m - 4)
    u = t - i0
    row = values[j]
    w0 = -(u - 1.0) * (u - 2.0) * (u - 3.0) / 6.0
    w1 = u * (u - 2.0) * (u - 3.0) / 2.0
    w2 = -u * (u - 1.0) * (u - 3.0) / 2.0
    w3 = u * (u - 1.0) * (u - 2.0) / 6.0
    return w0 * row[i0] + w1 * row[i0 + 1] + w2 * row[i0 + 2] + w3 * row[i0 + 3]


def backproject(filtered: FilteredSinogram, grid: Grid) -> ScalarField:
    """Average the filtered tables over phi at each pixel's lambda0 and apply
    the -1/(4 pi^2 D(x)) normalization (with the sheet count for the cormack
    family, whose curves pass through each point on k parameter sheets)."""
    geom = filtered.geom
    lam = filtered.lambda_axis
    phi = filtered.phi_axis
    pts = grid.points()
    D = np.asarray(geo.dcoef_closed(geom, pts))
    sheet = float(geom.k) if geom.tag == "cormack" else 1.0
    tol = 1e-9 * (1.0 + lam[-1] - lam[0])
    acc = np.zeros((grid.nx, grid.ny))
    for j, p in enumerate(phi):
        lam0 = np.asarray(geo.lambda_of(geom, pts, float(p)))
        bad = (lam0 < lam[0] - tol) | (lam0 > lam[-1] + tol)
        if np.any(bad):
            where = np.argwhere(bad)
            shown = "; ".join(
                f"({pts[ix, iy, 0]:.6g}, {pts[ix, iy, 1]:.6g}) needs lambda0={lam0[ix, iy]:.6g}"
                for ix, iy in where[:4]
            )
            more = "" if len(where) <= 4 else f" (and {len(where) - 4} more)"
            raise CoverageError(
                f"{len(where)} grid points at phi={float(p):.6g} fall outside the filtered "
                f"range [{lam[0]:.6g}, {lam[-1]:.6g}]: {shown}{more}"
            )
        acc += _cubic_rows(filtered.values, lam, lam0, j)
    dphi = phi[1] - phi[0]
    rec = -acc * dphi / (4.0 * np.pi**2 * D * sheet)
    return ScalarField(grid, rec)


def invert(sino: Sinogram, grid: Grid) -> ScalarField:
    """Full reconstruction: pv_filter then backproject."""
    return backproject(pv_filter(sino), grid)


def reconstruct_riemann(sino: Sinogram, grid: Grid) -> ScalarField:
    """Reconstruct from plain arc-length data of a factorizable family:
    divide by mu(lambda), invert, then divide pointwise by m(x)."""
    rec = invert(riemann_to_mphi(sino), grid)
    m = np.asarray(geo.weight_m(sino.geom, grid.points()))
    return ScalarField(grid, rec.values / m)
