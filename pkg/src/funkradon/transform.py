"""Forward transform: family curves traced in closed form and integrated.

Every family's data curve {x : lambda_of(x, phi) = lambda} is a line, a
circle, or a polar graph, so curves are parametrized exactly and clipped to a
working disc about the origin; no implicit-surface marching is needed. The
forward value at one sinogram node is the curve integral of the phantom
weighted by 1/|grad psi| (kind "mphi") or by nothing (kind "riemann", plain
metric arc length), computed by the midpoint rule with interval doubling and
Richardson extrapolation until the row has converged. Columns at different
angles are independent, so the work parallelizes over phi without changing
any result.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import geometry as geo
from .geometry import GeometryFamily
from .phantom import Disc, Phantom

__all__ = [
    "Sinogram",
    "TracingError",
    "default_axes",
    "trace_curve",
    "forward_mphi",
    "forward_riemann",
    "riemann_to_mphi",
    "read_fkr1",
    "write_fkr1",
]

TAU = 2.0 * np.pi

# fraction of a zero-lambda threshold relative to the axis scale
_LAM_TINY = 1e-12
# rays that emanate from the origin start a hair away from it, since the
# punctured families reject the origin itself
_RAY_START = 1e-9


class TracingError(RuntimeError):
    """Newton projection onto a level curve failed to converge."""


@dataclass(frozen=True, eq=False)
class Sinogram:
    """Sampled transform data on a uniform (lambda, phi) lattice.

    data[j, i] is the value at (lambda_axis[i], phi_axis[j]). The phi axis
    covers [0, 2pi) endpoint-free, or [0, pi) for radon half-range data; for
    full-range radon the forward output satisfies data(-lambda, phi+pi) =
    data(lambda, phi) up to quadrature tolerance (not enforced here).
    """

    geom: GeometryFamily
    lambda_axis: np.ndarray
    phi_axis: np.ndarray
    data: np.ndarray
    kind: str = "mphi"

    def __post_init__(self):
        lam = np.asarray(self.lambda_axis, dtype=float)
        phi = np.asarray(self.phi_axis, dtype=float)
        data = np.asarray(self.data, dtype=float)
        object.__setattr__(self, "lambda_axis", lam)
        object.__setattr__(self, "phi_axis", phi)
        object.__setattr__(self, "data", data)
        if self.kind not in ("mphi", "riemann"):
            raise ValueError(f"unknown sinogram kind {self.kind!r}")
        if lam.ndim != 1 or lam.size < 2:
            raise ValueError("lambda axis needs at least two samples")
        dl = np.diff(lam)
        if dl[0] <= 0 or not np.allclose(dl, dl[0], rtol=1e-9, atol=0):
            raise ValueError("lambda axis must be uniform and ascending")
        if phi.ndim != 1 or phi.size < 2:
            raise ValueError("phi axis needs at least two samples")
        dp = np.diff(phi)
        if abs(phi[0]) > 1e-12 or dp[0] <= 0 or not np.allclose(dp, dp[0], rtol=1e-9, atol=1e-12):
            raise ValueError("phi axis must be uniform starting at 0")
        span = dp[0] * phi.size
        if not (abs(span - TAU) < 1e-9 or abs(span - np.pi) < 1e-9):
            raise ValueError("phi axis must tile [0, 2pi) or [0, pi)")
        if abs(span - np.pi) < 1e-9 and self.geom.tag != "radon":
            raise ValueError("half-range phi axis is only meaningful for radon")
        if data.shape != (phi.size, lam.size):
            raise ValueError(f"data shape {data.shape} does not match axes ({phi.size}, {lam.size})")
        if not np.all(np.isfinite(data)):
            raise ValueError("sinogram entries must be finite")
        lo, hi = geo.lambda_range(self.geom)
        slack = 1e-9 * (1.0 + hi - lo)
        if lam[0] < lo - slack or lam[-1] > hi + slack:
            raise ValueError(
                f"lambda axis [{lam[0]}, {lam[-1]}] exceeds admissible range [{lo}, {hi}]"
            )

    @property
    def phi_full(self) -> str:
        span = (self.phi_axis[1] - self.phi_axis[0]) * self.phi_axis.size
        return "half" if abs(span - np.pi) < 1e-9 else "full"

    @property
    def n_lambda(self) -> int:
        return self.lambda_axis.size

    @property
    def n_phi(self) -> int:
        return self.phi_axis.size


def default_axes(geom: GeometryFamily, n_lambda: int, n_phi: int, half: bool = False):
    """Uniform axes spanning the family's full admissible lambda interval."""
    lo, hi = geo.lambda_range(geom)
    lam = np.linspace(lo, hi, n_lambda)
    span = np.pi if half else TAU
    phi = np.arange(n_phi) * (span / n_phi)
    return lam, phi


# ---------------------------------------------------------------------------
# arc geometry
#
# A curve restricted to the working disc of radius R splits into arcs. Each
# arc is described by a half-width array W (one entry per lambda node; zero
# marks rows the arc misses), a map from arc parameter beta in [-W, W] to
# points and metric speed ds/dbeta, and an optional constant multiplicity.
# The map receives the active row indices so it can pick its per-row data.


@dataclass
class _Arc:
    W: np.ndarray
    mapto: callable  # (B, act) -> (P, speed) with P shape B.shape + (2,)
    mult: float = 1.0
    grad_done: bool = False  # speed already includes the 1/|grad psi| factor
    point: bool = False  # degenerate arc, skipped by the tracer
    stretch: bool = False  # cluster quadrature nodes toward the arc ends


def _stretch_map(u):
    """Odd C^2 map of [-1, 1] onto itself with (1 - u^2)^2 derivative.

    Arcs whose metric speed spikes at the window edge (the curve leaving the
    working disc almost tangentially) integrate poorly on uniform nodes: the
    spike width shrinks linearly with the row's lambda. Substituting
    beta = W s(u) multiplies the integrand by s'(u), whose quadratic zero at
    the ends tames the spike to a cube-root feature that a few hundred nodes
    resolve. Rays get the same treatment for a different reason: their
    integrand does not vanish at the inner endpoint, which pins the plain
    midpoint rule at second order, while under the substitution the boundary
    derivative terms drop and fourth-order kicks in.
    """
    u2 = u * u
    s = 1.875 * u * (1.0 - u2 * (2.0 / 3.0 - 0.2 * u2))
    ds = 1.875 * (1.0 - u2) ** 2
    return s, ds


def _circle_halfwidth(d, rc, R):
    """Angular half-width of the part of a circle (center distance d, radius
    rc) lying in the origin disc of radius R; pi means the full circle."""
    d = np.asarray(d, dtype=float)
    rc = np.asarray(rc, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        cu = (d * d + rc * rc - R * R) / (2.0 * d * rc)
    cu = np.where(np.isfinite(cu), cu, 1.0)
    return np.arccos(np.clip(cu, -1.0, 1.0))


def _circle_arc(center, rc):
    """Map for circle arcs: beta is the angle measured from the point of the
    circle nearest the origin, so the clipped arc is symmetric in beta."""

    def mapto(B, act):
        c = center[act]
        r = rc[act][:, None]
        d = np.maximum(np.hypot(c[:, 0], c[:, 1]), 1e-300)
        ux = (-c[:, 0] / d)[:, None]  # unit vector toward the origin
        uy = (-c[:, 1] / d)[:, None]
        cb, sb = np.cos(B), np.sin(B)
        px = c[:, 0][:, None] + r * (cb * ux - sb * uy)
        py = c[:, 1][:, None] + r * (sb * ux + cb * uy)
        P = np.stack([px, py], axis=-1)
        return P, np.broadcast_to(r, B.shape)

    return mapto


def _ray_arc(theta, R):
    """Map for a ray from the origin at polar angle theta, r in (0, R]."""
    half = 0.5 * (R - _RAY_START * R)
    mid = _RAY_START * R + half

    def mapto(B, act):
        r = mid + B
        px = r * np.cos(theta)
        py = r * np.sin(theta)
        P = np.stack([px, py], axis=-1)
        return P, np.ones_like(B)

    return mapto, half


def _arcs(geom: GeometryFamily, lam: np.ndarray, phi: float, R: float, kind: str):
    """All arcs of the curves {lambda_of = lam[i]} inside the origin disc."""
    lam = np.asarray(lam, dtype=float)
    lam_eps = _LAM_TINY * (1.0 + float(np.max(np.abs(lam))))
    c, s = np.cos(phi), np.sin(phi)
    e = np.array([c, s])
    eperp = np.array([-s, c])
    tag = geom.tag
    arcs = []

    if tag in ("radon", "funk"):
        # straight line <x, e> = lam (radon) or <x, e> = -lam (funk chart)
        sgn = 1.0 if tag == "radon" else -1.0
        W = np.sqrt(np.maximum(R * R - lam * lam, 0.0))
        base = sgn * lam[:, None] * e[None, :]

        def mapto(B, act, base=base):
            P = base[act][:, None, :] + B[..., None] * eperp[None, None, :]
            if tag == "funk":
                V = np.broadcast_to(eperp, P.shape)
                return P, geo.arc_element(geom, P, V)
            return P, np.ones_like(B)

        arcs.append(_Arc(W, mapto))
        return arcs

    if tag in ("hgeodesic", "equidistant"):
        line_rows = np.abs(lam) <= lam_eps
        circ_rows = ~line_rows
        if np.any(line_rows):
            W = np.where(line_rows, R, 0.0)

            def mapto_line(B, act):
                P = B[..., None] * eperp[None, None, :]
                return P, np.ones_like(B)

            arcs.append(_Arc(W, mapto_line))
        if np.any(circ_rows):
            with np.errstate(divide="ignore", invalid="ignore"):
                inv = 1.0 / lam
                if tag == "hgeodesic":
                    center = inv[:, None] * e[None, :]
                    rc = np.sqrt(np.maximum(inv * inv - 1.0, 0.0))
                else:
                    center = -inv[:, None] * e[None, :]
                    rc = np.sqrt(1.0 + inv * inv)
            d = np.abs(inv)
            W = np.where(circ_rows, _circle_halfwidth(d, rc, R), 0.0)
            W = np.where(rc > 0, W, 0.0)
            arcs.append(_Arc(W, _circle_arc(center, rc)))
        return arcs

    if tag == "ellipse":
        ctr = np.array([geom.e1 * c, geom.e2 * s])
        d0 = float(np.hypot(*ctr))
        rc = np.sqrt(np.maximum(lam, 0.0))
        W = np.where(lam > 0.0, _circle_halfwidth(d0, rc, R), 0.0)
        center = np.broadcast_to(ctr, (lam.size, 2))
        arcs.append(_Arc(W, _circle_arc(center, rc)))
        zero = (lam <= 0.0) & (d0 <= R)
        if np.any(zero) and kind == "mphi":
            # shrinking circles: ds/(2 sqrt(lam)) tends to dbeta/2 at the
            # center point, so the row keeps a finite value
            Wz = np.where(zero, np.pi, 0.0)

            def mapto_pt(B, act):
                P = np.broadcast_to(ctr, B.shape + (2,))
                return P, np.full_like(B, 0.5)

            arcs.append(_Arc(Wz, mapto_pt, grad_done=True, point=True))
        return arcs

    if tag == "hyperbola":
        epsc = geom.eps
        alpha0 = np.where(lam >= 0.0, 0.0, np.pi)
        with np.errstate(divide="ignore", invalid="ignore"):
            cpos = (1.0 + lam / R) / epsc
            cneg = (1.0 - np.abs(lam) / R) / epsc
        Wpos = np.arccos(np.clip(cpos, -1.0, 1.0))
        Wneg = np.pi - np.arccos(np.clip(cneg, -1.0, 1.0))
        W = np.where(lam > lam_eps, Wpos, np.where(lam < -lam_eps, Wneg, 0.0))

        def mapto_h(B, act):
            al = alpha0[act][:, None] + B
            den = epsc * np.cos(al) - 1.0
            r = lam[act][:, None] / den
            rp = r * epsc * np.sin(al) / den
            ang = phi + al
            P = np.stack([r * np.cos(ang), r * np.sin(ang)], axis=-1)
            return P, np.sqrt(r * r + rp * rp)

        arcs.append(_Arc(W, mapto_h, stretch=True))
        if np.any(np.abs(lam) <= lam_eps):
            astar = np.arccos(1.0 / epsc)
            for sign in (1.0, -1.0):
                mapto_r, half = _ray_arc(phi + sign * astar, R)
                Wr = np.where(np.abs(lam) <= lam_eps, half, 0.0)
                arcs.append(_Arc(Wr, mapto_r, stretch=True))
        return arcs

    if tag == "parabola":
        pos = lam > lam_eps
        A = np.where(pos, np.arccos(np.clip(lam * lam / R - 1.0, -1.0, 1.0)), 0.0)

        def mapto_p(B, act):
            al = B
            r = lam[act][:, None] ** 2 / (1.0 + np.cos(al))
            ang = phi + al
            P = np.stack([r * np.cos(ang), r * np.sin(ang)], axis=-1)
            return P, r / np.cos(0.5 * al)

        arcs.append(_Arc(A, mapto_p, stretch=True))
        if np.any(np.abs(lam) <= lam_eps):
            # the curve closes onto the backward ray, covered twice
            mapto_r, half = _ray_arc(phi + np.pi, R)
            Wr = np.where(np.abs(lam) <= lam_eps, half, 0.0)
            arcs.append(_Arc(Wr, mapto_r, mult=2.0, stretch=True))
        return arcs

    # cormack
    k = geom.k
    Rk = R**k
    absl = np.abs(lam)
    B0 = np.where(absl > lam_eps, np.arccos(np.clip(absl / Rk, -1.0, 1.0)), 0.0)
    B0 = np.where(absl <= Rk, B0, 0.0)
    off = np.where(lam >= 0.0, 0.0, np.pi)
    for m in range(k):
        def mapto_c(B, act, m=m):
            r = (absl[act][:, None] / np.cos(B)) ** (1.0 / k)
            th = (phi + off[act][:, None] + B + TAU * m) / k
            P = np.stack([r * np.cos(th), r * np.sin(th)], axis=-1)
            return P, r / (k * np.cos(B))

        arcs.append(_Arc(B0.copy(), mapto_c, stretch=True))
    if np.any(absl <= lam_eps):
        for j in range(2 * k):
            mapto_r, half = _ray_arc((phi + 0.5 * np.pi + np.pi * j) / k, R)
            Wr = np.where(absl <= lam_eps, half, 0.0)
            arcs.append(_Arc(Wr, mapto_r, stretch=True))
    return arcs


# ---------------------------------------------------------------------------
# forward quadrature


def _column(geom, phantom, lam, phi, R, kind, rtol, n_start, n_max):
    """One sinogram column: integrals over all lambda rows at a fixed phi."""
    arcs = _arcs(geom, lam, float(phi), R, kind)
    out_shape = lam.shape

    def level(n):
        mids = (np.arange(n) + 0.5) / n * 2.0 - 1.0  # midpoints of (-1, 1)
        smap, sder = _stretch_map(mids)
        tot = np.zeros(out_shape)
        for arc in arcs:
            act = np.flatnonzero(arc.W > 0.0)
            if act.size == 0:
                continue
            nodes = smap if arc.stretch else mids
            B = arc.W[act][:, None] * nodes[None, :]
            P, speed = arc.mapto(B, act)
            vals = phantom.eval(P)
            if not np.all(np.isfinite(vals)):
                raise ValueError("phantom evaluated to a non-finite value on a curve")
            if kind == "mphi" and not arc.grad_done:
                vals = vals / geo.grad_norm(geom, P, float(phi))
            vals = vals * speed
            if arc.stretch:
                vals = vals * sder[None, :]
            tot[act] += (2.0 * arc.W[act] / n) * np.sum(vals, axis=1) * arc.mult
        return tot

    prev = level(n_start)
    n = 2 * n_start
    best = prev
    while n <= n_max:
        cur = level(n)
        best = (4.0 * cur - prev) / 3.0
        scale = max(float(np.max(np.abs(cur))), 1e-300)
        if float(np.max(np.abs(cur - prev))) <= rtol * scale:
            break
        prev = cur
        n *= 2
    return best


def _column_worker(args):
    return _column(*args)


def _split_phantom(phantom: Phantom):
    smooth, sharp = [], []
    for comp in phantom.components:
        if isinstance(comp, Disc) and comp.width == 0.0:
            sharp.append(comp)
        else:
            smooth.append(comp)
    return Phantom(tuple(smooth)), sharp


def _sharp_disc_data(geom, disc: Disc, lam, phi, kind):
    """Exact chord (radon) or circle-arc (ellipse) integrals of an indicator
    disc, vectorized over the whole (phi, lambda) lattice."""
    L = lam[None, :]
    if geom.tag == "radon":
        dist = np.cos(phi)[:, None] * disc.center[0] + np.sin(phi)[:, None] * disc.center[1] - L
        chord = 2.0 * np.sqrt(np.maximum(disc.radius**2 - dist * dist, 0.0))
        return disc.amplitude * chord
    # ellipse: the curve is a circle of radius sqrt(lambda) about e(phi), and
    # |grad psi| = 2 sqrt(lambda) is constant on it, so the mphi value is the
    # angular measure of the part inside the disc; riemann keeps arc length
    rc = np.sqrt(np.maximum(L, 0.0)) + np.zeros((phi.size, 1))
    cx = geom.e1 * np.cos(phi)[:, None] - disc.center[0]
    cy = geom.e2 * np.sin(phi)[:, None] - disc.center[1]
    d = np.hypot(cx, cy) + np.zeros_like(rc)
    with np.errstate(divide="ignore", invalid="ignore"):
        cu = (d * d + rc * rc - disc.radius**2) / (2.0 * d * rc)
    cu = np.where(np.isfinite(cu), cu, np.where(d + rc <= disc.radius, -1.0, 1.0))
    gamma = np.arccos(np.clip(cu, -1.0, 1.0))
    if kind == "mphi":
        return disc.amplitude * gamma
    return disc.amplitude * 2.0 * rc * gamma


def _working_radius(geom: GeometryFamily, phantom: Phantom) -> float:
    s = phantom.support_radius
    R = 1.05 * s
    cap = geo.domain_radius_cap(geom)
    if np.isfinite(cap):
        if s >= cap:
            raise ValueError("phantom support must lie strictly inside the family domain")
        R = min(R, 0.5 * (s + cap))
    return R


def _forward(phantom, geom, lambda_axis, phi_axis, kind, rtol, n_start, n_max, workers):
    lam = np.asarray(lambda_axis, dtype=float)
    phi = np.asarray(phi_axis, dtype=float)
    smooth, sharp = _split_phantom(phantom)
    if sharp and geom.tag not in ("radon", "ellipse"):
        raise ValueError(
            "sharp discs are integrated analytically only for radon and ellipse; "
            "give the disc a mollification width for other families"
        )
    data = np.zeros((phi.size, lam.size))
    if smooth.components:
        R = _working_radius(geom, smooth)
        jobs = [(geom, smooth, lam, float(p), R, kind, rtol, n_start, n_max) for p in phi]
        if workers is None:
            workers = int(os.environ.get("FUNKRADON_WORKERS", "1"))
        if workers > 1:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                cols = list(pool.map(_column_worker, jobs, chunksize=max(1, phi.size // (4 * workers))))
        else:
            cols = [_column(*job) for job in jobs]
        data += np.stack(cols, axis=0)
    for disc in sharp:
        data += _sharp_disc_data(geom, disc, lam, phi, kind)
    return Sinogram(geom, lam, phi, data, kind=kind)


def forward_mphi(
    phantom: Phantom,
    geom: GeometryFamily,
    lambda_axis,
    phi_axis,
    rtol: float = 1e-8,
    n_start: int = 128,
    n_max: int = 8192,
    workers: int | None = None,
) -> Sinogram:
    """Curve integrals of the phantom against 1/|grad psi| (the transform
    this package inverts). Deterministic for any worker count."""
    return _forward(phantom, geom, lambda_axis, phi_axis, "mphi", rtol, n_start, n_max, workers)


def forward_riemann(
    phantom: Phantom,
    geom: GeometryFamily,
    lambda_axis,
    phi_axis,
    rtol: float = 1e-8,
    n_start: int = 128,
    n_max: int = 8192,
    workers: int | None = None,
) -> Sinogram:
    """Plain arc-length integrals of the phantom over the family curves."""
    if geom.tag == "hyperbola":
        # conversion back to mphi data needs the m*mu split, which this
        # family lacks; refuse at production time rather than downstream
        geo.weight_mu(geom, 0.0)
    return _forward(phantom, geom, lambda_axis, phi_axis, "riemann", rtol, n_start, n_max, workers)


def riemann_to_mphi(sino: Sinogram) -> Sinogram:
    """Divide arc-length data by mu(lambda): the result is the mphi transform
    of m(x) f(x), ready for invert + pointwise division by m."""
    if sino.kind != "riemann":
        raise ValueError("riemann_to_mphi expects kind='riemann' data")
    mu = np.asarray(geo.weight_mu(sino.geom, sino.lambda_axis))
    tiny = 1e-14
    degenerate = mu < tiny
    if np.any(degenerate):
        bad = sino.data[:, degenerate]
        if np.any(np.abs(bad) > 1e-12 * (1.0 + np.max(np.abs(sino.data)))):
            raise ValueError("nonzero data at nodes where mu(lambda) = 0 cannot be converted")
        mu = np.where(degenerate, 1.0, mu)
    return Sinogram(sino.geom, sino.lambda_axis, sino.phi_axis, sino.data / mu[None, :], kind="mphi")


# ---------------------------------------------------------------------------
# curve tracing


def trace_curve(geom: GeometryFamily, lam: float, phi: float, region: float, step: float):
    """Polylines for {x : lambda_of(x, phi) = lam} inside |x| <= region.

    Each connected piece becomes one ordered polyline with vertices at arc
    spacing <= step, Newton-projected onto the exact level set. Degenerate
    (point) components are omitted.
    """
    if not (step > 0):
        raise ValueError("step must be positive")
    if not (region > 0):
        raise ValueError("region radius must be positive")
    lam_arr = np.array([float(lam)])
    lines = []
    for arc in _arcs(geom, lam_arr, float(phi), float(region), "mphi"):
        if arc.point or arc.W[0] <= 0.0:
            continue
        W = float(arc.W[0])
        # presample finely, measure length, then resample by arc length
        tfine = np.linspace(-W, W, 513)
        P, _ = arc.mapto(tfine[None, :], np.array([0]))
        pts = P[0]
        seg = np.hypot(*np.diff(pts, axis=0).T)
        cum = np.concatenate([[0.0], np.cumsum(seg)])
        total = float(cum[-1])
        if total == 0.0:
            continue
        n_seg = max(int(np.ceil(total / step)), 1)
        want = np.linspace(0.0, total, n_seg + 1)
        tv = np.interp(want, cum, tfine)
        P, _ = arc.mapto(tv[None, :], np.array([0]))
        lines.append(_project_onto_curve(geom, P[0], float(phi), float(lam)))
    return lines


def _project_onto_curve(geom, pts, phi, lam, max_iter=50):
    tol = 1e-10 * (1.0 + abs(lam))
    pts = np.array(pts, dtype=float)
    for _ in range(max_iter):
        resid = geo.lambda_of(geom, pts, phi) - lam
        if np.all(np.abs(resid) <= tol):
            return pts
        h = 1e-7 * (1.0 + np.hypot(pts[:, 0], pts[:, 1]))
        ex = np.stack([h, np.zeros_like(h)], axis=-1)
        ey = np.stack([np.zeros_like(h), h], axis=-1)
        gx = (geo.lambda_of(geom, pts + ex, phi) - geo.lambda_of(geom, pts - ex, phi)) / (2 * h)
        gy = (geo.lambda_of(geom, pts + ey, phi) - geo.lambda_of(geom, pts - ey, phi)) / (2 * h)
        g2 = np.maximum(gx * gx + gy * gy, 1e-300)
        pts = pts - (resid / g2)[:, None] * np.stack([gx, gy], axis=-1)
    raise TracingError(
        f"projection onto the level set lambda={lam}, phi={phi} did not converge "
        f"within {max_iter} iterations"
    )


# ---------------------------------------------------------------------------
# FKR1 file format


def write_fkr1(path, sino: Sinogram) -> None:
    """Text format: FKR1 / geometry descriptor / axis header / data rows.

    Floats are written with repr, so read-write round trips are exact.
    """
    lam = sino.lambda_axis
    head = (
        f"FKR1\n{geo.descriptor(sino.geom)}\n"
        f"{sino.kind} {lam.size} {sino.phi_axis.size} "
        f"{float(lam[0])!r} {float(lam[-1])!r} {sino.phi_full}\n"
    )
    rows = "\n".join(" ".join(repr(float(v)) for v in row) for row in sino.data)
    Path(path).write_text(head + rows + "\n")


def read_fkr1(path) -> Sinogram:
    lines = Path(path).read_text().splitlines()
    if not lines or lines[0].strip() != "FKR1":
        raise ValueError(f"{path}: not an FKR1 sinogram file")
    if len(lines) < 3:
        raise ValueError(f"{path}: truncated FKR1 header")
    geom = geo.parse_geometry(lines[1].strip())
    fields = lines[2].split()
    if len(fields) != 6:
        raise ValueError(f"{path}: malformed FKR1 axis header")
    kind, n_lam, n_phi = fields[0], int(fields[1]), int(fields[2])
    lam_min, lam_max = float(fields[3]), float(fields[4])
    full = fields[5]
    if full not in ("full", "half"):
        raise ValueError(f"{path}: phi coverage must be 'full' or 'half', got {full!r}")
    body = [ln for ln in lines[3:] if ln.strip()]
    if len(body) != n_phi:
        raise ValueError(f"{path}: expected {n_phi} data rows, found {len(body)}")
    data = np.empty((n_phi, n_lam))
    for j, ln in enumerate(body):
        row = ln.split()
        if len(row) != n_lam:
            raise ValueError(f"{path}: row {j} has {len(row)} values, expected {n_lam}")
        data[j] = [float(v) for v in row]
    lam = np.linspace(lam_min, lam_max, n_lam)
    span = np.pi if full == "half" else TAU
    phi = np.arange(n_phi) * (span / n_phi)
    return Sinogram(geom, lam, phi, data, kind=kind)
