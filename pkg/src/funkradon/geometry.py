"""Seven plane curve families and their generating functions.

Each family is the level-curve system of a generating function psi(x, phi):
the data curve at parameters (lambda, phi) is {x : lambda_of(x, phi) = lambda}.
This module owns the formulas: psi itself, its gradient magnitude in the
family metric, the admissible lambda interval over a support disc, the
m(x) * mu(lambda) factorization of the gradient where it exists, the
pointwise normalizer D(x) used by the reconstruction, and the exact
trigonometric polynomial psi(x, .) - psi(y, .) where that difference is one.

Families
--------
radon        straight lines, psi = -<x, e(phi)>
funk         great circles of the sphere in the gnomonic (hemisphere) chart,
             where they appear as straight lines; points are chart coordinates
hgeodesic    geodesics of the Poincare disc (circles meeting the unit circle
             at right angles)
equidistant  curves at constant distance from a Poincare geodesic
ellipse      circles centered on a fixed ellipse e(phi) = (e1 cos, e2 sin)
hyperbola    confocal hyperbola branches with focus at the origin,
             eccentricity eps > 1
parabola     confocal parabolas with focus at the origin
cormack      polar curves r^k cos(k theta - phi) = lambda, k a positive
             integer; fields must be invariant under rotation by 2 pi / k
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .trigpoly import TrigPoly, residue_integral

__all__ = [
    "GeometryFamily",
    "GeometryDomainError",
    "FactorizationUnavailableError",
    "TAGS",
    "parse_geometry",
    "descriptor",
    "psi",
    "psi_branch",
    "grad_norm",
    "lambda_of",
    "lambda_sign",
    "lambda_range",
    "dcoef_closed",
    "weight_m",
    "weight_mu",
    "trig_difference",
    "arc_element",
    "domain_radius_cap",
]

TAGS = ("radon", "funk", "hgeodesic", "equidistant", "ellipse", "hyperbola", "parabola", "cormack")


class GeometryDomainError(ValueError):
    """A point lies outside the mathematical domain of the family."""


class FactorizationUnavailableError(ValueError):
    """The gradient of this family does not split as m(x) * mu(lambda)."""


@dataclass(frozen=True)
class GeometryFamily:
    tag: str
    support_radius: float = 1.0
    e1: float | None = None
    e2: float | None = None
    eps: float | None = None
    k: int | None = None

    def __post_init__(self):
        if self.tag not in TAGS:
            raise ValueError(f"unknown curve family tag {self.tag!r}")
        if not (self.support_radius > 0):
            raise ValueError("support_radius must be positive")
        if self.tag == "ellipse":
            if self.e1 is None or self.e2 is None:
                raise ValueError("ellipse needs half-axes e1 and e2")
            if not (self.e1 > 0 and self.e2 > 0):
                raise ValueError("ellipse half-axes must be positive")
        if self.tag == "hyperbola":
            if self.eps is None or not (self.eps > 1):
                raise ValueError("hyperbola needs eccentricity eps > 1")
        if self.tag == "cormack":
            if self.k is None or int(self.k) != self.k or self.k < 1:
                raise ValueError("cormack needs a positive integer order k")
            object.__setattr__(self, "k", int(self.k))
        if self.tag in ("hgeodesic", "equidistant") and not (self.support_radius < 1):
            raise ValueError(f"{self.tag} lives on the open unit disc; support_radius must be < 1")

    @property
    def kernel_condition_ok(self) -> bool:
        """Whether every pair in the support disc keeps the kernel exact.

        Only the ellipse family has a nontrivial condition: the difference
        polynomial keeps simple real zeros for all pairs in the disc exactly
        when support_radius < min(e1, e2). Construction does not enforce it
        so that diagnostic tooling can demonstrate the failure mode.
        """
        if self.tag == "ellipse":
            return self.support_radius < min(self.e1, self.e2)
        return True


def _fmt(v) -> str:
    f = float(v)
    return str(int(f)) if f == int(f) else repr(f)


def descriptor(geom: GeometryFamily) -> str:
    """Canonical string form, e.g. ``ellipse:e1=1.2,e2=0.8,support=0.7``."""
    parts = []
    if geom.tag == "ellipse":
        parts += [f"e1={_fmt(geom.e1)}", f"e2={_fmt(geom.e2)}"]
    elif geom.tag == "hyperbola":
        parts.append(f"eps={_fmt(geom.eps)}")
    elif geom.tag == "cormack":
        parts.append(f"k={geom.k}")
    parts.append(f"support={_fmt(geom.support_radius)}")
    return geom.tag + ":" + ",".join(parts)


def parse_geometry(text: str) -> GeometryFamily:
    """Parse a descriptor string (case-sensitive, order-insensitive params)."""
    text = text.strip()
    tag, _, rest = text.partition(":")
    if tag not in TAGS:
        raise ValueError(f"unknown curve family tag {tag!r}")
    kv = {}
    if rest:
        for item in rest.split(","):
            key, sep, val = item.partition("=")
            if not sep:
                raise ValueError(f"malformed parameter {item!r} in {text!r}")
            key = key.strip()
            try:
                kv[key] = float(val)
            except ValueError:
                raise ValueError(f"non-numeric value for {key!r} in {text!r}") from None
    support = kv.pop("support", 1.0)
    known = {"ellipse": {"e1", "e2"}, "hyperbola": {"eps"}, "cormack": {"k"}}.get(tag, set())
    extra = set(kv) - known
    if extra:
        raise ValueError(f"parameter(s) {sorted(extra)} not valid for family {tag!r}")
    return GeometryFamily(
        tag,
        support_radius=support,
        e1=kv.get("e1"),
        e2=kv.get("e2"),
        eps=kv.get("eps"),
        k=int(kv["k"]) if "k" in kv else None,
    )


def _split(x):
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != 2:
        raise ValueError("points must have a trailing axis of length 2")
    return x[..., 0], x[..., 1]


def _check_domain(geom: GeometryFamily, x1, x2):
    r2 = x1 * x1 + x2 * x2
    if geom.tag in ("hgeodesic", "equidistant") and np.any(r2 >= 1.0):
        raise GeometryDomainError(f"{geom.tag} requires |x| < 1")
    if geom.tag in ("parabola", "cormack") and np.any(r2 == 0.0):
        raise GeometryDomainError(f"{geom.tag} is undefined at the origin")


def domain_radius_cap(geom: GeometryFamily) -> float:
    """Largest radius the family's domain admits (inf when unbounded)."""
    return 1.0 if geom.tag in ("hgeodesic", "equidistant") else np.inf


def psi(geom: GeometryFamily, x, phi):
    """Generating function psi(x, phi); broadcasts over points and angles."""
    x1, x2 = _split(x)
    _check_domain(geom, x1, x2)
    phi = np.asarray(phi, dtype=float)
    c, s = np.cos(phi), np.sin(phi)
    tag = geom.tag
    if tag == "radon":
        return -(x1 * c + x2 * s)
    if tag == "funk":
        return x1 * c + x2 * s
    if tag == "hgeodesic":
        return -2.0 * (x1 * c + x2 * s) / (1.0 + x1 * x1 + x2 * x2)
    if tag == "equidistant":
        return -2.0 * (x1 * c + x2 * s) / (1.0 - (x1 * x1 + x2 * x2))
    if tag == "ellipse":
        return (x1 - geom.e1 * c) ** 2 + (x2 - geom.e2 * s) ** 2
    if tag == "hyperbola":
        return geom.eps * (x1 * c + x2 * s) - np.hypot(x1, x2)
    if tag == "parabola":
        rad = np.hypot(x1, x2) + x1 * c + x2 * s
        return -np.sqrt(np.maximum(rad, 0.0))
    # cormack
    w = (x1 + 1j * x2) ** geom.k
    return -(w.real * c + w.imag * s)


def psi_branch(geom: GeometryFamily, x, phi):
    """Smooth representative of psi used for sampled kernel checks.

    Identical to psi everywhere except the parabola family, where the signed
    half-angle branch -sqrt(2 r) cos((phi - theta)/2) is returned instead of
    its absolute-value folding. The two differ only by sign on half the
    circle, and the squared difference that enters the kernel is what must be
    2pi-periodic, which it is.
    """
    if geom.tag != "parabola":
        return psi(geom, x, phi)
    x1, x2 = _split(x)
    _check_domain(geom, x1, x2)
    phi = np.asarray(phi, dtype=float)
    r = np.hypot(x1, x2)
    theta = np.arctan2(x2, x1)
    return -np.sqrt(2.0 * r) * np.cos(0.5 * (phi - theta))


def grad_norm(geom: GeometryFamily, x, phi):
    """|grad psi(x, phi)| in the family metric (spherical for funk,
    Euclidean otherwise); strictly positive on the domain."""
    x1, x2 = _split(x)
    _check_domain(geom, x1, x2)
    phi = np.asarray(phi, dtype=float)
    c, s = np.cos(phi), np.sin(phi)
    tag = geom.tag
    if tag == "radon":
        val = np.ones(np.broadcast(x1, c).shape)
    elif tag == "funk":
        val = np.sqrt((1.0 + x1 * x1 + x2 * x2) * (1.0 + (x1 * c + x2 * s) ** 2))
    elif tag == "hgeodesic":
        p = psi(geom, x, phi)
        val = (2.0 / (1.0 + x1 * x1 + x2 * x2)) * np.sqrt(np.maximum(1.0 - p * p, 0.0))
    elif tag == "equidistant":
        p = psi(geom, x, phi)
        val = (2.0 / (1.0 - (x1 * x1 + x2 * x2))) * np.sqrt(1.0 + p * p)
    elif tag == "ellipse":
        val = 2.0 * np.hypot(x1 - geom.e1 * c, x2 - geom.e2 * s)
    elif tag == "hyperbola":
        r = np.hypot(x1, x2)
        if np.any(r == 0.0):
            raise GeometryDomainError("hyperbola gradient is undefined at the origin")
        val = np.sqrt(1.0 + geom.eps**2 - 2.0 * geom.eps * (x1 * c + x2 * s) / r)
    elif tag == "parabola":
        val = 1.0 / np.sqrt(2.0 * np.hypot(x1, x2)) + np.zeros(np.broadcast(x1, c).shape)
    else:  # cormack
        r = np.hypot(x1, x2)
        val = geom.k * r ** (geom.k - 1) + np.zeros(np.broadcast(x1, c).shape)
    if not np.all(val > 0.0):
        raise GeometryDomainError(f"{tag} gradient is not strictly positive at the given point")
    return val if val.shape else float(val)


def lambda_sign(geom: GeometryFamily) -> float:
    """Sign s with lambda_of = s * psi (curves are level sets of lambda_of)."""
    return 1.0 if geom.tag in ("ellipse", "hyperbola") else -1.0


def lambda_of(geom: GeometryFamily, x, phi):
    """Curve parameter of the family member through x at angle phi."""
    return lambda_sign(geom) * psi(geom, x, phi)


def lambda_range(geom: GeometryFamily, support_radius: float | None = None):
    """Interval of lambda values for curves meeting |x| <= support_radius,
    intersected with the family's admissible parameter set."""
    rho = geom.support_radius if support_radius is None else float(support_radius)
    tag = geom.tag
    if tag in ("radon", "funk"):
        return (-rho, rho)
    if tag == "hgeodesic":
        z = 2.0 * rho / (1.0 + rho * rho)
        return (-z, z)
    if tag == "equidistant":
        z = min(2.0 * rho / (1.0 - rho * rho), 1.0)
        return (-z, z)
    if tag == "ellipse":
        lo = max(min(geom.e1, geom.e2) - rho, 0.0)
        hi = max(geom.e1, geom.e2) + rho
        return (lo * lo, hi * hi)
    if tag == "hyperbola":
        return (-(1.0 + geom.eps) * rho, (geom.eps - 1.0) * rho)
    if tag == "parabola":
        return (0.0, np.sqrt(2.0 * rho))
    return (-(rho**geom.k), rho**geom.k)


def dcoef_closed(geom: GeometryFamily, x):
    """Normalizer D(x), the angular mean of 1/|grad psi|^2, in closed form.

    Every family admits one. For an ellipse with unequal half-axes the mean
    is evaluated exactly by the residue formula applied to the order-two
    polynomial |x - e(phi)|^2, which never vanishes for points inside the
    ellipse; the circular case reduces to 1/(4 (R^2 - |x|^2)).
    """
    x1, x2 = _split(x)
    _check_domain(geom, x1, x2)
    r2 = x1 * x1 + x2 * x2
    tag = geom.tag
    if tag == "radon":
        out = np.ones_like(r2)
    elif tag == "funk":
        out = (1.0 + r2) ** -1.5
    elif tag == "hgeodesic":
        out = (1.0 + r2) ** 3 / (4.0 * (1.0 - r2))
    elif tag == "equidistant":
        out = (1.0 - r2) ** 3 / (4.0 * (1.0 + r2))
    elif tag == "ellipse":
        if geom.e1 == geom.e2:
            gap = geom.e1**2 - r2
            if np.any(gap <= 0.0):
                raise GeometryDomainError("normalizer needs |x| inside the circle of centers")
            out = 0.25 / gap
        else:
            one = TrigPoly((1.0,))
            flat = np.broadcast_arrays(x1, x2)
            out = np.empty(flat[0].shape)
            it = np.nditer(flat[0], flags=["multi_index"])
            for _ in it:
                idx = it.multi_index
                u, v = float(flat[0][idx]), float(flat[1][idx])
                t2 = TrigPoly(
                    (u * u + v * v + 0.5 * (geom.e1**2 + geom.e2**2), -2.0 * u * geom.e1, 0.5 * (geom.e1**2 - geom.e2**2)),
                    (0.0, -2.0 * v * geom.e2, 0.0),
                )
                out[idx] = residue_integral(one, t2) / (8.0 * np.pi)
    elif tag == "hyperbola":
        out = np.full_like(r2, 1.0 / (geom.eps**2 - 1.0))
    elif tag == "parabola":
        out = 2.0 * np.sqrt(r2)
    else:  # cormack
        if np.any(r2 == 0.0):
            raise GeometryDomainError("cormack normalizer is undefined at the origin")
        out = 1.0 / (geom.k**2 * r2 ** (geom.k - 1))
    return out if np.ndim(out) else float(out)


def weight_m(geom: GeometryFamily, x):
    """Spatial factor of |grad psi| = m(x) mu(lambda)."""
    x1, x2 = _split(x)
    _check_domain(geom, x1, x2)
    r2 = x1 * x1 + x2 * x2
    tag = geom.tag
    if tag == "hyperbola":
        raise FactorizationUnavailableError("hyperbola gradient does not factor as m(x) mu(lambda)")
    if tag in ("radon", "ellipse"):
        out = np.ones_like(r2)
    elif tag == "funk":
        out = np.sqrt(1.0 + r2)
    elif tag == "hgeodesic":
        out = 2.0 / (1.0 + r2)
    elif tag == "equidistant":
        out = 2.0 / (1.0 - r2)
    elif tag == "parabola":
        out = (2.0 * np.sqrt(r2)) ** -0.5
    else:  # cormack
        out = geom.k * np.sqrt(r2) ** (geom.k - 1)
    return out if np.ndim(out) else float(out)


def weight_mu(geom: GeometryFamily, lam):
    """Curve-parameter factor of |grad psi| = m(x) mu(lambda)."""
    lam = np.asarray(lam, dtype=float)
    tag = geom.tag
    if tag == "hyperbola":
        raise FactorizationUnavailableError("hyperbola gradient does not factor as m(x) mu(lambda)")
    if tag in ("radon", "parabola", "cormack"):
        out = np.ones_like(lam)
    elif tag in ("funk", "equidistant"):
        out = np.sqrt(1.0 + lam * lam)
    elif tag == "hgeodesic":
        out = np.sqrt(1.0 - lam * lam)
    else:  # ellipse
        out = 2.0 * np.sqrt(lam)
    return out if out.shape else float(out)


def trig_difference(geom: GeometryFamily, x, y):
    """psi(x, .) - psi(y, .) as an exact TrigPoly, or None for the parabola.

    Every available family yields a polynomial of order one in phi (the
    cormack harmonics sit in the spatial power, not the angle) with an extra
    constant term for ellipse and hyperbola. The parabola difference involves
    half-angle square roots and is not a trigonometric polynomial.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != (2,) or y.shape != (2,):
        raise ValueError("trig_difference expects single points")
    _check_domain(geom, x[0], x[1])
    _check_domain(geom, y[0], y[1])
    if np.all(x == y):
        raise ValueError("points must be distinct")
    tag = geom.tag
    if tag == "parabola":
        return None
    if tag == "radon":
        d = y - x
        return TrigPoly((0.0, d[0]), (0.0, d[1]))
    if tag == "funk":
        d = x - y
        return TrigPoly((0.0, d[0]), (0.0, d[1]))
    if tag == "hgeodesic":
        w = -2.0 * (x / (1.0 + x @ x) - y / (1.0 + y @ y))
        return TrigPoly((0.0, w[0]), (0.0, w[1]))
    if tag == "equidistant":
        w = -2.0 * (x / (1.0 - x @ x) - y / (1.0 - y @ y))
        return TrigPoly((0.0, w[0]), (0.0, w[1]))
    if tag == "ellipse":
        d = x - y
        return TrigPoly((x @ x - y @ y, -2.0 * d[0] * geom.e1), (0.0, -2.0 * d[1] * geom.e2))
    if tag == "hyperbola":
        d = x - y
        const = np.hypot(y[0], y[1]) - np.hypot(x[0], x[1])
        return TrigPoly((const, geom.eps * d[0]), (0.0, geom.eps * d[1]))
    # cormack
    w = (x[0] + 1j * x[1]) ** geom.k - (y[0] + 1j * y[1]) ** geom.k
    return TrigPoly((0.0, -w.real), (0.0, -w.imag))


def arc_element(geom: GeometryFamily, x, v):
    """Metric length of the Euclidean tangent v attached at x.

    The funk family measures length in the sphere metric pulled back through
    the gnomonic chart; every other family uses the Euclidean length (that is
    the metric in which their gradient and normalizer formulas hold).
    """
    x1, x2 = _split(x)
    v1, v2 = _split(v)
    if geom.tag != "funk":
        return np.hypot(v1, v2)
    x0sq = 1.0 / (1.0 + x1 * x1 + x2 * x2)
    dot = x1 * v1 + x2 * v2
    return np.sqrt(x0sq * np.maximum(v1 * v1 + v2 * v2 - x0sq * dot * dot, 0.0))
