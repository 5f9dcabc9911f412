"""Real trigonometric polynomials and the singular circle integrals built on them.

Three ingredients of the reconstruction kernel live here: root location for
t(phi) = sum a_m cos(m phi) + b_m sin(m phi) on the complex cylinder, the
regularized integral of 1/t^2 across real zeros (which vanishes exactly when
all zeros are real and simple), and residue summation for integrals of s/t
when t never vanishes on the real circle.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "TrigPoly",
    "roots",
    "all_real_simple",
    "pv_inverse_square",
    "residue_integral",
    "nucleus_check",
    "nucleus_ladder",
    "kernel_scale",
    "DEFAULT_EPS_STEPS",
]

# Relative regularization levels; multiplied by the coefficient scale of t
# before use so that small and large polynomials extrapolate equally well.
DEFAULT_EPS_STEPS = (1e-2, 5e-3, 2.5e-3, 1.25e-3)

_REAL_ROOT_IM_TOL = 1e-8


def _as_coeff_tuple(c):
    arr = np.atleast_1d(np.asarray(c, dtype=float))
    if arr.ndim != 1:
        raise ValueError("coefficient arrays must be one-dimensional")
    return tuple(float(v) for v in arr)


@dataclass(frozen=True)
class TrigPoly:
    """t(phi) = a[0] + sum_{m>=1} a[m] cos(m phi) + b[m] sin(m phi).

    Trailing harmonics with a[m] == b[m] == 0 are trimmed on construction, so
    ``order`` always names the true leading harmonic. b[0] is meaningless and
    pinned to zero.
    """

    a: tuple = (0.0,)
    b: tuple = ()

    def __post_init__(self):
        a = _as_coeff_tuple(self.a) if len(self.a) else (0.0,)
        b = _as_coeff_tuple(self.b) if len(self.b) else ()
        if len(b) < len(a):
            b = b + (0.0,) * (len(a) - len(b))
        elif len(b) > len(a):
            a = a + (0.0,) * (len(b) - len(a))
        b = (0.0,) + b[1:]
        k = len(a) - 1
        while k >= 1 and a[k] == 0.0 and b[k] == 0.0:
            k -= 1
        object.__setattr__(self, "a", a[: k + 1])
        object.__setattr__(self, "b", b[: k + 1])

    @property
    def order(self) -> int:
        return len(self.a) - 1

    def coeff_scale(self) -> float:
        """Largest coefficient magnitude, the natural size of t."""
        return max(max(abs(v) for v in self.a), max(abs(v) for v in self.b))

    def eval(self, phi):
        """Value of t at real or complex phi (arrays welcome); 2pi-periodic."""
        phi = np.asarray(phi)
        out = np.zeros(phi.shape, dtype=complex) + self.a[0]
        for m in range(1, len(self.a)):
            out = out + self.a[m] * np.cos(m * phi) + self.b[m] * np.sin(m * phi)
        if np.isrealobj(phi):
            return out.real if out.shape else float(out.real)
        return out if out.shape else complex(out)

    __call__ = eval

    def derivative(self) -> "TrigPoly":
        k = self.order
        da = [0.0] + [m * self.b[m] for m in range(1, k + 1)]
        db = [0.0] + [-m * self.a[m] for m in range(1, k + 1)]
        return TrigPoly(tuple(da), tuple(db))

    def _complex_coeffs(self):
        # c[m + k] multiplies z^(m+k) in z^k * t(phi), z = exp(i phi)
        k = self.order
        c = np.zeros(2 * k + 1, dtype=complex)
        c[k] = self.a[0]
        for m in range(1, k + 1):
            c[k + m] = 0.5 * (self.a[m] - 1j * self.b[m])
            c[k - m] = 0.5 * (self.a[m] + 1j * self.b[m])
        return c

    def __add__(self, other):
        if not isinstance(other, TrigPoly):
            return NotImplemented
        n = max(len(self.a), len(other.a))
        a = np.zeros(n)
        b = np.zeros(n)
        a[: len(self.a)] += self.a
        b[: len(self.b)] += self.b
        a[: len(other.a)] += other.a
        b[: len(other.b)] += other.b
        return TrigPoly(tuple(a), tuple(b))

    def __neg__(self):
        return TrigPoly(tuple(-v for v in self.a), tuple(-v for v in self.b))

    def __sub__(self, other):
        if not isinstance(other, TrigPoly):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, float)):
            return TrigPoly(tuple(other * v for v in self.a), tuple(other * v for v in self.b))
        if not isinstance(other, TrigPoly):
            return NotImplemented
        # convolve exponential coefficients, then fold back to cos/sin form
        ka, kb = self.order, other.order
        ca, cb = self._complex_coeffs(), other._complex_coeffs()
        cc = np.convolve(ca, cb)
        k = ka + kb
        a = [cc[k].real]
        b = [0.0]
        for m in range(1, k + 1):
            a.append((cc[k + m] + cc[k - m]).real)
            b.append((1j * (cc[k + m] - cc[k - m])).real)
        return TrigPoly(tuple(a), tuple(b))

    __rmul__ = __mul__


def roots(t: TrigPoly) -> np.ndarray:
    """All 2k zeros of t on the cylinder, as phi in [0, 2pi) + i tau.

    Substituting z = exp(i phi) turns z^k t into an algebraic polynomial of
    degree 2k; its roots map back through phi = -i log z, so |z| < 1
    corresponds to the upper half of the cylinder. Roots come sorted by real
    part (then imaginary part) for reproducibility.
    """
    k = t.order
    if k == 0:
        return np.zeros(0, dtype=complex)
    c = t._complex_coeffs()
    z = np.polynomial.polynomial.polyroots(c)
    phi = np.angle(z) - 1j * np.log(np.abs(z))
    phi = np.where(phi.real < 0, phi + 2 * np.pi, phi)
    return phi[np.lexsort((phi.imag, phi.real))]


def all_real_simple(t: TrigPoly, tol: float = 1e-8) -> bool:
    """True when every zero of t lies on the real circle and is simple.

    A zero counts as real when |Im phi| < tol and as simple when the
    derivative there exceeds tol times the coefficient scale of t.
    """
    if t.order == 0:
        return t.a[0] != 0.0
    rts = roots(t)
    if np.any(np.abs(rts.imag) >= tol):
        return False
    scale = t.coeff_scale()
    slopes = np.abs(t.derivative().eval(rts.real))
    return bool(np.all(slopes > tol * scale))


def _real_root_slopes(t: TrigPoly):
    """(real roots, |t'| there, complex roots) with a rejection for repeats."""
    rts = roots(t)
    real_mask = np.abs(rts.imag) < _REAL_ROOT_IM_TOL
    real = rts.real[real_mask]
    cplx = rts[~real_mask]
    slopes = np.abs(t.derivative().eval(real)) if real.size else np.zeros(0)
    return real, slopes, cplx


def _regularized_mean(tvals: np.ndarray, eps: float) -> float:
    # Re 1/(t + i eps)^2 written out; even in t, bounded by 1/eps^2.
    # Accumulated in extended precision: the peaks reach 1/eps^2 while the
    # mean is smaller by orders of the relative level, and the digits lost
    # to that cancellation would cap how well the ladder extrapolates.
    t2 = np.square(tvals.astype(np.longdouble))
    e2 = np.longdouble(eps) ** 2
    denom = t2 + e2
    return float(np.mean((t2 - e2) / (denom * denom)) * 2 * np.pi)


def _regularized_level(t: TrigPoly, n: int, eps: float) -> float:
    # Same mean on an n-point midpoint grid, evaluated in bounded chunks so
    # the fine grids demanded by nearly repeated zeros stay cheap on memory.
    # Everything runs in extended precision, including t itself: near a peak
    # the term sensitivity to t grows like 1/eps^3, so double-precision node
    # values alone would put a noise floor well above the extrapolated limit.
    step = np.longdouble(2 * np.pi) / n
    e2 = np.longdouble(eps) ** 2
    total = np.longdouble(0.0)
    start = 0
    while start < n:
        m = min(n - start, 1 << 20)
        ph = (np.arange(start, start + m) + np.longdouble(0.5)) * step
        tv = np.full(ph.shape, np.longdouble(t.a[0]))
        for k in range(1, len(t.a)):
            tv += t.a[k] * np.cos(k * ph) + t.b[k] * np.sin(k * ph)
        t2 = np.square(tv)
        denom = t2 + e2
        total += np.sum((t2 - e2) / (denom * denom))
        start += m
    return float(total / n * 2 * np.pi)


def _extrapolate_to_zero(eps: np.ndarray, vals: np.ndarray) -> float:
    deg = min(3, len(eps) - 1)
    # Fit against eps/eps[0]: the constant term is unchanged and the
    # Vandermonde stays conditioned even when a tiny difference amplitude
    # puts the whole ladder at 1e-5 scales.
    V = np.vander(eps / eps[0], deg + 1, increasing=True)
    coef, *_ = np.linalg.lstsq(V, vals, rcond=None)
    return float(coef[0])


def _check_eps_sequence(eps_sequence):
    eps = np.asarray(tuple(eps_sequence), dtype=float)
    if eps.size < 2:
        raise ValueError("need at least two regularization levels")
    if np.any(eps <= 0) or np.any(np.diff(eps) >= 0):
        raise ValueError("eps_sequence must be positive and strictly decreasing")
    return eps


def pv_inverse_square(t: TrigPoly, eps_sequence=None) -> float:
    """Limit of Re integral_0^{2pi} dphi / (t(phi) + i eps)^2 as eps -> 0.

    Each level uses a uniform periodic rule sized from the distance of the
    integrand's complex poles to the real axis, then the levels are
    extrapolated polynomially to eps = 0. When every zero of t is real and
    simple the limit is zero; repeated real zeros are rejected because the
    limit does not exist there.

    ``eps_sequence`` entries are absolute; when omitted, a default geometric
    ladder scaled by the coefficient size of t is used.
    """
    eps, vals = _pv_levels(t, eps_sequence)
    return _extrapolate_to_zero(eps, vals)


def _pv_levels(t: TrigPoly, eps_sequence):
    scale = t.coeff_scale()
    if scale == 0.0:
        raise ValueError("t is identically zero")
    real, slopes, cplx = _real_root_slopes(t)
    if real.size and np.any(slopes <= 1e-6 * scale):
        raise ValueError("t has a repeated (or nearly repeated) real zero")
    if eps_sequence is None:
        base = scale
        if real.size:
            # The extrapolation expands in eps * |t''| / t'^2 around each real
            # zero; keep the largest level well inside that regime so nearly
            # repeated zeros (small local slope) still extrapolate cleanly.
            curv = np.abs(t.derivative().derivative().eval(real))
            local = slopes * slopes / np.maximum(curv, 1e-30)
            base = min(base, 0.2 * float(np.min(local)))
            base = max(base, 1e-7 * scale)
        eps = np.asarray(DEFAULT_EPS_STEPS) * base
    else:
        eps = _check_eps_sequence(eps_sequence)

    vals = np.empty(eps.size)
    for i, e in enumerate(eps):
        dists = [1.0]
        if real.size:
            dists.append(float(np.min(e / slopes)))
        if cplx.size:
            dists.append(float(np.min(np.abs(cplx.imag))) * 0.5)
        dmin = max(min(dists), 1e-9)
        n = min(int(44.0 / dmin) + 128, 6_000_000)
        vals[i] = _regularized_level(t, n, e)
    return eps, vals


def residue_integral(s: TrigPoly, t: TrigPoly) -> float:
    """integral_0^{2pi} s/t dphi for t without real zeros, by residue sum.

    Closing a period rectangle upward picks up the zeros of t in the upper
    half cylinder, Re(2 pi i * sum s(phi_m)/t'(phi_m)). When s and t have
    equal order the top edge of the rectangle no longer decays: s/t tends to
    the ratio of leading harmonic coefficients as Im phi grows, adding the
    constant 2 pi (a_k^s + i b_k^s)/(a_k^t + i b_k^t). An order of s above
    that of t is rejected, as is any real zero of t.
    """
    k = t.order
    if s.order > k:
        raise ValueError("order of s must not exceed the order of t")
    if k == 0:
        if t.a[0] == 0.0:
            raise ValueError("t is identically zero")
        return 2 * np.pi * s.a[0] / t.a[0]
    rts = roots(t)
    if np.any(np.abs(rts.imag) < _REAL_ROOT_IM_TOL):
        raise ValueError("t has a real zero; the residue formula does not apply")
    upper = rts[rts.imag > 0]
    td = t.derivative()
    total = 2j * np.pi * np.sum(s.eval(upper) / td.eval(upper))
    if s.order == k:
        total = total + 2 * np.pi * (s.a[k] + 1j * s.b[k]) / (t.a[k] + 1j * t.b[k])
    return float(np.real(total))


def _sampled_levels(sampler, eps: np.ndarray) -> np.ndarray:
    """Regularized 1/d^2 levels for a difference available only by sampling."""
    probe = sampler(4096)
    scale = float(np.max(np.abs(probe)))
    if scale == 0.0:
        raise ValueError("sampled difference is identically zero")
    slope = float(np.max(np.abs(np.diff(probe)))) / (2 * np.pi / 4096)
    vals = np.empty(eps.size)
    for i, e in enumerate(eps):
        n = min(int(44.0 * max(slope, 1e-12) / e) + 256, 4_000_000)
        vals[i] = _regularized_mean(sampler(n), e)
    return vals


def nucleus_ladder(geom, x, y, eps_sequence=None):
    """Regularized angular integrals of 1/(psi(x,.) - psi(y,.))^2 across a
    ladder of eps levels, plus their extrapolation to eps = 0.

    Returns (eps, level_values, extrapolated). Reports want the raw levels;
    everything else goes through nucleus_check, which keeps only the limit.
    """
    from .geometry import psi_branch, trig_difference

    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if np.allclose(x, y):
        raise ValueError("nucleus is only defined for distinct points")
    tp = trig_difference(geom, x, y)
    if tp is not None:
        eps, vals = _pv_levels(tp, eps_sequence)
        return eps, vals, _extrapolate_to_zero(eps, vals)

    def sampler(n):
        ph = (np.arange(n) + 0.5) * (2 * np.pi / n)
        return psi_branch(geom, x, ph) - psi_branch(geom, y, ph)

    if eps_sequence is None:
        scale = float(np.max(np.abs(sampler(4096))))
        if scale == 0.0:
            raise ValueError("sampled difference is identically zero")
        eps = np.asarray(DEFAULT_EPS_STEPS) * scale
    else:
        eps = _check_eps_sequence(eps_sequence)
    vals = _sampled_levels(sampler, eps)
    return eps, vals, _extrapolate_to_zero(eps, vals)


def nucleus_check(geom, x, y, eps_sequence=None) -> float:
    """Regularized angular integral of 1/(psi(x,.) - psi(y,.))^2, extrapolated.

    Dispatches to the exact trig-polynomial path when the family provides the
    difference in closed form; otherwise (parabola) integrates the sampled
    difference of the smooth branch directly. The result should vanish for
    every valid pair x != y; that is the exactness condition of the
    reconstruction formula, and the test suites assert it rather than
    assuming it.
    """
    return nucleus_ladder(geom, x, y, eps_sequence)[2]


def kernel_scale(geom, x, y) -> float:
    """Slope scale |t'| at the real zeros of the psi difference.

    Used to set tolerances for nucleus values: the natural size of the
    regularized integral's fluctuations is the squared slope. Falls back to
    the maximum slope over the circle when roots are unavailable.
    """
    from .geometry import psi_branch, trig_difference

    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    tp = trig_difference(geom, x, y)
    if tp is not None:
        real, slopes, _ = _real_root_slopes(tp)
        if real.size:
            return float(np.max(slopes))
        ph = np.linspace(0, 2 * np.pi, 1024, endpoint=False)
        return float(np.max(np.abs(tp.derivative().eval(ph))))
    n = 8192
    ph = (np.arange(n) + 0.5) * (2 * np.pi / n)
    d = psi_branch(geom, x, ph) - psi_branch(geom, y, ph)
    return float(np.max(np.abs(np.diff(d)))) / (2 * np.pi / n)
