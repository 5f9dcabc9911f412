"""Analytic test objects: sums of Gaussians and mollified discs.

Components evaluate at arbitrary points, so the forward transform can
integrate them along curves without committing to a grid; rasterize produces
the reference field that reconstructions are measured against.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .fields import Grid, ScalarField

__all__ = ["Gaussian", "Disc", "Phantom", "parse_phantom", "rel_l2", "linf"]


@dataclass(frozen=True)
class Gaussian:
    center: tuple[float, float]
    sigma: float
    amplitude: float = 1.0

    def __post_init__(self):
        if not (self.sigma > 0):
            raise ValueError("gaussian sigma must be positive")

    @property
    def support_radius(self) -> float:
        # effectively zero past six sigmas
        return float(np.hypot(*self.center) + 6.0 * self.sigma)

    def eval(self, x):
        x = np.asarray(x, dtype=float)
        d2 = (x[..., 0] - self.center[0]) ** 2 + (x[..., 1] - self.center[1]) ** 2
        return self.amplitude * np.exp(-0.5 * d2 / self.sigma**2)


@dataclass(frozen=True)
class Disc:
    """Flat-top disc of the given radius; the profile rolls off smoothly over
    the band of width w just inside the rim (cubic smoothstep), so the value
    is exactly zero at and beyond the radius. w = 0 gives a sharp indicator.
    """

    center: tuple[float, float]
    radius: float
    amplitude: float = 1.0
    width: float = 0.0

    def __post_init__(self):
        if not (self.radius > 0):
            raise ValueError("disc radius must be positive")
        if self.width < 0:
            raise ValueError("disc mollification width cannot be negative")

    @property
    def support_radius(self) -> float:
        return float(np.hypot(*self.center) + self.radius)

    def eval(self, x):
        x = np.asarray(x, dtype=float)
        d = np.hypot(x[..., 0] - self.center[0], x[..., 1] - self.center[1])
        if self.width == 0.0:
            return self.amplitude * (d < self.radius)
        u = np.clip((self.radius - d) / self.width, 0.0, 1.0)
        return self.amplitude * u * u * (3.0 - 2.0 * u)


@dataclass(frozen=True)
class Phantom:
    components: tuple = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))

    @property
    def support_radius(self) -> float:
        if not self.components:
            return 0.0
        return max(c.support_radius for c in self.components)

    def eval(self, x):
        x = np.asarray(x, dtype=float)
        out = np.zeros(x.shape[:-1])
        for c in self.components:
            out = out + c.eval(x)
        return out if out.shape else float(out)

    def rasterize(self, grid: Grid) -> ScalarField:
        return ScalarField(grid, self.eval(grid.points()))


def parse_phantom(text: str) -> Phantom:
    """Parse ``gauss:cx,cy,sigma,amp`` / ``disc:cx,cy,r,amp[,w]`` terms
    joined by semicolons."""
    comps = []
    for term in text.split(";"):
        term = term.strip()
        if not term:
            continue
        shape, _, rest = term.partition(":")
        try:
            nums = [float(v) for v in rest.split(",")] if rest else []
        except ValueError:
            raise ValueError(f"non-numeric parameter in phantom term {term!r}") from None
        if shape == "gauss":
            if len(nums) != 4:
                raise ValueError(f"gauss needs cx,cy,sigma,amp: {term!r}")
            comps.append(Gaussian((nums[0], nums[1]), nums[2], nums[3]))
        elif shape == "disc":
            if len(nums) not in (4, 5):
                raise ValueError(f"disc needs cx,cy,r,amp[,w]: {term!r}")
            w = nums[4] if len(nums) == 5 else 0.0
            comps.append(Disc((nums[0], nums[1]), nums[2], nums[3], w))
        else:
            raise ValueError(f"unknown phantom shape {shape!r}")
    return Phantom(tuple(comps))


def rel_l2(a: ScalarField, b: ScalarField) -> float:
    """Relative l2 error of a against reference b."""
    return a.rel_l2(b)


def linf(a: ScalarField, b: ScalarField) -> float:
    return a.linf(b)
