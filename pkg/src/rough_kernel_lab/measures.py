"""Absolutely continuous signed measures given by densities.

A measure is a sum of components, each supported on a ball: uniform
bumps, truncated Gaussians, or custom profiles, optionally clipped to
the inside/outside of further balls (clips realize the proof-style
restriction of a measure to a ball or its complement).  Densities are
bounded with compact support, so the total variation is automatically
finite.  Dilation acts by mu_t(E) = mu(E/t) and preserves both the
total mass and the total variation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.optimize import brentq
from scipy.special import gammainc

from .errors import InvalidArgumentError, UnsupportedDimensionError
from .quadrature import integrate_line, panel_nodes

TWO_PI = 2.0 * math.pi


def ball_volume(n: int, radius: float) -> float:
    return math.pi ** (n / 2.0) / math.gamma(n / 2.0 + 1.0) * radius ** n


@dataclass(frozen=True)
class Ball:
    center: np.ndarray
    radius: float

    def __post_init__(self):
        c = np.asarray(self.center, dtype=float).reshape(-1)
        c.flags.writeable = False
        object.__setattr__(self, "center", c)
        object.__setattr__(self, "radius", float(self.radius))

    def contains(self, points):
        pts = np.asarray(points, dtype=float)
        d2 = np.sum((pts - self.center) ** 2, axis=-1)
        return d2 <= self.radius ** 2

    def scaled(self, t: float) -> "Ball":
        return Ball(self.center * t, self.radius * t)


@dataclass(frozen=True)
class Component:
    """One density piece: a profile on a support ball, with optional clips."""

    kind: str                 # 'uniform' | 'gaussian' | 'custom'
    ball: Ball
    amplitude: float
    sigma: float = 0.0
    profile: object = None    # custom: vectorized points -> values
    clip_inside: tuple = field(default_factory=tuple)
    clip_outside: tuple = field(default_factory=tuple)

    def density(self, points):
        pts = np.asarray(points, dtype=float)
        if self.kind == "uniform":
            vals = np.full(pts.shape[:-1], self.amplitude)
        elif self.kind == "gaussian":
            d2 = np.sum((pts - self.ball.center) ** 2, axis=-1)
            vals = self.amplitude * np.exp(-0.5 * d2 / self.sigma ** 2)
        else:
            vals = self.amplitude * np.asarray(self.profile(pts), dtype=float)
        mask = self.ball.contains(pts)
        for b in self.clip_inside:
            mask &= b.contains(pts)
        for b in self.clip_outside:
            mask &= ~b.contains(pts)
        return np.where(mask, vals, 0.0)

    @property
    def clipped(self) -> bool:
        return bool(self.clip_inside or self.clip_outside)

    @property
    def analytic(self) -> bool:
        return self.kind in ("uniform", "gaussian") and not self.clipped

    def scaled(self, t: float) -> "Component":
        prof = self.profile
        if self.kind == "custom":
            base = self.profile
            prof = lambda pts, _b=base, _t=t: _b(np.asarray(pts) / _t)
        return Component(
            kind=self.kind, ball=self.ball.scaled(t),
            amplitude=self.amplitude / t ** self.ball.center.size,
            sigma=self.sigma * t, profile=prof,
            clip_inside=tuple(b.scaled(t) for b in self.clip_inside),
            clip_outside=tuple(b.scaled(t) for b in self.clip_outside))

    def unclipped_mass(self) -> float:
        """Signed mass ignoring clips (built-in profiles only)."""
        n = self.ball.center.size
        if self.kind == "uniform":
            return self.amplitude * ball_volume(n, self.ball.radius)
        if self.kind == "gaussian":
            full = self.amplitude * (TWO_PI * self.sigma ** 2) ** (n / 2.0)
            z = 0.5 * (self.ball.radius / self.sigma) ** 2
            return full * float(gammainc(n / 2.0, z))
        raise InvalidArgumentError("custom components have no analytic mass")


def _ray_ball(origin, units, ball: Ball):
    """Entry/exit parameters of rays origin + r*u through a ball, r >= 0.

    Returns (lo, hi) arrays (leading shape of ``units``); misses give
    lo = hi = 0.
    """
    w = ball.center - np.asarray(origin, dtype=float)
    b = units @ w
    disc = b * b - (float(w @ w) - ball.radius ** 2)
    hit = disc > 0
    d = np.sqrt(np.where(hit, disc, 0.0))
    lo = np.clip(b - d, 0.0, None)
    hi = np.clip(b + d, 0.0, None)
    return np.where(hit, lo, 0.0), np.where(hit, hi, 0.0)


class DensityMeasure:
    """Finite signed measure d mu = f dx with component structure.

    Total mass and total variation are cached at construction; numeric
    fallbacks (clipped or custom components, windows off the origin) run
    a polar quadrature with radial splits at every ball crossing and
    angular grading at every tangency direction.  Components with
    opposite signs must have disjoint support balls.
    """

    def __init__(self, n: int, components, label: str = "measure",
                 radial_cdf=None, angular_panels: int = 8):
        if n < 2:
            raise InvalidArgumentError("measure dimension must be >= 2")
        self.n = int(n)
        self.label = label
        self.components = tuple(components)
        self.radial_cdf = radial_cdf
        self.angular_panels = int(angular_panels)
        for comp in self.components:
            if comp.ball.center.size != self.n:
                raise InvalidArgumentError("component dimension mismatch")
        self._check_sign_structure()
        self.support_radius = max(
            (float(np.linalg.norm(c.ball.center)) + c.ball.radius
             for c in self.components), default=0.0)
        self.total_mass = math.fsum(self._component_mass(c, signed=True)
                                    for c in self.components)
        self.total_variation = math.fsum(abs(self._component_mass(c, signed=False))
                                         for c in self.components)

    def _check_sign_structure(self):
        for i, a in enumerate(self.components):
            for b in self.components[i + 1:]:
                if a.amplitude * b.amplitude >= 0:
                    continue
                gap = float(np.linalg.norm(a.ball.center - b.ball.center))
                if gap < a.ball.radius + b.ball.radius - 1e-12:
                    raise InvalidArgumentError(
                        "overlapping components of opposite sign are not supported")

    def _component_mass(self, comp: Component, signed: bool) -> float:
        if comp.analytic:
            m = comp.unclipped_mass()
            return m if signed else abs(m)
        return self._component_integral(comp, signed=signed)

    # -- generic polar integration over one component -------------------

    def _component_integral(self, comp: Component, signed: bool) -> float:
        """Integral of f (signed) or |f| over a clipped/custom component."""
        if self.n != 2:
            raise UnsupportedDimensionError(
                "numeric measure integrals are implemented for n = 2 only")
        center = comp.ball.center
        balls = [comp.ball] + list(comp.clip_inside) + list(comp.clip_outside)

        tangency = []
        for b in balls:
            w = b.center - center
            d = float(np.linalg.norm(w))
            if d > b.radius > 0:
                phi0 = math.atan2(w[1], w[0])
                beta = math.asin(min(1.0, b.radius / d))
                tangency.extend(((phi0 - beta) % TWO_PI,
                                 (phi0 + beta) % TWO_PI))

        sub = 1 if comp.kind == "uniform" else 6

        def per_angle(theta):
            theta = np.asarray(theta, dtype=float)
            u = np.stack((np.cos(theta), np.sin(theta)), axis=-1)
            cuts = [np.zeros(theta.shape),
                    np.full(theta.shape, comp.ball.radius)]
            for b in balls[1:]:
                lo, hi = _ray_ball(center, u, b)
                cuts.append(np.clip(lo, 0.0, comp.ball.radius))
                cuts.append(np.clip(hi, 0.0, comp.ball.radius))
            grid = np.sort(np.stack(cuts, axis=-1), axis=-1)
            lo = np.repeat(grid[..., :-1], sub, axis=-1)
            width = np.repeat(np.diff(grid, axis=-1), sub, axis=-1) / sub
            offs = np.tile(np.arange(sub, dtype=float), grid.shape[-1] - 1)
            lo = lo + width * offs
            nodes, wts = panel_nodes(lo, lo + width, 12)
            pts = center + nodes[..., None] * u[..., None, None, :]
            vals = comp.density(pts)
            if not signed:
                vals = np.abs(vals)
            return np.sum(vals * wts * nodes, axis=(-1, -2))

        return integrate_line(per_angle, 0.0, TWO_PI,
                              singular_points=tangency, order=12,
                              base_panels=self.angular_panels)

    # -- public surface --------------------------------------------------

    def density(self, points):
        pts = np.asarray(points, dtype=float)
        total = np.zeros(pts.shape[:-1])
        for comp in self.components:
            total = total + comp.density(pts)
        return total

    def variation_in_ball(self, center, radius: float) -> float:
        """|mu|(B(center, radius)); analytic radial cdf used when it applies."""
        center = np.asarray(center, dtype=float)
        if self.radial_cdf is not None and not center.any():
            return float(self.radial_cdf(radius))
        win = Ball(center, float(radius))
        return math.fsum(
            self._component_integral(
                replace(c, clip_inside=c.clip_inside + (win,)), signed=False)
            for c in self.components)

    def mass_in_ball(self, center, radius: float) -> float:
        """mu(B(center, radius)), signed."""
        win = Ball(np.asarray(center, dtype=float), float(radius))
        return math.fsum(
            self._component_integral(
                replace(c, clip_inside=c.clip_inside + (win,)), signed=True)
            for c in self.components)

    def scale(self, t: float) -> "DensityMeasure":
        """The dilated measure mu_t(E) = mu(E/t)."""
        if t <= 0:
            raise InvalidArgumentError("dilation parameter must be positive")
        cdf = None
        if self.radial_cdf is not None:
            base = self.radial_cdf
            cdf = lambda r, _b=base, _t=t: _b(np.asarray(r) / _t)
        return DensityMeasure(self.n, [c.scaled(t) for c in self.components],
                              label=f"{self.label}@t={t:g}", radial_cdf=cdf,
                              angular_panels=self.angular_panels)

    def radius_for_mass(self, eps: float) -> float:
        """The radius a with |mu|(B(0, a)) = eps.

        Exists for 0 < eps < |mu|(R^n) because the radial cdf of an
        absolutely continuous measure is continuous; located by root
        bracketing on the cdf.
        """
        if not 0.0 < eps < self.total_variation:
            raise InvalidArgumentError(
                "target mass must lie strictly between 0 and |mu|(R^n)")
        if self.radial_cdf is not None:
            cdf = lambda r: float(self.radial_cdf(r))
        else:
            origin = np.zeros(self.n)
            cdf = lambda r: self.variation_in_ball(origin, r)
        return float(brentq(lambda r: cdf(r) - eps,
                            0.0, self.support_radius,
                            xtol=1e-14 * max(self.support_radius, 1.0),
                            rtol=8.9e-16))

    def split_at_radius(self, R: float):
        """Restrictions of mu to B(0, R) and to its complement."""
        if R <= 0:
            raise InvalidArgumentError("split radius must be positive")
        win = Ball(np.zeros(self.n), float(R))
        inner = DensityMeasure(
            self.n,
            [replace(c, clip_inside=c.clip_inside + (win,))
             for c in self.components],
            label=f"{self.label}|inner", angular_panels=self.angular_panels)
        outer = DensityMeasure(
            self.n,
            [replace(c, clip_outside=c.clip_outside + (win,))
             for c in self.components],
            label=f"{self.label}|outer", angular_panels=self.angular_panels)
        return inner, outer


def total_variation(mu: DensityMeasure, resolution=None) -> float:
    """Cached |mu|(R^n); ``resolution`` accepted for interface parity."""
    return mu.total_variation


def scale(mu: DensityMeasure, t: float) -> DensityMeasure:
    return mu.scale(t)


def radius_for_mass(mu: DensityMeasure, eps: float) -> float:
    return mu.radius_for_mass(eps)


def split_at_radius(mu: DensityMeasure, R: float):
    return mu.split_at_radius(R)


# --- built-in measure catalog -------------------------------------------------

def disk_bump(radius: float = 1.0, mass: float = 1.0, n: int = 2,
              center=None) -> DensityMeasure:
    """Uniform density of given total mass on a ball."""
    if radius <= 0:
        raise InvalidArgumentError("bump radius must be positive")
    c = np.zeros(n) if center is None else np.asarray(center, dtype=float)
    amp = mass / ball_volume(n, radius)
    comp = Component("uniform", Ball(c, radius), amp)
    cdf = None
    if not c.any():
        cdf = lambda r: abs(mass) * np.clip(np.asarray(r) / radius, 0, 1) ** n
    return DensityMeasure(n, [comp], label=f"disk_bump(r={radius:g})",
                          radial_cdf=cdf)


def gaussian(sigma: float = 1.0, cutoff: float = 8.0, mass: float = 1.0,
             n: int = 2) -> DensityMeasure:
    """Centered Gaussian density truncated at radius ``cutoff``."""
    if sigma <= 0 or cutoff <= 0:
        raise InvalidArgumentError("sigma and cutoff must be positive")
    amp = mass / (TWO_PI * sigma ** 2) ** (n / 2.0)
    comp = Component("gaussian", Ball(np.zeros(n), cutoff), amp, sigma=sigma)

    def cdf(r):
        z = 0.5 * (np.clip(np.asarray(r, dtype=float), 0, cutoff) / sigma) ** 2
        return abs(mass) * gammainc(n / 2.0, z)

    return DensityMeasure(n, [comp], label=f"gaussian(s={sigma:g})",
                          radial_cdf=cdf)


def dipole(offset: float = 1.5, radius: float = 0.5, mass: float = 1.0,
           n: int = 2) -> DensityMeasure:
    """Opposite-sign uniform bumps at +-offset along the first axis.

    Total mass zero, total variation 2 |mass|; the bumps must be
    disjoint.
    """
    if offset <= radius:
        raise InvalidArgumentError("dipole bumps must be disjoint")
    amp = mass / ball_volume(n, radius)
    e1 = np.zeros(n)
    e1[0] = 1.0
    comps = [Component("uniform", Ball(offset * e1, radius), amp),
             Component("uniform", Ball(-offset * e1, radius), -amp)]
    return DensityMeasure(n, comps, label=f"dipole(o={offset:g})")


def zero_measure(n: int = 2) -> DensityMeasure:
    return DensityMeasure(n, [], label="zero")


MEASURE_CATALOG = {
    "disk_bump": disk_bump,
    "gaussian": gaussian,
    "dipole": dipole,
    "zero": zero_measure,
}
