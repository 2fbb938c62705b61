"""Degree-zero homogeneous kernels and their sphere norms.

A kernel is determined by its restriction Omega to the unit sphere and
extended to R^n minus the origin by Omega(x) = Omega(x/|x|).  On the
circle, kernels are supplied as vectorized functions of arc length on
(0, 2 pi]; in higher dimensions as functions of unit vectors.  Kernels
may declare arc lengths where Omega is unbounded (integrable
singularities); all sphere integrals then grade their panels toward
those points.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (ConstructionError, DivergenceError, DomainError,
                     InvalidArgumentError)
from .quadrature import find_sign_changes, integrate_line
from .sphere import (SphericalQuadrature, TWO_PI, integrate, quad_circle,
                     quad_sphere, sphere_area, wrap_angle)

_MEAN_ZERO_TOL = 1e-6


def default_quadrature(n: int) -> SphericalQuadrature:
    return quad_circle(256) if n == 2 else quad_sphere(n, 3)


@dataclass(frozen=True)
class HomogeneousKernel:
    """Omega on S^(n-1), extended by Omega(lambda x) = Omega(x)."""

    n: int
    label: str
    omega_arc: object = None    # n = 2: callable over arc-length arrays
    omega_dir: object = None    # callable over (..., n) unit vectors
    singular_angles: tuple = field(default_factory=tuple)
    mean_zero: bool = False

    def on_angles(self, theta):
        """Evaluate at arc lengths (n = 2); input reduced mod 2 pi."""
        if self.n != 2 or self.omega_arc is None:
            raise InvalidArgumentError("kernel has no arc-length form")
        return np.asarray(self.omega_arc(wrap_angle(theta)), dtype=float)

    def on_directions(self, units):
        units = np.asarray(units, dtype=float)
        if self.omega_dir is not None:
            return np.asarray(self.omega_dir(units), dtype=float)
        theta = np.arctan2(units[..., 1], units[..., 0])
        return self.on_angles(theta)

    @property
    def singular_directions(self) -> np.ndarray:
        a = np.asarray(self.singular_angles, dtype=float)
        return np.column_stack((np.cos(a), np.sin(a)))


def eval_kernel(K: HomogeneousKernel, x) -> float | np.ndarray:
    """Kernel value Omega(x/|x|); rejects the origin."""
    pts = np.asarray(x, dtype=float)
    single = pts.ndim == 1
    pts = np.atleast_2d(pts)
    if pts.shape[-1] != K.n:
        raise InvalidArgumentError("point dimension does not match kernel")
    norms = np.linalg.norm(pts, axis=-1)
    if np.any(norms == 0.0):
        raise DomainError("kernel is undefined at the origin")
    vals = K.on_directions(pts / norms[..., None])
    return float(vals[0]) if single else vals


def make_kernel(n: int, omega, label: str, singular_angles=(),
                mean_zero: bool = False) -> HomogeneousKernel:
    """Build a kernel from a vectorized sphere function.

    For n = 2, ``omega`` takes arc-length arrays on (0, 2 pi]; otherwise
    it takes (..., n) unit-vector arrays.  The function must be finite
    at every default quadrature node unless the offending direction is
    declared in ``singular_angles``; a kernel flagged ``mean_zero`` must
    integrate to zero within 1e-6.
    """
    if n < 2:
        raise InvalidArgumentError("kernel dimension must be >= 2")
    if n == 2:
        K = HomogeneousKernel(n=2, label=label, omega_arc=omega,
                              singular_angles=tuple(float(wrap_angle(a)) % TWO_PI
                                                    for a in singular_angles),
                              mean_zero=mean_zero)
    else:
        if singular_angles:
            raise InvalidArgumentError(
                "declared singular sets are supported only for n = 2")
        K = HomogeneousKernel(n=n, label=label, omega_dir=omega,
                              mean_zero=mean_zero)

    q = default_quadrature(n)
    vals = K.on_angles(q.angles) if n == 2 else K.on_directions(q.nodes)
    if not np.all(np.isfinite(vals)):
        raise ConstructionError(
            f"kernel '{label}' is non-finite at an undeclared quadrature node")
    if mean_zero:
        defect = mean_zero_defect(K, q)
        if defect >= _MEAN_ZERO_TOL:
            raise ConstructionError(
                f"kernel '{label}' flagged mean-zero but defect is {defect!r}")
    return K


def _arc_singularities(K: HomogeneousKernel):
    """Singular arc lengths of Omega inside (0, 2 pi], with the wrap image.

    A singularity declared at arc 0 is approached from inside the
    working interval as theta -> 0+, i.e. it sits at both ends.
    """
    pts = set()
    for a in K.singular_angles:
        a = a % TWO_PI
        if a == 0.0:
            pts.update((0.0, TWO_PI))
        else:
            pts.add(a)
    return sorted(pts)


def mean_zero_defect(K: HomogeneousKernel,
                     q: SphericalQuadrature | None = None) -> float:
    """|integral of Omega| with panels graded toward declared singularities."""
    if q is None:
        q = default_quadrature(K.n)
    if K.n == 2:
        sing = _arc_singularities(K)
        if sing:
            return abs(integrate_line(K.on_angles, 0.0, TWO_PI,
                                      singular_points=sing))
        return abs(float(np.dot(q.weights, K.on_angles(q.angles))))
    return abs(integrate(q, K.on_directions))


def ls_norm(K: HomogeneousKernel, s: float,
            q: SphericalQuadrature | None = None) -> float:
    """The L^s(S^(n-1)) norm of Omega.

    Raises DivergenceError when the graded quadrature detects a
    non-integrable |Omega|^s (e.g. an inverse-square-root kernel with
    s = 2).
    """
    if s < 1:
        raise InvalidArgumentError("exponent must satisfy s >= 1")
    if q is None:
        q = default_quadrature(K.n)
    if K.n == 2:
        sing = _arc_singularities(K)
        kinks = find_sign_changes(K.on_angles, 1e-9, TWO_PI, exclude=sing)
        total = integrate_line(lambda t: np.abs(K.on_angles(t)) ** s,
                               0.0, TWO_PI, singular_points=sing,
                               breakpoints=kinks)
    else:
        total = integrate(q, lambda u: np.abs(K.on_directions(u)) ** s)
    if not math.isfinite(total):
        raise DivergenceError(f"L^{s} integral of |Omega| did not converge")
    return total ** (1.0 / s)


def sup_abs(K: HomogeneousKernel, samples: int = 8192) -> float:
    """Sampled sup of |Omega|; infinite when a singular set is declared."""
    if K.singular_angles:
        return math.inf
    if K.n == 2:
        theta = (np.arange(samples) + 0.5) * (TWO_PI / samples)
        return float(np.max(np.abs(K.on_angles(theta))))
    q = quad_sphere(K.n, 4)
    return float(np.max(np.abs(K.on_directions(q.nodes))))


# --- built-in kernel family -------------------------------------------------

def cosine_kernel() -> HomogeneousKernel:
    """Omega(theta) = cos(theta) on the circle; odd, mean zero, |Omega|_1 = 4."""
    return make_kernel(2, np.cos, "cosine", mean_zero=True)


def example22_kernel() -> HomogeneousKernel:
    """The inverse-square-root circle kernel theta^(-1/2) - (2/pi)^(1/2).

    Mean zero with an integrable singularity as arc length -> 0+; in L^1
    but not L^2, and Dini-regular without satisfying the stronger
    linear-in-delta regularity bound.  Undefined at arc length 0 itself
    (a null set excluded from every quadrature).
    """
    c = math.sqrt(2.0 / math.pi)

    def omega(theta):
        return theta ** -0.5 - c

    return make_kernel(2, omega, "example22", singular_angles=(0.0,),
                       mean_zero=True)


def odd_harmonic_kernel(k: int) -> HomogeneousKernel:
    """Omega(theta) = sin(k theta) for odd k; odd on the sphere, mean zero."""
    if k < 1 or k % 2 == 0:
        raise InvalidArgumentError("harmonic order must be odd and positive")
    return make_kernel(2, lambda t: np.sin(k * t), f"odd_harmonic({k})",
                       mean_zero=True)


def constant_kernel(value: float = 1.0, n: int = 2) -> HomogeneousKernel:
    if n == 2:
        return make_kernel(2, lambda t: np.full_like(t, float(value)),
                           f"const({value})")
    return make_kernel(n, lambda u: np.full(u.shape[:-1], float(value)),
                       f"const({value})")


def kernel_from_table(thetas, values, label: str = "table") -> HomogeneousKernel:
    """Piecewise-linear periodic kernel through (arc length, value) knots."""
    thetas = np.asarray(thetas, dtype=float)
    values = np.asarray(values, dtype=float)
    if thetas.ndim != 1 or thetas.size < 2 or thetas.size != values.size:
        raise InvalidArgumentError("need matching 1-d theta/value tables")
    order = np.argsort(thetas)
    tk, vk = thetas[order] % TWO_PI, values[order]
    tk, idx = np.unique(tk, return_index=True)
    vk = vk[idx]
    # close the period so interpolation wraps
    tgrid = np.concatenate((tk, [tk[0] + TWO_PI]))
    vgrid = np.concatenate((vk, [vk[0]]))

    def omega(theta):
        t = (np.asarray(theta, dtype=float) - tk[0]) % TWO_PI + tk[0]
        return np.interp(t, tgrid, vgrid)

    return make_kernel(2, omega, label)


def sign_change_angles(K: HomogeneousKernel):
    """Arc lengths in (0, 2 pi) where Omega changes sign (n = 2)."""
    return find_sign_changes(K.on_angles, 1e-9, TWO_PI,
                             exclude=_arc_singularities(K))


__all__ = [
    "HomogeneousKernel", "default_quadrature", "make_kernel", "eval_kernel",
    "mean_zero_defect", "ls_norm", "sup_abs", "cosine_kernel",
    "example22_kernel", "odd_harmonic_kernel", "constant_kernel",
    "kernel_from_table", "sign_change_angles", "sphere_area",
]
