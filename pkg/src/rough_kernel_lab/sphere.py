"""Geometry and quadrature on the unit sphere S^(n-1).

Directions are unit vectors, rotations are proper orthogonal matrices
with a chord-based size |rho| = sup |rho x - x|, and quadratures are
node/weight sets whose total weight is the full surface measure.  The
circle uses a midpoint rule (equally spaced, never hitting arc length
zero, exact for trigonometric polynomials below the node count); n = 3
and 4 use product-angle rules built from the spherical coordinate
parameterization, with dimensions above 4 rejected.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (ConstructionError, InvalidArgumentError,
                     UnsupportedDimensionError)
from .quadrature import gauss_rule

TWO_PI = 2.0 * math.pi

#: construction rejects vectors whose norm deviates from 1 by more than this
_NORM_SLACK = 1e-6


def sphere_area(n: int) -> float:
    """Surface measure of S^(n-1): 2 pi^(n/2) / Gamma(n/2)."""
    return 2.0 * math.pi ** (n / 2.0) / math.gamma(n / 2.0)


def wrap_angle(theta):
    """Reduce arc length on the circle to the working interval (0, 2 pi]."""
    t = np.asarray(theta, dtype=float) % TWO_PI
    return np.where(t == 0.0, TWO_PI, t)


@dataclass(frozen=True)
class Direction:
    """A point of S^(n-1); coordinates are renormalized on construction."""

    coords: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.coords, dtype=float).reshape(-1)
        if v.size < 2 or not np.all(np.isfinite(v)):
            raise ConstructionError("direction needs >= 2 finite coordinates")
        norm = float(np.linalg.norm(v))
        if abs(norm - 1.0) > _NORM_SLACK:
            raise ConstructionError(
                f"vector norm {norm!r} deviates from 1 beyond {_NORM_SLACK}")
        v = v / norm
        v.flags.writeable = False
        object.__setattr__(self, "coords", v)

    @property
    def n(self) -> int:
        return self.coords.size

    @property
    def angle(self) -> float:
        """Arc length in (0, 2 pi] (circle directions only)."""
        if self.n != 2:
            raise InvalidArgumentError("arc length is defined only for n = 2")
        return float(wrap_angle(math.atan2(self.coords[1], self.coords[0])))

    @staticmethod
    def from_angle(theta: float) -> "Direction":
        return Direction(np.array([math.cos(theta), math.sin(theta)]))


@dataclass(frozen=True)
class Rotation:
    """Proper orthogonal matrix acting on R^n."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 2:
            raise ConstructionError("rotation needs a square matrix, n >= 2")
        if np.max(np.abs(m @ m.T - np.eye(m.shape[0]))) > 1e-10:
            raise ConstructionError("matrix is not orthogonal within 1e-10")
        if abs(np.linalg.det(m) - 1.0) > 1e-10:
            raise ConstructionError("determinant differs from +1 beyond 1e-10")
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    @property
    def angle_2d(self) -> float:
        """Signed rotation angle in (-pi, pi] (n = 2 only)."""
        if self.n != 2:
            raise InvalidArgumentError("planar angle is defined only for n = 2")
        return float(math.atan2(self.matrix[1, 0], self.matrix[0, 0]))

    @staticmethod
    def identity(n: int) -> "Rotation":
        return Rotation(np.eye(n))

    @staticmethod
    def circle(angle: float) -> "Rotation":
        c, s = math.cos(angle), math.sin(angle)
        return Rotation(np.array([[c, -s], [s, c]]))

    @staticmethod
    def axis_angle(axis: Direction, angle: float) -> "Rotation":
        """Rodrigues rotation about ``axis`` (n = 3)."""
        if axis.n != 3:
            raise InvalidArgumentError("axis-angle form requires n = 3")
        k = axis.coords
        kx = np.array([[0.0, -k[2], k[1]],
                       [k[2], 0.0, -k[0]],
                       [-k[1], k[0], 0.0]])
        m = np.eye(3) + math.sin(angle) * kx + (1.0 - math.cos(angle)) * (kx @ kx)
        return Rotation(m)

    @staticmethod
    def random(n: int, rng: np.random.Generator) -> "Rotation":
        """Haar-ish random proper rotation via QR of a Gaussian matrix."""
        q, r = np.linalg.qr(rng.standard_normal((n, n)))
        q = q * np.sign(np.diag(r))
        if np.linalg.det(q) < 0:
            q[:, 0] = -q[:, 0]
        return Rotation(q)

    def inverse(self) -> "Rotation":
        return Rotation(self.matrix.T.copy())

    def compose(self, other: "Rotation") -> "Rotation":
        """The rotation 'self after other'."""
        if self.n != other.n:
            raise InvalidArgumentError("dimension mismatch in composition")
        return Rotation(self.matrix @ other.matrix)


@dataclass(frozen=True)
class SphericalQuadrature:
    """Positive node/weight rule whose weights sum to the sphere area."""

    nodes: np.ndarray    # (N, n) unit vectors
    weights: np.ndarray  # (N,) positive

    def __post_init__(self):
        nodes = np.array(self.nodes, dtype=float)
        weights = np.array(self.weights, dtype=float)
        if nodes.ndim != 2 or nodes.shape[1] < 2 or len(weights) != len(nodes):
            raise ConstructionError("nodes must be (N, n>=2) with N weights")
        if np.any(weights <= 0):
            raise ConstructionError("all quadrature weights must be positive")
        area = sphere_area(nodes.shape[1])
        total = float(np.sum(weights))
        if abs(total - area) > 1e-10 * area:
            raise ConstructionError(
                f"weights sum to {total!r}, expected sphere area {area!r}")
        nodes.flags.writeable = False
        weights.flags.writeable = False
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)

    @property
    def n(self) -> int:
        return self.nodes.shape[1]

    @property
    def size(self) -> int:
        return len(self.weights)

    @property
    def angles(self) -> np.ndarray:
        """Arc lengths of the nodes in (0, 2 pi] (n = 2 only)."""
        if self.n != 2:
            raise InvalidArgumentError("angles are defined only for n = 2")
        return wrap_angle(np.arctan2(self.nodes[:, 1], self.nodes[:, 0]))


def quad_circle(m: int) -> SphericalQuadrature:
    """Midpoint rule on the circle: m equally spaced nodes, weight 2 pi / m."""
    if m < 4:
        raise InvalidArgumentError(f"need at least 4 nodes, got {m}")
    theta = (np.arange(m) + 0.5) * (TWO_PI / m)
    nodes = np.column_stack((np.cos(theta), np.sin(theta)))
    return SphericalQuadrature(nodes, np.full(m, TWO_PI / m))


def quad_sphere(n: int, level: int) -> SphericalQuadrature:
    """Product-angle rule on S^(n-1); each level doubles the resolution.

    n = 3 uses Gauss-Legendre in the cosine of the polar angle (which
    absorbs the sin(phi1) Jacobian exactly) crossed with a uniform
    azimuth; n = 4 adds a Gauss-Legendre factor against the sin^2(phi1)
    Jacobian weight.  Dimensions above 4 are rejected.
    """
    if n < 2 or level < 1:
        raise InvalidArgumentError("need n >= 2 and level >= 1")
    if n == 2:
        return quad_circle(16 * 2 ** level)
    if n > 4:
        raise UnsupportedDimensionError(f"n = {n} not supported (cap is 4)")

    k = 4 * 2 ** level
    t, wt = gauss_rule(k)                      # t = cos(polar angle)
    m = 8 * 2 ** level
    phi = (np.arange(m) + 0.5) * (TWO_PI / m)
    wphi = TWO_PI / m

    if n == 3:
        st = np.sqrt(1.0 - t ** 2)
        nodes = np.empty((k * m, 3))
        nodes[:, 0] = np.repeat(t, m)
        nodes[:, 1] = np.outer(st, np.cos(phi)).ravel()
        nodes[:, 2] = np.outer(st, np.sin(phi)).ravel()
        weights = np.repeat(wt, m) * wphi
        return SphericalQuadrature(nodes, weights)

    # n = 4: phi1 in [0, pi] against sin^2, then the n = 3 structure
    x1, w1 = gauss_rule(k)
    phi1 = 0.5 * math.pi * (x1 + 1.0)
    w1 = 0.5 * math.pi * w1 * np.sin(phi1) ** 2
    s1, c1 = np.sin(phi1), np.cos(phi1)
    st = np.sqrt(1.0 - t ** 2)
    base = np.empty((k * m, 3))
    base[:, 0] = np.repeat(t, m)
    base[:, 1] = np.outer(st, np.cos(phi)).ravel()
    base[:, 2] = np.outer(st, np.sin(phi)).ravel()
    wbase = np.repeat(wt, m) * wphi
    nodes = np.empty((k * k * m, 4))
    nodes[:, 0] = np.repeat(c1, k * m)
    nodes[:, 1:] = np.repeat(s1, k * m)[:, None] * np.tile(base, (k, 1))
    weights = np.repeat(w1, k * m) * np.tile(wbase, k)
    return SphericalQuadrature(nodes, weights)


def integrate(q: SphericalQuadrature, g) -> float:
    """Sum of w_i g(node_i); g maps an (N, n) array to N values."""
    vals = np.asarray(g(q.nodes), dtype=float).reshape(-1)
    if vals.size != q.size:
        raise InvalidArgumentError("integrand returned a wrong-sized array")
    bad = ~np.isfinite(vals)
    if bad.any():
        from .errors import EvaluationError
        idx = int(np.nonzero(bad)[0][0])
        raise EvaluationError("non-finite integrand value at a node",
                              point=q.nodes[idx].copy())
    return float(np.dot(q.weights, vals))


def integrate_angles(q: SphericalQuadrature, g) -> float:
    """Circle variant of :func:`integrate` for arc-length integrands."""
    vals = np.asarray(g(q.angles), dtype=float).reshape(-1)
    bad = ~np.isfinite(vals)
    if bad.any():
        from .errors import EvaluationError
        idx = int(np.nonzero(bad)[0][0])
        raise EvaluationError("non-finite integrand value at a node",
                              point=float(q.angles[idx]))
    return float(np.dot(q.weights, vals))


def apply_rotation(rho: Rotation, d: Direction) -> Direction:
    if rho.n != d.n:
        raise InvalidArgumentError("rotation/direction dimension mismatch")
    return Direction(rho.matrix @ d.coords)


def rotation_norm(rho: Rotation, q: SphericalQuadrature | None = None) -> float:
    """The chord sup |rho x - x| over the sphere, always in [0, 2].

    Exact for n = 2 (2 sin(s/2)).  For n >= 3 the sup is realized as a
    node maximum over ``q`` followed by golden-ratio shrinking of a
    spherical cap around the best node.
    """
    if rho.n == 2:
        return 2.0 * abs(math.sin(0.5 * rho.angle_2d))
    if q is None:
        q = quad_sphere(rho.n, 3)
    if q.n != rho.n:
        raise InvalidArgumentError("rotation/quadrature dimension mismatch")

    def disp(points):
        return np.linalg.norm(points @ rho.matrix.T - points, axis=1)

    vals = disp(q.nodes)
    best = q.nodes[int(np.argmax(vals))]
    best_val = float(np.max(vals))
    # local refinement: sample shrinking caps around the current argmax
    radius = 0.5
    shrink = 2.0 / (1.0 + math.sqrt(5.0))
    rng = np.random.default_rng(0)
    for _ in range(40):
        probes = best[None, :] + radius * rng.standard_normal((64, rho.n))
        probes /= np.linalg.norm(probes, axis=1, keepdims=True)
        pv = disp(probes)
        i = int(np.argmax(pv))
        if pv[i] > best_val:
            best_val = float(pv[i])
            best = probes[i]
        radius *= shrink
    return min(best_val, 2.0)
