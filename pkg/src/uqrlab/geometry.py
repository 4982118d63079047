"""Chordal metric, Mobius transformations and round annuli on S^n = R^n u {inf}.

Points are numpy float vectors; the point at infinity is the module-level
singleton ``INFINITY`` (never a large float).  Mobius maps are stored as
stacks of primitive maps (reflections, sphere inversions, similarities),
applied left to right; the formal inverse is the reversed stack of inverted
primitives, so inverses are exact with no special-casing of infinity.
"""

from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameterError


class _Infinity:
    """The distinguished point at infinity."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INFINITY"


INFINITY = _Infinity()


def as_point(x):
    """Coerce to a float vector, passing INFINITY through."""
    if x is INFINITY:
        return INFINITY
    p = np.asarray(x, dtype=np.float64)
    if p.ndim == 0:
        p = p.reshape(1)
    if not np.all(np.isfinite(p)):
        raise InvalidParameterError("finite points must have finite coordinates")
    return p


def chordal_distance(x, y):
    """Chordal metric, normalized so antipodal points are at distance 1.

    chi(x, y) = |x - y| / sqrt((1 + |x|^2)(1 + |y|^2)), chi(x, inf) =
    1 / sqrt(1 + |x|^2).
    """
    x = as_point(x)
    y = as_point(y)
    if x is INFINITY and y is INFINITY:
        return 0.0
    if x is INFINITY:
        x, y = y, x
    nx2 = float(np.dot(x, x))
    if y is INFINITY:
        return 1.0 / np.sqrt(1.0 + nx2)
    ny2 = float(np.dot(y, y))
    d = float(np.linalg.norm(x - y))
    return d / np.sqrt((1.0 + nx2) * (1.0 + ny2))


def chordal_distances(X, y):
    """Chordal distances from each row of X (finite points) to y."""
    X = np.asarray(X, dtype=np.float64)
    if X.ndim == 1:
        X = X[:, None]
    nx2 = np.sum(X * X, axis=1)
    if y is INFINITY:
        return 1.0 / np.sqrt(1.0 + nx2)
    y = as_point(y)
    ny2 = float(np.dot(y, y))
    d = np.linalg.norm(X - y[None, :], axis=1)
    return d / np.sqrt((1.0 + nx2) * (1.0 + ny2))


# ---------------------------------------------------------------------------
# Mobius primitives


@dataclass(frozen=True)
class Reflection:
    """Reflection in the hyperplane {x . normal = offset}, |normal| = 1."""

    normal: tuple
    offset: float

    def __post_init__(self):
        n = np.asarray(self.normal, dtype=np.float64)
        if not np.isclose(np.linalg.norm(n), 1.0, atol=1e-12):
            raise InvalidParameterError("reflection normal must be a unit vector")
        object.__setattr__(self, "normal", tuple(float(v) for v in n))

    def apply(self, x):
        if x is INFINITY:
            return INFINITY
        n = np.asarray(self.normal)
        return x - 2.0 * (np.dot(x, n) - self.offset) * n

    def apply_batch(self, X):
        n = np.asarray(self.normal)
        return X - 2.0 * (X @ n - self.offset)[:, None] * n[None, :]

    def inverse(self):
        return self


@dataclass(frozen=True)
class Inversion:
    """Inversion in the sphere of given center and radius > 0."""

    center: tuple
    radius: float

    def __post_init__(self):
        if self.radius <= 0:
            raise InvalidParameterError("inversion radius must be positive")
        c = np.asarray(self.center, dtype=np.float64)
        object.__setattr__(self, "center", tuple(float(v) for v in c))

    def apply(self, x):
        c = np.asarray(self.center)
        if x is INFINITY:
            return c.copy()
        d = x - c
        n2 = float(np.dot(d, d))
        if n2 == 0.0:
            return INFINITY
        return c + (self.radius * self.radius / n2) * d

    def apply_batch(self, X):
        c = np.asarray(self.center)
        d = X - c
        n2 = np.sum(d * d, axis=1)
        return c + (self.radius * self.radius / n2)[:, None] * d

    def inverse(self):
        return self


@dataclass(frozen=True)
class Similarity:
    """x -> scale * Q x + shift with scale > 0 and Q orthogonal."""

    scale: float
    rotation: tuple
    shift: tuple

    def __post_init__(self):
        if self.scale <= 0:
            raise InvalidParameterError("similarity scale must be positive")
        q = np.asarray(self.rotation, dtype=np.float64)
        t = np.asarray(self.shift, dtype=np.float64)
        if q.shape != (t.size, t.size):
            raise InvalidParameterError("rotation/shift dimensions disagree")
        if not np.allclose(q @ q.T, np.eye(t.size), atol=1e-10):
            raise InvalidParameterError("rotation part must be orthogonal")
        object.__setattr__(self, "rotation", tuple(tuple(float(v) for v in row) for row in q))
        object.__setattr__(self, "shift", tuple(float(v) for v in t))

    @property
    def matrix(self):
        return self.scale * np.asarray(self.rotation)

    def apply(self, x):
        if x is INFINITY:
            return INFINITY
        return self.matrix @ x + np.asarray(self.shift)

    def apply_batch(self, X):
        return X @ self.matrix.T + np.asarray(self.shift)

    def inverse(self):
        q = np.asarray(self.rotation)
        t = np.asarray(self.shift)
        return Similarity(1.0 / self.scale, tuple(map(tuple, q.T)), tuple(-(q.T @ t) / self.scale))


def translation(shift):
    shift = np.asarray(shift, dtype=np.float64)
    return Similarity(1.0, tuple(map(tuple, np.eye(shift.size))), tuple(shift))


@dataclass(frozen=True)
class MobiusMap:
    """Composition of primitive maps, applied left to right."""

    primitives: tuple

    def __call__(self, x):
        x = as_point(x)
        for p in self.primitives:
            x = p.apply(x)
        return x

    def apply_batch(self, X):
        """Apply to an (N, n) batch of finite points that stay finite."""
        X = np.asarray(X, dtype=np.float64)
        for p in self.primitives:
            X = p.apply_batch(X)
        return X

    def inverse(self):
        return MobiusMap(tuple(p.inverse() for p in reversed(self.primitives)))

    def then(self, other):
        """The map x -> other(self(x))."""
        return MobiusMap(self.primitives + other.primitives)


def mobius_from(*primitives):
    return MobiusMap(tuple(primitives))


def ball_exchange_involution(center, radius):
    """Mobius involution exchanging the open ball B(center, radius) with the
    complement of its closure; the sphere itself is fixed pointwise."""
    if radius <= 0:
        raise InvalidParameterError("ball radius must be positive")
    center = as_point(center)
    return mobius_from(Inversion(tuple(center), float(radius)))


def random_sphere_isometry(rng, dim):
    """A random chordal isometry of S^dim (rotations about 0 and the unit
    inversion flip generate these)."""
    prims = []
    for _ in range(rng.integers(1, 4)):
        q, _ = np.linalg.qr(rng.standard_normal((dim, dim)))
        if np.linalg.det(q) < 0:
            q[:, 0] = -q[:, 0]
        prims.append(Similarity(1.0, tuple(map(tuple, q)), tuple(np.zeros(dim))))
        if rng.random() < 0.5:
            prims.append(Inversion(tuple(np.zeros(dim)), 1.0))
    return MobiusMap(tuple(prims))


# ---------------------------------------------------------------------------
# Round annuli


@dataclass(frozen=True)
class RoundAnnulus:
    """Round annulus r < |x - center| < s after Mobius normalization of the
    center to the origin (Mobius maps preserve the modulus)."""

    center: object
    inner: float
    outer: float

    def __post_init__(self):
        if not (self.inner > 0 and np.isfinite(self.inner)):
            raise InvalidParameterError("inner radius must be positive and finite")
        if not (self.outer > self.inner and np.isfinite(self.outer)):
            raise InvalidParameterError("outer radius must exceed inner radius")

    def modulus(self):
        # log(outer) - log(inner), so nested moduli add exactly in log arithmetic.
        return float(np.log(self.outer) - np.log(self.inner))


def annulus_modulus(annulus):
    return annulus.modulus()
