"""Contractive iterated function systems.

Members are either affine contractions (similarities given by a linear part
and shift) or Mobius contractions carrying a witness ball that certifies
contraction on the region of interest.  The attractor is sampled by the
chaos game (seeded, reproducible) or refined deterministically by mapping a
seed region through all words of a fixed length.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from ._backend import chaos_affine
from .errors import InvalidParameterError
from .geometry import MobiusMap


# ---------------------------------------------------------------------------
# regions (seeds for deterministic refinement)


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float

    def diameter(self):
        return self.hi - self.lo

    def contains(self, x, tol=1e-12):
        return self.lo - tol <= float(x) <= self.hi + tol

    def representatives(self):
        return np.array([[self.lo], [0.5 * (self.lo + self.hi)], [self.hi]])


@dataclass(frozen=True)
class Ball:
    center: tuple
    radius: float

    def diameter(self):
        return 2.0 * self.radius

    def contains(self, x, tol=1e-12):
        return np.linalg.norm(np.asarray(x) - np.asarray(self.center)) <= self.radius + tol

    def representatives(self):
        return np.asarray(self.center, dtype=np.float64)[None, :]


@dataclass(frozen=True)
class BallUnion:
    balls: tuple

    def diameter(self):
        pts = np.array([b.center for b in self.balls])
        radii = np.array([b.radius for b in self.balls])
        d = np.linalg.norm(pts[:, None, :] - pts[None, :, :], axis=2)
        return float((d + radii[:, None] + radii[None, :]).max())

    def contains(self, x, tol=1e-12):
        return any(b.contains(x, tol) for b in self.balls)

    def representatives(self):
        return np.array([b.center for b in self.balls])


@dataclass(frozen=True)
class Torus:
    """Solid torus: points within tube_radius of the core circle, which has
    the given center, unit plane axis (normal of the core-circle plane) and
    core_radius."""

    center: tuple
    axis: tuple
    core_radius: float
    tube_radius: float

    def __post_init__(self):
        a = np.asarray(self.axis, dtype=np.float64)
        object.__setattr__(self, "axis", tuple(a / np.linalg.norm(a)))

    def frame(self):
        a = np.asarray(self.axis)
        ref = np.array([1.0, 0.0, 0.0]) if abs(a[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
        u = np.cross(a, ref)
        u /= np.linalg.norm(u)
        v = np.cross(a, u)
        return u, v

    def core_points(self, n=256):
        u, v = self.frame()
        ang = np.linspace(0.0, 2.0 * math.pi, n, endpoint=False)
        circ = np.outer(np.cos(ang), u) + np.outer(np.sin(ang), v)
        return np.asarray(self.center) + self.core_radius * circ

    def core_distance(self, pts):
        """Distance from each point to the core circle (exact closed form)."""
        pts = np.atleast_2d(np.asarray(pts, dtype=np.float64)) - np.asarray(self.center)
        a = np.asarray(self.axis)
        axial = pts @ a
        radial = pts - np.outer(axial, a)
        rad = np.linalg.norm(radial, axis=1)
        return np.sqrt((rad - self.core_radius) ** 2 + axial ** 2)

    def contains(self, x, tol=1e-12):
        return bool(self.core_distance(np.asarray(x))[0] <= self.tube_radius + tol)

    def diameter(self):
        return 2.0 * (self.core_radius + self.tube_radius)

    def representatives(self):
        return self.core_points(16)

    def surface_points(self, n_core=64, n_tube=16):
        u, v = self.frame()
        a = np.asarray(self.axis)
        phi = np.linspace(0.0, 2.0 * math.pi, n_core, endpoint=False)
        theta = np.linspace(0.0, 2.0 * math.pi, n_tube, endpoint=False)
        ring_dir = np.outer(np.cos(phi), u) + np.outer(np.sin(phi), v)
        core = np.asarray(self.center) + self.core_radius * ring_dir
        out = core[:, None, :] + self.tube_radius * (
            np.cos(theta)[None, :, None] * ring_dir[:, None, :]
            + np.sin(theta)[None, :, None] * a[None, None, :]
        )
        return out.reshape(-1, 3)


# ---------------------------------------------------------------------------
# members


@dataclass(frozen=True)
class AffineContraction:
    """x -> matrix @ x + shift with operator norm of matrix < 1."""

    matrix: tuple
    shift: tuple
    ratio: float = field(default=None)

    def __post_init__(self):
        m = np.atleast_2d(np.asarray(self.matrix, dtype=np.float64))
        t = np.atleast_1d(np.asarray(self.shift, dtype=np.float64))
        ratio = self.ratio if self.ratio is not None else float(np.linalg.norm(m, 2))
        if not 0.0 < ratio < 1.0:
            raise InvalidParameterError("contraction ratio must lie in (0, 1)")
        object.__setattr__(self, "matrix", tuple(map(tuple, m)))
        object.__setattr__(self, "shift", tuple(t))
        object.__setattr__(self, "ratio", ratio)

    @property
    def dim(self):
        return len(self.shift)

    def apply(self, x):
        return np.asarray(self.matrix) @ np.asarray(x, dtype=np.float64) + np.asarray(self.shift)

    def apply_batch(self, X):
        return np.asarray(X) @ np.asarray(self.matrix).T + np.asarray(self.shift)

    def fixed_point(self):
        m = np.asarray(self.matrix)
        return np.linalg.solve(np.eye(self.dim) - m, np.asarray(self.shift))

    def transform_region(self, region):
        m = np.asarray(self.matrix)
        t = np.asarray(self.shift)
        if isinstance(region, Interval):
            a = float(m[0, 0] * region.lo + t[0])
            b = float(m[0, 0] * region.hi + t[0])
            return Interval(min(a, b), max(a, b))
        if isinstance(region, Ball):
            return Ball(tuple(self.apply(region.center)), self.ratio * region.radius)
        if isinstance(region, Torus):
            scale = self.ratio
            return Torus(
                tuple(self.apply(region.center)),
                tuple(m @ np.asarray(region.axis) / scale),
                scale * region.core_radius,
                scale * region.tube_radius,
            )
        if isinstance(region, BallUnion):
            return BallUnion(tuple(self.transform_region(b) for b in region.balls))
        raise InvalidParameterError(f"no region transform for {type(region).__name__}")


def similarity_contraction(scale, rotation, shift):
    rotation = np.atleast_2d(np.asarray(rotation, dtype=np.float64))
    return AffineContraction(tuple(map(tuple, scale * rotation)), tuple(np.atleast_1d(shift)), float(scale))


def line_contraction(scale, offset):
    """1-D similarity t -> scale * t + offset (scale may be negative)."""
    return AffineContraction(((float(scale),),), (float(offset),), abs(float(scale)))


@dataclass(frozen=True)
class MobiusContraction:
    """A Mobius map with a witness ball it maps strictly inside itself.

    ratio bounds the derivative norm on the witness ball; the chaos game and
    refinement stay inside the witness region, so accuracy statements in
    terms of ratio^k remain valid.
    """

    mobius: MobiusMap
    witness: Ball
    ratio: float

    def __post_init__(self):
        if not 0.0 < self.ratio < 1.0:
            raise InvalidParameterError("contraction ratio must lie in (0, 1)")
        image = self.image_ball(self.witness)
        margin = (
            np.linalg.norm(np.asarray(image.center) - np.asarray(self.witness.center))
            + image.radius
            - self.witness.radius
        )
        if margin >= 0:
            raise InvalidParameterError("witness ball must map strictly inside itself")

    @property
    def dim(self):
        return len(self.witness.center)

    def apply(self, x):
        return self.mobius(np.asarray(x, dtype=np.float64))

    def apply_batch(self, X):
        return self.mobius.apply_batch(X)

    def image_ball(self, ball):
        """Exact image of a ball not meeting the inversion sphere's center."""
        from .geometry import Inversion, Similarity

        c = np.asarray(ball.center, dtype=np.float64)
        r = float(ball.radius)
        for prim in self.mobius.primitives:
            if isinstance(prim, Inversion):
                o = np.asarray(prim.center)
                d2 = float(np.dot(c - o, c - o))
                denom = d2 - r * r
                if denom <= 0:
                    raise InvalidParameterError("ball image through the inversion center")
                k = prim.radius * prim.radius / denom
                c = o + k * (c - o)
                r = k * r
            elif isinstance(prim, Similarity):
                c = prim.apply(c)
                r = prim.scale * r
            else:
                c = prim.apply(c)
        return Ball(tuple(c), r)

    def transform_region(self, region):
        if isinstance(region, Ball):
            return self.image_ball(region)
        if isinstance(region, BallUnion):
            return BallUnion(tuple(self.image_ball(b) for b in region.balls))
        raise InvalidParameterError("Mobius members refine balls and ball unions only")

    def fixed_point(self):
        x = np.asarray(self.witness.center, dtype=np.float64)
        for _ in range(200):
            x = self.apply(x)
        return x


# ---------------------------------------------------------------------------
# systems


@dataclass(frozen=True)
class AttractorSample:
    points: np.ndarray
    burnin: int
    seed: int
    backend: str


class ContractiveSystem:
    def __init__(self, members):
        if not members:
            raise InvalidParameterError("a system needs at least one contraction")
        dims = {m.dim for m in members}
        if len(dims) != 1:
            raise InvalidParameterError("members must share one dimension")
        self.members = list(members)
        self.dim = dims.pop()

    @property
    def ratios(self):
        return [m.ratio for m in self.members]

    @property
    def max_ratio(self):
        return max(self.ratios)

    def is_affine(self):
        return all(isinstance(m, AffineContraction) for m in self.members)

    def start_point(self):
        return self.members[0].fixed_point()

    def invariant_ball(self):
        """A ball every member maps into itself (affine systems)."""
        centers = np.array([m.fixed_point() for m in self.members])
        c = centers.mean(axis=0)
        r = max(
            float(np.linalg.norm(m.apply(c) - c)) / (1.0 - m.ratio) for m in self.members
        )
        return Ball(tuple(c), r if r > 0 else 1.0)

    def chaos_game(self, n, burnin=64, seed=0):
        """Seeded random-composition orbit; the first burnin iterates are
        discarded, so emitted points are within max_ratio^burnin * diam(seed)
        of the attractor."""
        if n <= 0:
            raise InvalidParameterError("n must be positive")
        from ._backend import BACKEND

        rng = np.random.default_rng(seed)
        idx = rng.integers(0, len(self.members), size=n + burnin, dtype=np.int32)
        x0 = np.asarray(self.start_point(), dtype=np.float64)
        if self.is_affine():
            mats = np.ascontiguousarray([np.atleast_2d(m.matrix) for m in self.members])
            shifts = np.ascontiguousarray([np.atleast_1d(m.shift) for m in self.members])
            pts = chaos_affine(mats, shifts, idx, np.ascontiguousarray(x0), burnin)
        else:
            pts = np.empty((n, self.dim))
            x = x0
            for t, k in enumerate(idx):
                x = self.members[k].apply(x)
                if t >= burnin:
                    pts[t - burnin] = x
        return AttractorSample(pts, burnin, seed, BACKEND)

    def validate_seed(self, region, tol=1e-9):
        for m in self.members:
            img = m.transform_region(region)
            for p in img.representatives():
                if not region.contains(p, tol):
                    return False
        return True

    def deterministic_stage(self, seed_region, k):
        """All m^k stage-k images of the seed region; the seed must map into
        itself under every member (validated)."""
        if k < 0:
            raise InvalidParameterError("stage must be nonnegative")
        if not self.validate_seed(seed_region):
            raise InvalidParameterError("seed region is not invariant under the system")
        regions = [seed_region]
        for _ in range(k):
            regions = [m.transform_region(r) for m in self.members for r in regions]
        return regions


def similarity_dimension(ratios, tol=1e-12):
    """The unique s with sum(r_i^s) = 1, by bisection (the map is strictly
    decreasing from the member count at s=0 toward 0)."""
    ratios = [float(r) for r in ratios]
    if not ratios:
        raise InvalidParameterError("at least one ratio is required")
    if any(not 0.0 < r < 1.0 for r in ratios):
        raise InvalidParameterError("ratios must lie in (0, 1)")

    def f(s):
        return sum(r ** s for r in ratios) - 1.0

    lo = 1e-9
    hi = len(ratios) * max(1.0, math.log(len(ratios)) / math.log(1.0 / max(ratios)))
    if f(lo) < 0:
        return lo
    while f(hi) > 0:
        hi *= 2.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if hi - lo < tol * 0.01:
            break
        if f(mid) > 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
