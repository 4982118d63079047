"""Example factories: Cantor shells, linked torus chains, conformal traps.

Each factory emits a ContractiveSystem describing the Julia set of the
corresponding semigroup (as an IFS attractor) together with build-time
validation evidence; the quasiregular extensions themselves (branched
covers, annulus interpolation) are not modelled, only the geometry that
determines the Julia set.
"""

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ._backend import gauss_linking_sum
from .errors import ConstructionFailedError, InvalidParameterError
from .geometry import Inversion, translation, mobius_from
from .ifs import (
    AffineContraction,
    Ball,
    BallUnion,
    ContractiveSystem,
    MobiusContraction,
    Torus,
    line_contraction,
    similarity_dimension,
)
from .powermaps import PowerMap, StretchParams
from .semigroup import SemigroupSpec

_LN2 = math.log(2.0)


# ---------------------------------------------------------------------------
# Cantor shells


@dataclass(frozen=True)
class CantorShellSystem:
    """Radial system in log2-radius coordinates whose attractor is the Cantor
    factor of a (Cantor set) x (sphere) Julia set."""

    n_generators: int
    system: ContractiveSystem
    generator_params: tuple
    labels: tuple

    @property
    def ratios(self):
        return self.system.ratios

    def radial_maps_exact(self):
        """The maps t -> t/2^k + 1 - 2^(1-k) (k < N) and t -> t/2^N + 1 - 2^-N
        as exact rational (slope, offset) pairs."""
        N = self.n_generators
        maps = [(Fraction(1, 2 ** k), 1 - Fraction(2, 2 ** k)) for k in range(1, N)]
        maps.append((Fraction(1, 2 ** N), 1 - Fraction(1, 2 ** N)))
        return maps

    def fixed_points_exact(self):
        out = []
        for slope, offset in self.radial_maps_exact():
            fp = offset / (1 - slope)
            assert slope * fp + offset == fp
            out.append(fp)
        return out


def cantor_shell_params(N):
    """Stretch parameters of the generators p_1..p_{N-1}, q_N."""
    if N < 2:
        raise InvalidParameterError("at least two generators are required (N >= 2)")
    params = [StretchParams(2 ** k, (2 - 2 ** k) * _LN2) for k in range(1, N)]
    params.append(StretchParams(2 ** N, (1 - 2 ** N) * _LN2))
    return params


def cantor_shell_system(N):
    """Radial IFS of the inverse log2-radius actions of the N generators."""
    if N < 2:
        raise InvalidParameterError("at least two generators are required (N >= 2)")
    maps = [line_contraction(0.5 ** k, 1.0 - 2.0 ** (1 - k)) for k in range(1, N)]
    maps.append(line_contraction(0.5 ** N, 1.0 - 0.5 ** N))
    labels = tuple([f"p{k}" for k in range(1, N)] + [f"q{N}"])
    return CantorShellSystem(N, ContractiveSystem(maps), tuple(cantor_shell_params(N)), labels)


def cantor_shell_dimension(N, n):
    """Similarity dimension of the shell Julia set: the sphere factor (n-1)
    plus the Moran root of the radial ratios."""
    if n < 2:
        raise InvalidParameterError("ambient dimension must be at least 2")
    shell = cantor_shell_system(N)
    return (n - 1) + similarity_dimension(shell.ratios)


def cantor_shell_semigroup(N, dim=3):
    shell = cantor_shell_system(N)
    gens = [PowerMap(p, dim=dim, validate=False) for p in shell.generator_params]
    return SemigroupSpec(gens, labels=list(shell.labels))


# ---------------------------------------------------------------------------
# linking numbers


@dataclass(frozen=True)
class Circle3D:
    """Round circle with orthonormal in-plane frame (u, v)."""

    center: tuple
    u: tuple
    v: tuple
    radius: float

    def points(self, ts):
        ang = 2.0 * math.pi * np.asarray(ts)
        u, v = np.asarray(self.u), np.asarray(self.v)
        return np.asarray(self.center) + self.radius * (
            np.outer(np.cos(ang), u) + np.outer(np.sin(ang), v)
        )

    def velocities(self, ts):
        ang = 2.0 * math.pi * np.asarray(ts)
        u, v = np.asarray(self.u), np.asarray(self.v)
        return (2.0 * math.pi * self.radius) * (
            np.outer(-np.sin(ang), u) + np.outer(np.cos(ang), v)
        )


def linking_number(c1, c2, resolution=512):
    """Gauss linking integral by product quadrature on a uniform grid.

    The trapezoid rule on smooth periodic integrands converges spectrally, so
    the default resolution puts well-separated curves within 1e-2 of the true
    integer.
    """
    ts = np.arange(resolution) / resolution
    p1 = np.ascontiguousarray(c1.points(ts), dtype=np.float64)
    v1 = np.ascontiguousarray(c1.velocities(ts), dtype=np.float64)
    p2 = np.ascontiguousarray(c2.points(ts), dtype=np.float64)
    v2 = np.ascontiguousarray(c2.velocities(ts), dtype=np.float64)
    d2 = (
        np.sum(p1 * p1, axis=1)[:, None]
        + np.sum(p2 * p2, axis=1)[None, :]
        - 2.0 * (p1 @ p2.T)
    )
    gap = math.sqrt(max(float(d2.min()), 0.0))
    if gap < 1e-9:
        raise InvalidParameterError("curves intersect (sampled gap below 1e-9)")
    total = gauss_linking_sum(p1, v1, p2, v2)
    return total / (4.0 * math.pi * resolution * resolution)


# ---------------------------------------------------------------------------
# torus chains (Antoine-style necklaces)


@dataclass(frozen=True)
class NecklaceReport:
    min_surface_gap: float
    containment_margin: float
    linking: tuple
    consecutive_ok: bool
    nonconsecutive_ok: bool
    failures: tuple

    @property
    def ok(self):
        return not self.failures

    def as_dict(self):
        return {
            "ok": self.ok,
            "min_surface_gap": self.min_surface_gap,
            "containment_margin": self.containment_margin,
            "consecutive_ok": self.consecutive_ok,
            "nonconsecutive_ok": self.nonconsecutive_ok,
            "failures": list(self.failures),
            "linking": [list(row) for row in self.linking],
        }


@dataclass(frozen=True)
class TorusChain:
    parent: Torus
    children: tuple
    maps: tuple
    m: int
    report: object = None

    @property
    def system(self):
        return ContractiveSystem(list(self.maps))

    def child_cores(self):
        out = []
        for child in self.children:
            u, v = child.frame()
            out.append(Circle3D(child.center, tuple(u), tuple(v), child.core_radius))
        return out


def _even_square(m):
    d = math.isqrt(m)
    return d * d == m and d % 2 == 0


def build_necklace(m, parent_radius=1.0, parent_tube=0.35,
                   ring_factor=1.28, tube_factor=0.12, validate=True):
    """Chain of m congruent solid tori around the parent torus core.

    Children sit at core angles 2 pi j / m with alternating link planes
    (tangent-vertical for even j, tangent-radial for odd j), ring radius
    ring_factor * sin(pi/m) so consecutive rings pass through each other, and
    tube radius tube_factor * ring radius.  The similarity phi_j maps the
    parent core circle onto the j-th child core circle (common ratio = ring
    radius / parent radius).
    """
    if not isinstance(m, int) or not _even_square(m) or m < 4:
        raise InvalidParameterError("m must be an even perfect square (m = d^2, d even)")
    if parent_radius <= 0 or parent_tube <= 0 or parent_tube >= parent_radius:
        raise InvalidParameterError("parent torus needs 0 < tube < core radius")

    parent = Torus((0.0, 0.0, 0.0), (0.0, 0.0, 1.0), parent_radius, parent_tube)
    ring_r = ring_factor * math.sin(math.pi / m) * parent_radius
    tube_r = tube_factor * ring_r
    children = []
    maps = []
    for j in range(m):
        ang = 2.0 * math.pi * j / m
        center = parent_radius * np.array([math.cos(ang), math.sin(ang), 0.0])
        tangent = np.array([-math.sin(ang), math.cos(ang), 0.0])
        radial = np.array([math.cos(ang), math.sin(ang), 0.0])
        v = np.array([0.0, 0.0, 1.0]) if j % 2 == 0 else radial
        axis = np.cross(tangent, v)
        children.append(Torus(tuple(center), tuple(axis), ring_r, tube_r))
        rot = np.stack([tangent, v, axis], axis=1)
        scale = ring_r / parent_radius
        maps.append(AffineContraction(tuple(map(tuple, scale * rot)), tuple(center), scale))

    chain = TorusChain(parent, tuple(children), tuple(maps), m)
    if validate:
        report = validate_necklace(chain)
        chain = TorusChain(parent, tuple(children), tuple(maps), m, report)
        if not report.ok:
            raise ConstructionFailedError(
                "necklace geometry failed validation: " + "; ".join(report.failures),
                report,
            )
    return chain


def validate_necklace(chain, core_samples=1024, resolution=512, min_gap=1e-3, lk_tol=1e-2):
    """Disjointness, containment and Hopf-pattern checks for a torus chain.

    Surface distances are bounded below by sampled core-circle distances
    minus the tube radii; linking numbers come from the Gauss integral on the
    core circles.
    """
    m = chain.m
    cores = [child.core_points(core_samples) for child in chain.children]
    failures = []

    sq = [np.sum(c * c, axis=1) for c in cores]
    surface_gap = math.inf
    for i in range(m):
        for j in range(i + 1, m):
            d2 = sq[i][:, None] + sq[j][None, :] - 2.0 * (cores[i] @ cores[j].T)
            d = math.sqrt(max(float(d2.min()), 0.0))
            gap = d - chain.children[i].tube_radius - chain.children[j].tube_radius
            surface_gap = min(surface_gap, gap)
    if not surface_gap > min_gap:
        failures.append(f"children overlap or nearly touch (gap {surface_gap:.2e})")

    margin = math.inf
    for child, core in zip(chain.children, cores):
        dist = chain.parent.core_distance(core).max() + child.tube_radius
        margin = min(margin, chain.parent.tube_radius - dist)
    if not margin > min_gap:
        failures.append(f"children are not inside the parent interior (margin {margin:.2e})")

    circles = chain.child_cores()
    linking = np.zeros((m, m))
    consecutive_ok = True
    nonconsecutive_ok = True
    for i in range(m):
        for j in range(i + 1, m):
            lk = linking_number(circles[i], circles[j], resolution)
            linking[i, j] = linking[j, i] = lk
            consecutive = (j - i) % m == 1 or (i - j) % m == 1
            if consecutive:
                if abs(abs(lk) - 1.0) > lk_tol:
                    consecutive_ok = False
            elif abs(lk) > lk_tol:
                nonconsecutive_ok = False
    if not consecutive_ok:
        failures.append("a consecutive pair is not a Hopf link")
    if not nonconsecutive_ok:
        failures.append("a non-consecutive pair is linked")

    return NecklaceReport(
        float(surface_gap),
        float(margin),
        tuple(map(tuple, linking)),
        consecutive_ok,
        nonconsecutive_ok,
        tuple(failures),
    )


# ---------------------------------------------------------------------------
# conformal traps


@dataclass(frozen=True)
class TrapReport:
    ok: bool
    failures: tuple
    contraction_ratio: float


@dataclass(frozen=True)
class TrapSystem:
    """Mobius IFS of a conformal-trap semigroup: the involution exchanging
    B(x0, b) with its complement composed with the translations pulling each
    B(x_i, b) onto the trap ball."""

    d: int
    x0: tuple
    centers: tuple
    a: float
    b: float
    involution: object
    system: ContractiveSystem
    report: TrapReport

    def seed_region(self):
        return BallUnion(tuple(Ball(c, self.b) for c in self.centers))

    def membership(self, points, steps=None, tol=1e-6):
        """Expanding-orbit membership oracle for the attractor.

        A point within eps of the attractor survives about
        log(b/eps)/log(1/ratio) expanding steps before leaving the witness
        balls, so surviving all steps certifies proximity ratio^steps * b.
        Each step amplifies floating-point noise by 1/ratio, so the step
        count is capped where roundoff would start rejecting true members.
        """
        ratio = self.report.contraction_ratio
        cap = int(math.log(self.b / 1e-13) / math.log(1.0 / ratio))
        steps = cap if steps is None else min(steps, cap)
        pts = np.atleast_2d(np.asarray(points, dtype=np.float64)).copy()
        centers = np.asarray(self.centers)
        x0 = np.asarray(self.x0)
        alive = np.ones(len(pts), dtype=bool)
        for _ in range(steps):
            diff = pts[:, None, :] - centers[None, :, :]
            dist = np.linalg.norm(diff, axis=2)
            nearest = np.argmin(dist, axis=1)
            near_d = dist[np.arange(len(pts)), nearest]
            alive &= near_d <= self.b * (1.0 + tol)
            if not alive.any():
                break
            # inverse of phi_i^{-1}: translate B(x_i,.) onto B(x0,.), then invert
            q = pts[alive] + (x0 - centers[nearest[alive]])
            rel = q - x0
            n2 = np.sum(rel * rel, axis=1)
            pts[alive] = x0 + (self.b * self.b / n2)[:, None] * rel
        return alive


def build_trap(d, x0, centers, a, b):
    """Conformal-trap Mobius IFS with trap ball B(x0, b) and target balls
    B(x_i, b) inside the pairwise disjoint balls B(x_i, a)."""
    if d < 2:
        raise InvalidParameterError("the trap construction needs degree d >= 2")
    centers = [np.asarray(c, dtype=np.float64) for c in centers]
    if len(centers) != d:
        raise InvalidParameterError("exactly d preimage centers are required")
    x0 = np.asarray(x0, dtype=np.float64)
    if not 2.0 * b < a:
        raise InvalidParameterError("the radii must satisfy 2b < a")
    if b <= 0:
        raise InvalidParameterError("b must be positive")
    everything = [x0] + centers
    for i in range(len(everything)):
        for j in range(i + 1, len(everything)):
            if np.linalg.norm(everything[i] - everything[j]) < 2.0 * a:
                raise InvalidParameterError("the balls B(x_i, a) must be pairwise disjoint")

    dmin = min(float(np.linalg.norm(c - x0)) for c in centers)
    ratio = (b * b) / ((dmin - b) * (dmin - b))
    members = []
    failures = []
    for c in centers:
        mob = mobius_from(Inversion(tuple(x0), float(b)), translation(c - x0))
        try:
            members.append(MobiusContraction(mob, Ball(tuple(c), float(b)), ratio))
        except InvalidParameterError as exc:
            failures.append(str(exc))
    if failures:
        raise ConstructionFailedError("; ".join(failures))

    system = ContractiveSystem(members)
    report = TrapReport(True, (), ratio)
    return TrapSystem(
        d, tuple(x0), tuple(tuple(c) for c in centers), float(a), float(b),
        mobius_from(Inversion(tuple(x0), float(b))), system, report,
    )
