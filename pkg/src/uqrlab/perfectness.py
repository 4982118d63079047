"""Uniform-perfectness diagnostics, Holder estimation, linear dilatations.

The separating-annulus detector centres a round annulus at each sample point
in turn.  Rotating the sphere so the centre sits at the origin turns chordal
balls into Euclidean balls of radius rho = chi / sqrt(1 - chi^2), so each gap
between consecutive normalized distances is a genuine separating round
annulus with modulus log(rho_outer / rho_inner); no explicit Mobius map is
needed.  The resulting maximum modulus is a sample statistic: it witnesses a
lower bound for the separating-annulus supremum of the underlying set, and
thresholds should always be quoted together with the sample density.
"""

import csv
import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameterError
from .geometry import INFINITY, chordal_distances

_MAX_NORMALIZED_RADIUS = 1e9


@dataclass(frozen=True)
class AnnulusReport:
    center_index: int
    center: object
    inner: float
    outer: float
    modulus: float
    inside: int
    outside: int
    degenerate: bool = False


def _normalized_radii(chi):
    """Euclidean radii after rotating the centre to the origin."""
    chi = np.clip(chi, 0.0, 1.0)
    rho = chi / np.sqrt(np.maximum(1.0 - chi * chi, 1e-300))
    return np.minimum(rho, _MAX_NORMALIZED_RADIUS)


def _as_sample(points):
    finite = []
    has_inf = False
    for p in points:
        if p is INFINITY:
            has_inf = True
        else:
            q = np.atleast_1d(np.asarray(p, dtype=np.float64))
            finite.append(q)
    arr = np.array(finite) if finite else np.empty((0, 1))
    return arr, has_inf


def separating_annuli(points):
    """Every annulus between consecutive distance shells around each sample
    point, sorted by modulus descending.

    With only two points the single gap is unbounded; it is truncated at the
    configured maximum radius and flagged degenerate.
    """
    arr, has_inf = _as_sample(points)
    centers = [arr[i] for i in range(len(arr))] + ([INFINITY] if has_inf else [])
    n_total = len(centers)
    if n_total < 2:
        raise InvalidParameterError("at least two points are required")

    reports = []
    for ci, c in enumerate(centers):
        chi = chordal_distances(arr, c) if len(arr) else np.empty(0)
        if c is not INFINITY:
            chi = np.delete(chi, ci)
            if has_inf:
                nc2 = float(np.dot(c, c))
                chi = np.append(chi, 1.0 / math.sqrt(1.0 + nc2))
        rho = np.sort(_normalized_radii(chi))
        rho = rho[rho > 0.0]
        if len(rho) == 1:
            outer = _MAX_NORMALIZED_RADIUS
            reports.append(
                AnnulusReport(
                    ci, c, float(rho[0]), outer,
                    float(np.log(outer) - np.log(rho[0])), 2, n_total - 2, True,
                )
            )
            continue
        for i in range(len(rho) - 1):
            if rho[i + 1] > rho[i] * (1.0 + 1e-12):
                reports.append(
                    AnnulusReport(
                        ci, c, float(rho[i]), float(rho[i + 1]),
                        float(np.log(rho[i + 1]) - np.log(rho[i])),
                        i + 2,  # the centre plus the i+1 points within the inner radius
                        n_total - i - 2,
                    )
                )
    reports.sort(key=lambda r: r.modulus, reverse=True)
    return reports


def uniform_perfectness_estimate(points):
    """Maximum separating-annulus modulus of the sample (a two-sided sample
    statistic: large values witness thin separation, small values say the
    sample shows no large gap at its density)."""
    return separating_annuli(points)[0].modulus


def reports_to_csv(reports, path):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(
            ["center_index", "center", "inner", "outer", "modulus", "inside", "outside", "degenerate"]
        )
        for r in reports:
            center = "inf" if r.center is INFINITY else " ".join(f"{v:.17g}" for v in r.center)
            writer.writerow(
                [r.center_index, center, f"{r.inner:.17g}", f"{r.outer:.17g}",
                 f"{r.modulus:.17g}", r.inside, r.outside, int(r.degenerate)]
            )


def reports_to_json(reports, path=None):
    payload = {
        "max_modulus": reports[0].modulus if reports else None,
        "count": len(reports),
        "degenerate": any(r.degenerate for r in reports),
    }
    if path is not None:
        with open(path, "w") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")
    return payload


# ---------------------------------------------------------------------------
# Holder estimation


@dataclass(frozen=True)
class HolderEstimate:
    alpha: float
    estimate: float
    n_samples: int
    seed: int


def _uniform_sphere_points(rng, n, dim):
    """Uniform points on S^dim mapped to R^dim by stereographic projection."""
    w = rng.standard_normal((n, dim + 1))
    w /= np.linalg.norm(w, axis=1, keepdims=True)
    denom = 1.0 - w[:, -1]
    denom = np.where(np.abs(denom) < 1e-12, 1e-12, denom)
    return w[:, :-1] / denom[:, None], w


def _sphere_to_plane(w):
    denom = 1.0 - w[:, -1]
    denom = np.where(np.abs(denom) < 1e-12, 1e-12, denom)
    return w[:, :-1] / denom[:, None]


def holder_constant_estimate(f, alpha, n_samples, seed, dim=2):
    """Empirical sup of chi(f(x), f(y)) / chi(x, y)^alpha over seeded pairs.

    Pairs are stratified near the diagonal (log-uniform chordal separations
    from 1e-8 up to 1) because the supremum for alpha < 1 is typically
    attained there.  f maps (n, dim) arrays to (n, dim) arrays.
    """
    if not 0.0 < alpha <= 1.0:
        raise InvalidParameterError("alpha must lie in (0, 1]")
    if n_samples <= 0:
        raise InvalidParameterError("n_samples must be positive")
    rng = np.random.default_rng(seed)
    x, w = _uniform_sphere_points(rng, n_samples, dim)

    # second endpoint at a log-uniform chordal distance along a random tangent
    delta = 10.0 ** rng.uniform(-8.0, 0.0, size=n_samples)
    theta = 2.0 * np.arcsin(np.clip(delta, 0.0, 1.0))
    tangent = rng.standard_normal((n_samples, dim + 1))
    tangent -= np.sum(tangent * w, axis=1, keepdims=True) * w
    tangent /= np.linalg.norm(tangent, axis=1, keepdims=True)
    w2 = np.cos(theta)[:, None] * w + np.sin(theta)[:, None] * tangent
    y = _sphere_to_plane(w2)

    fx = np.asarray(f(x), dtype=np.float64)
    fy = np.asarray(f(y), dtype=np.float64)

    def chi(a, b):
        na = np.sum(a * a, axis=1)
        nb = np.sum(b * b, axis=1)
        return np.linalg.norm(a - b, axis=1) / np.sqrt((1.0 + na) * (1.0 + nb))

    num = chi(fx, fy)
    den = chi(x, y) ** alpha
    good = den > 0
    ratios = np.zeros(n_samples)
    ratios[good] = num[good] / den[good]
    return HolderEstimate(alpha, float(ratios.max()), n_samples, seed)


# ---------------------------------------------------------------------------
# linear dilatations


@dataclass(frozen=True)
class LinearDilatation:
    matrix: tuple
    outer: float
    inner: float
    maximal: float


def _singular_values(M):
    # Exactly diagonal matrices get exact singular values so that integer
    # powers keep integral dilatations exact.
    if np.count_nonzero(M - np.diag(np.diagonal(M))) == 0:
        return np.sort(np.abs(np.diagonal(M)))[::-1]
    return np.linalg.svd(M, compute_uv=False)


def matrix_dilatation(M):
    """Outer, inner and maximal dilatation of a nonsingular linear map:
    K_O = |M|^n / |det M|, K_I = |det M| / sigma_min^n."""
    M = np.asarray(M, dtype=np.float64)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise InvalidParameterError("a square matrix is required")
    n = M.shape[0]
    det = abs(float(np.linalg.det(M)))
    sv = _singular_values(M)
    if det == 0.0 or sv[-1] == 0.0:
        raise InvalidParameterError("the matrix must be nonsingular")
    if np.count_nonzero(M - np.diag(np.diagonal(M))) == 0:
        det = float(np.prod(np.abs(np.diagonal(M))))
    k_o = sv[0] ** n / det
    k_i = det / sv[-1] ** n
    return LinearDilatation(tuple(map(tuple, M)), float(k_o), float(k_i), float(max(k_o, k_i)))


def dilatation_sequence(M, kmax):
    """K(M^k) for k = 1..kmax; diverges unless M is a scalar multiple of an
    orthogonal matrix."""
    M = np.asarray(M, dtype=np.float64)
    out = []
    P = np.eye(M.shape[0])
    for _ in range(kmax):
        P = P @ M
        out.append(matrix_dilatation(P).maximal)
    return out
