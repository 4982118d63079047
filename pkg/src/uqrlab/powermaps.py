"""Power-type maps conjugate to affine stretches.

A stretch A_{d,L}(x) = (d x1, ..., d x_{n-1}, d x_n + L) (L = ln lambda)
conjugates through the strongly automorphic map h to the power-type map
f(y) = h(A(h^{-1}(y))), the higher-dimensional analogue of z -> lambda z^d.
All lambda arithmetic is done in log space: word compositions grow lambda
doubly exponentially, logs stay exact.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, InvalidParameterError
from .geometry import INFINITY
from .zorich import PRINCIPAL, BranchIndex, ZorichMap

_ZMAPS = {2: ZorichMap(2), 3: ZorichMap(3)}


@dataclass(frozen=True)
class StretchParams:
    """Integer degree d (|d| >= 2) and log lambda."""

    d: int
    loglam: float = 0.0

    def __post_init__(self):
        if abs(self.d) < 2:
            raise InvalidParameterError("|d| must be at least 2")
        if not math.isfinite(self.loglam):
            raise InvalidParameterError("log lambda must be finite")

    @classmethod
    def from_lambda(cls, d, lam):
        if lam <= 0:
            raise InvalidParameterError("lambda must be positive")
        return cls(d, math.log(lam))

    @property
    def lam(self):
        return math.exp(self.loglam)

    def compose(self, inner):
        """Parameters of self o inner: (d1 d2, L1 + d1 L2), exact in logs."""
        return StretchParams(self.d * inner.d, self.loglam + self.d * inner.loglam)

    def julia_radius(self):
        """The radius lambda^{1/(1-d)} of the invariant sphere (d >= 2)."""
        if self.d < 2:
            raise InvalidParameterError("the invariant sphere needs d >= 2")
        return math.exp(self.loglam / (1.0 - self.d))

    def apply(self, pts):
        """Apply the affine stretch to an (n, dim) batch in beam coordinates."""
        out = np.asarray(pts, dtype=np.float64) * self.d
        out[:, -1] += self.loglam
        return out

    def unapply(self, pts):
        out = np.array(pts, dtype=np.float64)
        out[:, -1] -= self.loglam
        return out / self.d


class PowerMap:
    """The uqr power-type map determined by (d, log lambda) and h."""

    def __init__(self, params, dim=3, validate=True):
        self.params = params
        self.h = _ZMAPS[dim]
        self.dim = dim
        if validate:
            rng = np.random.default_rng(20240801)
            pts = rng.normal(size=(8, dim))
            pts /= np.linalg.norm(pts, axis=1, keepdims=True)
            defect = max(self.branch_defect(p) for p in pts)
            if defect > 1e-8:
                raise InvalidParameterError(
                    f"branch-dependent conjugacy for d={params.d}: defect {defect:.2e}"
                )

    @property
    def d(self):
        return self.params.d

    @property
    def lam(self):
        return self.params.lam

    def __repr__(self):
        return f"PowerMap(d={self.d}, loglam={self.params.loglam:g}, dim={self.dim})"

    def eval_batch(self, Y):
        Y = np.asarray(Y, dtype=np.float64)
        return self.h.eval_batch(self.params.apply(self.h.inverse_batch(Y)))

    def __call__(self, y):
        if y is INFINITY or np.ndim(y) == 0 and y == 0:
            return self._fixed(y)
        y = np.asarray(y, dtype=np.float64)
        if np.all(y == 0.0):
            return self._fixed(0)
        return self.eval_batch(y[None, :])[0]

    def _fixed(self, y):
        # 0 and infinity are superattracting fixed points for d >= 2 and swap
        # for d <= -2.
        at_zero = y is not INFINITY
        if self.d >= 2:
            return np.zeros(self.dim) if at_zero else INFINITY
        return INFINITY if at_zero else np.zeros(self.dim)

    # -- fibres ---------------------------------------------------------------

    def _fundamental_branches(self, with_rotation):
        k = abs(self.d)
        if self.dim == 2:
            return [BranchIndex(m1) for m1 in range(k)]
        branches = [BranchIndex(m1, m2) for m1 in range(k) for m2 in range(k)]
        if with_rotation:
            branches += [BranchIndex(m1, m2, True) for m1 in range(k) for m2 in range(k)]
        return branches

    def branch_defect(self, y):
        """Max pairwise spread of h(A(.)) over a fundamental set of branches.

        A value near zero certifies that the conjugacy defines f single-valuedly
        at y for this (d, lambda).
        """
        y = np.asarray(y, dtype=np.float64)
        principal = self.h.inverse_batch(y[None, :])[0]
        branches = self._fundamental_branches(with_rotation=True)
        pts = np.stack([self.h.apply_branch(principal, b) for b in branches])
        vals = self.h.eval_batch(self.params.apply(pts))
        spread = vals[:, None, :] - vals[None, :, :]
        return float(np.sqrt(np.sum(spread * spread, axis=2)).max())

    def preimages(self, y):
        """All solutions of f(x) = y, enumerated over a fundamental domain of
        the scaled fibre lattice; duplicates within 1e-9 are merged."""
        if y is INFINITY or (np.ndim(y) > 0 and np.all(np.asarray(y) == 0.0)):
            raise DomainError("0 and infinity are fixed; preimages need a regular point")
        y = np.asarray(y, dtype=np.float64)
        principal = self.h.inverse_batch(y[None, :])[0]
        pts = np.stack(
            [self.h.apply_branch(principal, b) for b in self._fundamental_branches(False)]
        )
        pre = self.h.eval_batch(self.params.unapply(pts))
        keep = []
        for row in pre:
            if not any(np.linalg.norm(row - q) < 1e-9 for q in keep):
                keep.append(row)
        return keep

    def preimage_radius(self, r):
        """Radial preimage law: f maps S(rho) onto S(lambda rho^d)."""
        return math.exp((math.log(r) - self.params.loglam) / self.d)


def power_map(d, lam=1.0, dim=3, validate=True):
    return PowerMap(StretchParams.from_lambda(d, lam), dim=dim, validate=validate)
