"""Strongly automorphic exponential-type maps.

For dimension 3 this is the explicit Zorich-type map h built from unit-square
beams: the base square [0,1]^2 is sent to the upper hemisphere by

    psi(u, v) = (sin(pi s / 2) (u', v') / |(u', v')|, cos(pi s / 2)),
    u' = 2u - 1, v' = 2v - 1, s = max(|u'|, |v'|),

extended to all of R^2 by folding both coordinates into [0,1] across integer
planes and flipping the vertical target coordinate when the total number of
folds is odd, and finally h(x1, x2, x3) = e^{x3} psi_folded(x1, x2).  The
map sends the plane {x3 = t} onto the sphere of radius e^t.

The isometries g with h o g = h are exactly the translations by (2Z)^2 and
the half-turns about vertical lines through integer points: folding kills
any candidate that flips a folded coordinate an odd number of times, so odd
translations (including diagonal ones) are not symmetries.  Fibres over a
generic point are {+-(x1, x2) + (2Z)^2} x {x3}, which BranchIndex
parameterizes by two even-offset integers and a half-turn bit.

For dimension 2 the map is the complex exponential h(x1, x2) =
e^{x2} (cos x1, sin x1), an exact closed-form oracle; its fibre symmetry is
translation of the angle by 2 pi Z.
"""

import math
from dataclasses import dataclass

import numpy as np

from ._backend import zorich_eval3
from .errors import DomainError, InvalidParameterError

_TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class BranchIndex:
    """Selects a fibre element: offsets (m1, m2) and the half-turn bit.

    In dimension 3 the branch acts on a principal preimage (x1, x2, t) as
    (s*x1 + 2*m1, s*x2 + 2*m2, t) with s = -1 when rotate is set.  In
    dimension 2 only m1 is meaningful (angle shift by 2 pi m1).
    """

    m1: int = 0
    m2: int = 0
    rotate: bool = False


PRINCIPAL = BranchIndex()


@dataclass(frozen=True)
class BeamIsometry:
    """Candidate symmetry (x1, x2) -> (s*(x1, x2) + (t1, t2)), s = +-1.

    Candidates with odd offsets are valid isometries of R^3 but not
    symmetries of the map; automorphy_defect measures how badly they fail.
    """

    t1: int
    t2: int = 0
    negate: bool = False

    def apply(self, x):
        x = np.asarray(x, dtype=np.float64)
        s = -1.0 if self.negate else 1.0
        return np.array([s * x[0] + self.t1, s * x[1] + self.t2, x[2]])


class ZorichMap:
    """The strongly automorphic map for dimension 2 or 3."""

    def __init__(self, dim):
        if dim not in (2, 3):
            raise InvalidParameterError("dimension must be 2 or 3")
        self.dim = dim

    # -- evaluation ---------------------------------------------------------

    def eval_batch(self, pts):
        pts = np.ascontiguousarray(pts, dtype=np.float64)
        if pts.ndim != 2 or pts.shape[1] != self.dim:
            raise InvalidParameterError(f"expected an (n, {self.dim}) batch")
        if self.dim == 3:
            return zorich_eval3(pts)
        scale = np.exp(pts[:, 1])
        return np.stack([scale * np.cos(pts[:, 0]), scale * np.sin(pts[:, 0])], axis=1)

    def eval(self, x):
        return self.eval_batch(np.asarray(x, dtype=np.float64)[None, :])[0]

    # -- inversion ----------------------------------------------------------

    def inverse_batch(self, Y):
        """Principal-branch preimages of nonzero finite points (batch)."""
        Y = np.asarray(Y, dtype=np.float64)
        r = np.linalg.norm(Y, axis=1)
        if np.any(r == 0.0) or not np.all(np.isfinite(r)):
            raise DomainError("the map omits 0; preimages need nonzero finite points")
        t = np.log(r)
        if self.dim == 2:
            return np.stack([np.arctan2(Y[:, 1], Y[:, 0]), t], axis=1)
        W = Y / r[:, None]
        flip = W[:, 2] < 0.0
        wz = np.abs(W[:, 2])
        s = (2.0 / math.pi) * np.arccos(np.clip(wz, -1.0, 1.0))
        m = np.maximum(np.abs(W[:, 0]), np.abs(W[:, 1]))
        safe = m > 0.0
        fac = np.zeros_like(s)
        np.divide(s, m, out=fac, where=safe)
        u = 0.5 * (1.0 + fac * W[:, 0])
        v = 0.5 * (1.0 + fac * W[:, 1])
        # Points on the vertical axis fold to the square center.
        u = np.where(safe, u, 0.5)
        v = np.where(safe, v, 0.5)
        x1 = np.where(flip, 2.0 - u, u)
        return np.stack([x1, v, t], axis=1)

    def apply_branch(self, principal, branch):
        """Move principal preimages to the fibre element named by branch."""
        P = np.asarray(principal, dtype=np.float64)
        single = P.ndim == 1
        if single:
            P = P[None, :]
        out = P.copy()
        if self.dim == 2:
            if branch.m2 or branch.rotate:
                raise InvalidParameterError("the planar fibre symmetry is an angle shift only")
            out[:, 0] += _TWO_PI * branch.m1
        else:
            if branch.rotate:
                out[:, 0] = -out[:, 0]
                out[:, 1] = -out[:, 1]
            out[:, 0] += 2.0 * branch.m1
            out[:, 1] += 2.0 * branch.m2
        return out[0] if single else out

    def inverse(self, y, branch=PRINCIPAL):
        y = np.asarray(y, dtype=np.float64)
        principal = self.inverse_batch(y[None, :])[0]
        return self.apply_branch(principal, branch)

    # -- symmetry diagnostics -------------------------------------------------

    def is_automorphism(self, motion):
        """Whether h o g = h holds exactly for the candidate isometry."""
        if self.dim == 2:
            return not motion.negate and motion.t2 == 0
        return motion.t1 % 2 == 0 and motion.t2 % 2 == 0

    def automorphy_defect(self, x, motion):
        """|h(g(x)) - h(x)| for a candidate beam isometry g."""
        x = np.asarray(x, dtype=np.float64)
        if self.dim == 2:
            gx = np.array([x[0] + _TWO_PI * motion.t1, x[1]])
        else:
            gx = motion.apply(x)
        return float(np.linalg.norm(self.eval(gx) - self.eval(x)))
