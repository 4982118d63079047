"""Pure-Python (numpy) fallbacks for the compiled kernels.

Signatures and semantics match ``uqrlab._kernels``; results agree with the
compiled versions to within a few ulp (floating-point op order differs, so
bitwise equality across backends is not promised).
"""

import numpy as np

_HALF_PI = 0.5 * np.pi


def _fold(x):
    """Reflect coordinates into [0, 1]; return (folded, parity of fold count)."""
    q = np.floor(x)
    r = x - q
    odd = np.mod(q.astype(np.int64), 2) != 0
    return np.where(odd, 1.0 - r, r), odd


def zorich_eval3(pts):
    pts = np.asarray(pts, dtype=np.float64)
    u, odd1 = _fold(pts[:, 0])
    v, odd2 = _fold(pts[:, 1])
    up = 2.0 * u - 1.0
    vp = 2.0 * v - 1.0
    s = np.maximum(np.abs(up), np.abs(vp))
    nrm = np.hypot(up, vp)
    safe = nrm > 0.0
    c = np.zeros_like(s)
    np.divide(np.sin(_HALF_PI * s), nrm, out=c, where=safe)
    w3 = np.cos(_HALF_PI * s)
    w3 = np.where(safe, w3, 1.0)
    w3 = np.where(odd1 ^ odd2, -w3, w3)
    scale = np.exp(pts[:, 2])
    out = np.empty_like(pts)
    out[:, 0] = scale * c * up
    out[:, 1] = scale * c * vp
    out[:, 2] = scale * w3
    return out


def chaos_affine(mats, shifts, idx, x0, burnin):
    mats = np.asarray(mats, dtype=np.float64)
    shifts = np.asarray(shifts, dtype=np.float64)
    x = np.array(x0, dtype=np.float64)
    steps = len(idx)
    n_out = max(steps - burnin, 0)
    out = np.empty((n_out, len(x)), dtype=np.float64)
    for t in range(steps):
        k = idx[t]
        x = mats[k] @ x + shifts[k]
        if t >= burnin:
            out[t - burnin] = x
    return out


def gauss_linking_sum(p1, v1, p2, v2):
    p1 = np.asarray(p1, dtype=np.float64)
    p2 = np.asarray(p2, dtype=np.float64)
    v1 = np.asarray(v1, dtype=np.float64)
    v2 = np.asarray(v2, dtype=np.float64)
    diff = p1[:, None, :] - p2[None, :, :]
    cross = np.cross(v1[:, None, :], v2[None, :, :])
    r = np.sqrt(np.sum(diff * diff, axis=2))
    integrand = np.sum(cross * diff, axis=2) / (r * r * r)
    return float(np.sum(integrand))
