"""SO(3) heat kernel: direct spherical-harmonic series and covering route.

Direct route: level r carries the (2r+1)-dimensional representation on
spherical harmonics; the generator diagonalizes on
phi_s(al, be) = sqrt(2) e^{i s be} Pbar_r^{|s|}(cos al)  (unit norm for the
normalized surface measure) with eigenvalues s^2 - r(r+1), and the diagonal
matrix elements of the right-translation action (X(g) f)(x) = f(x g) are
computed by exact quadrature: Gauss-Legendre in cos(al) (the integrand is a
polynomial of degree <= 2r after the angular average) and trapezoid in be.

Covering route: the average of the SU(2) kernel over the two preimages.
"""

from __future__ import annotations

import numpy as np

from ..groups import SO3Element, su2_preimage, SU2Element
from ..policy import DEFAULT_POLICY, InputError, KernelResult
from ..specfun import legendre_normalized
from .su2 import su2_kernel_alphas


def so3_level_cut(t, abs_tol):
    if t <= 0:
        raise InputError("t must be positive")
    r = 1
    while _tail_bound(r, t) > abs_tol and r < 20000:
        r += 1
    return r


def _tail_bound(R, t):
    # each level is bounded by (2r+1)^2 e^{-r t} (slowest eigenvalue -r)
    q = np.exp(-t)
    return (2 * R + 3) ** 2 * q ** (R + 1) / (1.0 - q) ** 3


def so3_kernel_direct(g: SO3Element, t, policy=DEFAULT_POLICY) -> KernelResult:
    if not isinstance(g, SO3Element):
        raise InputError("so3_kernel expects an SO3Element")
    if t <= 0:
        raise InputError("t must be positive")
    R = so3_level_cut(t, policy.abs_tol)
    if policy.series_cut is not None:
        R = min(R, int(policy.series_cut))
    Rm = g.matrix
    term_cut = policy.abs_tol * 1e-3
    total = 0.0 + 0.0j
    dropped = 0.0
    for r in range(R, -1, -1):
        if r == 0:
            total += 1.0  # trivial representation
            continue
        lam = np.arange(-r, r + 1) ** 2 - r * (r + 1.0)
        keep = (2 * r + 1) * np.exp(t * lam) > term_cut
        dropped += float(np.sum((2 * r + 1) * np.exp(t * lam[~keep])))
        s_keep = sorted({abs(int(s)) for s in np.arange(-r, r + 1)[keep]})
        if not s_keep:
            continue
        nc = r + 8
        nb = 2 * r + 8
        c, wc = np.polynomial.legendre.leggauss(nc)
        beta = np.arange(nb) * (2.0 * np.pi / nb)
        sa = np.sqrt(np.clip(1.0 - c * c, 0.0, None))
        # sample points x and their images x' = x g (rows act from the right)
        X = np.empty((nc, nb, 3))
        X[..., 0] = sa[:, None] * np.cos(beta)[None, :]
        X[..., 1] = sa[:, None] * np.sin(beta)[None, :]
        X[..., 2] = c[:, None]
        Xp = X @ Rm
        cp = np.clip(Xp[..., 2], -1.0, 1.0)
        bp = np.arctan2(Xp[..., 1], Xp[..., 0])
        for m in s_keep:
            P0 = legendre_normalized(r, m, c)          # at the nodes
            P1 = legendre_normalized(r, m, cp.ravel()).reshape(nc, nb)
            for s in (m, -m) if m else (0,):
                lam_s = s * s - r * (r + 1.0)
                if (2 * r + 1) * np.exp(t * lam_s) <= term_cut:
                    continue
                phase = np.exp(1j * s * (bp - beta[None, :]))
                elem = (2.0 / (4.0 * np.pi)) * (2.0 * np.pi / nb) * np.sum(
                    wc[:, None] * P0[:, None] * P1 * phase)
                total += (2 * r + 1) * np.exp(t * lam_s) * np.conj(elem)
    tail = _tail_bound(R, t) + dropped
    return KernelResult(value=float(total.real),
                        imag_residual=float(abs(total.imag)),
                        tail_estimate=tail, policy_used=policy)


def so3_kernel_covering(g: SO3Element, t, policy=DEFAULT_POLICY) -> KernelResult:
    if not isinstance(g, SO3Element):
        raise InputError("so3_kernel expects an SO3Element")
    gt = su2_preimage(g)
    vals, imag, tail = su2_kernel_alphas([gt.alpha, -gt.alpha], t, policy)
    return KernelResult(value=float(0.5 * (vals[0] + vals[1])),
                        imag_residual=imag, tail_estimate=tail,
                        policy_used=policy)


def so3_kernel(g: SO3Element, t, policy=DEFAULT_POLICY, method="covering"):
    if method == "covering":
        return so3_kernel_covering(g, t, policy)
    if method == "direct":
        return so3_kernel_direct(g, t, policy)
    raise InputError(f"unknown method {method!r} (use 'covering' or 'direct')")
