"""SE(2) heat kernel via the Mathieu-function eigenbasis.

For each frequency lam > 0 the representation acts on L^2(S^1) by
(X(g) f)(th) = exp(i lam (x1 cos th - x2 sin th)) f(th + angle); the image of
the sub-Laplacian is d^2/dth^2 - lam^2 cos^2 th, whose periodic eigenbasis
is the Mathieu family at q = lam^2 / 4 with eigenvalues
e = -lam^2/2 - a_n(q) (ce) and -lam^2/2 - b_n(q) (se).  Then

    p_t(g) = Int_0^inf  lam  sum_n e^{t e_n} <f_n, X(g) f_n>  dlam

(the Mathieu functions are unit-norm in L^2([0, 2pi), dth); the measure
lam dlam makes p_t a delta at t -> 0 for the Haar normalization
d(angle) dx / (4 pi^2)).
"""

from __future__ import annotations

import threading

import numpy as np

from ..groups import SE2Element
from ..policy import DEFAULT_POLICY, InputError, KernelResult
from ..specfun import MathieuBasis, mathieu_spectrum
from .common import panel_gauss

_CACHE_LOCK = threading.Lock()
_BASIS_CACHE = {}
_CACHE_MAX = 4096


def se2_basis(lam, n_max, K=None) -> MathieuBasis:
    """Cached Mathieu basis at q = lam^2/4 (shared across grid evaluations)."""
    key = (float(lam), int(n_max), K)
    with _CACHE_LOCK:
        hit = _BASIS_CACHE.get(key)
    if hit is not None:
        return hit
    basis = mathieu_spectrum(0.25 * lam * lam, n_max, K=K)
    with _CACHE_LOCK:
        if len(_BASIS_CACHE) >= _CACHE_MAX:
            _BASIS_CACHE.clear()
        _BASIS_CACHE[key] = basis
    return basis


def _lambda_max(t, tol):
    """Truncation of the frequency integral: the slowest eigenvalue behaves
    like -lam for large lam (harmonic wells of cos^2), so the tail is
    essentially lam exp(-0.9 lam t) times the level count."""
    lam = max(8.0 / np.sqrt(t), 4.0)
    while (lam * lam + lam / t + 4.0) * np.exp(-0.9 * lam * t) > 0.1 * tol:
        lam += 1.0
        if lam > 4000.0:
            break
    return lam


def _n_cut(t, tol):
    # a_n >= n^2 - 2q gives e_n <= -n^2 uniformly in lam
    return int(np.ceil(np.sqrt(np.log(1.0 / tol) / t))) + 2


def _theta_count(lam, r, n_harm):
    # product of two Mathieu series (harmonics <= n_harm) and a plane wave of
    # Bessel bandwidth ~ lam r
    n = 2 * n_harm + int(np.ceil(lam * r)) + 33
    return n + (n % 2)


def _weighted_product(basis, t, lam, angle, theta):
    """S(th) = sum_n e^{t e_n} f_n(th + angle) f_n(th) over both classes."""
    S = np.zeros_like(theta)
    for cls in ("ce", "se"):
        start = 0 if cls == "ce" else 1
        for n in range(start, basis.n_max + 1):
            e = basis.entry(cls, n)
            wt = np.exp(t * (-0.5 * lam * lam - e.eigenvalue))
            if wt < 1e-18:
                continue
            trig = np.cos if cls == "ce" else np.sin
            f0 = trig(np.outer(theta, e.harmonics)) @ e.coeffs
            f1 = trig(np.outer(theta + angle, e.harmonics)) @ e.coeffs
            S += wt * f0 * f1
    return S


def se2_lambda_term(lam, g, t, policy=DEFAULT_POLICY, K=None):
    """The integrand sum_n e^{t e_n} <f_n, X(g) f_n> at one frequency."""
    basis = se2_basis(lam, _n_cut(t, policy.abs_tol), K=K)
    r = np.hypot(g.x1, g.x2)
    kmax = int(np.max(basis.entry("ce", 0).harmonics))
    ntheta = _theta_count(lam, r, kmax)
    theta = np.arange(ntheta) * (2.0 * np.pi / ntheta)
    S = _weighted_product(basis, t, lam, g.angle, theta)
    phase = np.exp(1j * lam * (g.x1 * np.cos(theta) - g.x2 * np.sin(theta)))
    return (2.0 * np.pi / ntheta) * np.sum(phase * S)


def _lambda_nodes(t, r, policy):
    lam_max = _lambda_max(t, policy.abs_tol)
    if policy.spectral_box is not None:
        lam_max = float(policy.spectral_box)
    width = min(2.0, 6.0 / max(1.0, r))
    return panel_gauss(1e-9, lam_max, width, nodes_per_panel=12), lam_max


def se2_kernel(g: SE2Element, t, policy=DEFAULT_POLICY) -> KernelResult:
    if not isinstance(g, SE2Element):
        raise InputError("se2_kernel expects an SE2Element")
    if t <= 0:
        raise InputError("t must be positive")
    r = np.hypot(g.x1, g.x2)
    (lams, wl), lam_max = _lambda_nodes(t, r, policy)
    total = 0.0 + 0.0j
    for lam, w in zip(lams, wl):
        total += w * lam * se2_lambda_term(lam, g, t, policy)
    tail = (lam_max ** 2 + lam_max / t + 4.0) * np.exp(-0.9 * lam_max * t)
    return KernelResult(value=float(total.real),
                        imag_residual=float(abs(total.imag)),
                        tail_estimate=float(tail), policy_used=policy)


def se2_kernel_points(elements, t, policy=DEFAULT_POLICY):
    """Batch evaluation; elements sharing an angle share the Mathieu work.

    Returns (values, imag_residual, tail_estimate).
    """
    if t <= 0:
        raise InputError("t must be positive")
    els = list(elements)
    x = np.array([[g.x1, g.x2] for g in els])
    groups = {}
    for i, g in enumerate(els):
        groups.setdefault(g.angle, []).append(i)
    # the plane-wave factor only sees (x1, x2): share it across angle groups
    xy_unique, xy_inv = np.unique(x, axis=0, return_inverse=True)
    rmax = float(np.max(np.hypot(x[:, 0], x[:, 1]), initial=0.0))
    (lams, wl), lam_max = _lambda_nodes(t, rmax, policy)
    n_cut = _n_cut(t, policy.abs_tol)
    acc = np.zeros(len(els), dtype=complex)
    for lam, w in zip(lams, wl):
        basis = se2_basis(lam, n_cut)
        kmax = int(np.max(basis.entry("ce", 0).harmonics))
        ntheta = _theta_count(lam, rmax, kmax)
        theta = np.arange(ntheta) * (2.0 * np.pi / ntheta)
        ct, st = np.cos(theta), np.sin(theta)
        phase = np.exp(1j * lam * (xy_unique[:, 0][:, None] * ct[None, :]
                                   - xy_unique[:, 1][:, None] * st[None, :]))
        for angle, idx in groups.items():
            S = _weighted_product(basis, t, lam, angle, theta)
            acc[idx] += w * lam * (2.0 * np.pi / ntheta) * (phase @ S)[xy_inv[idx]]
    tail = (lam_max ** 2 + lam_max / t + 4.0) * np.exp(-0.9 * lam_max * t)
    return acc.real, float(np.max(np.abs(acc.imag), initial=0.0)), float(tail)


def se2_box_mass(t, L, policy=DEFAULT_POLICY):
    """Integral of p_t over angle x [-L, L]^2 against d(angle) dx / (4 pi^2).

    The angle integral keeps only the constant Fourier mode of each even-class
    Mathieu function and the x integral of the plane wave is a product of sinc
    factors, so both are exact; only the frequency integral is numerical.
    A pointwise x-grid would need to resolve oscillations at frequency lam,
    which is why the mass check uses this reduction instead.
    """
    if t <= 0 or L <= 0:
        raise InputError("t and L must be positive")
    lam_max = _lambda_max(t, policy.abs_tol)
    width = min(2.0, 3.0 / L)
    lams, wl = panel_gauss(1e-9, lam_max, width, nodes_per_panel=12)
    n_cut = _n_cut(t, policy.abs_tol)
    total = 0.0
    for lam, w in zip(lams, wl):
        basis = se2_basis(lam, n_cut)
        kmax = int(np.max(basis.entry("ce", 0).harmonics))
        ntheta = _theta_count(lam, L * np.sqrt(2.0), kmax)
        theta = np.arange(ntheta) * (2.0 * np.pi / ntheta)
        box = (2.0 * L * np.sinc(lam * L * np.cos(theta) / np.pi)
               * 2.0 * L * np.sinc(lam * L * np.sin(theta) / np.pi))
        s = 0.0
        for n in range(0, basis.n_max + 1, 2):  # only even ce have a DC mode
            e = basis.entry("ce", n)
            wt = np.exp(t * (-0.5 * lam * lam - e.eigenvalue))
            if wt < 1e-18:
                continue
            f = np.cos(np.outer(theta, e.harmonics)) @ e.coeffs
            dc = e.coeffs[0]  # harmonics[0] == 0 for the even ce class
            s += wt * dc * (2.0 * np.pi / ntheta) * np.sum(box * f)
        total += w * lam * (2.0 * np.pi) * s / (4.0 * np.pi ** 2)
    return float(total)
