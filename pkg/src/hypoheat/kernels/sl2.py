"""SL(2, R) heat kernel through the SU(1,1) model.

The element is mapped to the unit-disc picture by the fixed conjugation; the
spectral decomposition has three parts:

* principal series, two parities j = 0, 1/2: representations on the circle
  with basis psi_m(x) = x^{-m} (m in Z), parameter s = 1/2 + i v, and
  eigenvalues -((m+j)^2 + v^2 + 1/4); spectral density
  (v / 2 pi) tanh(pi v) dv for j = 0 and (v / 2 pi) coth(pi v) dv for j = 1/2.
* discrete series, half-integers |n| >= 1: representations on the disc with
  basis ~ z^m, eigenvalues -(|n| + 2 m |n| + m^2), density (2|n| - 1)/(4 pi);
  the n < 0 representation is the conjugate of the n > 0 one, so each pair
  contributes twice the real part.

Diagonal matrix elements are computed by circle quadrature (principal: on the
boundary; discrete: Cauchy coefficient extraction on a circle of radius rho
inside the disc, with the answer independent of rho).
"""

from __future__ import annotations

import numpy as np

from ..groups import SL2Element, inverse, pi_iso
from ..policy import AccuracyError, DEFAULT_POLICY, InputError, KernelResult
from .common import panel_gauss


def _boost_of(alpha):
    return 2.0 * np.arcsinh(np.sqrt(max(abs(alpha) ** 2 - 1.0, 0.0)))


def _model_params(g: SL2Element):
    """(alpha, beta) of the inverse of the disc-model image of g^{-1}."""
    G = pi_iso(inverse(g))
    return np.conj(G.alpha), -G.beta


def sl2_principal_elements(alpha, beta, j, v, m_max, n_nodes=None):
    """Diagonal elements <psi_m, X psi_m> for m = -m_max..m_max (complex).

    v may be an array; returns an array of shape (2 m_max + 1,) + v.shape.
    """
    v = np.asarray(v, dtype=float)
    if n_nodes is None:
        # the integrand's harmonics decay like exp(-k log coth(tau/2)):
        # the singularity of 1/(conj(beta) x + conj(alpha)) sits at radius
        # coth(tau/2), which approaches the circle for strong boosts
        tau = _boost_of(alpha)
        delta = np.log(1.0 / max(np.tanh(0.5 * tau), 1e-15)) if tau > 0 else 1.0
        need = 2 * m_max + int(np.ceil(23.0 / max(delta, 1e-15))) + 32
        n_nodes = max(64, need)
        if n_nodes > 16384:
            raise AccuracyError(
                "boost too strong for the principal-series quadrature "
                f"({n_nodes} nodes needed)")
    theta = np.arange(n_nodes) * (2.0 * np.pi / n_nodes)
    x = np.exp(1j * theta)
    d = np.conj(beta) * x + np.conj(alpha)
    absd = np.abs(d)
    w = (alpha * x + beta) / d  # on the unit circle
    u = x / w
    # |d|^{-2s} (d/|d|)^{2j} with s = 1/2 + i v
    s = 0.5 + 1j * v
    F = absd[:, None] ** (-2.0 * s[None, :]) if v.ndim else absd ** (-2.0 * s)
    if j:
        ph = (d / absd) ** int(round(2 * j))
        F = F * (ph[:, None] if v.ndim else ph)
    out = np.empty((2 * m_max + 1,) + v.shape, dtype=complex)
    up = np.ones_like(u)
    for m in range(m_max + 1):
        cm = np.mean(F * (up[:, None] if v.ndim else up), axis=0)
        out[m_max + m] = np.conj(cm)
        if m:
            cneg = np.mean(F * np.conj(up[:, None] if v.ndim else up), axis=0)
            out[m_max - m] = np.conj(cneg)
        up = up * u
    return out


def _disc_best_radius(aa, ab, n, m):
    """Radius minimizing the max-modulus bound of the Cauchy integrand
    |d|^{-2n} (|w|/rho)^m, with aa = |alpha|, ab = |beta|."""
    rhos = np.linspace(0.05, 0.95, 91)
    rhos = rhos[aa - rhos * ab > 1e-12]
    lb = (-2.0 * n * np.log(aa - rhos * ab)
          + m * (np.log(rhos * aa + ab) - np.log(aa + rhos * ab) - np.log(rhos)))
    return float(rhos[np.argmin(lb)])


def sl2_discrete_elements(alpha, beta, n, m_max, rho=None, n_nodes=256):
    """<psi^n_m, X psi^n_m> for m = 0..m_max at half-integer n >= 1.

    The answer is independent of the extraction radius rho; when rho is None
    each m uses the radius that keeps the integrand's max modulus minimal,
    which is what keeps the extraction stable at large n (where the fixed
    radius would let |d|^{-2n} blow up).
    """
    aa, ab = abs(alpha), abs(beta)
    out = np.empty(m_max + 1, dtype=complex)
    theta = np.arange(n_nodes) * (2.0 * np.pi / n_nodes)
    ez = np.exp(1j * theta)
    for m in range(m_max + 1):
        r = rho if rho is not None else _disc_best_radius(aa, ab, n, m)
        z = r * ez
        d = np.conj(beta) * z + np.conj(alpha)
        w = (alpha * z + beta) / d
        h = d ** (-int(round(2 * n))) * (w / z) ** m
        out[m] = np.conj(np.mean(h))
    return out


def sl2_kernel(g: SL2Element, t, policy=DEFAULT_POLICY) -> KernelResult:
    if not isinstance(g, SL2Element):
        raise InputError("sl2_kernel expects an SL2Element")
    if t <= 0:
        raise InputError("t must be positive")
    alpha, beta = _model_params(g)
    tol = policy.abs_tol
    m_max = int(np.ceil(np.sqrt(np.log(1.0 / tol) / t))) + 2
    v_max = np.sqrt(np.log(1.0 / tol) / t) + 2.0
    if policy.spectral_box is not None:
        v_max = float(policy.spectral_box)
    tau = _boost_of(alpha)
    width = min(1.0, np.pi / (2.0 + 2.0 * tau))
    vs, wv = panel_gauss(0.0, v_max, width)

    total = 0.0 + 0.0j
    # principal series, both parities
    for j in (0.0, 0.5):
        elems = sl2_principal_elements(alpha, beta, j, vs, m_max)
        ms = np.arange(-m_max, m_max + 1)
        decay = np.exp(-t * ((ms[:, None] + j) ** 2 + vs[None, :] ** 2 + 0.25))
        S = np.sum(decay * elems, axis=0)
        with np.errstate(over="ignore"):
            if j == 0.0:
                dens = vs / (2.0 * np.pi) * np.tanh(np.pi * vs)
            else:
                dens = np.where(vs > 1e-8,
                                vs / (2.0 * np.pi) / np.tanh(np.pi * np.clip(vs, 1e-8, None)),
                                1.0 / (2.0 * np.pi ** 2))
        total += np.sum(wv * dens * S)

    # discrete series: pairs +-n give twice the real part
    n = 1.0
    L = np.log(1.0 / tol) / t
    # largest m with n + 2 m n + m^2 < L, i.e. m < -n + sqrt(n^2 - n + L)
    m_cut = lambda n_: max(0, int(np.ceil(-n_ + np.sqrt(max(n_ * n_ - n_ + L, 0.0))))) + 2
    dropped = 0.0
    while True:
        weight = (2.0 * n - 1.0) / (4.0 * np.pi)
        bound = 2.0 * weight * np.exp(-t * n) / max(1.0 - np.exp(-2.0 * t * n), 1e-30)
        if bound < 0.1 * tol or n > 4000:
            dropped = bound
            break
        mm = m_cut(n)
        elems = sl2_discrete_elements(alpha, beta, n, mm)
        ms = np.arange(mm + 1)
        lam = -(n + 2.0 * ms * n + ms ** 2)
        total += 2.0 * weight * np.sum(np.exp(t * lam) * elems.real)
        n += 0.5
    return KernelResult(value=float(total.real),
                        imag_residual=float(abs(total.imag)),
                        tail_estimate=float(dropped + tol * 0.1),
                        policy_used=policy)
