"""SU(2) heat kernel by the finite-dimensional spectral series.

Level n carries the (n+1)-dimensional representation; the generator of the
series is diagonalized by the monomial-type basis with eigenvalues
k^2 - k n - n/2 (k = 0..n), and the diagonal matrix elements have the closed
form

    A^{n,k}(g) = sum_l C(k, k-l) C(n-k, l) conj(a)^{k-l} a^{n-k-l} (|a|^2-1)^l

with a = alpha the upper-left entry of g; the kernel only depends on alpha.
p_t(g) = sum_n (n+1) sum_k exp(t (k^2-kn-n/2)) conj(A^{n,k}(g)).
"""

from __future__ import annotations

import numpy as np

from ..groups import SU2Element
from ..policy import DEFAULT_POLICY, InputError, KernelResult
from .common import kahan_add


def su2_level_cut(t, abs_tol):
    """Smallest N with the geometric tail bound below abs_tol."""
    if t <= 0:
        raise InputError("t must be positive")
    n = 1
    while _tail_bound(n, t) > abs_tol and n < 20000:
        n += 1
    return n


def _tail_bound(N, t):
    # sum_{n > N} (n+1)^2 e^{-n t/2}  <=  (N+2)^2 e^{-(N+1)t/2} / (1-e^{-t/2})^3-ish;
    # a crude but safe-side geometric majorant is enough here
    r = np.exp(-0.5 * t)
    return (N + 2) ** 2 * r ** (N + 1) / (1.0 - r) ** 3


def su2_matrix_diag(n, alphas):
    """A^{n,k}(alpha) for k = 0..n as an (n+1, B) complex array."""
    alphas = np.atleast_1d(np.asarray(alphas, dtype=complex))
    B = alphas.shape[0]
    ac = np.conj(alphas)
    u = np.abs(alphas) ** 2 - 1.0
    # power tables up to n
    pa = np.empty((n + 1, B), dtype=complex)
    pc = np.empty((n + 1, B), dtype=complex)
    pu = np.empty((n // 2 + 1, B))
    pa[0] = 1.0
    pc[0] = 1.0
    pu[0] = 1.0
    for j in range(1, n + 1):
        pa[j] = pa[j - 1] * alphas
        pc[j] = pc[j - 1] * ac
    for j in range(1, n // 2 + 1):
        pu[j] = pu[j - 1] * u
    out = np.empty((n + 1, B), dtype=complex)
    for k in range(n // 2 + 1):
        acc = np.zeros(B, dtype=complex)
        c = 1.0  # C(k, k-l) C(n-k, l) built up iteratively over l
        for l in range(min(k, n - k) + 1):
            acc += c * pc[k - l] * pa[n - k - l] * pu[l]
            c = c * (k - l) * (n - k - l) / ((l + 1.0) * (l + 1.0))
        out[k] = acc
        out[n - k] = np.conj(acc)  # A^{n, n-k} = conj(A^{n,k})
    return out


def su2_kernel_alphas(alphas, t, policy=DEFAULT_POLICY):
    """Kernel values at a batch of alpha parameters.

    Returns (values, imag_residual, tail_estimate).  Terms are accumulated
    smallest-|eigenvalue| first with compensated summation so reruns are
    bitwise reproducible and roundoff stays near machine precision.
    """
    if t <= 0:
        raise InputError("t must be positive")
    alphas = np.atleast_1d(np.asarray(alphas, dtype=complex))
    N = su2_level_cut(t, policy.abs_tol)
    if policy.series_cut is not None:
        N = min(N, int(policy.series_cut))

    acc = np.zeros(alphas.shape[0], dtype=complex)
    comp = np.zeros_like(acc)
    # smallest terms first: levels from the top down, and within a level the
    # most negative eigenvalues (k near n/2) first
    for n in range(N, -1, -1):
        diag = su2_matrix_diag(n, alphas)
        lams = np.array([k * k - k * n - 0.5 * n for k in range(n + 1)])
        for k in np.argsort(lams, kind="stable"):
            term = (n + 1) * np.exp(t * lams[k]) * np.conj(diag[k])
            kahan_add(acc, comp, term)
    tail = _tail_bound(N, t)
    return acc.real, float(np.max(np.abs(acc.imag), initial=0.0)), tail


def su2_kernel(g: SU2Element, t, policy=DEFAULT_POLICY) -> KernelResult:
    if not isinstance(g, SU2Element):
        raise InputError("su2_kernel expects an SU2Element")
    vals, imag, tail = su2_kernel_alphas([g.alpha], t, policy)
    return KernelResult(value=float(vals[0]), imag_residual=imag,
                        tail_estimate=tail, policy_used=policy)
