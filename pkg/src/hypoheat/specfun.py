"""Special functions for the kernel formulas.

* Mathieu characteristic values / eigenfunctions via symmetric tridiagonal
  truncations of the four Fourier parity classes, with a continued-fraction
  second method for cross-checks.
* Associated Legendre values in the convention
  P^s_r(x) = (1-x^2)^{s/2}/(r! 2^r) d^{r+s}(x^2-1)^r / dx^{r+s}
  (no Condon-Shortley phase; negative orders by the same formula).
* Mehler kernel of d^2/dth^2 - lambda^2 th^2.
* Gamma-ratio coefficients sqrt(Gamma(2n+m)/(Gamma(2n) Gamma(m+1))).

Norm convention for Mathieu functions: unit norm in L^2([0, 2pi), dtheta)
-- NOT the classical "integral of ce^2 = pi" convention.  Signs are fixed by
ce_n(0) > 0 and se_n'(0) > 0.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import eigh_tridiagonal
from scipy.optimize import brentq
from scipy.special import gammaln

from .policy import AccuracyError, InputError

# The four Fourier parity classes of 2pi-periodic Mathieu eigenfunctions.
# Each entry: (trig, harmonic offset, harmonic step).
#   ce-even: cos(0), cos 2t, cos 4t, ...  -> a_{2n}
#   ce-odd : cos t, cos 3t, ...           -> a_{2n+1}
#   se-even: sin 2t, sin 4t, ...          -> b_{2n+2}
#   se-odd : sin t, sin 3t, ...           -> b_{2n+1}


def _class_matrix(cls, parity, q, size):
    """Diagonal and off-diagonal of the symmetric tridiagonal truncation."""
    if cls == "ce" and parity == "even":
        harm = 2 * np.arange(size)
        diag = harm.astype(float) ** 2
        off = np.full(size - 1, q)
        off[0] = np.sqrt(2.0) * q  # symmetrization of the A0 row
    elif cls == "ce" and parity == "odd":
        harm = 2 * np.arange(size) + 1
        diag = harm.astype(float) ** 2
        diag[0] += q
        off = np.full(size - 1, q)
    elif cls == "se" and parity == "even":
        harm = 2 * np.arange(size) + 2
        diag = harm.astype(float) ** 2
        off = np.full(size - 1, q)
    elif cls == "se" and parity == "odd":
        harm = 2 * np.arange(size) + 1
        diag = harm.astype(float) ** 2
        diag[0] -= q
        off = np.full(size - 1, q)
    else:
        raise InputError(f"unknown Mathieu class {cls}/{parity}")
    return harm, diag, off


@dataclass(frozen=True)
class MathieuEntry:
    order: int
    cls: str            # "ce" | "se"
    eigenvalue: float
    harmonics: np.ndarray
    coeffs: np.ndarray  # over cos(k th) / sin(k th), k in harmonics


@dataclass(frozen=True)
class MathieuBasis:
    q: float
    n_max: int
    K: int
    entries: dict = field(repr=False)  # (cls, order) -> MathieuEntry

    def entry(self, cls, n):
        try:
            return self.entries[(cls, n)]
        except KeyError:
            raise InputError(f"order {cls}_{n} not in basis (n_max={self.n_max})")

    def eigenvalue(self, cls, n):
        return self.entry(cls, n).eigenvalue


def _solve_class(cls, parity, q, size, n_keep):
    harm, diag, off = _class_matrix(cls, parity, q, size)
    if n_keep <= 0:
        return []
    vals, vecs = eigh_tridiagonal(diag, off, select="i",
                                  select_range=(0, min(n_keep, size) - 1))
    out = []
    for j in range(len(vals)):
        v = vecs[:, j] / np.sqrt(np.pi)  # unit norm in L^2([0,2pi), dth)
        if cls == "ce" and parity == "even":
            v = v.copy()
            v[0] /= np.sqrt(2.0)  # undo the A0 symmetrization
            sign = np.sign(np.sum(v))             # ce_n(0) > 0
        elif cls == "ce":
            sign = np.sign(np.sum(v))
        else:
            sign = np.sign(np.sum(harm * v))      # se_n'(0) > 0
        if sign == 0:
            sign = 1.0
        out.append((vals[j], harm, sign * v))
    return out


def mathieu_spectrum(q, n_max, K=None):
    """Eigenpairs of psi'' + (a - 2q cos 2x) psi = 0, 2pi-periodic.

    Returns a MathieuBasis holding ce_0..ce_{n_max} and se_1..se_{n_max}.
    K is the per-class tridiagonal truncation (number of Fourier modes kept).
    """
    if q < 0:
        raise InputError("q must be nonnegative")
    if n_max < 0:
        raise InputError("n_max must be nonnegative")
    K_auto = max(2 * n_max + 16, int(np.ceil(2.0 * np.sqrt(max(q, 0.0)))) + 24)
    auto = K is None
    if auto:
        K = K_auto
    if K < 2 * n_max + 16:
        raise AccuracyError(
            f"K={K} too small for n_max={n_max}; need at least {2 * n_max + 16}",
            tail_estimate=None)

    def all_classes(size):
        ne_even = n_max // 2 + 1            # ce_0, ce_2, ...
        ne_odd = (n_max + 1) // 2           # ce_1, ce_3, ...
        return {
            ("ce", "even"): _solve_class("ce", "even", q, size, ne_even),
            ("ce", "odd"): _solve_class("ce", "odd", q, size, ne_odd),
            ("se", "even"): _solve_class("se", "even", q, size, n_max // 2),
            ("se", "odd"): _solve_class("se", "odd", q, size, (n_max + 1) // 2),
        }

    # with an explicit K one failed convergence check is an error; the
    # automatic choice enlarges the truncation a few times before giving up
    # allowance for eigensolver roundoff, which scales with the matrix norm
    # (top diagonal entry ~ (2K)^2) and can exceed the plain 1e-12 criterion
    # at large q even though the truncation itself has converged
    jitter = 64.0 * np.finfo(float).eps * ((2.0 * (K + 8)) ** 2 + 2.0 * q)
    for attempt in range(4 if auto else 1):
        sol = all_classes(K)
        check = all_classes(K + 8)
        worst = 0.0
        for key in sol:
            for (a1, _, _), (a2, _, _) in zip(sol[key], check[key]):
                worst = max(worst, (abs(a1 - a2) - jitter) / (1.0 + abs(a1)))
        if worst <= 1e-12:
            break
        if attempt == (3 if auto else 0):
            raise AccuracyError(
                f"Mathieu eigenvalues not converged at K={K}; try K={K + 16}",
                tail_estimate=worst)
        K += 16

    entries = {}
    for n in range(n_max + 1):
        parity = "even" if n % 2 == 0 else "odd"
        idx = n // 2 if parity == "even" else (n - 1) // 2
        a, harm, v = check[("ce", parity)][idx]
        entries[("ce", n)] = MathieuEntry(n, "ce", float(a), harm, v)
    for n in range(1, n_max + 1):
        parity = "even" if n % 2 == 0 else "odd"
        idx = (n - 2) // 2 if parity == "even" else (n - 1) // 2
        b, harm, v = check[("se", parity)][idx]
        entries[("se", n)] = MathieuEntry(n, "se", float(b), harm, v)
    return MathieuBasis(q=float(q), n_max=int(n_max), K=int(K + 8), entries=entries)


def mathieu_eval(basis, n, cls, theta):
    """Pointwise ce_n(theta) or se_n(theta) from the Fourier expansion."""
    e = basis.entry(cls, n)
    theta = np.asarray(theta, dtype=float)
    arg = np.multiply.outer(theta, e.harmonics)
    trig = np.cos(arg) if cls == "ce" else np.sin(arg)
    return trig @ e.coeffs


def mathieu_char_cf(q, n, cls, a_guess=None, depth=120):
    """Characteristic value a_n(q) / b_n(q) by the continued-fraction method.

    Independent of the tridiagonal route: the eigenvalue condition for the
    semi-infinite recurrence is written as a continued fraction
        f(a) = (d_0 - a) - e_0^2 / ((d_1 - a) - e_1^2 / (...))
    and the zero nearest the tridiagonal estimate is polished with brentq.
    """
    parity = "even" if n % 2 == 0 else "odd"
    if cls == "se" and n < 1:
        raise InputError("se orders start at 1")
    size = max(depth, 40)
    harm, diag, off = _class_matrix(cls, parity, q, size)
    idx = {"ce": n // 2 if parity == "even" else (n - 1) // 2,
           "se": (n - 2) // 2 if parity == "even" else (n - 1) // 2}[cls]
    if a_guess is None:
        vals = eigh_tridiagonal(diag, off, select="i",
                                select_range=(idx, idx), eigvals_only=True)
        a_guess = float(vals[0])

    def f(a):
        # Anchor the matching condition at the dominant harmonic: an infinite
        # continued fraction from the tail down to idx+1 plus a finite one
        # from the top row up to idx-1.  Anchoring keeps the target root away
        # from the poles (submatrix eigenvalues interlace the full spectrum,
        # so a tail-only fraction puts a pole arbitrarily close to the root
        # for higher orders).
        acc = diag[-1] - a
        for i in range(size - 2, idx, -1):
            acc = (diag[i] - a) - off[i] ** 2 / acc
        tail = off[idx] ** 2 / acc if idx < size - 1 else 0.0
        head = 0.0
        if idx > 0:
            h = diag[0] - a
            for i in range(1, idx):
                h = (diag[i] - a) - off[i - 1] ** 2 / h
            head = off[idx - 1] ** 2 / h
        return (diag[idx] - a) - tail - head

    delta = 1e-6 * (1.0 + abs(a_guess))
    lo, hi = a_guess - delta, a_guess + delta
    for _ in range(40):
        if np.sign(f(lo)) != np.sign(f(hi)):
            return brentq(f, lo, hi, xtol=1e-14, rtol=1e-15)
        lo, hi = a_guess - (a_guess - lo) * 2, a_guess + (hi - a_guess) * 2
    raise AccuracyError("continued-fraction root not bracketed")


# ---------------------------------------------------------------------------
# associated Legendre

def _legendre_normalized(r, m, x):
    """Orthonormal P-bar_r^m (m >= 0): integral over [-1,1] of square = 1.

    Stable scheme: log-space seed at l = m, then upward three-term recurrence.
    """
    x = np.asarray(x, dtype=float)
    if m > r:
        return np.zeros_like(x)
    sin2 = np.clip(1.0 - x * x, 0.0, None)
    # seed: log of sqrt((2m+1)/2 * prod (2k-1)/(2k)) * (1-x^2)^(m/2)
    log_amp = 0.5 * (np.log((2 * m + 1) / 2.0)
                     + np.sum(np.log(np.arange(1, m + 1) * 2.0 - 1.0)
                              - np.log(np.arange(1, m + 1) * 2.0)))
    if m == 0:
        pmm = np.full_like(x, np.exp(log_amp))
    else:
        with np.errstate(divide="ignore"):
            log_sin = 0.5 * m * np.where(sin2 > 0, np.log(np.where(sin2 > 0, sin2, 1.0)), -np.inf)
        pmm = np.where(sin2 > 0, np.exp(log_amp + log_sin), 0.0)
    if r == m:
        return pmm
    p_prev = pmm
    p_curr = x * np.sqrt(2.0 * m + 3.0) * pmm
    for l in range(m + 2, r + 1):
        a = np.sqrt((4.0 * l * l - 1.0) / (l * l - m * m))
        b = np.sqrt(((l - 1.0) ** 2 - m * m) / (4.0 * (l - 1.0) ** 2 - 1.0))
        p_curr, p_prev = a * (x * p_curr - b * p_prev), p_curr
    return p_curr if r > m + 1 else p_curr


def legendre_assoc(r, s, x):
    """P^s_r(x) in the no-phase convention; |s| > r returns 0."""
    x = np.asarray(x, dtype=float)
    scalar = x.ndim == 0
    x = np.atleast_1d(x)
    if np.any(np.abs(x) > 1.0 + 1e-14):
        raise InputError("argument must lie in [-1, 1]")
    x = np.clip(x, -1.0, 1.0)
    if abs(s) > r:
        out = np.zeros_like(x)
        return float(out[0]) if scalar else out
    m = abs(s)
    pbar = _legendre_normalized(r, m, x)
    # P^m = P-bar / sqrt((2r+1)/2 * (r-m)!/(r+m)!)
    log_c = 0.5 * (np.log((2 * r + 1) / 2.0)
                   + gammaln(r - m + 1) - gammaln(r + m + 1))
    val = pbar / np.exp(log_c)
    if s < 0:
        # P^{-m} = (-1)^m (r-m)!/(r+m)! P^m
        val = val * ((-1.0) ** m) * np.exp(gammaln(r - m + 1) - gammaln(r + m + 1))
    return float(val[0]) if scalar else val


def legendre_normalized(r, m, x):
    """Unit-L^2([-1,1]) associated Legendre of nonnegative order (for bases)."""
    if not 0 <= m <= r:
        raise InputError("need 0 <= m <= r")
    return _legendre_normalized(r, m, np.asarray(x, dtype=float))


# ---------------------------------------------------------------------------
# Mehler kernel

def mehler_kernel(lam, t, theta, theta_bar):
    """Heat kernel at time t of d^2/dth^2 - lam^2 th^2."""
    if t <= 0:
        raise InputError("t must be positive")
    theta = np.asarray(theta, dtype=float)
    theta_bar = np.asarray(theta_bar, dtype=float)
    if abs(lam) * t < 1e-8:
        return (4.0 * np.pi * t) ** -0.5 * np.exp(-(theta - theta_bar) ** 2 / (4.0 * t))
    lam = abs(lam)  # formula is even in lam
    sh = np.sinh(2.0 * lam * t)
    ch = np.cosh(2.0 * lam * t)
    return np.sqrt(lam / (2.0 * np.pi * sh)) * np.exp(
        -0.5 * lam * ch / sh * (theta ** 2 + theta_bar ** 2)
        + lam * theta * theta_bar / sh)


# ---------------------------------------------------------------------------
# Gamma-ratio coefficients

def sl2_basis_coeff(n, m):
    """sqrt(Gamma(2|n|+m) / (Gamma(2|n|) Gamma(m+1))), 2n integer, |n| >= 1."""
    if m < 0 or int(m) != m:
        raise InputError("m must be a nonnegative integer")
    if abs(2 * n - round(2 * n)) > 1e-12 or abs(n) < 1:
        raise InputError("n must be a half-integer with |n| >= 1")
    tn = 2.0 * abs(n)
    logval = 0.5 * (gammaln(tn + m) - gammaln(tn) - gammaln(m + 1.0))
    if logval > 700.0:
        raise AccuracyError("Gamma-ratio coefficient overflows double precision")
    return float(np.exp(logval))
