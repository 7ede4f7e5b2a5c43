"""Independent oracles and property residuals for the kernel evaluators.

Everything here deliberately uses a different computational route from the
kernels package: generators are built as ladder matrices and exponentiated,
the H2 kernel is cross-checked against an explicit finite-difference solver,
and the semigroup/mass identities are evaluated by Haar quadrature.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import expm
from scipy.special import gammaln

from . import accel
from .groups import (H2Element, SE2Element, SU2Element, haar_quadrature,
                     inverse, multiply, su2_preimage)
from .kernels import (h2_kernel, h2_kernel_points, kernel, se2_kernel_points,
                      se2_lambda_term, su2_kernel_alphas)
from .policy import AccuracyError, DEFAULT_POLICY, InputError


# ---------------------------------------------------------------------------
# truncated generators (ladder matrices)

def generator_ladders(tag, dual, K=None):
    """Matrices of the horizontal generators d X_i in the canonical basis.

    tag / dual:
      su2            dual = n (level); exact (n+1)-dimensional matrices
      so3            dual = r; realized on the covering level n = 2r
      sl2_discrete   dual = half-integer n >= 1; monomial basis m = 0..K-1
      sl2_continuous dual = (j, v) with j in {0, 1/2}; basis m = -K..K
      se2            dual = lam > 0; Fourier modes k = -K..K
    """
    if tag == "su2" or tag == "so3":
        n = int(2 * dual) if tag == "so3" else int(dual)
        d1 = np.zeros((n + 1, n + 1), dtype=complex)
        d2 = np.zeros((n + 1, n + 1), dtype=complex)
        for k in range(n + 1):
            if k > 0:
                d1[k - 1, k] = 0.5j * k
                d2[k - 1, k] = 0.5 * k
            if k < n:
                d1[k + 1, k] = 0.5j * (n - k)
                d2[k + 1, k] = -0.5 * (n - k)
        return d1, d2
    if tag == "sl2_discrete":
        if K is None or K < 4:
            raise InputError("need a basis cut K >= 4")
        n = float(dual)
        if abs(2 * n - round(2 * n)) > 1e-12 or n < 1:
            raise InputError("discrete-series parameter must be a half-integer >= 1")
        d1 = np.zeros((K, K), dtype=complex)
        d2 = np.zeros((K, K), dtype=complex)
        for m in range(K):
            a = 0.5 * np.sqrt((2 * n + m) * (m + 1.0))
            b = 0.5 * np.sqrt((2 * n + m - 1.0) * m)
            if m + 1 < K:
                d1[m + 1, m] = a
                d2[m + 1, m] = -1j * a
            if m > 0:
                d1[m - 1, m] = -b
                d2[m - 1, m] = -1j * b
        return d1, d2
    if tag == "sl2_continuous":
        if K is None or K < 4:
            raise InputError("need a basis cut K >= 4")
        j, v = dual
        if j not in (0.0, 0.5):
            raise InputError("parity j must be 0 or 1/2")
        s = 0.5 + 1j * v
        ms = np.arange(-K, K + 1)
        size = ms.size
        d1 = np.zeros((size, size), dtype=complex)
        d2 = np.zeros((size, size), dtype=complex)
        for i, m in enumerate(ms):
            lo = 0.5 * (s - m - j)   # coefficient of psi_{m-1}
            hi = 0.5 * (s + m + j)   # coefficient of psi_{m+1}
            if i > 0:
                d1[i - 1, i] = lo
                d2[i - 1, i] = 1j * lo
            if i + 1 < size:
                d1[i + 1, i] = hi
                d2[i + 1, i] = -1j * hi
        return d1, d2
    if tag == "se2":
        if K is None or K < 4:
            raise InputError("need a basis cut K >= 4")
        lam = float(dual)
        ks = np.arange(-K, K + 1)
        d0 = np.diag(1j * ks.astype(complex))
        d1 = np.zeros((ks.size, ks.size), dtype=complex)
        for i in range(ks.size):
            if i > 0:
                d1[i - 1, i] = 0.5j * lam
            if i + 1 < ks.size:
                d1[i + 1, i] = 0.5j * lam
        return d0, d1
    raise InputError(f"unsupported generator tag {tag!r}")


def truncated_generator(tag, dual, K=None):
    """Matrix of the image of the sub-Laplacian, sum_i (d X_i)^2."""
    mats = generator_ladders(tag, dual, K)
    return sum(m @ m for m in mats)


def su2_rep_matrix(n, g: SU2Element):
    """Representation matrix at level n by exponentiating the ladders.

    Uses the axis-angle decomposition of g and the vertical generator
    dK = diag(i (k - n/2)) = [dX1, dX2]; independent of the closed-form
    matrix-element series.

    The ladders are rescaled to the orthonormal basis e_k = sqrt(C(n,k)) x^k
    (conjugation by diag(sqrt(C(n,k)))), which makes them skew-hermitian and
    the returned matrix unitary; the diagonal entries are unchanged.
    """
    d1, d2 = generator_ladders("su2", n)
    logc = gammaln(n + 1) - gammaln(np.arange(n + 1) + 1) - gammaln(n - np.arange(n + 1) + 1)
    scale = np.exp(0.5 * logc)
    d1 = d1 * (scale[None, :] / scale[:, None])
    d2 = d2 * (scale[None, :] / scale[:, None])
    dk = np.diag(1j * (np.arange(n + 1) - 0.5 * n))
    w = np.clip(g.alpha.real, -1.0, 1.0)
    u = np.array([g.beta.imag, -g.beta.real, g.alpha.imag])
    un = np.linalg.norm(u)
    theta = 2.0 * np.arctan2(un, w)
    if un < 1e-300:
        v = np.zeros(3)
    else:
        v = theta * u / un
    return expm(v[0] * d1 + v[1] * d2 + v[2] * dk)


def oracle_kernel_term(tag, dual, g, t, K=None):
    """Tr(exp(t Delta_K) X_K(g)) in the truncated basis.

    Supported: su2 (exact), so3 (via the covering), se2 (representation
    matrix by Fourier quadrature).  The trace is checked for convergence
    under K -> K + 8 where a cut is involved.
    """
    if t <= 0:
        raise InputError("t must be positive")
    if tag == "su2":
        n = int(dual)
        delta = truncated_generator("su2", n)
        return complex(np.trace(expm(t * delta) @ su2_rep_matrix(n, g)))
    if tag == "so3":
        r = int(dual)
        gt = su2_preimage(g)
        delta = truncated_generator("su2", 2 * r)
        return complex(np.trace(expm(t * delta) @ su2_rep_matrix(2 * r, gt)))
    if tag == "se2":
        if K is None:
            K = 64

        def term(Kc):
            lam = float(dual)
            delta = truncated_generator("se2", lam, Kc)
            ks = np.arange(-Kc, Kc + 1)
            # X[k', k] = e^{i k angle} (1/2pi) Int e^{i(k-k') th} e^{i lam(x1 cos - x2 sin)} dth
            nth = 8 * Kc
            th = np.arange(nth) * (2.0 * np.pi / nth)
            wave = np.exp(1j * lam * (g.x1 * np.cos(th) - g.x2 * np.sin(th)))
            fr = np.fft.fft(wave) / nth  # fr[j] = (1/2pi) Int e^{-i j th} wave
            X = np.empty((ks.size, ks.size), dtype=complex)
            for a, kp in enumerate(ks):
                for b, k in enumerate(ks):
                    X[a, b] = np.exp(1j * k * g.angle) * fr[(kp - k) % nth]
            return complex(np.trace(expm(t * delta) @ X))

        v1, v2 = term(K), term(K + 8)
        if abs(v1 - v2) > 1e-10 * (1.0 + abs(v1)):
            raise AccuracyError(f"oracle trace not converged at K={K}",
                                tail_estimate=abs(v1 - v2))
        return v1
    raise InputError(f"unsupported oracle tag {tag!r}")


# ---------------------------------------------------------------------------
# H2 finite-difference oracle

def h2_pde_oracle(box=3.0, n_grid=81, t=0.5, dt=None, sigma=None, backend=None):
    """Explicit-Euler solution of d phi/dt = (L1^2 + L2^2) phi from a narrow
    Gaussian; returns (xs, phi) with phi indexed [ix, iy, iz] on the cube
    [-box, box]^3.  Low-accuracy by design (catches factor/sign errors)."""
    xs = np.linspace(-box, box, n_grid)
    h = xs[1] - xs[0]
    if sigma is None:
        sigma = 1.5 * h
    if dt is None:
        # stability: dt * max row sum of the stencil < 1
        coef = 2.0 / h ** 2 * (2.0 + 0.5 * box ** 2) + 2.0 * box / h ** 2
        dt = 0.5 / coef
    steps = int(np.ceil(t / dt))
    dt = t / steps
    X, Y, Z = np.meshgrid(xs, xs, xs, indexing="ij")
    phi = np.exp(-(X * X + Y * Y + Z * Z) / (2.0 * sigma ** 2))
    phi /= np.sum(phi) * h ** 3
    peak = np.max(phi)
    for _ in range(steps):
        phi = accel.pde_step(phi, xs, xs, dt, h, h, h, backend=backend)
        m = np.max(np.abs(phi))
        if not np.isfinite(m) or m > 10.0 * peak:
            raise AccuracyError("PDE oracle unstable: reduce the time step (CFL)")
    return xs, phi


def h2_oracle_compare(points, t=0.5, backend=None, policy=DEFAULT_POLICY,
                      n_grid=81, box=3.0):
    """Max relative difference between the PDE oracle and the kernel.

    The PDE starts from a narrow Gaussian, so its solution is the group
    convolution initial * p_t rather than p_t itself; the reference side is
    computed as the same convolution of the exact kernel (Gauss-Legendre over
    the support ball), and points are snapped to grid nodes so that only the
    finite-difference error remains.
    """
    h = 2.0 * box / (n_grid - 1)
    sigma = 1.5 * h
    xs, phi = h2_pde_oracle(box=box, n_grid=n_grid, t=t, sigma=sigma,
                            backend=backend)
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    idx = np.rint((pts + box) / h).astype(int)
    snapped = -box + h * idx

    # quadrature for (phi_0 * p_t)(g) = Int phi_0(h) p_t(h^{-1} g) dh
    u, wu = np.polynomial.legendre.leggauss(12)
    half = 4.5 * sigma
    u, wu = half * u, half * wu
    U = np.stack(np.meshgrid(u, u, u, indexing="ij"), axis=-1).reshape(-1, 3)
    W = (wu[:, None, None] * wu[None, :, None] * wu[None, None, :]).ravel()
    dens = np.exp(-np.sum(U * U, axis=1) / (2.0 * sigma ** 2))
    dens /= (2.0 * np.pi * sigma ** 2) ** 1.5
    worst = 0.0
    for (gx, gy, gz), (ix, iy, iz) in zip(snapped, idx):
        # h^{-1} g for the Heisenberg product (x, y, z)(x', y', z') =
        # (x+x', y+y', z+z' + (x y' - y x')/2)
        hx, hy, hz = U[:, 0], U[:, 1], U[:, 2]
        px = gx - hx
        py = gy - hy
        pz = gz - hz - 0.5 * (hx * py - hy * px)
        vals, _ = h2_kernel_points(np.stack([px, py, pz], axis=1), t, policy)
        ref = float(np.dot(W * dens, vals))
        worst = max(worst, abs(phi[ix, iy, iz] - ref) / abs(ref))
    return worst


# ---------------------------------------------------------------------------
# residual reports

@dataclass(frozen=True)
class ResidualReport:
    name: str
    value: float
    tolerance: float
    context: dict = field(default_factory=dict)

    @property
    def passed(self):
        return self.value <= self.tolerance

    def to_json(self):
        return {"name": self.name, "value": self.value,
                "tolerance": self.tolerance, "passed": bool(self.passed),
                "context": self.context}


def _batch_values(tag, elements, t, policy):
    if tag == "h2":
        pts = np.array([[g.x, g.y, g.z] for g in elements])
        return h2_kernel_points(pts, t, policy)[0]
    if tag == "su2":
        return su2_kernel_alphas([g.alpha for g in elements], t, policy)[0]
    if tag == "so3":
        pre = [su2_preimage(g) for g in elements]
        a = np.array([g.alpha for g in pre])
        va = su2_kernel_alphas(a, t, policy)[0]
        vb = su2_kernel_alphas(-a, t, policy)[0]
        return 0.5 * (va + vb)
    if tag == "se2":
        return se2_kernel_points(elements, t, policy)[0]
    return np.array([kernel(tag, g, t, policy).value for g in elements])


def mass_residual(tag, t, policy=DEFAULT_POLICY) -> ResidualReport:
    """|integral of p_t over the group - 1| under the module's Haar."""
    if tag == "se2":
        # pointwise x-quadrature cannot resolve the frequency-lam plane
        # waves; integrate the box directions analytically instead
        from .kernels.se2 import se2_box_mass
        res = abs(se2_box_mass(t, policy.box * np.sqrt(t), policy) - 1.0)
    else:
        pts, w = haar_quadrature(tag, policy, t=t)
        vals = _batch_values(tag, pts, t, policy)
        res = abs(float(np.dot(w, vals)) - 1.0)
    tol = 1e-6 if tag in ("su2", "so3") else 1e-3
    return ResidualReport(name=f"mass[{tag}]", value=res, tolerance=tol,
                          context={"group": tag, "t": t,
                                   "quad_nodes": policy.quad_nodes})


def semigroup_residual(tag, t, s, policy=DEFAULT_POLICY, samples=None) -> ResidualReport:
    """max over samples g of |p_{t+s}(g) - Int p_t(h) p_s(h^{-1} g) dmu(h)|."""
    if samples is None:
        samples = _default_samples(tag)[:2]
    pts, w = haar_quadrature(tag, policy, t=t)
    p_t = _batch_values(tag, pts, t, policy)
    worst = 0.0
    for g in samples:
        shifted = [multiply(inverse(h), g) for h in pts]
        p_s = _batch_values(tag, shifted, s, policy)
        conv = float(np.dot(w, p_t * p_s))
        direct = kernel(tag, g, t + s, policy).value
        worst = max(worst, abs(conv - direct))
    tol = 1e-4 if tag in ("su2", "so3") else 1e-3
    return ResidualReport(name=f"semigroup[{tag}]", value=worst, tolerance=tol,
                          context={"group": tag, "t": t, "s": s})


def symmetry_residual(tag, t, policy=DEFAULT_POLICY, samples=None) -> ResidualReport:
    if samples is None:
        samples = _default_samples(tag)
    worst = 0.0
    for g in samples:
        worst = max(worst, abs(kernel(tag, g, t, policy).value
                               - kernel(tag, inverse(g), t, policy).value))
    return ResidualReport(name=f"symmetry[{tag}]", value=worst, tolerance=1e-6,
                          context={"group": tag, "t": t})


def _default_samples(tag):
    from .groups import exp_map
    rng = np.random.default_rng(20240815)
    out = []
    for _ in range(3):
        v = 0.8 * rng.standard_normal(3)
        out.append(exp_map(tag, v) if tag != "h2"
                   else H2Element(v[0], v[1], v[2]))
    return out


def plancherel_isometry_check(N=3, seed=7, policy=DEFAULT_POLICY) -> ResidualReport:
    """|Int |f|^2 dmu - sum_n (n+1) Tr(fhat_n fhat_n^*)| for a random finitely
    supported fhat (levels n <= N), f(g) = sum_n (n+1) Tr(fhat_n X^n(g)^*)."""
    rng = np.random.default_rng(seed)
    fhat = {n: (rng.standard_normal((n + 1, n + 1))
                + 1j * rng.standard_normal((n + 1, n + 1))) / (n + 1.0)
            for n in range(N + 1)}
    rhs = sum((n + 1) * np.trace(m @ m.conj().T).real for n, m in fhat.items())
    # |f|^2 has spectral content up to level 2N: a (2N+4)-point grid per
    # coordinate integrates it exactly
    pts, w = haar_quadrature("su2", policy.with_(quad_nodes=2 * N + 4), t=1.0)
    lhs = 0.0
    for g, wi in zip(pts, w):
        val = 0.0 + 0.0j
        for n, m in fhat.items():
            X = su2_rep_matrix(n, g)
            val += (n + 1) * np.trace(m @ X.conj().T)
        lhs += wi * abs(val) ** 2
    return ResidualReport(name="plancherel[su2]", value=abs(lhs - rhs),
                          tolerance=1e-8, context={"levels": N})


def gaveau_residual(policy=DEFAULT_POLICY, n_samples=10, seed=3) -> ResidualReport:
    from .kernels import gaveau_kernel
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n_samples):
        x, y, z = rng.standard_normal(3)
        t = rng.uniform(0.3, 1.5)
        lhs = gaveau_kernel(x, y, z, t, policy)
        rhs = 0.25 * h2_kernel(H2Element(x, y, z / 4.0), t / 2.0, policy).value
        worst = max(worst, abs(lhs - rhs))
    return ResidualReport(name="gaveau[h2]", value=worst, tolerance=1e-10,
                          context={"samples": n_samples})


def covering_residual(n_samples=20, seed=11, policy=DEFAULT_POLICY) -> ResidualReport:
    """|p^{SO3}_t(Ad g) - (p^{SU2}_t(g) + p^{SU2}_t(-g))/2| (direct method)."""
    from .groups import ad_cover, exp_map
    from .kernels import so3_kernel_direct
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n_samples):
        g = exp_map("su2", rng.standard_normal(3))
        t = rng.uniform(0.2, 2.0)
        lhs = so3_kernel_direct(ad_cover(g), t, policy).value
        va, _, _ = su2_kernel_alphas([g.alpha, -g.alpha], t, policy)
        worst = max(worst, abs(lhs - 0.5 * (va[0] + va[1])))
    return ResidualReport(name="covering[so3]", value=worst, tolerance=1e-6,
                          context={"samples": n_samples})


def reality_residual(tag, n_samples=50, seed=5, policy=DEFAULT_POLICY) -> ResidualReport:
    from .groups import exp_map
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n_samples):
        g = exp_map(tag, rng.standard_normal(3))
        t = rng.uniform(0.2, 2.0)
        worst = max(worst, kernel(tag, g, t, policy).imag_residual)
    return ResidualReport(name=f"reality[{tag}]", value=worst, tolerance=1e-8,
                          context={"group": tag, "samples": n_samples})


def se2_oracle_residual(lams=(1.0, 2.0, 5.0), t=0.5, K=64,
                        policy=DEFAULT_POLICY, seed=2) -> ResidualReport:
    rng = np.random.default_rng(seed)
    g = SE2Element(rng.uniform(0, 2 * np.pi), *rng.standard_normal(2))
    worst = 0.0
    for lam in lams:
        a = se2_lambda_term(lam, g, t, policy)
        b = oracle_kernel_term("se2", lam, g, t, K=K)
        worst = max(worst, abs(a - b))
    return ResidualReport(name="oracle[se2]", value=worst, tolerance=1e-8,
                          context={"lams": list(lams), "t": t, "K": K})


def run_suite(policy=None, quick=True):
    """The default verification suite (used by the CLI `verify` command)."""
    if policy is None:
        policy = DEFAULT_POLICY
    reports = [
        gaveau_residual(policy),
        covering_residual(5 if quick else 20, policy=policy),
        se2_oracle_residual(policy=policy),
        plancherel_isometry_check(policy=policy),
        mass_residual("su2", 1.0, policy.with_(quad_nodes=32)),
        mass_residual("h2", 0.5, policy.with_(quad_nodes=48, box=6.0)),
        symmetry_residual("h2", 0.5, policy),
        symmetry_residual("su2", 0.5, policy),
        symmetry_residual("sl2", 0.5, policy),
        reality_residual("se2", 5 if quick else 50, policy=policy.with_(abs_tol=1e-6) if quick else policy),
        reality_residual("sl2", 10 if quick else 50, policy=policy),
    ]
    if not quick:
        reports += [
            mass_residual("so3", 1.0, policy.with_(quad_nodes=36)),
            mass_residual("se2", 0.5, policy.with_(abs_tol=1e-5, quad_nodes=32)),
            semigroup_residual("su2", 0.5, 0.5, policy.with_(quad_nodes=48),
                               samples=_default_samples("su2")[:1]),
            semigroup_residual("h2", 0.5, 0.5,
                               policy.with_(quad_nodes=32, box=6.0)),
            semigroup_residual("se2", 0.5, 0.5,
                               policy.with_(quad_nodes=24, box=6.0),
                               samples=_default_samples("se2")[:1]),
            symmetry_residual("so3", 0.5, policy),
            symmetry_residual("se2", 0.5, policy),
        ]
    return reports


def reports_to_json(reports):
    return json.dumps([r.to_json() for r in reports], indent=2, sort_keys=True)
