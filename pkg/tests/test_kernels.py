"""Kernel evaluators: closed-form identities, symmetry, reality, truncation."""

import numpy as np
import pytest

from hypoheat.groups import (H2Element, SE2Element, ad_cover, exp_map,
                             inverse, su2_preimage)
from hypoheat.kernels import (gaveau_kernel, h2_kernel, h2_kernel_points,
                              kernel, se2_kernel, se2_kernel_points,
                              sl2_kernel, so3_kernel, su2_kernel,
                              su2_kernel_alphas)
from hypoheat.kernels.sl2 import sl2_discrete_elements
from hypoheat.kernels.so3 import so3_kernel_direct
from hypoheat.policy import DEFAULT_POLICY, InputError

TAGS = ("h2", "su2", "so3", "sl2", "se2")


def test_h2_identity_value():
    # closed form at the identity: 1/(16 t^2)
    for t in (0.25, 0.5, 1.0, 2.0):
        res = h2_kernel(H2Element(0, 0, 0), t)
        assert res.value == pytest.approx(1.0 / (16.0 * t * t), rel=1e-12)


def test_h2_gaveau_identity():
    rng = np.random.default_rng(4)
    for _ in range(5):
        x, y, z = rng.standard_normal(3)
        t = rng.uniform(0.3, 1.2)
        lhs = gaveau_kernel(x, y, z, t)
        rhs = 0.25 * h2_kernel(H2Element(x, y, z / 4.0), t / 2.0).value
        assert abs(lhs - rhs) < 1e-10


def test_h2_cylindrical_symmetry():
    # p depends on (x^2+y^2, |z|) only
    t = 0.6
    a = h2_kernel(H2Element(0.5, 0.0, 0.3), t).value
    b = h2_kernel(H2Element(0.0, 0.5, 0.3), t).value
    c = h2_kernel(H2Element(0.3, 0.4, -0.3), t).value
    assert a == pytest.approx(b, rel=1e-12)
    assert a == pytest.approx(c, rel=1e-12)


def test_h2_batch_matches_scalar():
    pts = np.array([[0.1, -0.2, 0.3], [1.0, 0.5, -0.7]])
    vals, tail = h2_kernel_points(pts, 0.8)
    for p, v in zip(pts, vals):
        assert v == pytest.approx(h2_kernel(H2Element(*p), 0.8).value, rel=1e-13)
    assert tail >= 0.0


def test_su2_identity_is_theta_function():
    # at g = id every element is 1: p_t(id) = sum (n+1)^2 exp(-lam...) with
    # the level-k sum; cross-check against the raw eigenvalue double sum
    t = 0.7
    direct = 0.0
    for n in range(140):
        for k in range(n + 1):
            direct += (n + 1) * np.exp(t * (k * k - k * n - n / 2.0))
    res = su2_kernel_alphas(np.array([1.0 + 0.0j]), t)
    assert res[0][0] == pytest.approx(direct, rel=1e-10)


def test_su2_reality_and_positivity():
    rng = np.random.default_rng(6)
    for _ in range(5):
        g = exp_map("su2", rng.standard_normal(3))
        res = su2_kernel(g, rng.uniform(0.3, 1.5))
        assert res.imag_residual < 1e-12
        assert res.value > 0


def test_so3_covering_vs_direct():
    rng = np.random.default_rng(8)
    for _ in range(3):
        g = exp_map("su2", rng.standard_normal(3))
        R = ad_cover(g)
        t = rng.uniform(0.3, 1.0)
        a = so3_kernel(R, t).value                 # covering route
        b = so3_kernel_direct(R, t).value          # Legendre-basis route
        assert a == pytest.approx(b, abs=1e-8)


def test_so3_preimage_consistency():
    rng = np.random.default_rng(10)
    g = exp_map("su2", rng.standard_normal(3))
    R = ad_cover(g)
    pre = su2_preimage(R)
    va = su2_kernel_alphas(np.array([pre.alpha, -pre.alpha]), 0.5)[0]
    assert so3_kernel(R, 0.5).value == pytest.approx(0.5 * (va[0] + va[1]), rel=1e-10)


def test_sl2_symmetry_and_reality():
    rng = np.random.default_rng(12)
    for _ in range(3):
        g = exp_map("sl2", 0.7 * rng.standard_normal(3))
        t = rng.uniform(0.3, 1.0)
        res = sl2_kernel(g, t)
        res_inv = sl2_kernel(inverse(g), t)
        assert res.imag_residual < 1e-8
        assert res.value == pytest.approx(res_inv.value, rel=1e-9)


def test_sl2_discrete_radius_independence():
    # the Cauchy-integral extraction must not depend on the contour radius
    a = sl2_discrete_elements(1.25 + 0.1j, 0.74j, 1.5, 6, rho=0.4)
    b = sl2_discrete_elements(1.25 + 0.1j, 0.74j, 1.5, 6, rho=0.7)
    assert np.max(np.abs(a - b)) < 1e-10


def test_se2_symmetry_and_reality():
    g = SE2Element(0.8, 0.4, -0.3)
    t = 0.6
    res = se2_kernel(g, t)
    res_inv = se2_kernel(inverse(g), t)
    assert res.imag_residual < 1e-10
    assert res.value == pytest.approx(res_inv.value, rel=1e-10)


def test_se2_batch_matches_scalar():
    els = [SE2Element(0.0, 0.2, 0.1), SE2Element(1.1, -0.5, 0.4)]
    vals, imag, tail = se2_kernel_points(els, 0.7)
    for g, v in zip(els, vals):
        assert v == pytest.approx(se2_kernel(g, 0.7).value, rel=1e-8)
    assert imag < 1e-10


def test_kernel_dispatch_and_errors():
    with pytest.raises(InputError):
        kernel("nope", H2Element(0, 0, 0), 1.0)
    with pytest.raises(InputError):
        kernel("su2", H2Element(0, 0, 0), 1.0)
    with pytest.raises(InputError):
        kernel("h2", H2Element(0, 0, 0), -1.0)
    for tag in TAGS:
        g = exp_map(tag, np.array([0.1, 0.2, 0.0])) if tag != "h2" \
            else H2Element(0.1, 0.2, 0.0)
        res = kernel(tag, g, 0.9)
        assert np.isfinite(res.value)
        assert res.value > 0


def test_truncation_policy_monotone():
    # tightening the tolerance must not change converged digits
    g = SE2Element(0.5, 0.3, -0.2)
    a = se2_kernel(g, 0.5, DEFAULT_POLICY.with_(abs_tol=1e-6)).value
    b = se2_kernel(g, 0.5, DEFAULT_POLICY.with_(abs_tol=1e-9)).value
    assert a == pytest.approx(b, abs=1e-5)
    res = su2_kernel(exp_map("su2", [0.4, 0.1, 0.2]), 0.4,
                     DEFAULT_POLICY.with_(series_cut=20))
    full = su2_kernel(exp_map("su2", [0.4, 0.1, 0.2]), 0.4)
    # an explicit low cut must report a larger tail estimate
    assert res.tail_estimate >= full.tail_estimate


def test_short_time_concentration():
    # mass concentrates at the identity: value at e grows as t -> 0,
    # value at a fixed g != e decays relative to it
    for tag in ("su2", "se2"):
        e = exp_map(tag, np.zeros(3))
        g = exp_map(tag, np.array([0.8, 0.5, 0.0]))
        r1 = kernel(tag, g, 0.3).value / kernel(tag, e, 0.3).value
        r2 = kernel(tag, g, 0.15).value / kernel(tag, e, 0.15).value
        assert r2 < r1 < 1.0
