"""Oracles and residual reports."""

import json

import numpy as np
import pytest

from hypoheat import verify
from hypoheat.groups import SE2Element, exp_map
from hypoheat.kernels import se2_lambda_term
from hypoheat.kernels.su2 import su2_matrix_diag
from hypoheat.policy import DEFAULT_POLICY, InputError


def test_generator_eigenvalues_su2():
    for n in (1, 7, 30):
        L = verify.truncated_generator("su2", n)
        k = np.arange(n + 1)
        want = k * k - k * n - n / 2.0
        assert np.max(np.abs(np.diag(L).real - want)) < 1e-12
        assert np.max(np.abs(L - np.diag(np.diag(L)))) < 1e-12  # diagonal


def test_generator_eigenvalues_so3():
    for r in (1, 5, 20):
        L = verify.truncated_generator("so3", r)
        s = np.arange(-r, r + 1)
        want = s * s - r * (r + 1.0)
        assert np.max(np.abs(np.diag(L).real - want)) < 1e-12


def test_generator_eigenvalues_sl2_discrete():
    for n in (1.0, 2.5, 5.0):
        K = 32
        L = verify.truncated_generator("sl2_discrete", n, K=K)
        m = np.arange(K)
        want = -(n + 2 * m * n + m * m)
        # last row is polluted by the basis cut
        assert np.max(np.abs(np.diag(L).real[:-1] - want[:-1])) < 1e-10


def test_generator_eigenvalues_sl2_continuous():
    for j, v in ((0.0, 1.3), (0.5, 2.7)):
        K = 12
        L = verify.truncated_generator("sl2_continuous", (j, v), K=K)
        m = np.arange(-K, K + 1)
        want = -((m + j) ** 2 + v * v + 0.25)
        d = np.diag(L)[1:-1]
        assert np.max(np.abs(d.real - want[1:-1])) < 1e-12
        assert np.max(np.abs(d.imag)) < 1e-12


def test_generator_eigenvalues_se2():
    lam = 3.0
    L = verify.truncated_generator("se2", lam, K=16)
    k = np.arange(-16, 17)
    want = -k * k - 0.5 * lam * lam
    assert np.max(np.abs(np.diag(L).real[1:-1] - want[1:-1])) < 1e-12
    # the cos^2 coupling sits two modes away with weight -lam^2/4
    assert L[2, 0] == pytest.approx(-lam * lam / 4.0)


def test_generator_input_errors():
    with pytest.raises(InputError):
        verify.generator_ladders("sl2_discrete", 1.0)  # K required
    with pytest.raises(InputError):
        verify.generator_ladders("sl2_discrete", 0.3, K=16)
    with pytest.raises(InputError):
        verify.generator_ladders("sl2_continuous", (0.3, 1.0), K=16)
    with pytest.raises(InputError):
        verify.generator_ladders("bogus", 1)


def test_su2_rep_matrix_unitary_and_matches_closed_form():
    rng = np.random.default_rng(1)
    for n in (2, 6, 11):
        g = exp_map("su2", rng.standard_normal(3))
        X = verify.su2_rep_matrix(n, g)
        assert np.max(np.abs(X.conj().T @ X - np.eye(n + 1))) < 1e-12
        diag_cf = su2_matrix_diag(n, np.array([g.alpha]))[:, 0]
        assert np.max(np.abs(np.diag(X) - diag_cf.conj())) < 1e-12


def test_oracle_term_su2_matches_kernel_level():
    # Tr(e^{t Delta} X(g)) equals the closed-form level sum, per level
    rng = np.random.default_rng(2)
    g = exp_map("su2", rng.standard_normal(3))
    t = 0.6
    for n in (1, 4, 9):
        tr = verify.oracle_kernel_term("su2", n, g, t)
        lams = np.array([k * k - k * n - n / 2.0 for k in range(n + 1)])
        diag = su2_matrix_diag(n, np.array([g.alpha]))[:, 0]
        want = np.sum(np.exp(t * lams) * diag.conj())
        assert abs(tr - want) < 1e-12
        assert abs(tr.imag) < 1e-12 or abs(tr - want) < 1e-12


def test_oracle_term_se2_matches_mathieu_route():
    g = SE2Element(0.9, 0.4, -0.2)
    for lam in (1.0, 5.0, 10.0):
        a = se2_lambda_term(lam, g, 0.5)
        b = verify.oracle_kernel_term("se2", lam, g, 0.5, K=64)
        assert abs(a - b) < 1e-8


def test_residual_report_json():
    rep = verify.ResidualReport("demo", 1e-9, 1e-6, {"k": 1})
    assert rep.passed
    obj = json.loads(verify.reports_to_json([rep]))
    assert obj[0]["name"] == "demo" and obj[0]["passed"] is True
    bad = verify.ResidualReport("demo", 2e-6, 1e-6)
    assert not bad.passed


def test_mass_residual_report():
    rep = verify.mass_residual("su2", 1.0, DEFAULT_POLICY.with_(quad_nodes=32))
    assert rep.passed and rep.name == "mass[su2]"


def test_gaveau_and_covering_residuals():
    assert verify.gaveau_residual().passed
    assert verify.covering_residual(n_samples=3).passed


def test_h2_pde_oracle_backends_agree():
    xs, phi_np = verify.h2_pde_oracle(box=3.0, n_grid=41, t=0.1,
                                      backend="numpy")
    xs2, phi_acc = verify.h2_pde_oracle(box=3.0, n_grid=41, t=0.1)
    assert np.allclose(phi_np, phi_acc, atol=1e-12)
    # mass conservation on the (conservative) interior stencil
    h = xs[1] - xs[0]
    assert np.sum(phi_np) * h ** 3 == pytest.approx(1.0, abs=1e-6)
