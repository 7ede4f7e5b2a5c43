"""Lie-algebra layer: brackets, unimodularity, growth vectors, Popp."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hypoheat import algebras, lie
from hypoheat.policy import InputError


def test_bracket_heisenberg():
    spec = algebras.heisenberg_spec()
    p1, p2, k = np.eye(3)
    assert lie.bracket(spec, p1, p2) == pytest.approx(k)
    assert lie.bracket(spec, p2, p1) == pytest.approx(-k)
    assert lie.bracket(spec, p1, k) == pytest.approx(np.zeros(3))


@given(st.sampled_from(["h2", "su2", "so3", "sl2", "se2", "aff_r"]),
       st.lists(st.floats(-2, 2), min_size=3, max_size=3),
       st.lists(st.floats(-2, 2), min_size=3, max_size=3))
@settings(max_examples=40, deadline=None)
def test_bracket_bilinear_antisymmetric(tag, u, v):
    spec = algebras.algebra(tag)
    u, v = np.array(u), np.array(v)
    assert lie.bracket(spec, u, v) == pytest.approx(-lie.bracket(spec, v, u))
    assert lie.bracket(spec, 2.0 * u, v) == pytest.approx(
        2.0 * lie.bracket(spec, u, v))
    assert lie.bracket(spec, u, u) == pytest.approx(np.zeros(3), abs=1e-12)


def test_trace_ad_and_unimodularity():
    for tag in ("h2", "su2", "so3", "sl2", "se2"):
        spec = algebras.algebra(tag)
        assert lie.is_unimodular(spec)
        assert lie.laplacian_first_order(spec) == pytest.approx(np.zeros(2))
    aff = algebras.aff_r_spec()
    assert not lie.is_unimodular(aff)
    assert lie.trace_ad(aff, 0) == pytest.approx(1.0)
    assert lie.laplacian_first_order(aff) == pytest.approx([1.0, 0.0])


def test_unimodular_iff_first_order_vanishes():
    for tag in algebras.ALGEBRAS:
        spec = algebras.algebra(tag)
        zero = np.allclose(lie.laplacian_first_order(spec), 0.0, atol=1e-12)
        assert lie.is_unimodular(spec) == zero


def test_growth_vectors():
    for tag in ("h2", "su2", "so3", "sl2", "se2"):
        assert lie.growth_vector(algebras.algebra(tag)) == (2, 3)
    assert lie.growth_vector(algebras.martinet_frame([0.0, 1.0, 0.0])) == (2, 3)
    assert lie.growth_vector(algebras.martinet_frame([0.0, 0.0, 0.0])) == (2, 2, 3)
    riem = lie.FramePointData(frame=np.eye(3), bracket_closure={})
    assert lie.growth_vector(riem) == (3,)


def test_popp_density_contact_and_riemannian():
    # 3D contact: density = 1/|det[X1 X2 [X1,X2]]|
    rng = np.random.default_rng(0)
    for _ in range(5):
        X = rng.standard_normal((3, 2))
        if np.linalg.matrix_rank(X) < 2:
            continue
        v = rng.standard_normal(3)
        Z = np.column_stack([X, v])
        if abs(np.linalg.det(Z)) < 0.1:
            continue
        data = lie.FramePointData(frame=X, bracket_closure={(0, 1): v})
        assert lie.popp_density(data) == pytest.approx(
            1.0 / abs(np.linalg.det(Z)), rel=1e-10)
    # Riemannian orthonormal coordinate frame
    assert lie.popp_density(
        lie.FramePointData(frame=np.eye(3), bracket_closure={})) == pytest.approx(1.0)


def test_popp_density_rotation_invariance():
    rng = np.random.default_rng(7)
    for _ in range(10):
        y = rng.uniform(0.5, 2.0)
        data = algebras.martinet_frame([0.0, y, 0.0])
        rho = lie.popp_density(data)
        th = rng.uniform(0, 2 * np.pi)
        R = np.array([[np.cos(th), -np.sin(th)], [np.sin(th), np.cos(th)]])
        frame_r = data.frame @ R
        # brackets of the rotated frame: [Y1,Y2] = det(R) [X1,X2] = [X1,X2];
        # length-3 words transform by R acting on the first slot
        v12 = data.bracket_closure[(0, 1)]
        w1 = R[0, 0] * data.bracket_closure[(0, 0, 1)] \
            + R[1, 0] * data.bracket_closure[(1, 0, 1)]
        w2 = R[0, 1] * data.bracket_closure[(0, 0, 1)] \
            + R[1, 1] * data.bracket_closure[(1, 0, 1)]
        rot = lie.FramePointData(frame=frame_r, bracket_closure={
            (0, 1): v12, (0, 0, 1): w1, (1, 0, 1): w2})
        assert lie.popp_density(rot) == pytest.approx(rho, rel=1e-10)


def test_popp_grushin():
    for x in (0.5, -1.5, 2.0):
        data = algebras.grushin_frame([x, 0.0])
        assert lie.popp_density(data) == pytest.approx(1.0 / abs(x), rel=1e-12)


def test_popp_singular_point_error():
    with pytest.raises(lie.SingularPointError):
        lie.popp_density(lie.FramePointData(
            frame=np.eye(3)[:, :2], bracket_closure={(0, 1): np.zeros(3)}))


def test_laplacian_coeffs_martinet_grushin():
    rng = np.random.default_rng(3)
    for _ in range(10):
        y = rng.uniform(0.4, 3.0) * rng.choice([-1.0, 1.0])
        pt = [rng.standard_normal(), y, rng.standard_normal()]
        c = lie.laplacian_coeffs_fd(algebras.martinet_frame, pt)
        assert c[0] == pytest.approx(0.0, abs=1e-9)
        assert c[1] == pytest.approx(-1.0 / y, rel=1e-7)
    for _ in range(10):
        x = rng.uniform(0.4, 3.0) * rng.choice([-1.0, 1.0])
        c = lie.laplacian_coeffs_fd(algebras.grushin_frame, [x, 0.0])
        assert c[0] == pytest.approx(-1.0 / x, rel=1e-7)
        assert c[1] == pytest.approx(0.0, abs=1e-9)


def test_laplacian_coeffs_euclidean_zero():
    frame_fn = lambda q: lie.FramePointData(frame=np.eye(2), bracket_closure={})
    c = lie.laplacian_coeffs_fd(frame_fn, [0.3, -0.7])
    assert c == pytest.approx(np.zeros(2), abs=1e-10)


def test_left_invariant_coeffs_match_spec():
    # on a left-invariant frame the intrinsic coefficients reduce to
    # laplacian_first_order of the spec
    c = lie.laplacian_coeffs_fd(algebras.heisenberg_chart_frame, [0.2, -0.4, 0.1])
    assert c == pytest.approx(np.zeros(2), abs=1e-8)


def test_spec_validation():
    c = np.zeros((3, 3, 3))
    c[0, 1, 2] = 1.0  # not antisymmetric
    with pytest.raises(InputError):
        lie.LieAlgebraSpec(structure_constants=c, horizontal=(0, 1))
    c = np.zeros((2, 2, 2))
    with pytest.raises(InputError):
        lie.LieAlgebraSpec(structure_constants=c, horizontal=(5,))
    with pytest.raises(InputError):
        lie.bracket(algebras.heisenberg_spec(), np.zeros(2), np.zeros(3))


def test_jacobi_violation_rejected():
    # [p1,p2]=p3, [p1,p3]=p1 violates Jacobi
    c = np.zeros((3, 3, 3))
    c[0, 1, 2], c[1, 0, 2] = 1.0, -1.0
    c[0, 2, 0], c[2, 0, 0] = 1.0, -1.0
    with pytest.raises(InputError):
        lie.LieAlgebraSpec(structure_constants=c, horizontal=(0, 1))
