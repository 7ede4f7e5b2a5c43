"""Frame-file parsing and the safe expression evaluator."""

import importlib.resources as resources
import math

import numpy as np
import pytest

from hypoheat import lie
from hypoheat.frameio import eval_expression, load_frame_file, parse_frame_file
from hypoheat.policy import InputError


def test_eval_expression():
    assert eval_expression("2 + 3*4") == 14.0
    assert eval_expression("y*y/2", {"y": 3.0}) == 4.5
    assert eval_expression("y**2/2", {"y": 3.0}) == 4.5
    with pytest.raises(InputError):
        eval_expression("y^2", {"y": 3.0})  # bitwise ops are rejected
    assert eval_expression("-sin(pi/2)") == pytest.approx(-1.0)
    assert eval_expression("sqrt(abs(-4))") == 2.0
    assert eval_expression("exp(0) + e - e") == 1.0


def test_eval_expression_rejects_unsafe():
    for bad in ("__import__('os')", "x.y", "open('f')", "[1,2]",
                "lambda: 1", "'str'", "unknown_fn(1)", "q"):
        with pytest.raises(InputError):
            eval_expression(bad, {"x": 1.0})


MARTINET = """
# comment line
dim: 3
coords: x y z
frame:
  1 0 y*y/2
  0 1 0
bracket_closure:
  1 2 -> 0 0 -y
  2 1 2 -> 0 0 -1
"""


def test_parse_frame_file_martinet():
    ff = parse_frame_file(MARTINET)
    assert ff.dim == 3 and ff.coords == ("x", "y", "z")
    assert not ff.is_algebra_spec
    data = ff.frame_at([0.0, 2.0, 0.0])
    assert data.frame == pytest.approx(np.array([[1, 0], [0, 1], [2, 0]]).astype(float))
    assert data.bracket_closure[(0, 1)] == pytest.approx([0, 0, -2.0])
    assert lie.growth_vector(data) == (2, 3)
    assert lie.popp_density(data) == pytest.approx(0.5)


def test_parse_algebra_spec():
    txt = """
dim: 3
horizontal: 1 2
brackets:
  1 2 -> 0 0 1
  1 3 -> 0 0 1
"""
    spec = parse_frame_file(txt).algebra_spec()
    assert not lie.is_unimodular(spec)  # this is A+(R) (+) R
    assert lie.laplacian_first_order(spec) == pytest.approx([1.0, 0.0])


def test_parse_errors():
    with pytest.raises(InputError):
        parse_frame_file("coords: x y\n")  # missing dim
    with pytest.raises(InputError):
        parse_frame_file("dim: 2\ncoords: x\n")  # wrong coord count
    with pytest.raises(InputError):
        parse_frame_file("dim: 2\nfroms: 1\n")  # unknown key
    with pytest.raises(InputError):
        parse_frame_file("dim: 2\nbrackets:\n  1 -> 0 0\n")
    with pytest.raises(InputError):
        parse_frame_file("dim: 3\nframe:\n  1 0\n").frame_at([0, 0, 0])
    ff = parse_frame_file("dim: 2\nframe:\n  1 0\n  0 1\n")
    with pytest.raises(InputError):
        ff.frame_at([1.0])  # wrong point length
    with pytest.raises(InputError):
        ff.algebra_spec()  # no brackets section


def test_bundled_martinet_fixture():
    path = resources.files("hypoheat").joinpath("data/martinet.frame")
    ff = load_frame_file(str(path))
    coeffs = lie.laplacian_coeffs_fd(ff.frame_at, [0.0, 2.0, 0.0])
    assert coeffs[1] == pytest.approx(-0.5, abs=1e-8)
    # matches the in-code fixture everywhere
    rng = np.random.default_rng(1)
    for _ in range(5):
        p = rng.standard_normal(3)
        from hypoheat.algebras import martinet_frame
        a, b = ff.frame_at(p), martinet_frame(p)
        assert a.frame == pytest.approx(b.frame)
        for w in b.bracket_closure:
            assert a.bracket_closure[w] == pytest.approx(b.bracket_closure[w])


def test_expression_functions():
    txt = "dim: 1\ncoords: t\nframe:\n  cos(t)*cos(t)+sin(t)**2\n"
    ff = parse_frame_file(txt)
    data = ff.frame_at([0.7])
    assert data.frame[0, 0] == pytest.approx(1.0)
