"""Text frame-file format for Lie-algebra specs and coordinate frames.

A frame file is a plain-text key-value document.  ``#`` starts a comment;
blank lines are ignored.  Scalar keys use ``key: value``; the three list
sections are introduced by a bare ``brackets:``, ``frame:`` or
``bracket_closure:`` line and collect every following line until the next
key or section.

Keys
----
dim: n
    Number of coordinates (and of basis elements for an algebra spec).
coords: x y z
    Coordinate names usable in expressions (default ``x1 .. xn``).
horizontal: i j
    1-based indices of the horizontal generators (algebra specs; for pure
    frame files the whole frame is horizontal).
brackets:
    Lines ``i j -> c1 ... cn``: structure constants [p_i, p_j] = sum c_k p_k
    (1-based, i < j; antisymmetry is filled in).  Presence of this section
    makes the file a LieAlgebraSpec.
frame:
    m lines, one frame vector per line, each with n expressions: the
    coordinate components of X_1 .. X_m.
bracket_closure:
    Lines ``i1 ... ik -> e1 ... en``: the value of the left-nested bracket
    [X_i1, [X_i2, [... X_ik]]] (1-based frame indices), as n expressions.

Expressions may use the coordinate names, numeric literals, ``pi`` and
``e``, the operators ``+ - * / **`` (power is ``**``, not ``^``) and the
functions
sin cos tan sinh cosh tanh exp log sqrt abs.  They are evaluated by a small
AST walker, never by ``eval``.
"""

from __future__ import annotations

import ast
import math
from dataclasses import dataclass

import numpy as np

from .lie import FramePointData, LieAlgebraSpec
from .policy import InputError

_FUNCTIONS = {name: getattr(math, name) for name in
              ("sin", "cos", "tan", "sinh", "cosh", "tanh",
               "exp", "log", "sqrt")}
_FUNCTIONS["abs"] = abs
_CONSTANTS = {"pi": math.pi, "e": math.e}

_BINOPS = {
    ast.Add: lambda a, b: a + b,
    ast.Sub: lambda a, b: a - b,
    ast.Mult: lambda a, b: a * b,
    ast.Div: lambda a, b: a / b,
    ast.Pow: lambda a, b: a ** b,
}


def eval_expression(text, variables=None):
    """Numeric value of one expression with the given variable bindings."""
    variables = variables or {}
    try:
        tree = ast.parse(text, mode="eval")
    except SyntaxError as exc:
        raise InputError(f"bad expression {text!r}: {exc.msg}")

    def walk(node):
        if isinstance(node, ast.Expression):
            return walk(node.body)
        if isinstance(node, ast.Constant):
            if isinstance(node.value, (int, float)):
                return float(node.value)
            raise InputError(f"non-numeric literal in {text!r}")
        if isinstance(node, ast.Name):
            if node.id in variables:
                return float(variables[node.id])
            if node.id in _CONSTANTS:
                return _CONSTANTS[node.id]
            raise InputError(f"unknown name {node.id!r} in {text!r}")
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            return _BINOPS[type(node.op)](walk(node.left), walk(node.right))
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.UAdd, ast.USub)):
            v = walk(node.operand)
            return v if isinstance(node.op, ast.UAdd) else -v
        if isinstance(node, ast.Call) and isinstance(node.func, ast.Name):
            fn = _FUNCTIONS.get(node.func.id)
            if fn is None or node.keywords or len(node.args) != 1:
                raise InputError(f"unsupported call in {text!r}")
            return fn(walk(node.args[0]))
        raise InputError(f"unsupported syntax in expression {text!r}")

    return walk(tree)


@dataclass(frozen=True)
class FrameFile:
    """Parsed frame file; expressions stay symbolic until a point is given."""

    dim: int
    coords: tuple
    horizontal: tuple          # 0-based
    brackets: dict             # (i, j) -> float vector (0-based), or empty
    frame_exprs: tuple         # m rows of n expression strings
    closure_exprs: dict        # word tuple (0-based) -> n expression strings
    name: str = ""

    @property
    def is_algebra_spec(self):
        return bool(self.brackets)

    def algebra_spec(self) -> LieAlgebraSpec:
        if not self.brackets:
            raise InputError("frame file has no 'brackets' section")
        n = self.dim
        c = np.zeros((n, n, n))
        for (i, j), v in self.brackets.items():
            c[i, j] = v
            c[j, i] = -np.asarray(v)
        horizontal = self.horizontal or tuple(range(n))
        return LieAlgebraSpec(structure_constants=c, horizontal=horizontal,
                              name=self.name)

    def frame_at(self, point) -> FramePointData:
        point = np.asarray(point, dtype=float)
        if point.shape != (self.dim,):
            raise InputError(f"point must have {self.dim} coordinates")
        if not self.frame_exprs:
            raise InputError("frame file has no 'frame' section")
        binding = dict(zip(self.coords, point))
        cols = [[eval_expression(e, binding) for e in row]
                for row in self.frame_exprs]
        closure = {w: np.array([eval_expression(e, binding) for e in exprs])
                   for w, exprs in self.closure_exprs.items()}
        return FramePointData(frame=np.array(cols).T, bracket_closure=closure)


def _split_arrow(line, where):
    if "->" not in line:
        raise InputError(f"expected 'lhs -> rhs' in {where}: {line!r}")
    lhs, rhs = line.split("->", 1)
    return lhs.split(), rhs.split()


def parse_frame_file(text, name="") -> FrameFile:
    dim = None
    coords = None
    horizontal = ()
    brackets = {}
    frame_rows = []
    closure = {}
    section = None
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key = line.split(":", 1)[0].strip().lower() if ":" in line else None
        if key in ("brackets", "frame", "bracket_closure") and line.endswith(":"):
            section = key
            continue
        if key in ("dim", "coords", "horizontal"):
            section = None
            value = line.split(":", 1)[1].strip()
            if key == "dim":
                dim = int(value)
            elif key == "coords":
                coords = tuple(value.split())
            else:
                horizontal = tuple(int(i) - 1 for i in value.split())
            continue
        if section == "brackets":
            lhs, rhs = _split_arrow(line, "brackets")
            if len(lhs) != 2:
                raise InputError(f"bracket line needs two indices: {line!r}")
            i, j = (int(t) - 1 for t in lhs)
            brackets[(i, j)] = [float(t) for t in rhs]
        elif section == "frame":
            frame_rows.append(tuple(line.split()))
        elif section == "bracket_closure":
            lhs, rhs = _split_arrow(line, "bracket_closure")
            word = tuple(int(t) - 1 for t in lhs)
            closure[word] = tuple(rhs)
        else:
            raise InputError(f"unrecognized frame-file line: {line!r}")
    if dim is None:
        raise InputError("frame file must declare 'dim'")
    if coords is None:
        coords = tuple(f"x{i+1}" for i in range(dim))
    if len(coords) != dim:
        raise InputError("'coords' must list one name per dimension")
    for row in frame_rows:
        if len(row) != dim:
            raise InputError("each frame vector needs one component per coordinate")
    for w, exprs in closure.items():
        if len(exprs) != dim:
            raise InputError(f"closure value for word {w} needs {dim} components")
    for (i, j), v in brackets.items():
        if not (0 <= i < dim and 0 <= j < dim) or len(v) != dim:
            raise InputError("bracket indices/coefficients out of range")
    return FrameFile(dim=dim, coords=coords, horizontal=horizontal,
                     brackets=brackets, frame_exprs=tuple(frame_rows),
                     closure_exprs=closure, name=name)


def load_frame_file(path) -> FrameFile:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_frame_file(fh.read(), name=str(path))
