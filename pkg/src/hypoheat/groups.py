"""Element types and group operations for H2, SU(2), SO(3), SL(2)/SU(1,1), SE(2).

Haar normalizations (fixed so the stated Plancherel measures give unit kernel
mass):
  H2     dx dy dz
  SU(2)  probability Haar (total mass 1)
  SO(3)  probability Haar (pushforward of the SU(2) one under the covering)
  SE(2)  d(angle) dx1 dx2 / (4 pi^2)
  SL(2)  SL2_HAAR_CONST * sinh(tau) dtau dphi1 dphi2 in the SU(1,1) chart
         alpha = cosh(tau/2) e^{i phi1}, beta = sinh(tau/2) e^{i phi2}
         (constant frozen after calibration against the kernel mass check).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from .policy import AccuracyError, InputError

# unit-circle / determinant drift tolerated before renormalization gives up
_INVARIANT_TOL = 1e-6

# Haar density constant for SL(2) in the SU(1,1) (tau, phi1, phi2) chart.
# Calibrated against the kernel mass at small t (converged quadrature gave
# total mass 1 + 2e-8 with this value) and frozen; a regression test guards
# it.  Equivalently: sinh(tau) dtau dphi1 dphi2 / (2 pi) is the probability-
# compatible normalization for this chart.
SL2_HAAR_CONST = 1.0 / (2.0 * np.pi)

GROUP_TAGS = ("h2", "su2", "so3", "sl2", "se2")


# ---------------------------------------------------------------------------
# element types

@dataclass(frozen=True)
class H2Element:
    x: float
    y: float
    z: float

    group = "h2"


@dataclass(frozen=True)
class SU2Element:
    alpha: complex
    beta: complex

    group = "su2"

    def __post_init__(self):
        norm = abs(self.alpha) ** 2 + abs(self.beta) ** 2
        if abs(norm - 1.0) > _INVARIANT_TOL:
            raise InputError(f"|alpha|^2+|beta|^2 = {norm} (must be 1)")
        if abs(norm - 1.0) > 1e-12:
            s = 1.0 / np.sqrt(norm)
            object.__setattr__(self, "alpha", complex(self.alpha) * s)
            object.__setattr__(self, "beta", complex(self.beta) * s)


@dataclass(frozen=True)
class SO3Element:
    matrix: np.ndarray

    group = "so3"

    def __post_init__(self):
        a = np.asarray(self.matrix, dtype=float)
        if a.shape != (3, 3):
            raise InputError("SO(3) element must be a 3x3 matrix")
        err = np.max(np.abs(a.T @ a - np.eye(3)))
        if err > _INVARIANT_TOL:
            raise InputError(f"matrix not orthogonal (residual {err:.2e})")
        if err > 1e-12:
            # one Newton step of the orthogonal polar projection
            a = a @ (1.5 * np.eye(3) - 0.5 * (a.T @ a))
        if np.linalg.det(a) < 0:
            raise InputError("matrix has determinant -1")
        object.__setattr__(self, "matrix", a)


@dataclass(frozen=True)
class SL2Element:
    matrix: np.ndarray

    group = "sl2"

    def __post_init__(self):
        a = np.asarray(self.matrix, dtype=float)
        if a.shape != (2, 2):
            raise InputError("SL(2) element must be a 2x2 real matrix")
        det = np.linalg.det(a)
        if abs(det - 1.0) > _INVARIANT_TOL:
            raise InputError(f"det = {det} (must be 1)")
        if abs(det - 1.0) > 1e-14:
            a = a / np.sqrt(det)
        object.__setattr__(self, "matrix", a)


@dataclass(frozen=True)
class SU11Element:
    alpha: complex
    beta: complex

    group = "su11"

    def __post_init__(self):
        norm = abs(self.alpha) ** 2 - abs(self.beta) ** 2
        if abs(norm - 1.0) > _INVARIANT_TOL:
            raise InputError(f"|alpha|^2-|beta|^2 = {norm} (must be 1)")
        if abs(norm - 1.0) > 1e-14:
            s = 1.0 / np.sqrt(norm)
            object.__setattr__(self, "alpha", complex(self.alpha) * s)
            object.__setattr__(self, "beta", complex(self.beta) * s)


@dataclass(frozen=True)
class SE2Element:
    angle: float
    x1: float
    x2: float

    group = "se2"

    def __post_init__(self):
        object.__setattr__(self, "angle", float(self.angle) % (2.0 * np.pi))


_ELEMENT_TYPES = {
    "h2": H2Element, "su2": SU2Element, "so3": SO3Element,
    "sl2": SL2Element, "su11": SU11Element, "se2": SE2Element,
}


# ---------------------------------------------------------------------------
# algebra basis matrices (used by exp_map and the bracket oracles in tests)

def basis_matrices(tag):
    """The (p1, p2, k)-style basis as explicit matrices."""
    if tag == "h2":
        p1 = np.zeros((3, 3)); p1[0, 1] = 1.0
        p2 = np.zeros((3, 3)); p2[1, 2] = 1.0
        k = np.zeros((3, 3)); k[0, 2] = 1.0
        return p1, p2, k
    if tag == "su2":
        p1 = 0.5 * np.array([[0, 1j], [1j, 0]])
        p2 = 0.5 * np.array([[0, -1], [1, 0]], dtype=complex)
        k = 0.5 * np.array([[1j, 0], [0, -1j]])
        return p1, p2, k
    if tag == "so3":
        p1 = np.array([[0.0, 0, 0], [0, 0, -1], [0, 1, 0]])
        p2 = np.array([[0.0, 0, 1], [0, 0, 0], [-1, 0, 0]])
        k = np.array([[0.0, -1, 0], [1, 0, 0], [0, 0, 0]])
        return p1, p2, k
    if tag == "sl2":
        p1 = 0.5 * np.array([[1.0, 0], [0, -1]])
        p2 = 0.5 * np.array([[0.0, 1], [1, 0]])
        k = 0.5 * np.array([[0.0, -1], [1, 0]])
        return p1, p2, k
    if tag == "su11":
        p1 = 0.5 * np.array([[0, 1], [1, 0]], dtype=complex)
        p2 = 0.5 * np.array([[0, -1j], [1j, 0]])
        k = 0.5 * np.array([[-1j, 0], [0, 1j]])
        return p1, p2, k
    if tag == "se2":
        p0 = np.zeros((3, 3)); p0[0, 1] = -1.0; p0[1, 0] = 1.0
        p1 = np.zeros((3, 3)); p1[0, 2] = 1.0
        p2 = np.zeros((3, 3)); p2[1, 2] = 1.0
        return p0, p1, p2
    raise InputError(f"unknown group tag {tag!r}")


def to_matrix(g):
    """Matrix realization of an element (the one basis_matrices lives in)."""
    if isinstance(g, H2Element):
        return np.array([[1.0, g.x, g.z + 0.5 * g.x * g.y],
                         [0.0, 1.0, g.y],
                         [0.0, 0.0, 1.0]])
    if isinstance(g, SU2Element):
        return np.array([[g.alpha, g.beta],
                         [-np.conj(g.beta), np.conj(g.alpha)]])
    if isinstance(g, SO3Element):
        return g.matrix
    if isinstance(g, SL2Element):
        return g.matrix
    if isinstance(g, SU11Element):
        return np.array([[g.alpha, g.beta],
                         [np.conj(g.beta), np.conj(g.alpha)]])
    if isinstance(g, SE2Element):
        c, s = np.cos(g.angle), np.sin(g.angle)
        return np.array([[c, -s, g.x1], [s, c, g.x2], [0.0, 0.0, 1.0]])
    raise InputError(f"not a group element: {g!r}")


def from_matrix(tag, m):
    if tag == "h2":
        x, y = m[0, 1], m[1, 2]
        return H2Element(x, y, m[0, 2] - 0.5 * x * y)
    if tag == "su2":
        return SU2Element(m[0, 0], m[0, 1])
    if tag == "so3":
        return SO3Element(np.array(m, dtype=float))
    if tag == "sl2":
        return SL2Element(np.array(m, dtype=float))
    if tag == "su11":
        return SU11Element(m[0, 0], m[0, 1])
    if tag == "se2":
        return SE2Element(np.arctan2(m[1, 0], m[0, 0]), m[0, 2], m[1, 2])
    raise InputError(f"unknown group tag {tag!r}")


# ---------------------------------------------------------------------------
# group operations

def identity(tag):
    if tag == "h2":
        return H2Element(0.0, 0.0, 0.0)
    if tag == "su2":
        return SU2Element(1.0 + 0.0j, 0.0j)
    if tag == "so3":
        return SO3Element(np.eye(3))
    if tag == "sl2":
        return SL2Element(np.eye(2))
    if tag == "su11":
        return SU11Element(1.0 + 0.0j, 0.0j)
    if tag == "se2":
        return SE2Element(0.0, 0.0, 0.0)
    raise InputError(f"unknown group tag {tag!r}")


def multiply(g, h):
    if type(g) is not type(h):
        raise InputError("cannot multiply elements of different groups")
    if isinstance(g, H2Element):
        return H2Element(g.x + h.x, g.y + h.y,
                         g.z + h.z + 0.5 * (g.x * h.y - h.x * g.y))
    if isinstance(g, SU2Element):
        return SU2Element(g.alpha * h.alpha - g.beta * np.conj(h.beta),
                          g.alpha * h.beta + g.beta * np.conj(h.alpha))
    if isinstance(g, SU11Element):
        return SU11Element(g.alpha * h.alpha + g.beta * np.conj(h.beta),
                           g.alpha * h.beta + g.beta * np.conj(h.alpha))
    if isinstance(g, (SO3Element, SL2Element)):
        return type(g)(g.matrix @ h.matrix)
    if isinstance(g, SE2Element):
        c, s = np.cos(g.angle), np.sin(g.angle)
        return SE2Element(g.angle + h.angle,
                          g.x1 + c * h.x1 - s * h.x2,
                          g.x2 + s * h.x1 + c * h.x2)
    raise InputError(f"not a group element: {g!r}")


def inverse(g):
    if isinstance(g, H2Element):
        return H2Element(-g.x, -g.y, -g.z)
    if isinstance(g, SU2Element):
        return SU2Element(np.conj(g.alpha), -g.beta)
    if isinstance(g, SU11Element):
        return SU11Element(np.conj(g.alpha), -g.beta)
    if isinstance(g, SO3Element):
        return SO3Element(g.matrix.T)
    if isinstance(g, SL2Element):
        m = g.matrix
        return SL2Element(np.array([[m[1, 1], -m[0, 1]], [-m[1, 0], m[0, 0]]]))
    if isinstance(g, SE2Element):
        c, s = np.cos(g.angle), np.sin(g.angle)
        return SE2Element(-g.angle, -(c * g.x1 + s * g.x2), -(-s * g.x1 + c * g.x2))
    raise InputError(f"not a group element: {g!r}")


def exp_map(tag, v):
    """exp of sum_i v[i] * (basis matrix i), returned in coordinates."""
    v = np.asarray(v, dtype=float)
    mats = basis_matrices(tag)
    if v.shape != (len(mats),):
        raise InputError(f"coefficient vector must have length {len(mats)}")
    if not np.all(np.isfinite(v)):
        raise InputError("coefficients must be finite")
    m = sum(vi * mi for vi, mi in zip(v, mats))
    return from_matrix(tag, expm(m))


# ---------------------------------------------------------------------------
# covering and isomorphism maps

def ad_cover(g: SU2Element) -> SO3Element:
    """Ad: SU(2) -> SO(3) in the (p1, p2, k) bases; 2:1 homomorphism."""
    p = basis_matrices("su2")
    gm = to_matrix(g)
    gi = to_matrix(inverse(g))
    # Tr(p_i p_j) = -delta_ij / 2 on this basis, hence the factor -2
    R = np.empty((3, 3))
    for j in range(3):
        conj = gm @ p[j] @ gi
        for i in range(3):
            R[i, j] = -2.0 * np.trace(p[i] @ conj).real
    return SO3Element(R)


def su2_preimage(g: SO3Element) -> SU2Element:
    """One of the two preimages under ad_cover (the other is its negative)."""
    R = g.matrix
    # Shepperd's quaternion extraction: branch on the largest of
    # 1+trace and the diagonal entries for numerical stability
    tr = np.trace(R)
    choices = [tr, R[0, 0], R[1, 1], R[2, 2]]
    i = int(np.argmax(choices))
    if i == 0:
        w = 0.5 * np.sqrt(1.0 + tr)
        u = np.array([R[2, 1] - R[1, 2], R[0, 2] - R[2, 0],
                      R[1, 0] - R[0, 1]]) / (4.0 * w)
    else:
        a = i - 1
        b, c = (a + 1) % 3, (a + 2) % 3
        s = np.sqrt(1.0 + R[a, a] - R[b, b] - R[c, c])
        u = np.zeros(3)
        u[a] = 0.5 * s
        w = (R[c, b] - R[b, c]) / (2.0 * s)
        u[b] = (R[b, a] + R[a, b]) / (2.0 * s)
        u[c] = (R[c, a] + R[a, c]) / (2.0 * s)
    # quaternion (w, u) ~ exp(theta * (axis . p)) with u = axis sin(theta/2)
    return SU2Element(w + 1j * u[2], -u[1] + 1j * u[0])


_C_ISO = np.array([[1.0, -1j], [1.0, 1j]]) / np.sqrt(2.0)


def pi_iso(g: SL2Element) -> SU11Element:
    m = _C_ISO @ g.matrix @ _C_ISO.conj().T
    return SU11Element(m[0, 0], m[0, 1])


def pi_iso_inv(G: SU11Element) -> SL2Element:
    m = _C_ISO.conj().T @ to_matrix(G) @ _C_ISO
    if np.max(np.abs(m.imag)) > 1e-10:
        raise AccuracyError("pi_iso inverse produced a non-real matrix")
    return SL2Element(m.real)


def dpi_iso(m):
    """d(Pi) on algebra matrices: sl(2) -> su(1,1)."""
    return _C_ISO @ np.asarray(m, dtype=complex) @ _C_ISO.conj().T


# ---------------------------------------------------------------------------
# Haar quadrature

def _gauss_legendre(a, b, n):
    x, w = np.polynomial.legendre.leggauss(n)
    return 0.5 * (b - a) * x + 0.5 * (a + b), 0.5 * (b - a) * w


def _uniform_circle(n):
    # rectangle rule on [0, 2pi): spectrally accurate for periodic integrands
    return np.arange(n) * (2.0 * np.pi / n), np.full(n, 2.0 * np.pi / n)


def haar_quadrature(tag, policy, t=1.0):
    """Nodes and weights approximating the Haar measure.

    Noncompact directions are truncated to a box of half-width
    policy.box * sqrt(t) (H2, SE(2)) or length policy.box * t for the
    SL(2) boost coordinate.  Returns (list of elements, weight array).
    """
    n = policy.quad_nodes
    if n <= 0:
        raise InputError("policy.quad_nodes must be positive")
    L = policy.box * np.sqrt(t)
    if tag == "h2":
        x, wx = _gauss_legendre(-L, L, n)
        pts, wts = [], []
        for xi, wi in zip(x, wx):
            for yj, wj in zip(x, wx):
                for zk, wk in zip(x, wx):
                    pts.append(H2Element(xi, yj, zk))
                    wts.append(wi * wj * wk)
        return pts, np.array(wts)
    if tag in ("su2", "so3"):
        a, wa = _gauss_legendre(0.0, 0.5 * np.pi, n)
        npsi = max(8, n)
        psi, wpsi = _uniform_circle(npsi)
        pts, wts = [], []
        for ai, wi in zip(a, wa):
            ca, sa = np.cos(ai), np.sin(ai)
            dens = ca * sa / (2.0 * np.pi ** 2)
            for p1, w1 in zip(psi, wpsi):
                for p2, w2 in zip(psi, wpsi):
                    g = SU2Element(ca * np.exp(1j * p1), sa * np.exp(1j * p2))
                    if tag == "so3":
                        pts.append(ad_cover(g))
                    else:
                        pts.append(g)
                    wts.append(dens * wi * w1 * w2)
        return pts, np.array(wts)
    if tag == "se2":
        # the kernel is spectrally smooth in the fiber angle but sharply
        # peaked at the spatial origin: cap the circle-rule count and split
        # the Gauss-Legendre rule into two panels meeting at 0 so nodes
        # cluster where the peak sits
        nang = max(8, n // 2)
        ang, wang = _uniform_circle(nang)
        half, whalf = _gauss_legendre(0.0, L, (n + 1) // 2)
        x = np.concatenate([-half[::-1], half])
        wx = np.concatenate([whalf[::-1], whalf])
        pts, wts = [], []
        for ai, wi in zip(ang, wang):
            for x1, w1 in zip(x, wx):
                for x2, w2 in zip(x, wx):
                    pts.append(SE2Element(ai, x1, x2))
                    wts.append(wi * w1 * w2 / (4.0 * np.pi ** 2))
        return pts, np.array(wts)
    if tag == "sl2":
        tau, wtau = _gauss_legendre(0.0, policy.box * max(t, np.sqrt(t)), n)
        nphi = max(8, n)
        phi, wphi = _uniform_circle(nphi)
        pts, wts = [], []
        for ti, wi in zip(tau, wtau):
            ch, sh = np.cosh(0.5 * ti), np.sinh(0.5 * ti)
            dens = SL2_HAAR_CONST * np.sinh(ti)
            for p1, w1 in zip(phi, wphi):
                for p2, w2 in zip(phi, wphi):
                    G = SU11Element(ch * np.exp(1j * p1), sh * np.exp(1j * p2))
                    pts.append(pi_iso_inv(G))
                    wts.append(dens * wi * w1 * w2)
        return pts, np.array(wts)
    raise InputError(f"unknown group tag {tag!r}")


# ---------------------------------------------------------------------------
# JSON serialization

def _c2j(z):
    z = complex(z)
    return [z.real, z.imag]


def element_to_json(g):
    if isinstance(g, H2Element):
        return {"group": "h2", "x": g.x, "y": g.y, "z": g.z}
    if isinstance(g, SU2Element):
        return {"group": "su2", "alpha": _c2j(g.alpha), "beta": _c2j(g.beta)}
    if isinstance(g, SO3Element):
        return {"group": "so3", "matrix": g.matrix.tolist()}
    if isinstance(g, SL2Element):
        return {"group": "sl2", "matrix": g.matrix.tolist()}
    if isinstance(g, SU11Element):
        return {"group": "su11", "alpha": _c2j(g.alpha), "beta": _c2j(g.beta)}
    if isinstance(g, SE2Element):
        return {"group": "se2", "angle": g.angle, "x1": g.x1, "x2": g.x2}
    raise InputError(f"not a group element: {g!r}")


def element_from_json(obj):
    try:
        tag = obj["group"]
    except (TypeError, KeyError):
        raise InputError("element JSON must carry a 'group' field")
    if tag == "h2":
        return H2Element(float(obj["x"]), float(obj["y"]), float(obj["z"]))
    if tag in ("su2", "su11"):
        a = complex(obj["alpha"][0], obj["alpha"][1])
        b = complex(obj["beta"][0], obj["beta"][1])
        return (SU2Element if tag == "su2" else SU11Element)(a, b)
    if tag in ("so3", "sl2"):
        m = np.array(obj["matrix"], dtype=float)
        return (SO3Element if tag == "so3" else SL2Element)(m)
    if tag == "se2":
        return SE2Element(float(obj["angle"]), float(obj["x1"]), float(obj["x2"]))
    raise InputError(f"unknown group tag {tag!r}")


def element_from_point(tag, coords):
    """Build an element from flat CLI-style coordinates."""
    coords = [float(c) for c in coords]
    if tag == "h2":
        if len(coords) != 3:
            raise InputError("h2 point needs 3 coordinates x,y,z")
        return H2Element(*coords)
    if tag == "su2":
        if len(coords) != 4:
            raise InputError("su2 point needs 4 coordinates Re(a),Im(a),Re(b),Im(b)")
        return SU2Element(complex(coords[0], coords[1]), complex(coords[2], coords[3]))
    if tag == "so3":
        if len(coords) != 3:
            raise InputError("so3 point needs 3 rotation-vector coordinates")
        return exp_map("so3", coords)
    if tag == "sl2":
        if len(coords) != 4:
            raise InputError("sl2 point needs 4 matrix entries a,b,c,d (row major)")
        return SL2Element(np.array(coords).reshape(2, 2))
    if tag == "se2":
        if len(coords) != 3:
            raise InputError("se2 point needs 3 coordinates angle,x1,x2")
        return SE2Element(*coords)
    raise InputError(f"unknown group tag {tag!r}")
