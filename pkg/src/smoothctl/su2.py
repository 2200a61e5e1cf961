"""Exact-structure SU(2)/SU(3) matrix layer.

SU(2) elements are stored as the complex pair (x, y) of the first row,
so the matrix is [[x, y], [-conj(y), conj(x)]] and staying on the group
amounts to keeping |x|^2 + |y|^2 = 1.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

PAULI_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
PAULI_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
PAULI_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
PAULIS = (PAULI_X, PAULI_Y, PAULI_Z)

_NORM_TOL = 1e-12


@dataclass(frozen=True)
class Su2:
    """SU(2) element [[x, y], [-y*, x*]], renormalized on construction."""

    x: complex
    y: complex

    def __post_init__(self):
        n = math.sqrt(abs(self.x) ** 2 + abs(self.y) ** 2)
        if not math.isfinite(n) or n == 0.0:
            raise ValueError("non-normalizable SU(2) data")
        if abs(n - 1.0) > _NORM_TOL:
            object.__setattr__(self, "x", self.x / n)
            object.__setattr__(self, "y", self.y / n)

    @classmethod
    def identity(cls) -> "Su2":
        return cls(1.0 + 0.0j, 0.0j)

    @classmethod
    def from_matrix(cls, m) -> "Su2":
        m = np.asarray(m, dtype=complex)
        return cls(complex(m[0, 0]), complex(m[0, 1]))

    @property
    def matrix(self) -> np.ndarray:
        return np.array(
            [[self.x, self.y], [-self.y.conjugate(), self.x.conjugate()]],
            dtype=complex,
        )

    def dagger(self) -> "Su2":
        return Su2(self.x.conjugate(), -self.y)

    def __matmul__(self, other: "Su2") -> "Su2":
        # (x1,y1)*(x2,y2) row-one product, no dense matrices needed
        x = self.x * other.x - self.y * other.y.conjugate()
        y = self.x * other.y + self.y * other.x.conjugate()
        return Su2(x, y)

    def trace(self) -> complex:
        return self.x + self.x.conjugate()

    def isclose(self, other: "Su2", tol: float = 1e-12) -> bool:
        return abs(self.x - other.x) <= tol and abs(self.y - other.y) <= tol


@dataclass(frozen=True)
class Su2Algebra:
    """su(2) element i*(ux*sx + uy*sy + uz*sz), components in rad/time."""

    ux: float
    uy: float
    uz: float

    def __post_init__(self):
        if not all(math.isfinite(c) for c in (self.ux, self.uy, self.uz)):
            raise ValueError("non-finite control components")

    @classmethod
    def zero(cls) -> "Su2Algebra":
        return cls(0.0, 0.0, 0.0)

    @classmethod
    def from_matrix(cls, m) -> "Su2Algebra":
        m = np.asarray(m, dtype=complex)
        # i*(ux*sx+uy*sy+uz*sz) = [[i uz, i ux + uy], [i ux - uy, -i uz]]
        return cls(float(m[0, 1].imag), float(m[0, 1].real), float(m[0, 0].imag))

    @property
    def matrix(self) -> np.ndarray:
        return 1j * (self.ux * PAULI_X + self.uy * PAULI_Y + self.uz * PAULI_Z)

    @property
    def components(self):
        return (self.ux, self.uy, self.uz)

    def norm(self) -> float:
        return math.sqrt(self.ux**2 + self.uy**2 + self.uz**2)

    def scaled(self, c: float) -> "Su2Algebra":
        return Su2Algebra(c * self.ux, c * self.uy, c * self.uz)


def exp_su2(a: Su2Algebra, t: float = 1.0) -> Su2:
    """Closed-form exponential exp(i t (u . sigma)) via the Rodrigues formula."""
    r = a.norm()
    th = r * t
    if r == 0.0:
        return Su2.identity()
    c, s = math.cos(th), math.sin(th) / r
    # exp = cos(th) I + i sin(th) (u.sigma)/|u|
    x = c + 1j * s * a.uz
    y = s * (a.uy + 1j * a.ux)
    return Su2(x, y)


def conjugate(k: Su2, g: Su2) -> Su2:
    """k g k^dagger."""
    return k @ g @ k.dagger()


def random_su2(seed_or_rng) -> Su2:
    """Haar-distributed SU(2) element: unit quaternion from four normals."""
    rng = np.random.default_rng(seed_or_rng) if not isinstance(
        seed_or_rng, np.random.Generator) else seed_or_rng
    q = rng.standard_normal(4)
    q /= np.linalg.norm(q)
    return Su2(complex(q[0], q[1]), complex(q[2], q[3]))


_SU3_TOL = 1e-10


class Su3:
    """SU(3) element stored dense; unitarity and det checked on construction."""

    def __init__(self, m):
        m = np.asarray(m, dtype=complex)
        if m.shape != (3, 3):
            raise ValueError("SU(3) element must be 3x3")
        if np.linalg.norm(m.conj().T @ m - np.eye(3)) > _SU3_TOL:
            raise ValueError("matrix is not unitary")
        d = np.linalg.det(m)
        if abs(d - 1.0) > _SU3_TOL:
            # allow a unit-modulus det drift: rescale by the cube root phase
            if abs(abs(d) - 1.0) > _SU3_TOL:
                raise ValueError("matrix determinant is not on the unit circle")
            m = m * cmath.exp(-1j * cmath.phase(d) / 3.0)
        self.m = m

    @classmethod
    def identity(cls) -> "Su3":
        return cls(np.eye(3, dtype=complex))

    def dagger(self) -> "Su3":
        return Su3(self.m.conj().T)

    def __matmul__(self, other: "Su3") -> "Su3":
        return Su3(self.m @ other.m)

    def __getitem__(self, idx):
        return self.m[idx]


def random_su3(seed_or_rng) -> Su3:
    """Haar SU(3) sample via QR of a complex Ginibre matrix."""
    rng = np.random.default_rng(seed_or_rng) if not isinstance(
        seed_or_rng, np.random.Generator) else seed_or_rng
    g = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    q, r = np.linalg.qr(g)
    q = q @ np.diag(np.diag(r) / np.abs(np.diag(r)))
    q = q * np.exp(-1j * cmath.phase(np.linalg.det(q)) / 3.0)
    return Su3(q)
