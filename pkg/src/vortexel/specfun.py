"""Special functions used throughout: integer-order Bessel J, hydrogenic radial
wavefunctions, spherical harmonics (Condon-Shortley phase) and complete elliptic
integrals.

All quantities are in Hartree atomic units; lengths in Bohr radii.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

__all__ = [
    "RadialQuantumNumbers",
    "bessel_j",
    "hydrogenic_radial",
    "sph_harm_theta",
    "spherical_harmonic",
    "elliptic_ek",
]

MAX_BESSEL_ORDER = 200


@dataclass(frozen=True)
class RadialQuantumNumbers:
    """Hydrogenic radial quantum numbers with an effective Bohr radius."""

    n: int
    ell: int
    bohr: float = 1.0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"principal quantum number must be >= 1, got n={self.n}")
        if not 0 <= self.ell <= self.n - 1:
            raise ValueError(f"need 0 <= ell <= n-1, got n={self.n}, ell={self.ell}")
        if not self.bohr > 0:
            raise ValueError(f"effective Bohr radius must be positive, got {self.bohr}")


def bessel_j(order: int, x):
    """Cylindrical Bessel function J_order(x) for integer order.

    Negative orders are reduced through J_{-n}(x) = (-1)^n J_n(x) so that the
    sign identity holds bit-exactly; this matters for the helicity-mirror
    symmetry checks downstream.
    """
    order = int(order)
    if abs(order) > MAX_BESSEL_ORDER:
        raise ValueError(f"|order| <= {MAX_BESSEL_ORDER} required, got {order}")
    if not np.all(np.isfinite(x)):
        raise ValueError("bessel_j requires finite x")
    if order < 0:
        val = special.jv(-order, x)
        return -val if order % 2 else val
    return special.jv(order, x)


def _radial_norm(n: int, ell: int, bohr: float) -> float:
    return math.sqrt(
        (2.0 / (n * bohr)) ** 3
        * math.factorial(n - ell - 1)
        / (2.0 * n * math.factorial(n + ell))
    )


def hydrogenic_radial(q: RadialQuantumNumbers, r):
    """Normalized hydrogenic radial function R_{n,ell}(r).

    Satisfies the unit norm  int_0^inf R^2 r^2 dr = 1.  `r` may be a scalar or
    an ndarray; values must be >= 0.
    """
    r = np.asarray(r, dtype=float)
    if np.any(r < 0):
        raise ValueError("radial coordinate must be non-negative")
    x = 2.0 * r / (q.n * q.bohr)
    val = (
        _radial_norm(q.n, q.ell, q.bohr)
        * np.exp(-x / 2.0)
        * x**q.ell
        * special.eval_genlaguerre(q.n - q.ell - 1, 2 * q.ell + 1, x)
    )
    return float(val) if val.ndim == 0 else val


def sph_harm_theta(ell: int, m: int, theta):
    """Real polar part T_{ell,m}(theta) of the spherical harmonic, so that
    Y_ell^m = T_{ell,m}(theta) exp(i m phi).

    Includes the Condon-Shortley phase.  Negative m is obtained from the
    positive-m evaluation via T_{ell,-m} = (-1)^m T_{ell,m}, keeping the +-m
    magnitudes bit-identical.
    """
    if abs(m) > ell:
        raise ValueError(f"|m| <= ell required, got ell={ell}, m={m}")
    mm = abs(m)
    theta = np.asarray(theta, dtype=float)
    norm = math.sqrt(
        (2 * ell + 1) / (4.0 * math.pi) * math.factorial(ell - mm) / math.factorial(ell + mm)
    )
    val = norm * special.lpmv(mm, ell, np.cos(theta))
    if m < 0 and mm % 2:
        val = -val
    return float(val) if val.ndim == 0 else val


def spherical_harmonic(ell: int, m: int, theta, phi):
    """Orthonormal spherical harmonic Y_ell^m(theta, phi), Condon-Shortley phase."""
    t = sph_harm_theta(ell, m, theta)
    return t * np.exp(1j * m * np.asarray(phi, dtype=float))


def elliptic_ek(modulus: float) -> tuple[float, float]:
    """Complete elliptic integrals (K, E) of modulus k, 0 <= k < 1.

    scipy's conventions take the parameter m = k^2.
    """
    k = float(modulus)
    if not 0.0 <= k < 1.0:
        raise ValueError(f"modulus must satisfy 0 <= k < 1, got {k}")
    m = k * k
    return float(special.ellipk(m)), float(special.ellipe(m))
