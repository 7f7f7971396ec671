"""Quantum states: the Bessel vortex beam, the internal hydrogenic electron and
the center of mass, plus amplitude evaluation for each.

Bessel beams are not square-integrable over all space, so each beam is
normalized to unity over a declared finite cylinder (rho_max, z_len); rate
ratios downstream are insensitive to that choice.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np

from . import quadrature
from .specfun import RadialQuantumNumbers, bessel_j, hydrogenic_radial, sph_harm_theta

__all__ = [
    "BeamState",
    "InternalState",
    "CenterOfMassState",
    "CompositeState",
    "beam_amplitude",
    "internal_amplitude",
    "cm_amplitude",
]

# Laboratory-scale defaults: beam waist comparable to atomic size so dipole
# channels are numerically well resolved.
DEFAULT_K_Z = 100.0
DEFAULT_K_RHO = 5.0
DEFAULT_RHO_MAX = 20.0
DEFAULT_Z_LEN = 50.0


@functools.lru_cache(maxsize=256)
def _bessel_square_integral(order: int, k_rho: float, rho_max: float) -> float:
    res = quadrature.integrate(
        lambda p: bessel_j(order, k_rho * p[:, 0]) ** 2 * p[:, 0],
        [0.0],
        [rho_max],
        rel_tol=1e-13,
        abs_tol=1e-16,
        max_evals=400_000,
        initial_splits=[max(4, int(k_rho * rho_max / math.pi))],
    )
    return float(res.value.real)


@dataclass(frozen=True)
class BeamState:
    """Bessel vortex mode with winding number l, normalized over a cylinder.

    ``amp_scale`` multiplies the normalization constant (a test hook used to
    verify that rate ratios do not depend on the normalization convention).
    """

    k_z: float = DEFAULT_K_Z
    k_rho: float = DEFAULT_K_RHO
    l: int = 0
    rho_max: float = DEFAULT_RHO_MAX
    z_len: float = DEFAULT_Z_LEN
    amp_scale: float = 1.0

    def __post_init__(self):
        if not (self.k_z > 0 and self.k_rho > 0):
            raise ValueError("k_z and k_rho must be positive")
        if not (self.rho_max > 0 and self.z_len > 0):
            raise ValueError("normalization cylinder must have positive extent")
        if not self.amp_scale > 0:
            raise ValueError("amp_scale must be positive")

    @property
    def k_total(self) -> float:
        """Total wavevector magnitude, k^2 = k_z^2 + k_rho^2."""
        return math.hypot(self.k_z, self.k_rho)

    def norm_constant(self) -> float:
        """A_l fixing unit norm over the cylinder; depends on |l| only."""
        integral = _bessel_square_integral(abs(self.l), self.k_rho, self.rho_max)
        return self.amp_scale / math.sqrt(2.0 * math.pi * self.z_len * integral)


@dataclass(frozen=True)
class InternalState:
    """Hydrogenic internal state |n, ell, m> with an effective Bohr radius."""

    n: int
    ell: int
    m: int
    bohr: float = 1.0

    def __post_init__(self):
        RadialQuantumNumbers(self.n, self.ell, self.bohr)  # validates n, ell, bohr
        if abs(self.m) > self.ell:
            raise ValueError(f"|m| <= ell required, got ell={self.ell}, m={self.m}")

    @property
    def radial(self) -> RadialQuantumNumbers:
        return RadialQuantumNumbers(self.n, self.ell, self.bohr)

    def mean_radius(self) -> float:
        """<r> = a (3 n^2 - ell(ell+1)) / 2, the dipole-validity length scale."""
        return 0.5 * self.bohr * (3.0 * self.n**2 - self.ell * (self.ell + 1))


@dataclass(frozen=True)
class CenterOfMassState:
    """Center-of-mass state about the beam axis.

    ``pinned`` holds the center of mass rigidly at radius R and height Z (the
    solid-state case) in a rotational eigenstate of definite L about the beam
    axis; Phi_R only sets an overall azimuthal reference.  ``cylindrical``
    is a traveling cylindrical wave J_L(K_rho R) e^{iL Phi} e^{iK_z Z}
    normalized over the same cylinder as the beam.
    """

    mode: str = "pinned"
    R: float = 0.0
    Phi_R: float = 0.0
    Z: float = 0.0
    L: int = 0
    K_z: float | None = None
    K_rho: float | None = None

    def __post_init__(self):
        if self.mode not in ("pinned", "cylindrical"):
            raise ValueError(f"unknown center-of-mass mode {self.mode!r}")
        if self.R < 0:
            raise ValueError("R must be non-negative")
        if self.mode == "pinned":
            if self.K_z is not None or self.K_rho is not None:
                raise ValueError("pinned mode takes no wavevector")
        else:
            if self.K_z is None or self.K_rho is None:
                raise ValueError("cylindrical mode requires K_z and K_rho")
            if not (self.K_z > 0 and self.K_rho > 0):
                raise ValueError("K_z and K_rho must be positive")

    @property
    def is_pinned(self) -> bool:
        return self.mode == "pinned"


@dataclass(frozen=True)
class CompositeState:
    """Product state |internal; center-of-mass; beam>."""

    beam: BeamState
    internal: InternalState
    cm: CenterOfMassState


def beam_amplitude(b: BeamState, point) -> complex:
    """A_l J_l(k_rho rho) e^{il Phi} e^{ik_z z} at cylindrical ``point``."""
    rho, phi, z = point
    if rho < 0:
        raise ValueError("rho must be non-negative")
    return (
        b.norm_constant()
        * bessel_j(b.l, b.k_rho * rho)
        * complex(np.exp(1j * (b.l * phi + b.k_z * z)))
    )


def internal_amplitude(s: InternalState, point) -> complex:
    """R_{n,ell}(q) Y_ell^m(theta, phi) at spherical ``point``."""
    q, theta, phi = point
    if q < 0:
        raise ValueError("q must be non-negative")
    radial = hydrogenic_radial(s.radial, q)
    return radial * sph_harm_theta(s.ell, s.m, theta) * complex(np.exp(1j * s.m * phi))


def cm_amplitude(c: CenterOfMassState, point, beam: BeamState | None = None) -> complex:
    """Center-of-mass amplitude at cylindrical ``point``.

    The pinned convention is amplitude 1 everywhere: the matrix-element engine
    fixes (R, Z) itself.  Cylindrical waves need the ``beam`` whose cylinder
    sets the normalization.
    """
    R, phi, Z = point
    if R < 0:
        raise ValueError("R must be non-negative")
    if c.is_pinned:
        return 1.0 + 0.0j
    if beam is None:
        raise ValueError("cylindrical-wave normalization needs the beam cylinder")
    integral = _bessel_square_integral(abs(c.L), c.K_rho, beam.rho_max)
    norm = 1.0 / math.sqrt(2.0 * math.pi * beam.z_len * integral)
    return (
        norm
        * bessel_j(c.L, c.K_rho * R)
        * complex(np.exp(1j * (c.L * phi + c.K_z * Z)))
    )
