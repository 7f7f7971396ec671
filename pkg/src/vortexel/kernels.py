"""Interaction kernels between a beam electron and a hydrogenic target.

Three coupled views of the same physics:

* ``coulomb_kernel``   -- the exact two-charge Coulomb energy,
* ``dipole_kernel``    -- its first-order (electric dipole) truncation,
* ``decomposed_dipole_kernel`` -- the dipole kernel rewritten through the
  geometric factors (chi_r, chi_R, eta, F, G) so every azimuthal angle enters
  only through cosines of differences.

The decomposition is what lets the matrix-element engine reduce all azimuthal
integrations to the generic integrals ``y_alpha``; its correctness is locked
by the pointwise identity with ``dipole_kernel``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .specfun import elliptic_ek

__all__ = [
    "CylPoint",
    "SphPoint",
    "GeometricFactors",
    "KernelKind",
    "SingularPointError",
    "SingularGeometryError",
    "extract_geometric_factors",
    "coulomb_kernel",
    "dipole_kernel",
    "decomposed_dipole_kernel",
    "y_alpha",
    "y_alpha_elliptic",
    "YAlpha",
]

EPS_CORE_DEFAULT = 1e-3


class SingularPointError(ValueError):
    """An evaluation point fell within the core radius of a charge."""


class SingularGeometryError(ValueError):
    """The azimuthal integrand is singular (F <= G)."""


class CylPoint(NamedTuple):
    """Cylindrical coordinates (rho, phi, z) about the beam axis."""

    rho: float
    phi: float
    z: float


class SphPoint(NamedTuple):
    """Spherical coordinates (r, theta, phi); polar axis along the beam."""

    r: float
    theta: float
    phi: float


@dataclass(frozen=True)
class GeometricFactors:
    """q-independent factors of the decomposed dipole coupling (lengths / lengths^2)."""

    chi_r: float
    chi_R: float
    eta: float
    F: float
    G: float


@dataclass(frozen=True)
class KernelKind:
    """Which coupling to use.  ``q_scale`` linearly rescales the internal
    coordinate inside the kernel only (a linearity test hook; physical runs
    leave it at 1)."""

    variant: str = "dipole"
    q_scale: float = 1.0

    def __post_init__(self):
        if self.variant not in ("dipole", "exact-coulomb"):
            raise ValueError(f"unknown kernel variant {self.variant!r}")
        if not self.q_scale > 0:
            raise ValueError("q_scale must be positive")

    @property
    def is_dipole(self) -> bool:
        return self.variant == "dipole"


DIPOLE = KernelKind("dipole")
COULOMB = KernelKind("exact-coulomb")


def _cartesian(pt: CylPoint) -> np.ndarray:
    return np.array([pt.rho * math.cos(pt.phi), pt.rho * math.sin(pt.phi), pt.z])


def _electron_position(cm_pt: CylPoint, internal_pt: SphPoint) -> np.ndarray:
    q, th, ph = internal_pt
    return _cartesian(cm_pt) + q * np.array(
        [math.sin(th) * math.cos(ph), math.sin(th) * math.sin(ph), math.cos(th)]
    )


def extract_geometric_factors(beam_pt: CylPoint, cm_pt: CylPoint, theta: float) -> GeometricFactors:
    """Geometric factors of the decomposed dipole coupling at one configuration.

    Closed forms (derived by expanding q.(r - R) in the mixed cylindrical /
    spherical frames and validated against the direct Cartesian kernel):

        chi_r = rho sin(theta),  chi_R = R sin(theta),  eta = (z - Z) cos(theta),
        F = rho^2 + R^2 + (z - Z)^2,  G = 2 rho R.
    """
    rho, _, z = beam_pt
    R, _, Z = cm_pt
    if rho < 0 or R < 0:
        raise ValueError("radial coordinates must be non-negative")
    st, ct = math.sin(theta), math.cos(theta)
    return GeometricFactors(
        chi_r=rho * st,
        chi_R=R * st,
        eta=(z - Z) * ct,
        F=rho * rho + R * R + (z - Z) ** 2,
        G=2.0 * rho * R,
    )


def coulomb_kernel(
    beam_pt: CylPoint,
    cm_pt: CylPoint,
    internal_pt: SphPoint,
    eps_core: float = EPS_CORE_DEFAULT,
) -> float:
    """Exact Coulomb coupling e0^2 (1/|r - q_e| - 1/|r - R|) in atomic units."""
    if beam_pt.rho < 0 or cm_pt.rho < 0 or internal_pt.r < 0:
        raise ValueError("radial coordinates must be non-negative")
    r = _cartesian(beam_pt)
    R = _cartesian(cm_pt)
    qe = _electron_position(cm_pt, internal_pt)
    d_e = float(np.linalg.norm(r - qe))
    d_n = float(np.linalg.norm(r - R))
    if d_e < eps_core or d_n < eps_core:
        raise SingularPointError(
            f"beam point within eps_core={eps_core} of a charge (d_e={d_e:.2e}, d_n={d_n:.2e})"
        )
    return 1.0 / d_e - 1.0 / d_n


def dipole_kernel(
    beam_pt: CylPoint,
    cm_pt: CylPoint,
    internal_pt: SphPoint,
    eps_core: float = EPS_CORE_DEFAULT,
) -> float:
    """Dipole-order coupling e0^2 q.(r - R)/|r - R|^3, evaluated in Cartesian form."""
    if beam_pt.rho < 0 or cm_pt.rho < 0 or internal_pt.r < 0:
        raise ValueError("radial coordinates must be non-negative")
    r = _cartesian(beam_pt)
    R = _cartesian(cm_pt)
    d = r - R
    dist = float(np.linalg.norm(d))
    if dist <= eps_core:
        raise SingularPointError(f"|r - R| = {dist:.2e} <= eps_core={eps_core}")
    q, th, ph = internal_pt
    qvec = q * np.array([math.sin(th) * math.cos(ph), math.sin(th) * math.sin(ph), math.cos(th)])
    return float(np.dot(qvec, d)) / dist**3


def decomposed_dipole_kernel(
    beam_pt: CylPoint,
    cm_pt: CylPoint,
    internal_pt: SphPoint,
    eps_core: float = EPS_CORE_DEFAULT,
) -> float:
    """Dipole coupling through the geometric factors; identical to
    ``dipole_kernel`` up to rounding."""
    g = extract_geometric_factors(beam_pt, cm_pt, internal_pt.theta)
    denom_sq = g.F - g.G * math.cos(beam_pt.phi - cm_pt.phi)
    if denom_sq <= eps_core * eps_core:
        raise SingularPointError(f"|r - R|^2 = {denom_sq:.2e} <= eps_core^2")
    q = internal_pt.r
    phi_e = internal_pt.phi
    num = (
        q * g.chi_r * math.cos(phi_e - beam_pt.phi)
        - q * g.chi_R * math.cos(phi_e - cm_pt.phi)
        + q * g.eta
    )
    return num / denom_sq**1.5


class YAlpha(NamedTuple):
    value: float
    error: float


def y_batch(n: int, F, G, rel_tol: float = 1e-11, max_points: int = 1 << 17):
    """Vectorized  int_0^{2pi} cos(n y) [F - G cos y]^{-3/2} dy  for arrays F, G.

    Periodic-trapezoid refinement with point doubling; spectrally convergent
    away from F = G.  Returns (values, error_estimates, n_evals).
    """
    F = np.atleast_1d(np.asarray(F, dtype=float))
    G = np.atleast_1d(np.asarray(G, dtype=float))
    n = abs(int(n))
    npts = F.size
    vals = np.zeros(npts)
    errs = np.full(npts, np.inf)
    neval = 0

    N = 32
    y = np.arange(N) * (2.0 * math.pi / N)
    integ = np.cos(n * y)[None, :] * (F[:, None] - G[:, None] * np.cos(y)[None, :]) ** -1.5
    vals = integ.sum(axis=1) * (2.0 * math.pi / N)
    neval += npts * N
    active = np.arange(npts)
    while active.size and N < max_points:
        ymid = (np.arange(N) + 0.5) * (2.0 * math.pi / N)
        Fa, Ga = F[active], G[active]
        integ = np.cos(n * ymid)[None, :] * (Fa[:, None] - Ga[:, None] * np.cos(ymid)[None, :]) ** -1.5
        neval += active.size * N
        new = 0.5 * vals[active] + integ.sum(axis=1) * (math.pi / N)
        delta = np.abs(new - vals[active])
        vals[active] = new
        errs[active] = delta
        scale = np.maximum(np.abs(new), 1e-300)
        active = active[delta > rel_tol * scale]
        N *= 2
    return vals, errs, neval


def y_closed_batch(n: int, F, G):
    """Vectorized closed form of the azimuthal integral for n in {0, 1}.

    Used by the matrix-element engine where millions of (F, G) pairs arise;
    equivalent to ``y_batch`` (the two paths are cross-checked to 1e-10).
    The n = 1 form has a K - E cancellation, so small G/F switches to the
    series in G/F.
    """
    from scipy import special as _sp

    F = np.asarray(F, dtype=float)
    G = np.asarray(G, dtype=float)
    m = 2.0 * G / (F + G)
    E = _sp.ellipe(m)
    sfg = np.sqrt(F + G)
    if n == 0:
        return 4.0 * E / ((F - G) * sfg)
    if abs(n) != 1:
        raise ValueError("closed-form batch covers n in {0, 1}")
    u = G / F
    small = u < 1e-4
    out = np.empty_like(F)
    if np.any(small):
        us, Fs = u[small], F[small]
        out[small] = Fs**-1.5 * (1.5 * math.pi * us + (105.0 * math.pi / 64.0) * us**3)
    big = ~small
    if np.any(big):
        K = _sp.ellipk(m[big])
        out[big] = 4.0 / (G[big] * sfg[big]) * (F[big] * E[big] / (F[big] - G[big]) - K)
    return out


def y_values(n: int, F, G, rel_tol: float = 1e-11):
    """Azimuthal integral values for array (F, G): closed form for |n| <= 1,
    refining trapezoid otherwise."""
    if abs(n) <= 1:
        return y_closed_batch(abs(n), F, G)
    vals, _, _ = y_batch(n, F, G, rel_tol=rel_tol)
    return vals


def y_diff01_closed(F, G):
    """Y(0) - Y(1) = 4 (K - E) / (G sqrt(F + G)), evaluated without the
    catastrophic cancellation of forming the two integrals separately.

    Only log-singular as F -> G (against the 1/(F - G) blow-up of the
    integrals themselves), which is what the matrix-element integrands
    actually contain once the odd part is split off.
    """
    from scipy import special as _sp

    F = np.asarray(F, dtype=float)
    G = np.asarray(G, dtype=float)
    m = 2.0 * G / (F + G)
    out = np.empty_like(F)
    small = m < 1e-4
    if np.any(small):
        ms = m[small]
        out[small] = (
            2.0 * math.pi * (F[small] + G[small]) ** -1.5
            * (1.0 + 0.375 * ms + (15.0 / 64.0) * ms * ms)
        )
    big = ~small
    if np.any(big):
        mb = m[big]
        out[big] = 4.0 * (_sp.ellipk(mb) - _sp.ellipe(mb)) / (G[big] * np.sqrt(F[big] + G[big]))
    return out


def y_alpha(n_eff: int, F: float, G: float, tol: float = 1e-10) -> YAlpha:
    """Generic azimuthal integral  int_0^{2pi} e^{i n y} [F - G cos y]^{-3/2} dy.

    Real by symmetry and even in n.  Requires F > G >= 0 strictly; at F <= G
    the integrand is non-integrable and a SingularGeometryError asks the
    caller to subdivide.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    if G < 0:
        raise ValueError("G must be non-negative")
    if F <= G:
        raise SingularGeometryError(f"need F > G, got F={F}, G={G}")
    vals, errs, _ = y_batch(n_eff, [F], [G], rel_tol=tol)
    return YAlpha(float(vals[0]), float(errs[0]))


def y_alpha_elliptic(n_eff: int, F: float, G: float) -> float:
    """Closed form of ``y_alpha`` through complete elliptic integrals, |n_eff| <= 2.

    Retained as an independent cross-check of the quadrature path.
    """
    n = abs(int(n_eff))
    if n > 2:
        raise ValueError("closed form implemented for |n_eff| <= 2 only")
    if F <= G or G < 0:
        raise SingularGeometryError(f"need F > G >= 0, got F={F}, G={G}")
    if G == 0.0:
        return 2.0 * math.pi * F**-1.5 if n == 0 else 0.0
    k = math.sqrt(2.0 * G / (F + G))
    K, E = elliptic_ek(k)
    sFG = math.sqrt(F + G)
    i0 = 4.0 * E / ((F - G) * sFG)
    if n == 0:
        return i0
    i1 = 4.0 / (G * sFG) * (F * E / (F - G) - K)
    if n == 1:
        return i1
    i_mh = 4.0 * K / sFG                 # int [F - G cos]^{-1/2}
    i_ph = 4.0 * sFG * E                 # int [F - G cos]^{+1/2}
    c1 = (F * i_mh - i_ph) / G           # int cos(y) [F - G cos]^{-1/2}
    j2 = (F * i1 - c1) / G               # int cos^2(y) [F - G cos]^{-3/2}
    return 2.0 * j2 - i0
