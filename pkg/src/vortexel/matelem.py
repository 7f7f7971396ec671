"""Transition matrix elements for a vortex beam on a hydrogenic target.

The engine reduces all azimuthal integrations analytically: the interaction
depends on azimuths only through differences, so the substitution
y = Phi_r - Phi_R turns the triple azimuthal integral into a Kronecker-delta
channel structure (Q / S / U, plus total-L_z conservation for the exact
kernel) multiplied by the generic integrals ``y_alpha``.  What remains is a
low-dimensional adaptive cubature over radial, axial and polar coordinates.

Channel structure of the dipole coupling (about the beam axis):

    Q : (l + L) -> (l' + L' + 1),  m' = m + 1   (target gains one unit)
    S : (l + L) -> (l' + L' - 1),  m' = m - 1   (target loses one unit)
    U : (l + L) = (l' + L'),       m' = m       (axial-displacement term)

A ``--no-shortcircuit`` mode integrates classically-forbidden entries with the
brute tensor-grid path so the nulls are verified numerically rather than
asserted.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, replace
from typing import NamedTuple, Sequence

import numpy as np

from . import quadrature, reference
from .kernels import DIPOLE, KernelKind, y_diff01_closed, y_values
from .specfun import bessel_j, hydrogenic_radial, sph_harm_theta
from .states import BeamState, CenterOfMassState, CompositeState, InternalState

__all__ = [
    "Transition",
    "SelectionChannel",
    "MatrixElement",
    "QuadratureConfig",
    "ChannelAmplitudes",
    "ScanEntry",
    "NonConvergence",
    "DipoleValidityWarning",
    "classify_channel",
    "compute_matrix_element",
    "channel_amplitudes",
    "selection_scan",
]


class DipoleValidityWarning(UserWarning):
    """The internal radial extent is not small against the beam-target distance."""


class NonConvergence(RuntimeError):
    """Quadrature budget exhausted; ``result`` carries the best estimate."""

    def __init__(self, message: str, result: "MatrixElement"):
        super().__init__(message)
        self.result = result


@dataclass(frozen=True)
class QuadratureConfig:
    """Tolerances and budgets for one matrix element.

    ``seed`` is recorded for reproducibility bookkeeping; the engine is fully
    deterministic and never draws random numbers.  ``eps_core`` caps the
    kernel at sub-core distances (the singularities are integrable, so the
    cap only regularizes point evaluations; results are insensitive at the
    documented level).
    """

    rel_tol: float = 1e-6
    abs_tol: float = 1e-14
    max_evals: int = 2_000_000
    seed: int = 0
    eps_core: float = 1e-3
    n_azimuthal: int = 64
    y_rel_tol: float = 1e-11

    def __post_init__(self):
        if self.rel_tol <= 0 or self.abs_tol <= 0:
            raise ValueError("tolerances must be positive")
        if self.max_evals <= 0:
            raise ValueError("max_evals must be positive")
        if self.eps_core <= 0:
            raise ValueError("eps_core must be positive")
        if self.n_azimuthal < 8:
            raise ValueError("n_azimuthal must be at least 8")


@dataclass(frozen=True)
class Transition:
    initial: CompositeState
    final: CompositeState
    kernel: KernelKind = DIPOLE

    def __post_init__(self):
        bi, bf = self.initial.beam, self.final.beam
        if (bi.rho_max, bi.z_len) != (bf.rho_max, bf.z_len):
            raise ValueError("initial and final beams must share the normalization cylinder")
        if self.initial.internal.bohr != self.final.internal.bohr:
            raise ValueError("internal states must share the effective Bohr radius")
        ci, cf = self.initial.cm, self.final.cm
        if ci.mode != cf.mode:
            raise ValueError("center-of-mass modes of initial and final state differ")
        if ci.is_pinned and (ci.R, ci.Phi_R, ci.Z) != (cf.R, cf.Phi_R, cf.Z):
            raise ValueError("a pinned center of mass cannot move during the transition")


@dataclass(frozen=True)
class SelectionChannel:
    channel: str  # "Q" | "S" | "U" | "forbidden"
    delta_l: int
    delta_L: int
    delta_m: int

    @property
    def conserves_lz(self) -> bool:
        return self.delta_l + self.delta_L + self.delta_m == 0


@dataclass(frozen=True)
class MatrixElement:
    value: complex
    abs_err: float
    channel: SelectionChannel
    quadrature_evals: int


class ChannelAmplitudes(NamedTuple):
    Q: complex
    S: complex
    U: complex


def classify_channel(l: int, lp: int, L: int, Lp: int, m: int, mp: int) -> SelectionChannel:
    """Classify a transition by the dipole delta structure.

    A pinned center of mass enters with L = L' = 0.  Exactly one of Q, S, U
    matches, otherwise the transition is dipole-forbidden.
    """
    dl, dL, dm = l - lp, L - Lp, m - mp
    if dl + dL == 1 and dm == -1:
        name = "Q"
    elif dl + dL == -1 and dm == 1:
        name = "S"
    elif dl + dL == 0 and dm == 0:
        name = "U"
    else:
        name = "forbidden"
    return SelectionChannel(name, dl, dL, dm)


def _transition_numbers(t: Transition):
    l, lp = t.initial.beam.l, t.final.beam.l
    if t.initial.cm.is_pinned:
        L = Lp = 0
    else:
        L, Lp = t.initial.cm.L, t.final.cm.L
    m, mp = t.initial.internal.m, t.final.internal.m
    return l, lp, L, Lp, m, mp


# ---------------------------------------------------------------------------
# shared one-dimensional overlaps
# ---------------------------------------------------------------------------

def _q_max(si, sf) -> float:
    """Radial cutoff where the product R_i R_f has decayed to ~1e-9 of its
    peak (combined decay rate (1/n_i + 1/n_f)/bohr)."""
    return 36.0 * si.bohr / (1.0 / si.n + 1.0 / sf.n)


def _radial_overlap(t: Transition, cfg: QuadratureConfig):
    """int q^3 R_f(q) R_i(q) dq -- the dipole radial content."""
    ri = t.initial.internal.radial
    rf = t.final.internal.radial
    q_max = _q_max(t.initial.internal, t.final.internal)
    res = quadrature.integrate(
        lambda p: hydrogenic_radial(ri, p[:, 0]) * hydrogenic_radial(rf, p[:, 0]) * p[:, 0] ** 3,
        [0.0],
        [q_max],
        rel_tol=1e-12,
        abs_tol=1e-300,
        max_evals=200_000,
        initial_splits=[8],
    )
    return res.value.real, res.error, res.neval


def _theta_overlap(t: Transition, weight: str, cfg: QuadratureConfig):
    """int T_f T_i w(theta) sin(theta) dtheta with w = sin or cos."""
    si, sf = t.initial.internal, t.final.internal

    def f(p):
        th = p[:, 0]
        w = np.sin(th) if weight == "sin" else np.cos(th)
        return (
            sph_harm_theta(sf.ell, sf.m, th)
            * sph_harm_theta(si.ell, si.m, th)
            * w
            * np.sin(th)
        )

    res = quadrature.integrate(
        f, [0.0], [math.pi], rel_tol=1e-12, abs_tol=1e-300, max_evals=100_000, initial_splits=[4]
    )
    return res.value.real, res.error, res.neval


def _rho_splits(beam: BeamState) -> int:
    return max(4, min(64, int(round(beam.k_rho * beam.rho_max / math.pi))))


def _z_splits(dk: float, z_len: float) -> int:
    return max(4, min(64, int(round(abs(dk) * z_len / math.pi)) + 4))


# ---------------------------------------------------------------------------
# reduced dipole paths
# ---------------------------------------------------------------------------

def _dipole_bracket_orders(ch: SelectionChannel) -> tuple[int, int]:
    """Azimuthal orders (chi_r term, chi_R term) of the Y integrals per channel."""
    dl = ch.delta_l
    if ch.channel == "Q":
        return abs(dl - 1), abs(dl)
    if ch.channel == "S":
        return abs(dl + 1), abs(dl)
    raise ValueError("bracket orders exist for Q and S channels only")


def _dipole_bracket(ch: SelectionChannel, rho, R, F_eff, G, y_rel_tol):
    """The azimuthally reduced geometric core of one channel.

    Q/S:  0.5 [rho Y^{n1} - R Y^{n2}], computed through the split
    0.5 [(rho - R) Y^{n1} + R (Y^{n1} - Y^{n2})] so the near-coincidence
    region (F -> G) sees only the odd 1/d term plus a mild log, instead of a
    difference of two diverging integrals.  U: the core is (z - Z) Y^{|dl|},
    handled by the caller.
    """
    n1, n2 = _dipole_bracket_orders(ch)
    y1 = y_values(n1, F_eff, G, y_rel_tol)
    if n2 == n1:
        return 0.5 * (rho - R) * y1
    if {n1, n2} == {0, 1}:
        diff = y_diff01_closed(F_eff, G)
        if (n1, n2) == (1, 0):
            diff = -diff
        return 0.5 * ((rho - R) * y1 + R * diff)
    y2 = y_values(n2, F_eff, G, y_rel_tol)
    return 0.5 * (rho * y1 - R * y2)


def _geo_integrand_pinned(t: Transition, ch: SelectionChannel, cfg: QuadratureConfig):
    bi, bf = t.initial.beam, t.final.beam
    cm = t.initial.cm
    R, Z = cm.R, cm.Z
    dk = bi.k_z - bf.k_z
    eps2 = cfg.eps_core**2

    if ch.channel in ("Q", "S"):

        def f(p):
            rho, z = p[:, 0], p[:, 1]
            F = rho * rho + R * R + (z - Z) ** 2 + eps2
            G = 2.0 * rho * R
            bracket = _dipole_bracket(ch, rho, R, F, G, cfg.y_rel_tol)
            return rho * bessel_j(bf.l, bf.k_rho * rho) * bessel_j(bi.l, bi.k_rho * rho) * bracket * np.exp(1j * dk * z)

    else:  # U channel

        def f(p):
            rho, z = p[:, 0], p[:, 1]
            F = rho * rho + R * R + (z - Z) ** 2 + eps2
            G = 2.0 * rho * R
            y0 = y_values(abs(ch.delta_l), F, G, cfg.y_rel_tol)
            return rho * bessel_j(bf.l, bf.k_rho * rho) * bessel_j(bi.l, bi.k_rho * rho) * (z - Z) * y0 * np.exp(1j * dk * z)

    return f


def _reduced_pinned_dipole(t: Transition, ch: SelectionChannel, cfg: QuadratureConfig) -> MatrixElement:
    bi, bf = t.initial.beam, t.final.beam
    iq, eq, nq = _radial_overlap(t, cfg)
    ith, eth, nth = _theta_overlap(t, "sin" if ch.channel in ("Q", "S") else "cos", cfg)

    geo = quadrature.integrate(
        _geo_integrand_pinned(t, ch, cfg),
        [0.0, -0.5 * bi.z_len],
        [bi.rho_max, 0.5 * bi.z_len],
        rel_tol=cfg.rel_tol,
        abs_tol=cfg.abs_tol,
        max_evals=max(1, cfg.max_evals - nq - nth),
        initial_splits=[_rho_splits(bi), _z_splits(bi.k_z - bf.k_z, bi.z_len)],
    )
    pref = bf.norm_constant() * bi.norm_constant() * 2.0 * math.pi * t.kernel.q_scale
    value = pref * iq * ith * geo.value
    abs_err = abs(pref) * (
        eq * abs(ith * geo.value) + abs(iq) * eth * abs(geo.value) + abs(iq * ith) * geo.error
    )
    evals = nq + nth + geo.neval
    me = MatrixElement(value, abs_err, ch, evals)
    if not geo.converged:
        raise NonConvergence(
            f"matrix element did not converge within {cfg.max_evals} evaluations", me
        )
    return me


def _reduced_cyl_dipole(t: Transition, ch: SelectionChannel, cfg: QuadratureConfig) -> MatrixElement:
    """Cylindrical-wave center of mass: 4D quadrature in the sum/difference
    coordinates v = rho - R, s = rho + R, w = z - Z, tau = z + Z.

    The near-coincidence region of beam and center-of-mass coordinates is the
    plane v = w = 0; aligning it with coordinate axes lets the adaptive
    engine refine anisotropically instead of chasing a diagonal manifold.
    """
    bi, bf = t.initial.beam, t.final.beam
    ci, cf = t.initial.cm, t.final.cm
    iq, eq, nq = _radial_overlap(t, cfg)
    ith, eth, nth = _theta_overlap(t, "sin" if ch.channel in ("Q", "S") else "cos", cfg)
    dk = bi.k_z - bf.k_z
    dK = ci.K_z - cf.K_z
    eps2 = cfg.eps_core**2
    rho_max = bi.rho_max
    half_z = 0.5 * bi.z_len

    def f(p):
        v, s, w, tau = p[:, 0], p[:, 1], p[:, 2], p[:, 3]
        rho = 0.5 * (s + v)
        R = 0.5 * (s - v)
        z = 0.5 * (tau + w)
        Z = 0.5 * (tau - w)
        valid = (
            (rho >= 0.0) & (rho <= rho_max) & (R >= 0.0) & (R <= rho_max)
            & (np.abs(z) <= half_z) & (np.abs(Z) <= half_z)
        )
        rho = np.where(valid, rho, 1.0)
        R = np.where(valid, R, 1.0)
        F = rho * rho + R * R + w * w + eps2
        G = 2.0 * rho * R
        beam_part = rho * bessel_j(bf.l, bf.k_rho * rho) * bessel_j(bi.l, bi.k_rho * rho)
        cm_part = R * bessel_j(cf.L, cf.K_rho * R) * bessel_j(ci.L, ci.K_rho * R)
        phase = np.exp(1j * (dk * z + dK * Z))
        if ch.channel in ("Q", "S"):
            core = _dipole_bracket(ch, rho, R, F, G, cfg.y_rel_tol)
        else:
            core = w * y_values(abs(ch.delta_l), F, G, cfg.y_rel_tol)
        return np.where(valid, 0.25 * beam_part * cm_part * core * phase, 0.0)

    n_osc = max(_rho_splits(bi), _rho_splits_cm(ci, bi))
    geo = quadrature.integrate(
        f,
        [-rho_max, 0.0, -bi.z_len, -bi.z_len],
        [rho_max, 2.0 * rho_max, bi.z_len, bi.z_len],
        rel_tol=cfg.rel_tol,
        abs_tol=cfg.abs_tol,
        max_evals=max(1, cfg.max_evals - nq - nth),
        initial_splits=[2 * ((n_osc + 1) // 2), n_osc, 4, 4],
        batch_regions=16,
    )
    Bi = _cm_norm(ci, bi)
    Bf = _cm_norm(cf, bf)
    pref = (
        bf.norm_constant() * bi.norm_constant() * Bf * Bi * (2.0 * math.pi) ** 2 * t.kernel.q_scale
    )
    value = pref * iq * ith * geo.value
    abs_err = abs(pref) * (
        eq * abs(ith * geo.value) + abs(iq) * eth * abs(geo.value) + abs(iq * ith) * geo.error
    )
    me = MatrixElement(value, abs_err, ch, nq + nth + geo.neval)
    if not geo.converged:
        raise NonConvergence("cylindrical matrix element did not converge", me)
    return me


def _rho_splits_cm(cm: CenterOfMassState, beam: BeamState) -> int:
    return max(4, min(64, int(round(cm.K_rho * beam.rho_max / math.pi))))


def _cm_norm(cm: CenterOfMassState, beam: BeamState) -> float:
    from .states import _bessel_square_integral

    integral = _bessel_square_integral(abs(cm.L), cm.K_rho, beam.rho_max)
    return 1.0 / math.sqrt(2.0 * math.pi * beam.z_len * integral)


# ---------------------------------------------------------------------------
# reduced exact-Coulomb paths
# ---------------------------------------------------------------------------

def _coulomb_cell_values(t: Transition, cfg: QuadratureConfig, pts, pinned: bool):
    """Integrand for the exact kernel: outer coordinates coupled to a periodic
    trapezoid over the azimuth differences (u, w)."""
    bi, bf = t.initial.beam, t.final.beam
    si, sf = t.initial.internal, t.final.internal
    dl = bi.l - bf.l
    dm = si.m - sf.m
    dk = bi.k_z - bf.k_z
    qs = t.kernel.q_scale
    N = cfg.n_azimuthal
    az = np.arange(N) * (2.0 * math.pi / N)
    eu = np.exp(1j * dl * az)
    ew = np.exp(1j * dm * az)
    cos_u = np.cos(az)
    waz = (2.0 * math.pi / N) ** 2

    if pinned:
        rho, z, q, th = pts[:, 0], pts[:, 1], pts[:, 2], pts[:, 3]
        R = np.full_like(rho, t.initial.cm.R)
        Z = np.full_like(rho, t.initial.cm.Z)
    else:
        rho, z, q, th, R, Z = (pts[:, i] for i in range(6))

    st, ct = np.sin(th), np.cos(th)
    qp = qs * q * st                      # transverse internal radius
    qz = qs * q * ct
    eps2 = cfg.eps_core**2
    dn2 = (rho**2 + R**2 + (z - Z) ** 2)[:, None] - (2.0 * rho * R)[:, None] * cos_u[None, :]
    dn = np.sqrt(dn2 + eps2)
    pe2 = (R**2 + qp**2)[:, None] + (2.0 * R * qp)[:, None] * cos_u[None, :]  # |q_e, perp|^2 on w grid
    pe = np.sqrt(pe2)
    psi = np.arctan2(qp[:, None] * np.sin(az)[None, :], R[:, None] + qp[:, None] * cos_u[None, :])
    dz2 = ((z - Z) - qz) ** 2
    # d_e^2 over (pt, u, w)
    cos_uw = np.cos(az[None, :, None] - psi[:, None, :])
    de2 = (rho**2)[:, None, None] + pe2[:, None, :] - 2.0 * rho[:, None, None] * pe[:, None, :] * cos_uw + dz2[:, None, None]
    de = np.sqrt(de2 + eps2)
    kernel_e = 1.0 / de
    t_e = np.einsum("u,w,puw->p", eu, ew, kernel_e)
    # the -1/|r-R| term is w-independent: its w sum is a discrete delta on dm
    w_delta = ew.sum()
    t_n = (eu[None, :] / dn).sum(axis=1) * w_delta
    T = (t_e - t_n) * waz

    beam_part = rho * bessel_j(bf.l, bf.k_rho * rho) * bessel_j(bi.l, bi.k_rho * rho) * np.exp(1j * dk * z)
    int_part = (
        q**2
        * st
        * hydrogenic_radial(si.radial, q)
        * hydrogenic_radial(sf.radial, q)
        * sph_harm_theta(sf.ell, sf.m, th)
        * sph_harm_theta(si.ell, si.m, th)
    )
    out = beam_part * int_part * T
    if not pinned:
        ci, cf = t.initial.cm, t.final.cm
        dK = ci.K_z - cf.K_z
        out = out * R * bessel_j(cf.L, cf.K_rho * R) * bessel_j(ci.L, ci.K_rho * R) * np.exp(1j * dK * Z)
    return out


def _reduced_coulomb(t: Transition, ch: SelectionChannel, cfg: QuadratureConfig) -> MatrixElement:
    bi = t.initial.beam
    si, sf = t.initial.internal, t.final.internal
    pinned = t.initial.cm.is_pinned
    q_max = _q_max(si, sf)
    half_z = 0.5 * bi.z_len
    if pinned:
        lo = [0.0, -half_z, 0.0, 0.0]
        hi = [bi.rho_max, half_z, q_max, math.pi]
        splits = [_rho_splits(bi), 4, 5, 2]
        batch = 8
    else:
        lo = [0.0, -half_z, 0.0, 0.0, 0.0, -half_z]
        hi = [bi.rho_max, half_z, q_max, math.pi, bi.rho_max, half_z]
        splits = [_rho_splits(bi), 2, 3, 2, _rho_splits_cm(t.initial.cm, bi), 2]
        batch = 2

    geo = quadrature.integrate(
        lambda p: _coulomb_cell_values(t, cfg, p, pinned),
        lo,
        hi,
        rel_tol=cfg.rel_tol,
        abs_tol=cfg.abs_tol,
        max_evals=cfg.max_evals,
        initial_splits=splits,
        batch_regions=batch,
    )
    pref = t.final.beam.norm_constant() * bi.norm_constant()
    if not pinned:
        pref *= _cm_norm(t.initial.cm, bi) * _cm_norm(t.final.cm, t.final.beam) * 2.0 * math.pi
    value = pref * geo.value
    me = MatrixElement(value, abs(pref) * geo.error, ch, geo.neval)
    if not geo.converged:
        raise NonConvergence("exact-kernel matrix element did not converge", me)
    return me


# ---------------------------------------------------------------------------
# public entry points
# ---------------------------------------------------------------------------

def _dipole_validity_check(t: Transition):
    if not t.kernel.is_dipole:
        return
    extent = max(t.initial.internal.mean_radius(), t.final.internal.mean_radius())
    cm = t.initial.cm
    typical = cm.R if (cm.is_pinned and cm.R > 0) else 0.5 * t.initial.beam.rho_max
    if extent > 0.5 * typical:
        warnings.warn(
            f"internal radial extent {extent:.2f} is not small against the "
            f"beam-target distance scale {typical:.2f}; the dipole truncation "
            "may be inaccurate",
            DipoleValidityWarning,
            stacklevel=3,
        )


def _forbidden_numeric(t: Transition, ch: SelectionChannel, cfg: QuadratureConfig) -> MatrixElement:
    """Verify a forbidden-channel null by integrating it numerically.

    Dipole kernels go through the brute tensor path, whose periodic azimuthal
    sums produce the null from root-of-unity cancellation alone.  For the
    exact kernel the azimuthal average over the center-of-mass reference
    angle is evaluated as the same discrete root-of-unity sum and multiplies
    the (finite) azimuth-difference integral at loose tolerance.
    """
    if t.kernel.is_dipole:
        grids = reference.BruteGrids(n_azimuthal=max(32, min(cfg.n_azimuthal, 48)))
        value, neval = reference.brute_matrix_element(t, grids, eps_core=cfg.eps_core)
        return MatrixElement(value, abs(value), ch, neval)
    ring = reference.ring_factor(ch.delta_l + ch.delta_L + ch.delta_m, cfg.n_azimuthal)
    loose = replace(cfg, rel_tol=max(cfg.rel_tol, 1e-3), max_evals=min(cfg.max_evals, 300_000))
    try:
        core = _reduced_coulomb(t, ch, loose)
        core_value, neval = core.value, core.quadrature_evals
    except NonConvergence as exc:
        core_value, neval = exc.result.value, exc.result.quadrature_evals
    value = ring * core_value
    return MatrixElement(value, abs(value), ch, neval)


def compute_matrix_element(
    t: Transition, cfg: QuadratureConfig | None = None, *, no_shortcircuit: bool = False
) -> MatrixElement:
    """Evaluate <f| H |i> with an error estimate and the active channel.

    Forbidden transitions short-circuit to exactly zero unless
    ``no_shortcircuit`` asks for a numerical verification of the null, in
    which case the brute tensor-grid path integrates them directly.
    """
    cfg = cfg or QuadratureConfig()
    ch = classify_channel(*_transition_numbers(t))
    allowed = ch.channel != "forbidden" if t.kernel.is_dipole else ch.conserves_lz
    if not allowed:
        if not no_shortcircuit:
            return MatrixElement(0.0 + 0.0j, 0.0, ch, 0)
        return _forbidden_numeric(t, ch, cfg)

    _dipole_validity_check(t)
    if t.kernel.is_dipole:
        if t.initial.cm.is_pinned:
            return _reduced_pinned_dipole(t, ch, cfg)
        return _reduced_cyl_dipole(t, ch, cfg)
    return _reduced_coulomb(t, ch, cfg)


def channel_amplitudes(t: Transition, cfg: QuadratureConfig | None = None) -> ChannelAmplitudes:
    """The Q, S, U amplitudes of the transition family built on ``t``.

    The family shares the radial/axial content of ``t``: Q raises the target
    (m -> m+1) with beam winding +|l| -> +|l|-1, S is the helicity mirror
    (m -> m-1 with -|l| -> -|l|+1) and U keeps both unchanged.  For families
    symmetric about m = 0 the amplitudes satisfy conj(Q) = S.
    """
    cfg = cfg or QuadratureConfig()
    l0 = abs(t.initial.beam.l)
    si, sf = t.initial.internal, t.final.internal

    def variant(l_i, l_f, m_i, m_f):
        ti = replace(t.initial, beam=replace(t.initial.beam, l=l_i), internal=replace(si, m=m_i))
        tf = replace(t.final, beam=replace(t.final.beam, l=l_f), internal=replace(sf, m=m_f))
        return compute_matrix_element(Transition(ti, tf, t.kernel), cfg)

    m = si.m
    q = variant(l0, l0 - 1, m, m + 1)
    s = variant(-l0, -l0 + 1, m, m - 1)
    u = variant(l0, l0, m, m)
    return ChannelAmplitudes(q.value, s.value, u.value)


@dataclass(frozen=True)
class ScanEntry:
    l: int
    lp: int
    L: int
    Lp: int
    m: int
    mp: int
    channel: str
    abs_M: float
    abs_err: float
    evals: int


def selection_scan(
    *,
    beam: BeamState,
    transitions: Sequence[tuple[InternalState, InternalState]],
    cm: CenterOfMassState,
    l_values: Sequence[int],
    lp_values: Sequence[int],
    L_values: Sequence[int] = (0,),
    Lp_values: Sequence[int] = (0,),
    kernel: KernelKind = DIPOLE,
    cfg: QuadratureConfig | None = None,
    beam_final: BeamState | None = None,
    cm_final: CenterOfMassState | None = None,
    no_shortcircuit: bool = False,
    threads: int = 1,
) -> list[ScanEntry]:
    """Tabulate |M| over winding numbers and target transitions.

    With the exact kernel every entry violating total L_z conservation
    (l + L + m = l' + L' + m') is null; with the dipole kernel the nonzero
    entries are exactly the Q/S/U channels.
    """
    cfg = cfg or QuadratureConfig()
    for v in list(l_values) + list(lp_values):
        if abs(v) > 5:
            raise ValueError("scan ranges are limited to |l| <= 5")
    for ti, tf in transitions:
        if abs(ti.m) > 5 or abs(tf.m) > 5:
            raise ValueError("scan ranges are limited to |m| <= 5")
    beam_final = beam_final or beam
    cm_final = cm_final or cm

    jobs = []
    for ti, tf in transitions:
        for L in L_values:
            for Lp in Lp_values:
                for l in l_values:
                    for lp in lp_values:
                        jobs.append((l, lp, L, Lp, ti, tf))

    def run(job):
        l, lp, L, Lp, ti, tf = job
        cmi = cm if cm.is_pinned else replace(cm, L=L)
        cmf = cm_final if cm_final.is_pinned else replace(cm_final, L=Lp)
        tr = Transition(
            CompositeState(replace(beam, l=l), ti, cmi),
            CompositeState(replace(beam_final, l=lp), tf, cmf),
            kernel,
        )
        me = compute_matrix_element(tr, cfg, no_shortcircuit=no_shortcircuit)
        return ScanEntry(
            l, lp, L if not cm.is_pinned else 0, Lp if not cm_final.is_pinned else 0,
            ti.m, tf.m, me.channel.channel, abs(me.value), me.abs_err, me.quadrature_evals,
        )

    if threads > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=threads) as ex:
            return list(ex.map(run, jobs))
    return [run(j) for j in jobs]
