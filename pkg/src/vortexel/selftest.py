"""Built-in invariant suite behind ``vortexel selftest``.

A fast subset of the package's correctness gates: special-function
identities, the kernel decomposition identity, the azimuthal-integral closed
forms, the forbidden-channel floor, channel conjugation and helicity rate
equality.  Each check prints one pass/fail line; the suite passes only if
every check does.
"""
from __future__ import annotations

import math

import numpy as np

from .dichroism import SublevelDOS, TargetFamily, dichroic_signal
from .kernels import (
    COULOMB,
    DIPOLE,
    CylPoint,
    SphPoint,
    decomposed_dipole_kernel,
    dipole_kernel,
    y_alpha,
    y_alpha_elliptic,
)
from .matelem import (
    QuadratureConfig,
    Transition,
    channel_amplitudes,
    compute_matrix_element,
)
from .specfun import RadialQuantumNumbers, bessel_j, hydrogenic_radial, spherical_harmonic
from .states import BeamState, CenterOfMassState, CompositeState, InternalState
from . import quadrature

_FAST_BEAM = BeamState(k_z=100.0, k_rho=5.0, l=1, rho_max=6.0, z_len=16.0)
_FAST_CM = CenterOfMassState(mode="pinned", R=2.0, Z=1.0)
_FAST_CFG = QuadratureConfig(rel_tol=1e-6, max_evals=400_000)


def _check_bessel() -> tuple[bool, str]:
    x = np.linspace(0.05, 30.0, 100)
    worst = 0.0
    for n in range(0, 21):
        lhs = bessel_j(-n, x)
        rhs = (-1.0) ** n * bessel_j(n, x)
        worst = max(worst, float(np.max(np.abs(lhs - rhs))))
        if n >= 1:
            rec = bessel_j(n - 1, x) + bessel_j(n + 1, x) - 2.0 * n / x * bessel_j(n, x)
            scale = np.maximum(np.abs(bessel_j(n, x)), 1e-12)
            worst = max(worst, float(np.max(np.abs(rec) / (2.0 * n / x * scale + 1.0))))
    return worst < 1e-10, f"max residual {worst:.2e}"


def _check_radial_norm() -> tuple[bool, str]:
    worst = 0.0
    for n in range(1, 5):
        for ell in range(0, n):
            qn = RadialQuantumNumbers(n, ell, 1.0)
            res = quadrature.integrate(
                lambda p, qn=qn: hydrogenic_radial(qn, p[:, 0]) ** 2 * p[:, 0] ** 2,
                [0.0], [45.0 * n], rel_tol=1e-12, abs_tol=1e-300,
                max_evals=200_000, initial_splits=[8],
            )
            worst = max(worst, abs(res.value.real - 1.0))
    return worst < 1e-10, f"max |norm-1| {worst:.2e}"


def _check_sph_orthonormal() -> tuple[bool, str]:
    nth, nph = 64, 64
    xt, wt = np.polynomial.legendre.leggauss(nth)
    th = 0.5 * math.pi * (xt + 1.0)
    wth = 0.5 * math.pi * wt * np.sin(th)
    ph = np.arange(nph) * 2.0 * math.pi / nph
    wph = 2.0 * math.pi / nph
    pairs = [(l, m) for l in range(0, 4) for m in range(-l, l + 1)]
    worst = 0.0
    for i, (l1, m1) in enumerate(pairs):
        y1 = spherical_harmonic(l1, m1, th[:, None], ph[None, :])
        for l2, m2 in pairs[i:]:
            y2 = spherical_harmonic(l2, m2, th[:, None], ph[None, :])
            val = np.einsum("t,tp->", wth, np.conj(y1) * y2) * wph
            expect = 1.0 if (l1, m1) == (l2, m2) else 0.0
            worst = max(worst, abs(val - expect))
    return worst < 1e-10, f"max deviation {worst:.2e}"


def _check_kernel_identity() -> tuple[bool, str]:
    rng = np.random.default_rng(20240915)
    worst = 0.0
    for _ in range(10_000):
        beam_pt = CylPoint(rng.uniform(0.1, 10), rng.uniform(0, 2 * math.pi), rng.uniform(-8, 8))
        cm_pt = CylPoint(rng.uniform(0.0, 6), rng.uniform(0, 2 * math.pi), rng.uniform(-4, 4))
        int_pt = SphPoint(rng.uniform(0.0, 4), rng.uniform(0, math.pi), rng.uniform(0, 2 * math.pi))
        try:
            direct = dipole_kernel(beam_pt, cm_pt, int_pt)
            decomp = decomposed_dipole_kernel(beam_pt, cm_pt, int_pt)
        except ValueError:
            continue
        worst = max(worst, abs(direct - decomp) / max(abs(direct), 1e-30))
    return worst < 1e-12, f"max rel diff {worst:.2e}"


def _check_yalpha() -> tuple[bool, str]:
    worst = 0.0
    for n in (0, 1, 2):
        for F in (2.0, 5.0):
            for g_frac in (0.2, 0.5, 0.8):
                G = g_frac * F
                quad_val = y_alpha(n, F, G, tol=1e-12).value
                closed = y_alpha_elliptic(n, F, G)
                worst = max(worst, abs(quad_val - closed) / max(abs(closed), 1e-30))
    return worst < 1e-10, f"max rel diff {worst:.2e}"


def _fast_transition(l, lp, m, mp, kernel=DIPOLE):
    ti = InternalState(1, 0, m)
    tf = InternalState(2, 1, mp)
    return Transition(
        CompositeState(BeamState(k_z=_FAST_BEAM.k_z, k_rho=_FAST_BEAM.k_rho, l=l,
                                 rho_max=_FAST_BEAM.rho_max, z_len=_FAST_BEAM.z_len), ti, _FAST_CM),
        CompositeState(BeamState(k_z=_FAST_BEAM.k_z, k_rho=_FAST_BEAM.k_rho, l=lp,
                                 rho_max=_FAST_BEAM.rho_max, z_len=_FAST_BEAM.z_len), tf, _FAST_CM),
        kernel,
    )


def _check_forbidden_floor() -> tuple[bool, str]:
    allowed = compute_matrix_element(_fast_transition(1, 0, 0, 1), _FAST_CFG)
    forbidden = compute_matrix_element(
        _fast_transition(2, 0, 0, 1), _FAST_CFG, no_shortcircuit=True
    )
    ratio = abs(forbidden.value) / abs(allowed.value)
    return ratio < 1e-8, f"forbidden/allowed = {ratio:.2e}"


def _check_q_conj_s() -> tuple[bool, str]:
    amps = channel_amplitudes(_fast_transition(1, 0, 0, 1), _FAST_CFG)
    rel = abs(np.conj(amps.Q) - amps.S) / abs(amps.Q)
    return rel < 1e-6, f"|conj(Q)-S|/|Q| = {rel:.2e}"


def _check_rate_equality() -> tuple[bool, str]:
    family = TargetFamily(2, 1, 3, 2)
    dos = SublevelDOS.uniform(2)
    rep = dichroic_signal(
        family, dos, 1, beam=_FAST_BEAM, cm=_FAST_CM, kernel=DIPOLE,
        cfg=QuadratureConfig(rel_tol=1e-5, max_evals=300_000),
    )
    rel = abs(rep.gamma_plus - rep.gamma_minus) / (rep.gamma_plus + rep.gamma_minus)
    return rel < 1e-6, f"|G+-G-|/(G++G-) = {rel:.2e}"


CHECKS = [
    ("bessel reflection & recurrence", _check_bessel),
    ("hydrogenic radial norms", _check_radial_norm),
    ("spherical-harmonic orthonormality", _check_sph_orthonormal),
    ("kernel decomposition identity", _check_kernel_identity),
    ("azimuthal integral vs closed form", _check_yalpha),
    ("forbidden-channel floor", _check_forbidden_floor),
    ("channel conjugation Q* = S", _check_q_conj_s),
    ("helicity rate equality", _check_rate_equality),
]


def run_selftest(verbose: bool = True) -> bool:
    all_ok = True
    for name, check in CHECKS:
        ok, detail = check()
        all_ok &= ok
        if verbose:
            print(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
    if verbose:
        print("selftest:", "all checks passed" if all_ok else "FAILURES present")
    return all_ok
