"""Golden-rule transition rates and the dichroic signal.

Rates are relative (proportionality constant 1): Gamma_l is the sum of
|M|^2 weighted by the density of states of each final magnetic sublevel,
taken over every allowed dipole channel m -> m' = m +/- 1 of a target family
with uniformly populated initial sublevels.  For equal sublevel weights the
two beam helicities pump mirror-image channel sets of identical strength and
no dichroism survives; unequal weights are the one and only source of
contrast.

Accumulation uses exactly rounded summation, so mirroring the weight table in
m' maps Gamma_+ and Gamma_- onto each other bit-for-bit and the signal flips
sign exactly.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Mapping, Sequence

from .kernels import DIPOLE, KernelKind
from .matelem import QuadratureConfig, Transition, compute_matrix_element
from .states import BeamState, CenterOfMassState, CompositeState, InternalState

__all__ = [
    "SublevelDOS",
    "TargetFamily",
    "ChannelContribution",
    "DichroismReport",
    "transition_rate",
    "family_amplitudes",
    "dichroic_signal",
]


@dataclass(frozen=True)
class SublevelDOS:
    """Relative density-of-states weight per final magnetic quantum number.

    Sublevels absent from the map carry weight zero.  Weights must be
    non-negative with at least one strictly positive.
    """

    weights: Mapping[int, float]

    def __post_init__(self):
        if not self.weights:
            raise ValueError("density-of-states table must not be empty")
        if any(w < 0 for w in self.weights.values()):
            raise ValueError("density-of-states weights must be non-negative")
        if not any(w > 0 for w in self.weights.values()):
            raise ValueError("at least one density-of-states weight must be positive")

    def __getitem__(self, mp: int) -> float:
        return float(self.weights.get(mp, 0.0))

    def mirrored(self) -> "SublevelDOS":
        """The m' -> -m' reflection of the table."""
        return SublevelDOS({-k: v for k, v in self.weights.items()})

    @staticmethod
    def uniform(ell: int, weight: float = 1.0) -> "SublevelDOS":
        return SublevelDOS({mp: weight for mp in range(-ell, ell + 1)})


@dataclass(frozen=True)
class TargetFamily:
    """A (n, ell) -> (n', ell') transition family; all initial sublevels are
    populated with equal weight."""

    initial_n: int
    initial_ell: int
    final_n: int
    final_ell: int
    bohr: float = 1.0

    def initial_m_values(self) -> range:
        return range(-self.initial_ell, self.initial_ell + 1)


@dataclass(frozen=True)
class ChannelContribution:
    l: int
    lp: int
    m: int
    mp: int
    abs_M: float
    weight: float
    contribution: float


def transition_rate(
    l: int,
    transitions: Sequence[tuple[int, int, complex]],
    dos: SublevelDOS,
) -> float:
    """Gamma_l = sum |M(m -> m')|^2 rho~(m') over the supplied channels.

    ``transitions`` holds (m, m', matrix element) triples computed with a
    consistent configuration.  Relative units; the proportionality constant
    is fixed to one.
    """
    if not transitions:
        raise ValueError("transition list must not be empty")
    return math.fsum(abs(M) ** 2 * dos[mp] for _, mp, M in transitions)


def family_amplitudes(
    family: TargetFamily,
    l: int,
    *,
    beam: BeamState,
    cm: CenterOfMassState,
    kernel: KernelKind = DIPOLE,
    cfg: QuadratureConfig | None = None,
) -> list[tuple[int, int, complex]]:
    """Matrix elements of every dipole channel m -> m' = m + sign(l) pumped by
    beam winding l (the beam sheds |one| unit: l -> l - sign(l))."""
    if l == 0:
        raise ValueError("helicity comparison needs |l| >= 1")
    cfg = cfg or QuadratureConfig()
    step = 1 if l > 0 else -1
    out = []
    for m in family.initial_m_values():
        mp = m + step
        if abs(mp) > family.final_ell:
            continue
        ti = InternalState(family.initial_n, family.initial_ell, m, family.bohr)
        tf = InternalState(family.final_n, family.final_ell, mp, family.bohr)
        tr = Transition(
            CompositeState(replace(beam, l=l), ti, cm),
            CompositeState(replace(beam, l=l - step), tf, cm),
            kernel,
        )
        me = compute_matrix_element(tr, cfg)
        out.append((m, mp, me.value))
    return out


@dataclass(frozen=True)
class DichroismReport:
    l: int
    gamma_plus: float
    gamma_minus: float
    signal: float
    channels: list[ChannelContribution] = field(default_factory=list)
    dos: dict[int, float] = field(default_factory=dict)

    def __post_init__(self):
        if self.gamma_plus < 0 or self.gamma_minus < 0:
            raise ValueError("rates must be non-negative")
        if not -1.0 <= self.signal <= 1.0:
            raise ValueError("signal must lie in [-1, 1]")


def dichroic_signal(
    family: TargetFamily,
    dos: SublevelDOS,
    l: int,
    *,
    beam: BeamState,
    cm: CenterOfMassState,
    kernel: KernelKind = DIPOLE,
    cfg: QuadratureConfig | None = None,
    amplitudes: tuple[Sequence, Sequence] | None = None,
) -> DichroismReport:
    """Compare the rates pumped by beam windings +|l| and -|l|.

    signal = (Gamma_l - Gamma_{-l}) / (Gamma_l + Gamma_{-l}); zero for a
    uniform weight table, antisymmetric under l -> -l and under mirroring the
    weight table in m'.  ``amplitudes`` optionally reuses precomputed
    (plus_list, minus_list) channel amplitudes.
    """
    if l == 0:
        raise ValueError("|l| >= 1 required")
    labs = abs(l)
    if amplitudes is None:
        plus = family_amplitudes(family, labs, beam=beam, cm=cm, kernel=kernel, cfg=cfg)
        minus = family_amplitudes(family, -labs, beam=beam, cm=cm, kernel=kernel, cfg=cfg)
    else:
        plus, minus = amplitudes
    gamma_plus = transition_rate(labs, plus, dos)
    gamma_minus = transition_rate(-labs, minus, dos)
    total = gamma_plus + gamma_minus
    if total > 0.0:
        signal = (gamma_plus - gamma_minus) / total if l > 0 else (gamma_minus - gamma_plus) / total
    else:
        signal = 0.0

    channels = []
    for sign, items in ((+labs, plus), (-labs, minus)):
        step = 1 if sign > 0 else -1
        for m, mp, M in items:
            channels.append(
                ChannelContribution(
                    l=sign,
                    lp=sign - step,
                    m=m,
                    mp=mp,
                    abs_M=abs(M),
                    weight=dos[mp],
                    contribution=abs(M) ** 2 * dos[mp],
                )
            )
    return DichroismReport(
        l=l,
        gamma_plus=gamma_plus,
        gamma_minus=gamma_minus,
        signal=signal,
        channels=channels,
        dos=dict(sorted(dos.weights.items())),
    )
