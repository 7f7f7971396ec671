"""Run configuration: one structured YAML (or JSON) file with nested sections
``beam / target / cm / kernel / quadrature / scan / dos / dichroism / output``.

Validation is strict: unknown keys are errors, not warnings, and every value
is range-checked here so a bad file fails before any computation starts.
Every emitted JSON report embeds the resolved configuration; re-running from
that embedded dict reproduces the report.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import yaml

from .dichroism import SublevelDOS, TargetFamily
from .kernels import KernelKind
from .matelem import QuadratureConfig, Transition
from .states import BeamState, CenterOfMassState, CompositeState, InternalState

__all__ = ["ConfigError", "RunConfig", "load_config"]


class ConfigError(ValueError):
    """A configuration file failed validation; the message names the key."""


def _want(value, kinds, key):
    if kinds is bool:
        if not isinstance(value, bool):
            raise ConfigError(f"key '{key}' must be a boolean, got {value!r}")
        return value
    if kinds is int:
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(f"key '{key}' must be an integer, got {value!r}")
        return value
    if kinds is float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"key '{key}' must be a number, got {value!r}")
        return float(value)
    if kinds is str:
        if not isinstance(value, str):
            raise ConfigError(f"key '{key}' must be a string, got {value!r}")
        return value
    raise AssertionError(kinds)


def _check_section(data: dict, spec: dict, path: str) -> dict:
    if not isinstance(data, dict):
        raise ConfigError(f"section '{path}' must be a mapping")
    out = {}
    for key in data:
        if key not in spec:
            raise ConfigError(f"unknown key '{path}.{key}'")
    for key, (kind, default) in spec.items():
        if key in data:
            if kind in (bool, int, float, str):
                out[key] = _want(data[key], kind, f"{path}.{key}")
            else:
                out[key] = data[key]
        else:
            out[key] = default
    return out


_BEAM_SPEC = {
    "k_z": (float, 100.0),
    "k_rho": (float, 5.0),
    "l": (int, 1),
    "l_final": (int, None),
    "k_z_final": (float, None),
    "k_rho_final": (float, None),
    "rho_max": (float, 20.0),
    "z_len": (float, 50.0),
    "amp_scale": (float, 1.0),
}
_STATE_SPEC = {"n": (int, None), "ell": (int, None), "m": (int, None)}
_TARGET_SPEC = {"bohr": (float, 1.0), "initial": (dict, None), "final": (dict, None)}
_CM_SPEC = {
    "mode": (str, "pinned"),
    "R": (float, 0.0),
    "Phi_R": (float, 0.0),
    "Z": (float, 0.0),
    "L": (int, 0),
    "L_final": (int, None),
    "K_z": (float, None),
    "K_rho": (float, None),
    "K_z_final": (float, None),
    "K_rho_final": (float, None),
}
_KERNEL_SPEC = {"variant": (str, "dipole"), "q_scale": (float, 1.0)}
_QUAD_SPEC = {
    "rel_tol": (float, 1e-6),
    "abs_tol": (float, 1e-14),
    "max_evals": (int, 2_000_000),
    "seed": (int, 0),
    "eps_core": (float, 1e-3),
    "n_azimuthal": (int, 64),
}
_SCAN_SPEC = {
    "l_values": (list, None),
    "lp_values": (list, None),
    "L_values": (list, [0]),
    "Lp_values": (list, [0]),
    "final_m_values": (list, None),
}
_DICHROISM_SPEC = {"l": (int, 1), "family": (dict, None)}
_FAMILY_SPEC = {
    "initial_n": (int, None),
    "initial_ell": (int, None),
    "final_n": (int, None),
    "final_ell": (int, None),
}
_OUTPUT_SPEC = {"dir": (str, "out"), "format": (str, "csv"), "plots": (bool, True)}

_TOP_KEYS = (
    "beam",
    "target",
    "cm",
    "kernel",
    "quadrature",
    "scan",
    "dos",
    "dichroism",
    "output",
)


@dataclass
class RunConfig:
    beam: dict = field(default_factory=dict)
    target: dict = field(default_factory=dict)
    cm: dict = field(default_factory=dict)
    kernel: dict = field(default_factory=dict)
    quadrature: dict = field(default_factory=dict)
    scan: dict | None = None
    dos: dict | None = None
    dichroism: dict | None = None
    output: dict = field(default_factory=dict)

    # -- factories ---------------------------------------------------------
    def make_beam(self, l: int | None = None, final: bool = False) -> BeamState:
        b = self.beam
        if final:
            winding = b["l_final"] if l is None else l
            if winding is None:
                raise ConfigError("key 'beam.l_final' is required for this command")
            kz = b["k_z_final"] if b["k_z_final"] is not None else b["k_z"]
            krho = b["k_rho_final"] if b["k_rho_final"] is not None else b["k_rho"]
        else:
            winding = b["l"] if l is None else l
            kz, krho = b["k_z"], b["k_rho"]
        try:
            return BeamState(
                k_z=kz, k_rho=krho, l=winding, rho_max=b["rho_max"], z_len=b["z_len"],
                amp_scale=b["amp_scale"],
            )
        except ValueError as exc:
            raise ConfigError(f"section 'beam': {exc}") from exc

    def make_internal(self, which: str) -> InternalState:
        st = self.target.get(which)
        if st is None:
            raise ConfigError(f"key 'target.{which}' is required")
        vals = _check_section(st, _STATE_SPEC, f"target.{which}")
        for k in ("n", "ell", "m"):
            if vals[k] is None:
                raise ConfigError(f"key 'target.{which}.{k}' is required")
        try:
            return InternalState(vals["n"], vals["ell"], vals["m"], self.target["bohr"])
        except ValueError as exc:
            raise ConfigError(f"section 'target.{which}': {exc}") from exc

    def make_cm(self, final: bool = False) -> CenterOfMassState:
        c = self.cm
        try:
            if c["mode"] == "pinned":
                return CenterOfMassState(mode="pinned", R=c["R"], Phi_R=c["Phi_R"], Z=c["Z"])
            L = c["L_final"] if (final and c["L_final"] is not None) else c["L"]
            kz = c["K_z_final"] if (final and c["K_z_final"] is not None) else c["K_z"]
            krho = c["K_rho_final"] if (final and c["K_rho_final"] is not None) else c["K_rho"]
            return CenterOfMassState(
                mode="cylindrical", R=0.0, Phi_R=0.0, Z=0.0, L=L, K_z=kz, K_rho=krho
            )
        except ValueError as exc:
            raise ConfigError(f"section 'cm': {exc}") from exc

    def make_kernel(self) -> KernelKind:
        try:
            return KernelKind(self.kernel["variant"], self.kernel["q_scale"])
        except ValueError as exc:
            raise ConfigError(f"section 'kernel': {exc}") from exc

    def make_quadrature(self, seed: int | None = None) -> QuadratureConfig:
        q = dict(self.quadrature)
        if seed is not None:
            q["seed"] = seed
        try:
            return QuadratureConfig(**q)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"section 'quadrature': {exc}") from exc

    def make_transition(self) -> Transition:
        initial = CompositeState(self.make_beam(), self.make_internal("initial"), self.make_cm())
        final = CompositeState(
            self.make_beam(final=True), self.make_internal("final"), self.make_cm(final=True)
        )
        try:
            return Transition(initial, final, self.make_kernel())
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    def make_dos(self) -> SublevelDOS:
        if not self.dos:
            raise ConfigError("section 'dos' is required for this command")
        weights = {}
        for k, v in self.dos.items():
            try:
                mp = int(k)
            except (TypeError, ValueError):
                raise ConfigError(f"key 'dos.{k}': sublevel labels must be integers")
            weights[mp] = _want(v, float, f"dos.{k}")
        try:
            return SublevelDOS(weights)
        except ValueError as exc:
            raise ConfigError(f"section 'dos': {exc}") from exc

    def make_family(self) -> TargetFamily:
        if not self.dichroism or self.dichroism.get("family") is None:
            raise ConfigError("key 'dichroism.family' is required for this command")
        fam = _check_section(self.dichroism["family"], _FAMILY_SPEC, "dichroism.family")
        for k, v in fam.items():
            if v is None:
                raise ConfigError(f"key 'dichroism.family.{k}' is required")
        return TargetFamily(bohr=self.target["bohr"], **fam)

    def scan_arguments(self) -> dict:
        if self.scan is None:
            raise ConfigError("section 'scan' is required for the scan command")
        s = self.scan
        for key in ("l_values", "lp_values", "final_m_values"):
            if s[key] is None:
                raise ConfigError(f"key 'scan.{key}' is required")
            if not isinstance(s[key], list) or not all(
                isinstance(v, int) and not isinstance(v, bool) for v in s[key]
            ):
                raise ConfigError(f"key 'scan.{key}' must be a list of integers")
        initial = self.make_internal("initial")
        base_final = self.target.get("final")
        if base_final is None:
            raise ConfigError("key 'target.final' is required")
        fvals = _check_section(base_final, _STATE_SPEC, "target.final")
        transitions = []
        for mp in s["final_m_values"]:
            try:
                fin = InternalState(fvals["n"], fvals["ell"], mp, self.target["bohr"])
            except ValueError as exc:
                raise ConfigError(f"key 'scan.final_m_values': {exc}") from exc
            transitions.append((initial, fin))
        has_final_beam = (
            self.beam["k_z_final"] is not None or self.beam["k_rho_final"] is not None
        )
        return dict(
            beam=self.make_beam(l=0),
            beam_final=self.make_beam(l=0, final=True) if has_final_beam else None,
            transitions=transitions,
            cm=self.make_cm(),
            cm_final=self.make_cm(final=True),
            l_values=s["l_values"],
            lp_values=s["lp_values"],
            L_values=s["L_values"],
            Lp_values=s["Lp_values"],
            kernel=self.make_kernel(),
        )

    def as_dict(self) -> dict:
        """Resolved configuration; loading this dict reproduces the run."""
        out: dict[str, Any] = {
            "beam": dict(self.beam),
            "target": {
                "bohr": self.target["bohr"],
                **{k: dict(v) for k, v in self.target.items() if isinstance(v, dict)},
            },
            "cm": dict(self.cm),
            "kernel": dict(self.kernel),
            "quadrature": dict(self.quadrature),
            "output": dict(self.output),
        }
        if self.scan is not None:
            out["scan"] = dict(self.scan)
        if self.dos is not None:
            out["dos"] = {str(k): v for k, v in self.dos.items()}
        if self.dichroism is not None:
            out["dichroism"] = dict(self.dichroism)
        return out


def _parse_raw(path: Path) -> dict:
    text = path.read_text()
    if path.suffix == ".json":
        try:
            return json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"invalid JSON in {path}: {exc}") from exc
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(f"invalid YAML in {path}: {exc}") from exc
    return data


def load_config(path) -> RunConfig:
    """Load and strictly validate a configuration file (YAML or JSON)."""
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file not found: {path}")
    data = _parse_raw(path)
    return load_config_dict(data)


def load_config_dict(data: dict) -> RunConfig:
    if not isinstance(data, dict):
        raise ConfigError("top level of the config must be a mapping")
    for key in data:
        if key not in _TOP_KEYS:
            raise ConfigError(f"unknown key '{key}'")

    beam = _check_section(data.get("beam", {}), _BEAM_SPEC, "beam")
    for key in ("k_z", "k_rho"):
        if beam[key] is not None and beam[key] <= 0:
            raise ConfigError(f"key 'beam.{key}' must be positive, got {beam[key]}")
    for key in ("k_z_final", "k_rho_final"):
        if beam[key] is not None and beam[key] <= 0:
            raise ConfigError(f"key 'beam.{key}' must be positive, got {beam[key]}")

    target_raw = data.get("target", {})
    if not isinstance(target_raw, dict):
        raise ConfigError("section 'target' must be a mapping")
    for key in target_raw:
        if key not in _TARGET_SPEC:
            raise ConfigError(f"unknown key 'target.{key}'")
    target = {
        "bohr": _want(target_raw.get("bohr", 1.0), float, "target.bohr"),
        "initial": target_raw.get("initial"),
        "final": target_raw.get("final"),
    }
    if target["bohr"] <= 0:
        raise ConfigError("key 'target.bohr' must be positive")

    cm = _check_section(data.get("cm", {}), _CM_SPEC, "cm")
    kernel = _check_section(data.get("kernel", {}), _KERNEL_SPEC, "kernel")
    quad = _check_section(data.get("quadrature", {}), _QUAD_SPEC, "quadrature")
    scan = _check_section(data["scan"], _SCAN_SPEC, "scan") if "scan" in data else None
    dichroism = (
        _check_section(data["dichroism"], _DICHROISM_SPEC, "dichroism")
        if "dichroism" in data
        else None
    )
    dos = data.get("dos")
    if dos is not None and not isinstance(dos, dict):
        raise ConfigError("section 'dos' must be a mapping of sublevel -> weight")
    output = _check_section(data.get("output", {}), _OUTPUT_SPEC, "output")
    if output["format"] not in ("csv", "json"):
        raise ConfigError(f"key 'output.format' must be 'csv' or 'json', got {output['format']!r}")

    return RunConfig(
        beam=beam,
        target=target,
        cm=cm,
        kernel=kernel,
        quadrature=quad,
        scan=scan,
        dos=dos,
        dichroism=dichroism,
        output=output,
    )
