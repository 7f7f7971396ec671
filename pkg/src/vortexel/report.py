"""Report emission: CSV tables, JSON documents with the resolved config
embedded, plot-ready two-column files, and rendered figures.

All text output is deterministic: fixed column order, '%.17g' floats and
sorted JSON keys, so identical configurations produce byte-identical files.
Figures are rendered with the Agg backend next to the delimited output.
"""
from __future__ import annotations

import cmath
import json
from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

from .dichroism import DichroismReport
from .matelem import MatrixElement, ScanEntry

__all__ = [
    "fmt",
    "write_matelem_json",
    "write_scan",
    "write_dichroism",
    "write_yalpha_csv",
    "plot_scan",
    "plot_dichroism",
    "plot_yalpha",
]

SCAN_COLUMNS = ["l", "lp", "L", "Lp", "m", "mp", "channel", "abs_M", "abs_err", "evals"]


def fmt(x: float) -> str:
    return format(float(x), ".17g")


def write_matelem_json(me: MatrixElement, config: dict, path: Path, converged: bool = True) -> None:
    doc = {
        "config": config,
        "result": {
            "re": me.value.real,
            "im": me.value.imag,
            "abs_M": abs(me.value),
            "phase": cmath.phase(me.value),
            "abs_err": me.abs_err,
            "channel": me.channel.channel,
            "delta_l": me.channel.delta_l,
            "delta_L": me.channel.delta_L,
            "delta_m": me.channel.delta_m,
            "evals": me.quadrature_evals,
            "converged": converged,
        },
    }
    path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")


def scan_csv_text(entries: Sequence[ScanEntry]) -> str:
    lines = [",".join(SCAN_COLUMNS)]
    for e in entries:
        lines.append(
            ",".join(
                [
                    str(e.l), str(e.lp), str(e.L), str(e.Lp), str(e.m), str(e.mp),
                    e.channel, fmt(e.abs_M), fmt(e.abs_err), str(e.evals),
                ]
            )
        )
    return "\n".join(lines) + "\n"


def write_scan(entries: Sequence[ScanEntry], config: dict, outdir: Path, fmt_kind: str) -> list[Path]:
    outdir.mkdir(parents=True, exist_ok=True)
    written = []
    csv_path = outdir / "scan.csv"
    csv_path.write_text(scan_csv_text(entries))
    written.append(csv_path)
    if fmt_kind == "json":
        doc = {
            "config": config,
            "rows": [
                {
                    "l": e.l, "lp": e.lp, "L": e.L, "Lp": e.Lp, "m": e.m, "mp": e.mp,
                    "channel": e.channel, "abs_M": e.abs_M, "abs_err": e.abs_err,
                    "evals": e.evals,
                }
                for e in entries
            ],
        }
        json_path = outdir / "scan.json"
        json_path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
        written.append(json_path)
    # plot-ready two-column file: net OAM mismatch vs |M|
    two = outdir / "scan_twocol.txt"
    rows = [
        f"{(e.l + e.L + e.m) - (e.lp + e.Lp + e.mp)} {fmt(e.abs_M)}" for e in entries
    ]
    two.write_text("\n".join(rows) + "\n")
    written.append(two)
    return written


def write_dichroism(rep: DichroismReport, config: dict, outdir: Path) -> list[Path]:
    outdir.mkdir(parents=True, exist_ok=True)
    doc = {
        "config": config,
        "gamma_plus": rep.gamma_plus,
        "gamma_minus": rep.gamma_minus,
        "signal": rep.signal,
        "l": rep.l,
        "dos": {str(k): v for k, v in rep.dos.items()},
        "dos_model": "toy per-sublevel weights; stand-in for a magnetized band structure",
        "channels": [
            {
                "l": c.l, "lp": c.lp, "m": c.m, "mp": c.mp,
                "abs_M": c.abs_M, "weight": c.weight, "contribution": c.contribution,
            }
            for c in rep.channels
        ],
    }
    json_path = outdir / "dichroism.json"
    json_path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    csv_path = outdir / "dichroism_channels.csv"
    lines = ["l,lp,m,mp,abs_M,weight,contribution"]
    for c in rep.channels:
        lines.append(
            f"{c.l},{c.lp},{c.m},{c.mp},{fmt(c.abs_M)},{fmt(c.weight)},{fmt(c.contribution)}"
        )
    csv_path.write_text("\n".join(lines) + "\n")
    return [json_path, csv_path]


def write_yalpha_csv(rows: Sequence[tuple], outdir: Path) -> Path:
    outdir.mkdir(parents=True, exist_ok=True)
    path = outdir / "yalpha.csv"
    lines = ["n_eff,F,G,value,err"]
    for n_eff, F, G, value, err in rows:
        lines.append(f"{n_eff},{fmt(F)},{fmt(G)},{fmt(value)},{fmt(err)}")
    path.write_text("\n".join(lines) + "\n")
    return path


# ---------------------------------------------------------------------------
# figures
# ---------------------------------------------------------------------------

def plot_scan(entries: Sequence[ScanEntry], outdir: Path) -> Path:
    fig, ax = plt.subplots(figsize=(7.0, 4.0))
    floor = 1e-300
    mags = [max(e.abs_M, floor) for e in entries]
    colors = {"Q": "tab:blue", "S": "tab:orange", "U": "tab:green", "forbidden": "0.6"}
    seen = set()
    for x, (e, mag) in enumerate(zip(entries, mags)):
        label = e.channel if e.channel not in seen else None
        seen.add(e.channel)
        ax.semilogy([x], [mag], "o", ms=4, color=colors.get(e.channel, "k"), label=label)
    ax.set_xlabel("scan row")
    ax.set_ylabel("|M| (a.u.)")
    ax.legend(loc="best", fontsize=8)
    ax.set_title("matrix-element magnitudes by channel")
    fig.tight_layout()
    path = outdir / "scan_mag.png"
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def plot_dichroism(rep: DichroismReport, outdir: Path) -> Path:
    fig, (ax0, ax1) = plt.subplots(1, 2, figsize=(8.0, 3.6))
    ax0.bar(["+|l|", "-|l|"], [rep.gamma_plus, rep.gamma_minus], color=["tab:blue", "tab:orange"])
    ax0.set_ylabel("rate (relative)")
    ax0.set_title(f"signal = {rep.signal:+.4f}")
    labels = [f"{c.l}: {c.m}->{c.mp}" for c in rep.channels]
    ax1.bar(range(len(rep.channels)), [c.contribution for c in rep.channels], color="0.4")
    ax1.set_xticks(range(len(rep.channels)))
    ax1.set_xticklabels(labels, rotation=60, fontsize=7)
    ax1.set_ylabel("weighted |M|^2")
    fig.tight_layout()
    path = outdir / "dichroism.png"
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def plot_yalpha(rows: Sequence[tuple], outdir: Path) -> Path:
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    by_n: dict[int, list] = {}
    for n_eff, F, G, value, _ in rows:
        by_n.setdefault(n_eff, []).append((G / F, value))
    for n_eff, pts in sorted(by_n.items()):
        pts.sort()
        ax.plot([p[0] for p in pts], [p[1] for p in pts], "o-", ms=3, label=f"n_eff={n_eff}")
    ax.set_xlabel("G / F")
    ax.set_ylabel("Y(n_eff, F, G)")
    ax.legend(fontsize=8)
    fig.tight_layout()
    path = outdir / "yalpha.png"
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
