"""Figure rendering for run reports.

Renders the thermodynamic ledgers to PNG files next to the delimited
output: one figure for the energy-flow curves (both accounting
definitions plus the internal-energy change) and one for entropy and
branch populations. File output only; the Agg backend keeps this
headless.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

from .thermo import ThermoLedger

DPI = 150


def _time_label(scenario: str) -> str:
    return r"$g\,t$" if scenario == "two-qubit" else r"$\gamma\,t$"


def render_ledger_figures(ledger: ThermoLedger, prefix,
                          definitions: str = "both") -> list[Path]:
    """Write <prefix>_thermo.png and <prefix>_entropy.png."""
    prefix = Path(prefix)
    prefix.parent.mkdir(parents=True, exist_ok=True)
    t = ledger.times
    xlabel = _time_label(ledger.scenario)
    suffix = f" ({ledger.subsystem})" if ledger.subsystem else ""
    paths = []

    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    u = ledger.column("U")
    if definitions in ("new", "both"):
        ax.plot(t, ledger.column("Q_new"), label=r"$Q$ (eigenbasis)")
        ax.plot(t, ledger.column("W_new"), label=r"$W$ (eigenbasis)", linestyle="--")
    if definitions in ("alicki", "both"):
        ax.plot(t, ledger.column("Q_alicki"), label=r"$Q$ (Alicki)", linestyle="-.")
    ax.plot(t, u - u[0], label=r"$\Delta U$", linestyle=":", color="k")
    ax.axhline(0.0, color="0.8", linewidth=0.8, zorder=0)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(r"energy [$\hbar\omega_0$]")
    ax.set_title(f"heat and work{suffix}")
    ax.legend(frameon=False, fontsize=8)
    fig.tight_layout()
    path = prefix.with_name(prefix.name + "_thermo.png")
    fig.savefig(path, dpi=DPI)
    plt.close(fig)
    paths.append(path)

    fig, (ax_s, ax_p) = plt.subplots(2, 1, figsize=(6.0, 5.0), sharex=True)
    ax_s.plot(t, ledger.column("S"), color="C2")
    ax_s.set_ylabel("entropy [nats]")
    ax_s.set_title(f"entropy and eigenbranch populations{suffix}")
    p = ledger.column("p")
    ax_p.plot(t, p[:, 0], label=r"$p_1$")
    ax_p.plot(t, p[:, 1], label=r"$p_2$", linestyle="--")
    ax_p.set_xlabel(xlabel)
    ax_p.set_ylabel("population")
    ax_p.set_ylim(-0.05, 1.05)
    ax_p.legend(frameon=False, fontsize=8)
    fig.tight_layout()
    path = prefix.with_name(prefix.name + "_entropy.png")
    fig.savefig(path, dpi=DPI)
    plt.close(fig)
    paths.append(path)

    return paths


def render_run_figures(result, prefix) -> list[Path]:
    """Render figures for every ledger of a finished run."""
    prefix = Path(prefix)
    paths = []
    for suffix, ledger in result.ledgers():
        paths.extend(render_ledger_figures(ledger, prefix.with_name(prefix.name + suffix),
                                           definitions=result.config.definitions))
    return paths
