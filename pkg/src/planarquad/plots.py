"""Figure rendering for report output; files only, never an interactive window."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt


def save_trajectory_figure(traj, path, title: str = "") -> Path:
    """States and inputs vs time, one PNG."""
    fig, axs = plt.subplots(3, 1, figsize=(8, 9), sharex=True)
    axs[0].plot(traj.t, traj.x, label="x [m]")
    axs[0].plot(traj.t, traj.y, label="y [m]")
    axs[0].set_ylabel("position [m]")
    axs[1].plot(traj.t, traj.phi, label="phi [rad]")
    if (traj.phi_des != 0).any():
        axs[1].plot(traj.t, traj.phi_des, "--", label="phi_des [rad]")
    axs[1].set_ylabel("attitude [rad]")
    axs[2].plot(traj.t, traj.u1, label="u1 [N]")
    axs[2].plot(traj.t, traj.u2, label="u2 [N m]")
    axs[2].set_ylabel("input")
    axs[2].set_xlabel("time [s]")
    for ax in axs:
        ax.grid(True, alpha=0.3)
        ax.legend(loc="best", fontsize=8)
    if title:
        fig.suptitle(title)
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def save_comparison_figure(report, path, title: str = "") -> Path:
    """Linear vs nonlinear overlay for positions and attitude."""
    lin, non = report.trajectory_linear, report.trajectory_nonlinear
    fig, axs = plt.subplots(3, 1, figsize=(8, 9), sharex=True)
    for ax, ch, unit in zip(axs, ("x", "y", "phi"), ("m", "m", "rad")):
        ax.plot(lin.t, lin.channel(ch), label=f"linear {ch}")
        ax.plot(non.t, non.channel(ch), "--", label=f"nonlinear {ch}")
        ax.set_ylabel(f"{ch} [{unit}]")
        ax.grid(True, alpha=0.3)
        ax.legend(loc="best", fontsize=8)
    if report.divergence_time_s is not None:
        axs[0].axvline(report.divergence_time_s, color="k", alpha=0.5,
                       label=f"divergence at {report.divergence_time_s:.4g} s")
        axs[0].legend(loc="best", fontsize=8)
    axs[2].set_xlabel("time [s]")
    if title:
        fig.suptitle(title)
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def save_probe_figure(results, path, title: str = "") -> Path:
    """Tilt and altitude traces for a sweep of initial attitudes.

    `results` is a list of (phi0, trajectory) pairs.
    """
    fig, axs = plt.subplots(2, 1, figsize=(8, 6), sharex=True)
    for phi0, traj in results:
        axs[0].plot(traj.t, traj.phi, label=f"phi0 = {phi0:g} rad")
        axs[1].plot(traj.t, traj.y, label=f"phi0 = {phi0:g} rad")
    axs[0].set_ylabel("phi [rad]")
    axs[1].set_ylabel("y [m]")
    axs[1].set_xlabel("time [s]")
    for ax in axs:
        ax.grid(True, alpha=0.3)
        ax.legend(loc="best", fontsize=8)
    if title:
        fig.suptitle(title)
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
