"""Matplotlib figures written next to the trajectory files."""

from __future__ import annotations

import os
import tempfile
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

MICRO = 1e6

plt.rcParams.update(
    {
        "font.size": 10,
        "axes.grid": True,
        "grid.alpha": 0.3,
        "savefig.dpi": 150,
        "savefig.bbox": "tight",
    }
)


def _save(fig, path):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.stem}.", suffix=path.suffix)
    os.close(fd)
    try:
        fig.savefig(tmp)
        os.chmod(tmp, 0o644)
        os.replace(tmp, path)
    finally:
        plt.close(fig)
        if os.path.exists(tmp):
            os.unlink(tmp)


def plot_trajectory(path, traj, eta, title="", thresholds=(), steady=None):
    """Purity and symplectic eigenvalues against physical time in microseconds."""
    t = traj.times / eta * MICRO
    fig, (ax1, ax2) = plt.subplots(2, 1, figsize=(6, 6), sharex=True)
    ax1.plot(t, traj.purities, color="k", lw=1.2)
    for level in thresholds:
        ax1.axhline(level, color="tab:blue", ls=":", lw=0.8)
    if steady is not None:
        ax1.axhline(steady, color="tab:red", ls="--", lw=0.8, label="steady state")
        ax1.legend(loc="best", frameon=False)
    ax1.set_ylabel("purity")
    if title:
        ax1.set_title(title)
    nus = np.array([s.nus for s in traj.samples])
    for i in range(nus.shape[1]):
        ax2.plot(t, nus[:, i], lw=1.0, label=rf"$\nu_{i + 1}$")
    ax2.set_ylabel("symplectic eigenvalues")
    ax2.set_xlabel(r"time ($\mu$s)")
    ax2.legend(loc="best", frameon=False)
    _save(fig, path)


def plot_comparison(path, traj_a, traj_b, eta_a, eta_b, labels=("A", "B")):
    fig, ax = plt.subplots(figsize=(6, 3.5))
    ax.plot(traj_a.times / eta_a * MICRO, traj_a.purities, lw=1.2, label=labels[0])
    ax.plot(traj_b.times / eta_b * MICRO, traj_b.purities, lw=1.2, ls="--", label=labels[1])
    ax.set_xlabel(r"time ($\mu$s)")
    ax.set_ylabel("purity")
    ax.legend(frameon=False)
    _save(fig, path)
