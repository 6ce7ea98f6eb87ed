"""Figures for recovery reports."""
import numpy as np
from matplotlib.figure import Figure


def plot_recovery(report, path, title=None):
    """Draw the embedding's eigenvalue groups and the recovered spectrum.

    Each group of the real embedding is a hollow marker on the unit circle,
    sized by its multiplicity and labelled ``rank/m_M``; groups that
    contribute eigenvalues of ``U`` are filled.
    """
    fig = Figure(figsize=(5.0, 5.0))
    ax = fig.add_subplot(111)
    t = np.linspace(0, 2 * np.pi, 400)
    ax.plot(np.cos(t), np.sin(t), color="0.75", lw=1, zorder=0)
    ax.axhline(0, color="0.9", lw=0.8, zorder=0)
    ax.axvline(0, color="0.9", lw=0.8, zorder=0)

    for g in report.groups:
        z = complex(g.mu)
        size = 40 + 25 * g.m_M
        face = "C0" if g.rank > 0 else "none"
        ax.scatter([z.real], [z.imag], s=size, facecolors=face, edgecolors="C0", lw=1.5)
        ax.annotate(
            f"{g.rank}/{g.m_M}",
            (z.real, z.imag),
            xytext=(1.18 * z.real, 1.18 * z.imag),
            ha="center",
            va="center",
            fontsize=9,
        )

    ax.set_xlim(-1.45, 1.45)
    ax.set_ylim(-1.45, 1.45)
    ax.set_aspect("equal")
    ax.set_xlabel("Re")
    ax.set_ylabel("Im")
    ax.set_title(title or f"n = {report.n}: recovered rank / group multiplicity")
    fig.tight_layout()
    fig.savefig(path)
    return path
