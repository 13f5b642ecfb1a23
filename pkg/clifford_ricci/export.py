"""CSV side files and plots."""
import logging
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import pandas as pd

from .conformal_profile import ConformalProfile, profile_table
from .curvature import ricci_table
from .errors import ReportWriteError

logger = logging.getLogger(__name__)


def write_csv(df: pd.DataFrame, path: Path) -> Path:
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        df.to_csv(path, index=False, float_format="%.17g")
    except OSError as e:
        raise ReportWriteError(path, e) from e
    logger.info("wrote %s rows=%d", path, len(df))
    return path


def _save(fig, path: Path) -> Path:
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        fig.savefig(path, dpi=120)
    except OSError as e:
        raise ReportWriteError(path, e) from e
    finally:
        plt.close(fig)
    return path


def plot_profile(p: ConformalProfile, path: Path) -> Path:
    df = profile_table(p)
    fig, ax = plt.subplots(figsize=(10, 6))
    ax.plot(df["t"], df["zeta"], label="zeta = w''")
    ax.plot(df["t"], df["w1"], label="w'")
    ax.plot(df["t"], df["w"], label="w")
    if p.bump is not None:
        for x in (-2 * p.bump.r, -p.bump.r, p.bump.r, 2 * p.bump.r):
            ax.axvline(x, color="grey", alpha=0.3, linestyle="--")
        ax.set_title(f"Conformal profile, r = {p.bump.r:g}", fontsize=12, fontweight="bold")
    ax.set_xlabel("t", fontsize=11)
    ax.grid(True, alpha=0.3, linestyle="--")
    ax.legend()
    fig.tight_layout()
    return _save(fig, path)


def plot_ricci(p: ConformalProfile, path: Path) -> Path:
    df = ricci_table(p)
    fig, ax = plt.subplots(figsize=(10, 6))
    for col, label in (("lam_t", "t"), ("lam_th", "theta"), ("lam_ph", "phi")):
        ax.plot(df["t"], df[col], label=f"Ric eigenvalue ({label})")
    ax.axhline(0.0, color="red", alpha=0.5)
    ax.set_xlabel("t", fontsize=11)
    ax.set_ylabel("normalized Ricci eigenvalue", fontsize=11)
    ax.grid(True, alpha=0.3, linestyle="--")
    ax.legend()
    fig.tight_layout()
    return _save(fig, path)
