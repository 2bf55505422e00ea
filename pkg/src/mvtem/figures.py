"""Figure rendering from report directories.

Each renderer consumes only the delimited files and report.json written by an
experiment; none of them re-simulate anything.  The CLI calls
:func:`render_report` after writing a report so every run leaves figures next
to its CSV output, and `mvtem plot <kind>` re-renders on demand.
"""

from __future__ import annotations

import csv
import re
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .errors import InputDataError
from .experiments import fit_power_law, read_report


def _read_csv_columns(path: Path) -> dict[str, list]:
    if not path.is_file():
        raise InputDataError(f"missing table {path}", field=path.name)
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise InputDataError(f"table {path} is empty", field=path.name) from None
        rows = [row for row in reader if row]
    if not rows:
        raise InputDataError(f"table {path} has a header but no rows", field=path.name)
    columns: dict[str, list] = {name: [] for name in header}
    for row in rows:
        if len(row) != len(header):
            raise InputDataError(f"ragged row in {path}", field=path.name)
        for name, cell in zip(header, row):
            try:
                columns[name].append(float(cell))
            except ValueError:
                columns[name].append(cell)
    return columns


def plot_convergence(report_dir, out_path) -> float:
    """Log-log RMSE against step size with the fitted slope in the legend.

    Returns the slope fitted from rmse.csv, which the legend displays with
    three decimals; a half-order reference line is drawn for comparison.
    """
    report_dir = Path(report_dir)
    data = _read_csv_columns(report_dir / "rmse.csv")
    dt = np.asarray(data["dt"], dtype=float)
    rmse = np.asarray(data["rmse"], dtype=float)
    if dt.size < 2:
        raise InputDataError(
            "rmse.csv holds a single row; a slope needs at least two", field="rmse.csv"
        )
    fit = fit_power_law(dt, rmse)
    order = np.argsort(dt)
    fig, ax = plt.subplots(figsize=(6.0, 4.5))
    ax.loglog(
        dt[order], rmse[order], "o-", base=2,
        label=f"measured, slope={fit.slope:.3f}",
    )
    anchor = rmse[order][-1] / dt[order][-1] ** 0.5
    ax.loglog(
        dt[order], anchor * dt[order] ** 0.5, "--", color="gray", base=2,
        label="reference slope 0.5",
    )
    ax.set_xlabel("step size")
    ax.set_ylabel("terminal RMSE")
    ax.set_title("Strong convergence")
    ax.legend()
    ax.grid(True, which="both", alpha=0.3)
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)
    return fit.slope


def plot_stability(report_dir, out_path) -> None:
    """Second-moment decay of the truncated scheme next to the plain one.

    The plain-scheme curve stops at its last finite value, marked with a
    cross when it blew up before the horizon.
    """
    report_dir = Path(report_dir)
    data = _read_csv_columns(report_dir / "moments.csv")
    for needed in ("t", "tem_mean_sq", "em_mean_sq"):
        if needed not in data:
            raise InputDataError(
                f"moments.csv lacks column {needed!r}", field="moments.csv"
            )
    t = np.asarray(data["t"], dtype=float)
    tem = np.asarray(data["tem_mean_sq"], dtype=float)
    em = np.asarray(data["em_mean_sq"], dtype=float)
    fig, ax = plt.subplots(figsize=(6.0, 4.5))
    finite_tem = np.isfinite(tem) & (tem > 0.0)
    ax.semilogy(t[finite_tem], tem[finite_tem], label="truncated scheme")
    finite_em = np.isfinite(em) & (em > 0.0)
    ax.semilogy(t[finite_em], em[finite_em], label="plain scheme")
    if not finite_em.all() and finite_em.any():
        last = int(np.max(np.nonzero(finite_em)))
        ax.semilogy(
            [t[last]], [em[last]], "x", color="red", markersize=10,
            label=f"plain scheme non-finite after t={t[last]:g}",
        )
    ax.set_xlabel("t")
    ax.set_ylabel("empirical second moment")
    ax.set_title("Mean-square stability")
    ax.legend()
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)


def plot_paths(report_dir, out_path) -> None:
    """A handful of particle paths over the ensemble mean-square path."""
    report_dir = Path(report_dir)
    data = _read_csv_columns(report_dir / "paths.csv")
    t = np.asarray(data["t"], dtype=float)
    particle = np.asarray(data["particle"], dtype=float).astype(int)
    value = np.asarray(data["value"], dtype=float)
    fig, ax = plt.subplots(figsize=(6.5, 4.5))
    for p in sorted(set(particle.tolist())):
        mask = particle == p
        order = np.argsort(t[mask])
        ax.plot(t[mask][order], value[mask][order], lw=0.9, label=f"particle {p}")
    moments_path = report_dir / "moments.csv"
    if moments_path.is_file():
        moments = _read_csv_columns(moments_path)
        mt = np.asarray(moments["t"], dtype=float)
        msq = np.asarray(moments["mean_sq"], dtype=float)
        ax.plot(mt, msq, color="black", lw=2.0, label="ensemble mean square")
    ax.set_xlabel("t")
    ax.set_ylabel("state")
    ax.set_title("Particle paths")
    ax.legend(fontsize=8)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)


_HIST_PATTERN = re.compile(r"^histogram_(?P<label>.+)\.csv$")


def plot_density(report_dir, out_path, smooth_window: int = 1) -> None:
    """Overlaid empirical density curves from the histogram tables.

    ``smooth_window`` bins of moving-average smoothing are applied when > 1;
    the window used is recorded on the figure.  Time-indexed histograms form
    the overlay; per-init terminal histograms (histogram_final_*) join it
    when present.
    """
    report_dir = Path(report_dir)
    if smooth_window < 1:
        raise InputDataError("smooth_window must be >= 1", field="smooth_window")
    files = sorted(report_dir.glob("histogram_*.csv"))
    timed: list[tuple[float, str, Path]] = []
    finals: list[tuple[str, Path]] = []
    for path in files:
        label = _HIST_PATTERN.match(path.name)["label"]
        if label.startswith("final_"):
            finals.append((label.removeprefix("final_"), path))
            continue
        try:
            timed.append((float(label), f"t={label}", path))
        except ValueError:
            finals.append((label, path))
    if not timed and not finals:
        raise InputDataError(
            f"no histogram_<t>.csv tables in {report_dir}", field="histogram"
        )
    timed.sort(key=lambda item: item[0])

    def smoothed(density: np.ndarray) -> np.ndarray:
        if smooth_window == 1:
            return density
        kernel = np.ones(smooth_window) / smooth_window
        return np.convolve(density, kernel, mode="same")

    fig, ax = plt.subplots(figsize=(6.5, 4.5))
    for _, label, path in timed:
        data = _read_csv_columns(path)
        centers = 0.5 * (
            np.asarray(data["bin_left"], dtype=float)
            + np.asarray(data["bin_right"], dtype=float)
        )
        ax.plot(centers, smoothed(np.asarray(data["density"], dtype=float)), label=label)
    for label, path in finals:
        data = _read_csv_columns(path)
        centers = 0.5 * (
            np.asarray(data["bin_left"], dtype=float)
            + np.asarray(data["bin_right"], dtype=float)
        )
        ax.plot(
            centers, smoothed(np.asarray(data["density"], dtype=float)),
            linestyle="--", label=f"terminal, init {label}",
        )
    ax.set_xlabel("state")
    ax.set_ylabel("density")
    ax.set_title(f"Empirical densities (smoothing window = {smooth_window} bins)")
    ax.legend(fontsize=8)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)


PLOTTERS = {
    "convergence": plot_convergence,
    "stability": plot_stability,
    "paths": plot_paths,
    "density": plot_density,
}

_KIND_FIGURES = {
    "convergence": ("convergence",),
    "stability": ("stability",),
    "moments": (),
    "invariant": ("density",),
    "chaos": (),
    "fournier": (),
    "simulate": (),
}


def render_report(report_dir, out_dir=None) -> list[Path]:
    """Render the default figures for a report directory, next to its CSVs.

    The report kind selects which figure kinds apply; reports that carry
    paths.csv additionally get the paths figure.  Returns the written files.
    """
    report_dir = Path(report_dir)
    out_dir = Path(out_dir) if out_dir is not None else report_dir
    meta = read_report(report_dir)
    kinds = list(_KIND_FIGURES.get(meta.get("kind"), ()))
    if (report_dir / "paths.csv").is_file():
        kinds.append("paths")
    written = []
    for kind in kinds:
        out_path = out_dir / f"{kind}.png"
        PLOTTERS[kind](report_dir, out_path)
        written.append(out_path)
    return written
