"""Turn a FigureSpec into a multi-panel image."""

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

from .spec import FigureSpec, read_columns


def _load_inputs(spec: FigureSpec) -> list:
    """Column data per input file, validated before any drawing happens."""
    wanted = [set() for _ in spec.inputs]
    for panel in spec.panels:
        for s in panel.series:
            wanted[s.input].add(s.column)
            wanted[s.input].add(spec.x_axis)
    data = []
    for path, cols in zip(spec.inputs, wanted):
        data.append(read_columns(path, sorted(cols)) if cols else {})
    return data


def render(spec: FigureSpec) -> Path:
    """Write the figure described by the spec; returns the output path.

    All inputs and columns are validated up front so that a bad spec never
    leaves a partially written image behind.
    """
    data = _load_inputs(spec)

    fig, axes = plt.subplots(
        spec.n_rows, spec.n_cols,
        figsize=(4.8 * spec.n_cols, 3.2 * spec.n_rows),
        squeeze=False,
    )
    flat = axes.ravel()
    try:
        for ax, panel in zip(flat, spec.panels):
            any_label = False
            for s in panel.series:
                x = data[s.input][spec.x_axis]
                y = data[s.input][s.column]
                label = s.label if s.label is not None else s.column
                any_label = any_label or s.label is not None
                ax.plot(x, y, label=label, linewidth=1.2)
            ax.set_xlabel(spec.x_axis)
            if panel.ylabel:
                ax.set_ylabel(panel.ylabel)
            if panel.title:
                ax.set_title(panel.title)
            if panel.logy:
                ax.set_yscale("log")
            if spec.x_descending:
                ax.invert_xaxis()
            if len(panel.series) > 1 or any_label:
                ax.legend(fontsize=8)
        for ax in flat[len(spec.panels):]:
            ax.set_visible(False)
        fig.tight_layout()
        spec.output.parent.mkdir(parents=True, exist_ok=True)
        fig.savefig(spec.output, dpi=150)
    finally:
        plt.close(fig)
    return spec.output
