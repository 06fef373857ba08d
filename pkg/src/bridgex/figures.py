"""Selection-frequency figure rendering.

One chart per benchmark run: the probability of classifying each covariate
effect correctly (zero vs nonzero), one marker series per method.  Only
the leading covariates are drawn on wide designs; past the signal block
the frequencies are near one and carry no resolution.
"""

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  backend must be pinned first

from .errors import InvalidSpec

_MARKERS = {
    "ols": "s",
    "ridge": "d",
    "lasso": "o",
    "enet": "^",
    "bridge": "+",
    "ols_oracle": "x",
    "bridge_oracle": "*",
}

_MAX_SHOWN = 30


def render_frequency_figure(report, path) -> None:
    """Write the per-covariate correct-classification chart as a PNG."""
    methods = [m for m in report.method_names
               if report.methods[m].per_covariate_correct is not None]
    if not methods:
        raise InvalidSpec("no method in the report produced selection frequencies")
    shown = min(report.p, _MAX_SHOWN)
    xs = range(shown)
    fig, ax = plt.subplots(figsize=(8.0, 4.5))
    for m in methods:
        freq = report.methods[m].per_covariate_correct[:shown]
        ax.plot(xs, freq, linestyle="none", marker=_MARKERS.get(m, "."),
                markersize=7, markerfacecolor="none", label=m)
    ax.set_xlabel("covariate index")
    ax.set_ylabel("correct classification frequency")
    ax.set_ylim(-0.05, 1.08)
    ax.set_xticks(list(xs)[:: 2 if shown > 15 else 1])
    ax.grid(True, alpha=0.3)
    ax.legend(loc="lower right", fontsize=9)
    ax.set_title(f"scenario {report.scenario_id}, {report.replicates} replicates"
                 + (f", first {shown} of {report.p} covariates" if shown < report.p else ""))
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
