"""Deterministic report serialization.

The stdlib json module formats floats with repr, whose output is the
shortest string that round-trips.  Reports instead print every float with
17 significant digits so that two runs of the same seed produce the same
bytes and so that values survive a parse round trip exactly.  The emitter
below handles the small JSON subset reports are made of: dict, list,
tuple, numpy arrays, str, bool, None, int, float.
"""

import json

import numpy as np

from .errors import InvalidSpec


def format_float(x: float) -> str:
    if not np.isfinite(x):
        raise InvalidSpec(f"report contains a non-finite number: {x!r}")
    return format(float(x), ".17g")


def _emit(obj, out, indent):
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if obj is None:
        out.append("null")
    elif obj is True:
        out.append("true")
    elif obj is False:
        out.append("false")
    elif isinstance(obj, str):
        out.append(json.dumps(obj))
    elif isinstance(obj, (int, np.integer)):
        out.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        out.append(format_float(obj))
    elif isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{\n")
        for i, (k, v) in enumerate(obj.items()):
            if not isinstance(k, str):
                raise InvalidSpec(f"report keys must be strings, got {k!r}")
            out.append(f"{inner}{json.dumps(k)}: ")
            _emit(v, out, indent + 1)
            out.append(",\n" if i + 1 < len(obj) else "\n")
        out.append(pad + "}")
    elif isinstance(obj, (list, tuple, np.ndarray)):
        seq = list(obj)
        if not seq:
            out.append("[]")
            return
        out.append("[\n")
        for i, v in enumerate(seq):
            out.append(inner)
            _emit(v, out, indent + 1)
            out.append(",\n" if i + 1 < len(seq) else "\n")
        out.append(pad + "]")
    else:
        raise InvalidSpec(f"cannot serialize {type(obj).__name__} into a report")


def dumps(obj) -> str:
    out = []
    _emit(obj, out, 0)
    out.append("\n")
    return "".join(out)


def write_report(path, obj) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(dumps(obj))


def write_frequency_csv(path, report) -> None:
    """Per-covariate correct-identification frequencies, one method per column.

    ``report`` is a ReplicationReport; methods whose runs all failed are
    skipped.  Rows are covariate indices 0..p-1.
    """
    methods = [m for m in report.method_names
               if report.methods[m].per_covariate_correct is not None]
    if not methods:
        raise InvalidSpec("no method in the report produced selection frequencies")
    cols = [np.asarray(report.methods[m].per_covariate_correct) for m in methods]
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(["covariate"] + methods) + "\n")
        for j in range(report.p):
            fh.write(",".join([str(j)] + [format_float(c[j]) for c in cols]) + "\n")
