"""Deterministic serialization of run artifacts.

Every float is rendered with 17 significant digits so written values
round-trip exactly and identical runs produce byte-identical files.
"""

from __future__ import annotations

import json

import numpy as np

from .cluster import PipelineResult


def fmt(value: float) -> str:
    """17-significant-digit rendering of a float."""
    return format(float(value), ".17g")


def dumps(obj, indent: int = 0) -> str:
    """JSON text with deterministic key order and 17-digit floats.

    The standard encoder renders floats with repr (shortest form), so
    this walks the structure itself; key order is insertion order.
    """
    pad = " " * indent
    inner = " " * (indent + 2)
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return fmt(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, np.ndarray):
        obj = obj.tolist()
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = ",\n".join(inner + dumps(v, indent + 2) for v in obj)
        return "[\n" + items + "\n" + pad + "]"
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = ",\n".join(
            inner + json.dumps(str(k)) + ": " + dumps(v, indent + 2) for k, v in obj.items()
        )
        return "{\n" + items + "\n" + pad + "}"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def write_text(path, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
        if not text.endswith("\n"):
            fh.write("\n")


def matrix_csv(M: np.ndarray, header: str | None = None) -> str:
    lines = [] if header is None else [header]
    for row in np.atleast_2d(M):
        lines.append(",".join(fmt(v) for v in row))
    return "\n".join(lines) + "\n"


def spectrum_csv(table: np.ndarray) -> str:
    lines = ["index,operator_eigenvalue,powered_eigenvalue,covariance_eigenvalue"]
    for i, row in enumerate(table):
        lines.append(f"{i + 1}," + ",".join(fmt(v) for v in row))
    return "\n".join(lines) + "\n"


def embedding_csv(coords: np.ndarray, labels: np.ndarray | None = None) -> str:
    k = coords.shape[1]
    header = "index," + ",".join(f"coord_{j + 1}" for j in range(k))
    if labels is not None:
        header += ",label"
    lines = [header]
    for i, row in enumerate(coords):
        line = f"{i}," + ",".join(fmt(v) for v in row)
        if labels is not None:
            line += f",{int(labels[i])}"
        lines.append(line)
    return "\n".join(lines) + "\n"


def profile_csv(profile: np.ndarray) -> str:
    lines = ["index,probability"]
    for i, v in enumerate(profile):
        lines.append(f"{i},{fmt(v)}")
    return "\n".join(lines) + "\n"


def clustering_payload(run: PipelineResult) -> dict:
    """The clustering result as a JSON-ready mapping."""
    params = run.clustering.params
    return {
        "c": run.clustering.c,
        "labels": [int(v) for v in run.clustering.labels],
        "seeds": [int(v) for v in run.clustering.seeds],
        "params": {
            "beta": params["beta"],
            "m": params["m"],
            "p": params["p"],
            "h": params["h"],
            "sigma": params["sigma"],
            "zeta": params["zeta"],
            "s": params["s"],
            "strategy": params["strategy"],
            "seed": params["seed"],
            "compose_levels": params["compose_levels"],
        },
    }


def affinity_summary(run: PipelineResult) -> dict:
    """Within/across-cluster affinity statistics of a finished run."""
    C = run.profile.entries
    labels = run.clustering.labels
    same = labels[:, None] == labels[None, :]
    off = ~np.eye(len(labels), dtype=bool)
    within = C[same & off]
    across = C[~same]
    return {
        "min_within": float(within.min()) if within.size else None,
        "max_across": float(across.max()) if across.size else None,
        "m": run.m,
        "beta": run.kernel.beta,
        "achieved_target": run.calibrations[-1].achieved,
        "clamped_degrees": int(np.count_nonzero(run.degree.clamped)),
        "warnings": list(run.warnings),
    }
