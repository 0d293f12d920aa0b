"""Graphviz DOT rendering of ``G(M)`` and system loading helpers."""
from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .colorability import ColoringState
from .patterns import PatternMatrix, Symbol
from .wdn import NetworkModel, derive_wdn_pattern


def to_dot(
    M: PatternMatrix,
    n_states: int | None = None,
    coloring: ColoringState | None = None,
    costs=None,
    labels=None,
    name: str = "G",
) -> str:
    """DOT digraph of ``G(M)``: ``*`` edges solid, ``?`` edges dashed.

    Columns past ``n_states`` are drawn as star-shaped sensor nodes.  Black
    nodes of ``coloring`` are filled black; otherwise, when ``costs`` (one per
    state) are given, state nodes are shaded by normalized cost.
    """
    n_states = M.rows if n_states is None else n_states
    n_nodes = max(M.shape)
    lines = [f"digraph {name} {{"]
    if n_nodes:
        lines.append("  node [style=filled, fillcolor=white, fontname=Helvetica];")
    shade = None
    if costs is not None:
        c = np.asarray(costs, dtype=float)
        span = c.max() - c.min() if c.size else 0.0
        shade = np.zeros_like(c) if span == 0 else (c - c.min()) / span
    for v in range(n_nodes):
        sensor = v >= n_states
        label = labels[v] if labels is not None and v < len(labels) else (f"y{v - n_states + 1}" if sensor else str(v + 1))
        attrs = [f'label="{label}"', f"shape={'star' if sensor else 'circle'}"]
        if coloring is not None and coloring.black[v]:
            attrs += ["fillcolor=black", "fontcolor=white"]
        elif shade is not None and not sensor:
            grey = int(round(255 - 155 * shade[v]))
            attrs.append(f'fillcolor="#{grey:02x}{grey:02x}ff"')
        lines.append(f"  n{v} [{', '.join(attrs)}];")
    rows, cols = np.nonzero(M.data)
    for i, j in sorted(zip(rows.tolist(), cols.tolist()), key=lambda t: (t[1], t[0])):
        style = "solid" if M.data[i, j] == Symbol.STAR else "dashed"
        lines.append(f"  n{j} -> n{i} [style={style}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def load_system(path: str | Path) -> tuple[PatternMatrix, NetworkModel | None]:
    """State-matrix pattern from a network JSON, a pattern JSON, CSV or plain text file.

    Network JSON (``{"nodes": ..., "edges": ...}``) yields the EWC pattern;
    ``{"pattern": ["0*", ...]}`` is read as the pattern of ``A`` itself.
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"no such file: {path}")
    if path.suffix.lower() == ".json":
        with open(path) as fh:
            doc = json.load(fh)
        if "pattern" in doc:
            return PatternMatrix.from_rows(doc["pattern"]), None
        net = NetworkModel.from_dict(doc)
        return derive_wdn_pattern(net), net
    if path.suffix.lower() == ".csv":
        return PatternMatrix.from_csv(path), None
    return PatternMatrix.from_text(path.read_text()), None


def load_output(path: str | Path) -> PatternMatrix | None:
    """Output pattern ``C`` stored next to ``A`` as ``{"output": [...]}`` in a pattern JSON, if any."""
    path = Path(path)
    if path.suffix.lower() != ".json":
        return None
    with open(path) as fh:
        doc = json.load(fh)
    rows = doc.get("output")
    return None if rows is None else PatternMatrix.from_rows(rows)
