"""Plain-text file formats: seeds, edge lists and CSV reports.

Every writer prefixes its output with ``# key=value`` lines echoing the
configuration that produced it; readers skip lines starting with ``#``.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import KronError
from .generators import EdgeList
from .seeds import StochasticSeed, validate_and_normalize


def _header(meta: Mapping) -> str:
    return "".join(f"# {k}={_render(v)}\n" for k, v in meta.items())


def _render(value) -> str:
    if isinstance(value, (dict, list, tuple)):
        return json.dumps(value, sort_keys=True, separators=(",", ":"))
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _body_and_header(path) -> tuple[list[str], dict[str, str]]:
    header: dict[str, str] = {}
    body = []
    for line in Path(path).read_text().splitlines():
        stripped = line.strip()
        if stripped.startswith("#"):
            key, sep, value = stripped.lstrip("#").strip().partition("=")
            if sep:
                header[key.strip()] = value.strip()
        elif stripped:
            body.append(stripped)
    return body, header


# --------------------------------------------------------------------------
# seeds


def read_seed_matrix(path) -> np.ndarray:
    body, _ = _body_and_header(path)
    if not body:
        raise KronError(f"{path}: no matrix rows")
    try:
        rows = [[float(tok) for tok in line.split()] for line in body]
    except ValueError as exc:
        raise KronError(f"{path}: {exc}") from exc
    if len({len(r) for r in rows}) != 1:
        raise KronError(f"{path}: ragged matrix rows")
    return np.array(rows)


def read_seed(path) -> StochasticSeed:
    """Parse and normalise a seed file."""
    return validate_and_normalize(read_seed_matrix(path))


def format_seed(seed, meta: Mapping | None = None) -> str:
    arr = np.asarray(seed.matrix if isinstance(seed, StochasticSeed) else seed, dtype=np.float64)
    lines = [" ".join(f"{x:.17g}" for x in row) for row in np.atleast_2d(arr)]
    return _header(meta or {}) + "\n".join(lines) + "\n"


def write_seed(path, seed, meta: Mapping | None = None) -> None:
    Path(path).write_text(format_seed(seed, meta))


# --------------------------------------------------------------------------
# edge lists


def write_edges(path, edges: EdgeList, meta: Mapping | None = None) -> None:
    head = {"node_count": edges.node_count, **(meta or {})}
    with open(path, "w") as fh:
        fh.write(_header(head))
        if len(edges):
            pairs = np.column_stack([edges.src, edges.dst])
            np.savetxt(fh, pairs, fmt="%d", delimiter="\t")


def read_edges(path) -> EdgeList:
    """Load an edge file; ``node_count`` comes from the header or, failing that, the largest id."""
    text = Path(path).read_text()
    header: dict[str, str] = {}
    for line in text.splitlines():
        if line.startswith("#"):
            key, sep, value = line.lstrip("#").strip().partition("=")
            if sep:
                header[key.strip()] = value.strip()
        elif line.strip():
            break
    body = "\n".join(line for line in text.splitlines() if not line.startswith("#"))
    try:
        flat = np.array(body.split(), dtype=np.int64)
    except ValueError as exc:
        raise KronError(f"{path}: malformed edge line ({exc})") from exc
    if len(flat) % 2:
        raise KronError(f"{path}: odd number of vertex ids")
    pairs = flat.reshape(-1, 2)
    if "node_count" in header:
        n = int(header["node_count"])
    else:
        n = int(pairs.max()) + 1 if len(pairs) else 0
    meta = {k: v for k, v in header.items() if k != "node_count"}
    return EdgeList(n, pairs[:, 0], pairs[:, 1], meta)


def read_int_sequence(path) -> list[int]:
    body, _ = _body_and_header(path)
    try:
        return [int(tok) for line in body for tok in line.replace(",", " ").split()]
    except ValueError as exc:
        raise KronError(f"{path}: {exc}") from exc


# --------------------------------------------------------------------------
# csv reports


def write_csv(path, columns: Sequence[str], rows: Iterable[Sequence], meta: Mapping | None = None) -> None:
    with open(path, "w") as fh:
        fh.write(_header(meta or {}))
        fh.write(",".join(columns) + "\n")
        for row in rows:
            fh.write(",".join(_render(x) for x in row) + "\n")


def read_csv(path) -> tuple[list[str], list[list[str]]]:
    body, _ = _body_and_header(path)
    if not body:
        raise KronError(f"{path}: empty csv")
    return body[0].split(","), [line.split(",") for line in body[1:]]
