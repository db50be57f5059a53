"""Text formats used by the command line interface.

Matrices are JSON documents ``{"rows": r, "cols": c, "data": [...]}`` with
row-major entries that are either a real number or a pair ``[re, im]``.
Numbers are written with 17 significant digits, which round-trips doubles.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
from typing import Callable, TextIO, Union

import numpy as np

from mittagmat.errors import InvalidSpec

PathLike = Union[str, "os.PathLike[str]"]


def _fmt(x: float) -> str:
    if not math.isfinite(x):
        raise InvalidSpec(f"cannot serialize non-finite value {x}")
    return format(x, ".17g")


# {{{ matrix files


def matrix_to_json(M) -> str:
    M = np.atleast_2d(np.asarray(M))
    rows, cols = M.shape
    entries = []
    for z in M.reshape(-1):
        z = complex(z)
        if z.imag == 0:
            entries.append(_fmt(z.real))
        else:
            entries.append(f"[{_fmt(z.real)}, {_fmt(z.imag)}]")

    lines = []
    for i in range(rows):
        lines.append("    " + ", ".join(entries[i * cols:(i + 1) * cols]))
    data = ",\n".join(lines)
    return f'{{\n  "rows": {rows},\n  "cols": {cols},\n  "data": [\n{data}\n  ]\n}}\n'


def _entry(value, index: int) -> complex:
    if isinstance(value, bool):
        raise InvalidSpec(f"entry {index} is not a number: {value!r}")
    if isinstance(value, (int, float)):
        return complex(value, 0.0)
    if (
        isinstance(value, list)
        and len(value) == 2
        and all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in value)
    ):
        return complex(value[0], value[1])
    raise InvalidSpec(f"entry {index} must be a number or a pair [re, im]: {value!r}")


def matrix_from_json(text: str) -> np.ndarray:
    """Parse a matrix document; real when every entry is real."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidSpec(f"malformed matrix document: {exc}") from exc

    if not isinstance(doc, dict) or not {"rows", "cols", "data"} <= doc.keys():
        raise InvalidSpec('matrix document needs "rows", "cols" and "data"')
    rows, cols, data = doc["rows"], doc["cols"], doc["data"]
    if not (isinstance(rows, int) and isinstance(cols, int) and rows > 0 and cols > 0):
        raise InvalidSpec("rows and cols must be positive integers")
    if not isinstance(data, list) or len(data) != rows * cols:
        raise InvalidSpec(f"data must hold rows * cols = {rows * cols} entries")

    values = np.array([_entry(v, i) for i, v in enumerate(data)], dtype=np.complex128)
    if not np.all(np.isfinite(values)):
        raise InvalidSpec("matrix entries must be finite")
    M = values.reshape(rows, cols)
    if np.all(M.imag == 0):
        return M.real.copy()
    return M


def read_matrix(path: PathLike) -> np.ndarray:
    with open(path, encoding="utf-8") as f:
        return matrix_from_json(f.read())


def write_matrix(path: PathLike, M) -> None:
    with open(path, "w", encoding="utf-8") as f:
        f.write(matrix_to_json(M))


# }}}


# {{{ trajectories


def write_trajectory(
    out: TextIO, t: np.ndarray, values: np.ndarray, singular: np.ndarray,
    names: list[str] | None = None,
) -> None:
    """Write a table with columns ``t, z1, ..., zn, status``.

    Complex trajectories get a ``.re`` and ``.im`` column per component.
    Singular nodes have empty value cells and status ``singular``.
    """
    values = np.atleast_2d(np.asarray(values))
    n = values.shape[1]
    names = names or [f"z{i + 1}" for i in range(n)]
    complex_valued = np.iscomplexobj(values) and np.any(values[~singular].imag != 0)

    header = ["t"]
    for name in names:
        header.extend([f"{name}.re", f"{name}.im"] if complex_valued else [name])
    header.append("status")

    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(header)
    for ti, row, sing in zip(t, values, singular):
        cells = [_fmt(float(ti))]
        for z in row:
            if sing:
                cells.extend(["", ""] if complex_valued else [""])
            elif complex_valued:
                cells.extend([_fmt(z.real), _fmt(z.imag)])
            else:
                cells.append(_fmt(float(np.real(z))))
        cells.append("singular" if sing else "ok")
        writer.writerow(cells)


def trajectory_to_csv(t, values, singular, names=None) -> str:
    buf = io.StringIO()
    write_trajectory(buf, t, values, singular, names)
    return buf.getvalue()


def read_trajectory(text: str) -> tuple[list[str], np.ndarray, np.ndarray, list[str]]:
    """Parse a table written by :func:`write_trajectory`.

    :returns: ``(header, t, values, status)``; singular cells are ``nan``.
    """
    reader = csv.reader(io.StringIO(text))
    header = next(reader)
    t, values, status = [], [], []
    for row in reader:
        t.append(float(row[0]))
        values.append([float(c) if c else math.nan for c in row[1:-1]])
        status.append(row[-1])
    return header, np.array(t), np.array(values), status


# }}}


# {{{ sampled forcing


def read_samples(path: PathLike) -> tuple[np.ndarray, np.ndarray]:
    """Read a table of ``t v1 ... vn`` rows (comma or whitespace separated).

    Blank lines and lines starting with ``#`` are skipped.
    """
    rows = []
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            try:
                rows.append([float(x) for x in line.replace(",", " ").split()])
            except ValueError as exc:
                raise InvalidSpec(f"{path}:{lineno}: {exc}") from exc

    if len(rows) < 2:
        raise InvalidSpec(f"{path}: need at least two samples")
    width = len(rows[0])
    if width < 2 or any(len(r) != width for r in rows):
        raise InvalidSpec(f"{path}: every row needs the same number (>= 2) of columns")

    table = np.array(rows)
    t = table[:, 0]
    if not np.all(np.isfinite(table)) or np.any(np.diff(t) <= 0):
        raise InvalidSpec(f"{path}: times must be finite and strictly increasing")
    return t, table[:, 1:]


def sampled_forcing(t: np.ndarray, v: np.ndarray) -> Callable[[float], np.ndarray]:
    """Piecewise linear interpolant of samples ``v[i]`` at times ``t[i]``.

    Evaluation outside ``[t[0], t[-1]]`` raises :class:`ValueError`.
    """
    t = np.asarray(t, dtype=float)
    v = np.asarray(v, dtype=float)
    slack = 1.0e-12 * max(1.0, abs(t[-1]))

    def f(s: float) -> np.ndarray:
        if not (t[0] - slack <= s <= t[-1] + slack):
            raise ValueError(f"t = {s} outside the sampled range [{t[0]}, {t[-1]}]")
        return np.array([np.interp(s, t, v[:, j]) for j in range(v.shape[1])])

    return f


# }}}
