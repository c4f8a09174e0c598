"""Matrix and trace file formats.

Binary matrix files carry a 16-byte header (magic ``VNMX``, u32 rows,
u32 cols, u32 reserved zero; all little-endian) followed by rows*cols
float64 entries in column-major order.  CSV matrix files hold one row per
line with comma-separated decimal floats.  Trace CSVs are written with 17
significant digits so reruns byte-compare.
"""

from __future__ import annotations

import struct

import numpy as np

from .linalg import check_matrix

MAGIC = b"VNMX"
_HEADER = struct.Struct("<4sIII")


def save_matrix_bin(path, a) -> None:
    a = check_matrix(a)
    rows, cols = a.shape
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(MAGIC, rows, cols, 0))
        fh.write(np.asfortranarray(a).astype("<f8").tobytes(order="F"))


def load_matrix_bin(path) -> np.ndarray:
    with open(path, "rb") as fh:
        header = fh.read(_HEADER.size)
        if len(header) != _HEADER.size:
            raise ValueError(f"{path}: truncated header")
        magic, rows, cols, _ = _HEADER.unpack(header)
        if magic != MAGIC:
            raise ValueError(f"{path}: bad magic {magic!r}")
        data = np.frombuffer(fh.read(8 * rows * cols), dtype="<f8")
    if data.size != rows * cols:
        raise ValueError(f"{path}: truncated payload")
    return data.reshape((rows, cols), order="F").astype(float)


def save_matrix_csv(path, a) -> None:
    a = check_matrix(a)
    with open(path, "w") as fh:
        for row in a:
            fh.write(",".join(f"{x:.17g}" for x in row) + "\n")


def load_matrix_csv(path) -> np.ndarray:
    rows = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if line:
                rows.append([float(tok) for tok in line.split(",")])
    if not rows:
        raise ValueError(f"{path}: empty matrix file")
    return check_matrix(np.array(rows))


def save_matrix(path, a) -> None:
    """Dispatch on extension: ``.csv`` goes to CSV, anything else binary."""
    if str(path).endswith(".csv"):
        save_matrix_csv(path, a)
    else:
        save_matrix_bin(path, a)


def load_matrix(path) -> np.ndarray:
    if str(path).endswith(".csv"):
        return load_matrix_csv(path)
    return load_matrix_bin(path)


TRACE_HEADER = "iter,norm_y,q1,active_size,agg_event,inner_qp_iters"


def format_trace_row(row) -> str:
    return (
        f"{row.iter},{row.norm_y:.17g},{row.q1:.17g},"
        f"{row.active_size},{int(row.agg_event)},{row.inner_qp_iters}"
    )


def write_trace_csv(path, trace) -> None:
    """One row per outer iteration of a solve."""
    with open(path, "w") as fh:
        fh.write(TRACE_HEADER + "\n")
        for row in trace:
            fh.write(format_trace_row(row) + "\n")
