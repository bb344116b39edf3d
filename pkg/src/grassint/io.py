"""Matrix exchange formats.

Binary layout: magic b"GRSM1", then two little-endian u64 (rows n, columns
m), then n*m float64 values in column-major order. Plain-text CSV (one
matrix row per line, '.' decimal separator) is selected by the .csv
extension when reading or writing.
"""

from __future__ import annotations

import json
import os
from pathlib import Path

import numpy as np

from .errors import ConfigInvalid

MAGIC = b"GRSM1"


def write_matrix(path, matrix: np.ndarray) -> None:
    path = Path(path)
    matrix = np.atleast_2d(np.asarray(matrix, dtype=float))
    if path.suffix.lower() == ".csv":
        np.savetxt(path, matrix, delimiter=",")
        return
    n, m = matrix.shape
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(np.array([n, m], dtype="<u8").tobytes())
        fh.write(np.asfortranarray(matrix).astype("<f8").tobytes(order="F"))


def read_matrix(path) -> np.ndarray:
    path = Path(path)
    if path.suffix.lower() == ".csv":
        return np.atleast_2d(np.loadtxt(path, delimiter=",", dtype=float))
    with open(path, "rb") as fh:
        magic = fh.read(len(MAGIC))
        if magic != MAGIC:
            raise ConfigInvalid(f"{path}: bad magic {magic!r}, expected {MAGIC!r}")
        n, m = np.frombuffer(fh.read(16), dtype="<u8")
        data = np.frombuffer(fh.read(int(n * m) * 8), dtype="<f8")
        if data.size != n * m:
            raise ConfigInvalid(f"{path}: truncated payload")
        return data.reshape((int(n), int(m)), order="F").copy()


def write_json(path, payload: dict) -> None:
    tmp = Path(str(path) + ".tmp")
    tmp.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    os.replace(tmp, path)


def read_json(path) -> dict:
    return json.loads(Path(path).read_text())


def write_spectrum_csv(path, eigenvalues: np.ndarray) -> None:
    """Eigenvalue spectrum as (index, value) rows."""
    with open(path, "w") as fh:
        fh.write("index,value\n")
        for i, val in enumerate(np.asarray(eigenvalues, dtype=float)):
            fh.write(f"{i},{float(val)!r}\n")
