"""Matrix validation helpers and the fixture file formats.

The package works on real double-precision matrices stored column-major
(Fortran order); columns are the unit of permutation and slicing
throughout, so column contiguity is what matters for speed.

Binary fixture format: magic bytes ``PQR1``, then rows and cols as 64-bit
little-endian signed integers, then ``rows * cols`` IEEE-754 doubles in
column-major order. A whitespace-delimited text reader covers small
hand-written fixtures.
"""

import numpy as np

MAGIC = b"PQR1"


def as_matrix(a, name="matrix"):
    """Coerce to a 2-D float64 Fortran-ordered array (copying only if needed)."""
    out = np.asfortranarray(a, dtype=np.float64)
    if out.ndim != 2:
        raise ValueError(f"{name} must be 2-D, got shape {out.shape}")
    return out


def write_matrix(path, a):
    """Write a matrix to the binary fixture format."""
    a = as_matrix(a)
    if not np.isfinite(a).all():
        raise ValueError("refusing to write non-finite matrix entries")
    rows, cols = a.shape
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(np.asarray([rows, cols], dtype="<i8").tobytes())
        fh.write(a.astype("<f8").tobytes(order="F"))


def read_matrix(path):
    """Read a matrix written by :func:`write_matrix`."""
    with open(path, "rb") as fh:
        magic = fh.read(4)
        if magic != MAGIC:
            raise ValueError(f"{path}: bad magic {magic!r}, expected {MAGIC!r}")
        header = fh.read(16)
        if len(header) != 16:
            raise ValueError(f"{path}: truncated header")
        rows, cols = (int(x) for x in np.frombuffer(header, dtype="<i8"))
        if rows <= 0 or cols <= 0:
            raise ValueError(f"{path}: invalid dimensions {rows} x {cols}")
        payload = fh.read(8 * rows * cols)
        if len(payload) != 8 * rows * cols:
            raise ValueError(f"{path}: truncated payload")
    data = np.frombuffer(payload, dtype="<f8")
    a = np.asfortranarray(data.reshape((rows, cols), order="F"))
    if not np.isfinite(a).all():
        raise ValueError(f"{path}: non-finite entries")
    return a


def read_text_matrix(path):
    """Read a whitespace-delimited text matrix (one row per line)."""
    a = np.loadtxt(path, dtype=np.float64, ndmin=2)
    if not np.isfinite(a).all():
        raise ValueError(f"{path}: non-finite entries")
    return np.asfortranarray(a)
