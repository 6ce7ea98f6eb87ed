"""Matrix Market *array* files (dense, general, real or complex).

Values are written column-major with 17 significant digits, which
round-trips every float64 exactly.
"""
from pathlib import Path

import numpy as np

__all__ = ["MatrixMarketError", "write_matrix", "read_matrix", "write_vector", "read_vector"]

HEADER_REAL = "%%MatrixMarket matrix array real general"
HEADER_COMPLEX = "%%MatrixMarket matrix array complex general"


class MatrixMarketError(ValueError):
    pass


def write_matrix(path, A, comment=None):
    A = np.asarray(A)
    if A.ndim != 2:
        raise MatrixMarketError(f"can only write 2-D arrays, got shape {A.shape}")
    lines = [HEADER_COMPLEX if np.iscomplexobj(A) else HEADER_REAL]
    if comment:
        lines.extend(f"% {c}" for c in comment.splitlines())
    lines.append(f"{A.shape[0]} {A.shape[1]}")
    flat = A.ravel(order="F")
    if np.iscomplexobj(A):
        lines.extend(f"{z.real:.17g} {z.imag:.17g}" for z in flat)
    else:
        lines.extend(f"{x:.17g}" for x in flat.astype(np.float64))
    Path(path).write_text("\n".join(lines) + "\n")


def read_matrix(path):
    """Read a dense array file; returns a float64 or complex128 ndarray."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise MatrixMarketError(f"cannot read {path}: {exc}") from None
    lines = text.splitlines()
    if not lines:
        raise MatrixMarketError(f"{path}: empty file")
    head = lines[0].split()
    if len(head) != 5 or head[0] != "%%MatrixMarket":
        raise MatrixMarketError(f"{path}: missing %%MatrixMarket header")
    obj, fmt, fld, sym = (h.lower() for h in head[1:])
    if obj != "matrix" or fmt != "array":
        raise MatrixMarketError(f"{path}: only 'matrix array' files are supported")
    if fld not in ("real", "complex", "integer", "double") or sym != "general":
        raise MatrixMarketError(f"{path}: unsupported field/symmetry {fld} {sym}")

    body = [ln for ln in lines[1:] if ln.strip() and not ln.lstrip().startswith("%")]
    if not body:
        raise MatrixMarketError(f"{path}: missing size line")
    try:
        rows, cols = (int(t) for t in body[0].split())
        values = np.array(" ".join(body[1:]).split(), dtype=np.float64)
    except ValueError as exc:
        raise MatrixMarketError(f"{path}: {exc}") from None
    width = 2 if fld == "complex" else 1
    if values.size != rows * cols * width:
        raise MatrixMarketError(
            f"{path}: expected {rows * cols} entries for a {rows}x{cols} matrix, "
            f"found {values.size // width}"
        )
    if width == 2:
        values = values[0::2] + 1j * values[1::2]
    return values.reshape((rows, cols), order="F")


def write_vector(path, v, comment=None):
    write_matrix(path, np.asarray(v).reshape(-1, 1), comment)


def read_vector(path):
    A = read_matrix(path)
    if A.shape[1] != 1:
        raise MatrixMarketError(f"{path}: expected a single column, got shape {A.shape}")
    return A[:, 0]
