"""Matrix Market dense-array file I/O.

One interchange format: ``matrix array complex general``, entries listed
column-major, one ``real imag`` pair per line.  Real and integer typed files
are promoted to complex on read.  Floats are written with Python's
shortest-round-trip repr, so read(write(m)) reproduces m bit-exactly for
finite doubles.
"""

from __future__ import annotations

import numpy as np

from .errors import InvalidInputError, MatrixFormatError
from .kernel import as_matrix

_HEADER = "%%MatrixMarket"


def read_matrix(path) -> np.ndarray:
    """Parse a Matrix Market array file into a complex matrix."""
    with open(path, "r", encoding="ascii") as handle:
        lines = handle.read().splitlines()

    header = None
    body_start = 0
    for lineno, text in enumerate(lines, start=1):
        if text.strip():
            header = (lineno, text.strip())
            body_start = lineno
            break
    if header is None:
        raise MatrixFormatError("empty file", line=1)
    lineno, text = header
    tokens = text.split()
    if len(tokens) != 5 or tokens[0] != _HEADER:
        raise MatrixFormatError(
            f"line {lineno}: expected '%%MatrixMarket matrix array <field> general'",
            line=lineno,
        )
    _, obj, fmt, field, symmetry = (tok.lower() for tok in tokens)
    if obj != "matrix" or fmt != "array":
        raise MatrixFormatError(
            f"line {lineno}: unsupported layout '{obj} {fmt}' (need 'matrix array')",
            line=lineno,
        )
    if field not in ("complex", "real", "integer"):
        raise MatrixFormatError(f"line {lineno}: unsupported field '{field}'", line=lineno)
    if symmetry != "general":
        raise MatrixFormatError(
            f"line {lineno}: unsupported symmetry '{symmetry}' (need 'general')",
            line=lineno,
        )

    shape = None
    values: list = []
    per_entry = 2 if field == "complex" else 1
    for lineno in range(body_start + 1, len(lines) + 1):
        text = lines[lineno - 1].strip()
        if not text or text.startswith("%"):
            continue
        parts = text.split()
        if shape is None:
            if len(parts) != 2:
                raise MatrixFormatError(
                    f"line {lineno}: expected 'rows cols', got {text!r}", line=lineno
                )
            try:
                rows, cols = int(parts[0]), int(parts[1])
            except ValueError:
                raise MatrixFormatError(
                    f"line {lineno}: non-integer dimensions {text!r}", line=lineno
                ) from None
            if rows < 1 or cols < 1:
                raise MatrixFormatError(
                    f"line {lineno}: dimensions must be positive, got {rows} x {cols}",
                    line=lineno,
                )
            shape = (rows, cols)
            continue
        if len(parts) != per_entry:
            raise MatrixFormatError(
                f"line {lineno}: expected {per_entry} number(s) per entry, got {text!r}",
                line=lineno,
            )
        try:
            values.append([float(p) for p in parts])
        except ValueError:
            raise MatrixFormatError(
                f"line {lineno}: cannot parse entry {text!r}", line=lineno
            ) from None

    if shape is None:
        raise MatrixFormatError("missing size line", line=len(lines) or 1)
    rows, cols = shape
    expected = rows * cols
    if len(values) < expected:
        raise MatrixFormatError(
            f"file ends after {len(values)} of {expected} entries "
            f"(entry {len(values) + 1} missing)",
            line=len(lines),
        )
    if len(values) > expected:
        raise MatrixFormatError(
            f"file has {len(values)} entries, expected {expected}", line=len(lines)
        )
    flat = np.asarray(values, dtype=np.float64)
    if field == "complex":
        data = flat[:, 0] + 1j * flat[:, 1]
    else:
        data = flat[:, 0].astype(np.complex128)
    matrix = data.reshape((cols, rows)).T  # entries are column-major
    if not np.all(np.isfinite(matrix.real)) or not np.all(np.isfinite(matrix.imag)):
        raise InvalidInputError(f"matrix in {path} contains non-finite entries")
    return matrix


def write_matrix(path, m) -> None:
    """Write a matrix as Matrix Market 'array complex general'."""
    m = as_matrix(m)
    rows, cols = m.shape
    lines = [f"{_HEADER} matrix array complex general", f"{rows} {cols}"]
    for j in range(cols):
        for i in range(rows):
            entry = m[i, j]
            lines.append(f"{float(entry.real)!r} {float(entry.imag)!r}")
    with open(path, "w", encoding="ascii") as handle:
        handle.write("\n".join(lines) + "\n")


def write_values(path, values) -> None:
    """One shortest-round-trip decimal per line (sigma files)."""
    values = np.asarray(values, dtype=np.float64).ravel()
    if not np.all(np.isfinite(values)):
        raise InvalidInputError("values must be finite")
    with open(path, "w", encoding="ascii") as handle:
        handle.write("\n".join(repr(float(v)) for v in values) + "\n")
