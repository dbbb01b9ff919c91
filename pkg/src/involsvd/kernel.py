"""Dense complex linear-algebra kernels.

Everything operates on square ``complex128`` numpy arrays and is
deterministic: identical inputs give bitwise-identical results.  The SVD is
a one-sided Jacobi iteration because the downstream decompositions rely on
high *relative* accuracy in the small singular values of reciprocally paired
spectra, which bidiagonalization-based solvers do not guarantee.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import (
    DimensionError,
    InvalidInputError,
    NumericalError,
    StructureViolationError,
)

_EPS = float(np.finfo(np.float64).eps)
_MAX_SWEEPS = 64


def as_matrix(a) -> np.ndarray:
    """Validate and return a fresh complex128 2-d array."""
    arr = np.asarray(a)
    if arr.ndim != 2:
        raise DimensionError(f"expected a 2-d matrix, got shape {arr.shape}")
    arr = arr.astype(np.complex128, copy=True)
    if not np.all(np.isfinite(arr.real)) or not np.all(np.isfinite(arr.imag)):
        raise InvalidInputError("matrix entries must be finite")
    return arr


def as_square_matrix(a) -> np.ndarray:
    arr = as_matrix(a)
    if arr.shape[0] != arr.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {arr.shape}")
    if arr.shape[0] == 0:
        raise DimensionError("matrix must be at least 1x1")
    return arr


@dataclass
class SvdResult:
    """SVD triple with ``a = u @ diag(sigma) @ v.conj().T``.

    ``sigma`` is non-increasing and nonnegative, ``u`` and ``v`` are unitary.
    """

    u: np.ndarray
    sigma: np.ndarray
    v: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return (self.u * self.sigma) @ self.v.conj().T


def _round_robin_rounds(n: int):
    # circle-method tournament: n-1 (or n) rounds of disjoint column pairs,
    # together covering every pair once per sweep
    m = n if n % 2 == 0 else n + 1
    players = list(range(m))
    rounds = []
    for _ in range(m - 1):
        ps, qs = [], []
        for k in range(m // 2):
            a, b = players[k], players[m - 1 - k]
            if a < n and b < n:
                ps.append(min(a, b))
                qs.append(max(a, b))
        rounds.append((np.asarray(ps, dtype=np.intp), np.asarray(qs, dtype=np.intp)))
        players = [players[0], players[-1]] + players[1:-1]
    return rounds


def _extend_orthonormal(columns: list, n: int) -> np.ndarray:
    """Deterministic unit vector orthogonal to the given columns."""
    if columns:
        b = np.column_stack(columns)
        residual = 1.0 - np.minimum(1.0, (np.abs(b) ** 2).sum(axis=1))
    else:
        b = None
        residual = np.ones(n)
    x = np.zeros(n, dtype=np.complex128)
    x[int(np.argmax(residual))] = 1.0
    for _ in range(2):
        if b is not None:
            x = x - b @ (b.conj().T @ x)
    nrm = np.linalg.norm(x)
    if nrm < 1e-8:
        raise NumericalError("failed to extend orthonormal basis")
    return x / nrm


def svd(a) -> SvdResult:
    """One-sided Jacobi SVD of a square complex matrix.

    Columns are orthogonalized pairwise with unitary plane rotations until
    every Gram entry satisfies ``|x_p^H x_q| <= ulp * ||x_p|| * ||x_q||``.
    Pairs are scheduled round-robin so that each round rotates disjoint
    columns simultaneously; the schedule is fixed, hence the result is
    deterministic.  Singular values are returned in non-increasing order
    (ties broken by a stable sort).
    """
    x = as_square_matrix(a)
    n = x.shape[0]
    v = np.eye(n, dtype=np.complex128)
    if n > 1:
        rounds = _round_robin_rounds(n)
        for _ in range(_MAX_SWEEPS):
            rotated = False
            for ps, qs in rounds:
                xp = x[:, ps]
                xq = x[:, qs]
                app = np.einsum("ij,ij->j", xp.conj(), xp).real
                aqq = np.einsum("ij,ij->j", xq.conj(), xq).real
                apq = np.einsum("ij,ij->j", xp.conj(), xq)
                live = np.abs(apq) > _EPS * np.sqrt(app * aqq)
                if not live.any():
                    continue
                rotated = True
                p = ps[live]
                q = qs[live]
                gpq = apq[live]
                mod = np.abs(gpq)
                phase = gpq / mod
                zeta = (aqq[live] - app[live]) / (2.0 * mod)
                t = np.where(zeta >= 0, 1.0, -1.0) / (
                    np.abs(zeta) + np.sqrt(1.0 + zeta * zeta)
                )
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                xp = x[:, p]
                xq = x[:, q]
                x[:, p] = c * xp - (s * phase.conj()) * xq
                x[:, q] = (s * phase) * xp + c * xq
                vp = v[:, p]
                vq = v[:, q]
                v[:, p] = c * vp - (s * phase.conj()) * vq
                v[:, q] = (s * phase) * vp + c * vq
            if not rotated:
                break
        else:
            raise NumericalError("one-sided Jacobi sweep limit exceeded")

    norms = np.linalg.norm(x, axis=0)
    order = np.argsort(-norms, kind="stable")
    sigma = norms[order]
    x = x[:, order]
    v = v[:, order]
    u = np.zeros_like(x)
    nonzero = sigma > 0.0
    u[:, nonzero] = x[:, nonzero] / sigma[nonzero]
    if not nonzero.all():
        # rank-deficient input: complete u to a unitary matrix
        have = [u[:, j] for j in range(n) if nonzero[j]]
        for j in np.flatnonzero(~nonzero):
            col = _extend_orthonormal(have, n)
            u[:, j] = col
            have.append(col)
    return SvdResult(u=u, sigma=sigma, v=v)


def hermitian_eig(h):
    """Eigendecomposition of a (nearly) Hermitian matrix.

    The input is symmetrized as ``(h + h^H)/2`` first.  Returns ``(q, lam)``
    with unitary ``q`` and real eigenvalues ``lam`` sorted descending.
    """
    h = as_square_matrix(h)
    hs = (h + h.conj().T) / 2.0
    lam, q = np.linalg.eigh(hs)
    return q[:, ::-1].copy(), lam[::-1].copy()


def takagi_symmetric_unitary(m, tol: float) -> np.ndarray:
    """Factor a symmetric unitary matrix as ``m = f @ f.T`` with unitary f.

    Every column ``x`` of ``f`` is a coneigenvector of ``m`` for coneigenvalue
    one: ``m @ x.conj() == x``.  Works by deflation: pick a unit vector x
    orthogonal to the accepted columns and accept the normalized
    ``x + m @ x.conj()`` (or ``1j*(x - m @ x.conj())`` when that nearly
    cancels; the two candidates have squared norms summing to 4, so one is
    always well away from zero).
    """
    m = as_square_matrix(m)
    n = m.shape[0]
    limit = tol * n
    unitary_res = float(np.linalg.norm(m.conj().T @ m - np.eye(n)))
    if unitary_res > limit:
        raise StructureViolationError(
            f"matrix is not unitary: residual {unitary_res:.3e} > {limit:.3e}",
            residual=unitary_res,
        )
    symmetric_res = float(np.linalg.norm(m - m.T))
    if symmetric_res > limit:
        raise StructureViolationError(
            f"matrix is not symmetric: residual {symmetric_res:.3e} > {limit:.3e}",
            residual=symmetric_res,
        )
    cols: list = []
    for _ in range(n):
        x = _extend_orthonormal(cols, n)
        y = x + m @ x.conj()
        if np.linalg.norm(y) < 1e-6:
            y = 1j * (x - m @ x.conj())
        if cols:
            b = np.column_stack(cols)
            for _ in range(2):
                y = y - b @ (b.conj().T @ y)
        y = y / np.linalg.norm(y)
        cols.append(y)
    return np.column_stack(cols)


def j_matrix(k: int) -> np.ndarray:
    """The 2k x 2k block matrix [[0, I], [-I, 0]]; squares to -I."""
    j = np.zeros((2 * k, 2 * k), dtype=np.complex128)
    j[:k, k:] = np.eye(k)
    j[k:, :k] = -np.eye(k)
    return j


def skew_pair_unitary(m, tol: float) -> np.ndarray:
    """Factor a skew-symmetric unitary matrix as ``m = f @ J @ f.T``.

    ``J = [[0, I], [-I, 0]]``.  Deflation: for unit x orthogonal to the
    accepted columns, ``y = m @ x.conj()`` is automatically orthogonal to x
    (``x.conj().T @ m @ x.conj()`` vanishes for skew-symmetric m), so (x, y)
    is accepted as a pair and f is assembled so the pairs land in the J
    layout.
    """
    m = as_square_matrix(m)
    n = m.shape[0]
    if n % 2 != 0:
        raise StructureViolationError(
            f"skew-symmetric unitary pairing needs even dimension, got {n}"
        )
    limit = tol * n
    unitary_res = float(np.linalg.norm(m.conj().T @ m - np.eye(n)))
    if unitary_res > limit:
        raise StructureViolationError(
            f"matrix is not unitary: residual {unitary_res:.3e} > {limit:.3e}",
            residual=unitary_res,
        )
    skew_res = float(np.linalg.norm(m + m.T))
    if skew_res > limit:
        raise StructureViolationError(
            f"matrix is not skew-symmetric: residual {skew_res:.3e} > {limit:.3e}",
            residual=skew_res,
        )
    k = n // 2
    xs, ys, accepted = [], [], []
    for _ in range(k):
        x = _extend_orthonormal(accepted, n)
        y = m @ x.conj()
        b = np.column_stack(accepted + [x])
        for _ in range(2):
            y = y - b @ (b.conj().T @ y)
        y = y / np.linalg.norm(y)
        xs.append(x)
        ys.append(-y)
        accepted.extend([x, y])
    return np.column_stack(xs + ys)


def qr_column_pivoted(a, tol: float):
    """Rank-revealing factorization ``a ~= q @ w.conj().T``.

    Column-pivoted QR; the numerical rank r counts diagonal entries of R
    above ``tol * sigma_max``.  Returns ``(q, w, r)`` with ``q`` having r
    orthonormal columns and ``w`` of shape (cols, r).
    """
    a = as_matrix(a)
    rows, cols = a.shape
    if rows == 0 or cols == 0:
        raise DimensionError("matrix must be at least 1x1")
    q_full, r_full, perm = scipy.linalg.qr(a, mode="economic", pivoting=True)
    smax = float(np.linalg.norm(a, 2)) if a.size else 0.0
    diag = np.abs(np.diag(r_full))
    rank = int(np.count_nonzero(diag > tol * smax)) if smax > 0 else 0
    inverse_perm = np.empty_like(perm)
    inverse_perm[perm] = np.arange(cols)
    q = q_full[:, :rank]
    w = r_full[:rank, :][:, inverse_perm].conj().T
    return q, w, rank


_PADE13_B = (
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
)
_THETA13 = 5.371920351148152


def matexp_skewfactor(r) -> np.ndarray:
    """Compute ``exp(1j * r)`` for a real square matrix r.

    Scaling-and-squaring with the diagonal Pade approximant of degree 13.
    The result x is coninvolutory by construction: ``x @ x.conj() ~= I``.
    """
    r = as_square_matrix(r)
    if np.any(r.imag != 0.0):
        raise InvalidInputError("generator must be a real matrix")
    n = r.shape[0]
    m = 1j * r.real.astype(np.float64)
    norm1 = float(np.linalg.norm(m, 1))
    squarings = 0
    if norm1 > _THETA13:
        squarings = int(math.ceil(math.log2(norm1 / _THETA13)))
        m = m / (2.0**squarings)
    b = _PADE13_B
    ident = np.eye(n, dtype=np.complex128)
    m2 = m @ m
    m4 = m2 @ m2
    m6 = m4 @ m2
    u = m @ (m6 @ (b[13] * m6 + b[11] * m4 + b[9] * m2)
             + b[7] * m6 + b[5] * m4 + b[3] * m2 + b[1] * ident)
    v = (m6 @ (b[12] * m6 + b[10] * m4 + b[8] * m2)
         + b[6] * m6 + b[4] * m4 + b[2] * m2 + b[0] * ident)
    x = np.linalg.solve(v - u, v + u)
    for _ in range(squarings):
        x = x @ x
    return x
