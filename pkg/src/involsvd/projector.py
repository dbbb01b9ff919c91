"""Idempotent projectors (I +- A)/2 of an involutory matrix.

Two independent routes to their singular structure are provided: an
explicit SVD assembled from the structured SVD of A (permutations plus 2x2
rotations, no iterative solver), and a singular-value oracle that only needs
a rank factorization of the projector.  The two routes cross-validate each
other and the reciprocal pairing of A itself.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NumericalError, StructureViolationError, WrongClassError
from .kernel import SvdResult, as_square_matrix, hermitian_eig, qr_column_pivoted
from .structures import StructureClass, classify
from .structured_svd import PAIRED_ONE, RECIPROCAL_PAIR, StructuredSvd


def projector(a, sign: int, tol: float = 1e-10) -> np.ndarray:
    """The idempotent (I + sign*A)/2 for involutory A."""
    a = as_square_matrix(a)
    if sign not in (1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign!r}")
    report = classify(a, tol)
    if StructureClass.INVOLUTORY not in report.accepted:
        raise StructureViolationError(
            "projector needs an involutory matrix",
            residual=report.residuals[StructureClass.INVOLUTORY],
        )
    return (np.eye(a.shape[0]) + sign * a) / 2.0


def idempotency_residual(b) -> float:
    b = np.asarray(b)
    return float(np.linalg.norm(b @ b - b)) / max(1.0, float(np.linalg.norm(b)))


@dataclass
class ProjectorConstruction:
    """Stages of the explicit projector SVD, kept for inspection/testing.

    ``perm_group`` sends the block layout to (leads, partners, singles);
    ``perm_interleave`` then interleaves each (lead, partner) couple.  The
    orthogonal ``rotation`` diagonalizes the resulting 2x2 blocks, leaving
    ``diagonal`` (signed); its negative entries are absorbed into the right
    factor.  ``s_hat``/``i_hat`` are the nonzero rotated values
    sigma + 1/sigma (2 for paired ones); ``d_shift``/``e_shift`` are the
    shifted single diagonals D +- 1 and E +- 1.
    """

    perm_group: np.ndarray
    perm_interleave: np.ndarray
    rotation: np.ndarray
    diagonal: np.ndarray
    s_hat: np.ndarray
    i_hat: np.ndarray
    d_shift: np.ndarray
    e_shift: np.ndarray


@dataclass
class ProjectorSvd:
    sign: int
    b: np.ndarray
    svd: SvdResult
    construction: ProjectorConstruction


def projector_svd(ssvd: StructuredSvd, sign: int) -> ProjectorSvd:
    """Explicit SVD of (I + sign*A)/2 from the structured SVD of A.

    Works on B = (1/2) V T (T + sign*Sigma) V^H: permute T + sign*Sigma to
    2x2 blocks [[s*sigma, 1], [1, s/sigma]] plus shifted singles, rotate the
    blocks to diag(s*(sigma + 1/sigma), 0) with c = sqrt(sigma/(sigma +
    1/sigma)), s = c/sigma, and absorb negative diagonal entries into the
    right factor (the minus branch's global flip, applied per entry).
    """
    if ssvd.structure is not StructureClass.INVOLUTORY:
        raise WrongClassError(
            f"projector_svd needs an involutory matrix, got {ssvd.structure.value}"
        )
    if sign not in (1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign!r}")
    n = ssvd.dim
    pairs = ssvd.pair_blocks()
    singles = ssvd.single_blocks()
    t_pm = ssvd.t + sign * np.diag(ssvd.sigma.astype(np.complex128))

    leads = [b.columns[0] for b in pairs]
    parts = [b.columns[1] for b in pairs]
    single_pos = [b.columns[0] for b in singles]
    perm_group = np.array(leads + parts + single_pos, dtype=np.intp)
    npairs = len(pairs)
    perm_interleave = np.concatenate(
        [
            np.arange(2 * npairs).reshape(2, npairs).T.ravel(),
            np.arange(2 * npairs, n),
        ]
    ).astype(np.intp)
    perm = perm_group[perm_interleave]
    grouped = t_pm[np.ix_(perm, perm)]

    rotation = np.eye(n)
    for j, block in enumerate(pairs):
        sig = block.sigma
        c = math.sqrt(sig / (sig + 1.0 / sig))
        s = c / sig
        if sign > 0:
            r2 = np.array([[c, -s], [s, c]])
        else:
            r2 = np.array([[c, s], [-s, c]])
        rotation[2 * j : 2 * j + 2, 2 * j : 2 * j + 2] = r2

    diag_mat = rotation.T @ grouped @ rotation
    diagonal = np.real(np.diag(diag_mat)).copy()
    off = diag_mat - np.diag(np.diag(diag_mat))
    if np.linalg.norm(off) > 1e-8 * max(1.0, np.abs(diagonal).max()):
        raise NumericalError("projector rotation failed to diagonalize")

    sigma_b = np.abs(diagonal) / 2.0
    theta = np.where(diagonal < 0.0, -1.0, 1.0)
    vt = ssvd.v @ ssvd.t
    u_b = vt[:, perm] @ rotation
    v_b = (ssvd.v[:, perm] @ rotation) * theta
    b = 0.5 * vt @ t_pm @ ssvd.v.conj().T

    order = np.argsort(-sigma_b, kind="stable")
    result = SvdResult(u=u_b[:, order], sigma=sigma_b[order], v=v_b[:, order])

    s_hat = np.array([blk.sigma + 1.0 / blk.sigma for blk in pairs if blk.kind == RECIPROCAL_PAIR])
    i_hat = np.array([2.0 for blk in pairs if blk.kind == PAIRED_ONE])
    d_shift = np.real(ssvd.d) + sign
    e_shift = np.real(ssvd.e) + sign
    construction = ProjectorConstruction(
        perm_group=perm_group,
        perm_interleave=perm_interleave,
        rotation=rotation,
        diagonal=diagonal,
        s_hat=s_hat,
        i_hat=i_hat,
        d_shift=d_shift,
        e_shift=e_shift,
    )
    return ProjectorSvd(sign=sign, b=b, svd=result, construction=construction)


def householder_singular_values(a, tol: float = 1e-10) -> np.ndarray:
    """Singular values of an involutory matrix from a projector rank
    factorization, without computing any SVD.

    With r = min(#eigenvalues +1, #eigenvalues -1) read off the trace, the
    rank-r projector B = (I +- A)/2 factors as B = Q W^H; the r singular
    values above 1 are the eigenvalues of (W^H W)^(1/2) + (W^H W - I)^(1/2),
    their reciprocals pair them, and the remaining n - 2r values equal 1.
    Returned sorted descending.
    """
    a = as_square_matrix(a)
    n = a.shape[0]
    report = classify(a, tol)
    if StructureClass.INVOLUTORY not in report.accepted:
        raise StructureViolationError(
            "householder oracle needs an involutory matrix",
            residual=report.residuals[StructureClass.INVOLUTORY],
        )
    trace = complex(np.trace(a))
    tr = int(round(trace.real))
    if abs(trace.real - tr) > 0.1 or abs(trace.imag) > 0.1 or (n + tr) % 2 != 0:
        raise NumericalError(f"trace {trace!r} is not consistent with +-1 eigenvalues")
    n_plus = (n + tr) // 2
    n_minus = n - n_plus
    r = min(n_plus, n_minus)
    if r == 0:
        return np.ones(n)
    sign = 1 if n_plus <= n_minus else -1
    b = (np.eye(n) + sign * a) / 2.0
    _, w, rank = qr_column_pivoted(b, tol)
    if rank != r:
        raise NumericalError(f"trace-derived rank {r} does not match QR rank {rank}")
    gram = w.conj().T @ w
    _, lam = hermitian_eig(gram)
    # sqrt(lam - 1) has infinite slope at the PSD boundary lam = 1, so the
    # clamp window must absorb eigensolver noise, which scales with ||gram||
    eps = float(np.finfo(np.float64).eps)
    window = max(tol, 16.0 * r * eps * max(1.0, float(lam[0])))
    shifted = lam - 1.0
    if np.any(shifted < -window):
        raise NumericalError(
            f"W^H W - I has eigenvalue {shifted.min():.3e} beyond -{window:.3e}; "
            "it must be positive semidefinite"
        )
    shifted = np.where(np.abs(shifted) <= window, 0.0, shifted)
    vals = np.sqrt(lam) + np.sqrt(shifted)
    out = np.concatenate([vals, np.ones(n - 2 * r), 1.0 / vals])
    return np.sort(out)[::-1]
