"""Condensed canonical forms and (con)eigendecompositions.

Every structured SVD yields the condensed matrix ``T Sigma`` to which the
input is unitarily (con)similar; ``T Sigma`` lies in the same structure
class and exposes all singular values and (con)eigenvalue counts.  Writing
``S = S^(1/2) S^(1/2)`` further turns the pairing into plain similarity with
an explicit mixer, which gives the eigendecomposition (involutory classes),
a transform realizing consimilarity to the identity (coninvolutory), or to
-J (skew-coninvolutory).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from .errors import WrongClassError
from .kernel import j_matrix
from .structures import StructureClass
from .structured_svd import StructuredSvd

UNITARY_SIMILARITY = "unitary_similarity"
SIMILARITY = "similarity"
UNITARY_CONSIMILARITY = "unitary_consimilarity"
CONSIMILARITY = "consimilarity"


@dataclass
class CanonicalForm:
    """Condensed matrix plus the transform realizing the (con)similarity."""

    t_sigma: np.ndarray
    transform: np.ndarray
    kind: str


def canonical_form(ssvd: StructuredSvd) -> CanonicalForm:
    """Assemble the condensed canonical form T Sigma.

    The involutory classes give ``a = V (T Sigma) V^H`` (unitary
    similarity); the coninvolutory classes give ``a = conj(V) (T Sigma) V^H``
    (unitary consimilarity, with T Sigma = -J Sigma in the skew case).
    """
    t_sigma = ssvd.t @ np.diag(ssvd.sigma.astype(np.complex128))
    kind = UNITARY_CONSIMILARITY if ssvd.structure.is_con else UNITARY_SIMILARITY
    return CanonicalForm(t_sigma=t_sigma, transform=ssvd.v.copy(), kind=kind)


def canonical_residual(a, form: CanonicalForm) -> float:
    """Normalized residual of the canonical factorization."""
    a = np.asarray(a)
    v = form.transform
    left = v.conj() if form.kind in (UNITARY_CONSIMILARITY, CONSIMILARITY) else v
    recon = left @ form.t_sigma @ v.conj().T
    n = a.shape[0]
    return float(np.linalg.norm(a - recon)) / (n * max(1.0, float(np.linalg.norm(a))))


@dataclass
class EigenDecomposition:
    """``a @ x = x @ diag(eigenvalues)`` with eigenvalues in {+1,-1} or {+1j,-1j}."""

    x: np.ndarray
    eigenvalues: np.ndarray
    n_plus: int
    n_minus: int


def _pair_scaling(ssvd: StructuredSvd) -> np.ndarray:
    """Column scaling diag(..., sigma^-1/2 at leads, sigma^+1/2 at partners)."""
    scale = np.ones(ssvd.dim)
    for block in ssvd.pair_blocks():
        lead, part = block.columns
        scale[lead] = block.sigma ** -0.5
        scale[part] = block.sigma ** 0.5
    return scale


def eigendecompose(ssvd: StructuredSvd) -> EigenDecomposition:
    """Eigendecomposition of an involutory or skew-involutory matrix.

    Built as X = Z P with Z = V diag(S^-1/2, I, S^1/2, I) and P the explicit
    orthogonal (or unitary, in the skew case) mixer that diagonalizes the
    coupling pattern: each reciprocal pair contributes one eigenvalue of
    each sign, each single contributes its own sign.
    """
    if ssvd.structure not in (StructureClass.INVOLUTORY, StructureClass.SKEW_INVOLUTORY):
        raise WrongClassError(
            f"eigendecompose needs an involutory class, got {ssvd.structure.value}"
        )
    n = ssvd.dim
    skew = ssvd.structure is StructureClass.SKEW_INVOLUTORY
    z = ssvd.v * _pair_scaling(ssvd)
    mixer = np.zeros((n, n), dtype=np.complex128)
    eigenvalues = np.zeros(n, dtype=np.complex128)
    col = 0
    inv_sqrt2 = 1.0 / math.sqrt(2.0)
    for block in ssvd.pair_blocks():
        lead, part = block.columns
        if skew:
            mixer[lead, col] = inv_sqrt2
            mixer[part, col] = -1j * inv_sqrt2
            eigenvalues[col] = 1j
            mixer[lead, col + 1] = inv_sqrt2
            mixer[part, col + 1] = 1j * inv_sqrt2
            eigenvalues[col + 1] = -1j
        else:
            mixer[lead, col] = inv_sqrt2
            mixer[part, col] = -inv_sqrt2
            eigenvalues[col] = -1.0
            mixer[lead, col + 1] = inv_sqrt2
            mixer[part, col + 1] = inv_sqrt2
            eigenvalues[col + 1] = 1.0
        col += 2
    for block in ssvd.single_blocks():
        pos = block.columns[0]
        mixer[pos, col] = 1.0
        eigenvalues[col] = ssvd.t[pos, pos]  # +-1, or +-1j in the skew case
        col += 1
    x = z @ mixer
    key = eigenvalues.imag if skew else eigenvalues.real
    n_plus = int(np.count_nonzero(key > 0))
    return EigenDecomposition(
        x=x, eigenvalues=eigenvalues, n_plus=n_plus, n_minus=n - n_plus
    )


def eigen_residual(a, eig: EigenDecomposition) -> float:
    """Raw Frobenius residual ``||a x - x diag(lam)||``."""
    a = np.asarray(a)
    return float(np.linalg.norm(a @ eig.x - eig.x * eig.eigenvalues))


def consim_to_identity(ssvd: StructuredSvd) -> np.ndarray:
    """Transform S with ``a = S @ conj(S)^-1`` for a coninvolutory matrix.

    S = conj(Z) P^H where Z carries the S^(+-1/2) scaling and the unitary P
    satisfies P T P^T = I (its diagonal blocks absorb any single phases as
    their inverse square roots).
    """
    if ssvd.structure is not StructureClass.CONINVOLUTORY:
        raise WrongClassError(
            f"consim_to_identity needs coninvolutory, got {ssvd.structure.value}"
        )
    n = ssvd.dim
    z = ssvd.v * _pair_scaling(ssvd)
    pairs = ssvd.pair_blocks()
    singles = ssvd.single_blocks()
    p = np.zeros((n, n), dtype=np.complex128)
    inv_sqrt2 = 1.0 / math.sqrt(2.0)
    row = 0
    for block in pairs:
        lead, part = block.columns
        p[row, lead] = inv_sqrt2
        p[row, part] = inv_sqrt2
        row += 1
    for block in singles:
        pos = block.columns[0]
        p[row, pos] = 1.0 / np.sqrt(ssvd.t[pos, pos])
        row += 1
    for block in pairs:
        lead, part = block.columns
        p[row, lead] = -1j * inv_sqrt2
        p[row, part] = 1j * inv_sqrt2
        row += 1
    return z.conj() @ p.conj().T


def consimilarity_residual(a, s: np.ndarray) -> float:
    """Raw residual ``||a - s @ conj(s)^-1||`` (computed with one solve)."""
    a = np.asarray(a)
    recon = np.linalg.solve(s.conj().T, s.T).T
    return float(np.linalg.norm(a - recon))


def consim_to_minusJ(ssvd: StructuredSvd) -> np.ndarray:
    """Transform Z with ``a = -conj(Z) @ J @ Z^-1`` (skew-coninvolutory).

    Uses J Sigma = diag(S^-1/2, S^1/2) J diag(S^1/2, S^-1/2), hence
    Z = V diag(S^-1/2, S^1/2).
    """
    if ssvd.structure is not StructureClass.SKEW_CONINVOLUTORY:
        raise WrongClassError(
            f"consim_to_minusJ needs skew-coninvolutory, got {ssvd.structure.value}"
        )
    return ssvd.v * _pair_scaling(ssvd)


def minusj_residual(a, z: np.ndarray) -> float:
    """Raw residual ``||a + conj(z) @ J @ z^-1||`` (one solve)."""
    a = np.asarray(a)
    n = z.shape[0]
    zj = z.conj() @ j_matrix(n // 2)
    recon = np.linalg.solve(z.T, zj.T).T
    return float(np.linalg.norm(a + recon))


def coneigen_singles(ssvd: StructuredSvd) -> List[Tuple[np.ndarray, float]]:
    """Coneigenvectors for coneigenvalue +1 from the single triplets.

    A single (q, e^(i a) conj(q), 1) means ``A conj(q) = e^(-i a) q``;
    rescaling by e^(-i a / 2) normalizes the coneigenvalue to exactly +1,
    so every returned pair is (vector, 1.0).
    """
    if ssvd.structure is not StructureClass.CONINVOLUTORY:
        raise WrongClassError(
            f"coneigen_singles needs coninvolutory, got {ssvd.structure.value}"
        )
    out = []
    for block in ssvd.single_blocks():
        q = ssvd.u[:, block.columns[0]].copy()
        alpha = block.phase or 0.0
        out.append((np.exp(-0.5j * alpha) * q, 1.0))
    return out
