"""Structure-revealing SVDs with reciprocal pairing and coupling matrices.

For a matrix in any of the four structure classes, every singular triplet
``(u, v, sigma)`` with sigma > 1 forces a partner triplet at ``1/sigma``
whose vectors are a fixed transform of ``(u, v)``:

* involutory            partner (v, u, 1/sigma)
* skew-involutory       partner (-v, u, 1/sigma)
* coninvolutory         partner (conj(v), conj(u), 1/sigma)
* skew-coninvolutory    partner (-conj(v), conj(u), 1/sigma)

:func:`restructure` rewrites an arbitrary SVD so this pairing is explicit,
resolves the sigma = 1 cluster into signed or phase-free single triplets
(or sigma = 1 pairs in the skew-coninvolutory case), and extracts the sparse
coupling matrix T with U = V T, U = conj(V) T, or U = -conj(V) J.

Column layout of the results (the condensed block layout): pair leads,
delta singles, pair partners, eta singles, with Sigma = diag(S, I_delta,
S^-1, I_eta).  The canonical output always uses mu = 0 (no (1,1) pairs for
the unit singular values); :func:`paired_one_display` re-pairs singles of
opposite sign into (1,1) pairs for display.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from .errors import (
    DimensionError,
    InvalidInputError,
    CouplingError,
    PairingError,
    StructureViolationError,
    WrongClassError,
)
from .kernel import (
    as_square_matrix,
    hermitian_eig,
    skew_pair_unitary,
    svd as kernel_svd,
    takagi_symmetric_unitary,
)
from .structures import StructureClass, classify

RECIPROCAL_PAIR = "reciprocal_pair"
SINGLE_ONE = "single_one"
PAIRED_ONE = "paired_one"


@dataclass(frozen=True)
class TripletBlock:
    """One pairing unit of the structured SVD.

    ``reciprocal_pair``: columns (lead, partner) carrying (sigma, 1/sigma).
    ``single_one``: one column with sigma 1 and a sign (involutory classes)
    or a phase (coninvolutory).  ``paired_one``: a (1, 1) pair, display only.
    """

    kind: str
    columns: Tuple[int, ...]
    sigma: float = 1.0
    sign: Optional[int] = None
    phase: Optional[float] = None


@dataclass(frozen=True)
class StructureCounts:
    nu: int
    mu: int
    delta: int
    eta: int
    eta1: int
    eta2: int

    def as_tuple(self) -> Tuple[int, int, int, int, int, int]:
        return (self.nu, self.mu, self.delta, self.eta, self.eta1, self.eta2)


@dataclass
class StructuredSvd:
    """SVD of a structured matrix in the condensed block layout.

    ``sigma`` follows the block layout (not globally sorted): pair leads
    descending, then delta ones, then the reciprocals of the leads, then eta
    ones.  ``t`` is the exact sparse coupling matrix; ``d`` and ``e`` hold
    the diagonal sign/phase blocks appearing in it.
    """

    structure: StructureClass
    u: np.ndarray
    v: np.ndarray
    sigma: np.ndarray
    t: np.ndarray
    blocks: List[TripletBlock]
    counts: StructureCounts
    d: np.ndarray
    e: np.ndarray

    @property
    def dim(self) -> int:
        return self.u.shape[0]

    def reconstruct(self) -> np.ndarray:
        return (self.u * self.sigma) @ self.v.conj().T

    def coupled_u(self) -> np.ndarray:
        """Right-hand side of the coupling law (V T or conj(V) T)."""
        base = self.v.conj() if self.structure.is_con else self.v
        return base @ self.t

    def pair_blocks(self) -> List[TripletBlock]:
        return [b for b in self.blocks if b.kind in (RECIPROCAL_PAIR, PAIRED_ONE)]

    def single_blocks(self) -> List[TripletBlock]:
        return [b for b in self.blocks if b.kind == SINGLE_ONE]


def reconstruction_residual(a, ssvd: StructuredSvd) -> float:
    a = np.asarray(a)
    n = ssvd.dim
    scale = n * max(1.0, float(np.linalg.norm(a)))
    return float(np.linalg.norm(a - ssvd.reconstruct())) / scale


def coupling_residual(ssvd: StructuredSvd) -> float:
    return float(np.linalg.norm(ssvd.u - ssvd.coupled_u())) / ssvd.dim


def split_singles(k: int) -> Tuple[int, int]:
    """(delta, eta) split of k singles: delta = ceil(k/2), eta = floor(k/2)."""
    return (k + 1) // 2, k // 2


def _layout_positions(nu: int, mu: int, delta: int, eta: int):
    npairs = nu + mu
    lead = np.arange(npairs)
    dpos = np.arange(npairs, npairs + delta)
    part = np.arange(npairs + delta, 2 * npairs + delta)
    epos = np.arange(2 * npairs + delta, 2 * npairs + delta + eta)
    return lead, dpos, part, epos


def sigma_layout(lead_sigmas, mu: int, delta: int, eta: int) -> np.ndarray:
    s = np.asarray(lead_sigmas, dtype=np.float64).ravel()
    return np.concatenate(
        [s, np.ones(mu), np.ones(delta), 1.0 / s, np.ones(mu), np.ones(eta)]
    )


def coupling_pattern(structure: StructureClass, nu: int, mu: int, d, e) -> np.ndarray:
    """Exact sparse coupling matrix T for the block layout.

    ``d`` and ``e`` are the diagonal blocks: signs +-1 for the involutory
    classes (multiplied by 1j in the skew-involutory T), unit phases for
    coninvolutory.  The skew-coninvolutory T is -J and takes no diagonals.
    """
    d = np.asarray(d, dtype=np.complex128).ravel()
    e = np.asarray(e, dtype=np.complex128).ravel()
    delta, eta = len(d), len(e)
    lead, dpos, part, epos = _layout_positions(nu, mu, delta, eta)
    n = 2 * (nu + mu) + delta + eta
    t = np.zeros((n, n), dtype=np.complex128)
    if structure is StructureClass.INVOLUTORY:
        t[part, lead] = 1.0
        t[lead, part] = 1.0
        t[dpos, dpos] = d
        t[epos, epos] = e
    elif structure is StructureClass.SKEW_INVOLUTORY:
        t[part, lead] = 1.0
        t[lead, part] = -1.0
        t[dpos, dpos] = 1j * d
        t[epos, epos] = 1j * e
    elif structure is StructureClass.CONINVOLUTORY:
        t[part, lead] = 1.0
        t[lead, part] = 1.0
        t[dpos, dpos] = d
        t[epos, epos] = e
    elif structure is StructureClass.SKEW_CONINVOLUTORY:
        if delta or eta:
            raise InvalidInputError("skew-coninvolutory coupling has no singles")
        t[part, lead] = 1.0
        t[lead, part] = -1.0
    else:  # pragma: no cover
        raise WrongClassError(f"unknown structure class {structure}")
    return t


def make_blocks(structure: StructureClass, nu: int, mu: int, lead_sigmas, d, e):
    """Triplet blocks and counts for the block layout."""
    d = np.asarray(d).ravel()
    e = np.asarray(e).ravel()
    delta, eta = len(d), len(e)
    lead, dpos, part, epos = _layout_positions(nu, mu, delta, eta)
    sig = np.asarray(lead_sigmas, dtype=np.float64).ravel()
    blocks: List[TripletBlock] = []
    for i in range(nu):
        blocks.append(
            TripletBlock(
                kind=RECIPROCAL_PAIR,
                columns=(int(lead[i]), int(part[i])),
                sigma=float(sig[i]),
            )
        )
    for i in range(nu, nu + mu):
        blocks.append(TripletBlock(kind=PAIRED_ONE, columns=(int(lead[i]), int(part[i]))))
    diag = np.concatenate([d, e]) if delta + eta else np.zeros(0)
    positions = np.concatenate([dpos, epos]) if delta + eta else np.zeros(0, dtype=int)
    for pos, val in zip(positions, diag):
        if structure.is_con:
            blocks.append(
                TripletBlock(
                    kind=SINGLE_ONE,
                    columns=(int(pos),),
                    phase=float(np.angle(val)) % (2.0 * math.pi),
                )
            )
        else:
            blocks.append(
                TripletBlock(kind=SINGLE_ONE, columns=(int(pos),), sign=int(np.sign(val.real)))
            )
    if structure is StructureClass.CONINVOLUTORY:
        eta1, eta2 = delta + eta, 0
    elif structure is StructureClass.SKEW_CONINVOLUTORY:
        eta1, eta2 = 0, 0
    else:
        signs = np.real(np.concatenate([d, e])) if delta + eta else np.zeros(0)
        eta1 = int(np.count_nonzero(signs > 0))
        eta2 = int(np.count_nonzero(signs < 0))
    counts = StructureCounts(nu=nu, mu=mu, delta=delta, eta=eta, eta1=eta1, eta2=eta2)
    return blocks, counts


def pairing_spectrum_check(sigma, tol: float = 1e-10):
    """Match a sorted singular spectrum into reciprocal pairs and a 1-cluster.

    Greedy two-pointer matching from both ends.  Values within
    ``max(tol, 1e-8) * max(1, sigma_max)`` of 1 form the cluster; any other
    value must pair with its reciprocal to the same tolerance on the product.

    Returns ``(pairs, cluster)`` with pairs as index tuples into sigma.
    """
    sig = np.asarray(sigma, dtype=np.float64).ravel()
    n = sig.size
    if n == 0:
        raise DimensionError("empty spectrum")
    if np.any(sig <= 0.0) or not np.all(np.isfinite(sig)):
        raise InvalidInputError("singular values must be positive and finite")
    if np.any(np.diff(sig) > 0.0):
        raise InvalidInputError("singular values must be non-increasing")
    ctol = max(tol, 1e-8) * max(1.0, float(sig[0]))
    pairs: List[Tuple[int, int]] = []
    cluster: List[int] = []
    i, j = 0, n - 1
    while i <= j:
        in_i = abs(sig[i] - 1.0) <= ctol
        in_j = abs(sig[j] - 1.0) <= ctol
        if in_i and in_j:
            cluster.extend(range(i, j + 1))
            break
        if i == j:
            raise PairingError(
                f"singular value {sig[i]!r} has no reciprocal partner",
                orphan=float(sig[i]),
            )
        prod = float(sig[i] * sig[j])
        if abs(prod - 1.0) > ctol:
            orphan = sig[i] if abs(sig[i] - 1.0) >= abs(sig[j] - 1.0) else sig[j]
            raise PairingError(
                f"singular value {float(orphan)!r} has no reciprocal partner "
                f"(product defect {abs(prod - 1.0):.3e})",
                orphan=float(orphan),
            )
        pairs.append((i, j))
        i += 1
        j -= 1
    return pairs, cluster


def _structure_defect(m: np.ndarray, reference: np.ndarray, limit: float, what: str):
    defect = float(np.linalg.norm(m - reference))
    if defect > limit:
        raise StructureViolationError(
            f"restricted unit-cluster matrix is not {what}: "
            f"defect {defect:.3e} > {limit:.3e}",
            residual=defect,
        )


def restructure(a, structure: StructureClass, tol: float = 1e-10) -> StructuredSvd:
    """Structure-revealing SVD of a matrix in the given class.

    Pipeline: classify gate, kernel SVD, reciprocal matching of the
    spectrum, then resolution of the sigma = 1 cluster on the span Q of its
    right singular vectors:

    * involutory / skew-involutory: Hermitian eigendecomposition of
      ``Q^H A Q`` (divided by 1j for skew) turns every cluster column into a
      signed single triplet (u, +-u, 1);
    * coninvolutory: Takagi deflation of the symmetric unitary
      ``Q^H A conj(Q)`` yields phase-free singles (coneigenvectors for
      coneigenvalue 1);
    * skew-coninvolutory: skew-pairing of ``Q^H A conj(Q)`` yields
      sigma = 1 reciprocal pairs (no singles exist in this class).

    Partner columns of every lead are replaced by their theoretical values,
    so the coupling law U = V T (or its conjugated variants) holds exactly.
    """
    a = as_square_matrix(a)
    report = classify(a, tol)
    if structure not in report.accepted:
        raise StructureViolationError(
            f"matrix is not {structure.value} at tolerance {tol:g} "
            f"(residual {report.residuals[structure]:.3e})",
            residual=report.residuals[structure],
        )
    n = a.shape[0]
    base = kernel_svd(a)
    smax = float(base.sigma[0])
    pairs, cluster = pairing_spectrum_check(base.sigma, tol)
    lead_idx = [p for p, _ in pairs]
    lead_u = base.u[:, lead_idx]
    lead_v = base.v[:, lead_idx]
    lead_s = base.sigma[lead_idx].astype(np.float64)
    k = len(cluster)
    tol_cluster = 100.0 * max(tol, 1e-8) * max(1.0, smax)

    if structure is StructureClass.SKEW_CONINVOLUTORY:
        if k % 2 != 0:  # cannot happen after classify, guard anyway
            raise StructureViolationError("odd unit cluster in skew-coninvolutory input")
        if k:
            q = base.v[:, cluster]
            # the antilinear involution x -> A conj(x) restricts to the
            # conjugate of the right cluster span, where its matrix
            # Q^T A Q is skew-symmetric unitary
            m = q.T @ a @ q
            _structure_defect(m, -m.T, tol_cluster * max(1.0, k), "skew-symmetric")
            f = skew_pair_unitary((m - m.T) / 2.0, tol_cluster)
            g = q.conj() @ f
            half = k // 2
            lead_u = np.hstack([lead_u, g[:, :half]])
            lead_v = np.hstack([lead_v, g[:, half:].conj()])
            lead_s = np.concatenate([lead_s, np.ones(half)])
        u = np.hstack([lead_u, -lead_v.conj()])
        v = np.hstack([lead_v, lead_u.conj()])
        sigma = np.concatenate([lead_s, 1.0 / lead_s])
        d = np.zeros(0, dtype=np.complex128)
        e = np.zeros(0, dtype=np.complex128)
        nu = n // 2
        t = coupling_pattern(structure, nu, 0, d, e)
        blocks, counts = make_blocks(structure, nu, 0, lead_s, d, e)
        return StructuredSvd(structure, u, v, sigma, t, blocks, counts, d, e)

    delta, eta = split_singles(k)
    if k:
        q = base.v[:, cluster]
        if structure is StructureClass.CONINVOLUTORY:
            # restricted antilinear involution: Q^T A Q is symmetric unitary
            m = q.T @ a @ q
            _structure_defect(m, m.T, tol_cluster * max(1.0, k), "symmetric")
            f = takagi_symmetric_unitary((m + m.T) / 2.0, tol_cluster)
            u_singles = q.conj() @ f
            v_singles = u_singles.conj()
            signs = np.ones(k)
        else:
            m = q.conj().T @ a @ q
            if structure is StructureClass.SKEW_INVOLUTORY:
                m = m / 1j
            _structure_defect(m, m.conj().T, tol_cluster * max(1.0, k), "Hermitian")
            w, lam = hermitian_eig(m)
            if np.any(np.abs(np.abs(lam) - 1.0) > 0.1):
                raise StructureViolationError(
                    "unit-cluster eigenvalues are not close to +-1",
                    residual=float(np.max(np.abs(np.abs(lam) - 1.0))),
                )
            signs = np.where(lam >= 0.0, 1.0, -1.0)
            u_singles = q @ w
            if structure is StructureClass.SKEW_INVOLUTORY:
                v_singles = u_singles * (-1j * signs)
            else:
                v_singles = u_singles * signs
    else:
        u_singles = np.zeros((n, 0), dtype=np.complex128)
        v_singles = np.zeros((n, 0), dtype=np.complex128)
        signs = np.zeros(0)

    if structure is StructureClass.INVOLUTORY:
        part_u, part_v = lead_v.copy(), lead_u.copy()
        d, e = signs[:delta].astype(np.complex128), signs[delta:].astype(np.complex128)
    elif structure is StructureClass.SKEW_INVOLUTORY:
        part_u, part_v = -lead_v, lead_u.copy()
        d, e = signs[:delta].astype(np.complex128), signs[delta:].astype(np.complex128)
    else:  # coninvolutory
        part_u, part_v = lead_v.conj(), lead_u.conj()
        d = np.ones(delta, dtype=np.complex128)
        e = np.ones(eta, dtype=np.complex128)

    u = np.hstack([lead_u, u_singles[:, :delta], part_u, u_singles[:, delta:]])
    v = np.hstack([lead_v, v_singles[:, :delta], part_v, v_singles[:, delta:]])
    nu = len(lead_idx)
    sigma = sigma_layout(lead_s, 0, delta, eta)
    t = coupling_pattern(structure, nu, 0, d, e)
    blocks, counts = make_blocks(structure, nu, 0, lead_s, d, e)
    return StructuredSvd(structure, u, v, sigma, t, blocks, counts, d, e)


def _snap_entry(structure: StructureClass, i: int, j: int, value: complex):
    """Exact pattern value expected at a nonzero position, or None."""
    if i == j:
        if structure is StructureClass.INVOLUTORY:
            return 1.0 if value.real > 0 else -1.0
        if structure is StructureClass.SKEW_INVOLUTORY:
            return 1j if value.imag > 0 else -1j
        if structure is StructureClass.CONINVOLUTORY:
            phase = value / abs(value)
            for exact in (1.0, -1.0):
                if abs(phase - exact) <= 1e-8:
                    return exact
            return phase
        return None  # skew-coninvolutory T has an empty diagonal
    if structure in (StructureClass.INVOLUTORY, StructureClass.CONINVOLUTORY):
        return 1.0
    # skew classes: -1 above the diagonal (lead -> partner), +1 below
    return -1.0 if i < j else 1.0


def extract_T(u, v, structure: StructureClass, tol: float = 1e-10) -> np.ndarray:
    """Recover the exact coupling matrix from the unitary factors.

    Computes ``V^H U`` (involutory classes) or ``V^T U`` (coninvolutory
    classes), asserts the expected generalized-permutation sparsity pattern,
    and rounds the entries to exact values in {0, +-1, +-1j, unit phases}.
    """
    u = as_square_matrix(u)
    v = as_square_matrix(v)
    if u.shape != v.shape:
        raise DimensionError(f"factor shapes differ: {u.shape} vs {v.shape}")
    raw = (v.T @ u) if structure.is_con else (v.conj().T @ u)
    n = raw.shape[0]
    mags = np.abs(raw)
    big = mags > 0.5
    if np.any(big.sum(axis=0) != 1) or np.any(big.sum(axis=1) != 1):
        flat = int(np.argmax(mags * ~big))
        i, j = divmod(flat, n)
        raise CouplingError(
            "coupling matrix is not a generalized permutation",
            entry=(i, j),
            value=complex(raw[i, j]),
        )
    etol = max(tol, 1e-12)
    small = np.where(big, 0.0, mags)
    if small.max(initial=0.0) > etol:
        flat = int(np.argmax(small))
        i, j = divmod(flat, n)
        raise CouplingError(
            f"coupling entry ({i}, {j}) = {raw[i, j]:.3e} should vanish",
            entry=(i, j),
            value=complex(raw[i, j]),
        )
    snapped = np.zeros_like(raw)
    for i, j in zip(*np.nonzero(big)):
        i, j = int(i), int(j)
        target = _snap_entry(structure, i, j, complex(raw[i, j]))
        if target is None or abs(raw[i, j] - target) > etol:
            raise CouplingError(
                f"coupling entry ({i}, {j}) = {raw[i, j]!r} violates the "
                f"{structure.value} pattern",
                entry=(i, j),
                value=complex(raw[i, j]),
            )
        snapped[i, j] = target
    return snapped


def paired_one_display(ssvd: StructuredSvd, mu: Optional[int] = None) -> StructuredSvd:
    """Re-pair opposite-sign singles into (1, 1) pairs, for display.

    Two singles (u+, +u+, 1) and (u-, -u-, 1) recombine into the paired
    triplets (t, s, 1) and (s, t, 1) with t = (u+ + u-)/sqrt(2) and
    s = (u+ - u-)/sqrt(2), reproducing the layout with mu > 0.  The result
    is an equally valid structured SVD; the canonical form with mu = 0
    carries strictly more eigenvalue information.
    """
    if ssvd.structure is not StructureClass.INVOLUTORY:
        raise WrongClassError("paired-one display applies to involutory matrices")
    if ssvd.counts.mu != 0:
        raise WrongClassError("input already carries paired ones")
    singles = ssvd.single_blocks()
    plus = [b for b in singles if b.sign == 1]
    minus = [b for b in singles if b.sign == -1]
    max_mu = min(len(plus), len(minus))
    mu = max_mu if mu is None else int(mu)
    if not 0 <= mu <= max_mu:
        raise InvalidInputError(f"mu must lie in [0, {max_mu}], got {mu}")
    pairs = ssvd.pair_blocks()
    nu = len(pairs)
    lead_cols = [b.columns[0] for b in pairs]
    part_cols = [b.columns[1] for b in pairs]
    lead_s = np.array([b.sigma for b in pairs])
    tilde_u, tilde_v = [], []
    for bp, bm in zip(plus[:mu], minus[:mu]):
        up = ssvd.u[:, bp.columns[0]]
        um = ssvd.u[:, bm.columns[0]]
        tilde_u.append((up + um) / math.sqrt(2.0))
        tilde_v.append((up - um) / math.sqrt(2.0))
    rest = plus[mu:] + minus[mu:]
    rest_u = [ssvd.u[:, b.columns[0]] for b in rest]
    rest_v = [ssvd.v[:, b.columns[0]] for b in rest]
    rest_signs = np.array([b.sign for b in rest], dtype=np.float64)
    delta, eta = split_singles(len(rest))

    def stack(cols):
        return (
            np.column_stack(cols)
            if cols
            else np.zeros((ssvd.dim, 0), dtype=np.complex128)
        )

    u_new = np.hstack(
        [
            ssvd.u[:, lead_cols],
            stack(tilde_u),
            stack(rest_u[:delta]),
            ssvd.u[:, part_cols],
            stack(tilde_v),
            stack(rest_u[delta:]),
        ]
    )
    v_new = np.hstack(
        [
            ssvd.v[:, lead_cols],
            stack(tilde_v),
            stack(rest_v[:delta]),
            ssvd.v[:, part_cols],
            stack(tilde_u),
            stack(rest_v[delta:]),
        ]
    )
    d = rest_signs[:delta].astype(np.complex128)
    e = rest_signs[delta:].astype(np.complex128)
    sigma = sigma_layout(lead_s, mu, delta, eta)
    t = coupling_pattern(ssvd.structure, nu, mu, d, e)
    blocks, counts = make_blocks(ssvd.structure, nu, mu, lead_s, d, e)
    return StructuredSvd(ssvd.structure, u_new, v_new, sigma, t, blocks, counts, d, e)
