"""Dense complex linear algebra used by the finite-SNR bounds.

Everything here works on small Hermitian matrices (a few dozen rows at
most), so the routines favour clarity and numerical robustness over speed.
"""

from __future__ import annotations

from collections.abc import Sequence

import numpy as np
from numpy.typing import NDArray

from .errors import ValidationError

__all__ = [
    "logdet_identity_plus",
    "logdet_identity_plus_gram",
    "conditional_covariance",
    "block_diag",
    "sample_complex_gaussian",
    "hermitian_sqrt",
]

HERMITIAN_RTOL = 1e-12
PSD_RTOL = 1e-9

ComplexArray = NDArray[np.complex128]


def _as_square(a, name: str) -> np.ndarray:
    arr = np.asarray(a)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValidationError(f"{name} must be a square matrix, got shape {arr.shape}")
    return arr


def _check_hermitian(a: np.ndarray, name: str) -> None:
    scale = max(np.abs(a).max(initial=0.0), 1.0)
    if np.abs(a - a.conj().T).max(initial=0.0) > HERMITIAN_RTOL * scale:
        raise ValidationError(f"{name} is not Hermitian")


def logdet_identity_plus(a) -> float:
    """Return ``ln det(I + A)`` in nats for a Hermitian PSD matrix ``A``.

    Uses the eigenvalues of the Hermitian part, so the result stays accurate
    when ``A`` has eigenvalues spanning many orders of magnitude. Rounding
    noise down to ``-1e-9 * max(lambda_max, 1)`` is clipped to zero. A 0x0 input
    gives 0.
    """
    arr = _as_square(a, "A")
    if arr.shape[0] == 0:
        return 0.0
    _check_hermitian(arr, "A")
    eigs = np.linalg.eigvalsh(0.5 * (arr + arr.conj().T))
    # A only ever appears as I + A, so rounding is judged against max(lambda_max, 1)
    lam_max = max(abs(eigs[-1]), abs(eigs[0]), 1.0)
    if eigs[0] < -PSD_RTOL * lam_max:
        raise ValidationError(
            f"A is not positive semidefinite (min eigenvalue {eigs[0]:.3e})"
        )
    return float(np.sum(np.log1p(np.clip(eigs, 0.0, None))))


def logdet_identity_plus_gram(f) -> float:
    """Return ``ln det(I + F F^H)`` in nats from the singular values of ``F``.

    Working with the factor keeps directions that ``F F^H`` annihilates at
    exactly zero even when other directions are of order ``1e24``, where
    forming the product would bury them in rounding error.
    """
    arr = np.asarray(f)
    if arr.ndim != 2:
        raise ValidationError("F must be a 2-D matrix")
    if arr.size == 0:
        return 0.0
    sv = np.linalg.svd(arr, compute_uv=False)
    return float(np.sum(np.log1p(sv * sv)))


def conditional_covariance(s_yy, s_ys, s_ss) -> ComplexArray:
    """Schur complement ``S_yy - S_ys S_ss^{-1} S_ys^H``.

    This is the covariance of ``y`` given ``s`` for jointly Gaussian vectors.
    ``S_ss`` must be positive definite. A conditioning vector of length zero
    returns ``S_yy`` unchanged.
    """
    syy = _as_square(s_yy, "S_yy")
    sss = _as_square(s_ss, "S_ss")
    sys_ = np.asarray(s_ys)
    if sys_.ndim != 2 or sys_.shape != (syy.shape[0], sss.shape[0]):
        raise ValidationError(
            f"dimension mismatch: S_yy {syy.shape}, S_ys {sys_.shape}, S_ss {sss.shape}"
        )
    if sss.shape[0] == 0:
        return syy.astype(np.complex128)
    _check_hermitian(sss, "S_ss")
    try:
        chol = np.linalg.cholesky(0.5 * (sss + sss.conj().T))
    except np.linalg.LinAlgError as exc:
        raise ValidationError("S_ss is not positive definite") from exc
    # S_ys S_ss^{-1} S_ys^H = W^H W with W = L^{-1} S_ys^H
    w = np.linalg.solve(chol, sys_.conj().T)
    out = syy - w.conj().T @ w
    return 0.5 * (out + out.conj().T)


def block_diag(blocks: Sequence) -> ComplexArray:
    """Block-diagonal matrix with the given (possibly empty or rectangular) blocks."""
    mats = [np.atleast_2d(np.asarray(b, dtype=np.complex128)) for b in blocks]
    for b in blocks:
        if np.asarray(b).ndim != 2:
            raise ValidationError("block_diag expects 2-D blocks")
    rows = sum(m.shape[0] for m in mats)
    cols = sum(m.shape[1] for m in mats)
    out = np.zeros((rows, cols), dtype=np.complex128)
    r = c = 0
    for m in mats:
        out[r : r + m.shape[0], c : c + m.shape[1]] = m
        r += m.shape[0]
        c += m.shape[1]
    return out


def sample_complex_gaussian(rows: int, cols: int, rng: np.random.Generator) -> ComplexArray:
    """Draw a ``rows x cols`` matrix with i.i.d. circularly symmetric CN(0, 1) entries."""
    if rows < 0 or cols < 0:
        raise ValidationError("matrix dimensions must be non-negative")
    re = rng.standard_normal((rows, cols))
    im = rng.standard_normal((rows, cols))
    return (re + 1j * im) / np.sqrt(2.0)


def hermitian_sqrt(a) -> ComplexArray:
    """Principal square root of a Hermitian PSD matrix."""
    arr = _as_square(a, "A")
    if arr.shape[0] == 0:
        return np.zeros((0, 0), dtype=np.complex128)
    _check_hermitian(arr, "A")
    eigs, vecs = np.linalg.eigh(0.5 * (arr + arr.conj().T))
    eigs = np.clip(eigs, 0.0, None)
    return (vecs * np.sqrt(eigs)) @ vecs.conj().T
