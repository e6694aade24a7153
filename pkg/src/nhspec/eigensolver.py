"""Dense non-Hermitian eigendecomposition and real / conjugate-pair classification."""
from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np
import scipy.linalg

__all__ = ["EigenError", "SpectrumReport", "eig_dense", "eig_pt", "pt_realify", "classify", "REAL", "PAIR"]

REAL = "REAL"
PAIR = "PAIR"
_MAX_DIM = 512


class EigenError(np.linalg.LinAlgError):
    pass


@dataclass(frozen=True, eq=False)
class SpectrumReport:
    """Eigenpairs sorted by real part.

    ``classes[j]`` is REAL or PAIR; for PAIR entries ``partners[j]`` is the index
    of the conjugate partner.  Both are None until :func:`classify` runs.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    matrix_norm: float
    classes: tuple | None = None
    partners: tuple | None = None
    tol_im: float | None = None
    tol_pair: float | None = None

    def __len__(self):
        return len(self.eigenvalues)

    @property
    def n_pairs(self) -> int:
        if self.classes is None:
            raise ValueError("spectrum has not been classified")
        return self.classes.count(PAIR) // 2

    @property
    def real_parts(self) -> np.ndarray:
        return self.eigenvalues.real

    def real_indices(self) -> list[int]:
        return [j for j, cls in enumerate(self.classes or ()) if cls == REAL]


def _check_square(A):
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"need a square matrix, got shape {A.shape}")
    if A.shape[0] > _MAX_DIM:
        raise ValueError(f"dense solver limited to N <= {_MAX_DIM}, got {A.shape[0]}")
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix has non-finite entries")


def _sorted_report(w, v, norm) -> SpectrumReport:
    order = np.lexsort((w.imag, w.real))
    w = np.asarray(w[order], dtype=complex)
    v = np.asarray(v[:, order], dtype=complex)
    v = v / np.linalg.norm(v, axis=0)
    return SpectrumReport(w, v, norm)


def _eig(A):
    try:
        return scipy.linalg.eig(A, check_finite=False)
    except np.linalg.LinAlgError as exc:
        raise EigenError(f"QR iteration failed for {A.shape[0]}x{A.shape[0]} matrix: {exc}") from exc


def eig_dense(A) -> SpectrumReport:
    """All eigenpairs of a dense complex matrix, unit-norm vectors, sorted by (Re, Im)."""
    A = np.asarray(A, dtype=complex)
    _check_square(A)
    w, v = _eig(A)
    return _sorted_report(w, v, float(np.linalg.norm(A)))


def pt_realify(A, rtol: float = 1e-14):
    """R = S^-1 A S with S = diag(i^k), or None if R is not real.

    Matrices whose real part couples indices of equal parity and whose
    imaginary part couples opposite parities (the PT-symmetric builders here)
    become real under this similarity.
    """
    A = np.asarray(A, dtype=complex)
    k = np.arange(A.shape[0])
    phase = (1j) ** ((k[None, :] - k[:, None]) % 4)
    R = A * phase
    if np.max(np.abs(R.imag), initial=0.0) > rtol * max(np.linalg.norm(A), 1.0):
        return None
    return R.real.copy()


def eig_pt(A) -> SpectrumReport:
    """Eigenpairs of a PT-structured matrix through its real similar form.

    The real QR iteration keeps the spectrum exactly closed under conjugation,
    which the complex iteration only does to rounding amplified by
    non-normality.  Falls back to :func:`eig_dense` for other matrices.
    """
    A = np.asarray(A, dtype=complex)
    _check_square(A)
    R = pt_realify(A)
    if R is None:
        return eig_dense(A)
    w, u = _eig(R)
    S = (1j) ** (np.arange(A.shape[0]) % 4)
    return _sorted_report(w, S[:, None] * u, float(np.linalg.norm(A)))


def classify(report: SpectrumReport, tol_im: float | None = None, tol_pair: float | None = None) -> SpectrumReport:
    """Tag each eigenvalue REAL (|Im| <= tol_im) or PAIR with its conjugate partner.

    Tolerances default to 1e-8 times the Frobenius norm of the matrix.  An
    unmatched complex eigenvalue means the spectrum is not conjugation-closed
    and raises EigenError.
    """
    scale = max(report.matrix_norm, np.finfo(float).tiny)
    tol_im = 1e-8 * scale if tol_im is None else tol_im
    tol_pair = 1e-8 * scale if tol_pair is None else tol_pair
    w = report.eigenvalues
    n = len(w)
    classes: list = [None] * n
    partners: list = [None] * n
    for j in range(n):
        if abs(w[j].imag) <= tol_im:
            classes[j] = REAL
    for j in range(n):
        if classes[j] is not None:
            continue
        best, best_gap = None, tol_pair
        for k in range(n):
            if k == j or classes[k] is not None or np.sign(w[k].imag) == np.sign(w[j].imag):
                continue
            gap = abs(w[j] - np.conj(w[k]))
            if gap <= best_gap:
                best, best_gap = k, gap
        if best is None:
            raise EigenError(f"eigenvalue {w[j]} has no conjugate partner within {tol_pair:g}")
        classes[j] = classes[best] = PAIR
        partners[j], partners[best] = best, j
    return replace(report, classes=tuple(classes), partners=tuple(partners), tol_im=tol_im, tol_pair=tol_pair)
