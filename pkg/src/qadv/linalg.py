"""Hermitian linear-algebra kernel.

Spectral decompositions, matrix functions applied on the support, the
derivative of the matrix logarithm, the trace norm, tensor products, and the
operator-order predicate used by the multicopy domination checks.  Everything
here works on plain complex ndarrays; wrapper types live in `qobjects`.
"""

from __future__ import annotations

import numpy as np

from .errors import DomainError, ValidationError

#: absolute tolerance for the Hermitian symmetry check
HERMITIAN_ATOL = 1e-12

#: eigenvalues with |lam| <= CLIP_SCALE * max(1, ||H||_inf) count as zero
CLIP_SCALE = 1e-12

#: slack allowed below zero before an operator stops counting as PSD
PSD_ATOL = 1e-10

#: squared-overlap tolerance for "supported on supp(X)" checks
SUPPORT_ATOL = 1e-9


class Spectrum:
    """Eigendecomposition of a Hermitian matrix.

    `eigenvalues` are real and ascending; `eigenvectors` holds the matching
    orthonormal eigenvectors as columns, so U diag(lam) U^dag reconstructs
    the input.
    """

    __slots__ = ("eigenvalues", "eigenvectors")

    def __init__(self, eigenvalues: np.ndarray, eigenvectors: np.ndarray):
        self.eigenvalues = eigenvalues
        self.eigenvectors = eigenvectors

    def __iter__(self):
        return iter((self.eigenvalues, self.eigenvectors))


def as_hermitian(h, atol: float = HERMITIAN_ATOL, name: str = "matrix") -> np.ndarray:
    """Coerce to a square complex ndarray and enforce Hermitian symmetry.

    Accepts anything with a `.mat` attribute (e.g. DensityMatrix) or an
    array-like.  The returned array is explicitly symmetrized so downstream
    eigensolvers see an exactly Hermitian input.
    """
    m = np.asarray(getattr(h, "mat", h), dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
        raise ValidationError(f"{name} must be square, got shape {m.shape}")
    defect = float(np.max(np.abs(m - m.conj().T)))
    if defect > atol:
        raise ValidationError(f"{name} is not Hermitian: max asymmetry {defect:.3e}")
    return 0.5 * (m + m.conj().T)


def eigh(h) -> Spectrum:
    """Eigendecomposition with ascending real eigenvalues."""
    w, v = np.linalg.eigh(as_hermitian(h))
    return Spectrum(w, v)


def clip_threshold(eigenvalues: np.ndarray) -> float:
    """Magnitude below which an eigenvalue is treated as exactly zero."""
    lam = np.abs(np.asarray(eigenvalues, dtype=float))
    top = float(lam.max()) if lam.size else 0.0
    return CLIP_SCALE * max(1.0, top)


def support_mask(eigenvalues: np.ndarray) -> np.ndarray:
    """Boolean mask of eigenvalues strictly above the zero-clip threshold."""
    return np.asarray(eigenvalues) > clip_threshold(eigenvalues)


def matrix_function(h, kind: str, power: float | None = None) -> np.ndarray:
    """Apply a scalar function spectrally: f(H) = U diag(f(lam)) U^dag.

    `kind` is one of "log", "sqrt", "exp", "pow" (the latter takes `power`).
    log, sqrt and non-integer powers require a PSD input and follow the
    on-support convention f(0) := 0; callers that care about support
    mismatches must detect them themselves.
    """
    lam, u = eigh(h)
    thr = clip_threshold(lam)
    needs_psd = kind in ("log", "sqrt") or (
        kind == "pow" and power is not None and float(power) != int(power)
    )
    if needs_psd and lam.min() < -thr:
        raise DomainError(
            f"{kind} needs a PSD input; min eigenvalue {lam.min():.3e}"
        )
    if kind == "exp":
        flam = np.exp(lam)
    else:
        on = lam > thr
        flam = np.zeros_like(lam)
        if kind == "log":
            flam[on] = np.log(lam[on])
        elif kind == "sqrt":
            flam[on] = np.sqrt(lam[on])
        elif kind == "pow":
            if power is None:
                raise ValidationError("pow requires the exponent argument")
            if float(power) == int(power) and not needs_psd:
                flam = lam ** float(power)
            else:
                flam[on] = lam[on] ** float(power)
        else:
            raise ValidationError(f"unknown matrix function {kind!r}")
    out = (u * flam) @ u.conj().T
    return 0.5 * (out + out.conj().T)


def _log_divided_difference(lam: np.ndarray) -> np.ndarray:
    """First divided-difference table of log on positive eigenvalues.

    Entry (j, k) is (log lam_j - log lam_k) / (lam_j - lam_k), extended by
    continuity to 1/lam_j on the diagonal.  Uses log1p of the relative gap,
    which stays accurate for near-degenerate pairs.
    """
    a = lam[:, None]
    b = lam[None, :]
    diff = a - b
    rel = np.where(diff == 0.0, 0.0, diff / b)
    table = np.empty_like(diff)
    same = diff == 0.0
    table[same] = (1.0 / np.broadcast_to(b, diff.shape))[same]
    table[~same] = (np.log1p(rel[~same])) / diff[~same]
    return table


def frechet_log(x, h) -> np.ndarray:
    """Derivative of the matrix log at X in direction H (Daleckii-Krein form).

    X must be PSD and H supported on supp(X).  The result is Hermitian,
    linear in H, and self-adjoint for the trace inner product.
    """
    lam, u = eigh(x)
    thr = clip_threshold(lam)
    if lam.min() < -thr:
        raise DomainError(f"frechet_log needs PSD X; min eigenvalue {lam.min():.3e}")
    on = lam > thr
    hm = as_hermitian(h, name="direction")
    if hm.shape != u.shape:
        raise ValidationError("X and H must have equal dimensions")
    ht = u.conj().T @ hm @ u
    if not on.all():
        hnorm = max(1.0, float(np.linalg.norm(hm)))
        off_rows = ht[~on, :]
        if float(np.linalg.norm(off_rows)) ** 2 > SUPPORT_ATOL * hnorm**2:
            raise DomainError("H is not supported on the support of X")
    lam_s = lam[on]
    table = _log_divided_difference(lam_s)
    core = table * ht[np.ix_(on, on)]
    us = u[:, on]
    out = us @ core @ us.conj().T
    return 0.5 * (out + out.conj().T)


def trace_norm(a) -> float:
    """Sum of absolute eigenvalues of a Hermitian matrix."""
    w = np.linalg.eigvalsh(as_hermitian(a))
    return float(np.abs(w).sum())


def kron(a, b) -> np.ndarray:
    """Tensor product of two Hermitian matrices."""
    return np.kron(as_hermitian(a), as_hermitian(b))


def dominates(a, b, c: float) -> bool:
    """True iff c*B - A is PSD (min eigenvalue >= -1e-10)."""
    if not c > 0:
        raise ValidationError(f"scale must be positive, got {c}")
    w = np.linalg.eigvalsh(c * as_hermitian(b) - as_hermitian(a))
    return bool(w.min() >= -PSD_ATOL)
