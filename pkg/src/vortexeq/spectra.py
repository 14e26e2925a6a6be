"""Eigenvalue utilities: dense solvers, the ring spectrum in closed form,
block determinants, and the skew (symplectic) inner product."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    ConvergenceFailure,
    DimensionMismatch,
    InvalidN,
    NotSymmetric,
    SingularBlock,
)

_COND_LIMIT = 1e12


@dataclass
class SpectrumReport:
    """Eigenvalues sorted by (real, imaginary) part, with a zero count.

    ``zero_count`` is the number of eigenvalues with |lambda| below
    ``tol_used * max(1, spectral radius)``, except where a caller documents a
    different absolute threshold (the stability verdicts scale it by
    sqrt(|eps|)).
    """

    eigenvalues: np.ndarray
    zero_count: int
    tol_used: float
    is_real_spectrum: bool
    eigenvectors: np.ndarray | None = field(default=None, repr=False)


def _sorted_spectrum(values: np.ndarray) -> np.ndarray:
    order = np.lexsort((values.imag, values.real))
    return values[order], order


def _count_zeros(values: np.ndarray, tol: float) -> int:
    mags = np.abs(values)
    radius = mags.max() if mags.size else 0.0
    return int(np.sum(mags < tol * max(1.0, radius)))


def eig_symmetric(
    s, tol: float = 1e-9, want_vectors: bool = False
) -> SpectrumReport:
    """Full spectrum of a real symmetric matrix.

    Symmetry is required within 1e-12 relative sup-norm (NotSymmetric
    otherwise).  Eigenvectors, when requested, are orthonormal columns in the
    sorted eigenvalue order, sign-fixed so the largest-magnitude component of
    each is positive.
    """
    m = np.asarray(s, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatch("expected a square matrix")
    scale = max(1.0, float(np.abs(m).max()))
    if np.abs(m - m.T).max() > 1e-12 * scale:
        raise NotSymmetric("matrix is not symmetric within 1e-12 relative")
    try:
        ev, vec = np.linalg.eigh(0.5 * (m + m.T))
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK failure
        raise ConvergenceFailure(str(exc)) from exc
    values, order = _sorted_spectrum(ev.astype(complex))
    vec = vec[:, order]
    flip = np.take_along_axis(
        vec, np.abs(vec).argmax(axis=0)[None, :], axis=0
    )[0]
    vec = vec * np.where(flip < 0.0, -1.0, 1.0)
    return SpectrumReport(
        eigenvalues=values,
        zero_count=_count_zeros(values, tol),
        tol_used=tol,
        is_real_spectrum=True,
        eigenvectors=vec if want_vectors else None,
    )


def eig_general(m, tol: float = 1e-9, want_vectors: bool = False) -> SpectrumReport:
    """Full spectrum of a general real matrix (complex eigenvalues allowed)."""
    a = np.asarray(m, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatch("expected a square matrix")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix entries must be finite")
    try:
        ev, vec = np.linalg.eig(a)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(str(exc)) from exc
    values, order = _sorted_spectrum(ev.astype(complex))
    vec = vec[:, order]
    mags = np.abs(values)
    radius = mags.max() if mags.size else 0.0
    is_real = bool(np.abs(values.imag).max(initial=0.0) <= tol * max(1.0, radius))
    return SpectrumReport(
        eigenvalues=values,
        zero_count=_count_zeros(values, tol),
        tol_used=tol,
        is_real_spectrum=is_real,
        eigenvectors=vec if want_vectors else None,
    )


def ngon_spectrum_closed_form(n: int) -> np.ndarray:
    """Hessian eigenvalues at the regular n-gon, in closed form.

    The Hessian at the n-gon is circulant, so its eigenvalues are the values
    q(w^j) of the generator polynomial at the n-th roots of unity:

        q(1) = 0,
        q(w) = q(w^(n-1)) = -1/2          (n >= 3),
        q(w^j) = b(j, n) for 2 <= j <= n-2, where
        b(j, n) = (1/2) sum_{k=1}^{n-1} (1 - cos(2*pi*j*k/n))
                                        / (1 - cos(2*pi*k/n)) > 0.

    n = 2 is the special case {0, -3/2}.  Entries are returned indexed by j.
    """
    if not isinstance(n, (int, np.integer)) or n < 2:
        raise InvalidN("closed-form ring spectrum needs an integer n >= 2")
    n = int(n)
    if n == 2:
        return np.array([0.0, -1.5])
    out = np.zeros(n)
    out[1] = out[n - 1] = -0.5
    if n >= 4:
        k = np.arange(1, n)
        denom = 1.0 - np.cos(2.0 * np.pi * k / n)
        j = np.arange(2, n - 1)
        numer = 1.0 - np.cos(2.0 * np.pi * np.outer(j, k) / n)
        out[2 : n - 1] = 0.5 * np.sum(numer / denom, axis=1)
    return out


def block_determinant(a, b, c, d) -> tuple[float, float, float]:
    """Determinant of [[A, B], [C, D]] three ways.

    Returns (direct 2n x 2n determinant,
             det(A) * det(D - C A^-1 B),
             det(D) * det(A - B D^-1 C)).

    Raises SingularBlock when A or D has condition number above 1e12, and
    DimensionMismatch for inconsistent shapes.
    """
    a, b, c, d = (np.asarray(x, dtype=float) for x in (a, b, c, d))
    shapes = {x.shape for x in (a, b, c, d)}
    if len(shapes) != 1 or a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatch("blocks must share one square shape")
    for name, blk in (("A", a), ("D", d)):
        if np.linalg.cond(blk) > _COND_LIMIT:
            raise SingularBlock(f"block {name} condition number exceeds {_COND_LIMIT:g}")
    full = np.block([[a, b], [c, d]])
    det_full = float(np.linalg.det(full))
    det_a = float(np.linalg.det(a) * np.linalg.det(d - c @ np.linalg.solve(a, b)))
    det_d = float(np.linalg.det(d) * np.linalg.det(a - b @ np.linalg.solve(d, c)))
    return det_full, det_a, det_d


def skew_inner(v, w) -> complex:
    """Skew-symmetric product v^T J w with J = [[0, -I], [I, 0]].

    Bilinear (no conjugation): skew_inner(v, v) = 0 for real v, and the
    product is antisymmetric under swapping the arguments.
    """
    v = np.asarray(v)
    w = np.asarray(w)
    if v.ndim != 1 or w.ndim != 1 or v.size != w.size or v.size % 2:
        raise DimensionMismatch("expected two equal-length even-dimension vectors")
    n = v.size // 2
    return complex(v[n:] @ w[:n] - v[:n] @ w[n:])
