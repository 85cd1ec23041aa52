"""Symmetric eigendecomposition and the spectral diagnostics used by the criteria.

:func:`eig_sym` runs a cyclic Jacobi iteration. Each sweep visits every index
pair once; pairs are scheduled in round-robin rounds of disjoint rotations so a
whole round is applied to the matrix with a handful of vectorised row/column
updates.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

JACOBI_TOL = 1e-12
MAX_SWEEPS = 100
ZERO_TOL = 1e-9
# above this size eig_sym(method="auto") hands the work to LAPACK
JACOBI_MAX_N = 200
# up to this size a round of rotations is applied as a dense matrix product
DENSE_ROUND_N = 64


class SpectrumError(ValueError):
    pass


class NotSymmetric(SpectrumError):
    pass


class NoConvergence(SpectrumError):
    pass


class AllZero(SpectrumError):
    pass


@dataclass(frozen=True)
class Spectrum:
    """Ascending eigenvalues with matching orthonormal eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    scale: float = 1.0  # infinity norm of the decomposed matrix

    def __len__(self) -> int:
        return len(self.eigenvalues)

    @property
    def Q(self) -> np.ndarray:
        """Orthogonal matrix whose rows are the eigenvectors."""
        return self.eigenvectors.T


def _check_symmetric(M: np.ndarray) -> np.ndarray:
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise NotSymmetric(f"expected a square matrix, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise NotSymmetric("matrix has non-finite entries")
    scale = max(1.0, float(np.abs(M).max(initial=0.0)))
    if np.abs(M - M.T).max(initial=0.0) > 1e-12 * scale:
        raise NotSymmetric("matrix is not symmetric")
    return 0.5 * (M + M.T)


def _round_robin(n: int) -> list[tuple[np.ndarray, np.ndarray]]:
    """Partition all pairs of ``range(n)`` into rounds of disjoint pairs."""
    players = list(range(n)) + ([-1] if n % 2 else [])
    m = len(players)
    rounds = []
    for _ in range(m - 1):
        ps, qs = [], []
        for i in range(m // 2):
            a, b = players[i], players[m - 1 - i]
            if a >= 0 and b >= 0:
                ps.append(min(a, b))
                qs.append(max(a, b))
        rounds.append((np.array(ps, dtype=int), np.array(qs, dtype=int)))
        players = [players[0], players[-1]] + players[1:-1]
    return rounds


def _jacobi(A: np.ndarray, tol: float, max_sweeps: int) -> tuple[np.ndarray, np.ndarray]:
    n = A.shape[0]
    A = A.copy()
    V = np.eye(n)
    fro = np.linalg.norm(A)
    if n < 2 or fro == 0.0:
        return np.diag(A).copy(), V
    rounds = _round_robin(n)
    dense = n <= DENSE_ROUND_N
    for _ in range(max_sweeps):
        # computed directly: fro**2 - sum(diag**2) cancels to ~sqrt(machine eps)
        off = np.linalg.norm(A - np.diag(np.diag(A)))
        if off <= tol * fro:
            return np.diag(A).copy(), V
        for p, q in rounds:
            apq = A[p, q]
            active = np.abs(apq) > 0.0
            if not active.any():
                continue
            p, q, apq = p[active], q[active], apq[active]
            app, aqq = A[p, p], A[q, q]
            with np.errstate(over="ignore"):
                # |theta| = inf for a denormal apq gives t = 0, a no-op rotation
                theta = (aqq - app) / (2.0 * apq)
            t = np.sign(theta) / (np.abs(theta) + np.hypot(theta, 1.0))
            t[theta == 0.0] = 1.0
            c = 1.0 / np.sqrt(t * t + 1.0)
            s = t * c
            # A <- J^T A J with J[p,p]=J[q,q]=c, J[p,q]=s, J[q,p]=-s
            if dense:
                # small n: one matrix product beats many indexed updates
                J = np.eye(n)
                J[p, p] = c
                J[q, q] = c
                J[p, q] = s
                J[q, p] = -s
                A = J.T @ A @ J
                V = V @ J
            else:
                rp, rq = A[p, :].copy(), A[q, :].copy()
                A[p, :] = c[:, None] * rp - s[:, None] * rq
                A[q, :] = s[:, None] * rp + c[:, None] * rq
                cp, cq = A[:, p].copy(), A[:, q].copy()
                A[:, p] = cp * c - cq * s
                A[:, q] = cp * s + cq * c
                vp, vq = V[:, p].copy(), V[:, q].copy()
                V[:, p] = vp * c - vq * s
                V[:, q] = vp * s + vq * c
            A[p, q] = 0.0
            A[q, p] = 0.0
    raise NoConvergence(f"Jacobi iteration did not converge in {max_sweeps} sweeps")


def _canonical(w: np.ndarray, V: np.ndarray, scale: float) -> tuple[np.ndarray, np.ndarray]:
    order = np.argsort(w, kind="stable")
    w, V = w[order], V[:, order]
    # re-orthonormalise clusters of (numerically) equal eigenvalues
    gap = 1e-9 * scale
    start = 0
    for i in range(1, len(w) + 1):
        if i == len(w) or w[i] - w[i - 1] > gap:
            if i - start > 1:
                Qc, _ = np.linalg.qr(V[:, start:i])
                V[:, start:i] = Qc
            start = i
    for j in range(V.shape[1]):
        col = V[:, j]
        nz = np.flatnonzero(np.abs(col) > 1e-12)
        if len(nz) and col[nz[0]] < 0:
            V[:, j] = -col
    return w, V


def eig_sym(M, method: str = "auto", tol: float = JACOBI_TOL, max_sweeps: int = MAX_SWEEPS) -> Spectrum:
    """Full eigendecomposition of a real symmetric matrix.

    Parameters
    ----------
    M : array_like
        Symmetric ``n x n`` matrix.
    method : {"auto", "jacobi", "lapack"}
        ``"auto"`` uses Jacobi up to ``JACOBI_MAX_N`` and LAPACK ``syevd`` beyond.
    tol : float
        Jacobi stops once the off-diagonal Frobenius norm is ``<= tol * ||M||_F``.

    Returns
    -------
    Spectrum
        Ascending eigenvalues; each eigenvector has its first nonzero entry positive.
    """
    A = _check_symmetric(M)
    scale = float(np.abs(A).sum(axis=1).max(initial=0.0))
    if method == "auto":
        method = "jacobi" if A.shape[0] <= JACOBI_MAX_N else "lapack"
    if method == "jacobi":
        w, V = _jacobi(A, tol, max_sweeps)
    elif method == "lapack":
        w, V = np.linalg.eigh(A)
    else:
        raise ValueError(f"unknown method {method!r}")
    w, V = _canonical(w, V, max(1.0, scale))
    return Spectrum(w, V, scale)


def operator_norm(M) -> float:
    """Spectral norm of a symmetric matrix: the largest ``|eigenvalue|``."""
    w = M.eigenvalues if isinstance(M, Spectrum) else eig_sym(M).eigenvalues
    return float(np.abs(w).max(initial=0.0))


def _zero_threshold(spec: Spectrum, tol: float) -> float:
    return tol * max(1.0, spec.scale)


@dataclass(frozen=True)
class DiffusionReport:
    is_diffusion: bool
    zero_multiplicity: int
    has_ones_kernel: bool


def is_diffusion_matrix(M, tol: float = ZERO_TOL) -> DiffusionReport:
    """Simple zero eigenvalue with eigenvector along ones, everything else negative."""
    spec = M if isinstance(M, Spectrum) else eig_sym(M)
    thr = _zero_threshold(spec, tol)
    w = spec.eigenvalues
    zero = np.abs(w) <= thr
    mult = int(zero.sum())
    ones_kernel = False
    if mult == 1:
        v = spec.eigenvectors[:, np.flatnonzero(zero)[0]]
        n = len(v)
        cos = abs(v.sum()) / (np.sqrt(n) * np.linalg.norm(v))
        ones_kernel = bool(cos >= 1 - 1e-9)
    others_negative = bool(np.all(w[~zero] < -thr))
    return DiffusionReport(mult == 1 and ones_kernel and others_negative, mult, ones_kernel)


def zero_multiplicity(M, tol: float = ZERO_TOL) -> int:
    spec = M if isinstance(M, Spectrum) else eig_sym(M)
    return int(np.sum(np.abs(spec.eigenvalues) <= _zero_threshold(spec, tol)))


def nonzero_extremes(spec: Spectrum, tol: float = ZERO_TOL) -> tuple[float, float]:
    """Smallest and largest ``|eigenvalue|`` among eigenvalues that are not zero."""
    a = np.abs(spec.eigenvalues)
    a = a[a > _zero_threshold(spec, tol)]
    if a.size == 0:
        raise AllZero("every eigenvalue is zero at this tolerance")
    return float(a.min()), float(a.max())


def charpoly_roots(M, tol: float = 1e-13) -> np.ndarray:
    """Eigenvalues by Sturm-sequence bisection on the characteristic polynomial.

    Independent of :func:`eig_sym`: the matrix is reduced to tridiagonal form with
    Householder reflections, then each eigenvalue is isolated by counting sign
    changes of the leading-minor recurrence. Intended as a cross-check for
    small matrices.
    """
    A = _check_symmetric(M).copy()
    n = A.shape[0]
    for k in range(n - 2):
        x = A[k + 1 :, k].copy()
        alpha = -np.copysign(np.linalg.norm(x), x[0]) if x[0] != 0 else -np.linalg.norm(x)
        v = x.copy()
        v[0] -= alpha
        nv = np.linalg.norm(v)
        if nv == 0.0:
            continue
        v /= nv
        H = np.eye(n - k - 1) - 2.0 * np.outer(v, v)
        A[k + 1 :, :] = H @ A[k + 1 :, :]
        A[:, k + 1 :] = A[:, k + 1 :] @ H
    d = np.diag(A).copy()
    e = np.array([A[i + 1, i] for i in range(n - 1)])

    def count_below(x: float) -> int:
        # number of eigenvalues < x, from the LDL^T pivots of T - xI
        cnt, q = 0, 1.0
        for i in range(n):
            off = e[i - 1] ** 2 if i > 0 else 0.0
            q = d[i] - x - (off / q if i > 0 else 0.0)
            if q == 0.0:
                q = 1e-300
            if q < 0:
                cnt += 1
        return cnt

    radius = float(np.abs(d).max(initial=0.0) + 2 * np.abs(e).max(initial=0.0)) + 1.0
    roots = np.empty(n)
    for k in range(n):
        lo, hi = -radius, radius
        while hi - lo > tol * max(1.0, radius):
            mid = 0.5 * (lo + hi)
            if count_below(mid) > k:
                hi = mid
            else:
                lo = mid
        roots[k] = 0.5 * (lo + hi)
    return roots
