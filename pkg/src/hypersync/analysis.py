"""Synchronization criteria for the coupled networks in :mod:`hypersync.dynamics`.

Every check returns a :class:`CriterionReport`. The conditions are sufficient,
not necessary: ``not_guaranteed`` means the criterion is silent, not that the
network fails to synchronize.

Conventions
-----------
* Eigenvalues of the diffusion operator are non-positive; ``|lambda|`` means
  ``-lambda``.
* The norm induced by a positive-definite ``A`` on row vectors is
  ``||x||_A = sqrt(x A x^T)``; the matching matrix norm is
  ``||J||_A = sqrt(lambda_max(A^{-1/2} J A J^T A^{-1/2}))``, so that
  ``J A J^T - A < 0`` exactly when ``||J||_A < 1``.
* Where the local interval criteria carry an unspecified constant ``c`` in
  ``(1 - e^{-sigma}) / (c eps)`` it is fixed to ``c = 1``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import hypergraph as hg
from .dynamics import MapSpec, NonFinite, sync_orbit
from .operators import build_C
from .spectra import ZERO_TOL, Spectrum, eig_sym, nonzero_extremes, operator_norm

VERDICT_TOL = 1e-12
DEFINITE_TOL = 1e-10
DEFAULT_BURN_IN = 1_000
DEFAULT_HORIZON = 10_000

GUARANTEED = "guaranteed"
NOT_GUARANTEED = "not_guaranteed"


class ANotPositiveDefinite(ValueError):
    pass


class PNotPositiveDefinite(ValueError):
    pass


class NotUniform(ValueError):
    pass


class ZeroDerivative(ArithmeticError):
    pass


@dataclass
class CriterionReport:
    criterion: str
    verdict: str
    margin: float
    inputs: dict = field(default_factory=dict)
    quantities: dict = field(default_factory=dict)

    @property
    def guaranteed(self) -> bool:
        return self.verdict == GUARANTEED

    def lines(self) -> list[str]:
        out = [f"criterion={self.criterion}", f"verdict={self.verdict}", f"margin={_fmt(self.margin)}"]
        out += [f"input.{k}={_fmt(v)}" for k, v in self.inputs.items()]
        out += [f"{k}={_fmt(v)}" for k, v in self.quantities.items()]
        return out


def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v)).lower()
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    if isinstance(v, np.ndarray):
        return " ".join(_fmt(float(x)) for x in v.ravel())
    if isinstance(v, (list, tuple)):
        return " ".join(_fmt(x) for x in v)
    return str(v)


def _report(name: str, margin: float, inputs=None, quantities=None, closed: bool = False) -> CriterionReport:
    # strict inequalities need margin > tol; closed (non-strict) ones margin >= -tol
    ok = margin >= -VERDICT_TOL if closed else margin > VERDICT_TOL
    verdict = GUARANTEED if ok else NOT_GUARANTEED
    return CriterionReport(name, verdict, float(margin), inputs or {}, quantities or {})


def _sym_eigs(M) -> np.ndarray:
    M = np.atleast_2d(np.asarray(M, dtype=float))
    return eig_sym(0.5 * (M + M.T)).eigenvalues


def _definite_tol(M) -> float:
    M = np.atleast_2d(np.asarray(M, dtype=float))
    return DEFINITE_TOL * max(1.0, float(np.abs(M).sum(axis=1).max(initial=0.0)))


def is_negative_definite(M) -> bool:
    return bool(_sym_eigs(M)[-1] < -_definite_tol(M))


def is_negative_semidefinite(M) -> bool:
    return bool(_sym_eigs(M)[-1] <= _definite_tol(M))


def _require_pd(A, exc) -> np.ndarray:
    A = np.atleast_2d(np.asarray(A, dtype=float))
    if A.shape[0] != A.shape[1] or np.abs(A - A.T).max(initial=0.0) > 1e-12 * max(1.0, np.abs(A).max()):
        raise exc("matrix must be square and symmetric")
    if _sym_eigs(A)[0] <= 0:
        raise exc("matrix must be positive definite")
    return A


def a_norm(J, A) -> float:
    """Matrix norm of ``J`` induced by ``||x||_A = sqrt(x A x^T)`` on row vectors."""
    A = _require_pd(A, ANotPositiveDefinite)
    J = np.atleast_2d(np.asarray(J, dtype=float))
    spec = eig_sym(A)
    Ah = spec.eigenvectors @ np.diag(np.sqrt(spec.eigenvalues)) @ spec.eigenvectors.T
    Aih = spec.eigenvectors @ np.diag(1.0 / np.sqrt(spec.eigenvalues)) @ spec.eigenvectors.T
    K = Aih @ J @ Ah
    return math.sqrt(max(float(_sym_eigs(K @ K.T)[-1]), 0.0))


# ---------------------------------------------------------------- global, discrete


def global_discrete(k_f: float, k_g: float, eps: float, Lw_norm: float) -> CriterionReport:
    """Lipschitz condition ``k_g + eps * ||L_w|| * k_f < 1``.

    Passing the largest ``|eigenvalue|`` of ``L_w`` as ``Lw_norm`` gives the
    eigenvalue form of the same test.
    """
    if k_f < 0 or k_g < 0 or not eps > 0:
        raise ValueError("need k_f, k_g >= 0 and eps > 0")
    value = k_g + eps * Lw_norm * k_f
    return _report(
        "global-discrete", 1.0 - value,
        {"k_f": k_f, "k_g": k_g, "eps": eps, "Lw_norm": Lw_norm},
        {"value": value},
    )


def global_discrete_feqg(k_f: float, eps: float, L_w) -> CriterionReport:
    """``f = g`` case: ``||I + eps L_w|| < 1 / k_f``."""
    if not k_f > 0:
        raise ValueError("k_f must be positive")
    L_w = np.asarray(L_w, dtype=float)
    norm = operator_norm(np.eye(L_w.shape[0]) + eps * L_w)
    return _report(
        "global-discrete-feqg", 1.0 / k_f - norm,
        {"k_f": k_f, "eps": eps},
        {"I_plus_eps_Lw_norm": norm, "threshold": 1.0 / k_f, "value": norm * k_f},
    )


def delta_root(L_w) -> np.ndarray:
    """Symmetric ``Delta`` with ``Delta @ Delta = -L_w``."""
    spec = eig_sym(L_w)
    w = np.clip(-spec.eigenvalues, 0.0, None)
    V = spec.eigenvectors
    return V @ np.diag(np.sqrt(w)) @ V.T


def global_discrete_delta(k_f: float, k_g: float, eps: float, L_w) -> CriterionReport:
    """Square-root variant: same inequality, stated for ``Delta x`` with
    ``Delta^2 = -L_w``. The growth and commutation hypotheses on ``f`` and ``g``
    are the caller's responsibility; only the numeric inequality is checked."""
    Delta = delta_root(L_w)
    norm = operator_norm(np.asarray(L_w, dtype=float))
    report = global_discrete(k_f, k_g, eps, norm)
    report.criterion = "global-discrete-delta"
    report.quantities["delta_residual"] = float(np.abs(Delta @ Delta + np.asarray(L_w)).max())
    return report


# ---------------------------------------------------------------- local, discrete


def sigma_estimate(
    s0,
    f: MapSpec,
    g: MapSpec | None = None,
    A=None,
    burn_in: int = DEFAULT_BURN_IN,
    horizon: int = DEFAULT_HORIZON,
) -> float:
    """Cesàro mean of ``log ||J_f(s_r)||_A`` along the synchronized orbit.

    The orbit is ``s_{r+1} = g(s_r)`` (``g`` defaults to ``f``); the average runs
    over ``r`` in ``(burn_in, horizon]``.
    """
    if not horizon > burn_in >= 0:
        raise ValueError("need horizon > burn_in >= 0")
    g = f if g is None else g
    orbit = sync_orbit(s0, g, horizon)
    if not np.all(np.isfinite(orbit)):
        raise NonFinite("synchronized orbit escaped to infinity")
    k = orbit.shape[1]
    A = np.eye(k) if A is None else np.atleast_2d(np.asarray(A, dtype=float))
    identity_a = np.array_equal(A, np.eye(k))
    total = 0.0
    for s in orbit[burn_in + 1 : horizon + 1]:
        J = f.jacobian(s)
        nrm = float(np.linalg.norm(J, 2)) if identity_a else a_norm(J, A)
        if nrm == 0.0:
            raise ZeroDerivative(f"Jacobian vanishes at s={s}")
        total += math.log(nrm)
    return total / (horizon - burn_in)


def eigenvalue_interval_check(
    sigma: float,
    eps: float,
    eigenvalues,
    tol: float = ZERO_TOL,
    mask: Sequence[bool] | None = None,
) -> CriterionReport:
    """Every nonzero ``|lambda_i|`` must lie in ``[(1-e^-sigma)/eps, (1+e^-sigma)/eps]``.

    ``mask[i] = True`` marks a mode whose initial perturbation component is zero;
    such modes are exempt.
    """
    if not eps > 0:
        raise ValueError("eps must be positive")
    lam = eigenvalues.eigenvalues if isinstance(eigenvalues, Spectrum) else np.asarray(eigenvalues, float)
    a = np.abs(lam)
    scale = max(1.0, float(a.max(initial=0.0)))
    checked = a > tol * scale
    if mask is not None:
        checked &= ~np.asarray(mask, dtype=bool)
    r = math.exp(-sigma)
    lo, hi = (1.0 - r) / eps, (1.0 + r) / eps
    per_mode = np.minimum(a - lo, hi - a)
    margin = float(per_mode[checked].min()) if checked.any() else math.inf
    return _report(
        "eigenvalue-interval", margin,
        {"sigma": sigma, "eps": eps},
        {"interval_lo": lo, "interval_hi": hi, "mode_margins": per_mode, "checked": checked.astype(int)},
        closed=True,
    )


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float

    @property
    def empty(self) -> bool:
        return self.lo > self.hi

    def __contains__(self, x: float) -> bool:
        return self.lo <= x <= self.hi

    def positive_part(self) -> "Interval":
        return Interval(max(self.lo, 0.0), self.hi)


def coupling_interval(sigma: float, lambda_min_abs: float, lambda_max_abs: float) -> Interval:
    """Coupling strengths for which all nonzero modes fall in the stability interval."""
    if not (lambda_min_abs > 0 and lambda_max_abs > 0):
        raise ValueError("eigenvalue magnitudes must be positive")
    r = math.exp(-sigma)
    return Interval((1.0 - r) / lambda_min_abs, (1.0 + r) / lambda_max_abs)


def _jacobian_stack(J) -> np.ndarray:
    J = np.asarray(J, dtype=float)
    if J.ndim == 0:
        return J.reshape(1, 1, 1)
    if J.ndim == 2:
        return J[None]
    return J


def lyapunov_discrete_check(
    Jg,
    Jf,
    eps: float,
    eigenvalues,
    A=None,
    skip_zero: bool = True,
    tol: float = ZERO_TOL,
) -> CriterionReport:
    """Per-mode test ``M_i A M_i^T - A < 0`` with ``M_i = Jg + eps*lam_i*Jf``.

    ``Jg``/``Jf`` are single ``k x k`` matrices or stacks over time (same length);
    every time sample must pass. The block form
    ``[[A, M_i], [M_i^T, A^{-1}]] > 0`` is evaluated alongside and must agree.
    Modes with ``lambda_i = 0`` lie along the synchronization manifold and are
    skipped unless ``skip_zero`` is false.
    """
    Jg_s, Jf_s = _jacobian_stack(Jg), _jacobian_stack(Jf)
    if len(Jg_s) != len(Jf_s):
        if len(Jg_s) == 1:
            Jg_s = np.repeat(Jg_s, len(Jf_s), axis=0)
        elif len(Jf_s) == 1:
            Jf_s = np.repeat(Jf_s, len(Jg_s), axis=0)
        else:
            raise ValueError("Jacobian sequences differ in length")
    k = Jg_s.shape[1]
    A = np.eye(k) if A is None else _require_pd(A, ANotPositiveDefinite)
    Ainv = np.linalg.inv(A)
    lam = eigenvalues.eigenvalues if isinstance(eigenvalues, Spectrum) else np.asarray(eigenvalues, float)
    scale = max(1.0, float(np.abs(lam).max(initial=0.0)))
    modes = [i for i, l in enumerate(lam) if not (skip_zero and abs(l) <= tol * scale)]
    worst = math.inf
    worst_block = math.inf
    for t in range(len(Jg_s)):
        for i in modes:
            M = Jg_s[t] + eps * lam[i] * Jf_s[t]
            D = M @ A @ M.T - A
            worst = min(worst, -float(_sym_eigs(D)[-1]))
            block = np.block([[A, M], [M.T, Ainv]])
            worst_block = min(worst_block, float(_sym_eigs(block)[0]))
    margin = worst - _definite_tol(A)
    schur_ok = worst_block > _definite_tol(A)
    return _report(
        "lyapunov-discrete", margin, {"eps": eps},
        {"min_neg_eig": worst, "schur_min_eig": worst_block,
         "schur_agrees": schur_ok == (margin > VERDICT_TOL)},
    )


# ---------------------------------------------------------------- continuous


def continuous_local_check(Jf, Jg, mu, b: float, P=None, skip_zero: bool = False, tol: float = ZERO_TOL) -> CriterionReport:
    """``(Jf(t) + mu_i Jg(t) + b I) P`` negative semidefinite for every mode and sample.

    Semidefiniteness of a non-symmetric matrix is judged on its symmetric part
    (``x M x^T <= 0`` for all ``x``). For ``k = 1`` this is the scalar test
    ``f' + mu_i g' + b <= 0``.
    """
    if not b > 0:
        raise ValueError("b must be positive")
    Jf_s, Jg_s = _jacobian_stack(Jf), _jacobian_stack(Jg)
    if len(Jf_s) != len(Jg_s):
        if len(Jf_s) == 1:
            Jf_s = np.repeat(Jf_s, len(Jg_s), axis=0)
        elif len(Jg_s) == 1:
            Jg_s = np.repeat(Jg_s, len(Jf_s), axis=0)
        else:
            raise ValueError("Jacobian sequences differ in length")
    k = Jf_s.shape[1]
    P = np.eye(k) if P is None else _require_pd(P, PNotPositiveDefinite)
    mu = mu.eigenvalues if isinstance(mu, Spectrum) else np.asarray(mu, float)
    scale = max(1.0, float(np.abs(mu).max(initial=0.0)))
    modes = [m for m in mu if not (skip_zero and abs(m) <= tol * scale)]
    top = -math.inf
    for t in range(len(Jf_s)):
        for m in modes:
            M = (Jf_s[t] + m * Jg_s[t] + b * np.eye(k)) @ P
            top = max(top, float(_sym_eigs(M)[-1]))
    margin = -top
    return _report("continuous-local", margin, {"b": b}, {"max_sym_eig": top}, closed=True)


def kronecker_check(Jf, Jg, mu) -> CriterionReport:
    """``Jf (x) I_N + Jg (x) D_L`` negative definite, built explicitly."""
    Jf = np.atleast_2d(np.asarray(Jf, dtype=float))
    Jg = np.atleast_2d(np.asarray(Jg, dtype=float))
    mu = mu.eigenvalues if isinstance(mu, Spectrum) else np.asarray(mu, float)
    K = np.kron(Jf, np.eye(len(mu))) + np.kron(Jg, np.diag(mu))
    top = float(_sym_eigs(K)[-1])
    return _report("continuous-kronecker", -top - _definite_tol(K), {}, {"max_sym_eig": top})


def continuous_global_check(f_spec, L_w, k_dim: int = 1) -> CriterionReport:
    """Global test with ``P = I``: ``K(I, f) + L_w`` negative definite.

    ``f_spec`` is a :class:`MapSpec` (its derivative supremum gives the
    one-sided slope bound) or an explicit ``k x k`` bound matrix ``K``. For
    ``k > 1`` the operator is the Kronecker sum ``K (x) I_N + I_k (x) L_w``.
    """
    L_w = np.asarray(L_w, dtype=float)
    n = L_w.shape[0]
    if isinstance(f_spec, MapSpec):
        K = np.atleast_2d(f_spec.slope_sup()) * np.eye(k_dim) if not f_spec._matrix else np.asarray(f_spec.param, float)
    else:
        K = np.atleast_2d(np.asarray(f_spec, dtype=float))
    K = 0.5 * (K + K.T)
    k = K.shape[0]
    if k == 1:
        M = K[0, 0] * np.eye(n) + L_w
    else:
        M = np.kron(K, np.eye(n)) + np.kron(np.eye(k), L_w)
    top = float(_sym_eigs(M)[-1])
    return _report("continuous-global", -top - _definite_tol(M), {}, {"slope_bound": K, "max_eig": top})


def continuous_global_check_p(K_Pf, P) -> CriterionReport:
    """Diagonal-``P`` variant: the bound matrix ``K(P, f)`` must be negative definite."""
    P = _require_pd(P, PNotPositiveDefinite)
    if np.count_nonzero(P - np.diag(np.diag(P))):
        raise PNotPositiveDefinite("P must be diagonal")
    K = np.atleast_2d(np.asarray(K_Pf, dtype=float))
    top = float(_sym_eigs(K)[-1])
    return _report("continuous-global-p", -top - _definite_tol(K), {}, {"max_eig": top})


def continuous_global_check_k1(k_Pf, k_PLg, P, b: float) -> CriterionReport:
    """Scalar-vertex (``k = 1``) variant: ``k_(P,f) + k_(P,L_w,g) + b P`` negative definite."""
    if not b > 0:
        raise ValueError("b must be positive")
    P = _require_pd(P, PNotPositiveDefinite)
    M = np.asarray(k_Pf, dtype=float) + np.asarray(k_PLg, dtype=float) + b * P
    top = float(_sym_eigs(M)[-1])
    return _report("continuous-global-k1", -top - _definite_tol(M), {"b": b}, {"max_eig": top})


# ---------------------------------------------------------------- structural bounds


@dataclass(frozen=True)
class BoundReport:
    bound: float
    actual: float
    holds: bool


def laplacian_spectrum(G: hg.Hypergraph) -> Spectrum:
    """Spectrum of the unweighted hypergraph Laplacian ``-C``."""
    return eig_sym(-build_C(G))


def diameter_bound(G: hg.Hypergraph, spectrum: Spectrum | None = None) -> BoundReport:
    """Lower bound ``diam(G) >= 4 / (|V| (m_max - 1) lambda_min)``.

    ``lambda_min`` is the smallest nonzero Laplacian eigenvalue of the unweighted
    hypergraph.
    """
    if not hg.is_connected(G):
        raise hg.DisconnectedHypergraph("diameter bound needs a connected hypergraph")
    spectrum = laplacian_spectrum(G) if spectrum is None else spectrum
    lam_min, _ = nonzero_extremes(spectrum)
    bound = 4.0 / (G.n_vertices * (G.rank - 1) * lam_min)
    actual = hg.diameter(G)
    return BoundReport(bound, float(actual), bool(bound <= actual * (1 + 1e-12)))


def _uniform_rank(G: hg.Hypergraph) -> int:
    if not G.edges or not G.is_uniform():
        raise NotUniform("hypergraph is not uniform")
    return len(G.edges[0])


def bm_bound(G: hg.Hypergraph) -> float:
    """Combinatorial upper bound ``b_m`` on the largest Laplacian eigenvalue.

    For each vertex ``i`` with degree ``d``, ``m_i = sum_{j~i} d(j) / (d (m-1))``
    and with ``D`` the largest codegree,
    ``(2 d (m-1) - 1 + sqrt(4 (m-1)^2 d m_i D^2 - 2 d (m-1) + 1)) / (2 (m-1))``;
    ``b_m`` is the maximum over vertices.

    The bound is not valid for ``m = 2``: the 4-cycle has ``lambda_max = 4``
    but ``b_2 = (3 + sqrt(13)) / 2``. :func:`uniform_upper_bound_bm` reports
    such cases through ``holds`` rather than rejecting them.
    """
    m = _uniform_rank(G)
    n = G.n_vertices
    deg = [hg.degree(G, u) for u in range(n)]
    d_max_co = 0
    for u in range(n):
        for v in G.neighbors(u):
            d_max_co = max(d_max_co, hg.codegree(G, u, v))
    best = -math.inf
    for i in range(n):
        d = deg[i]
        if d == 0:
            continue
        m_i = sum(deg[j] for j in G.neighbors(i)) / (d * (m - 1))
        rad = 4 * (m - 1) ** 2 * d * m_i * d_max_co**2 - 2 * d * (m - 1) + 1
        best = max(best, (2 * d * (m - 1) - 1 + math.sqrt(rad)) / (2 * (m - 1)))
    return best


def uniform_upper_bound_bm(G: hg.Hypergraph, spectrum: Spectrum | None = None) -> BoundReport:
    if not hg.is_connected(G):
        raise hg.DisconnectedHypergraph("b_m bound needs a connected hypergraph")
    b = bm_bound(G)
    spectrum = laplacian_spectrum(G) if spectrum is None else spectrum
    lam_max = float(np.abs(spectrum.eigenvalues).max())
    return BoundReport(b, lam_max, bool(lam_max <= b * (1 + 1e-12)))


@dataclass(frozen=True)
class CouplingWindow:
    interval: Interval
    admissible: Interval  # intersected with eps > 0

    @property
    def empty(self) -> bool:
        return self.admissible.empty or self.admissible.hi <= 0


def structural_coupling_window(G: hg.Hypergraph, sigma: float) -> CouplingWindow:
    """Coupling window from combinatorial data alone (no eigensolve):
    ``[N (m-1) diam (1 - e^-sigma) / 4, (1 + e^-sigma) / b_m]``."""
    m = _uniform_rank(G)
    r = math.exp(-sigma)
    lo = G.n_vertices * (m - 1) * hg.diameter(G) * (1.0 - r) / 4.0
    hi = (1.0 + r) / bm_bound(G)
    iv = Interval(lo, hi)
    return CouplingWindow(iv, iv.positive_part())
