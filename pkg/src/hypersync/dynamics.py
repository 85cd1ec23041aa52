"""Coupled dynamics on a diffusion operator.

Discrete time::

    x(n+1) = g(x(n)) + eps * L f(x(n))

Continuous time (fixed-step RK4)::

    dx/dt = f(x) + L g(x)

States are arrays of shape ``(n_vertices,)`` for scalar vertex dynamics or
``(n_vertices, k)``; vertex maps act row by row. ``L`` may be a dense array or
any object supporting ``L @ x`` (e.g. a ``scipy.sparse`` matrix).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np

DEFAULT_CONV_TOL = 1e-9
DEFAULT_DIV_TOL = 1e12
DEFAULT_MAX_STEPS = 100_000
DEFAULT_DT = 1e-2

# sup over x of |cos(x) e^{sin x}|, attained where sin x = (sqrt(5) - 1) / 2
_S = (math.sqrt(5.0) - 1.0) / 2.0
EXPSIN_SLOPE = math.sqrt(1.0 - _S * _S) * math.exp(_S)

MAP_KINDS = ("identity", "zero", "linear", "sine", "cosine", "expsin", "logistic")


class NonFinite(ArithmeticError):
    pass


@dataclass(frozen=True)
class MapSpec:
    """A vertex-local map ``R^k -> R^k``.

    ========  ==========================  ======================
    kind      map                         Lipschitz constant
    ========  ==========================  ======================
    identity  ``x``                       1
    zero      ``0``                       0
    linear    ``a x`` (or ``x @ a``)      ``|a|`` / spectral norm
    sine      ``q sin(-x)``               ``|q|``
    cosine    ``p cos(-x)``               ``|p|``
    expsin    ``q exp(sin x)``            ``|q| * 1.4585...``
    logistic  ``r x (1 - x)``             ``|r|`` on ``[0, 1]``
    ========  ==========================  ======================

    All kinds except ``linear`` with a matrix parameter act componentwise.
    """

    kind: str
    param: Any = 1.0

    def __post_init__(self) -> None:
        if self.kind not in MAP_KINDS:
            raise ValueError(f"unknown map kind {self.kind!r}; choose from {MAP_KINDS}")

    @classmethod
    def parse(cls, text: str) -> "MapSpec":
        """``"sine:0.5"`` -> ``MapSpec("sine", 0.5)``; a bare kind uses the default parameter."""
        kind, _, arg = text.partition(":")
        kind = kind.strip()
        if not arg:
            return cls(kind)
        return cls(kind, float(eval_fraction(arg)))

    def __str__(self) -> str:
        if self.kind in ("identity", "zero"):
            return self.kind
        return f"{self.kind}:{self.param!r}"

    @property
    def _matrix(self) -> bool:
        return self.kind == "linear" and np.ndim(self.param) == 2

    def __call__(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        c = self.param
        if self.kind == "identity":
            return x.copy()
        if self.kind == "zero":
            return np.zeros_like(x)
        if self.kind == "linear":
            return x @ np.asarray(c, dtype=float) if self._matrix else c * x
        if self.kind == "sine":
            return c * np.sin(-x)
        if self.kind == "cosine":
            return c * np.cos(-x)
        if self.kind == "expsin":
            return c * np.exp(np.sin(x))
        return c * x * (1.0 - x)

    def derivative(self, x) -> np.ndarray:
        """Componentwise derivative (not defined for matrix-valued ``linear``)."""
        if self._matrix:
            raise ValueError("matrix-valued linear map has no scalar derivative")
        x = np.asarray(x, dtype=float)
        c = self.param
        if self.kind == "identity":
            return np.ones_like(x)
        if self.kind == "zero":
            return np.zeros_like(x)
        if self.kind == "linear":
            return np.full_like(x, c)
        if self.kind == "sine":
            return -c * np.cos(x)
        if self.kind == "cosine":
            return -c * np.sin(x)
        if self.kind == "expsin":
            return c * np.cos(x) * np.exp(np.sin(x))
        return c * (1.0 - 2.0 * x)

    def jacobian(self, s) -> np.ndarray:
        """Jacobian at a single vertex state ``s`` in the row convention
        ``f(s + d) ~ f(s) + d @ J``."""
        if self._matrix:
            return np.asarray(self.param, dtype=float)
        s = np.atleast_1d(np.asarray(s, dtype=float))
        return np.diag(self.derivative(s))

    def lipschitz_constant(self) -> float:
        c = self.param
        if self.kind == "identity":
            return 1.0
        if self.kind == "zero":
            return 0.0
        if self._matrix:
            return float(np.linalg.norm(np.asarray(c, dtype=float), 2))
        if self.kind == "expsin":
            return abs(c) * EXPSIN_SLOPE
        return float(abs(c))

    def slope_sup(self) -> float:
        """Supremum of the derivative over the real line (one-sided slope bound)."""
        c = self.param
        if self.kind == "identity":
            return 1.0
        if self.kind == "zero":
            return 0.0
        if self.kind == "linear":
            if self._matrix:
                a = np.asarray(c, dtype=float)
                return float(np.linalg.eigvalsh(0.5 * (a + a.T)).max())
            return float(c)
        if self.kind in ("sine", "cosine"):
            return float(abs(c))
        if self.kind == "expsin":
            return abs(c) * EXPSIN_SLOPE
        # logistic: bound on the invariant interval [0, 1]
        return float(abs(c))


def eval_fraction(text: str) -> float:
    """Parse ``"0.5"``, ``"1/88"`` or ``"-3/4"``."""
    text = text.strip()
    if "/" in text:
        num, den = text.split("/", 1)
        return float(num) / float(den)
    return float(text)


@dataclass
class Trajectory:
    times: list[float]
    states: list[np.ndarray]
    sync_errors: list[float]
    termination: str  # "converged" | "diverged" | "budget"
    steps: int
    config: dict = field(default_factory=dict)

    @property
    def final_state(self) -> np.ndarray:
        return self.states[-1]

    @property
    def final_sync_error(self) -> float:
        return self.sync_errors[-1]


def sync_error(state) -> float:
    """Largest Euclidean distance of a vertex state from the vertex mean."""
    x = np.asarray(state, dtype=float)
    if x.ndim == 1:
        x = x[:, None]
    with np.errstate(over="ignore", invalid="ignore"):
        dev = x - x.mean(axis=0)
        return float(np.sqrt((dev * dev).sum(axis=1)).max(initial=0.0))


def _finite(x: np.ndarray) -> np.ndarray:
    if not np.all(np.isfinite(x)):
        raise NonFinite("state left the finite range")
    return x


def step_discrete(state, f: MapSpec, g: MapSpec, eps: float, L) -> np.ndarray:
    x = np.asarray(state, dtype=float)
    if L.shape != (x.shape[0], x.shape[0]):
        raise ValueError(f"operator shape {L.shape} does not match {x.shape[0]} vertices")
    # overflow on the way to divergence is caught by _finite
    with np.errstate(over="ignore", invalid="ignore"):
        return _finite(g(x) + eps * (L @ f(x)))


def _rhs(x: np.ndarray, f: MapSpec, g: MapSpec, L) -> np.ndarray:
    return f(x) + L @ g(x)


def step_continuous_rk4(state, f: MapSpec, g: MapSpec, L, dt: float) -> np.ndarray:
    """One classical Runge-Kutta step of ``dx/dt = f(x) + L g(x)``."""
    if not dt > 0:
        raise ValueError("dt must be positive")
    x = np.asarray(state, dtype=float)
    with np.errstate(over="ignore", invalid="ignore"):
        k1 = _rhs(x, f, g, L)
        k2 = _rhs(x + 0.5 * dt * k1, f, g, L)
        k3 = _rhs(x + 0.5 * dt * k2, f, g, L)
        k4 = _rhs(x + dt * k3, f, g, L)
        return _finite(x + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4))


def _run(x0, advance, n_steps: int, time_of, conv_tol, div_tol, sample_every, config) -> Trajectory:
    x = np.asarray(x0, dtype=float).copy()
    err = sync_error(x)
    times, states, errors = [time_of(0)], [x.copy()], [err]
    if err <= conv_tol:
        return Trajectory(times, states, errors, "converged", 0, config)
    termination = "budget"
    step = 0
    for step in range(1, n_steps + 1):
        try:
            x = advance(x)
        except NonFinite:
            termination = "diverged"
            break
        err = sync_error(x)
        if np.abs(x).max() >= div_tol:
            termination = "diverged"
        elif err <= conv_tol:
            termination = "converged"
        if termination != "budget" or step % sample_every == 0 or step == n_steps:
            times.append(time_of(step))
            states.append(x.copy())
            errors.append(err)
        if termination != "budget":
            break
    return Trajectory(times, states, errors, termination, step, config)


def simulate_discrete(
    x0,
    f: MapSpec,
    g: MapSpec,
    eps: float,
    L,
    max_steps: int = DEFAULT_MAX_STEPS,
    conv_tol: float = DEFAULT_CONV_TOL,
    div_tol: float = DEFAULT_DIV_TOL,
    sample_every: int = 1,
) -> Trajectory:
    """Iterate the discrete network until synchronized, diverged or out of budget.

    A diverging run is not an error; it is reported through
    ``Trajectory.termination``. The initial state is always the first sample and
    the terminal state always the last.
    """
    if max_steps < 1:
        raise ValueError("max_steps must be at least 1")
    config = {"mode": "discrete", "eps": eps, "f": str(f), "g": str(g)}
    return _run(
        x0, lambda x: step_discrete(x, f, g, eps, L), max_steps, int,
        conv_tol, div_tol, sample_every, config,
    )


def simulate_continuous(
    x0,
    f: MapSpec,
    g: MapSpec,
    L,
    dt: float = DEFAULT_DT,
    t_max: float = 10.0,
    conv_tol: float = DEFAULT_CONV_TOL,
    div_tol: float = DEFAULT_DIV_TOL,
    sample_every: int = 1,
) -> Trajectory:
    if not (dt > 0 and t_max > 0):
        raise ValueError("dt and t_max must be positive")
    n_steps = max(1, int(round(t_max / dt)))
    config = {"mode": "continuous", "dt": dt, "t_max": t_max, "f": str(f), "g": str(g)}
    return _run(
        x0, lambda x: step_continuous_rk4(x, f, g, L, dt), n_steps, lambda i: i * dt,
        conv_tol, div_tol, sample_every, config,
    )


def sync_orbit(s0, g: MapSpec, n_steps: int) -> np.ndarray:
    """Orbit ``s_0, ..., s_n`` of the uncoupled map on the synchronization manifold."""
    s = np.atleast_1d(np.asarray(s0, dtype=float))
    out = np.empty((n_steps + 1,) + s.shape)
    out[0] = s
    for i in range(n_steps):
        s = g(s)
        out[i + 1] = s
    return out


def jacobian_sequence(f: MapSpec, orbit: np.ndarray) -> np.ndarray:
    return np.stack([f.jacobian(s) for s in orbit])


def variational_discrete(
    eta1,
    eigenvalues: Sequence[float],
    Jf_seq,
    Jg_seq,
    eps: float,
    n_steps: int,
) -> np.ndarray:
    """Propagate the decoupled perturbation modes.

    Row ``i`` of ``eta`` evolves as ``eta(i) <- eta(i) @ (Jg(n) + eps*lam_i*Jf(n))``.
    ``Jf_seq``/``Jg_seq`` are either one ``k x k`` matrix (time-invariant) or a
    stack of at least ``n_steps`` of them. Returns shape ``(n_steps+1, N, k)``.
    """
    eta = np.asarray(eta1, dtype=float)
    if eta.ndim == 1:
        eta = eta[:, None]
    lam = np.asarray(eigenvalues, dtype=float)
    N, k = eta.shape
    if lam.shape != (N,):
        raise ValueError("one eigenvalue per row of eta is required")

    def as_seq(J):
        J = np.asarray(J, dtype=float)
        if J.ndim == 0:
            J = J.reshape(1, 1)
        if J.ndim == 2:
            J = np.broadcast_to(J, (n_steps, k, k))
        if J.shape[1:] != (k, k) or J.shape[0] < n_steps:
            raise ValueError(f"expected {n_steps} Jacobians of shape {(k, k)}, got {J.shape}")
        return J

    Jf, Jg = as_seq(Jf_seq), as_seq(Jg_seq)
    out = np.empty((n_steps + 1, N, k))
    out[0] = eta
    for n in range(n_steps):
        # M[i] = Jg + eps*lam_i*Jf
        M = Jg[n][None, :, :] + eps * lam[:, None, None] * Jf[n][None, :, :]
        eta = np.einsum("ik,ikl->il", eta, M)
        out[n + 1] = eta
    return out
