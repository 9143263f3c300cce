"""Leading eigenpairs by power iteration, eigendrop and trace dominance."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import CapabilityError, ConvergenceError, DomainError
from .graph import Graph, as_nodeset, remove_nodes

DEFAULT_TOL = 1e-9
DEFAULT_MAX_ITER = 10000
DENSE_SPECTRUM_LIMIT = 5000


@dataclass(frozen=True)
class SpectralResult:
    lambda_max: float
    eigvec: np.ndarray
    iterations: int
    residual: float


def _start_vector(n: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    x = np.ones(n) + 1e-3 * rng.random(n)
    return x / np.linalg.norm(x)


def lambda_max(g: Graph, tol: float = DEFAULT_TOL, max_iter: int = DEFAULT_MAX_ITER,
               seed: int = 0) -> SpectralResult:
    """Largest adjacency eigenvalue and its non-negative unit eigenvector.

    Iterates with ``A + I`` so that a bipartite graph's ``-lambda`` does not
    tie with ``lambda``. Stops once ``||Av - lambda v|| <= tol * max(lambda, 1)``.
    """
    if g.m == 0:
        return SpectralResult(0.0, np.zeros(g.n), 0, 0.0)
    a = g.adjacency_float
    x = _start_vector(g.n, seed)
    lam = res = 0.0
    for it in range(1, max_iter + 1):
        ax = a @ x
        lam = float(x @ ax)
        res = float(np.linalg.norm(ax - lam * x))
        if res <= tol * max(lam, 1.0):
            return SpectralResult(lam, x, it, res)
        y = ax + x
        x = y / np.linalg.norm(y)
    raise ConvergenceError(
        f"power iteration did not converge in {max_iter} iterations (residual {res:.3g})",
        best=SpectralResult(lam, x, max_iter, res))


def lambda_2(g: Graph, tol: float = DEFAULT_TOL, max_iter: int = DEFAULT_MAX_ITER,
             seed: int = 0, top: SpectralResult | None = None) -> float:
    """Magnitude of the second-largest (algebraic) adjacency eigenvalue.

    The leading pair is deflated as ``A - 2*lambda_1 v v^T`` which sends it to
    ``-lambda_1``, below the rest of the spectrum; the shifted operator
    ``B + lambda_1 I`` is then positive semidefinite and its dominant
    eigenvalue minus ``lambda_1`` is the second eigenvalue.
    """
    if g.n < 2:
        raise DomainError("lambda_2 needs at least two nodes")
    if top is None:
        top = lambda_max(g, tol, max_iter, seed)
    lam1, v = top.lambda_max, top.eigvec
    if lam1 == 0.0:
        return 0.0
    a = g.adjacency_float

    def op(x):
        return a @ x - 2.0 * lam1 * v * (v @ x) + lam1 * x

    rng = np.random.default_rng(seed + 1)
    x = rng.standard_normal(g.n)
    x -= v * (v @ x)
    x /= np.linalg.norm(x)
    mu = 0.0
    for _ in range(max_iter):
        bx = op(x)
        mu = float(x @ bx)
        res = float(np.linalg.norm(bx - mu * x))
        if res <= tol * max(lam1, 1.0):
            break
        nrm = np.linalg.norm(bx)
        if nrm == 0.0:
            mu = 0.0
            break
        x = bx / nrm
    else:
        raise ConvergenceError("deflated power iteration did not converge",
                               best=(mu - lam1, x, res))
    return abs(mu - lam1)


def eigendrop_percent(g: Graph, s, tol: float = DEFAULT_TOL,
                      max_iter: int = DEFAULT_MAX_ITER, seed: int = 0,
                      base: float | None = None) -> float:
    """``100 * (lambda(A) - lambda(A - S)) / lambda(A)``."""
    s = as_nodeset(s).validate(g)
    lam = base if base is not None else lambda_max(g, tol, max_iter, seed).lambda_max
    if lam == 0.0:
        raise DomainError("eigendrop is undefined for a graph with lambda_max = 0")
    if len(s) == 0:
        return 0.0
    rest = lambda_max(remove_nodes(g, s), tol, max_iter, seed).lambda_max
    # float noise can push an unchanged lambda a hair above the original
    return float(np.clip(100.0 * (lam - rest) / lam, 0.0, 100.0))


def trace_dominance_ratio(g: Graph, p: int = 8, dense_limit: int = DENSE_SPECTRUM_LIMIT,
                          seed: int = 0) -> float:
    """``lambda_max^p / trace(A^p)`` for even ``p <= 8``.

    The trace is the exact closed-walk total from the diagonal powers, so no
    full spectrum is needed; the size limit still applies because the
    diagonal powers materialize ``A^4``.
    """
    from .walks import trace_power

    if p % 2 or not 2 <= p <= 8:
        raise DomainError(f"p must be even and in [2, 8], got {p}")
    if g.n > dense_limit:
        raise CapabilityError(f"n={g.n} exceeds the dense-spectrum limit {dense_limit}")
    tr = trace_power(g, p)
    if tr == 0:
        raise DomainError("trace(A^p) is zero: graph has no edges")
    lam = lambda_max(g, seed=seed).lambda_max
    return float(lam ** p / tr)
