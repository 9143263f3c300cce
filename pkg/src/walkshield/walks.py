"""Exact closed-walk counts per node.

Notation: ``a_p(v) = A^p(v, v)``. The number of closed walks of length p
(with distinct start points counted separately) that visit v at least once
follows from grouping v-rooted walks by how many times they return to v. A
rooted walk with i visits is the concatenation of i first-return loops; its
p rotations produce each unrooted walk exactly i times. Summed over
compositions this is ``W_p(v) = p [x^p] log(sum_l a_l(v) x^l)`` with
``a_0 = 1`` and ``a_1 = 0``, which expands to the closed forms below.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from .errors import CapabilityError, DomainError, WalkOverflowError
from .graph import Graph, as_nodeset, remove_nodes

DENSE_LIMIT = 20000
EXACT_POWERS = (2, 3, 4, 5, 6, 8)
_INT64_SAFE = float(2 ** 62)


@dataclass
class WalkProfile:
    """Per-node walk data: ``diag[p][v] = A^p(v, v)`` and W8/W6 counts.

    For ``source == "exact"`` the arrays hold Python ints (object dtype) or
    int64; for ``"summary"`` they hold floats from the supernode estimate.
    """

    diag: dict[int, np.ndarray]
    w8: np.ndarray | None = None
    w6: np.ndarray | None = None
    source: str = "exact"
    meta: dict = field(default_factory=dict)

    def walks(self, p: int) -> np.ndarray:
        w = {8: self.w8, 6: self.w6}.get(p)
        if w is None:
            raise DomainError(f"profile has no W{p} counts")
        return w


def _rowdot(x: sp.csr_matrix, y: sp.csr_matrix) -> np.ndarray:
    """Exact ``sum_j X[v, j] * Y[v, j]`` per row for non-negative int matrices.

    Rows whose float estimate could overflow int64 are redone in Python ints.
    """
    est = np.asarray(x.astype(np.float64).multiply(y.astype(np.float64)).sum(axis=1)).ravel()
    out = np.asarray(x.multiply(y).sum(axis=1)).ravel().astype(np.int64)
    big = np.flatnonzero(est >= _INT64_SAFE)
    if len(big) == 0:
        return out
    out = out.astype(object)
    for v in big:
        xi = x.indices[x.indptr[v]:x.indptr[v + 1]]
        xd = x.data[x.indptr[v]:x.indptr[v + 1]]
        yi = y.indices[y.indptr[v]:y.indptr[v + 1]]
        yd = y.data[y.indptr[v]:y.indptr[v + 1]]
        _, ix, iy = np.intersect1d(xi, yi, assume_unique=True, return_indices=True)
        out[v] = sum(int(a) * int(b) for a, b in zip(xd[ix], yd[iy]))
    return out


def diagonal_powers(g: Graph, dense_limit: int = DENSE_LIMIT) -> WalkProfile:
    """Exact ``A^p(v, v)`` for p in {2, 3, 4, 5, 6, 8}.

    Only A^2, A^3 and A^4 are formed; the higher diagonals are row inner
    products (A symmetric): ``a5 = <A^2_v, A^3_v>``, ``a6 = <A^3_v, A^3_v>``,
    ``a8 = <A^4_v, A^4_v>``.
    """
    if g.n > dense_limit:
        raise CapabilityError(
            f"exact walk counts need n <= {dense_limit} (n={g.n}); use a summary (t > 0)")
    a = g.adjacency
    # entries of A^p are bounded by its row sums
    ones = np.ones(g.n)
    r = ones
    for _ in range(4):
        r = a.astype(np.float64) @ r
    if g.n and r.max() >= _INT64_SAFE:
        raise WalkOverflowError("A^4 entries exceed the int64 range")
    a2 = (a @ a).tocsr()
    a3 = (a2 @ a).tocsr()
    a4 = (a2 @ a2).tocsr()
    for mat in (a2, a3, a4):
        mat.sort_indices()
    diag = {
        2: g.degrees.astype(np.int64),
        3: a3.diagonal().astype(np.int64),
        4: a4.diagonal().astype(np.int64),
        5: _rowdot(a2, a3),
        6: _rowdot(a3, a3),
        8: _rowdot(a4, a4),
    }
    return WalkProfile(diag=diag, source="exact")


def _exact(profile: WalkProfile, p: int) -> np.ndarray:
    return np.asarray(profile.diag[p]).astype(object)


def w8_closed_form(profile: WalkProfile) -> np.ndarray:
    """W8(v) for every node as exact Python ints."""
    if profile.source != "exact":
        raise DomainError("closed form needs an exact profile")
    a2, a3, a4, a5, a6, a8 = (_exact(profile, p) for p in EXACT_POWERS)
    w = (8 * a8 - 8 * a2 * a6 - 8 * a3 * a5 - 4 * a4 * a4
         + 8 * a2 * a3 * a3 + 8 * a2 * a2 * a4 - 2 * a2 ** 4)
    if len(w) and min(w) < 0:
        raise RuntimeError("negative W8: diagonal powers are inconsistent")
    return w


def w6_closed_form(profile: WalkProfile) -> np.ndarray:
    """W6(v) = 6 a6 - 6 a2 a4 - 3 a3^2 + 2 a2^3, exact Python ints."""
    if profile.source != "exact":
        raise DomainError("closed form needs an exact profile")
    a2, a3, a4, a6 = (_exact(profile, p) for p in (2, 3, 4, 6))
    w = 6 * a6 - 6 * a2 * a4 - 3 * a3 * a3 + 2 * a2 ** 3
    if len(w) and min(w) < 0:
        raise RuntimeError("negative W6: diagonal powers are inconsistent")
    return w


def exact_profile(g: Graph, dense_limit: int = DENSE_LIMIT) -> WalkProfile:
    prof = diagonal_powers(g, dense_limit)
    prof.w8 = w8_closed_form(prof)
    prof.w6 = w6_closed_form(prof)
    return prof


def trace_power(g: Graph, p: int, dense_limit: int = DENSE_LIMIT) -> int:
    """trace(A^p) as an exact int, i.e. the number of closed p-walks."""
    if p == 2:
        return 2 * g.m
    if p not in EXACT_POWERS:
        raise DomainError(f"trace of A^{p} not supported")
    if g.m == 0:
        return 0
    return int(sum(int(x) for x in diagonal_powers(g, dense_limit).diag[p]))


def set_walk_count(g: Graph, s, p: int, dense_limit: int = DENSE_LIMIT) -> int:
    """Closed p-walks touching S: ``trace(A^p) - trace((A - S)^p)``."""
    if p not in (2, 4, 6, 8):
        raise DomainError(f"p must be one of 2, 4, 6, 8, got {p}")
    s = as_nodeset(s).validate(g)
    if len(s) == 0:
        return 0
    return trace_power(g, p, dense_limit) - trace_power(remove_nodes(g, s), p, dense_limit)


BRUTE_WORK_BOUND = 5 * 10 ** 7


def brute_walk_counts(g: Graph, p: int, work_bound: int = BRUTE_WORK_BOUND) -> np.ndarray:
    """Count closed p-walks through each node by enumeration.

    Every walk ``(x0, x1, ..., x_{p-1}, x0)`` is followed step by step from
    each start, carrying the set of vertices it has visited; walks with equal
    (start, position, visited set) are merged into one counter. At the end
    each returning walk is credited to every vertex it visited. No matrix
    powers are used, so this is independent of the closed forms.
    """
    n = g.n
    if p < 1 or p > 10:
        raise CapabilityError(f"brute-force walk counting supports 1 <= p <= 10, got {p}")
    dmax = int(g.degrees.max()) if n else 0
    work = n * n * (2 ** n) * p * max(dmax, 1)
    if n > 20 or work > work_bound:
        raise CapabilityError(f"brute-force enumeration too large (n={n}, work~{work})")
    if n == 0:
        return np.zeros(0, dtype=np.int64)
    full = 2 ** n
    masks = np.arange(full)
    grow = [masks | (1 << y) for y in range(n)]
    # state[u, x, mask]: walks started at u, now at x, having visited mask
    state = np.zeros((n, n, full), dtype=np.int64)
    for u in range(n):
        state[u, u, 1 << u] = 1
    directed = [(x, y) for x in range(n) for y in g.neighbors(x)]
    for _ in range(p):
        nxt = np.zeros_like(state)
        for x, y in directed:
            np.add.at(nxt[:, y], (slice(None), grow[y]), state[:, x])
        state = nxt
    closed = sum(state[u, u] for u in range(n))
    out = np.zeros(n, dtype=np.int64)
    for v in range(n):
        out[v] = closed[(masks >> v) & 1 == 1].sum()
    return out


def brute_walk_count(g: Graph, v: int, p: int, work_bound: int = BRUTE_WORK_BOUND) -> int:
    if not 0 <= v < g.n:
        raise DomainError(f"node id {v} out of range for n={g.n}")
    return int(brute_walk_counts(g, p, work_bound)[v])
