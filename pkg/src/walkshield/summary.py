"""Random-partition graph summaries and per-node walk estimates.

A summary groups the n nodes into t supernodes. ``C`` is the t x t matrix of
length-1 directed walk counts between supernodes: ``C[i, j] = e_ij`` for
``i != j`` and ``C[i, i] = 2 e_i``, i.e. ``C = P^T A P`` for the n x t
membership matrix P. With singleton supernodes C equals A, so the estimate
below reproduces the exact counts.
"""

from __future__ import annotations

import csv
import time
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from .errors import DomainError
from .graph import Graph
from .walks import WalkProfile

SUMMARY_POWERS = (3, 4, 5, 6, 8)
MAX_SUPERNODES = 5000


@dataclass
class SummaryGraph:
    t: int
    part: np.ndarray
    sizes: np.ndarray
    internal_edges: np.ndarray
    C: np.ndarray
    cpow_diag: dict[int, np.ndarray]
    degree_power_sums: dict[int, np.ndarray]
    n: int
    seed: int | None = None
    timings: dict[str, float] = field(default_factory=dict)

    def cross_edges(self, i: int, j: int) -> int:
        return int(self.C[i, j]) if i != j else 0


def random_partition(n: int, t: int, seed: int) -> np.ndarray:
    """Shuffle the nodes and deal them round-robin into t parts.

    Part sizes differ by at most one and t = n gives singletons.
    """
    if not 1 <= t <= n:
        raise DomainError(f"need 1 <= t <= n, got t={t}, n={n}")
    rng = np.random.default_rng(seed)
    part = np.empty(n, dtype=np.int64)
    part[rng.permutation(n)] = np.arange(n) % t
    return part


def _diag_powers(c: np.ndarray, powers=SUMMARY_POWERS) -> dict[int, np.ndarray]:
    c2 = c @ c
    c3 = c2 @ c
    c4 = c2 @ c2
    # diag(X Y) = rowwise <X_i, Y^T_i>; all powers of symmetric C are symmetric
    out = {
        2: np.diag(c2).copy(),
        3: np.diag(c3).copy(),
        4: np.diag(c4).copy(),
        5: np.einsum("ij,ij->i", c2, c3),
        6: np.einsum("ij,ij->i", c3, c3),
        8: np.einsum("ij,ij->i", c4, c4),
    }
    return {p: out[p] for p in powers}


def build_summary(g: Graph, t: int, seed: int = 0, part: np.ndarray | None = None,
                  max_supernodes: int = MAX_SUPERNODES) -> SummaryGraph:
    """Summarize g with t supernodes (random balanced partition unless given)."""
    if t > max_supernodes:
        raise DomainError(f"t={t} exceeds the supernode limit {max_supernodes}")
    t0 = time.perf_counter()
    if part is None:
        part = random_partition(g.n, t, seed)
    else:
        part = np.asarray(part, dtype=np.int64)
        if part.shape != (g.n,) or part.min(initial=0) < 0 or part.max(initial=0) >= t:
            raise DomainError("partition does not match the graph")
    membership = sp.csr_matrix((np.ones(g.n), (np.arange(g.n), part)), shape=(g.n, t))
    c = np.asarray((membership.T @ g.adjacency.astype(np.float64) @ membership).todense())
    sizes = np.bincount(part, minlength=t)
    internal = (np.diag(c) / 2).astype(np.int64)
    deg = g.degrees.astype(np.float64)
    dps = {p: np.bincount(part, weights=deg ** p, minlength=t) for p in range(2, 9)}
    t1 = time.perf_counter()
    cpow = _diag_powers(c)
    t2 = time.perf_counter()
    return SummaryGraph(t, part, sizes, internal, c, cpow, dps, g.n, seed,
                        {"scan": t1 - t0, "power": t2 - t1})


def alpha(sg: SummaryGraph, g: Graph, p: int, v: int | None = None):
    """Share ``d(v)^p / sum_{u in V_i} d(u)^p`` of node v in its supernode.

    Returns the full vector when v is None; 0 where the supernode has no
    edges at all.
    """
    _check_pair(sg, g)
    deg = g.degrees.astype(np.float64)
    denom = sg.degree_power_sums[p][sg.part]
    num = deg ** p
    a = np.divide(num, denom, out=np.zeros(g.n), where=denom > 0)
    return a if v is None else float(a[v])


def _check_pair(sg: SummaryGraph, g: Graph) -> None:
    if sg.n != g.n:
        raise DomainError(f"summary built for n={sg.n}, graph has n={g.n}")


def _substituted(sg: SummaryGraph, g: Graph) -> dict[int, np.ndarray]:
    """Stand-ins for A^p(v,v): the degree for p=2, alpha_p(v) C^p(i,i) above."""
    est = {2: g.degrees.astype(np.float64)}
    for p in SUMMARY_POWERS:
        est[p] = alpha(sg, g, p) * sg.cpow_diag[p][sg.part]
    return est


def estimate_w8(sg: SummaryGraph, g: Graph) -> WalkProfile:
    """Summary estimate of W8 per node; may be negative and is kept raw."""
    _check_pair(sg, g)
    a = _substituted(sg, g)
    d = a[2]
    w8 = (8 * a[8] - 8 * d * a[6] - 8 * a[5] * a[3] - 4 * a[4] ** 2
          + 8 * d * a[3] ** 2 + 8 * d ** 2 * a[4] - 2 * d ** 4)
    w6 = 6 * a[6] - 6 * d * a[4] - 3 * a[3] ** 2 + 2 * d ** 3
    return WalkProfile(diag=a, w8=w8, w6=w6, source="summary",
                       meta={"t": sg.t, "seed": sg.seed})


def estimate_w6(sg: SummaryGraph, g: Graph) -> np.ndarray:
    return estimate_w8(sg, g).w6


def expected_adjacency(sg: SummaryGraph) -> np.ndarray:
    """Dense n x n reconstruction of A from the summary (diagnostic only)."""
    n_i = sg.sizes.astype(np.float64)
    pairs = np.outer(n_i, n_i)
    within = n_i * (n_i - 1) / 2
    dens = np.divide(sg.C, pairs, out=np.zeros_like(sg.C), where=pairs > 0)
    inner = np.divide(sg.internal_edges, within, out=np.zeros(sg.t), where=within > 0)
    dens[np.diag_indices(sg.t)] = inner
    out = dens[np.ix_(sg.part, sg.part)]
    np.fill_diagonal(out, 0.0)
    return out


def dump_summary(sg: SummaryGraph, edges_path, partition_path, labels=None) -> None:
    """Write superedges as (i, j, weight) rows with i <= j and the partition."""
    with open(edges_path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["i", "j", "weight"])
        ii, jj = np.nonzero(np.triu(sg.C))
        for i, j in zip(ii, jj):
            weight = sg.internal_edges[i] if i == j else sg.C[i, j]
            w.writerow([int(i), int(j), int(weight)])
    with open(partition_path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["node", "supernode"])
        for v, i in enumerate(sg.part):
            w.writerow([labels[v] if labels else v, int(i)])
