"""Immutable simple undirected graphs in compressed sparse row form."""

from __future__ import annotations

import gzip
import io
import logging
import os
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np
import scipy.sparse as sp

from .errors import DomainError, EmptyGraphError, GraphParseError

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class LoadReport:
    lines: int = 0
    comments: int = 0
    self_loops: int = 0
    duplicates: int = 0


@dataclass(frozen=True, eq=False)
class Graph:
    """Simple undirected graph on dense ids ``0..n-1``.

    ``indptr``/``indices`` are CSR arrays with each neighbor list sorted.
    ``labels[i]`` is the external id of internal node ``i`` and ``origin[i]``
    its id in the loaded root graph (identity for loaded graphs).
    """

    indptr: np.ndarray
    indices: np.ndarray
    labels: tuple = ()
    origin: np.ndarray | None = None
    report: LoadReport = field(default_factory=LoadReport)

    @property
    def n(self) -> int:
        return len(self.indptr) - 1

    @property
    def m(self) -> int:
        return len(self.indices) // 2

    @cached_property
    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    @cached_property
    def adjacency(self) -> sp.csr_matrix:
        """Adjacency matrix A with int64 entries."""
        data = np.ones(len(self.indices), dtype=np.int64)
        return sp.csr_matrix((data, self.indices, self.indptr), shape=(self.n, self.n))

    @cached_property
    def adjacency_float(self) -> sp.csr_matrix:
        return self.adjacency.astype(np.float64)

    @cached_property
    def adjacency_csc(self) -> sp.csc_matrix:
        """Float64 column-major copy for column slicing ``A[:, S]``."""
        return self.adjacency_float.tocsc()

    def neighbors(self, v: int) -> np.ndarray:
        _check_node(self, v)
        return self.indices[self.indptr[v]:self.indptr[v + 1]]

    def degree(self, v: int) -> int:
        _check_node(self, v)
        return int(self.indptr[v + 1] - self.indptr[v])

    def has_edge(self, u: int, v: int) -> bool:
        nbrs = self.neighbors(u)
        i = np.searchsorted(nbrs, v)
        return bool(i < len(nbrs) and nbrs[i] == v)

    def edges(self) -> np.ndarray:
        """Edge array of shape (m, 2) with u < v."""
        rows = np.repeat(np.arange(self.n), self.degrees)
        mask = rows < self.indices
        return np.column_stack([rows[mask], self.indices[mask]])

    def label(self, v: int):
        return self.labels[v] if self.labels else v

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


@dataclass(frozen=True)
class NodeSet:
    """Ordered set of internal node ids (greedy pick order)."""

    order: tuple[int, ...] = ()

    def __post_init__(self):
        order = tuple(int(v) for v in self.order)
        if len(set(order)) != len(order):
            raise DomainError(f"duplicate node ids in {order}")
        object.__setattr__(self, "order", order)

    @property
    def members(self) -> frozenset[int]:
        return frozenset(self.order)

    def __len__(self) -> int:
        return len(self.order)

    def __iter__(self):
        return iter(self.order)

    def __contains__(self, v) -> bool:
        return v in self.members

    def validate(self, g: Graph) -> "NodeSet":
        for v in self.order:
            if v < 0 or v >= g.n:
                raise DomainError(f"node id {v} out of range for n={g.n}")
        return self


def as_nodeset(s: NodeSet | Iterable[int] | None) -> NodeSet:
    if s is None:
        return NodeSet()
    if isinstance(s, NodeSet):
        return s
    return NodeSet(tuple(s))


def _check_node(g: Graph, v: int) -> None:
    if not 0 <= v < g.n:
        raise DomainError(f"node id {v} out of range for n={g.n}")


def from_edges(n: int, edges: Iterable[Sequence[int]], labels: Sequence | None = None,
               report: LoadReport | None = None) -> Graph:
    """Build a graph on ``n`` nodes, dropping self-loops and duplicate edges."""
    arr = np.asarray(list(edges) if not isinstance(edges, np.ndarray) else edges, dtype=np.int64)
    arr = arr.reshape(-1, 2)
    if len(arr) and (arr.min() < 0 or arr.max() >= n):
        raise DomainError(f"edge endpoint out of range for n={n}")
    loops = int(np.count_nonzero(arr[:, 0] == arr[:, 1]))
    arr = arr[arr[:, 0] != arr[:, 1]]
    arr = np.sort(arr, axis=1)
    uniq = np.unique(arr, axis=0) if len(arr) else arr
    dups = len(arr) - len(uniq)
    rows = np.concatenate([uniq[:, 0], uniq[:, 1]])
    cols = np.concatenate([uniq[:, 1], uniq[:, 0]])
    order = np.lexsort((cols, rows))
    rows, cols = rows[order], cols[order]
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(rows, minlength=n), out=indptr[1:])
    if report is None:
        report = LoadReport(self_loops=loops, duplicates=dups)
    return Graph(indptr, cols.astype(np.int64), tuple(labels) if labels is not None else (),
                 np.arange(n), report)


def _open_text(source) -> io.TextIOBase:
    if isinstance(source, (str, os.PathLike)):
        path = os.fspath(source)
        if path.endswith(".gz"):
            return gzip.open(path, "rt", encoding="utf-8")
        return open(path, "r", encoding="utf-8")
    if isinstance(source, (bytes, bytearray)):
        data = bytes(source)
        if data[:2] == b"\x1f\x8b":
            data = gzip.decompress(data)
        return io.StringIO(data.decode("utf-8"))
    if isinstance(source, io.TextIOBase):
        return source
    return io.TextIOWrapper(source, encoding="utf-8")


def load_edge_list(source) -> Graph:
    """Read a SNAP-style edge list (path, bytes or stream).

    Lines starting with ``#`` are comments; each other non-blank line holds
    two ids separated by spaces or tabs. Ids are remapped densely: integer
    ids in numeric order, otherwise in string order.
    """
    stream = _open_text(source)
    pairs = []
    lines = comments = 0
    try:
        for lineno, line in enumerate(stream, start=1):
            lines += 1
            s = line.strip()
            if not s:
                continue
            if s.startswith("#") or s.startswith("%"):
                comments += 1
                continue
            tok = s.split()
            if len(tok) != 2:
                raise GraphParseError(f"expected 2 ids, got {len(tok)}: {s!r}", lineno)
            pairs.append((tok[0], tok[1]))
    finally:
        if isinstance(source, (str, os.PathLike)):
            stream.close()
    if not pairs:
        raise EmptyGraphError("edge list contains no edges")

    ids = {a for p in pairs for a in p}
    try:
        ordered = sorted(ids, key=int)
        labels = [int(x) for x in ordered]
    except ValueError:
        ordered = sorted(ids)
        labels = ordered
    index = {x: i for i, x in enumerate(ordered)}
    edges = np.array([(index[a], index[b]) for a, b in pairs], dtype=np.int64)
    g = from_edges(len(ordered), edges, labels)
    report = LoadReport(lines, comments, g.report.self_loops, g.report.duplicates)
    if report.self_loops or report.duplicates:
        log.info("dropped %d self-loops and %d duplicate edges",
                 report.self_loops, report.duplicates)
    return Graph(g.indptr, g.indices, g.labels, g.origin, report)


def remove_nodes(g: Graph, s) -> Graph:
    """Return ``G - S``.

    Labels carry over; ``origin`` maps new ids to ids of the loaded root graph.
    """
    s = as_nodeset(s).validate(g)
    keep = np.ones(g.n, dtype=bool)
    keep[list(s.order)] = False
    kept = np.flatnonzero(keep)
    newid = np.full(g.n, -1, dtype=np.int64)
    newid[kept] = np.arange(len(kept))
    sub = g.adjacency[kept][:, kept].tocsr()
    sub.sort_indices()
    labels = tuple(g.labels[i] for i in kept) if g.labels else tuple(int(i) for i in kept)
    base_origin = g.origin if g.origin is not None else np.arange(g.n)
    return Graph(sub.indptr.astype(np.int64), sub.indices.astype(np.int64), labels,
                 base_origin[kept])


def validate(g: Graph) -> None:
    """Raise ``DomainError`` unless g is symmetric, loop-free and sorted."""
    a = g.adjacency
    if (a != a.T).nnz:
        raise DomainError("adjacency is not symmetric")
    if np.any(a.diagonal()):
        raise DomainError("graph has self-loops")
    for v in range(g.n):
        nb = g.indices[g.indptr[v]:g.indptr[v + 1]]
        if len(nb) > 1 and np.any(np.diff(nb) <= 0):
            raise DomainError(f"neighbor list of {v} unsorted or duplicated")
    if int(g.degrees.sum()) != 2 * g.m:
        raise DomainError("degree sum does not equal 2m")


def degree(g: Graph, v: int) -> int:
    return g.degree(v)
