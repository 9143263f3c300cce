import gzip
import io

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from walkshield.errors import DomainError, EmptyGraphError, GraphParseError
from walkshield.graph import (NodeSet, degree, from_edges, load_edge_list, remove_nodes,
                              validate)

from conftest import complete, path, star


def test_triangle_from_stream():
    g = load_edge_list(io.BytesIO(b"0 1\n1 2\n2 0"))
    assert (g.n, g.m) == (3, 3)
    validate(g)


def test_loops_and_duplicates_dropped():
    g = load_edge_list(b"0 0\n0 1\n0 1")
    assert (g.n, g.m) == (2, 1)
    assert g.report.self_loops == 1
    assert g.report.duplicates == 1


def test_tabs_comments_and_string_ids():
    text = "# a comment\n# another\nalice\tbob\nbob carol\n\ncarol\talice\n"
    g = load_edge_list(io.StringIO(text))
    assert g.labels == ("alice", "bob", "carol")
    assert g.m == 3
    assert g.report.comments == 2


def test_integer_ids_remapped_numerically():
    g = load_edge_list(b"10 2\n2 300\n")
    assert g.labels == (2, 10, 300)
    assert g.has_edge(0, 1) and g.has_edge(0, 2) and not g.has_edge(1, 2)


def test_gzip_path(tmp_path):
    p = tmp_path / "g.txt.gz"
    with gzip.open(p, "wt") as fh:
        fh.write("1 2\n2 3\n")
    g = load_edge_list(p)
    assert (g.n, g.m) == (3, 2)


def test_malformed_line_reports_line_number():
    with pytest.raises(GraphParseError, match="line 3"):
        load_edge_list(b"0 1\n1 2\n7\n")


def test_empty_input():
    with pytest.raises(EmptyGraphError):
        load_edge_list(b"# only a comment\n\n")


def test_remove_center_of_star():
    g = remove_nodes(star(4), [0])
    assert (g.n, g.m) == (4, 0)


def test_remove_from_triangle_and_path():
    tri = complete(3)
    for v in range(3):
        g = remove_nodes(tri, [v])
        assert (g.n, g.m) == (2, 1)
    g = remove_nodes(path(3), [0])
    assert (g.n, g.m) == (2, 1)
    assert list(g.origin) == [1, 2]


def test_remove_out_of_range():
    with pytest.raises(DomainError):
        remove_nodes(path(3), [5])


def test_nodeset_rejects_duplicates():
    with pytest.raises(DomainError):
        NodeSet((1, 1))


@pytest.mark.parametrize("g,v,d", [(path(2), 0, 1), (path(2), 1, 1), (star(4), 0, 4),
                                   (from_edges(3, [(0, 1)]), 2, 0)])
def test_degree(g, v, d):
    assert degree(g, v) == d


def test_degree_range_check():
    with pytest.raises(DomainError):
        degree(path(2), 2)


edge_lists = st.integers(2, 15).flatmap(
    lambda n: st.tuples(st.just(n), st.lists(st.tuples(st.integers(0, n - 1),
                                                       st.integers(0, n - 1)), max_size=40)))


@settings(max_examples=100, deadline=None)
@given(edge_lists)
def test_loaded_graphs_are_valid(data):
    n, edges = data
    g = from_edges(n, edges)
    validate(g)
    assert int(g.degrees.sum()) == 2 * g.m
    assert g.m == len({tuple(sorted(e)) for e in edges if e[0] != e[1]})


@settings(max_examples=60, deadline=None)
@given(edge_lists, st.randoms(use_true_random=False))
def test_remove_nodes_identity_and_order(data, rnd):
    n, edges = data
    g = from_edges(n, edges)
    same = remove_nodes(g, [])
    assert np.array_equal(same.indptr, g.indptr) and np.array_equal(same.indices, g.indices)
    s = rnd.sample(range(n), rnd.randint(0, n))
    a = remove_nodes(g, s)
    b = remove_nodes(g, list(reversed(s)))
    assert np.array_equal(a.indptr, b.indptr) and np.array_equal(a.indices, b.indices)
    validate(a)
