import itertools

import networkx as nx
import numpy as np
import pytest

from walkshield.graph import from_edges


def to_graph(G: nx.Graph):
    G = nx.convert_node_labels_to_integers(G)
    return from_edges(G.number_of_nodes(), np.array(list(G.edges()), dtype=np.int64).reshape(-1, 2))


def path(n):
    return from_edges(n, [(i, i + 1) for i in range(n - 1)])


def cycle(n):
    return from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def star(d):
    return from_edges(d + 1, [(0, i) for i in range(1, d + 1)])


def complete(n):
    return from_edges(n, list(itertools.combinations(range(n), 2)))


def structured_fixtures(max_n=7):
    out = {}
    for n in range(2, max_n + 1):
        out[f"P{n}"] = path(n)
        out[f"K{n}"] = complete(n)
        out[f"S{n - 1}"] = star(n - 1)
        if n >= 3:
            out[f"C{n}"] = cycle(n)
    return out


def random_connected(count, n_range, seed):
    rng = np.random.default_rng(seed)
    graphs = []
    while len(graphs) < count:
        n = int(rng.integers(n_range[0], n_range[1] + 1))
        p = float(rng.uniform(0.25, 0.9))
        G = nx.gnp_random_graph(n, p, seed=int(rng.integers(2 ** 31)))
        if nx.is_connected(G):
            graphs.append(to_graph(G))
    return graphs


def er_graph(n, p, seed):
    G = nx.fast_gnp_random_graph(n, p, seed=seed)
    return from_edges(n, np.array(list(G.edges()), dtype=np.int64).reshape(-1, 2))


@pytest.fixture(scope="session")
def oracle_corpus():
    """>=200 random connected graphs with n <= 7 plus structured fixtures."""
    graphs = list(structured_fixtures(7).values())
    graphs += random_connected(200, (2, 7), seed=20240601)
    return graphs


@pytest.fixture(scope="session")
def small_corpus():
    """Graphs with n <= 12 for exhaustive subset checks."""
    graphs = [g for g in structured_fixtures(7).values() if g.n >= 4]
    graphs += random_connected(40, (5, 12), seed=777)
    return graphs


_criteria = {}
_RANK = {"skipped": 0, "passed": 1, "failed": 2}


def pytest_runtest_logreport(report):
    if report.when != "call" and report.outcome == "passed":
        return
    for number, title in getattr(report, "criteria", ()):
        prev = _criteria.get(number, ("skipped", title))[0]
        status = max(prev, report.outcome, key=_RANK.get) if number in _criteria else report.outcome
        _criteria[number] = (status, title)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    rep.criteria = tuple((m.args[0], m.args[1] if len(m.args) > 1 else "")
                         for m in item.iter_markers("acceptance"))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        status, title = _criteria[number]
        label = {"passed": "PASS", "failed": "FAIL", "skipped": "SKIP"}[status]
        terminalreporter.write_line(f"criterion {number:>2} {label}  {title}")
