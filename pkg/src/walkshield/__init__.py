"""Network immunization by greedy selection on closed-walk counts."""

__version__ = "0.1.0"

from .graph import Graph, NodeSet, from_edges, load_edge_list, remove_nodes
from .selection import SelectionResult, select, shield_score
from .spectral import eigendrop_percent, lambda_max

__all__ = [
    "Graph", "NodeSet", "SelectionResult", "eigendrop_percent", "from_edges",
    "lambda_max", "load_edge_list", "remove_nodes", "select", "shield_score",
]
