"""Central-user roles in temporal Twitter interaction networks."""

from .community import Partition, communities, modularity
from .graph import (
    GraphWindow,
    Interaction,
    Interval,
    Kind,
    SimpleDigraph,
    TemporalGraph,
    degrees,
    project,
    window,
)
from .metrics import NodeMetrics, betweenness, clustering, density, node_metrics, rank_top_k
from .roles import BridgeMotif, Role, RoleAssignment, RoleThresholds, classify, find_bridges
from .temporal import (
    WindowReport,
    analyze_windows,
    make_plan,
    new_unique_users,
    role_persistence,
    trajectory,
)

__version__ = "0.1.0"

__all__ = [
    "BridgeMotif", "GraphWindow", "Interaction", "Interval", "Kind", "NodeMetrics",
    "Partition", "Role", "RoleAssignment", "RoleThresholds", "SimpleDigraph",
    "TemporalGraph", "WindowReport", "analyze_windows", "betweenness", "classify",
    "clustering", "communities", "degrees", "density", "find_bridges", "make_plan",
    "modularity", "new_unique_users", "node_metrics", "project", "rank_top_k",
    "role_persistence", "trajectory", "window",
]
