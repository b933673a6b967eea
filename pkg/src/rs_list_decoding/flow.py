"""
A small augmenting-path max-flow solver for unit-capacity networks.
"""

from collections import deque
from typing import List, Optional


class Edge:
    src: int
    dst: int
    cap: int
    flow: int
    reverse: "Edge"

    def __init__(self, src: int, dst: int, cap: int):
        self.src = src
        self.dst = dst
        self.cap = cap
        self.flow = 0

    @property
    def residual(self) -> int:
        return self.cap - self.flow


class FlowNetwork:
    adj: List[List[Edge]]
    edges: List[Edge]

    def __init__(self, size: int = 0):
        self.adj = [[] for _ in range(size)]
        self.edges = []

    def __len__(self) -> int:
        return len(self.adj)

    def add_vertex(self) -> int:
        self.adj.append([])
        return len(self.adj) - 1

    def add_edge(self, src: int, dst: int, cap: int = 1):
        edge = Edge(src, dst, cap)
        rev_edge = Edge(dst, src, 0)
        edge.reverse = rev_edge
        rev_edge.reverse = edge
        self.adj[src].append(edge)
        self.adj[dst].append(rev_edge)
        self.edges.append(edge)
        self.edges.append(rev_edge)

    def reset(self):
        for edge in self.edges:
            edge.flow = 0

    def augmenting_path(self, source: int, sink: int) -> Optional[List[Edge]]:
        # BFS over the residual graph; the path is returned sink-first
        parent: List[Optional[Edge]] = [None] * len(self.adj)
        seen = [False] * len(self.adj)
        seen[source] = True
        queue = deque([source])
        while queue:
            v = queue.popleft()
            for edge in self.adj[v]:
                if edge.residual > 0 and not seen[edge.dst]:
                    seen[edge.dst] = True
                    parent[edge.dst] = edge
                    if edge.dst == sink:
                        path = []
                        cur = sink
                        while cur != source:
                            e = parent[cur]
                            assert e is not None
                            path.append(e)
                            cur = e.src
                        return path
                    queue.append(edge.dst)
        return None

    def max_flow(self, source: int, sink: int, limit: Optional[int] = None) -> int:
        """Maximum flow value, or ``limit`` as soon as that much flow is found."""
        self.reset()
        if source == sink:
            return limit if limit is not None else 0
        total = 0
        while limit is None or total < limit:
            path = self.augmenting_path(source, sink)
            if path is None:
                break
            amount = min(edge.residual for edge in path)
            for edge in path:
                edge.flow += amount
                edge.reverse.flow -= amount
            total += amount
        return total


__all__ = ["Edge", "FlowNetwork"]
