"""Vulnerability analysis of the undirected view: articulation points and
blocks, pairwise edge connectivity, the all-pairs cut tree, lambda sets, and
the top links by information flow.

Edge connectivity is exact max-flow = min-cut with integer capacities; the
cut tree uses Gusfield's construction (n-1 max-flows, no contraction), so a
single tree answers every pairwise query by a path minimum.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import breadth_first_order, maximum_flow

from .graph import UndirectedView

MODES = ("unit", "weighted")


@dataclass(frozen=True)
class BlockReport:
    """Biconnected components and the cutpoints that join them."""

    cutpoints: frozenset[str]
    blocks: tuple[frozenset[str], ...]
    largest_block_size: int

    @property
    def block_count(self) -> int:
        return len(self.blocks)


@dataclass(frozen=True)
class GomoryHuTree:
    """Cut tree: the min over an a-b tree path equals edge connectivity a-b.

    ``parent`` is None for each component root; disconnected inputs yield a
    forest and cross-component connectivity is 0.
    """

    nicks: tuple[str, ...]
    parent: dict[str, str | None]
    capacity: dict[str, float]
    depth: dict[str, int]
    mode: str

    @property
    def edges(self) -> tuple[tuple[str, str, float], ...]:
        return tuple(
            (child, par, self.capacity[child])
            for child, par in sorted(self.parent.items())
            if par is not None
        )

    def lambda_between(self, a: str, b: str) -> float:
        if a == b:
            raise ValueError("endpoints must differ")
        x, y = a, b
        best = float("inf")
        while x != y:
            if self.depth[x] < self.depth[y]:
                x, y = y, x
            up = self.parent[x]
            if up is None:
                return 0.0
            best = min(best, self.capacity[x])
            x = up
        return float(best)


@dataclass(frozen=True)
class LambdaHierarchy:
    """Laminar family of maximal high-connectivity sets, per lambda value.

    ``levels`` pairs each distinct connectivity value (descending) with the
    node sets whose internal connectivity reaches it; every set at a higher
    value nests inside exactly one set at each lower value.
    """

    levels: tuple[tuple[float, tuple[frozenset[str], ...]], ...]

    def all_sets(self) -> list[frozenset[str]]:
        seen = []
        for _, sets in self.levels:
            for s in sets:
                if s not in seen:
                    seen.append(s)
        return seen


def articulation_points_and_blocks(u: UndirectedView) -> BlockReport:
    """Single depth-first sweep with low-point computation.

    Every edge lands in exactly one block; isolated nodes form singleton
    blocks of their own.
    """
    n = u.node_count
    disc = [-1] * n
    low = [0] * n
    parent = [-1] * n
    cutpoints: set[int] = set()
    blocks: list[frozenset[int]] = []
    edge_stack: list[tuple[int, int]] = []
    timer = 0
    for root in range(n):
        if disc[root] != -1:
            continue
        if u.degree(root) == 0:
            disc[root] = timer
            timer += 1
            blocks.append(frozenset((root,)))
            continue
        root_children = 0
        disc[root] = low[root] = timer
        timer += 1
        work = [(root, iter(sorted(u.neighbors(root))))]
        while work:
            v, neighbors = work[-1]
            advanced = False
            for w in neighbors:
                if disc[w] == -1:
                    edge_stack.append((v, w))
                    parent[w] = v
                    disc[w] = low[w] = timer
                    timer += 1
                    if v == root:
                        root_children += 1
                    work.append((w, iter(sorted(u.neighbors(w)))))
                    advanced = True
                    break
                if w != parent[v] and disc[w] < disc[v]:
                    # back edge, seen from the descendant side only
                    edge_stack.append((v, w))
                    if disc[w] < low[v]:
                        low[v] = disc[w]
            if advanced:
                continue
            work.pop()
            if not work:
                continue
            above = work[-1][0]
            if low[v] >= disc[above]:
                members = set()
                while True:
                    x, y = edge_stack.pop()
                    members.add(x)
                    members.add(y)
                    if (x, y) == (above, v):
                        break
                blocks.append(frozenset(members))
                if above != root or root_children > 1:
                    cutpoints.add(above)
            if low[v] < low[above]:
                low[above] = low[v]
    named = [frozenset(u.nicks[v] for v in b) for b in blocks]
    named.sort(key=lambda b: (-len(b), tuple(sorted(b))))
    return BlockReport(
        cutpoints=frozenset(u.nicks[v] for v in cutpoints),
        blocks=tuple(named),
        largest_block_size=max((len(b) for b in named), default=0),
    )


def _check_mode(mode: str) -> None:
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")


def _int_capacity(w) -> int:
    if not float(w).is_integer():
        raise ValueError(
            f"weighted connectivity requires integral edge weights, got {w!r}"
        )
    return int(w)


def _capacity_csr(u: UndirectedView, nodes: list[int], mode: str) -> csr_matrix:
    # Two directed arcs per undirected edge, equal capacities.
    local = {g: i for i, g in enumerate(nodes)}
    rows, cols, data = [], [], []
    for g in nodes:
        for h, w in sorted(u.neighbors(g).items()):
            if h in local:
                rows.append(local[g])
                cols.append(local[h])
                data.append(1 if mode == "unit" else _int_capacity(w))
    k = len(nodes)
    return csr_matrix((data, (rows, cols)), shape=(k, k), dtype=np.int64)


def _source_side(caps: csr_matrix, flow: csr_matrix, source: int) -> np.ndarray:
    # Nodes reachable from the source through positive residual capacity;
    # this is the source side of a minimum cut once the flow is maximal.
    residual = csr_matrix(
        (caps.data - flow.data, caps.indices.copy(), caps.indptr.copy()),
        shape=caps.shape,
    )
    residual.eliminate_zeros()
    reached = breadth_first_order(
        residual, source, directed=True, return_predecessors=False
    )
    side = np.zeros(caps.shape[0], dtype=bool)
    side[reached] = True
    return side


def _components(u: UndirectedView) -> list[list[int]]:
    n = u.node_count
    seen = [False] * n
    components = []
    for start in range(n):
        if seen[start]:
            continue
        seen[start] = True
        comp = [start]
        frontier = [start]
        while frontier:
            v = frontier.pop()
            for w in u.neighbors(v):
                if not seen[w]:
                    seen[w] = True
                    comp.append(w)
                    frontier.append(w)
        components.append(sorted(comp))
    return components


def edge_connectivity(u: UndirectedView, a: str, b: str, mode: str = "unit") -> float:
    """Exact max-flow = min-cut between two nodes; 0 for disconnected pairs."""
    _check_mode(mode)
    if a == b:
        raise ValueError("endpoints must differ")
    ia, ib = u.id_of(a), u.id_of(b)
    if u.edge_count == 0:
        return 0.0
    nodes = list(range(u.node_count))
    caps = _capacity_csr(u, nodes, mode)
    return float(maximum_flow(caps, ia, ib).flow_value)


def gomory_hu(u: UndirectedView, mode: str = "unit") -> GomoryHuTree:
    """Gusfield cut tree per connected component (n-1 max-flows each)."""
    _check_mode(mode)
    parent: dict[str, str | None] = {}
    capacity: dict[str, float] = {}
    for comp in _components(u):
        k = len(comp)
        root = comp[0]
        parent[u.nicks[root]] = None
        if k == 1:
            continue
        caps = _capacity_csr(u, comp, mode)
        tree = [0] * k  # local parent indices; local 0 is the component root
        flow_val = [0] * k
        for i in range(1, k):
            t = tree[i]
            result = maximum_flow(caps, i, t)
            side = _source_side(caps, result.flow, i)
            for j in range(k):
                if j != i and tree[j] == t and side[j]:
                    tree[j] = i
            if t != 0 and side[tree[t]]:
                # i separates t from t's parent: swap their tree positions
                tree[i] = tree[t]
                tree[t] = i
                flow_val[i] = flow_val[t]
                flow_val[t] = int(result.flow_value)
            else:
                flow_val[i] = int(result.flow_value)
        for i in range(1, k):
            parent[u.nicks[comp[i]]] = u.nicks[comp[tree[i]]]
            capacity[u.nicks[comp[i]]] = flow_val[i]
    depth: dict[str, int] = {}

    def _depth(nick: str) -> int:
        trail = []
        x = nick
        while x not in depth:
            up = parent[x]
            if up is None:
                depth[x] = 0
                break
            trail.append(x)
            x = up
        for x in reversed(trail):
            depth[x] = depth[parent[x]] + 1
        return depth[nick]

    for nick in u.nicks:
        _depth(nick)
    return GomoryHuTree(u.nicks, parent, capacity, depth, mode)


class _DisjointSets:
    def __init__(self, n: int):
        self.up = list(range(n))

    def find(self, x: int) -> int:
        while self.up[x] != x:
            self.up[x] = self.up[self.up[x]]
            x = self.up[x]
        return x

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.up[max(ra, rb)] = min(ra, rb)


def lambda_sets(u: UndirectedView, mode: str = "unit") -> LambdaHierarchy:
    """Node sets more tightly connected internally than to the outside.

    At each distinct cut-tree value (descending) the components of the tree
    restricted to edges at or above that value are the maximal sets; the
    family is laminar by construction.
    """
    tree = gomory_hu(u, mode)
    by_value: dict[float, list[tuple[int, int]]] = {}
    for child, par, cap in tree.edges:
        by_value.setdefault(cap, []).append((u.id_of(child), u.id_of(par)))
    if not by_value:
        return LambdaHierarchy(())
    dsu = _DisjointSets(u.node_count)
    levels = []
    for value in sorted(by_value, reverse=True):
        for a, b in by_value[value]:
            dsu.union(a, b)
        groups: dict[int, list[str]] = {}
        for v in range(u.node_count):
            groups.setdefault(dsu.find(v), []).append(u.nicks[v])
        sets = [frozenset(g) for g in groups.values() if len(g) >= 2]
        sets.sort(key=lambda s: (-len(s), min(s)))
        levels.append((float(value), tuple(sets)))
    return LambdaHierarchy(tuple(levels))


def top_links(u: UndirectedView, k: int) -> list[tuple[tuple[str, str], float]]:
    """Rank edges by the weighted edge connectivity of their endpoints.

    Descending by score, ties by edge weight then by nick pair; asking for
    more links than exist returns them all.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    queries = [
        (u.nicks[a], u.nicks[b], w) for a, b, w in u.edges()
    ]
    if not queries:
        return []
    tree = gomory_hu(u, "weighted")
    by_value: dict[float, list[tuple[int, int]]] = {}
    for child, par, cap in tree.edges:
        by_value.setdefault(cap, []).append((u.id_of(child), u.id_of(par)))
    dsu = _DisjointSets(u.node_count)
    scores = [0.0] * len(queries)
    remaining = list(range(len(queries)))
    for value in sorted(by_value, reverse=True):
        for a, b in by_value[value]:
            dsu.union(a, b)
        still = []
        for qi in remaining:
            a, b, _ = queries[qi]
            if dsu.find(u.id_of(a)) == dsu.find(u.id_of(b)):
                scores[qi] = float(value)
            else:
                still.append(qi)
        remaining = still
    order = sorted(
        range(len(queries)),
        key=lambda qi: (-scores[qi], -queries[qi][2], (queries[qi][0], queries[qi][1])),
    )
    return [((queries[qi][0], queries[qi][1]), scores[qi]) for qi in order[:k]]
