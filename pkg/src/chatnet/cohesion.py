"""Cohesive substructure: maximal cliques, clique overlap, ego networks."""

from __future__ import annotations

import heapq
from dataclasses import dataclass

from .graph import MentionGraph, UndirectedView


@dataclass(frozen=True)
class CliqueReport:
    """Maximal cliques of size >= min_size, largest first then by members."""

    cliques: tuple[tuple[str, ...], ...]
    min_size: int
    max_clique_size: int

    @property
    def count(self) -> int:
        return len(self.cliques)


@dataclass(frozen=True)
class CoMembershipMatrix:
    """Symmetric pair -> number of shared cliques; diagonal = memberships.

    Only pairs that actually co-occur are stored; ``count`` answers 0 for the
    rest.  ``max_pair`` is the strongest off-diagonal pair, smallest pair
    first on ties, or None when no clique has two members.
    """

    pair_counts: dict[tuple[str, str], int]
    diagonal: dict[str, int]
    max_pair: tuple[tuple[str, str], int] | None

    def count(self, a: str, b: str) -> int:
        if a == b:
            return self.diagonal.get(a, 0)
        key = (a, b) if a <= b else (b, a)
        return self.pair_counts.get(key, 0)


@dataclass(frozen=True)
class EgoNetwork:
    """An actor, every one-step neighbor, and all ties among them."""

    ego: str
    alters: frozenset[str]
    graph: MentionGraph
    size: int
    density: float


def _degeneracy_order(u: UndirectedView) -> list[int]:
    # Repeatedly peel the minimum-degree vertex (smallest id on ties); keeps
    # candidate sets small on sparse community graphs.
    n = u.node_count
    degree = [u.degree(v) for v in range(n)]
    removed = [False] * n
    heap = [(degree[v], v) for v in range(n)]
    heapq.heapify(heap)
    order = []
    while heap:
        d, v = heapq.heappop(heap)
        if removed[v] or d != degree[v]:
            continue
        removed[v] = True
        order.append(v)
        for w in u.neighbors(v):
            if not removed[w]:
                degree[w] -= 1
                heapq.heappush(heap, (degree[w], w))
    return order


def maximal_cliques(u: UndirectedView, min_size: int = 3) -> CliqueReport:
    """Enumerate maximal cliques by pivoting branch and bound.

    The outer loop runs in degeneracy order so each maximal clique is emitted
    exactly once; output order is canonical regardless of input order.
    """
    if min_size < 1:
        raise ValueError("min_size must be at least 1")
    n = u.node_count
    nbr = [frozenset(u.neighbors(v)) for v in range(n)]
    found: list[tuple[int, ...]] = []

    def expand(clique: list[int], cand: set[int], excl: set[int]) -> None:
        if not cand and not excl:
            found.append(tuple(clique))
            return
        pivot = min(cand | excl, key=lambda c: (-len(cand & nbr[c]), c))
        for v in sorted(cand - nbr[pivot]):
            clique.append(v)
            expand(clique, cand & nbr[v], excl & nbr[v])
            clique.pop()
            cand.discard(v)
            excl.add(v)

    order = _degeneracy_order(u)
    rank = {v: i for i, v in enumerate(order)}
    for v in order:
        later = {w for w in nbr[v] if rank[w] > rank[v]}
        earlier = {w for w in nbr[v] if rank[w] < rank[v]}
        expand([v], later, earlier)

    kept = [tuple(sorted(c)) for c in found if len(c) >= min_size]
    kept.sort(key=lambda c: (-len(c), tuple(u.nicks[v] for v in c)))
    cliques = tuple(tuple(u.nicks[v] for v in c) for c in kept)
    max_size = max((len(c) for c in cliques), default=0)
    return CliqueReport(cliques, min_size, max_size)


def clique_comembership(report: CliqueReport, nodes) -> CoMembershipMatrix:
    """Tally, for every actor pair, how many listed cliques hold both."""
    universe = set(nodes)
    pair_counts: dict[tuple[str, str], int] = {}
    diagonal: dict[str, int] = {}
    for clique in report.cliques:
        if not set(clique) <= universe:
            stray = sorted(set(clique) - universe)[0]
            raise ValueError(f"clique member '{stray}' outside the node set")
        members = sorted(clique)
        for i, a in enumerate(members):
            diagonal[a] = diagonal.get(a, 0) + 1
            for b in members[i + 1:]:
                pair_counts[(a, b)] = pair_counts.get((a, b), 0) + 1
    max_pair = None
    if pair_counts:
        best = min(pair_counts.items(), key=lambda item: (-item[1], item[0]))
        max_pair = (best[0], best[1])
    return CoMembershipMatrix(pair_counts, diagonal, max_pair)


def clique_participation(
    report: CliqueReport, u: UndirectedView
) -> dict[tuple[str, int], float]:
    """Fraction of each clique's other members a node is adjacent to.

    Members score 1 by completeness; a lone-member clique also scores 1 for
    its member.
    """
    scores: dict[tuple[str, int], float] = {}
    clique_ids = [[u.id_of(nick) for nick in clique] for clique in report.cliques]
    for v in range(u.node_count):
        nick = u.nicks[v]
        adjacent = set(u.neighbors(v))
        for idx, members in enumerate(clique_ids):
            if v in members:
                scores[(nick, idx)] = 1.0
                continue
            others = [q for q in members if q != v]
            hit = sum(1 for q in others if q in adjacent)
            scores[(nick, idx)] = hit / len(others)
    return scores


def ego_network(g: MentionGraph, ego: str) -> EgoNetwork:
    """Induced subgraph on an actor plus all in/out neighbors."""
    try:
        center = g.id_of(ego)
    except KeyError:
        raise ValueError(f"unknown ego '{ego}'") from None
    alters = set(g.out_neighbors(center)) | set(g.in_neighbors(center))
    members = alters | {center}
    sub = g.subgraph(members)
    k = sub.node_count
    density = sub.edge_count / (k * (k - 1)) if k > 1 else 0.0
    return EgoNetwork(
        ego=ego,
        alters=frozenset(g.nicks[v] for v in alters),
        graph=sub,
        size=k,
        density=density,
    )
