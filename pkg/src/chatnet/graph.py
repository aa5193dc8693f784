"""Directed weighted mention graph, its undirected view, and CSV serialization.

Nodes are canonical (case-folded) nicks.  Node ids are indices into the
lexicographically sorted nick tuple, which makes iteration order, tie
breaking, and serialized output stable for a given edge set.
"""

from __future__ import annotations

import csv
import io
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping

from .ingest import USER_MESSAGE, ChatCorpus, Roster

# Characters legal in IRC nicks; anything else is a token boundary when
# scanning message bodies for mentions.
_TOKEN_RE = re.compile(r"[0-9A-Za-z\[\]\\`_^{|}-]+")


@dataclass(frozen=True)
class ExtractionOptions:
    """Knobs for mention detection.

    min_nick_length guards against nicks that collide with short everyday
    words and would flood the graph with false ties.  With
    case_insensitive=False a mention must match the canonical (case-folded)
    nick exactly.
    """

    min_nick_length: int = 3
    case_insensitive: bool = True


class MentionGraph:
    """Directed weighted graph of who addresses whom."""

    __slots__ = ("nicks", "_index", "_out", "_in", "_m")

    def __init__(self, nicks: Iterable[str], edges: Mapping[tuple[str, str], float]):
        names = sorted(set(nicks))
        self.nicks: tuple[str, ...] = tuple(names)
        self._index = {nick: i for i, nick in enumerate(self.nicks)}
        self._out: list[dict[int, float]] = [{} for _ in self.nicks]
        self._in: list[dict[int, float]] = [{} for _ in self.nicks]
        for (src, dst), weight in sorted(edges.items()):
            if src not in self._index:
                raise ValueError(f"edge endpoint '{src}' not in node set")
            if dst not in self._index:
                raise ValueError(f"edge endpoint '{dst}' not in node set")
            if src == dst:
                raise ValueError(f"self-loop on '{src}' is not allowed")
            if not weight > 0:
                raise ValueError(f"edge {src}->{dst} has non-positive weight {weight!r}")
            u, v = self._index[src], self._index[dst]
            self._out[u][v] = weight
            self._in[v][u] = weight
        self._m = len(edges)

    @classmethod
    def from_edge_list(
        cls,
        triples: Iterable[tuple[str, str, float]],
        extra_nodes: Iterable[str] = (),
    ) -> "MentionGraph":
        """Build from (source, target, weight) triples; duplicate pairs sum."""
        weights: dict[tuple[str, str], float] = {}
        nodes = set(extra_nodes)
        for src, dst, weight in triples:
            nodes.add(src)
            nodes.add(dst)
            key = (src, dst)
            weights[key] = weights.get(key, 0) + weight
        return cls(nodes, weights)

    @property
    def node_count(self) -> int:
        return len(self.nicks)

    @property
    def edge_count(self) -> int:
        return self._m

    def __contains__(self, nick: str) -> bool:
        return nick in self._index

    def id_of(self, nick: str) -> int:
        try:
            return self._index[nick]
        except KeyError:
            raise KeyError(f"unknown node '{nick}'") from None

    def nick_of(self, node: int) -> str:
        return self.nicks[node]

    def out_neighbors(self, node: int) -> Mapping[int, float]:
        return self._out[node]

    def in_neighbors(self, node: int) -> Mapping[int, float]:
        return self._in[node]

    def weight(self, u: int, v: int) -> float:
        return self._out[u].get(v, 0)

    def edges(self):
        """Yield (u, v, weight) with ids ascending; id order is nick order."""
        for u in range(len(self.nicks)):
            for v in sorted(self._out[u]):
                yield u, v, self._out[u][v]

    def edges_by_nick(self):
        for u, v, w in self.edges():
            yield self.nicks[u], self.nicks[v], w

    def subgraph(self, nodes: Iterable[int]) -> "MentionGraph":
        keep = set(nodes)
        edges = {
            (self.nicks[u], self.nicks[v]): w
            for u, v, w in self.edges()
            if u in keep and v in keep
        }
        return MentionGraph((self.nicks[v] for v in keep), edges)

    def __eq__(self, other) -> bool:
        if not isinstance(other, MentionGraph):
            return NotImplemented
        return self.nicks == other.nicks and self._out == other._out

    def __repr__(self) -> str:
        return f"MentionGraph(nodes={self.node_count}, edges={self.edge_count})"


class UndirectedView:
    """Symmetric view of a mention graph; weight(u,v) = w(u->v) + w(v->u).

    Clique, block, and connectivity analyses are defined on undirected
    structure, so they consume this view rather than the digraph.
    """

    __slots__ = ("nicks", "_index", "_adj", "_m")

    def __init__(self, nicks: Iterable[str], pair_weights: Mapping[tuple[int, int], float]):
        self.nicks = tuple(nicks)
        self._index = {nick: i for i, nick in enumerate(self.nicks)}
        self._adj: list[dict[int, float]] = [{} for _ in self.nicks]
        for (u, v), weight in pair_weights.items():
            if u == v:
                raise ValueError("self-loop in undirected view")
            self._adj[u][v] = weight
            self._adj[v][u] = weight
        self._m = len(pair_weights)

    @classmethod
    def from_edge_list(
        cls,
        triples: Iterable[tuple[str, str, float]],
        extra_nodes: Iterable[str] = (),
    ) -> "UndirectedView":
        """Build a standalone undirected graph; duplicate/reversed pairs sum."""
        nodes = set(extra_nodes)
        raw: dict[tuple[str, str], float] = {}
        for a, b, w in triples:
            nodes.add(a)
            nodes.add(b)
            key = (a, b) if a <= b else (b, a)
            raw[key] = raw.get(key, 0) + w
        nicks = tuple(sorted(nodes))
        index = {nick: i for i, nick in enumerate(nicks)}
        pairs = {}
        for (a, b), w in raw.items():
            u, v = index[a], index[b]
            pairs[(min(u, v), max(u, v))] = w
        return cls(nicks, pairs)

    @property
    def node_count(self) -> int:
        return len(self.nicks)

    @property
    def edge_count(self) -> int:
        return self._m

    def id_of(self, nick: str) -> int:
        try:
            return self._index[nick]
        except KeyError:
            raise KeyError(f"unknown node '{nick}'") from None

    def nick_of(self, node: int) -> str:
        return self.nicks[node]

    def neighbors(self, node: int) -> Mapping[int, float]:
        return self._adj[node]

    def degree(self, node: int) -> int:
        return len(self._adj[node])

    def weight(self, u: int, v: int) -> float:
        return self._adj[u].get(v, 0)

    def edges(self):
        """Yield (u, v, weight) with u < v, ascending."""
        for u in range(len(self.nicks)):
            for v in sorted(self._adj[u]):
                if u < v:
                    yield u, v, self._adj[u][v]

    def __repr__(self) -> str:
        return f"UndirectedView(nodes={self.node_count}, edges={self.edge_count})"


@dataclass(frozen=True)
class GraphStats:
    node_count: int
    edge_count: int
    density: float
    indegree_min: int
    indegree_mean: float
    indegree_max: int
    outdegree_min: int
    outdegree_mean: float
    outdegree_max: int


def extract_network(
    corpus: ChatCorpus,
    roster: Roster,
    options: ExtractionOptions | None = None,
) -> MentionGraph:
    """Build the directed weighted mention network from a parsed corpus.

    Every whole-token occurrence of a roster nick in a user message adds
    weight 1 to the sender->nick edge; repeated mentions of the same nick
    within one message count once, and self-mentions are ignored.  Nodes are
    the users incident to at least one tie.
    """
    if not roster.counts:
        raise ValueError("no participants")
    opts = options or ExtractionOptions()
    matchable = frozenset(
        nick for nick in roster.counts if len(nick) >= opts.min_nick_length
    )
    weights: dict[tuple[str, str], int] = {}
    for msg in corpus.messages:
        if msg.kind != USER_MESSAGE:
            continue
        sender = msg.nick.casefold()
        if sender not in roster.counts:
            continue
        mentioned = set()
        for token in _TOKEN_RE.findall(msg.body):
            key = token.casefold() if opts.case_insensitive else token
            if key in matchable and key != sender:
                mentioned.add(key)
        for target in mentioned:
            key = (sender, target)
            weights[key] = weights.get(key, 0) + 1
    nodes = {endpoint for pair in weights for endpoint in pair}
    return MentionGraph(nodes, weights)


def stats(g: MentionGraph) -> GraphStats:
    """Node/edge counts, directed density, and degree summaries."""
    n, m = g.node_count, g.edge_count
    indeg = [len(g.in_neighbors(v)) for v in range(n)]
    outdeg = [len(g.out_neighbors(v)) for v in range(n)]
    return GraphStats(
        node_count=n,
        edge_count=m,
        density=m / (n * (n - 1)) if n > 1 else 0.0,
        indegree_min=min(indeg, default=0),
        indegree_mean=m / n if n else 0.0,
        indegree_max=max(indeg, default=0),
        outdegree_min=min(outdeg, default=0),
        outdegree_mean=m / n if n else 0.0,
        outdegree_max=max(outdeg, default=0),
    )


def to_undirected(g: MentionGraph) -> UndirectedView:
    """Symmetrize with summed weights; the node set is unchanged."""
    pairs: dict[tuple[int, int], float] = {}
    for u, v, w in g.edges():
        key = (min(u, v), max(u, v))
        pairs[key] = pairs.get(key, 0) + w
    return UndirectedView(g.nicks, pairs)


def mutual_ties_view(g: MentionGraph) -> UndirectedView:
    """Stricter view keeping only reciprocated ties, weights summed.

    An undirected edge exists iff both directed edges do; useful as a
    conservative basis for clique analysis.
    """
    pairs: dict[tuple[int, int], float] = {}
    for u, v, w in g.edges():
        if u < v and g.weight(v, u) > 0:
            pairs[(u, v)] = w + g.weight(v, u)
    return UndirectedView(g.nicks, pairs)


def format_weight(w) -> str:
    return str(int(w)) if float(w).is_integer() else repr(float(w))


def graph_csv_text(g: MentionGraph) -> str:
    """Canonical edge-list CSV: header row, nick-sorted edges."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["source", "target", "weight"])
    for src, dst, w in g.edges_by_nick():
        writer.writerow([src, dst, format_weight(w)])
    return buf.getvalue()


def write_graph_csv(g: MentionGraph, path) -> None:
    Path(path).write_text(graph_csv_text(g), encoding="utf-8")


def read_graph_csv(path) -> MentionGraph:
    """Load an edge-list CSV written by ``write_graph_csv``.

    The edge list carries nodes with at least one tie; that is exactly what
    extraction produces, so export/import round-trips.
    """
    weights: dict[tuple[str, str], float] = {}
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != ["source", "target", "weight"]:
            raise ValueError(f"{path}: expected header source,target,weight")
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 3:
                raise ValueError(f"{path}:{lineno}: expected 3 columns")
            src, dst, raw = row
            try:
                weight = int(raw) if re.fullmatch(r"-?\d+", raw) else float(raw)
            except ValueError as exc:
                raise ValueError(f"{path}:{lineno}: bad weight {raw!r}") from exc
            if (src, dst) in weights:
                raise ValueError(f"{path}:{lineno}: duplicate edge {src}->{dst}")
            weights[(src, dst)] = weight
    nodes = {endpoint for pair in weights for endpoint in pair}
    return MentionGraph(nodes, weights)
