"""High-level decompositions of the digraph: bow-tie and the A/B/C/D skeleton.

The bow-tie splits nodes around a core strongly connected component into
upstream, downstream, tube, tendril, and disconnected classes.  The four-way
skeleton is coarser and fits question/answer communities better: a strongly
connected core A, pure receivers B, pure senders C, and a mixed periphery D
(which also absorbs isolates).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .graph import MentionGraph

BOWTIE_LABELS = ("SCC", "IN", "OUT", "TUBES", "INTENDRILS", "OUTTENDRILS", "OTHERS")
SKELETON_LABELS = ("A", "B", "C", "D")


@dataclass(frozen=True)
class BowTiePartition:
    """Exhaustive, disjoint labeling; ``core`` is the chosen central SCC."""

    label: dict[str, str]
    core: frozenset[str]

    def members(self, name: str) -> frozenset[str]:
        return frozenset(n for n, lab in self.label.items() if lab == name)

    def sizes(self) -> dict[str, int]:
        out = {name: 0 for name in BOWTIE_LABELS}
        for lab in self.label.values():
            out[lab] += 1
        return out


@dataclass(frozen=True)
class SkeletonPartition:
    label: dict[str, str]

    def members(self, name: str) -> frozenset[str]:
        return frozenset(n for n, lab in self.label.items() if lab == name)

    def sizes(self) -> dict[str, int]:
        out = {name: 0 for name in SKELETON_LABELS}
        for lab in self.label.values():
            out[lab] += 1
        return out


@dataclass(frozen=True)
class LinkMatrix:
    """Edge counts between skeleton components, indexed in A,B,C,D order."""

    counts: tuple[tuple[float, ...], ...]
    weighted: bool
    order: tuple[str, ...] = field(default=SKELETON_LABELS)

    @property
    def total(self):
        return sum(sum(row) for row in self.counts)


def _scc_ids(n: int, neighbors) -> tuple[list[int], int]:
    # Iterative Tarjan; component ids come out in reverse topological order.
    UNSEEN = -1
    index = [UNSEEN] * n
    low = [0] * n
    on_stack = [False] * n
    comp = [UNSEEN] * n
    stack: list[int] = []
    counter = 0
    ncomp = 0
    for root in range(n):
        if index[root] != UNSEEN:
            continue
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        work = [(root, iter(sorted(neighbors(root))))]
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if index[w] == UNSEEN:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, iter(sorted(neighbors(w)))))
                    advanced = True
                    break
                if on_stack[w] and index[w] < low[v]:
                    low[v] = index[w]
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                if low[v] < low[parent]:
                    low[parent] = low[v]
            if low[v] == index[v]:
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp[w] = ncomp
                    if w == v:
                        break
                ncomp += 1
    return comp, ncomp


def strongly_connected_components(g: MentionGraph) -> list[frozenset[str]]:
    """Maximal SCCs (singletons included), largest first, then by member."""
    comp, ncomp = _scc_ids(g.node_count, g.out_neighbors)
    groups: list[list[str]] = [[] for _ in range(ncomp)]
    for v, c in enumerate(comp):
        groups[c].append(g.nicks[v])
    result = [frozenset(grp) for grp in groups]
    result.sort(key=lambda s: (-len(s), min(s)))
    return result


def _core_ids(g: MentionGraph) -> set[int]:
    # Largest SCC; ties go to the component holding the smallest nick, and
    # node ids follow nick order, so min-id decides.
    comp, ncomp = _scc_ids(g.node_count, g.out_neighbors)
    groups: list[list[int]] = [[] for _ in range(ncomp)]
    for v, c in enumerate(comp):
        groups[c].append(v)
    best = max(groups, key=lambda grp: (len(grp), -min(grp)))
    return set(best)


def _reach(seeds: set[int], neighbors) -> set[int]:
    seen = set(seeds)
    frontier = list(seeds)
    while frontier:
        v = frontier.pop()
        for w in neighbors(v):
            if w not in seen:
                seen.add(w)
                frontier.append(w)
    return seen


def bowtie(g: MentionGraph) -> BowTiePartition:
    """Label every node per the bow-tie set definitions.

    Classes are assigned in priority order core, IN, OUT, TUBES, in-tendrils,
    out-tendrils, OTHERS, so the labeling is an exhaustive partition.
    """
    n = g.node_count
    if n == 0:
        return BowTiePartition({}, frozenset())
    core = _core_ids(g)
    reach_from_core = _reach(core, g.out_neighbors)
    reach_to_core = _reach(core, g.in_neighbors)
    label: dict[int, str] = {}
    in_ids, out_ids = set(), set()
    for v in range(n):
        if v in core:
            label[v] = "SCC"
        elif v in reach_to_core:
            label[v] = "IN"
            in_ids.add(v)
        elif v in reach_from_core:
            label[v] = "OUT"
            out_ids.add(v)
    reach_from_in = _reach(in_ids, g.out_neighbors) if in_ids else set()
    reach_to_out = _reach(out_ids, g.in_neighbors) if out_ids else set()
    for v in range(n):
        if v in label:
            continue
        from_in = v in reach_from_in
        to_out = v in reach_to_out
        if from_in and to_out:
            label[v] = "TUBES"
        elif from_in:
            label[v] = "INTENDRILS"
        elif to_out:
            label[v] = "OUTTENDRILS"
        else:
            label[v] = "OTHERS"
    return BowTiePartition(
        {g.nicks[v]: lab for v, lab in label.items()},
        frozenset(g.nicks[v] for v in core),
    )


def abcd_skeleton(g: MentionGraph) -> SkeletonPartition:
    """Four-way split: core A, pure receivers B, pure senders C, the rest D.

    Degrees are taken on the whole graph; pure senders have no incoming tie
    at all (which forces zero links inside C) and pure receivers none
    outgoing.  Isolates fall to D.
    """
    n = g.node_count
    if n == 0:
        return SkeletonPartition({})
    core = _core_ids(g)
    label: dict[str, str] = {}
    for v in range(n):
        nick = g.nicks[v]
        if v in core:
            label[nick] = "A"
            continue
        indeg = len(g.in_neighbors(v))
        outdeg = len(g.out_neighbors(v))
        if indeg == 0 and outdeg > 0:
            label[nick] = "C"
        elif outdeg == 0 and indeg > 0:
            label[nick] = "B"
        else:
            label[nick] = "D"
    return SkeletonPartition(label)


def link_matrix(g: MentionGraph, p: SkeletonPartition, weighted: bool = False) -> LinkMatrix:
    """Per-pair tie counts between skeleton components (diagonal = internal)."""
    position = {name: i for i, name in enumerate(SKELETON_LABELS)}
    cells = [[0.0] * len(SKELETON_LABELS) for _ in SKELETON_LABELS]
    for nick in g.nicks:
        if nick not in p.label:
            raise ValueError(f"node '{nick}' has no skeleton label")
    for u, v, w in g.edges():
        i = position[p.label[g.nicks[u]]]
        j = position[p.label[g.nicks[v]]]
        cells[i][j] += w if weighted else 1
    normalized = tuple(
        tuple(int(x) if float(x).is_integer() else float(x) for x in row)
        for row in cells
    )
    return LinkMatrix(normalized, weighted)
