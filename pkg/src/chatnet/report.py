"""Pipeline orchestration, the consolidated analysis report, and graph export.

A report is assembled section by section in a fixed order from a validated
configuration, so the same inputs and configuration always serialize to the
same bytes, independent of thread count.
"""

from __future__ import annotations

import json
import xml.etree.ElementTree as ET
from dataclasses import dataclass, fields, replace
from importlib import resources
from pathlib import Path
from typing import Mapping

from . import __version__
from .centrality import hits, ranked
from .cohesion import clique_comembership, maximal_cliques
from .connectivity import articulation_points_and_blocks, lambda_sets, top_links
from .equivalence import classify_roles, high_eq_tie_fraction, rege
from .graph import (
    ExtractionOptions,
    MentionGraph,
    extract_network,
    format_weight,
    graph_csv_text,
    read_graph_csv,
    stats,
    to_undirected,
)
from .ingest import (
    build_roster,
    discover_log_files,
    parse_corpus,
    read_corpus_jsonl,
    read_manifest,
    read_roster_file,
)
from .skeleton import (
    BOWTIE_LABELS,
    SKELETON_LABELS,
    abcd_skeleton,
    bowtie,
    link_matrix,
)

ALL_ANALYSES = (
    "stats",
    "hits",
    "bowtie",
    "skeleton",
    "cliques",
    "blocks",
    "lambda",
    "roles",
)

EXPORT_FORMATS = ("dot", "graphml", "csv")


class PipelineError(Exception):
    """Failure in a named pipeline stage; no partial report is emitted."""

    def __init__(self, stage: str, message: str):
        super().__init__(f"{stage}: {message}")
        self.stage = stage


@dataclass(frozen=True)
class AnalysisConfig:
    """Inputs plus every algorithm parameter the report depends on.

    Exactly one of ``log_paths``/``manifest_path``, ``corpus_path``, or
    ``graph_path`` selects the input.  Input locations are deliberately not
    echoed into the report so that equivalent inputs give identical bytes.
    """

    log_paths: tuple[str, ...] = ()
    manifest_path: str | None = None
    corpus_path: str | None = None
    graph_path: str | None = None
    roster_path: str | None = None

    min_nick_length: int = 3
    case_insensitive: bool = True

    hits_tolerance: float = 1e-10
    hits_max_iterations: int = 1000
    hits_weighted: bool = False
    clique_min_size: int = 3
    rege_iterations: int = 3
    eq_threshold: float = 0.5
    tie_cutoff: float = 0.30
    people_cutoff: float = 0.50
    lambda_mode: str = "unit"
    top_links_count: int = 10
    top_k: int = 10
    analyses: tuple[str, ...] = ALL_ANALYSES

    def validate(self) -> None:
        sources = [
            bool(self.log_paths or self.manifest_path),
            self.corpus_path is not None,
            self.graph_path is not None,
        ]
        if sum(sources) != 1:
            raise ValueError("exactly one input source (logs, corpus, or graph) required")
        if self.min_nick_length < 1:
            raise ValueError("min_nick_length must be at least 1")
        if self.hits_tolerance <= 0:
            raise ValueError("hits_tolerance must be positive")
        if self.hits_max_iterations < 1:
            raise ValueError("hits_max_iterations must be at least 1")
        if self.clique_min_size < 1:
            raise ValueError("clique_min_size must be at least 1")
        if self.rege_iterations < 1:
            raise ValueError("rege_iterations must be at least 1")
        if not 0 < self.eq_threshold < 1:
            raise ValueError("eq_threshold must lie strictly between 0 and 1")
        if not 0 <= self.tie_cutoff <= 1:
            raise ValueError("tie_cutoff must lie in [0, 1]")
        if not 0 <= self.people_cutoff <= 1:
            raise ValueError("people_cutoff must lie in [0, 1]")
        if self.lambda_mode not in ("unit", "weighted"):
            raise ValueError("lambda_mode must be 'unit' or 'weighted'")
        if self.top_links_count < 1:
            raise ValueError("top_links_count must be at least 1")
        if self.top_k < 1:
            raise ValueError("top_k must be at least 1")
        unknown = [a for a in self.analyses if a not in ALL_ANALYSES]
        if unknown:
            raise ValueError(f"unknown analyses: {', '.join(unknown)}")

    def echo(self) -> dict:
        """Analysis-relevant parameters, in a fixed order, paths excluded."""
        return {
            "min_nick_length": self.min_nick_length,
            "case_insensitive": self.case_insensitive,
            "hits_tolerance": self.hits_tolerance,
            "hits_max_iterations": self.hits_max_iterations,
            "hits_weighted": self.hits_weighted,
            "clique_min_size": self.clique_min_size,
            "rege_iterations": self.rege_iterations,
            "eq_threshold": self.eq_threshold,
            "tie_cutoff": self.tie_cutoff,
            "people_cutoff": self.people_cutoff,
            "lambda_mode": self.lambda_mode,
            "top_links_count": self.top_links_count,
            "top_k": self.top_k,
            "analyses": list(self.analyses),
        }


_CONFIG_COERCERS = {
    int: int,
    float: float,
    str: str,
}


def _coerce_config_value(name: str, kind, raw: str):
    if kind == "bool":
        lowered = raw.strip().lower()
        if lowered in ("true", "yes", "1", "on"):
            return True
        if lowered in ("false", "no", "0", "off"):
            return False
        raise ValueError(f"bad boolean for {name}: {raw!r}")
    if kind == "tuple":
        return tuple(part.strip() for part in raw.split(",") if part.strip())
    return kind(raw)


def load_config_file(path) -> dict:
    """Parse ``key = value`` lines into config overrides.

    Unknown keys are an error; '#' starts a comment.  Values are coerced to
    the declared field types (booleans accept true/false style words, tuples
    are comma-separated).
    """
    kinds = {}
    for f in fields(AnalysisConfig):
        if f.type.startswith("bool"):
            kinds[f.name] = "bool"
        elif f.type.startswith("tuple"):
            kinds[f.name] = "tuple"
        elif f.type.startswith("int"):
            kinds[f.name] = int
        elif f.type.startswith("float"):
            kinds[f.name] = float
        else:
            kinds[f.name] = str
    overrides = {}
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected 'key = value'")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in kinds:
            raise ValueError(f"{path}:{lineno}: unknown config key '{key}'")
        overrides[key] = _coerce_config_value(key, kinds[key], value)
    return overrides


def config_with_overrides(base: AnalysisConfig, overrides: Mapping) -> AnalysisConfig:
    return replace(base, **dict(overrides))


@dataclass(frozen=True)
class AnalysisReport:
    """Ordered report sections plus the tool/config envelope."""

    data: dict

    def section(self, name: str):
        return self.data.get(name)

    def to_json_text(self) -> str:
        return json.dumps(self.data, indent=2, ensure_ascii=False) + "\n"

    def write_json(self, path) -> None:
        Path(path).write_text(self.to_json_text(), encoding="utf-8")

    def to_markdown(self) -> str:
        return _render_markdown(self.data)

    def write_markdown(self, path) -> None:
        Path(path).write_text(self.to_markdown(), encoding="utf-8")


def load_report_schema() -> dict:
    text = resources.files("chatnet").joinpath("schemas/report.schema.json").read_text()
    return json.loads(text)


def _percent(count: int, total: int) -> float:
    return 100.0 * count / total if total else 0.0


def _stats_section(g: MentionGraph) -> dict:
    s = stats(g)
    return {
        "nodes": s.node_count,
        "edges": s.edge_count,
        "density": s.density,
        "indegree": {
            "min": s.indegree_min,
            "mean": s.indegree_mean,
            "max": s.indegree_max,
        },
        "outdegree": {
            "min": s.outdegree_min,
            "mean": s.outdegree_mean,
            "max": s.outdegree_max,
        },
    }


def _hits_section(g: MentionGraph, cfg: AnalysisConfig) -> dict:
    scores = hits(
        g,
        tolerance=cfg.hits_tolerance,
        max_iterations=cfg.hits_max_iterations,
        weighted=cfg.hits_weighted,
    )
    return {
        "weighted": cfg.hits_weighted,
        "iterations": scores.iterations_used,
        "converged": scores.converged,
        "top_authorities": [
            {"nick": nick, "score": value}
            for nick, value in ranked(scores.authority, cfg.top_k)
        ],
        "top_hubs": [
            {"nick": nick, "score": value}
            for nick, value in ranked(scores.hub, cfg.top_k)
        ],
    }


def _bowtie_section(g: MentionGraph) -> dict:
    partition = bowtie(g)
    sizes = partition.sizes()
    n = g.node_count
    return {
        "core_size": len(partition.core),
        "sizes": {name: sizes[name] for name in BOWTIE_LABELS},
        "percent": {name: _percent(sizes[name], n) for name in BOWTIE_LABELS},
    }


def _skeleton_section(g: MentionGraph, partition) -> dict:
    sizes = partition.sizes()
    n = g.node_count
    plain = link_matrix(g, partition, weighted=False)
    weighted = link_matrix(g, partition, weighted=True)
    return {
        "order": list(SKELETON_LABELS),
        "sizes": {name: sizes[name] for name in SKELETON_LABELS},
        "percent": {name: _percent(sizes[name], n) for name in SKELETON_LABELS},
        "link_matrix": [list(row) for row in plain.counts],
        "link_matrix_weighted": [list(row) for row in weighted.counts],
    }


def _cliques_section(u, cfg: AnalysisConfig) -> dict:
    report = maximal_cliques(u, cfg.clique_min_size)
    co = clique_comembership(report, set(u.nicks))
    pairs = sorted(co.pair_counts.items(), key=lambda item: (-item[1], item[0]))
    return {
        "min_size": cfg.clique_min_size,
        "count": report.count,
        "max_clique_size": report.max_clique_size,
        "top_comembership": [
            {"pair": list(pair), "shared": count}
            for pair, count in pairs[: cfg.top_k]
        ],
    }


def _blocks_section(u) -> dict:
    report = articulation_points_and_blocks(u)
    return {
        "cutpoint_count": len(report.cutpoints),
        "block_count": report.block_count,
        "largest_block_size": report.largest_block_size,
    }


def _lambda_section(u, cfg: AnalysisConfig) -> dict:
    hierarchy = lambda_sets(u, cfg.lambda_mode)
    links = top_links(u, cfg.top_links_count) if u.edge_count else []
    return {
        "mode": cfg.lambda_mode,
        "levels": [
            {"value": value, "sets": [sorted(s) for s in sets]}
            for value, sets in hierarchy.levels
        ],
        "top_links": [
            {"source": a, "target": b, "score": score} for (a, b), score in links
        ],
    }


def _roles_section(g: MentionGraph, partition, cfg: AnalysisConfig) -> dict:
    matrix = rege(g, iterations=cfg.rege_iterations)
    fractions = high_eq_tie_fraction(g, matrix, cfg.eq_threshold)
    report = classify_roles(partition, fractions, cfg.tie_cutoff, cfg.people_cutoff)
    components = {}
    for name in SKELETON_LABELS:
        case = report.components[name]
        if case.empty:
            components[name] = {"empty": True}
        else:
            components[name] = {
                "size": case.size,
                "mean_tie_fraction": case.mean_tie_fraction,
                "people_fraction": case.people_fraction,
                "case": case.case,
                "characteristics": case.characteristics,
            }
    return {
        "eq_threshold": cfg.eq_threshold,
        "tie_cutoff": cfg.tie_cutoff,
        "people_cutoff": cfg.people_cutoff,
        "rege_iterations": cfg.rege_iterations,
        "components": components,
    }


def _load_input_graph(cfg: AnalysisConfig, threads: int) -> MentionGraph:
    if cfg.graph_path is not None:
        return read_graph_csv(cfg.graph_path)
    if cfg.corpus_path is not None:
        corpus = read_corpus_jsonl(cfg.corpus_path)
    else:
        if cfg.manifest_path is not None:
            files = read_manifest(cfg.manifest_path)
        else:
            files = discover_log_files(cfg.log_paths)
        corpus = parse_corpus(files, threads=threads)
    prior = read_roster_file(cfg.roster_path) if cfg.roster_path else ()
    roster = build_roster(corpus, prior_nicks=prior)
    options = ExtractionOptions(
        min_nick_length=cfg.min_nick_length,
        case_insensitive=cfg.case_insensitive,
    )
    return extract_network(corpus, roster, options)


def run_pipeline(config: AnalysisConfig, threads: int = 1) -> AnalysisReport:
    """Ingest, extract, run the enabled analyses in fixed order, and report.

    Deterministic for a fixed configuration and input regardless of
    ``threads``; any stage failure raises PipelineError naming the stage.
    """
    try:
        config.validate()
    except ValueError as exc:
        raise PipelineError("config", str(exc)) from exc
    try:
        graph = _load_input_graph(config, threads)
    except (OSError, ValueError) as exc:
        raise PipelineError("input", str(exc)) from exc

    data = {
        "tool": {"name": "chatnet", "version": __version__},
        "config": config.echo(),
    }
    enabled = set(config.analyses)
    undirected = None
    if enabled & {"cliques", "blocks", "lambda"}:
        undirected = to_undirected(graph)
    partition = None
    if enabled & {"skeleton", "roles"}:
        partition = abcd_skeleton(graph)

    builders = {
        "stats": lambda: _stats_section(graph),
        "hits": lambda: _hits_section(graph, config),
        "bowtie": lambda: _bowtie_section(graph),
        "skeleton": lambda: _skeleton_section(graph, partition),
        "cliques": lambda: _cliques_section(undirected, config),
        "blocks": lambda: _blocks_section(undirected),
        "lambda": lambda: _lambda_section(undirected, config),
        "roles": lambda: _roles_section(graph, partition, config),
    }
    for name in ALL_ANALYSES:
        if name not in enabled:
            continue
        try:
            data[name] = builders[name]()
        except Exception as exc:
            raise PipelineError(name, str(exc)) from exc
    return AnalysisReport(data)


def _dot_quote(name: str) -> str:
    return '"' + name.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _format_attr(value) -> str:
    if isinstance(value, bool):
        return '"true"' if value else '"false"'
    if isinstance(value, (int, float)):
        return format_weight(value) if float(value).is_integer() else repr(float(value))
    return _dot_quote(str(value))


def _export_dot(g: MentionGraph, node_attrs) -> str:
    lines = ["digraph mentions {"]
    for nick in g.nicks:
        attrs = (node_attrs or {}).get(nick)
        if attrs:
            rendered = ", ".join(
                f"{key}={_format_attr(value)}" for key, value in sorted(attrs.items())
            )
            lines.append(f"  {_dot_quote(nick)} [{rendered}];")
        else:
            lines.append(f"  {_dot_quote(nick)};")
    for src, dst, w in g.edges_by_nick():
        lines.append(
            f"  {_dot_quote(src)} -> {_dot_quote(dst)} [weight={format_weight(w)}];"
        )
    lines.append("}")
    return "\n".join(lines) + "\n"


def _graphml_type(value) -> str:
    if isinstance(value, bool):
        return "boolean"
    if isinstance(value, int):
        return "long"
    if isinstance(value, float):
        return "double"
    return "string"


def _export_graphml(g: MentionGraph, node_attrs) -> str:
    ns = "http://graphml.graphdrawing.org/xmlns"
    ET.register_namespace("", ns)
    root = ET.Element(f"{{{ns}}}graphml")
    attr_names: dict[str, str] = {}
    if node_attrs:
        seen = {}
        for attrs in node_attrs.values():
            for key, value in attrs.items():
                seen.setdefault(key, _graphml_type(value))
        for i, (key, kind) in enumerate(sorted(seen.items())):
            key_id = f"n{i}"
            attr_names[key] = key_id
            ET.SubElement(
                root,
                f"{{{ns}}}key",
                {"id": key_id, "for": "node", "attr.name": key, "attr.type": kind},
            )
    ET.SubElement(
        root,
        f"{{{ns}}}key",
        {"id": "w", "for": "edge", "attr.name": "weight", "attr.type": "double"},
    )
    graph_el = ET.SubElement(root, f"{{{ns}}}graph", {"edgedefault": "directed"})
    for nick in g.nicks:
        node_el = ET.SubElement(graph_el, f"{{{ns}}}node", {"id": nick})
        for key, value in sorted(((node_attrs or {}).get(nick) or {}).items()):
            data_el = ET.SubElement(node_el, f"{{{ns}}}data", {"key": attr_names[key]})
            if isinstance(value, bool):
                data_el.text = "true" if value else "false"
            else:
                data_el.text = str(value)
    for src, dst, w in g.edges_by_nick():
        edge_el = ET.SubElement(graph_el, f"{{{ns}}}edge", {"source": src, "target": dst})
        data_el = ET.SubElement(edge_el, f"{{{ns}}}data", {"key": "w"})
        data_el.text = format_weight(w)
    ET.indent(root)
    body = ET.tostring(root, encoding="unicode")
    return '<?xml version="1.0" encoding="UTF-8"?>\n' + body + "\n"


def export_graph(g: MentionGraph, format: str, path, node_attrs=None) -> None:
    """Write the graph as DOT, GraphML, or the canonical CSV edge list.

    ``node_attrs`` maps nick -> {attribute: value} and is rendered on nodes
    in DOT and GraphML (typed in the latter).
    """
    if format not in EXPORT_FORMATS:
        raise ValueError(f"unknown export format {format!r}; expected one of {EXPORT_FORMATS}")
    if format == "csv":
        text = graph_csv_text(g)
    elif format == "dot":
        text = _export_dot(g, node_attrs)
    else:
        text = _export_graphml(g, node_attrs)
    Path(path).write_text(text, encoding="utf-8")


def _render_markdown(data: dict) -> str:
    out = []
    tool = data["tool"]
    out.append(f"# Chat network analysis ({tool['name']} {tool['version']})")
    out.append("")
    if "stats" in data:
        s = data["stats"]
        out.append("## Graph")
        out.append("")
        out.append(f"- nodes: {s['nodes']}")
        out.append(f"- edges: {s['edges']}")
        out.append(f"- density: {s['density']:.6g}")
        out.append(
            f"- indegree min/mean/max: {s['indegree']['min']}/"
            f"{s['indegree']['mean']:.4g}/{s['indegree']['max']}"
        )
        out.append(
            f"- outdegree min/mean/max: {s['outdegree']['min']}/"
            f"{s['outdegree']['mean']:.4g}/{s['outdegree']['max']}"
        )
        out.append("")
    if "hits" in data:
        h = data["hits"]
        out.append("## Hubs and authorities")
        out.append("")
        out.append(f"- converged: {h['converged']} after {h['iterations']} iterations")
        for label, key in (("authorities", "top_authorities"), ("hubs", "top_hubs")):
            names = ", ".join(
                f"{entry['nick']} ({entry['score']:.4g})" for entry in h[key][:5]
            )
            out.append(f"- top {label}: {names or 'none'}")
        out.append("")
    if "bowtie" in data:
        b = data["bowtie"]
        out.append("## Bow-tie decomposition")
        out.append("")
        for name, size in b["sizes"].items():
            out.append(f"- {name}: {size} ({b['percent'][name]:.2f}%)")
        out.append("")
    if "skeleton" in data:
        k = data["skeleton"]
        out.append("## Four-component skeleton")
        out.append("")
        for name, size in k["sizes"].items():
            out.append(f"- {name}: {size} ({k['percent'][name]:.2f}%)")
        out.append("")
        out.append("Link counts (rows send, columns receive, order A B C D):")
        out.append("")
        for name, row in zip(k["order"], k["link_matrix"]):
            out.append(f"- {name}: " + " ".join(str(x) for x in row))
        out.append("")
    if "cliques" in data:
        c = data["cliques"]
        out.append("## Cliques")
        out.append("")
        out.append(f"- maximal cliques (size >= {c['min_size']}): {c['count']}")
        out.append(f"- largest clique: {c['max_clique_size']}")
        if c["top_comembership"]:
            top = c["top_comembership"][0]
            out.append(
                f"- strongest co-membership: {top['pair'][0]} / {top['pair'][1]}"
                f" ({top['shared']} shared)"
            )
        out.append("")
    if "blocks" in data:
        b = data["blocks"]
        out.append("## Blocks and cutpoints")
        out.append("")
        out.append(f"- cutpoints: {b['cutpoint_count']}")
        out.append(f"- blocks: {b['block_count']}")
        out.append(f"- largest block: {b['largest_block_size']}")
        out.append("")
    if "lambda" in data:
        lam = data["lambda"]
        out.append("## Lambda sets and top links")
        out.append("")
        out.append(f"- mode: {lam['mode']}")
        out.append(f"- levels: {len(lam['levels'])}")
        links = ", ".join(
            f"{entry['source']}-{entry['target']} ({entry['score']:.4g})"
            for entry in lam["top_links"][:6]
        )
        out.append(f"- top links: {links or 'none'}")
        out.append("")
    if "roles" in data:
        r = data["roles"]
        out.append("## Role cases")
        out.append("")
        for name, comp in r["components"].items():
            if comp.get("empty"):
                out.append(f"- {name}: empty")
            else:
                out.append(
                    f"- {name}: {comp['case']} (T={comp['mean_tie_fraction']:.3f}, "
                    f"P={comp['people_fraction']:.3f}) {comp['characteristics']}"
                )
        out.append("")
    return "\n".join(out)
