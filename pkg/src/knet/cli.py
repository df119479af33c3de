"""Pipeline CLI: ingest, build, sample, metrics, compare, synth, all.

Configuration is a single JSON file; relative paths resolve against the
config file's directory.  Command-line flags override config values.  Every
run writes a ``manifest.json`` next to its outputs recording input hashes,
the resolved configuration, and versions; passing a manifest as ``--config``
re-runs the same pipeline.

Exit codes: 0 success, 2 config error, 3 data error, 4 internal error.
Progress goes to stderr; data only to files.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import platform
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .corpus import AreaAssignment, CategoryTree, assign_areas, expand_categories, parse_articles
from .errors import ConfigError, DataError, InvariantError, KnetError
from .graph import build_graph, load_binary, read_links, save_binary, save_graphml
from .metrics import backbone_mst, internal_external_proportions, save_backbone_dot, \
    save_metrics_csv, save_metrics_json
from .network import KnowledgeNetwork
from .review import build_hypergraph, compare_with_network, hypergraph_json_dict, \
    parse_review_table
from .sampling import SampleConfig, monte_carlo_estimate
from .sbm import SbmSpec, generate_sbm, write_corpus

MANIFEST_SCHEMA = "knet.manifest/1"

_CONFIG_KEYS = {
    "articles", "links", "tree", "roots", "depth", "min_area_size", "sample",
    "focus", "review_table", "partition", "sbm_spec", "out",
}
_SAMPLE_KEYS = {"k", "rounds", "seed", "normalize"}


@dataclass
class PipelineConfig:
    articles: Path | None
    links: Path | None
    tree: Path | None
    roots: list[str]
    depth: int
    min_area_size: int | None
    sample: SampleConfig
    focus: list[str]
    review_table: Path | None
    partition: Path | None
    sbm_spec: Path | None
    out: Path

    def effective_min_area_size(self) -> int:
        # Sampling needs strictly more members than k in every retained area.
        return self.min_area_size if self.min_area_size is not None else self.sample.k + 1

    def to_json_dict(self) -> dict:
        def p(x):
            return str(x) if x is not None else None

        return {
            "articles": p(self.articles), "links": p(self.links), "tree": p(self.tree),
            "roots": self.roots, "depth": self.depth, "min_area_size": self.min_area_size,
            "sample": {"k": self.sample.k, "rounds": self.sample.rounds,
                       "seed": self.sample.seed, "normalize": self.sample.normalize},
            "focus": self.focus, "review_table": p(self.review_table),
            "partition": p(self.partition), "sbm_spec": p(self.sbm_spec), "out": p(self.out),
        }


def load_config(path: str | None, overrides: argparse.Namespace) -> PipelineConfig:
    obj: dict = {}
    base = Path.cwd()
    if path is not None:
        cfg_path = Path(path)
        if not cfg_path.is_file():
            raise ConfigError(f"config file not found: {cfg_path}")
        try:
            obj = json.loads(cfg_path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{cfg_path}: invalid JSON ({exc.msg})") from None
        if obj.get("schema") == MANIFEST_SCHEMA:
            obj = obj.get("config", {})
        base = cfg_path.resolve().parent

    unknown = set(obj) - _CONFIG_KEYS - {"schema"}
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
    sample_obj = obj.get("sample", {})
    if not isinstance(sample_obj, dict):
        raise ConfigError("'sample' must be an object")
    unknown = set(sample_obj) - _SAMPLE_KEYS
    if unknown:
        raise ConfigError(f"unknown sample keys: {', '.join(sorted(unknown))}")

    def as_path(key: str) -> Path | None:
        value = obj.get(key)
        if value is None:
            return None
        return (base / value).resolve() if not Path(value).is_absolute() else Path(value)

    try:
        sample = SampleConfig(
            k=int(overrides.k if overrides.k is not None else sample_obj.get("k", 200)),
            rounds=int(
                overrides.rounds if overrides.rounds is not None
                else sample_obj.get("rounds", 10000)
            ),
            seed=int(overrides.seed if overrides.seed is not None else sample_obj.get("seed", 0)),
            normalize=bool(sample_obj.get("normalize", True)),
        )
        cfg = PipelineConfig(
            articles=as_path("articles"),
            links=as_path("links"),
            tree=as_path("tree"),
            roots=list(obj.get("roots", [])),
            depth=int(obj.get("depth", 1)),
            min_area_size=(
                None if obj.get("min_area_size") is None else int(obj["min_area_size"])
            ),
            sample=sample,
            focus=list(obj.get("focus", [])),
            review_table=as_path("review_table"),
            partition=as_path("partition"),
            sbm_spec=as_path("sbm_spec"),
            out=Path(overrides.out) if overrides.out is not None else
                (as_path("out") or (base / "out")),
        )
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad config value: {exc}") from None

    if cfg.sample.k < 1 or cfg.sample.rounds < 1:
        raise ConfigError("k and rounds must be positive")
    if cfg.depth < 0:
        raise ConfigError("depth must be >= 0")
    if cfg.min_area_size is not None and cfg.min_area_size <= cfg.sample.k:
        raise ConfigError(
            f"min_area_size ({cfg.min_area_size}) must exceed k ({cfg.sample.k})"
        )
    return cfg


def _log(msg: str) -> None:
    print(msg, file=sys.stderr)


def _require(path: Path | None, what: str) -> Path:
    if path is None:
        raise ConfigError(f"config is missing the {what!r} path")
    if not path.is_file():
        raise ConfigError(f"{what} file not found: {path}")
    return path


def _write_json(path: Path, obj: dict) -> None:
    path.write_text(json.dumps(obj, indent=2) + "\n", encoding="utf-8")


def _read_json(path: Path) -> dict:
    if not path.is_file():
        raise ConfigError(f"missing pipeline artifact: {path} (run the earlier stages first)")
    try:
        return json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise DataError(f"{path}: invalid JSON ({exc.msg})") from None


# -- commands -----------------------------------------------------------------


def cmd_ingest(cfg: PipelineConfig) -> tuple[list[Path], list[Path]]:
    articles_path = _require(cfg.articles, "articles")
    if not cfg.roots:
        raise ConfigError("config is missing 'roots'")
    inputs = [articles_path]
    articles = parse_articles(articles_path)
    if cfg.tree is not None:
        tree_path = _require(cfg.tree, "tree")
        inputs.append(tree_path)
        catmap = expand_categories(CategoryTree.from_tsv(tree_path), cfg.roots, cfg.depth)
    else:
        catmap = {r: r for r in cfg.roots}
    assignment = assign_areas(articles, catmap, cfg.effective_min_area_size())
    _log(
        f"[ingest] {len(articles)} articles -> {len(assignment.areas)} areas "
        f"({len(assignment.excluded)} excluded, {assignment.unassigned} unassigned, "
        f"{assignment.conflicts} conflicts)"
    )
    _write_json(cfg.out / "census.json", assignment.census())
    _write_json(cfg.out / "assignment.json", assignment.to_json_dict())
    return inputs, [cfg.out / "census.json", cfg.out / "assignment.json"]


def cmd_build(cfg: PipelineConfig) -> tuple[list[Path], list[Path]]:
    links_path = _require(cfg.links, "links")
    assignment = AreaAssignment.from_json_dict(_read_json(cfg.out / "assignment.json"))
    graph = build_graph(assignment, read_links(links_path))
    stats = graph.link_stats
    _log(
        f"[build] {graph.n} vertices, {graph.num_edges} edges "
        f"(dropped {stats.dropped_unknown} unknown, {stats.dropped_self} self, "
        f"{stats.duplicates} duplicate links)"
    )
    save_binary(graph, cfg.out / "graph.bin")
    save_graphml(graph, cfg.out / "graph.graphml")
    _write_json(cfg.out / "link_report.json", stats.as_dict())
    return [links_path], [cfg.out / "graph.bin", cfg.out / "graph.graphml",
                          cfg.out / "link_report.json"]


def cmd_sample(cfg: PipelineConfig, threads: int) -> tuple[list[Path], list[Path]]:
    graph_path = cfg.out / "graph.bin"
    if not graph_path.is_file():
        raise ConfigError(f"missing pipeline artifact: {graph_path} (run 'build' first)")
    graph = load_binary(graph_path)
    raw_cfg = SampleConfig(cfg.sample.k, cfg.sample.rounds, cfg.sample.seed, normalize=False)
    _log(f"[sample] k={raw_cfg.k} rounds={raw_cfg.rounds} seed={raw_cfg.seed} threads={threads}")
    raw = monte_carlo_estimate(graph, raw_cfg, threads=threads)
    primary = raw.normalized_copy() if cfg.sample.normalize else raw
    primary.save_json(cfg.out / "knowledge_network.json")
    raw.save_json(cfg.out / "knowledge_network_raw.json")
    primary.save_csv(cfg.out / "knowledge_network.csv")
    primary.save_graphml(cfg.out / "knowledge_network.graphml")
    return [], [cfg.out / "knowledge_network.json", cfg.out / "knowledge_network_raw.json",
                cfg.out / "knowledge_network.csv", cfg.out / "knowledge_network.graphml"]


def cmd_metrics(cfg: PipelineConfig) -> tuple[list[Path], list[Path]]:
    raw = KnowledgeNetwork.from_json_dict(_read_json(cfg.out / "knowledge_network_raw.json"))
    primary = KnowledgeNetwork.from_json_dict(_read_json(cfg.out / "knowledge_network.json"))
    focus = cfg.focus or None
    report = internal_external_proportions(raw, focus)
    backbone = backbone_mst(primary)
    _log(f"[metrics] backbone of {len(backbone.edges)} edges, "
         f"{len(report.internal_fraction)} areas")
    save_metrics_json(report, cfg.out / "metrics.json")
    save_metrics_csv(report, cfg.out / "metrics.csv")
    save_backbone_dot(primary, backbone, cfg.out / "backbone.dot")
    return [], [cfg.out / "metrics.json", cfg.out / "metrics.csv", cfg.out / "backbone.dot"]


def cmd_compare(cfg: PipelineConfig) -> tuple[list[Path], list[Path]]:
    table_path = _require(cfg.review_table, "review_table")
    inputs = [table_path]
    partition = cfg.partition
    if partition is None:
        partition = table_path.parent / (table_path.stem + ".partition.json")
    _require(partition, "partition")
    inputs.append(partition)
    table = parse_review_table(table_path, partition)
    hg = build_hypergraph(table)
    net = KnowledgeNetwork.from_json_dict(_read_json(cfg.out / "knowledge_network.json"))
    focus = [a for a in cfg.focus if a in hg.hyperedges] or None
    report = compare_with_network(hg, net, focus)
    _log(f"[compare] {len(report.entries)} areas, macro jaccard {report.mean_jaccard:.3f}")
    _write_json(cfg.out / "agreement.json", report.to_json_dict())
    (cfg.out / "agreement.txt").write_text(report.to_text(), encoding="utf-8")
    _write_json(cfg.out / "hypergraph.json", hypergraph_json_dict(hg))
    return inputs, [cfg.out / "agreement.json", cfg.out / "agreement.txt",
                    cfg.out / "hypergraph.json"]


def cmd_synth(cfg: PipelineConfig) -> tuple[list[Path], list[Path]]:
    spec_path = _require(cfg.sbm_spec, "sbm_spec")
    spec = SbmSpec.load(spec_path)
    graph = generate_sbm(spec)
    _log(f"[synth] {graph.n} vertices, {graph.num_edges} edges, "
         f"{graph.num_areas} areas (seed {spec.seed})")
    write_corpus(graph, cfg.out / "articles.tsv", cfg.out / "links.tsv")
    return [spec_path], [cfg.out / "articles.tsv", cfg.out / "links.tsv"]


_COMMANDS = ("ingest", "build", "sample", "metrics", "compare", "synth", "all")


def run(command: str, cfg: PipelineConfig, threads: int = 1) -> None:
    cfg.out.mkdir(parents=True, exist_ok=True)
    if command == "all":
        steps = ["ingest", "build", "sample", "metrics"]
        if cfg.review_table is not None:
            steps.append("compare")
    else:
        steps = [command]

    inputs: list[Path] = []
    outputs: list[Path] = []
    for step in steps:
        if step == "sample":
            ins, outs = cmd_sample(cfg, threads)
        else:
            ins, outs = {
                "ingest": cmd_ingest,
                "build": cmd_build,
                "metrics": cmd_metrics,
                "compare": cmd_compare,
                "synth": cmd_synth,
            }[step](cfg)
        inputs.extend(ins)
        outputs.extend(outs)

    manifest = {
        "schema": MANIFEST_SCHEMA,
        "command": command,
        "versions": {
            "knet": __version__,
            "numpy": np.__version__,
            "python": platform.python_version(),
        },
        "config": cfg.to_json_dict(),
        "inputs": {str(p): _sha256(p) for p in inputs},
        "outputs": {p.name: _sha256(p) for p in outputs},
    }
    _write_json(cfg.out / "manifest.json", manifest)
    _log(f"[{command}] wrote {len(outputs)} artifacts to {cfg.out}")


def _sha256(path: Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            digest.update(chunk)
    return "sha256:" + digest.hexdigest()


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="knet",
        description="Build and analyze area-level knowledge networks.",
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")
    for name, help_text in (
        ("ingest", "parse articles and categories, assign areas"),
        ("build", "build the article graph from links"),
        ("sample", "estimate the knowledge network by sampling"),
        ("metrics", "backbone, external shares, internal fractions"),
        ("compare", "score agreement against a review hypergraph"),
        ("synth", "generate a planted-partition corpus"),
        ("all", "run the full pipeline"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", help="pipeline config JSON (or a manifest)")
        p.add_argument("--seed", type=int, help="override sampling seed")
        p.add_argument("--k", type=int, help="override vertices sampled per area")
        p.add_argument("--rounds", type=int, help="override number of sampling rounds")
        p.add_argument("--threads", type=int, default=1, help="sampler worker threads")
        p.add_argument("--out", help="override output directory")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config, args)
        run(args.command, cfg, threads=max(1, args.threads))
    except KnetError as exc:
        code = {ConfigError: 2, DataError: 3, InvariantError: 4}.get(type(exc), 4)
        _emit_error(code, exc)
        return code
    except OSError as exc:
        _emit_error(3, exc)
        return 3
    except Exception as exc:  # noqa: BLE001 -- anything else is an internal failure
        _emit_error(4, exc)
        return 4
    return 0


def _emit_error(code: int, exc: Exception) -> None:
    line = json.dumps(
        {"error": type(exc).__name__, "code": code, "message": str(exc)},
        ensure_ascii=False,
    )
    print(line, file=sys.stderr)


if __name__ == "__main__":
    sys.exit(main())
