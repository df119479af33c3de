"""Corpus ingestion: article records, category hierarchies, area assignment.

File formats
------------
articles (TSV):   ``title<TAB>category1;category2;...`` -- the category field
                  may be empty or missing entirely (an article with no
                  categories is kept but never assigned to an area).
articles (JSONL): ``{"title": "...", "categories": ["...", ...]}`` per line.
                  An optional ``"id"`` field is checked for consistency
                  between duplicate records but ids are always re-interned.
category tree:    TSV ``parent<TAB>child``, one edge per line.

All files are UTF-8; blank lines and lines starting with ``#`` are skipped.
Duplicate article titles are merged, taking the union of their categories.
"""
from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

from .errors import DataError


@dataclass(frozen=True)
class Article:
    id: int
    title: str
    categories: frozenset[str]


class CategoryTree:
    """Parent -> children hierarchy over category names.

    The tree may contain cycles (real category systems do); expansion keeps
    a visited set, so traversal always terminates.  Self-parenting edges are
    rejected outright.
    """

    def __init__(self, edges: Iterable[tuple[str, str]]):
        self.children: dict[str, list[str]] = {}
        self.nodes: set[str] = set()
        seen: set[tuple[str, str]] = set()
        for parent, child in edges:
            if parent == child:
                raise DataError(f"category {parent!r} is its own parent")
            self.nodes.add(parent)
            self.nodes.add(child)
            if (parent, child) not in seen:
                seen.add((parent, child))
                self.children.setdefault(parent, []).append(child)

    @classmethod
    def from_tsv(cls, path: str | Path) -> "CategoryTree":
        edges = []
        for lineno, fields in _iter_tsv(path):
            if len(fields) != 2 or not fields[0] or not fields[1]:
                raise DataError(f"{path}:{lineno}: expected 'parent<TAB>child'")
            edges.append((fields[0], fields[1]))
        return cls(edges)

    def __len__(self) -> int:
        return len(self.nodes)


@dataclass
class AreaAssignment:
    """Disjoint article -> area mapping plus the ingestion census.

    ``area_of`` and ``titles`` cover only articles in retained areas.
    ``areas`` preserves the configured priority order; ``excluded`` lists the
    areas dropped for having fewer than ``min_area_size`` members.
    """

    area_of: dict[int, str]
    titles: dict[int, str]
    areas: list[str]
    counts: dict[str, int]
    excluded: dict[str, int]
    unassigned: int
    conflicts: int

    def census(self) -> dict:
        """Census report matching the documented JSON schema."""
        return {
            "schema": "knet.census/1",
            "areas": [{"name": a, "count": self.counts[a]} for a in self.areas],
            "excluded": [{"name": a, "count": c} for a, c in self.excluded.items()],
            "unassigned": self.unassigned,
            "conflicts": self.conflicts,
        }

    def to_json_dict(self) -> dict:
        ordered = sorted(self.area_of)  # original interning order
        return {
            "schema": "knet.assignment/1",
            "areas": list(self.areas),
            "articles": [{"title": self.titles[i], "area": self.area_of[i]} for i in ordered],
            "excluded": [{"name": a, "count": c} for a, c in self.excluded.items()],
            "unassigned": self.unassigned,
            "conflicts": self.conflicts,
        }

    @classmethod
    def from_json_dict(cls, obj: dict) -> "AreaAssignment":
        if obj.get("schema") != "knet.assignment/1":
            raise DataError(f"expected schema knet.assignment/1, got {obj.get('schema')!r}")
        areas = list(obj["areas"])
        area_of: dict[int, str] = {}
        titles: dict[int, str] = {}
        counts = {a: 0 for a in areas}
        for i, rec in enumerate(obj["articles"]):
            if rec["area"] not in counts:
                raise DataError(f"article {rec['title']!r} assigned to unknown area")
            area_of[i] = rec["area"]
            titles[i] = rec["title"]
            counts[rec["area"]] += 1
        return cls(
            area_of=area_of,
            titles=titles,
            areas=areas,
            counts=counts,
            excluded={e["name"]: e["count"] for e in obj.get("excluded", [])},
            unassigned=int(obj.get("unassigned", 0)),
            conflicts=int(obj.get("conflicts", 0)),
        )


def _iter_tsv(path: str | Path):
    """Yield (lineno, fields) for data lines of a TSV file."""
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n").rstrip("\r")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            yield lineno, line.split("\t")


def parse_articles(path: str | Path, fmt: str = "auto") -> list[Article]:
    """Read an article file and intern titles to dense ids 0..N-1.

    Ids follow first appearance order, so re-reading the same file always
    produces identical ids.  Duplicate titles merge their category sets.
    """
    if fmt == "auto":
        fmt = "jsonl" if str(path).endswith((".jsonl", ".json")) else "tsv"
    if fmt not in ("tsv", "jsonl"):
        raise DataError(f"unknown article format {fmt!r}")

    order: list[str] = []
    cats: dict[str, set[str]] = {}
    explicit_ids: dict[str, int] = {}

    if fmt == "tsv":
        for lineno, fields in _iter_tsv(path):
            if len(fields) > 2:
                raise DataError(f"{path}:{lineno}: too many fields")
            title = fields[0].strip()
            if not title:
                raise DataError(f"{path}:{lineno}: empty title")
            raw = fields[1] if len(fields) == 2 else ""
            categories = {c.strip() for c in raw.split(";") if c.strip()}
            _merge(order, cats, title, categories)
    else:
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                if not line.strip() or line.lstrip().startswith("#"):
                    continue
                try:
                    rec = json.loads(line)
                except json.JSONDecodeError as exc:
                    raise DataError(f"{path}:{lineno}: invalid JSON ({exc.msg})") from None
                if not isinstance(rec, dict) or not isinstance(rec.get("title"), str):
                    raise DataError(f"{path}:{lineno}: record needs a string 'title'")
                title = rec["title"].strip()
                if not title:
                    raise DataError(f"{path}:{lineno}: empty title")
                raw_cats = rec.get("categories", [])
                if not isinstance(raw_cats, list) or any(not isinstance(c, str) for c in raw_cats):
                    raise DataError(f"{path}:{lineno}: 'categories' must be a list of strings")
                if "id" in rec:
                    previous = explicit_ids.setdefault(title, rec["id"])
                    if previous != rec["id"]:
                        raise DataError(
                            f"{path}:{lineno}: duplicate title {title!r} with conflicting id"
                        )
                _merge(order, cats, title, {c.strip() for c in raw_cats if c.strip()})

    return [Article(i, t, frozenset(cats[t])) for i, t in enumerate(order)]


def _merge(order: list[str], cats: dict[str, set[str]], title: str, categories: set[str]) -> None:
    if title not in cats:
        order.append(title)
        cats[title] = set()
    cats[title] |= categories


def expand_categories(tree: CategoryTree, roots: list[str], depth: int) -> dict[str, str]:
    """Map every category within ``depth`` child-steps of a root to that root.

    A category reachable from several roots goes to the earliest root in the
    given order.  The result depends only on the tree's edge set, not on the
    order edges were listed in.
    """
    if not roots:
        raise DataError("no root categories given")
    if depth < 0:
        raise DataError(f"depth must be >= 0, got {depth}")
    unknown = [r for r in roots if r not in tree.nodes]
    if unknown:
        raise DataError(f"unknown root categories: {', '.join(sorted(unknown))}")

    mapping: dict[str, str] = {}
    for root in roots:
        visited = {root}
        queue = deque([(root, 0)])
        while queue:
            cat, d = queue.popleft()
            mapping.setdefault(cat, root)
            if d == depth:
                continue
            for child in tree.children.get(cat, ()):
                if child not in visited:
                    visited.add(child)
                    queue.append((child, d + 1))
    return mapping


def assign_areas(
    articles: list[Article], catmap: dict[str, str], min_area_size: int
) -> AreaAssignment:
    """Assign each article to exactly one area and drop undersized areas.

    Area priority is the order of first appearance among ``catmap`` values
    (the configured roots order when the map comes from expand_categories).
    An article whose categories hit several areas counts as a conflict and is
    assigned to the highest-priority one.
    """
    if not catmap:
        raise DataError("empty category map")
    if min_area_size < 1:
        raise DataError(f"min_area_size must be >= 1, got {min_area_size}")

    area_order: list[str] = []
    rank: dict[str, int] = {}
    for area in catmap.values():
        if area not in rank:
            rank[area] = len(area_order)
            area_order.append(area)

    members: dict[str, list[int]] = {a: [] for a in area_order}
    unassigned = 0
    conflicts = 0
    for art in articles:
        hit = {catmap[c] for c in art.categories if c in catmap}
        if not hit:
            unassigned += 1
            continue
        if len(hit) > 1:
            conflicts += 1
        members[min(hit, key=rank.__getitem__)].append(art.id)

    retained = [a for a in area_order if len(members[a]) >= min_area_size]
    excluded = {a: len(members[a]) for a in area_order if len(members[a]) < min_area_size}
    title_by_id = {art.id: art.title for art in articles}
    area_of: dict[int, str] = {}
    titles: dict[int, str] = {}
    for area in retained:
        for art_id in members[area]:
            area_of[art_id] = area
            titles[art_id] = title_by_id[art_id]

    return AreaAssignment(
        area_of=area_of,
        titles=titles,
        areas=retained,
        counts={a: len(members[a]) for a in retained},
        excluded=excluded,
        unassigned=unassigned,
        conflicts=conflicts,
    )
