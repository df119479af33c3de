#!/usr/bin/env python3
"""Regenerate the bundled toy corpus under tests/data/toy/.

Deterministic (fixed seed).  The corpus plants a two-group structure
(physical vs biological areas, Chemistry bridging them), two interdisciplinary
areas with designed neighbor rankings, five undersized areas that the
ingester must exclude, plus assorted noise: duplicate and reciprocal links,
self-links, unknown link targets, multi-category articles, and articles whose
categories sit too deep in the hierarchy to be assigned at depth 1.
"""
from __future__ import annotations

import json
import shutil
from pathlib import Path

import numpy as np

HERE = Path(__file__).resolve().parent
TOY = HERE.parent / "tests" / "data" / "toy"
TABLE = HERE.parent / "src" / "knet" / "data"

SEED = 20260812  # chosen so the realized margins are several SE wide

ROOTS = [
    "Chemistry", "Mathematics", "Applied Mathematics", "Dynamical Systems",
    "Computer Science", "Statistics", "Engineering", "Biomedical Engineering",
    "Biology", "Ecology", "Medicine", "Health Sciences", "Molecular Biology",
    "Bioinformatics", "Biochemistry", "Computational Ecology", "Biotechnology",
    "Systems Biology", "Computational Biology",
]

SIZES = {
    "Chemistry": 20, "Mathematics": 22, "Applied Mathematics": 16,
    "Dynamical Systems": 14, "Computer Science": 24, "Statistics": 3,
    "Engineering": 15, "Biomedical Engineering": 2, "Biology": 22,
    "Ecology": 16, "Medicine": 18, "Health Sciences": 14,
    "Molecular Biology": 18, "Bioinformatics": 16, "Biochemistry": 15,
    "Computational Ecology": 2, "Biotechnology": 14, "Systems Biology": 3,
    "Computational Biology": 2,
}

PHYSICAL = ["Mathematics", "Applied Mathematics", "Dynamical Systems",
            "Computer Science", "Engineering"]
BIOLOGICAL = ["Biology", "Ecology", "Medicine", "Health Sciences",
              "Molecular Biology", "Biotechnology"]

P_IN = 0.75
P_BASE = 0.004


def pair_probability(a: str, b: str) -> float:
    special = {
        ("Bioinformatics", "Molecular Biology"): 0.050,
        ("Bioinformatics", "Computer Science"): 0.044,
        ("Bioinformatics", "Biotechnology"): 0.046,
        ("Bioinformatics", "Biology"): 0.030,
        ("Bioinformatics", "Applied Mathematics"): 0.026,
        ("Biochemistry", "Chemistry"): 0.050,
        ("Biochemistry", "Molecular Biology"): 0.044,
        ("Biochemistry", "Biotechnology"): 0.046,
        ("Biochemistry", "Biology"): 0.030,
        ("Biochemistry", "Ecology"): 0.012,
        ("Biochemistry", "Bioinformatics"): 0.012,
    }
    key = (a, b) if (a, b) in special else (b, a)
    if key in special:
        return special[key]
    if a in PHYSICAL and b in PHYSICAL:
        return 0.012
    if a in BIOLOGICAL and b in BIOLOGICAL:
        return 0.012
    if "Chemistry" in (a, b):
        other = b if a == "Chemistry" else a
        return 0.012 if other in BIOLOGICAL else 0.008
    return P_BASE


def slug(name: str) -> str:
    return name.lower().replace(" ", "-")


def main() -> None:
    rng = np.random.default_rng(SEED)
    TOY.mkdir(parents=True, exist_ok=True)

    subcats = {r: [f"{r} applications", f"{r} history"] for r in ROOTS}
    deep = {r: f"{r} history journals" for r in ROOTS}

    tree_lines = []
    for r in ROOTS:
        for sc in subcats[r]:
            tree_lines.append(f"{r}\t{sc}")
        tree_lines.append(f"{subcats[r][1]}\t{deep[r]}")

    titles: dict[str, list[str]] = {}
    article_lines = ["# toy corpus articles: title<TAB>categories"]
    for r in ROOTS:
        titles[r] = []
        for i in range(SIZES[r]):
            title = f"{slug(r)}-{i:02d}"
            titles[r].append(title)
            cat = r if rng.random() < 0.6 else str(rng.choice(subcats[r]))
            cats = [cat]
            # a sprinkle of cross-area second categories; the extra area comes
            # later in the roots order so the assignment stays put
            if i == 3 and r in ("Chemistry", "Biology", "Computer Science"):
                later = {"Chemistry": "Biochemistry", "Biology": "Ecology",
                         "Computer Science": "Bioinformatics"}[r]
                cats.append(later)
            article_lines.append(f"{title}\t{';'.join(cats)}")

    # articles that never reach an area
    strays = [
        ("philosophy-00", "Philosophy"),
        ("sports-00", "Ball games"),
        ("orphan-00", ""),
        ("deep-chem-00", deep["Chemistry"]),
        ("deep-bio-00", deep["Biology"]),
    ]
    for title, cat in strays:
        article_lines.append(f"{title}\t{cat}")

    link_lines = ["# toy corpus links: source<TAB>target"]
    plain_edges: list[tuple[str, str]] = []
    for ai, a in enumerate(ROOTS):
        ta = titles[a]
        iu = np.triu_indices(len(ta), 1)
        keep = rng.random(iu[0].shape[0]) < P_IN
        for u, v in zip(iu[0][keep], iu[1][keep]):
            plain_edges.append((ta[u], ta[v]))
        for b in ROOTS[ai + 1:]:
            tb = titles[b]
            grid = rng.random((len(ta), len(tb))) < pair_probability(a, b)
            for u, v in zip(*np.nonzero(grid)):
                plain_edges.append((ta[u], tb[v]))

    for src, tgt in plain_edges:
        link_lines.append(f"{src}\t{tgt}")
        if rng.random() < 0.08:  # reciprocal duplicate, collapses to one edge
            link_lines.append(f"{tgt}\t{src}")
    link_lines.append(f"{plain_edges[0][0]}\t{plain_edges[0][1]}")  # exact duplicate
    link_lines.append("chemistry-00\tchemistry-00")  # self-link
    link_lines.append("biology-00\tphilosophy-00")  # unassigned target
    link_lines.append("no-such-article\tbiology-01")  # unknown source

    (TOY / "category_tree.tsv").write_text("\n".join(tree_lines) + "\n", encoding="utf-8")
    (TOY / "articles.tsv").write_text("\n".join(article_lines) + "\n", encoding="utf-8")
    (TOY / "links.tsv").write_text("\n".join(link_lines) + "\n", encoding="utf-8")

    shutil.copy(TABLE / "table1.csv", TOY / "table1.csv")
    shutil.copy(TABLE / "table1.partition.json", TOY / "table1.partition.json")

    config = {
        "articles": "articles.tsv",
        "links": "links.tsv",
        "tree": "category_tree.tsv",
        "roots": ROOTS,
        "depth": 1,
        "min_area_size": None,
        "sample": {"k": 6, "rounds": 4000, "seed": 2026, "normalize": True},
        "focus": ["Bioinformatics", "Biochemistry"],
        "review_table": "table1.csv",
        "partition": "table1.partition.json",
        "out": "out",
    }
    (TOY / "config.json").write_text(json.dumps(config, indent=2) + "\n", encoding="utf-8")
    print(f"wrote toy corpus to {TOY} ({len(article_lines) - 1} articles, "
          f"{len(link_lines) - 1} link lines)")


if __name__ == "__main__":
    main()
