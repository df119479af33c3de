"""Seeded force-directed layout for the network diagram."""
from __future__ import annotations

import numpy as np


def spring_layout(
    n: int, edges: list[tuple[int, int, float]], seed: int, iterations: int = 200
) -> np.ndarray:
    """Fruchterman-Reingold positions in the unit square, deterministic per seed."""
    rng = np.random.default_rng(seed)
    pos = rng.uniform(-0.5, 0.5, size=(n, 2))
    if n == 1:
        return np.array([[0.5, 0.5]])

    k = 1.0 / np.sqrt(n)
    adjacency = np.zeros((n, n))
    for u, v, w in edges:
        adjacency[u, v] = adjacency[v, u] = w
    if adjacency.max() > 0:
        adjacency /= adjacency.max()

    temperature = 0.1
    for _ in range(iterations):
        delta = pos[:, None, :] - pos[None, :, :]
        dist = np.linalg.norm(delta, axis=-1)
        np.fill_diagonal(dist, 1.0)
        repulsion = (k * k / dist**2)[:, :, None] * delta
        attraction = (adjacency * dist / k)[:, :, None] * delta
        force = (repulsion - attraction).sum(axis=1)
        norm = np.linalg.norm(force, axis=1, keepdims=True)
        norm[norm == 0] = 1.0
        pos += force / norm * min(temperature, 1.0)
        temperature *= 0.97

    span = pos.max(axis=0) - pos.min(axis=0)
    span[span == 0] = 1.0
    return (pos - pos.min(axis=0)) / span
