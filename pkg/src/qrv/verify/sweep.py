"""Exhaustive families of small quivers and dimension vectors.

Instances that differ by a vertex relabelling, or only by vertices of
dimension zero (which carry no data and impose no condition), are
reported once.
"""

from __future__ import annotations

import itertools
from typing import Iterator

from ..quiver import Arrow, Quiver


def _canonical_arrows(n: int, arrows: tuple[tuple[int, int], ...]) -> tuple:
    best = None
    for perm in itertools.permutations(range(n)):
        key = tuple(sorted((perm[t], perm[h]) for t, h in arrows))
        if best is None or key < best:
            best = key
    return best


def small_quivers(max_vertices: int, max_arrows: int) -> Iterator[Quiver]:
    """Quivers up to isomorphism, loops and parallel arrows allowed."""
    for n in range(1, max_vertices + 1):
        pairs = [(t, h) for t in range(n) for h in range(n)]
        seen = set()
        for m in range(max_arrows + 1):
            for arrows in itertools.combinations_with_replacement(pairs, m):
                key = _canonical_arrows(n, arrows)
                if key in seen:
                    continue
                seen.add(key)
                yield _build(n, key)


def _build(n: int, arrows) -> Quiver:
    names = [str(i + 1) for i in range(n)]
    return Quiver(tuple(names), tuple(
        Arrow(_arrow_name(k), names[t], names[h]) for k, (t, h) in enumerate(arrows)))


def _arrow_name(k: int) -> str:
    return "abcdefghijklmnopqrstuvwxyz"[k] if k < 26 else f"a{k}"


def _instance_key(q: Quiver, d: dict[str, int]) -> tuple:
    support = [v for v in q.vertices if d[v] > 0]
    pos = {v: i for i, v in enumerate(support)}
    arrows = [(pos[a.tail], pos[a.head]) for a in q.arrows if a.tail in pos and a.head in pos]
    dims = [d[v] for v in support]
    best = None
    for perm in itertools.permutations(range(len(support))):
        key = (tuple(sorted((perm[t], perm[h]) for t, h in arrows)),
               tuple(dims[perm.index(i)] for i in range(len(support))))
        if best is None or key < best:
            best = key
    return best


def small_instances(max_vertices: int = 3, max_arrows: int = 3, max_dim: int = 2,
                    max_ambient: int | None = None) -> Iterator[tuple[Quiver, dict[str, int]]]:
    """Pairs ``(Q, d)`` with ``0 <= d(x) <= max_dim``, up to relabelling and zero vertices."""
    seen = set()
    for q in small_quivers(max_vertices, max_arrows):
        for dims in itertools.product(range(max_dim + 1), repeat=len(q.vertices)):
            d = dict(zip(q.vertices, dims))
            key = _instance_key(q, d)
            if key in seen:
                continue
            seen.add(key)
            if max_ambient is not None and sum(d[a.tail] * d[a.head] for a in q.arrows) > max_ambient:
                continue
            yield q, d
