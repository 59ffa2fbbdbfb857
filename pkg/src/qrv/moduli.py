"""Weights and the behaviour of semistable representations around nodes."""

from __future__ import annotations

from typing import Iterable, Mapping

from . import exactla as la
from .quiver import (Algebra, MonomialRelations, Quiver, QuiverError, Representation, h_matrix,
                     is_node, parse_vertex_map, t_matrix)

CASE_A, CASE_B, CASE_C, VIOLATION = "case_a", "case_b", "case_c", "violation"


def parse_weight(text: str, q: Quiver) -> dict[str, int]:
    """``"v1:w1,v2:w2"``; unlisted vertices get weight 0."""
    return parse_vertex_map(text, q)


def check_weight(q: Quiver, theta: Mapping[str, int]) -> dict[str, int]:
    if set(theta) != set(q.vertices):
        raise QuiverError("weight domain does not match the vertex set")
    return {v: int(theta[v]) for v in q.vertices}


def reduce_by_weight(A: Algebra, theta: Mapping[str, int],
                     vertices: Iterable[str] | None = None) -> Algebra:
    """Delete the arrows that vanish on every ``theta``-semistable representation.

    At a node ``x``: ``theta(x) > 0`` drops arrows into ``x``, ``theta(x) < 0``
    drops arrows out of ``x``.  For ``theta(x) = 0`` a radical square zero
    algebra loses the vertex itself; otherwise only the arrows touching ``x``
    go.  ``vertices`` restricts where the rules are applied (default: all).
    """
    q = A.quiver
    theta = check_weight(q, theta)
    targets = list(q.vertices) if vertices is None else list(vertices)
    for x in targets:
        if not is_node(A, x):
            raise QuiverError(f"deletion rule invoked at non-node vertex {x!r}")
    rad2 = A.is_radical_square_zero()
    drop_vertices = set()
    drop_arrows = set()
    for x in targets:
        w = theta[x]
        if w > 0:
            drop_arrows.update(a.id for a in q.arrows_into(x))
        elif w < 0:
            drop_arrows.update(a.id for a in q.arrows_out_of(x))
        else:
            drop_arrows.update(a.id for a in q.arrows if x in (a.tail, a.head))
            if rad2:
                drop_vertices.add(x)
    vertices_out = tuple(v for v in q.vertices if v not in drop_vertices)
    arrows_out = tuple(a for a in q.arrows if a.id not in drop_arrows)
    paths = frozenset(p for p in A.relation_paths() if not set(p) & drop_arrows)
    return Algebra(Quiver(vertices_out, arrows_out), MonomialRelations(paths, False))


def restrict_representation(M: Representation, A2: Algebra) -> Representation:
    """Drop the vertices and arrows that are not in ``A2``'s quiver."""
    q2 = A2.quiver
    return Representation(q2, M.field, {v: M.dims[v] for v in q2.vertices},
                          {a.id: M.matrices[a.id] for a in q2.arrows})


def strip_node_maps(M: Representation, x: str) -> Representation:
    """Set every map touching ``x`` to zero."""
    mats = {}
    for a in M.quiver.arrows:
        m = M.matrices[a.id]
        mats[a.id] = la.zeros(M.field, m.nrows, m.ncols) if x in (a.tail, a.head) else m
    return Representation(M.quiver, M.field, dict(M.dims), mats)


def node_shape_check(A: Algebra, M: Representation, theta: Mapping[str, int], x: str) -> str:
    """Which shape a semistable ``M`` takes at the node ``x``.

    ``violation`` means ``M`` cannot have been semistable.
    """
    if not is_node(A, x):
        raise QuiverError(f"vertex {x!r} is not a node")
    w = theta[x]
    if w == 0:
        return CASE_C
    h = h_matrix(M, x)
    t = t_matrix(M, x)
    dx = M.dims[x]
    if w < 0:
        return CASE_A if la.rank(h) == dx and t.is_zero() else VIOLATION
    return CASE_B if h.is_zero() and la.rank(t) == dx else VIOLATION
