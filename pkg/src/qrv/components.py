"""Irreducible components of representation varieties of radical square zero algebras.

A rank sequence ``r <= d`` labels the closure ``C_r`` of the locus where
``rank h_x = r(x)`` at every vertex.  With ``s = d - r``::

    u_x(r) = sum_{h a = x} s(t a) - r(x)
    v_x(r) = sum_{t a = x} r(h a) - s(x)

``C_r`` is nonempty iff every ``u_x >= 0``, and it is a component iff in
addition ``v_x >= 0`` wherever ``u_x`` exceeds the number of loops at ``x``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Mapping

from .exactla import rank
from .quiver import (Algebra, Quiver, QuiverError, Representation, SplitContext,
                     check_dimvec, t_matrix)


class NotRadicalSquareZero(QuiverError):
    pass


def _quiver(Q) -> Quiver:
    return Q.quiver if isinstance(Q, Algebra) else Q


def _algebra(Q) -> Algebra:
    """A bare quiver stands for its radical square zero algebra."""
    if isinstance(Q, Algebra):
        if not Q.is_radical_square_zero():
            raise NotRadicalSquareZero(
                "algebra is not radical square zero; split a node, supply the split-side "
                "components and saturate their labels instead")
        return Q
    return Algebra.radical_square_zero(Q)


def check_ranks(q: Quiver, d: Mapping[str, int], r: Mapping[str, int]) -> None:
    check_dimvec(q, d)
    if set(r) != set(q.vertices):
        raise QuiverError("rank sequence domain does not match the vertex set")
    for v in q.vertices:
        if not 0 <= r[v] <= d[v]:
            raise QuiverError(f"rank {r[v]} at {v!r} outside [0, {d[v]}]")


def u_value(Q, d: Mapping[str, int], r: Mapping[str, int], x: str) -> int:
    q = _quiver(Q)
    return sum(d[a.tail] - r[a.tail] for a in q.arrows_into(x)) - r[x]


def v_value(Q, d: Mapping[str, int], r: Mapping[str, int], x: str) -> int:
    q = _quiver(Q)
    return sum(r[a.head] for a in q.arrows_out_of(x)) - (d[x] - r[x])


def is_nonempty(Q, d: Mapping[str, int], r: Mapping[str, int]) -> bool:
    q = _quiver(Q)
    check_ranks(q, d, r)
    return all(u_value(q, d, r, x) >= 0 for x in q.vertices)


def is_component(Q, d: Mapping[str, int], r: Mapping[str, int]) -> bool:
    A = _algebra(Q)
    q = A.quiver
    if not is_nonempty(q, d, r):
        return False
    for x in q.vertices:
        if u_value(q, d, r, x) > len(q.loops_at(x)) and v_value(q, d, r, x) < 0:
            return False
    return True


def ambient_dimension(Q, d: Mapping[str, int]) -> int:
    q = _quiver(Q)
    return sum(d[a.tail] * d[a.head] for a in q.arrows)


def component_dimension(Q, d: Mapping[str, int], r: Mapping[str, int]) -> int:
    """Grassmannian fibres plus the split representation space."""
    q = _quiver(Q)
    if not is_nonempty(q, d, r):
        raise QuiverError(f"C_r is empty for r={dict(r)}")
    grass = sum(r[x] * (d[x] - r[x]) for x in q.vertices)
    return grass + sum((d[a.tail] - r[a.tail]) * r[a.head] for a in q.arrows)


def increment_rule_applies(Q, d: Mapping[str, int], r: Mapping[str, int], x: str) -> bool:
    """``C_r`` lies in ``C_{r + e_x}`` whenever ``u_x > l_x`` and ``v_x < 0``."""
    q = _quiver(Q)
    return u_value(q, d, r, x) > len(q.loops_at(x)) and v_value(q, d, r, x) < 0


@dataclass(frozen=True)
class ComponentRecord:
    d: Mapping[str, int]
    r: Mapping[str, int]
    nonempty: bool
    dimension: int | None
    is_component: bool
    algebra: Algebra | None = field(default=None, compare=False, repr=False)
    normal: bool = True
    rational_singularities: bool = True

    def to_json(self) -> dict:
        return {"r": dict(self.r), "nonempty": self.nonempty,
                "dimension": self.dimension, "is_component": self.is_component}


def rank_sequences(q: Quiver, d: Mapping[str, int]):
    """Every ``r <= d`` in lexicographic order along the vertex order."""
    for combo in itertools.product(*(range(d[v] + 1) for v in q.vertices)):
        yield dict(zip(q.vertices, combo))


def component_record(Q, d: Mapping[str, int], r: Mapping[str, int]) -> ComponentRecord:
    A = _algebra(Q)
    q = A.quiver
    ne = is_nonempty(q, d, r)
    return ComponentRecord(
        d=dict(d), r=dict(r), nonempty=ne,
        dimension=component_dimension(q, d, r) if ne else None,
        is_component=is_component(A, d, r), algebra=A)


def enumerate_components(Q, d: Mapping[str, int]) -> list[ComponentRecord]:
    A = _algebra(Q)
    q = A.quiver
    check_dimvec(q, d)
    loops = {x: len(q.loops_at(x)) for x in q.vertices}
    out = []
    for r in rank_sequences(q, d):
        ok = True
        for x in q.vertices:
            u = u_value(q, d, r, x)
            if u < 0 or (u > loops[x] and v_value(q, d, r, x) < 0):
                ok = False
                break
        if ok:
            out.append(ComponentRecord(dict(d), r, True, component_dimension(q, d, r), True, A))
    return out


# ---------------------------------------------------------------------------
# relative correspondence under splitting one node


@dataclass(frozen=True)
class SplitSideComponent:
    """An irreducible ``GL(d^x_r)``-stable closed subvariety of ``rep_{A^x}(d^x_r)``.

    Only the label is stored; ``xh_rank`` is the caller's claim about the
    generic rank of ``h_{x_h}`` on it.
    """

    algebra: Algebra
    dims: Mapping[str, int]
    ident: str
    xh_rank: int
    context: SplitContext


@dataclass(frozen=True)
class SaturatedComponent:
    algebra: Algebra
    dims: Mapping[str, int]
    ident: str
    vertex: str
    x_rank: int


@dataclass(frozen=True)
class SplitComponentLabel:
    split: SplitSideComponent
    xh_rank: int
    saturated: SaturatedComponent

    def to_json(self) -> dict:
        return {
            "split": {"id": self.split.ident, "dims": dict(self.split.dims)},
            "xh_rank": self.xh_rank,
            "saturated": {"id": self.saturated.ident, "dims": dict(self.saturated.dims),
                          "vertex": self.saturated.vertex, "x_rank": self.saturated.x_rank},
        }


def saturate_component_label(C: SplitSideComponent, A: Algebra) -> SplitComponentLabel:
    """Label of ``GL(d(x)) . C`` inside ``rep_A(d)``."""
    ctx = C.context
    if C.xh_rank != ctx.rank:
        raise QuiverError(f"claimed x_h-rank {C.xh_rank} differs from the split rank {ctx.rank}")
    if C.dims.get(ctx.new_head) != ctx.rank:
        raise QuiverError("split dimension vector does not match the split rank")
    d = {v: (ctx.dim if v == ctx.split_vertex else C.dims[v]) for v in A.quiver.vertices}
    ident = C.ident if ctx.rank == 0 else f"GL({ctx.split_vertex})*{C.ident}"
    sat = SaturatedComponent(A, d, ident, ctx.split_vertex, ctx.rank)
    return SplitComponentLabel(C, C.xh_rank, sat)


def intersect_label(label: SplitComponentLabel) -> SplitSideComponent:
    """Inverse direction: intersect the saturation with ``rep_{A^x}(d^x_r)``."""
    return label.split


def lemma_component_criterion(C: ComponentRecord | SplitSideComponent, M: Representation,
                              ctx: SplitContext) -> bool:
    """``t_{x_t}(M)`` injective certifies that ``GL(d(x)) . C`` is a component."""
    xt = ctx.new_tail
    if M.dims.get(xt) is None or M.dims[xt] != ctx.dim - ctx.rank:
        raise QuiverError(f"witness has wrong dimension at {xt!r}")
    t = t_matrix(M, xt)
    return rank(t) == ctx.dim - ctx.rank
