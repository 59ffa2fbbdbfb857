"""Quivers with monomial relations, representations, and node splitting.

Paths are written left to right in traversal order: ``(a, b)`` means "first
``a``, then ``b``" and needs ``head(a) == tail(b)``.  Evaluating a path on a
representation multiplies right to left, ``M_b @ M_a``.  A matrix for an
arrow ``a`` has ``d(head a)`` rows and ``d(tail a)`` columns.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from . import exactla as la
from .exactla import Field, Matrix


class QuiverError(ValueError):
    """Malformed quiver, relation, dimension vector or representation."""


@dataclass(frozen=True)
class Arrow:
    id: str
    tail: str
    head: str

    @property
    def is_loop(self) -> bool:
        return self.tail == self.head


@dataclass(frozen=True)
class Quiver:
    vertices: tuple[str, ...]
    arrows: tuple[Arrow, ...] = ()

    def __post_init__(self):
        if len(set(self.vertices)) != len(self.vertices):
            raise QuiverError("duplicate vertex id")
        for v in self.vertices:
            if not isinstance(v, str) or not v:
                raise QuiverError(f"vertex ids must be nonempty strings, got {v!r}")
        ids = [a.id for a in self.arrows]
        if len(set(ids)) != len(ids):
            raise QuiverError("duplicate arrow id")
        vs = set(self.vertices)
        for a in self.arrows:
            if not isinstance(a.id, str) or not a.id:
                raise QuiverError(f"arrow ids must be nonempty strings, got {a.id!r}")
            if a.tail not in vs or a.head not in vs:
                raise QuiverError(f"arrow {a.id!r} references an undeclared vertex")

    @classmethod
    def from_arrows(cls, vertices: Iterable[str], arrows: Iterable[tuple[str, str, str]]) -> "Quiver":
        return cls(tuple(vertices), tuple(Arrow(*a) for a in arrows))

    def arrow(self, aid: str) -> Arrow:
        for a in self.arrows:
            if a.id == aid:
                return a
        raise QuiverError(f"unknown arrow {aid!r}")

    def check_vertex(self, x: str) -> None:
        if x not in self.vertices:
            raise QuiverError(f"unknown vertex {x!r}")

    def arrows_into(self, x: str) -> list[Arrow]:
        return [a for a in self.arrows if a.head == x]

    def arrows_out_of(self, x: str) -> list[Arrow]:
        return [a for a in self.arrows if a.tail == x]

    def loops_at(self, x: str) -> list[Arrow]:
        return [a for a in self.arrows if a.tail == x and a.head == x]

    def composable_pairs(self) -> list[tuple[str, str]]:
        return [(a.id, b.id) for a in self.arrows for b in self.arrows if a.head == b.tail]

    def is_source(self, x: str) -> bool:
        return not self.arrows_into(x)

    def is_sink(self, x: str) -> bool:
        return not self.arrows_out_of(x)


@dataclass(frozen=True)
class MonomialRelations:
    paths: frozenset[tuple[str, ...]] = frozenset()
    rad_square_zero: bool = False


@dataclass(frozen=True)
class Algebra:
    """``kQ/I`` with ``I`` generated by paths of length at least two."""

    quiver: Quiver
    relations: MonomialRelations = field(default_factory=MonomialRelations)

    def __post_init__(self):
        q = self.quiver
        for path in self.relations.paths:
            if len(path) < 2:
                raise QuiverError(f"relation {list(path)} has length < 2")
            arrows = [q.arrow(a) for a in path]
            for a, b in zip(arrows, arrows[1:]):
                if a.head != b.tail:
                    raise QuiverError(
                        f"relation {list(path)} is not composable: head({a.id})={a.head} "
                        f"but tail({b.id})={b.tail}")

    @classmethod
    def radical_square_zero(cls, quiver: Quiver) -> "Algebra":
        return cls(quiver, MonomialRelations(frozenset(), True))

    @classmethod
    def path_algebra(cls, quiver: Quiver) -> "Algebra":
        return cls(quiver)

    def relation_paths(self) -> list[tuple[str, ...]]:
        """All generating paths, with the radical-square-zero flag expanded."""
        paths = set(self.relations.paths)
        if self.relations.rad_square_zero:
            paths.update(self.quiver.composable_pairs())
        order = {a.id: i for i, a in enumerate(self.quiver.arrows)}
        return sorted(paths, key=lambda p: (len(p), [order[a] for a in p]))

    def is_relation_pair(self, a: str, b: str) -> bool:
        return self.relations.rad_square_zero or (a, b) in self.relations.paths

    def is_radical_square_zero(self) -> bool:
        return all(self.is_relation_pair(a, b) for a, b in self.quiver.composable_pairs())


def is_node(A: Algebra, x: str) -> bool:
    """Every length-two path through ``x`` is a relation (sinks and sources qualify)."""
    q = A.quiver
    q.check_vertex(x)
    return all(A.is_relation_pair(a.id, b.id)
               for a in q.arrows_into(x) for b in q.arrows_out_of(x))


def fresh_name(base: str, suffix: str, taken: set[str]) -> str:
    name = f"{base}{suffix}"
    n = 1
    while name in taken:
        name = f"{base}{suffix}_{n}"
        n += 1
    return name


def _passes_through(path: tuple[str, ...], q: Quiver, x: str) -> bool:
    return any(q.arrow(a).head == x for a in path[:-1])


@dataclass(frozen=True)
class SplitContext:
    """How the vertex ``x`` of the original quiver was split.

    ``incident`` maps each arrow touching ``x`` to ``"in"``, ``"out"`` or
    ``"loop"``; that determines where its block sits inside the original
    matrix under the embedding.
    """

    split_vertex: str
    new_tail: str
    new_head: str
    rank: int
    dim: int
    incident: Mapping[str, str]

    def split_dims(self, d: Mapping[str, int]) -> dict[str, int]:
        return split_dimvec(d, self.split_vertex, self.rank, self.new_tail, self.new_head)


def split_node(A: Algebra, x: str) -> tuple[Algebra, str, str]:
    """Split the node ``x`` into a source ``x_t`` and a sink ``x_h``."""
    if not is_node(A, x):
        raise QuiverError(f"vertex {x!r} is not a node")
    q = A.quiver
    taken = set(q.vertices)
    xt = fresh_name(x, "_t", taken)
    xh = fresh_name(x, "_h", taken | {xt})
    vertices = []
    for v in q.vertices:
        vertices.extend([xt, xh] if v == x else [v])
    arrows = tuple(Arrow(a.id, xt if a.tail == x else a.tail, xh if a.head == x else a.head)
                   for a in q.arrows)
    paths = frozenset(p for p in A.relation_paths() if not _passes_through(p, q, x))
    return Algebra(Quiver(tuple(vertices), arrows), MonomialRelations(paths, False)), xt, xh


def split_context(A: Algebra, x: str, d: Mapping[str, int], r: int,
                  xt: str | None = None, xh: str | None = None) -> SplitContext:
    q = A.quiver
    q.check_vertex(x)
    if not 0 <= r <= d[x]:
        raise QuiverError(f"rank {r} outside [0, {d[x]}]")
    if xt is None or xh is None:
        _, xt, xh = split_node(A, x)
    incident = {}
    for a in q.arrows:
        if a.tail == x and a.head == x:
            incident[a.id] = "loop"
        elif a.head == x:
            incident[a.id] = "in"
        elif a.tail == x:
            incident[a.id] = "out"
    return SplitContext(x, xt, xh, r, d[x], incident)


def split_all_nodes(A: Algebra) -> tuple[Quiver, list[SplitContext]]:
    """Split every vertex; the result is bipartite with no relations.

    Contexts carry rank 0 and dimension 0 placeholders; they only record the
    naming and the arrow incidences.
    """
    for v in A.quiver.vertices:
        if not is_node(A, v):
            raise QuiverError(f"vertex {v!r} is not a node")
    cur = A
    contexts = []
    for v in A.quiver.vertices:
        ctx = split_context(cur, v, {v: 0}, 0)
        cur, _, _ = split_node(cur, v)
        contexts.append(ctx)
    return cur.quiver, contexts


def check_dimvec(q: Quiver, d: Mapping[str, int]) -> dict[str, int]:
    if set(d) != set(q.vertices):
        raise QuiverError("dimension vector domain does not match the vertex set")
    out = {}
    for v in q.vertices:
        n = d[v]
        if not isinstance(n, int) or isinstance(n, bool) or n < 0:
            raise QuiverError(f"dimension at {v!r} must be a nonnegative integer")
        out[v] = n
    return out


def split_dimvec(d: Mapping[str, int], x: str, r: int, xt: str | None = None,
                 xh: str | None = None) -> dict[str, int]:
    if x not in d:
        raise QuiverError(f"unknown vertex {x!r}")
    if not 0 <= r <= d[x]:
        raise QuiverError(f"rank {r} outside [0, {d[x]}]")
    taken = set(d)
    xt = xt or fresh_name(x, "_t", taken)
    xh = xh or fresh_name(x, "_h", taken | {xt})
    out = {}
    for v, n in d.items():
        if v == x:
            out[xt] = n - r
            out[xh] = r
        else:
            out[v] = n
    return out


@dataclass(frozen=True)
class Representation:
    """A point of ``rep_A(d)``: one matrix per arrow over a common field."""

    quiver: Quiver
    field: Field
    dims: Mapping[str, int]
    matrices: Mapping[str, Matrix]

    def __post_init__(self):
        check_dimvec(self.quiver, self.dims)
        if set(self.matrices) != {a.id for a in self.quiver.arrows}:
            raise QuiverError("representation must assign exactly one matrix per arrow")
        for a in self.quiver.arrows:
            m = self.matrices[a.id]
            if m.shape != (self.dims[a.head], self.dims[a.tail]):
                raise QuiverError(
                    f"matrix for {a.id!r} has shape {m.shape}, expected "
                    f"{(self.dims[a.head], self.dims[a.tail])}")
            if m.field != self.field:
                raise QuiverError(f"matrix for {a.id!r} lives over another field")

    @classmethod
    def zero(cls, q: Quiver, d: Mapping[str, int], field: Field = la.QQ) -> "Representation":
        return cls(q, field, dict(d), {a.id: la.zeros(field, d[a.head], d[a.tail]) for a in q.arrows})

    @classmethod
    def from_lists(cls, q: Quiver, d: Mapping[str, int], mats: Mapping[str, list],
                   field: Field = la.QQ) -> "Representation":
        out = {}
        for a in q.arrows:
            rows = mats.get(a.id)
            if rows is None:
                out[a.id] = la.zeros(field, d[a.head], d[a.tail])
            else:
                if len(rows) != d[a.head] or any(len(r) != d[a.tail] for r in rows):
                    raise QuiverError(f"matrix for {a.id!r} must be {d[a.head]}x{d[a.tail]}")
                out[a.id] = la.matrix(field, rows, ncols=d[a.tail])
        return cls(q, field, dict(d), out)

    def path_product(self, path: Iterable[str]) -> Matrix:
        path = list(path)
        m = self.matrices[path[0]]
        for a in path[1:]:
            m = la.matmul(self.matrices[a], m)
        return m

    def satisfies(self, A: Algebra) -> bool:
        return all(self.path_product(p).is_zero() for p in A.relation_paths())

    def to_json(self) -> dict:
        f = self.field
        return {
            "field": f.name,
            "dims": {v: self.dims[v] for v in self.quiver.vertices},
            "matrices": {a.id: [[f.format(x) for x in row] for row in self.matrices[a.id].rows]
                         for a in self.quiver.arrows},
        }


def representation_from_json(q: Quiver, doc: Mapping) -> Representation:
    unknown = set(doc) - {"field", "dims", "matrices"}
    if unknown:
        raise QuiverError(f"unknown keys in representation: {sorted(unknown)}")
    f = la.field_from_name(doc["field"])
    d = check_dimvec(q, dict(doc["dims"]))
    mats = doc.get("matrices", {})
    extra = set(mats) - {a.id for a in q.arrows}
    if extra:
        raise QuiverError(f"matrices given for unknown arrows {sorted(extra)}")
    return Representation.from_lists(q, d, mats, f)


def embed_representation(M: Representation, ctx: SplitContext, A: Algebra) -> Representation:
    """Embed a representation of the split algebra into ``rep_A(d)``.

    In-arrows get zero rows below, out-arrows zero columns on the left, and
    loops become ``[[0, M], [0, 0]]``.  The ``x_h`` block is listed first.
    """
    x, xt, xh = ctx.split_vertex, ctx.new_tail, ctx.new_head
    if M.dims.get(xh) != ctx.rank:
        raise QuiverError(f"representation has d({xh})={M.dims.get(xh)}, expected rank {ctx.rank}")
    if M.dims.get(xt, -1) + ctx.rank != ctx.dim:
        raise QuiverError("split dimensions do not add up to d(x)")
    f = M.field
    d = {v: M.dims[v] for v in A.quiver.vertices if v != x}
    d[x] = ctx.dim
    d = {v: d[v] for v in A.quiver.vertices}
    r, s = ctx.rank, ctx.dim - ctx.rank
    out = {}
    for a in A.quiver.arrows:
        m = M.matrices[a.id]
        kind = ctx.incident.get(a.id)
        if kind is None:
            out[a.id] = m
        elif kind == "in":
            out[a.id] = la.vstack([m, la.zeros(f, s, m.ncols)], m.ncols, f)
        elif kind == "out":
            out[a.id] = la.hstack([la.zeros(f, m.nrows, r), m], m.nrows, f)
        else:
            top = la.hstack([la.zeros(f, r, r), m], r, f)
            out[a.id] = la.vstack([top, la.zeros(f, s, r + s)], r + s, f)
    return Representation(A.quiver, f, d, out)


def h_matrix(M: Representation, x: str) -> Matrix:
    """Arrows into ``x`` side by side, in declaration order."""
    q = M.quiver
    q.check_vertex(x)
    return la.hstack([M.matrices[a.id] for a in q.arrows_into(x)], M.dims[x], M.field)


def t_matrix(M: Representation, x: str) -> Matrix:
    """Arrows out of ``x`` stacked vertically, in declaration order."""
    q = M.quiver
    q.check_vertex(x)
    return la.vstack([M.matrices[a.id] for a in q.arrows_out_of(x)], M.dims[x], M.field)


def x_rank(M: Representation, x: str) -> int:
    return la.rank(h_matrix(M, x))


def rank_vector(M: Representation) -> dict[str, int]:
    return {v: x_rank(M, v) for v in M.quiver.vertices}


# ---------------------------------------------------------------------------
# file format

_ALGEBRA_KEYS = {"vertices", "arrows", "relations", "radical_square_zero"}


def parse_algebra(text: str) -> Algebra:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise QuiverError(f"malformed document: {e}") from None
    return algebra_from_json(doc)


def algebra_from_json(doc) -> Algebra:
    if not isinstance(doc, dict):
        raise QuiverError("quiver document must be a JSON object")
    unknown = set(doc) - _ALGEBRA_KEYS
    if unknown:
        raise QuiverError(f"unknown keys: {sorted(unknown)}")
    if "vertices" not in doc:
        raise QuiverError("missing 'vertices'")
    vertices = doc["vertices"]
    if not isinstance(vertices, list):
        raise QuiverError("'vertices' must be a list")
    arrows = []
    for item in doc.get("arrows", []):
        if not isinstance(item, dict) or set(item) != {"id", "tail", "head"}:
            raise QuiverError(f"arrow entries need exactly id/tail/head, got {item!r}")
        arrows.append(Arrow(item["id"], item["tail"], item["head"]))
    q = Quiver(tuple(vertices), tuple(arrows))
    rels = doc.get("relations", [])
    if not isinstance(rels, list) or not all(isinstance(p, list) for p in rels):
        raise QuiverError("'relations' must be a list of arrow-id lists")
    flag = doc.get("radical_square_zero", False)
    if not isinstance(flag, bool):
        raise QuiverError("'radical_square_zero' must be a boolean")
    return Algebra(q, MonomialRelations(frozenset(tuple(p) for p in rels), flag))


def algebra_to_json(A: Algebra) -> dict:
    q = A.quiver
    order = {a.id: i for i, a in enumerate(q.arrows)}
    paths = sorted(A.relations.paths, key=lambda p: (len(p), [order[a] for a in p]))
    return {
        "vertices": list(q.vertices),
        "arrows": [{"id": a.id, "tail": a.tail, "head": a.head} for a in q.arrows],
        "relations": [list(p) for p in paths],
        "radical_square_zero": A.relations.rad_square_zero,
    }


def dump_algebra(A: Algebra) -> str:
    return json.dumps(algebra_to_json(A), indent=2)


def parse_vertex_map(text: str, q: Quiver | None = None) -> dict[str, int]:
    """Parse ``"v1:n1,v2:n2"``; vertices missing from the string default to 0."""
    out: dict[str, int] = {}
    if text.strip():
        for part in text.split(","):
            if ":" not in part:
                raise QuiverError(f"expected vertex:value, got {part!r}")
            v, n = part.rsplit(":", 1)
            v = v.strip()
            if v in out:
                raise QuiverError(f"vertex {v!r} given twice")
            try:
                out[v] = int(n)
            except ValueError:
                raise QuiverError(f"value for {v!r} is not an integer: {n!r}") from None
    if q is not None:
        for v in out:
            q.check_vertex(v)
        out = {v: out.get(v, 0) for v in q.vertices}
    return out

