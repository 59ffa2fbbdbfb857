"""Generators of the prime ideals of rank-sequence components.

For a vertex ``x`` the symbolic matrices ``H_x`` (arrows into ``x`` side by
side) and ``T_x`` (arrows out of ``x`` stacked) give four families:
minors of ``H_x`` and ``T_x``, the entries of ``T_x H_x`` and the traces of
loops at ``x``.  A fifth family, the span of group translates of extra
equations, is computed through the infinitesimal ``gl(d(x))`` action.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from . import exactla as la
from .polynomial import Polynomial, VariableId, format_polynomial
from .quiver import Algebra, Quiver, QuiverError, SplitContext, is_node

TAGS = ("minor_H", "minor_T", "product_TH", "trace_loop", "saturated_P")


@dataclass(frozen=True)
class SymbolicMatrix:
    nrows: int
    ncols: int
    entries: tuple[tuple[Polynomial, ...], ...]

    def __getitem__(self, ij) -> Polynomial:
        return self.entries[ij[0]][ij[1]]

    def __matmul__(self, other: "SymbolicMatrix") -> "SymbolicMatrix":
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch")
        rows = []
        for i in range(self.nrows):
            row = []
            for j in range(other.ncols):
                acc = Polynomial()
                for k in range(self.ncols):
                    acc = acc + self.entries[i][k] * other.entries[k][j]
                row.append(acc)
            rows.append(tuple(row))
        return SymbolicMatrix(self.nrows, other.ncols, tuple(rows))


def generic_matrix(arrow: str, nrows: int, ncols: int) -> SymbolicMatrix:
    return SymbolicMatrix(nrows, ncols, tuple(
        tuple(Polynomial.var(VariableId(arrow, i + 1, j + 1)) for j in range(ncols))
        for i in range(nrows)))


def _hcat(blocks: Sequence[SymbolicMatrix], nrows: int) -> SymbolicMatrix:
    rows = tuple(tuple(p for b in blocks for p in b.entries[i]) for i in range(nrows))
    return SymbolicMatrix(nrows, sum(b.ncols for b in blocks), rows)


def _vcat(blocks: Sequence[SymbolicMatrix], ncols: int) -> SymbolicMatrix:
    rows = tuple(r for b in blocks for r in b.entries)
    return SymbolicMatrix(len(rows), ncols, rows)


def build_H(q: Quiver, d: Mapping[str, int], x: str) -> SymbolicMatrix:
    q.check_vertex(x)
    return _hcat([generic_matrix(a.id, d[x], d[a.tail]) for a in q.arrows_into(x)], d[x])


def build_T(q: Quiver, d: Mapping[str, int], x: str) -> SymbolicMatrix:
    q.check_vertex(x)
    return _vcat([generic_matrix(a.id, d[a.head], d[x]) for a in q.arrows_out_of(x)], d[x])


def minors(m: SymbolicMatrix, k: int) -> list[Polynomial]:
    """All ``k x k`` minors, row subsets outer, column subsets inner, both lexicographic."""
    if k < 1:
        raise ValueError("minor size must be positive")
    if k > m.nrows or k > m.ncols:
        return []
    out = []
    for rows in itertools.combinations(range(m.nrows), k):
        memo: dict[tuple[int, ...], Polynomial] = {}

        def det(cols: tuple[int, ...], depth: int) -> Polynomial:
            # Laplace expansion along row rows[depth] over the column subset
            if not cols:
                return Polynomial.const(1)
            if cols in memo:
                return memo[cols]
            r = rows[depth]
            acc = Polynomial()
            for pos, c in enumerate(cols):
                e = m.entries[r][c]
                if e.is_zero():
                    continue
                sub = det(cols[:pos] + cols[pos + 1:], depth + 1)
                term = e * sub
                acc = acc - term if pos % 2 else acc + term
            memo[cols] = acc
            return acc

        for cols in itertools.combinations(range(m.ncols), k):
            out.append(det(cols, 0))
    return out


@dataclass
class GeneratorSet:
    generators: list[tuple[Polynomial, str]] = field(default_factory=list)
    context: dict = field(default_factory=dict)

    def polynomials(self) -> list[Polynomial]:
        return [p for p, _ in self.generators]

    def by_tag(self, tag: str) -> list[Polynomial]:
        return [p for p, t in self.generators if t == tag]

    def __len__(self) -> int:
        return len(self.generators)

    def __iter__(self):
        return iter(self.generators)

    def to_json(self) -> dict:
        return {
            "context": self.context,
            "generators": [{"tag": t, "degree": p.degree(), "polynomial": format_polynomial(p)}
                           for p, t in self.generators],
        }


def _canonical(gens: Iterable[tuple[Polynomial, str]]) -> list[tuple[Polynomial, str]]:
    seen: dict[Polynomial, tuple[Polynomial, str]] = {}
    for p, tag in gens:
        if p.is_zero():
            continue
        key = p.normalized()
        if key not in seen:
            seen[key] = (p, tag)
    return sorted(seen.values(), key=lambda pt: pt[0].sort_key())


def vertex_families(q: Quiver, d: Mapping[str, int], x: str, r: int) -> list[tuple[Polynomial, str]]:
    """Families (1)-(4) at a single vertex for ``x``-rank ``r``."""
    H = build_H(q, d, x)
    T = build_T(q, d, x)
    gens = [(p, "minor_H") for p in minors(H, r + 1)]
    gens += [(p, "minor_T") for p in minors(T, d[x] - r + 1)]
    TH = T @ H
    gens += [(p, "product_TH") for row in TH.entries for p in row]
    for a in q.loops_at(x):
        tr = Polynomial()
        for i in range(d[x]):
            tr = tr + Polynomial.var(VariableId(a.id, i + 1, i + 1))
        gens.append((tr, "trace_loop"))
    return gens


def _as_quiver(Q) -> Quiver:
    return Q.quiver if isinstance(Q, Algebra) else Q


def generators_for_component(Q, d: Mapping[str, int], r: Mapping[str, int]) -> GeneratorSet:
    q = _as_quiver(Q)
    gens = []
    for x in q.vertices:
        if not 0 <= r[x] <= d[x]:
            raise QuiverError(f"rank {r[x]} at {x!r} outside [0, {d[x]}]")
        gens += vertex_families(q, d, x, r[x])
    ctx = {"d": {v: d[v] for v in q.vertices}, "r": {v: r[v] for v in q.vertices},
           "vertex": "all vertices"}
    return GeneratorSet(_canonical(gens), ctx)


# ---------------------------------------------------------------------------
# saturation under GL(d(x))


class _SparseSpan:
    """Incremental echelon basis of sparse coefficient vectors over QQ."""

    def __init__(self):
        self.rows: dict[object, dict] = {}  # pivot monomial -> reduced row with pivot coeff 1
        self.order: list = []

    def reduce(self, vec: dict) -> dict:
        vec = dict(vec)
        for piv in self.order:
            c = vec.get(piv)
            if c:
                for m, v in self.rows[piv].items():
                    nv = vec.get(m, 0) - c * v
                    if nv:
                        vec[m] = nv
                    else:
                        vec.pop(m, None)
        return vec

    def add(self, vec: dict) -> bool:
        red = self.reduce(vec)
        if not red:
            return False
        piv = min(red)
        c = red[piv]
        row = {m: v / c for m, v in red.items()}
        for other in self.order:
            oc = self.rows[other].get(piv)
            if oc:
                r = self.rows[other]
                for m, v in row.items():
                    nv = r.get(m, 0) - oc * v
                    if nv:
                        r[m] = nv
                    else:
                        r.pop(m, None)
        self.rows[piv] = row
        self.order.append(piv)
        return True

    def __len__(self) -> int:
        return len(self.order)


def gl_derivation(p: Polynomial, q: Quiver, x: str, i: int, j: int, dx: int) -> Polynomial:
    """Apply ``E_ij`` of ``gl(d(x))`` (1-based) to ``p``.

    ``sum_{h a = x} sum_c x_{a,i,c} d/dx_{a,j,c} - sum_{t a = x} sum_r x_{a,r,j} d/dx_{a,r,i}``
    """
    out = Polynomial()
    for a in q.arrows:
        if a.head == x:
            cols = {v.col for v in p.variables() if v.arrow == a.id and v.row == j}
            for c in cols:
                out = out + Polynomial.var(VariableId(a.id, i, c)) * p.derivative(VariableId(a.id, j, c))
        if a.tail == x:
            rows = {v.row for v in p.variables() if v.arrow == a.id and v.col == i}
            for rr in rows:
                out = out - Polynomial.var(VariableId(a.id, rr, j)) * p.derivative(VariableId(a.id, rr, i))
    return out


def saturate_span(P: Sequence[Polynomial], x: str, d: Mapping[str, int], Q) -> list[Polynomial]:
    """Basis of the smallest ``gl(d(x))``-stable subspace containing ``P``.

    Members of ``P`` that are independent are kept verbatim; new elements are
    appended in the order they are discovered.
    """
    q = _as_quiver(Q)
    q.check_vertex(x)
    for p in P:
        if not p.is_homogeneous():
            raise ValueError(f"inhomogeneous input polynomial {p}")
    dx = d[x]
    spans: dict[int, _SparseSpan] = {}
    basis: list[Polynomial] = []
    queue: list[Polynomial] = []

    def offer(p: Polynomial) -> None:
        if p.is_zero():
            return
        span = spans.setdefault(p.degree(), _SparseSpan())
        if span.add(p.terms):
            basis.append(p)
            queue.append(p)

    for p in P:
        offer(p)
    while queue:
        p = queue.pop(0)
        for i in range(1, dx + 1):
            for j in range(1, dx + 1):
                offer(gl_derivation(p, q, x, i, j, dx))
    return basis


def split_to_ambient(p: Polynomial, ctx: SplitContext) -> Polynomial:
    """Rewrite a polynomial in split-side variables in the original coordinates.

    Rows of an arrow into ``x_h`` stay where they are; columns of an arrow
    out of ``x_t`` shift right by the rank, matching the embedding.
    """
    def image(v: VariableId) -> Polynomial:
        kind = ctx.incident.get(v.arrow)
        if kind in ("out", "loop"):
            return Polynomial.var(VariableId(v.arrow, v.row, v.col + ctx.rank))
        return Polynomial.var(v)

    return p.substitute(image)


def generators_relative(A: Algebra, x: str, d: Mapping[str, int], r: int,
                        P: Sequence[Polynomial] = ()) -> GeneratorSet:
    """Families (1)-(4) at ``x`` plus the saturation of ``P``.

    ``P`` must already be written in the variables of ``rep_{kQ}(d)``; use
    :func:`split_to_ambient` for equations given on the split side.  That
    ``P`` cuts out the split-side variety is the caller's responsibility.
    """
    if not is_node(A, x):
        raise QuiverError(f"vertex {x!r} is not a node")
    q = A.quiver
    if not 0 <= r <= d[x]:
        raise QuiverError(f"rank {r} outside [0, {d[x]}]")
    gens = vertex_families(q, d, x, r)
    gens += [(p, "saturated_P") for p in saturate_span(list(P), x, d, q)]
    ctx = {"d": {v: d[v] for v in q.vertices}, "r": {x: r}, "vertex": x}
    return GeneratorSet(_canonical(gens), ctx)


# ---------------------------------------------------------------------------
# evaluation and export


def ambient_variables(q: Quiver, d: Mapping[str, int]) -> list[VariableId]:
    return [VariableId(a.id, i + 1, j + 1)
            for a in q.arrows for i in range(d[a.head]) for j in range(d[a.tail])]


def evaluate(p: Polynomial, M) -> object:
    """Evaluate at a representation; rational coefficients reduce into its field."""
    values = {}
    for v in p.variables():
        try:
            m = M.matrices[v.arrow]
        except KeyError:
            raise QuiverError(f"representation has no arrow {v.arrow!r}") from None
        if not (1 <= v.row <= m.nrows and 1 <= v.col <= m.ncols):
            raise QuiverError(f"variable {v.name} outside the {m.shape} matrix of {v.arrow!r}")
        values[v] = m.rows[v.row - 1][v.col - 1]
    return p.evaluate(values, M.field)


def export(G: GeneratorSet, fmt: str, q: Quiver | None = None,
           d: Mapping[str, int] | None = None) -> str:
    """Render as plain text, a Macaulay2 script or a Singular script.

    Plain text is one polynomial per line; an empty set renders as the single
    comment line ``# 0 generators``.  The script formats declare every
    ambient variable when ``q`` and ``d`` are given, otherwise only the
    variables that occur.
    """
    polys = G.polynomials()
    if q is not None and d is not None:
        variables = ambient_variables(q, d)
    else:
        variables = sorted({v for p in polys for v in p.variables()})
    names = [v.name for v in variables]
    if fmt == "plain":
        if not polys:
            return "# 0 generators\n"
        return "".join(format_polynomial(p) + "\n" for p in polys)
    if fmt == "macaulay2":
        body = ",\n  ".join(format_polynomial(p) for p in polys) or "0_R"
        return f"R = QQ[{', '.join(names)}];\nI = ideal(\n  {body}\n  );\n"
    if fmt == "singular":
        varlist = ", ".join(names) if names else "dummy"
        body = ",\n  ".join(format_polynomial(p) for p in polys) or "0"
        return f"ring R = 0, ({varlist}), dp;\nideal I =\n  {body};\n"
    raise ValueError(f"unknown export format {fmt!r}")


def polynomial_vector_basis(polys: Sequence[Polynomial]) -> tuple[list, la.Matrix]:
    """Coefficient matrix (rows = polynomials) over QQ with a shared monomial order."""
    monos = sorted({m for p in polys for m in p.terms})
    index = {m: i for i, m in enumerate(monos)}
    rows = []
    for p in polys:
        row = [Fraction(0)] * len(monos)
        for m, c in p.terms.items():
            row[index[m]] = c
        rows.append(row)
    return monos, la.matrix(la.QQ, rows, ncols=len(monos))
