"""Probabilistic membership, containment and Jacobian checks, and brute-force oracles."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from .. import exactla as la
from ..components import _algebra, is_nonempty, rank_sequences
from ..ideals import GeneratorSet, evaluate, generators_for_component, polynomial_vector_basis
from ..polynomial import Polynomial, VariableId
from ..quiver import Algebra, Quiver, QuiverError, Representation
from .sampling import (CompiledPolynomials, Layout, SampleConfig, compile_generators,
                       sample_batch, schwartz_zippel_bound)

ORACLE_BOUND = 16
CHUNK = 1 << 17


@dataclass(frozen=True)
class Verdict:
    """A one-sided probabilistic answer; ``False`` is always certain."""

    value: bool
    error_bound: float
    trials: int
    seed: int

    def __bool__(self) -> bool:
        return self.value


@dataclass
class OracleReport:
    instance: dict
    achievable: set
    predicted: set
    agreement: bool
    counterexamples: list = field(default_factory=list)

    def to_json(self, test: str = "oracle", trials: int | None = None, seed: int | None = None) -> dict:
        return {
            "test": test,
            "instance": self.instance,
            "trials": trials,
            "seed": seed,
            "verdict": "pass" if self.agreement else "fail",
            "error_bound": 0.0,
            "counterexamples": [list(c) for c in self.counterexamples],
            "achievable": sorted(list(a) for a in self.achievable),
            "predicted": sorted(list(a) for a in self.predicted),
        }


def membership_test(N: Representation, G: GeneratorSet) -> bool:
    return all(evaluate(g, N) == 0 for g in G.polynomials())


def batch_membership(X: np.ndarray, compiled: CompiledPolynomials) -> np.ndarray:
    """Per point: do all compiled polynomials vanish?"""
    if compiled.count == 0:
        return np.ones(X.shape[0], dtype=bool)
    return ~(compiled(X) != 0).any(axis=1)


def containment_test(Q, d: Mapping[str, int], r: Mapping[str, int], r2: Mapping[str, int],
                     cfg: SampleConfig, points: np.ndarray | None = None) -> Verdict:
    """Is ``C_r`` inside ``C_r2``?  Generators of ``C_r2`` are evaluated on samples of ``C_r``."""
    A = _algebra(Q)
    q = A.quiver
    if not (is_nonempty(q, d, r) and is_nonempty(q, d, r2)):
        raise QuiverError("containment is only defined between nonempty C_r")
    p = cfg.field.characteristic
    G = generators_for_component(q, d, r2)
    if points is None:
        points = sample_batch(A, d, r, cfg)
    compiled = compile_generators(G, q, d, p)
    ok = bool(batch_membership(points, compiled).all())
    bound = schwartz_zippel_bound(compiled.degree, d, p, len(points)) if ok else 0.0
    return Verdict(ok, bound, len(points), cfg.seed)


def maximal_rank_sequences(Q, d: Mapping[str, int], cfg: SampleConfig) -> list[dict]:
    """Nonempty ``C_r`` not contained in any other, by :func:`containment_test`.

    Only ``r2 >= r`` are tried: every generator set of ``C_r2`` contains the
    ``(r2(x)+1)``-minors of ``H_x``, which cannot all vanish on a generic point
    of ``C_r`` once ``r(x) > r2(x)``.
    """
    A = _algebra(Q)
    q = A.quiver
    nonempty = [r for r in rank_sequences(q, d) if is_nonempty(q, d, r)]
    p = cfg.field.characteristic
    samples = {tuple(r.values()): sample_batch(A, d, r, cfg) for r in nonempty}
    compiled = {}
    out = []
    for r in nonempty:
        contained = False
        for r2 in nonempty:
            if r2 == r or any(r2[v] < r[v] for v in q.vertices):
                continue
            key = tuple(r2.values())
            if key not in compiled:
                compiled[key] = compile_generators(generators_for_component(q, d, r2), q, d, p)
            if batch_membership(samples[tuple(r.values())], compiled[key]).all():
                contained = True
                break
        if not contained:
            out.append(r)
    return out


# ---------------------------------------------------------------------------
# Jacobian


def _jacobian_entries(G: GeneratorSet | Sequence[Polynomial]):
    polys = G.polynomials() if isinstance(G, GeneratorSet) else list(G)
    entries = []
    for i, g in enumerate(polys):
        for v in sorted(g.variables()):
            entries.append((i, v, g.derivative(v)))
    return polys, entries


def jacobian_codim(G: GeneratorSet, N: Representation) -> int:
    """Rank of the Jacobian of ``G`` at ``N`` over ``N``'s field."""
    polys, entries = _jacobian_entries(G)
    layout = Layout.of(N.quiver, N.dims)
    if not polys:
        return 0
    F = N.field
    rows = [[F.zero] * layout.nvars for _ in polys]
    for i, v, dp in entries:
        rows[i][layout.index(v)] = evaluate(dp, N)
    return la.rank(la.matrix(F, rows, ncols=layout.nvars))


def batch_jacobian_codim(G: GeneratorSet, q: Quiver, d, X: np.ndarray, p: int) -> np.ndarray:
    """:func:`jacobian_codim` for every row of ``X`` (points mod ``p``)."""
    polys, entries = _jacobian_entries(G)
    layout = Layout.of(q, d)
    if not polys:
        return np.zeros(X.shape[0], dtype=np.int64)
    compiled = CompiledPolynomials([e[2] for e in entries], layout, p)
    vals = compiled(X)
    J = np.zeros((X.shape[0], len(polys), layout.nvars), dtype=np.int64)
    for k, (i, v, _) in enumerate(entries):
        J[:, i, layout.index(v)] = vals[:, k]
    return la.batch_rank_mod(J, p)


# ---------------------------------------------------------------------------
# brute force over tiny fields


def _relation_ok(A: Algebra, layout: Layout, X: np.ndarray, q_: int) -> np.ndarray:
    ok = np.ones(X.shape[0], dtype=bool)
    for path in A.relation_paths():
        prod = layout.block(X, path[0])
        for aid in path[1:]:
            prod = la.batch_matmul_mod(layout.block(X, aid), prod, q_)
        ok &= ~(prod != 0).reshape(X.shape[0], -1).any(axis=1)
    return ok


def _h_stack(layout: Layout, X: np.ndarray, x: str) -> np.ndarray:
    q = layout.quiver
    blocks = [layout.block(X, a.id) for a in q.arrows_into(x)]
    if not blocks:
        return np.zeros((X.shape[0], layout.dims[x], 0), dtype=np.int64)
    return np.concatenate(blocks, axis=2)


def enumerate_representations(A: Algebra, d: Mapping[str, int], q_: int):
    """Yield chunks of all points of ``rep_A(d)`` over ``F_q`` as flat arrays."""
    layout = Layout.of(A.quiver, d)
    n = layout.nvars
    total = q_ ** n
    powers = q_ ** np.arange(n, dtype=np.int64)
    for start in range(0, total, CHUNK):
        idx = np.arange(start, min(total, start + CHUNK), dtype=np.int64)
        X = (idx[:, None] // powers[None, :]) % q_
        yield X[_relation_ok(A, layout, X, q_)]


def achievable_rank_oracle(Q, d: Mapping[str, int], q_: int) -> OracleReport:
    """Rank vectors realised over ``F_q`` against ``{r : u_x(r) >= 0}``."""
    A = _algebra(Q)
    quiver = A.quiver
    if q_ not in (2, 3):
        raise ValueError("oracle field size must be 2 or 3")
    layout = Layout.of(quiver, d)
    if layout.nvars > ORACLE_BOUND:
        raise ValueError(f"ambient dimension {layout.nvars} exceeds the enumeration bound {ORACLE_BOUND}")
    achieved: set[tuple[int, ...]] = set()
    for X in enumerate_representations(A, d, q_):
        if not len(X):
            continue
        ranks = np.stack([la.batch_rank_mod(_h_stack(layout, X, x), q_) for x in quiver.vertices], axis=1)
        achieved.update(map(tuple, np.unique(ranks, axis=0).tolist()))
    predicted = {tuple(r.values()) for r in rank_sequences(quiver, d) if is_nonempty(quiver, d, r)}
    diff = sorted(achieved ^ predicted)
    inst = {"vertices": list(quiver.vertices),
            "arrows": [[a.id, a.tail, a.head] for a in quiver.arrows],
            "d": dict(d), "q": q_}
    return OracleReport(inst, achieved, predicted, not diff, diff)


# ---------------------------------------------------------------------------
# saturation oracle


def _random_rational_invertible(rng: random.Random, n: int, bound: int = 5) -> la.Matrix:
    while True:
        g = la.matrix(la.QQ, [[rng.randint(-bound, bound) for _ in range(n)] for _ in range(n)], ncols=n)
        if la.det(g) != 0:
            return g


def translate(p: Polynomial, Q, x: str, g: la.Matrix) -> Polynomial:
    """``p`` composed with the action of ``g`` at ``x``: ``X_a -> g X_a`` into ``x``,
    ``X_a -> X_a g^-1`` out of ``x``."""
    q = Q.quiver if isinstance(Q, Algebra) else Q
    ginv = la.inverse(g)
    n = g.nrows
    kinds = {}
    for a in q.arrows:
        if a.head == x and a.tail == x:
            kinds[a.id] = "loop"
        elif a.head == x:
            kinds[a.id] = "in"
        elif a.tail == x:
            kinds[a.id] = "out"

    def var(aid, i, j):
        return Polynomial.var(VariableId(aid, i, j))

    def image(v: VariableId) -> Polynomial:
        kind = kinds.get(v.arrow)
        i, j = v.row - 1, v.col - 1
        if kind == "in":
            return _lin({(v.arrow, k + 1, v.col): g[i, k] for k in range(n)})
        if kind == "out":
            return _lin({(v.arrow, v.row, k + 1): ginv[k, j] for k in range(n)})
        if kind == "loop":
            return _lin({(v.arrow, k + 1, l + 1): g[i, k] * ginv[l, j]
                         for k in range(n) for l in range(n)})
        return var(*v)

    return p.substitute(image)


def _lin(coeffs: dict) -> Polynomial:
    return Polynomial({(VariableId(*k),): c for k, c in coeffs.items() if c})


def independent_subset(polys: Sequence[Polynomial]) -> list[Polynomial]:
    """A maximal linearly independent sublist, chosen greedily in order."""
    if not polys:
        return []
    _, M = polynomial_vector_basis(polys)
    _, pivots = la.rref(la.transpose(M))
    return [polys[i] for i in pivots]


def random_translate_span(P: Sequence[Polynomial], x: str, d: Mapping[str, int], Q,
                          cfg: SampleConfig) -> list[Polynomial]:
    """Basis of the span of ``p . g`` for ``cfg.trials`` random rational ``g`` at ``x``."""
    if not P:
        return []
    rng = random.Random(cfg.seed)
    translates = list(P)
    for _ in range(cfg.trials):
        g = _random_rational_invertible(rng, d[x])
        translates.extend(translate(p, Q, x, g) for p in P)
    return independent_subset(translates)


def span_dimension(polys: Sequence[Polynomial]) -> int:
    if not polys:
        return 0
    return la.rank(polynomial_vector_basis(polys)[1])


def same_span(P1: Sequence[Polynomial], P2: Sequence[Polynomial]) -> bool:
    """Exact mutual containment of linear spans."""
    a, b = span_dimension(P1), span_dimension(P2)
    return a == b == span_dimension(list(P1) + list(P2))


# ---------------------------------------------------------------------------
# the one-loop identities


def one_loop_matrix(loop: str) -> list[list[Polynomial]]:
    return [[Polynomial.var(VariableId(loop, i, j)) for j in (1, 2)] for i in (1, 2)]


def cayley_hamilton_certificate(g: Polynomial, loop: str) -> tuple[Polynomial, Polynomial] | None:
    """Multipliers ``(f, h)`` with ``g = f * tr X + h * det X`` for a 2x2 loop matrix.

    Scalar multiples of ``tr X``, ``det X`` and the entries of ``X^2`` are
    covered, the latter by ``X^2 = tr(X) X - det(X) I``.  The certificate is
    checked by exact polynomial arithmetic before it is returned.
    """
    X = one_loop_matrix(loop)
    tr = X[0][0] + X[1][1]
    det = X[0][0] * X[1][1] - X[0][1] * X[1][0]
    candidates = [(Polynomial.const(c), Polynomial()) for c in _scalar_ratio(g, tr)]
    candidates += [(Polynomial(), Polynomial.const(c)) for c in _scalar_ratio(g, det)]
    for i in range(2):
        for j in range(2):
            sq = X[i][0] * X[0][j] + X[i][1] * X[1][j]
            for c in _scalar_ratio(g, sq):
                candidates.append((X[i][j] * c, Polynomial.const(-c if i == j else 0)))
    for f, h in candidates:
        if (f * tr + h * det - g).is_zero():
            return f, h
    return None


def _scalar_ratio(g: Polynomial, base: Polynomial) -> list[Fraction]:
    if g.is_zero() or base.is_zero():
        return []
    m, c = base.sorted_terms()[0]
    gc = g.terms.get(m)
    if gc is None:
        return []
    ratio = gc / c
    return [ratio] if (g - base * ratio).is_zero() else []


# ---------------------------------------------------------------------------
# separation


def rank_raising_point(Q, d: Mapping[str, int], r: Mapping[str, int], x: str,
                       field: la.Field = la.QQ) -> Representation | None:
    """A representation with ``x``-rank ``r(x) + 1`` and every other map zero.

    Rows ``0..r(x)`` of ``H_x`` get a single 1 in distinct columns.  ``None``
    when ``H_x`` is too small for that rank.
    """
    A = _algebra(Q)
    q = A.quiver
    k = r[x] + 1
    cols = [(a, j) for a in q.arrows_into(x) for j in range(d[a.tail])]
    if k > min(d[x], len(cols)):
        return None
    mats = {a.id: [[0] * d[a.tail] for _ in range(d[a.head])] for a in q.arrows}
    for i, (a, j) in enumerate(cols[:k]):
        mats[a.id][i][j] = 1
    return Representation.from_lists(q, d, mats, field)


def enumerate_rad2_representations(A: Algebra, d: Mapping[str, int], q_: int):
    """Yield every point of ``rep_A(d)`` over ``F_q`` for a radical square zero ``A``.

    Points are grouped by the images ``K_x`` of ``h_x``: each arrow ``t -> h``
    maps into ``K_h`` and kills ``K_t``, which is exactly the vanishing of
    all length-two paths; a point is kept when ``h_x`` really has image
    ``K_x``.  Each point is produced once.  Far fewer candidates than
    :func:`enumerate_representations` once the ambient dimension grows.
    """
    from .structure import subspaces

    A = _algebra(A)
    q = A.quiver
    F = la.GF(q_)
    layout = Layout.of(q, d)
    verts = list(q.vertices)

    def complement_coords(basis, n):
        # rows of B^{-1} past the first k, where B = [basis; standard completion]
        pivots = [next(j for j, c in enumerate(row) if c) for row in basis]
        rows = [list(r) for r in basis] + [[1 if j == c else 0 for j in range(n)]
                                           for c in range(n) if c not in pivots]
        if not rows:
            return np.zeros((0, 0), dtype=np.int64)
        Binv = la.inverse(la.transpose(la.matrix(F, rows, ncols=n)))
        return np.array(Binv.tolist(), dtype=np.int64)[len(basis):]

    for choice in itertools.product(*(subspaces(d[v], q_) for v in verts)):
        K = {v: np.array(c[0], dtype=np.int64).reshape(len(c[0]), d[v]) for v, c in zip(verts, choice)}
        S = {v: complement_coords(choice[i][0], d[v]) for i, v in enumerate(verts)}
        shapes = [(K[a.head].shape[0], S[a.tail].shape[0]) for a in q.arrows]
        sizes = [m * n for m, n in shapes]
        total = q_ ** sum(sizes)
        if total == 0:
            continue
        n = sum(sizes)
        idx = np.arange(total, dtype=np.int64)
        digits = (idx[:, None] // (q_ ** np.arange(n, dtype=np.int64))[None, :]) % q_
        X = np.zeros((total, layout.nvars), dtype=np.int64)
        pos = 0
        for a, (m, k), sz in zip(q.arrows, shapes, sizes):
            C = digits[:, pos:pos + sz].reshape(total, m, k)
            pos += sz
            Mt = (K[a.head].T[None] @ C @ S[a.tail][None]) % q_ if m and k else \
                np.zeros((total, d[a.head], d[a.tail]), dtype=np.int64)
            o = layout.offsets[a.id]
            X[:, o:o + d[a.head] * d[a.tail]] = Mt.reshape(total, -1)
        keep = np.ones(total, dtype=bool)
        for v in verts:
            keep &= la.batch_rank_mod(_h_stack(layout, X, v), q_) == K[v].shape[0]
        yield X[keep]
