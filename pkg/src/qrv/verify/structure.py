"""Endomorphism dimensions and brute-force semistability over tiny fields."""

from __future__ import annotations

import itertools
from functools import lru_cache
from typing import Mapping

from .. import exactla as la
from ..quiver import Algebra, QuiverError, Representation

SUBSPACE_BOUND = 6


def endomorphism_dim(A: Algebra | None, M: Representation) -> int:
    """``dim End(M)``: solutions of ``phi_h M_a = M_a phi_t`` for every arrow."""
    if A is not None and not M.satisfies(A):
        raise QuiverError("representation violates the relations")
    q = M.quiver
    F = M.field
    d = M.dims
    offset = {}
    n = 0
    for v in q.vertices:
        offset[v] = n
        n += d[v] * d[v]
    rows = []
    for a in q.arrows:
        m = M.matrices[a.id]
        h, t = a.head, a.tail
        # entry (i, j) of phi_h M - M phi_t
        for i in range(d[h]):
            for j in range(d[t]):
                row = [F.zero] * n
                for k in range(d[h]):
                    c = m.rows[k][j]
                    if c != 0:
                        idx = offset[h] + i * d[h] + k
                        row[idx] = F(row[idx] + c)
                for k in range(d[t]):
                    c = m.rows[i][k]
                    if c != 0:
                        idx = offset[t] + k * d[t] + j
                        row[idx] = F(row[idx] - c)
                rows.append(row)
    if not rows:
        return n
    return n - la.rank(la.matrix(F, rows, ncols=n))


def is_schur(A: Algebra | None, M: Representation) -> bool:
    return endomorphism_dim(A, M) == 1


@lru_cache(maxsize=None)
def subspaces(n: int, q: int) -> tuple[tuple[tuple[tuple[int, ...], ...], frozenset], ...]:
    """All subspaces of ``F_q^n`` as ``(rref basis, set of members)``.

    Each subspace appears once, keyed by its reduced row echelon basis.
    """
    out = []
    for k in range(n + 1):
        for pivots in itertools.combinations(range(n), k):
            free = [(i, j) for i, pc in enumerate(pivots) for j in range(pc + 1, n)
                    if j not in pivots]
            for values in itertools.product(range(q), repeat=len(free)):
                rows = [[0] * n for _ in range(k)]
                for i, pc in enumerate(pivots):
                    rows[i][pc] = 1
                for (i, j), val in zip(free, values):
                    rows[i][j] = val
                basis = tuple(tuple(r) for r in rows)
                members = frozenset(
                    tuple(sum(c * r[j] for c, r in zip(cs, basis)) % q for j in range(n))
                    for cs in itertools.product(range(q), repeat=k))
                out.append((basis, members))
    return tuple(out)


def _apply(m: la.Matrix, v: tuple[int, ...], q: int) -> tuple[int, ...]:
    return tuple(sum(int(x) * y for x, y in zip(row, v)) % q for row in m.rows)


def subrepresentation_dims(M: Representation) -> set[tuple[int, ...]]:
    """Dimension vectors of all subrepresentations, found by enumerating subspaces."""
    F = M.field
    q = F.characteristic
    if q not in (2, 3):
        raise ValueError("subrepresentation enumeration needs F_2 or F_3")
    quiver = M.quiver
    d = M.dims
    if sum(d.values()) > SUBSPACE_BOUND:
        raise ValueError(f"total dimension exceeds {SUBSPACE_BOUND}")
    verts = list(quiver.vertices)
    pos = {v: i for i, v in enumerate(verts)}
    # arrows checkable once both endpoints are chosen
    checks: dict[int, list] = {i: [] for i in range(len(verts))}
    for a in quiver.arrows:
        checks[max(pos[a.tail], pos[a.head])].append(a)
    found: set[tuple[int, ...]] = set()
    chosen: list = [None] * len(verts)

    def rec(i: int) -> None:
        if i == len(verts):
            found.add(tuple(len(chosen[k][0]) for k in range(len(verts))))
            return
        for sub in subspaces(d[verts[i]], q):
            chosen[i] = sub
            ok = True
            for a in checks[i]:
                basis_t = chosen[pos[a.tail]][0]
                members_h = chosen[pos[a.head]][1]
                m = M.matrices[a.id]
                if any(_apply(m, b, q) not in members_h for b in basis_t):
                    ok = False
                    break
            if ok:
                rec(i + 1)
        chosen[i] = None

    rec(0)
    return found


def theta_pairing(theta: Mapping[str, int], dims: tuple[int, ...], vertices) -> int:
    return sum(theta[v] * n for v, n in zip(vertices, dims))


def is_semistable_bruteforce(A: Algebra | None, M: Representation, theta: Mapping[str, int],
                             stable: bool = False, sub_dims: set | None = None) -> bool:
    """King semistability by enumerating every subrepresentation.

    With ``theta . d != 0`` the answer is ``False``.  ``stable=True`` asks for
    strict negativity on proper nonzero subrepresentations.
    """
    verts = list(M.quiver.vertices)
    total = tuple(M.dims[v] for v in verts)
    if theta_pairing(theta, total, verts) != 0:
        return False
    if A is not None and not M.satisfies(A):
        raise QuiverError("representation violates the relations")
    if not stable and all(theta[v] == 0 for v in verts if M.dims[v]):
        # every subrepresentation pairs to zero
        return True
    if sub_dims is None:
        sub_dims = subrepresentation_dims(M)
    zero = tuple(0 for _ in verts)
    for dims in sub_dims:
        w = theta_pairing(theta, dims, verts)
        if w > 0:
            return False
        if stable and w == 0 and dims not in (zero, total):
            return False
    return True
