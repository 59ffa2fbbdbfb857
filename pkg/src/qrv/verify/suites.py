"""Exhaustive or seeded runs of the structural checks over one instance."""

from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from typing import Mapping

from .. import exactla as la
from ..components import _algebra, is_nonempty, rank_sequences
from ..moduli import VIOLATION, node_shape_check, reduce_by_weight, restrict_representation, strip_node_maps
from ..quiver import (Algebra, QuiverError, Representation, embed_representation, is_node,
                      split_context, split_node, x_rank)
from .checks import enumerate_rad2_representations
from .sampling import Layout, _sample_point_rational
from .structure import SUBSPACE_BOUND, endomorphism_dim, is_semistable_bruteforce, subrepresentation_dims


def _endo_trial(job) -> dict:
    A, d, x, r, seed, i = job
    Ax, xt, xh = split_node(A, x)
    ctx = split_context(A, x, d, r, xt, xh)
    dx = ctx.split_dims(d)
    qx = Ax.quiver
    candidates = [s for s in rank_sequences(qx, dx) if s[xh] == r and is_nonempty(qx, dx, s)]
    if not candidates:
        return {"trial": i, "ok": True, "skipped": True}
    rng = random.Random(f"{seed}:endo:{i}")
    s = rng.choice(candidates)
    M = _sample_point_rational(qx, dx, s, seed, i)
    if x_rank(M, xh) != r:
        return {"trial": i, "ok": True, "skipped": True}
    big = endomorphism_dim(A, embed_representation(M, ctx, A))
    small = endomorphism_dim(Ax, M)
    return {"trial": i, "ok": big - small == r * (d[x] - r), "difference": big - small,
            "rank_vector": s}


def endomorphism_additivity(A: Algebra, d: Mapping[str, int], x: str, r: int, seed: int,
                            trials: int, jobs: int = 1) -> list[dict]:
    """Compare ``dim End`` before and after embedding for ``trials`` seeded
    representations of the split algebra with full rank ``r`` at ``x_h``.

    The algebra must be radical square zero, so that the split algebra is too
    and its points can be drawn rank-stratum by rank-stratum.
    """
    A = _algebra(A)
    if not is_node(A, x):
        raise QuiverError(f"vertex {x!r} is not a node")
    if not 0 <= r <= d[x]:
        raise QuiverError(f"rank {r} outside [0, {d[x]}]")
    jobs_list = [(A, dict(d), x, r, seed, i) for i in range(trials)]
    if jobs <= 1:
        return [_endo_trial(j) for j in jobs_list]
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(_endo_trial, jobs_list))


def semistable_suite(A: Algebra, d: Mapping[str, int], theta: Mapping[str, int], q: int = 2) -> dict:
    """Every representation over ``F_q`` checked against the node shapes and the
    weight reduction.

    For each ``M``: if ``M`` is semistable, no node may report a violation;
    semistability of ``M`` must equal that of its restriction to the reduced
    algebra; and at weight-zero nodes it must equal that of ``M`` with the
    maps at the node removed.
    """
    A = _algebra(A)
    q_ = A.quiver
    if sum(d.values()) > SUBSPACE_BOUND:
        raise ValueError(f"total dimension exceeds {SUBSPACE_BOUND}")
    if sum(theta[v] * d[v] for v in q_.vertices) != 0:
        raise ValueError("weight does not pair to zero with the dimension vector")
    F = la.GF(q)
    layout = Layout.of(q_, d)
    A2 = reduce_by_weight(A, theta)
    theta2 = {v: theta[v] for v in A2.quiver.vertices}
    zero_nodes = [x for x in q_.vertices if theta[x] == 0]
    failures: list[dict] = []
    total = semistable = 0
    cache: dict = {}

    def verdict(alg: Algebra, M: Representation, w) -> bool:
        if all(w[v] == 0 for v in alg.quiver.vertices if M.dims[v]):
            return is_semistable_bruteforce(None, M, w)
        key = (alg.quiver, tuple(sorted((a, m.rows) for a, m in M.matrices.items())))
        if key not in cache:
            cache[key] = subrepresentation_dims(M)
        return is_semistable_bruteforce(None, M, w, sub_dims=cache[key])

    for X in enumerate_rad2_representations(A, d, q):
        for row in X:
            total += 1
            M = layout.to_representation(row, F)
            ss = verdict(A, M, theta)
            if ss:
                semistable += 1
                for x in q_.vertices:
                    shape = node_shape_check(A, M, theta, x)
                    if shape == VIOLATION:
                        failures.append({"kind": "shape", "vertex": x, "point": row.tolist()})
            ss2 = verdict(A2, restrict_representation(M, A2), theta2)
            if ss != ss2:
                failures.append({"kind": "reduction", "point": row.tolist(), "before": ss,
                                 "after": ss2})
            for x in zero_nodes:
                if verdict(A, strip_node_maps(M, x), theta) != ss:
                    failures.append({"kind": "strip", "vertex": x, "point": row.tolist()})
    return {"ok": not failures, "total": total, "semistable": semistable, "failures": failures}
