"""Random points of ``C_r`` and batched polynomial evaluation mod p.

A point of ``C_r`` is drawn through the collapsing map: a uniformly random
representation of the fully split quiver at ``e(x_h) = r(x)``,
``e(x_t) = d(x) - r(x)``, embedded block-wise, then moved by a random
element of ``GL(d)``.  Points are produced in fixed-size blocks, each with
its own generator seeded from ``(seed, block index)``, so the ``k``-th
sample does not depend on how many samples were requested.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .. import exactla as la
from ..components import _algebra, is_nonempty
from ..exactla import DEFAULT_PRIME, Field
from ..ideals import GeneratorSet, ambient_variables
from ..polynomial import Polynomial, VariableId
from ..quiver import Quiver, QuiverError, Representation

BLOCK = 256
RETRY_BUDGET = 64


class SamplingError(RuntimeError):
    pass


@dataclass(frozen=True)
class SampleConfig:
    field: Field = field(default_factory=lambda: la.GF(DEFAULT_PRIME))
    seed: int = 0
    trials: int = 1

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be positive")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")


@dataclass(frozen=True)
class Layout:
    """Column offsets of each arrow matrix inside a flat ambient vector."""

    quiver: Quiver
    dims: Mapping[str, int]
    offsets: Mapping[str, int]
    nvars: int

    @classmethod
    def of(cls, q: Quiver, d: Mapping[str, int]) -> "Layout":
        offsets = {}
        pos = 0
        for a in q.arrows:
            offsets[a.id] = pos
            pos += d[a.head] * d[a.tail]
        return cls(q, dict(d), offsets, pos)

    def index(self, v: VariableId) -> int:
        a = self.quiver.arrow(v.arrow)
        return self.offsets[v.arrow] + (v.row - 1) * self.dims[a.tail] + (v.col - 1)

    def block(self, flat: np.ndarray, aid: str) -> np.ndarray:
        a = self.quiver.arrow(aid)
        h, t = self.dims[a.head], self.dims[a.tail]
        o = self.offsets[aid]
        return flat[..., o:o + h * t].reshape(flat.shape[:-1] + (h, t))

    def to_representation(self, row: np.ndarray, field: Field) -> Representation:
        mats = {}
        for a in self.quiver.arrows:
            b = self.block(row, a.id)
            mats[a.id] = la.Matrix(field, b.shape[0], b.shape[1],
                                   tuple(tuple(field(int(x)) for x in r) for r in b))
        return Representation(self.quiver, field, dict(self.dims), mats)

    def from_representation(self, M: Representation) -> np.ndarray:
        out = np.zeros(self.nvars, dtype=np.int64)
        for a in self.quiver.arrows:
            m = M.matrices[a.id]
            o = self.offsets[a.id]
            out[o:o + m.nrows * m.ncols] = [int(x) for r in m.rows for x in r]
        return out


def _random_invertible(rng: np.random.Generator, n: int, k: int, p: int):
    g = rng.integers(0, p, size=(n, k, k), dtype=np.int64)
    ginv, ok = la.batch_inverse_mod(g, p)
    tries = 0
    while not ok.all():
        tries += 1
        if tries > RETRY_BUDGET:
            raise SamplingError(f"could not draw invertible {k}x{k} matrices over F_{p}")
        bad = np.flatnonzero(~ok)
        g[bad] = rng.integers(0, p, size=(bad.size, k, k), dtype=np.int64)
        gi, ok_bad = la.batch_inverse_mod(g[bad], p)
        ginv[bad] = gi
        ok[bad] = ok_bad
    return g, ginv


def _sample_block(q: Quiver, d, r, p: int, rng: np.random.Generator, n: int,
                  layout: Layout) -> np.ndarray:
    out = np.zeros((n, layout.nvars), dtype=np.int64)
    gs = {x: _random_invertible(rng, n, d[x], p) for x in q.vertices}
    for a in q.arrows:
        h, t = a.head, a.tail
        block = rng.integers(0, p, size=(n, r[h], d[t] - r[t]), dtype=np.int64)
        N = np.zeros((n, d[h], d[t]), dtype=np.int64)
        N[:, :r[h], r[t]:] = block
        g_h = gs[h][0]
        ginv_t = gs[t][1]
        N = la.batch_matmul_mod(la.batch_matmul_mod(g_h, N, p), ginv_t, p)
        o = layout.offsets[a.id]
        out[:, o:o + d[h] * d[t]] = N.reshape(n, -1)
    return out


def sample_batch(Q, d: Mapping[str, int], r: Mapping[str, int], cfg: SampleConfig) -> np.ndarray:
    """``cfg.trials`` points of ``C_r`` over ``F_p`` as rows of a flat array."""
    A = _algebra(Q)
    q = A.quiver
    if not is_nonempty(q, d, r):
        raise QuiverError(f"C_r is empty for r={dict(r)}")
    if cfg.field.characteristic == 0:
        raise ValueError("batched sampling needs a prime field; use sample_point for QQ")
    nblocks = -(-cfg.trials // BLOCK)
    return sample_blocks(A, d, r, cfg.field.characteristic, cfg.seed, range(nblocks))[:cfg.trials]


def sample_blocks(Q, d: Mapping[str, int], r: Mapping[str, int], p: int, seed: int,
                  blocks: Sequence[int]) -> np.ndarray:
    """The listed sample blocks, concatenated in order."""
    q = _algebra(Q).quiver
    layout = Layout.of(q, d)
    out = [_sample_block(q, d, r, p, np.random.default_rng([seed, b]), BLOCK, layout)
           for b in blocks]
    return np.concatenate(out)


def sample_point(Q, d: Mapping[str, int], r: Mapping[str, int], cfg: SampleConfig,
                 index: int = 0) -> Representation:
    """The ``index``-th sample of ``C_r`` for this seed."""
    A = _algebra(Q)
    q = A.quiver
    if cfg.field.characteristic == 0:
        return _sample_point_rational(q, d, r, cfg.seed, index)
    batch = sample_batch(A, d, r, SampleConfig(cfg.field, cfg.seed, index + 1))
    return Layout.of(q, d).to_representation(batch[index], cfg.field)


def _sample_point_rational(q: Quiver, d, r, seed: int, index: int, bound: int = 9) -> Representation:
    if not is_nonempty(q, d, r):
        raise QuiverError(f"C_r is empty for r={dict(r)}")
    rng = random.Random(f"{seed}:{index}")
    F = la.QQ
    g = {}
    for x in q.vertices:
        for _ in range(RETRY_BUDGET):
            m = la.matrix(F, [[rng.randint(-bound, bound) for _ in range(d[x])] for _ in range(d[x])],
                          ncols=d[x])
            if la.det(m) != 0:
                g[x] = (m, la.inverse(m))
                break
        else:
            raise SamplingError("could not draw an invertible rational matrix")
    mats = {}
    for a in q.arrows:
        h, t = a.head, a.tail
        rows = [[0] * d[t] for _ in range(d[h])]
        for i in range(r[h]):
            for j in range(r[t], d[t]):
                rows[i][j] = rng.randint(-bound, bound)
        N = la.matrix(F, rows, ncols=d[t])
        mats[a.id] = la.matmul(la.matmul(g[h][0], N), g[t][1])
    return Representation(q, F, dict(d), mats)


class CompiledPolynomials:
    """A list of polynomials evaluated in bulk mod ``p`` over flat points."""

    def __init__(self, polys: Sequence[Polynomial], layout: Layout, p: int):
        self.p = p
        self.count = len(polys)
        self.degree = max((poly.degree() for poly in polys), default=0)
        by_deg: dict[int, tuple[list, list, list]] = {}
        for k, poly in enumerate(polys):
            for mono, c in poly.terms.items():
                idx, cols, coefs = by_deg.setdefault(len(mono), ([], [], []))
                idx.append([layout.index(v) for v in mono])
                cols.append(k)
                if c.denominator % p == 0:
                    raise ZeroDivisionError(f"coefficient {c} has denominator divisible by {p}")
                coefs.append(c.numerator * pow(c.denominator, -1, p) % p)
        self.groups = []
        for deg, (idx, cols, coefs) in sorted(by_deg.items()):
            coef = np.zeros((len(idx), self.count), dtype=np.int64)
            coef[np.arange(len(idx)), cols] = coefs
            self.groups.append((deg, np.array(idx, dtype=np.int64).reshape(len(idx), deg), coef))

    def __call__(self, X: np.ndarray) -> np.ndarray:
        """Values, shape ``(points, polynomials)``."""
        p = self.p
        out = np.zeros((X.shape[0], self.count), dtype=np.int64)
        for deg, idx, coef in self.groups:
            mono = np.ones((X.shape[0], idx.shape[0]), dtype=np.int64)
            for k in range(deg):
                mono = mono * X[:, idx[:, k]] % p
            # chunk the contraction so sums stay below 2^63
            step = max(1, (2**62) // (p * p))
            for s in range(0, idx.shape[0], step):
                out = (out + mono[:, s:s + step] @ coef[s:s + step]) % p
        return out


def compile_generators(G: GeneratorSet | Sequence[Polynomial], q: Quiver, d, p: int) -> CompiledPolynomials:
    polys = G.polynomials() if isinstance(G, GeneratorSet) else list(G)
    return CompiledPolynomials(polys, Layout.of(q, d), p)


def schwartz_zippel_bound(degree: int, d: Mapping[str, int], p: int, trials: int) -> float:
    """Chance that ``trials`` independent samples all miss a nonvanishing generator.

    Clearing denominators of ``g N g^{-1}`` gives entries of degree at most
    ``max d(x) + 1`` in the sampling parameters.
    """
    if degree <= 0:
        return 0.0
    per = min(1.0, degree * (max(d.values(), default=0) + 1) / p)
    return per ** trials


def ambient_names(q: Quiver, d) -> list[str]:
    return [v.name for v in ambient_variables(q, d)]
