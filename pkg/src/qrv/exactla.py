"""Exact dense linear algebra over the rationals and prime fields.

Scalars are plain Python objects: :class:`fractions.Fraction` over ``QQ`` and
``int`` residues in ``[0, p)`` over ``GF(p)``.  A :class:`Matrix` is an
immutable row-major grid tagged with its field.

The ``batch_*`` helpers at the bottom work on stacks of small integer
matrices with numpy and are used by the brute-force and sampling code where
millions of tiny rank computations are needed.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

DEFAULT_PRIME = 32003


class Field:
    """Common interface of ``QQ`` and ``GF(p)``."""

    characteristic: int = 0
    name: str = ""

    def __call__(self, x):
        raise NotImplementedError

    def inv(self, x):
        raise NotImplementedError

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    def format(self, x) -> str | int:
        raise NotImplementedError

    def __repr__(self) -> str:
        return self.name


class Rationals(Field):
    characteristic = 0
    name = "Q"

    def __call__(self, x) -> Fraction:
        if isinstance(x, str):
            return Fraction(x.strip())
        return Fraction(x)

    def inv(self, x: Fraction) -> Fraction:
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / x

    def format(self, x: Fraction) -> str | int:
        return int(x) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"

    def __eq__(self, other) -> bool:
        return isinstance(other, Rationals)

    def __hash__(self) -> int:
        return hash("Q")


class PrimeField(Field):
    def __init__(self, p: int):
        if p < 2 or p >= 2**62 or not _is_prime(p):
            raise ValueError(f"modulus {p} is not a prime below 2^62")
        self.p = p
        self.characteristic = p
        self.name = f"Fp:{p}"

    def __call__(self, x) -> int:
        if isinstance(x, str):
            x = Fraction(x.strip())
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise ZeroDivisionError(f"denominator {x.denominator} vanishes mod {self.p}")
            return x.numerator * pow(x.denominator, -1, self.p) % self.p
        return int(x) % self.p

    def inv(self, x: int) -> int:
        if x % self.p == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(x, -1, self.p)

    def format(self, x: int) -> int:
        return x

    def __eq__(self, other) -> bool:
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self) -> int:
        return hash(("Fp", self.p))


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
    for q in small:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    # deterministic Miller-Rabin for n < 3.3e24
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


QQ = Rationals()


@functools.lru_cache(maxsize=None)
def GF(p: int) -> PrimeField:
    return PrimeField(p)


def field_from_name(name: str) -> Field:
    """Parse ``"Q"`` or ``"Fp:<p>"``."""
    if name == "Q":
        return QQ
    if name.startswith("Fp:"):
        return GF(int(name[3:]))
    raise ValueError(f"unknown field {name!r}")


@dataclass(frozen=True)
class Matrix:
    field: Field
    nrows: int
    ncols: int
    rows: tuple[tuple, ...]

    def __post_init__(self):
        if len(self.rows) != self.nrows or any(len(r) != self.ncols for r in self.rows):
            raise ValueError("matrix entries do not match the declared shape")

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def column(self, j: int) -> tuple:
        return tuple(r[j] for r in self.rows)

    def is_zero(self) -> bool:
        return all(x == 0 for r in self.rows for x in r)

    def tolist(self) -> list[list]:
        return [list(r) for r in self.rows]

    def __matmul__(self, other: "Matrix") -> "Matrix":
        return matmul(self, other)

    def __repr__(self) -> str:
        body = ", ".join("[" + ", ".join(str(x) for x in r) + "]" for r in self.rows)
        return f"Matrix({self.field.name}, {self.nrows}x{self.ncols}, [{body}])"


def matrix(field: Field, rows: Sequence[Sequence], ncols: int | None = None) -> Matrix:
    """Build a matrix, converting entries into ``field``.

    ``ncols`` is only needed for matrices with zero rows.
    """
    data = tuple(tuple(field(x) for x in r) for r in rows)
    if ncols is None:
        ncols = len(data[0]) if data else 0
    return Matrix(field, len(data), ncols, data)


def zeros(field: Field, nrows: int, ncols: int) -> Matrix:
    z = field.zero
    return Matrix(field, nrows, ncols, tuple((z,) * ncols for _ in range(nrows)))


def identity(field: Field, n: int) -> Matrix:
    return Matrix(field, n, n, tuple(
        tuple(field.one if i == j else field.zero for j in range(n)) for i in range(n)))


def transpose(m: Matrix) -> Matrix:
    return Matrix(m.field, m.ncols, m.nrows, tuple(zip(*m.rows)) if m.nrows else tuple(() for _ in range(m.ncols)))


def matmul(a: Matrix, b: Matrix) -> Matrix:
    if a.ncols != b.nrows:
        raise ValueError(f"shape mismatch {a.shape} @ {b.shape}")
    f = a.field
    cols = [b.column(j) for j in range(b.ncols)]
    rows = tuple(
        tuple(f(sum(x * y for x, y in zip(r, c))) for c in cols) for r in a.rows)
    return Matrix(f, a.nrows, b.ncols, rows)


def add(a: Matrix, b: Matrix) -> Matrix:
    if a.shape != b.shape:
        raise ValueError("shape mismatch")
    f = a.field
    return Matrix(f, a.nrows, a.ncols, tuple(
        tuple(f(x + y) for x, y in zip(r, s)) for r, s in zip(a.rows, b.rows)))


def scale(m: Matrix, c) -> Matrix:
    f = m.field
    c = f(c)
    return Matrix(f, m.nrows, m.ncols, tuple(tuple(f(c * x) for x in r) for r in m.rows))


def hstack(blocks: Sequence[Matrix], nrows: int, field: Field) -> Matrix:
    """Concatenate side by side; ``nrows`` fixes the shape when ``blocks`` is empty."""
    for b in blocks:
        if b.nrows != nrows:
            raise ValueError("row count mismatch in hstack")
    rows = tuple(tuple(x for b in blocks for x in b.rows[i]) for i in range(nrows))
    return Matrix(field, nrows, sum(b.ncols for b in blocks), rows)


def vstack(blocks: Sequence[Matrix], ncols: int, field: Field) -> Matrix:
    for b in blocks:
        if b.ncols != ncols:
            raise ValueError("column count mismatch in vstack")
    rows = tuple(r for b in blocks for r in b.rows)
    return Matrix(field, len(rows), ncols, rows)


def block(m: Matrix, r0: int, r1: int, c0: int, c1: int) -> Matrix:
    return Matrix(m.field, r1 - r0, c1 - c0, tuple(r[c0:c1] for r in m.rows[r0:r1]))


def rref(m: Matrix) -> tuple[Matrix, tuple[int, ...]]:
    """Reduced row echelon form and pivot columns."""
    f = m.field
    a = [list(r) for r in m.rows]
    pivots: list[int] = []
    row = 0
    for col in range(m.ncols):
        piv = next((i for i in range(row, m.nrows) if a[i][col] != 0), None)
        if piv is None:
            continue
        a[row], a[piv] = a[piv], a[row]
        inv = f.inv(a[row][col])
        a[row] = [f(x * inv) for x in a[row]]
        for i in range(m.nrows):
            if i != row and a[i][col] != 0:
                c = a[i][col]
                a[i] = [f(x - c * y) for x, y in zip(a[i], a[row])]
        pivots.append(col)
        row += 1
        if row == m.nrows:
            break
    return Matrix(f, m.nrows, m.ncols, tuple(tuple(r) for r in a)), tuple(pivots)


def rank(m: Matrix) -> int:
    """Rank by forward elimination (no back substitution)."""
    f = m.field
    a = [list(r) for r in m.rows]
    rk = 0
    for col in range(m.ncols):
        piv = next((i for i in range(rk, m.nrows) if a[i][col] != 0), None)
        if piv is None:
            continue
        a[rk], a[piv] = a[piv], a[rk]
        inv = f.inv(a[rk][col])
        for i in range(rk + 1, m.nrows):
            if a[i][col] != 0:
                c = f(a[i][col] * inv)
                a[i] = [f(x - c * y) for x, y in zip(a[i], a[rk])]
        rk += 1
        if rk == m.nrows:
            break
    return rk


def kernel_basis(m: Matrix) -> list[tuple]:
    """Basis of the right kernel, one vector per free column."""
    f = m.field
    r, pivots = rref(m)
    free = [j for j in range(m.ncols) if j not in pivots]
    basis = []
    for j in free:
        v = [f.zero] * m.ncols
        v[j] = f.one
        for i, pc in enumerate(pivots):
            v[pc] = f(-r.rows[i][j])
        basis.append(tuple(v))
    return basis


def solve(a: Matrix, b: Sequence) -> tuple | None:
    """Some solution ``x`` of ``a x = b``, or ``None`` if inconsistent."""
    if len(b) != a.nrows:
        raise ValueError("right-hand side length mismatch")
    f = a.field
    aug = Matrix(f, a.nrows, a.ncols + 1,
                 tuple(tuple(r) + (f(bi),) for r, bi in zip(a.rows, b)))
    r, pivots = rref(aug)
    if a.ncols in pivots:
        return None
    x = [f.zero] * a.ncols
    for i, pc in enumerate(pivots):
        x[pc] = r.rows[i][a.ncols]
    return tuple(x)


def det(m: Matrix):
    if m.nrows != m.ncols:
        raise ValueError(f"determinant of non-square {m.shape} matrix")
    f = m.field
    a = [list(r) for r in m.rows]
    n = m.nrows
    result = f.one
    for col in range(n):
        piv = next((i for i in range(col, n) if a[i][col] != 0), None)
        if piv is None:
            return f.zero
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            result = f(-result)
        result = f(result * a[col][col])
        inv = f.inv(a[col][col])
        for i in range(col + 1, n):
            if a[i][col] != 0:
                c = f(a[i][col] * inv)
                a[i] = [f(x - c * y) for x, y in zip(a[i], a[col])]
    return result


def inverse(m: Matrix) -> Matrix:
    n = m.nrows
    if n != m.ncols:
        raise ValueError("inverse of non-square matrix")
    f = m.field
    aug = Matrix(f, n, 2 * n, tuple(r + identity(f, n).rows[i] for i, r in enumerate(m.rows)))
    r, pivots = rref(aug)
    if pivots[:n] != tuple(range(n)):
        raise ZeroDivisionError("matrix is singular")
    return block(r, 0, n, n, 2 * n)


def span_rank(vectors: Iterable[Sequence], field: Field, dim: int) -> int:
    vs = [tuple(field(x) for x in v) for v in vectors]
    if not vs:
        return 0
    return rank(Matrix(field, len(vs), dim, tuple(vs)))


def change_field(m: Matrix, field: Field) -> Matrix:
    return Matrix(field, m.nrows, m.ncols, tuple(tuple(field(x) for x in r) for r in m.rows))


# ---------------------------------------------------------------------------
# batched small-matrix arithmetic mod p (numpy, int64)


def batch_matmul_mod(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """``a @ b mod p`` for stacks of matrices; entries must already be reduced."""
    if a.shape[-1] == 0:
        return np.zeros(a.shape[:-1] + b.shape[-1:], dtype=np.int64)
    if a.shape[-1] * (p - 1) ** 2 >= 2**63:
        raise ValueError("modulus too large for int64 batched products")
    return np.einsum("...ik,...kj->...ij", a, b) % p


def batch_rank_mod(a: np.ndarray, p: int) -> np.ndarray:
    """Rank mod ``p`` of every matrix in a stack of shape ``(n, rows, cols)``."""
    a = np.array(a, dtype=np.int64) % p
    n, rows, cols = a.shape
    rk = np.zeros(n, dtype=np.int64)
    if rows == 0 or cols == 0 or n == 0:
        return rk
    idx = np.arange(n)
    inv_table = _inverse_table(p) if p <= 1 << 16 else None
    for col in range(cols):
        # pivot search among rows >= rk (per batch element)
        row_ids = np.arange(rows)[None, :]
        cand = (a[:, :, col] != 0) & (row_ids >= rk[:, None])
        has = cand.any(axis=1)
        if not has.any():
            continue
        piv = np.argmax(cand, axis=1)
        active = idx[has & (rk < rows)]
        if active.size == 0:
            break
        pr = piv[active]
        tr = rk[active]
        prow = a[active, pr, :].copy()
        a[active, pr, :] = a[active, tr, :]
        a[active, tr, :] = prow
        pv = prow[:, col]
        if inv_table is not None:
            pinv = inv_table[pv]
        else:
            pinv = np.array([pow(int(v), -1, p) for v in pv], dtype=np.int64)
        prow = prow * pinv[:, None] % p
        a[active, tr, :] = prow
        below = row_ids[0][None, :] > tr[:, None]
        factors = np.where(below, a[active, :, col], 0)
        a[active] = (a[active] - factors[:, :, None] * prow[:, None, :]) % p
        rk[active] += 1
    return rk


def batch_det_nonzero_mod(a: np.ndarray, p: int) -> np.ndarray:
    n, k, _ = a.shape
    return batch_rank_mod(a, p) == k


def batch_inverse_mod(a: np.ndarray, p: int) -> tuple[np.ndarray, np.ndarray]:
    """Inverses mod ``p`` of a stack of square matrices.

    Returns ``(inv, ok)``; rows where ``ok`` is false hold garbage.
    """
    a = np.array(a, dtype=np.int64) % p
    n, k, _ = a.shape
    eye = np.broadcast_to(np.eye(k, dtype=np.int64), (n, k, k))
    aug = np.concatenate([a, eye], axis=2)
    ok = np.ones(n, dtype=bool)
    inv_table = _inverse_table(p) if p <= 1 << 16 else None
    idx = np.arange(n)
    for col in range(k):
        cand = aug[:, col:, col] != 0
        has = cand.any(axis=1)
        ok &= has
        piv = np.argmax(cand, axis=1) + col
        prow = aug[idx, piv, :].copy()
        aug[idx, piv, :] = aug[:, col, :]
        pv = prow[:, col]
        pv = np.where(pv == 0, 1, pv)
        if inv_table is not None:
            pinv = inv_table[pv]
        else:
            pinv = np.array([pow(int(v), -1, p) for v in pv], dtype=np.int64)
        prow = prow * pinv[:, None] % p
        aug[:, col, :] = prow
        factors = aug[:, :, col].copy()
        factors[:, col] = 0
        aug = (aug - factors[:, :, None] * prow[:, None, :]) % p
    return aug[:, :, k:], ok


@functools.lru_cache(maxsize=8)
def _inverse_table(p: int) -> np.ndarray:
    t = np.zeros(p, dtype=np.int64)
    for v in range(1, p):
        if t[v] == 0:
            w = pow(v, -1, p)
            t[v] = w
            t[w] = v
    return t


def binomial(n: int, k: int) -> int:
    return math.comb(n, k) if 0 <= k <= n else 0
