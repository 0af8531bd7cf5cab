"""
Dense Linear Algebra over F_q

Matrices hold numpy arrays of element codes. Elimination pivots on the first
nonzero entry of each column, so results (and kernel bases) are
deterministic.
"""

from __future__ import annotations

from typing import Optional, Sequence

import numpy as np

from algebra.gf import FieldCtx, FieldElement
from errors import DimensionError


class MatrixGF:
    """A rows x cols matrix over ctx."""

    def __init__(self, ctx: FieldCtx, entries: np.ndarray):
        entries = np.asarray(entries, dtype=np.int64)
        if entries.ndim != 2:
            raise DimensionError(f"Matrix entries must be 2-D, got shape {entries.shape}")
        if entries.size and (entries.min() < 0 or entries.max() >= ctx.q):
            raise DimensionError("Matrix entries must be element codes in [0, q-1]")
        self.ctx = ctx
        self.entries = entries

    @classmethod
    def from_rows(cls, ctx: FieldCtx, rows: Sequence[Sequence[int | FieldElement]], cols: int | None = None) -> MatrixGF:
        if not rows:
            return cls(ctx, np.zeros((0, cols or 0), dtype=np.int64))
        data = [[ctx.element(v).value for v in row] for row in rows]
        if len({len(r) for r in data}) != 1:
            raise DimensionError("Ragged matrix rows")
        return cls(ctx, np.array(data, dtype=np.int64))

    @classmethod
    def zeros(cls, ctx: FieldCtx, rows: int, cols: int) -> MatrixGF:
        return cls(ctx, np.zeros((rows, cols), dtype=np.int64))

    @classmethod
    def identity(cls, ctx: FieldCtx, n: int) -> MatrixGF:
        return cls(ctx, np.eye(n, dtype=np.int64))

    @property
    def rows(self) -> int:
        return self.entries.shape[0]

    @property
    def cols(self) -> int:
        return self.entries.shape[1]

    def __getitem__(self, key: tuple[int, int]) -> FieldElement:
        return FieldElement(self.ctx, int(self.entries[key]))

    def __eq__(self, other) -> bool:
        if not isinstance(other, MatrixGF):
            return NotImplemented
        return self.ctx == other.ctx and np.array_equal(self.entries, other.entries)

    def __repr__(self) -> str:
        return f"MatrixGF({self.rows}x{self.cols} over {self.ctx})"

    # ------------------------------------------------------------------
    # Elimination
    # ------------------------------------------------------------------

    def rref(self) -> tuple[MatrixGF, list[int], int]:
        """Reduced row echelon form, pivot columns and rank."""
        ctx = self.ctx
        A = self.entries.copy()
        m, n = A.shape
        pivots: list[int] = []
        r = 0
        for c in range(n):
            if r >= m:
                break
            nonzero = np.nonzero(A[r:, c])[0]
            if nonzero.size == 0:
                continue
            piv = r + int(nonzero[0])
            if piv != r:
                A[[r, piv]] = A[[piv, r]]
            A[r] = ctx.vmul(A[r], ctx.inv_code(int(A[r, c])))
            factors = A[:, c].copy()
            factors[r] = 0
            if np.any(factors):
                A = ctx.vsub(A, ctx.vmul(factors[:, None], A[r][None, :]))
            pivots.append(c)
            r += 1
        return MatrixGF(ctx, A), pivots, len(pivots)

    def rank(self) -> int:
        return self.rref()[2]

    def kernel(self) -> list[np.ndarray]:
        """
        Basis of the right null space, one vector per free column.

        The vector for free column f has entry 1 at f, zeros at the other
        free columns and minus the reduced column entries at the pivots.
        """
        ctx = self.ctx
        R, pivots, _ = self.rref()
        n = self.cols
        pivot_set = set(pivots)
        basis = []
        for f in range(n):
            if f in pivot_set:
                continue
            v = np.zeros(n, dtype=np.int64)
            v[f] = 1
            for row, pc in enumerate(pivots):
                v[pc] = ctx.neg_code(int(R.entries[row, f]))
            basis.append(v)
        return basis

    def mul_vector(self, v: Sequence[int] | np.ndarray) -> np.ndarray:
        ctx = self.ctx
        v = np.asarray(v, dtype=np.int64)
        if v.shape != (self.cols,):
            raise DimensionError(f"Vector of shape {v.shape} for a {self.rows}x{self.cols} matrix")
        if self.rows == 0:
            return np.zeros(0, dtype=np.int64)
        if ctx.k == 1:
            return (self.entries * v[None, :]).sum(axis=1) % ctx.p
        products = ctx.vmul(self.entries, v[None, :])
        out = np.zeros(self.rows, dtype=np.int64)
        for j in range(self.cols):
            out = ctx.vadd(out, products[:, j])
        return out

    def solve(self, b: Sequence[int] | np.ndarray) -> Optional[np.ndarray]:
        """A particular solution of M v = b (free variables 0), or None."""
        ctx = self.ctx
        b = np.asarray(b, dtype=np.int64)
        if b.shape != (self.rows,):
            raise DimensionError(f"Right-hand side of shape {b.shape} for {self.rows} rows")
        augmented = MatrixGF(ctx, np.concatenate([self.entries, b[:, None]], axis=1))
        R, pivots, _ = augmented.rref()
        if self.cols in pivots:
            return None
        v = np.zeros(self.cols, dtype=np.int64)
        for row, pc in enumerate(pivots):
            v[pc] = R.entries[row, self.cols]
        return v
