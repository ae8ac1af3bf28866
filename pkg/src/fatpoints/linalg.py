"""Exact rank computation over a prime field, tuned for wide dense matrices.

The reducer keeps a growing row-reduced basis (RREF: unit pivots, pivot
columns cleared everywhere) and absorbs incoming rows in blocks: reduce the
block against the basis with one modular matrix product, run a small
in-block Gaussian elimination, then clear the new pivot columns from the old
basis rows.  All products are exact: operands are split into 16-bit halves
so the partial float64 matmuls stay below 2^53, which keeps the hot path in
BLAS.  Entries must live in [0, p) with p < 2^31.
"""

from __future__ import annotations

import numpy as np

MAX_PRIME = 2**31 - 1


def _as_field(a: np.ndarray, p: int) -> np.ndarray:
    return np.asarray(a, dtype=np.int64) % p


def matmul_mod(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """(a @ b) % p, exact, for int64 operands reduced mod p < 2^31.

    Karatsuba-style 16-bit split: three float64 products, each bounded by
    2^34 * inner_dim < 2^53 provided inner_dim < 2^19.
    """
    if a.shape[1] != b.shape[0]:
        raise ValueError(f"shape mismatch {a.shape} @ {b.shape}")
    if a.shape[1] == 0:
        return np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    if a.shape[1] >= 1 << 19:
        raise ValueError("inner dimension too large for exact float64 products")
    a_hi = (a >> 16).astype(np.float64)
    a_lo = (a & 0xFFFF).astype(np.float64)
    b_hi = (b >> 16).astype(np.float64)
    b_lo = (b & 0xFFFF).astype(np.float64)
    hh = (a_hi @ b_hi).astype(np.int64)
    ll = (a_lo @ b_lo).astype(np.int64)
    mixed = ((a_hi + a_lo) @ (b_hi + b_lo)).astype(np.int64)
    mid = (mixed - hh - ll) % p
    return ((hh % p) * ((1 << 32) % p) % p + mid * ((1 << 16) % p) % p + ll % p) % p


class RowReducer:
    """Incremental RREF basis over F_p; feed row blocks, read off the rank.

    Incoming rows are buffered and eliminated in blocks of ``block`` rows,
    so feeding many small row groups stays cheap.  Reading :attr:`rank`
    flushes the buffer.
    """

    def __init__(self, ncols: int, p: int, block: int = 256):
        if not (2 <= p <= MAX_PRIME):
            raise ValueError(f"prime must be in [2, 2^31 - 1], got {p}")
        if ncols < 1:
            raise ValueError("need at least one column")
        self.ncols = ncols
        self.p = p
        self.block = block
        self._basis = np.zeros((0, ncols), dtype=np.int64)
        self._pivots: list[int] = []
        self._pending: list[np.ndarray] = []
        self._pending_rows = 0

    @property
    def rank(self) -> int:
        self.flush()
        return len(self._pivots)

    def saturated(self) -> bool:
        return len(self._pivots) == self.ncols

    def add_rows(self, rows: np.ndarray) -> int:
        """Queue a block of rows and return the exact rank so far (flushes
        the queue).  Once the rank reaches the column count further rows are
        discarded."""
        self.queue_rows(rows)
        return self.rank

    def queue_rows(self, rows: np.ndarray) -> None:
        """Queue rows without forcing a flush (cheap for tiny groups);
        elimination happens in blocks of ``self.block`` rows."""
        rows = _as_field(rows, self.p)
        if rows.ndim != 2 or rows.shape[1] != self.ncols:
            raise ValueError(f"expected (k, {self.ncols}) rows, got {rows.shape}")
        if not self.saturated() and rows.shape[0]:
            self._pending.append(rows)
            self._pending_rows += rows.shape[0]
            while self._pending_rows >= self.block and not self.saturated():
                self._drain(self.block)

    def flush(self) -> None:
        while self._pending_rows and not self.saturated():
            self._drain(self.block)
        self._pending.clear()
        self._pending_rows = 0

    def _drain(self, want: int) -> None:
        take: list[np.ndarray] = []
        got = 0
        while self._pending and got < want:
            blk = self._pending.pop(0)
            take.append(blk)
            got += blk.shape[0]
        self._pending_rows -= got
        if take:
            self._absorb(np.vstack(take) if len(take) > 1 else take[0].copy())

    def _absorb(self, blk: np.ndarray) -> None:
        p = self.p
        if self._pivots:
            blk = (blk - matmul_mod(blk[:, self._pivots], self._basis, p)) % p
        new_pivots, new_basis = self._block_rref(blk)
        if not new_pivots:
            return
        if self._pivots:
            factors = self._basis[:, new_pivots]
            if np.any(factors):
                self._basis = (self._basis - matmul_mod(factors, new_basis, p)) % p
        merged = np.vstack([self._basis, new_basis])
        pivots = self._pivots + new_pivots
        order = np.argsort(pivots, kind="stable")
        self._basis = merged[order]
        self._pivots = [pivots[i] for i in order]

    def _block_rref(self, blk: np.ndarray) -> tuple[list[int], np.ndarray]:
        """RREF of one block.  Row operations accumulate in an m x m
        transform, columns are brought current panel by panel with one
        matrix product each, and the transform is applied to the full block
        once at the end; full-width row updates never happen per pivot."""
        p = self.p
        m = blk.shape[0]
        if m == 0:
            return [], blk
        transform = np.eye(m, dtype=np.int64)
        free = np.ones(m, dtype=bool)  # rows not yet chosen as pivot rows
        pivot_rows: list[int] = []
        pivot_cols: list[int] = []
        for start in range(0, self.ncols, m):
            panel = matmul_mod(transform, blk[:, start : start + m], p)
            for j in range(panel.shape[1]):
                col = panel[:, j]
                candidates = np.nonzero(col * free)[0]
                if candidates.size == 0:
                    continue
                i = int(candidates[0])
                inv = pow(int(col[i]), -1, p)
                transform[i] = transform[i] * inv % p
                panel[i] = panel[i] * inv % p
                factors = panel[:, j].copy()
                factors[i] = 0
                nz = np.nonzero(factors)[0]
                if nz.size:
                    transform[nz] = (transform[nz] - factors[nz, None] * transform[i][None, :]) % p
                    panel[nz] = (panel[nz] - factors[nz, None] * panel[i][None, :]) % p
                free[i] = False
                pivot_rows.append(i)
                pivot_cols.append(start + j)
            if len(pivot_rows) == m:
                break
        if not pivot_cols:
            return [], blk[:0]
        reduced = matmul_mod(transform[pivot_rows], blk, p)
        return pivot_cols, reduced


def rank_mod_p(matrix: np.ndarray, p: int) -> int:
    """Exact rank of an integer matrix over F_p."""
    matrix = np.atleast_2d(np.asarray(matrix, dtype=np.int64))
    if matrix.size == 0:
        return 0
    red = RowReducer(matrix.shape[1], p)
    return red.add_rows(matrix)


def rank_mod_p_naive(matrix: np.ndarray, p: int) -> int:
    """Straightforward row elimination; reference oracle for the fast path."""
    a = [[int(x) % p for x in row] for row in np.atleast_2d(matrix)]
    if not a or not a[0]:
        return 0
    ncols = len(a[0])
    rank = 0
    for col in range(ncols):
        piv = next((i for i in range(rank, len(a)) if a[i][col]), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        inv = pow(a[rank][col], -1, p)
        a[rank] = [x * inv % p for x in a[rank]]
        for i in range(len(a)):
            if i != rank and a[i][col]:
                f = a[i][col]
                a[i] = [(x - f * y) % p for x, y in zip(a[i], a[rank])]
        rank += 1
        if rank == len(a):
            break
    return rank
