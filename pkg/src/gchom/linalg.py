"""Exact linear algebra over prime fields.

Two rank engines: sparse Gaussian elimination with pluggable pivoting
(exact), and a randomized Wiedemann rank estimator (a probabilistic
lower bound, from the minimal polynomial of a preconditioned Gram
operator recovered by Berlekamp-Massey).  Arithmetic is exact for any
odd prime; the vectorized fast path kicks in for p < 2**25 where int64
products cannot overflow.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

DEFAULT_PRIME = 3323

_FAST_PRIME_LIMIT = 1 << 25  # products stay below 2**50 in int64


def _is_prime(n: int) -> bool:
    # deterministic Miller-Rabin, valid far beyond 2**64
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
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


@dataclass(frozen=True)
class PrimeField:
    p: int = DEFAULT_PRIME

    def __post_init__(self):
        if self.p == 2 or self.p >= 1 << 61 or not _is_prime(self.p):
            raise ValueError(f"need an odd prime below 2**61, got {self.p}")

    def inv(self, a: int) -> int:
        return pow(a, self.p - 2, self.p)


@dataclass
class FpSparseMatrix:
    """Sparse matrix over F_p; no stored zeros."""

    nrows: int
    ncols: int
    p: int
    entries: dict[tuple[int, int], int] = field(default_factory=dict)

    def __post_init__(self):
        for (i, j), v in self.entries.items():
            if not (0 <= i < self.nrows and 0 <= j < self.ncols):
                raise ValueError(f"entry ({i},{j}) out of range")
            if not 0 < v < self.p:
                raise ValueError(f"entry at ({i},{j}) not reduced: {v}")

    @property
    def num_entries(self) -> int:
        return len(self.entries)

    def rows(self) -> list[dict[int, int]]:
        out: list[dict[int, int]] = [dict() for _ in range(self.nrows)]
        for (i, j), v in self.entries.items():
            out[i][j] = v
        return out

    def to_arrays(self):
        """(row_idx, col_idx, values) as int64 arrays, row-major order."""
        items = sorted(self.entries.items())
        ri = np.fromiter((k[0] for k, _ in items), dtype=np.int64, count=len(items))
        ci = np.fromiter((k[1] for k, _ in items), dtype=np.int64, count=len(items))
        vals = np.fromiter((v for _, v in items), dtype=np.int64, count=len(items))
        return ri, ci, vals

    def to_dense(self) -> np.ndarray:
        out = np.zeros((self.nrows, self.ncols), dtype=np.int64)
        for (i, j), v in self.entries.items():
            out[i, j] = v
        return out


def rational_rank(matrix) -> int:
    """Exact rank over Q by dense fraction elimination.

    Only intended for small matrices (a few hundred rows); the prime
    field engines handle everything larger.
    """
    from fractions import Fraction

    nr, nc = matrix.nrows, matrix.ncols
    if nr == 0 or nc == 0:
        return 0
    rows = [[Fraction(0)] * nc for _ in range(nr)]
    for (i, j), v in matrix.entries.items():
        rows[i][j] = Fraction(v)
    rank = 0
    row = 0
    for col in range(nc):
        piv = next((r for r in range(row, nr) if rows[r][col]), None)
        if piv is None:
            continue
        rows[row], rows[piv] = rows[piv], rows[row]
        pv = rows[row][col]
        for r in range(row + 1, nr):
            if rows[r][col]:
                f = rows[r][col] / pv
                rr, rp = rows[r], rows[row]
                for c in range(col, nc):
                    rr[c] -= f * rp[c]
        rank += 1
        row += 1
        if row == nr:
            break
    return rank


def reduce_mod_p(matrix, fp: PrimeField) -> FpSparseMatrix:
    """Entrywise reduction of an IntSparseMatrix; vanishing entries drop."""
    p = fp.p
    entries = {}
    for key, v in matrix.entries.items():
        r = v % p
        if r:
            entries[key] = r
    return FpSparseMatrix(matrix.nrows, matrix.ncols, p, entries)


@dataclass(frozen=True)
class TwoPhase:
    """Pivot first inside the preferred rows, then the preferred columns.

    Phase one eliminates the designated rows (the complement-family rows
    in the top-degree pipeline), phase two the designated columns, after
    which Markowitz-style selection takes over.
    """

    preferred_rows: frozenset[int]
    preferred_cols: frozenset[int]


MARKOWITZ = "markowitz"


@dataclass(frozen=True)
class RankResult:
    rank: int
    method: str
    certified: bool
    prime: int
    seed: int

    def report_line(self) -> str:
        flag = "true" if self.certified else "false"
        return (
            f"rank={self.rank} method={self.method} prime={self.prime} "
            f"seed={self.seed} certified={flag}"
        )


def _dense_rank_mod_p(dense: np.ndarray, p: int) -> int:
    m = np.ascontiguousarray(dense % p, dtype=np.int64)
    nr, nc = m.shape
    rank = 0
    row = 0
    for col in range(nc):
        if row == nr:
            break
        piv = None
        colvals = m[row:, col]
        nz = np.nonzero(colvals)[0]
        if nz.size == 0:
            continue
        piv = row + nz[0]
        if piv != row:
            m[[row, piv]] = m[[piv, row]]
        inv = pow(int(m[row, col]), p - 2, p)
        below = m[row + 1:, col]
        nzb = np.nonzero(below)[0]
        if nzb.size:
            factors = (below[nzb] * inv) % p
            m[row + 1 + nzb] = (m[row + 1 + nzb] - factors[:, None] * m[row]) % p
        rank += 1
        row += 1
    return rank


_DENSE_SWITCH_AREA = 4_000_000
_DENSE_SWITCH_DENSITY = 0.2


def gauss_rank(matrix: FpSparseMatrix, strategy=MARKOWITZ, seed: int = 0) -> RankResult:
    """Exact F_p rank by sparse elimination.

    Pivot selection is Markowitz-flavoured (sparsest column, then
    shortest row) unless a TwoPhase strategy dictates preferred rows and
    columns first.  When the active block becomes small or dense enough
    it is finished by vectorized dense elimination; the rank is
    invariant under all of this.
    """
    import heapq

    p = matrix.p
    rows = matrix.rows()
    cols: dict[int, set[int]] = {}
    for (i, j) in matrix.entries:
        cols.setdefault(j, set()).add(i)
    nnz = len(matrix.entries)
    rank = 0

    pref_rows: set[int] = set()
    pref_cols: set[int] = set()
    if isinstance(strategy, TwoPhase):
        pref_rows = {i for i in strategy.preferred_rows if rows[i]}
        pref_cols = {j for j in strategy.preferred_cols if j in cols}
    elif strategy != MARKOWITZ:
        raise ValueError(f"unknown pivot strategy {strategy!r}")

    col_heap = [(len(s), j) for j, s in cols.items()]
    heapq.heapify(col_heap)

    def pop_column():
        # lazy heap: skip stale or exhausted columns
        while col_heap:
            cnt, j = heapq.heappop(col_heap)
            live = cols.get(j)
            if not live:
                continue
            if len(live) != cnt:
                heapq.heappush(col_heap, (len(live), j))
                continue
            return j
        return None

    def pick_pivot():
        live_pref = [i for i in pref_rows if rows[i]]
        if live_pref:
            i = min(live_pref, key=lambda r: (len(rows[r]), r))
            j = min(rows[i], key=lambda c: (len(cols[c]), c))
            return i, j
        live_pref_c = [j for j in pref_cols if cols.get(j)]
        if live_pref_c:
            j = min(live_pref_c, key=lambda c: (len(cols[c]), c))
            i = min(cols[j], key=lambda r: (len(rows[r]), r))
            return i, j
        j = pop_column()
        if j is None:
            return None
        i = min(cols[j], key=lambda r: (len(rows[r]), r))
        return i, j

    dense_ok = p < _FAST_PRIME_LIMIT
    check_interval = 16
    steps = 0
    while True:
        if dense_ok and steps % check_interval == 0:
            live_rows = [i for i in range(matrix.nrows) if rows[i]]
            if not live_rows:
                break
            live_cols = set()
            for i in live_rows:
                live_cols.update(rows[i])
            area = len(live_rows) * len(live_cols)
            if area <= 65536 or (area <= _DENSE_SWITCH_AREA
                                 and nnz > _DENSE_SWITCH_DENSITY * area):
                cmap = {c: k for k, c in enumerate(sorted(live_cols))}
                dense = np.zeros((len(live_rows), len(live_cols)), dtype=np.int64)
                for k, i in enumerate(live_rows):
                    for c, v in rows[i].items():
                        dense[k, cmap[c]] = v
                rank += _dense_rank_mod_p(dense, p)
                return RankResult(rank, "gauss", True, p, seed)
        steps += 1
        piv = pick_pivot()
        if piv is None:
            break
        i, j = piv
        piv_row = rows[i]
        inv = pow(piv_row[j], p - 2, p)
        for r in [r for r in cols[j] if r != i]:
            rr = rows[r]
            factor = (rr[j] * inv) % p
            for c, v in piv_row.items():
                nv = (rr.get(c, 0) - factor * v) % p
                if nv:
                    if c not in rr:
                        colset = cols.setdefault(c, set())
                        colset.add(r)
                        heapq.heappush(col_heap, (len(colset), c))
                        nnz += 1
                    rr[c] = nv
                else:
                    if c in rr:
                        del rr[c]
                        cols[c].discard(r)
                        nnz -= 1
        for c in piv_row:
            cols[c].discard(i)
        nnz -= len(piv_row)
        rows[i] = {}
        cols.pop(j, None)
        pref_rows.discard(i)
        pref_cols.discard(j)
        rank += 1

    return RankResult(rank, "gauss", True, p, seed)


# ---------------------------------------------------------------------------
# Berlekamp-Massey and Wiedemann.
# ---------------------------------------------------------------------------


def berlekamp_massey(seq, p: int) -> list[int]:
    """Minimal generating polynomial of the sequence over F_p.

    Returns ascending coefficients [c_0, ..., c_L] with c_L = 1, meaning
    sum_i c_i a_{k+i} = 0 for all valid k.  The constant sequence gives
    x - 1, Fibonacci gives x^2 - x - 1.
    """
    state = _BMState(p)
    for a in seq:
        state.push(int(a) % p)
    return state.generator()


class _BMState:
    """Online Berlekamp-Massey; numpy-backed discrepancy computation."""

    def __init__(self, p: int):
        self.p = p
        self.c = np.zeros(1, dtype=np.int64)
        self.c[0] = 1  # connection poly, ascending, c[0] = 1
        self.b = self.c.copy()
        self.L = 0
        self.m = 1
        self.bden = 1
        self.seq: list[int] = []
        self.last_discrepancy = 0  # terms processed at the last nonzero discrepancy

    def push(self, a: int):
        p = self.p
        seq = self.seq
        n = len(seq)
        seq.append(a)
        # discrepancy d = a + sum_{i=1..L} c_i * seq[n-i]
        L = self.L
        if L:
            window = np.array(seq[n - L:n][::-1], dtype=np.int64)
            d = (a + int(self.c[1:L + 1].dot(window))) % p
        else:
            d = a % p
        if d == 0:
            self.m += 1
            return
        self.last_discrepancy = n + 1
        coef = d * pow(self.bden, p - 2, p) % p
        shift = self.m
        new_len = max(len(self.c), len(self.b) + shift)
        c = np.zeros(new_len, dtype=np.int64)
        c[: len(self.c)] = self.c
        c[shift: shift + len(self.b)] = (
            c[shift: shift + len(self.b)] - coef * self.b
        ) % p
        if 2 * L <= n:
            self.b = self.c
            self.bden = d
            self.L = n + 1 - L
            self.m = 1
        else:
            self.m += 1
        self.c = c % p

    def generator(self) -> list[int]:
        # reverse the connection polynomial: g(x) = x^L * C(1/x)
        p = self.p
        L = self.L
        g = [0] * (L + 1)
        for i in range(min(len(self.c), L + 1)):
            g[L - i] = int(self.c[i]) % p
        g[L] = 1  # c[0] = 1 always
        return g


class PreconditionedOperator:
    """B = D1 A^T D2 A D1 applied as matrix-vector products mod p."""

    def __init__(self, matrix: FpSparseMatrix, d1: np.ndarray, d2: np.ndarray):
        self.p = matrix.p
        self.nrows = matrix.nrows
        self.n = matrix.ncols
        self.d1 = np.asarray(d1, dtype=np.int64) % self.p
        self.d2 = np.asarray(d2, dtype=np.int64) % self.p
        if len(self.d1) != self.n or len(self.d2) != matrix.nrows:
            raise ValueError("diagonal size mismatch")
        self.ri, self.ci, self.vals = matrix.to_arrays()
        if self.p >= _FAST_PRIME_LIMIT:
            raise ValueError("preconditioned operator requires p < 2**25")

    def _matvec(self, x: np.ndarray) -> np.ndarray:
        t = (self.vals * x[self.ci]) % self.p
        y = np.bincount(self.ri, weights=t.astype(np.float64), minlength=self.nrows)
        return y.astype(np.int64) % self.p

    def _rmatvec(self, y: np.ndarray) -> np.ndarray:
        t = (self.vals * y[self.ri]) % self.p
        x = np.bincount(self.ci, weights=t.astype(np.float64), minlength=self.n)
        return x.astype(np.int64) % self.p

    def apply(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=np.int64) % self.p
        w = (self.d1 * x) % self.p
        w = self._matvec(w)
        w = (self.d2 * w) % self.p
        w = self._rmatvec(w)
        return (self.d1 * w) % self.p


def precondition(matrix: FpSparseMatrix, seed: int) -> PreconditionedOperator:
    """Random diagonal preconditioning of the Gram operator A^T A.

    D1 and D2 are uniform invertible diagonals drawn from the seed; with
    probability 1 - O(n/p) the operator keeps the rank of A and has
    squarefree-away-from-zero minimal polynomial, which is what the
    Wiedemann rank extraction needs.
    """
    rng = np.random.Generator(np.random.PCG64(seed))
    d1 = rng.integers(1, matrix.p, size=matrix.ncols, dtype=np.int64)
    d2 = rng.integers(1, matrix.p, size=matrix.nrows, dtype=np.int64)
    return PreconditionedOperator(matrix, d1, d2)


_EXTRA_TERMS = 16
_STALL_TERMS = 8


def _scalar_wiedemann_bound(matrix: FpSparseMatrix, seed: int) -> int:
    p = matrix.p
    op = precondition(matrix, seed)
    rng = np.random.Generator(np.random.PCG64(seed ^ 0x5EED))
    u = rng.integers(0, p, size=matrix.ncols, dtype=np.int64)
    limit = 2 * min(matrix.nrows, matrix.ncols) + _EXTRA_TERMS
    state = _BMState(p)
    w = u.copy()
    for k in range(limit):
        state.push(int(u.dot(w) % p))
        processed = k + 1
        # the recurrence is trusted once it has held for a safety margin
        # past the 2L terms that determine it
        if (processed >= 2 * state.L + _STALL_TERMS
                and processed - state.last_discrepancy >= _STALL_TERMS):
            break
        w = op.apply(w)
    g = state.generator()
    deg = len(g) - 1
    if deg == 0:
        return 0
    return deg - (1 if g[0] == 0 else 0)


def _block_wiedemann_bound(matrix: FpSparseMatrix, blocking: int, seed: int) -> int:
    """Rank bound from the shifted block-Hankel matrix of U^T B^k U.

    The Hankel matrix of the shifted sequence factors through B, so its
    rank is a valid lower bound for rank(A) for any truncation; with
    random projections and enough blocks it is tight with high
    probability.
    """
    p = matrix.p
    n = matrix.ncols
    op = precondition(matrix, seed)
    rng = np.random.Generator(np.random.PCG64(seed ^ 0xB10C))
    u = rng.integers(0, p, size=(n, blocking), dtype=np.int64)
    nblocks = min(n, min(matrix.nrows, matrix.ncols)) // blocking + 2
    w = u.copy()
    seq = []
    for _ in range(2 * nblocks + 1):
        seq.append((u.T @ w) % p)
        wn = np.empty_like(w)
        for c in range(blocking):
            wn[:, c] = op.apply(w[:, c])
        w = wn
    # block Hankel of the shifted sequence S_1, S_2, ...
    hank = np.zeros((nblocks * blocking, nblocks * blocking), dtype=np.int64)
    for bi in range(nblocks):
        for bj in range(nblocks):
            hank[bi * blocking:(bi + 1) * blocking,
                 bj * blocking:(bj + 1) * blocking] = seq[bi + bj + 1]
    return _dense_rank_mod_p(hank, p)


def wiedemann_rank(matrix: FpSparseMatrix, blocking: int = 1, seed: int = 0) -> RankResult:
    """Probabilistic lower bound on the F_p rank.

    Scalar path (blocking=1): degree of the Berlekamp-Massey minimal
    generator of u^T B^k u, minus one when divisible by x.  Three seeds
    are tried and the best bound reported; the result is never above the
    true rank, so certified stays False.
    """
    if blocking < 1:
        raise ValueError("blocking must be >= 1")
    if not matrix.entries:
        return RankResult(0, "wiedemann", False, matrix.p, seed)
    best = 0
    for s in (seed, seed + 1, seed + 2):
        if blocking == 1:
            est = _scalar_wiedemann_bound(matrix, s)
        else:
            est = _block_wiedemann_bound(matrix, blocking, s)
        best = max(best, est)
    best = min(best, matrix.nrows, matrix.ncols)
    return RankResult(best, "wiedemann", False, matrix.p, seed)
