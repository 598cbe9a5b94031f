"""Exact linear algebra over Q with a certified modular fast path.

Small systems are solved directly with Fraction arithmetic.  Larger
systems are eliminated modulo two fixed word-sized primes; the modular
answer is then upgraded to an unconditional exact one where feasible:

* a modular rank is always a lower bound on the exact rank (a nonzero
  minor mod p is nonzero over Q), and
* kernel vectors are lifted by CRT plus rational reconstruction and then
  verified exactly against the original equations.

When the verified kernel dimension and the modular rank add up to the
number of unknowns, both bounds are tight and the result is exact.  The
method tag records which route produced a number: ``exact``,
``mod-p(p1,p2)`` or ``mod-p-confirmed-exact``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt
from typing import Iterable, Sequence

import numpy as np

from .diagrams import CapExceededError
from .ring import exactify, fraction_from_str, fraction_to_str

# Primes just below 2**25: row operations and matrix products over these
# fit comfortably in int64 (products < 2**50, inner dimensions < 2**11).
DEFAULT_PRIMES = (33554393, 33554383)
EXTRA_PRIMES = (33554371, 33554347, 33554341, 33554317, 33554291, 33554273)

EXACT_UNKNOWN_CAP = 300       # switch to the modular engine above this
DEFAULT_UNKNOWN_CAP = 65536   # refuse plainly oversized systems


# ---------------------------------------------------------------------------
# dense exact matrices (numpy object arrays holding Fractions / ints)

def frac_matrix(rows) -> np.ndarray:
    out = np.empty((len(rows), len(rows[0])), dtype=object)
    for i, row in enumerate(rows):
        for j, v in enumerate(row):
            out[i, j] = exactify(v)
    return out


def zeros_matrix(nrows: int, ncols: int) -> np.ndarray:
    out = np.empty((nrows, ncols), dtype=object)
    out[:] = 0
    return out


def identity_matrix(d: int) -> np.ndarray:
    out = zeros_matrix(d, d)
    for i in range(d):
        out[i, i] = 1
    return out


def matrices_equal(a: np.ndarray, b: np.ndarray) -> bool:
    return a.shape == b.shape and bool((a == b).all())


def _residue(q, p: int, cache: dict) -> int:
    r = cache.get(q)
    if r is None:
        den = q.denominator % p
        if den == 0:
            raise ZeroDivisionError(f"denominator of {q} vanishes mod {p}")
        r = (q.numerator % p) * pow(den, p - 2, p) % p
        cache[q] = r
    return r


def mat_to_modp(mat: np.ndarray, p: int) -> np.ndarray:
    """Reduce an exact matrix mod p.  Denominators divisible by p are a
    hard error; callers escalate to another prime."""
    out = np.zeros(mat.shape, dtype=np.int64)
    cache: dict = {}
    flat = mat.reshape(-1)
    dst = out.reshape(-1)
    for k in range(flat.shape[0]):
        q = flat[k]
        if q:
            dst[k] = _residue(q, p, cache)
    return out


# ---------------------------------------------------------------------------
# sparse rows (dict col -> value), used where dense object matmuls would hurt

def rows_from_dense(mat: np.ndarray) -> list[dict[int, Fraction]]:
    out = []
    for i in range(mat.shape[0]):
        row = {}
        for j in range(mat.shape[1]):
            v = mat[i, j]
            if v:
                row[j] = exactify(v)
        out.append(row)
    return out


def dense_from_rows(rows: list[dict[int, Fraction]], ncols: int) -> np.ndarray:
    out = zeros_matrix(len(rows), ncols)
    for i, row in enumerate(rows):
        for j, v in row.items():
            out[i, j] = v
    return out


def sparse_matmul(a_rows: list[dict[int, Fraction]],
                  b_rows: list[dict[int, Fraction]]) -> list[dict[int, Fraction]]:
    out = []
    for arow in a_rows:
        acc: dict[int, Fraction] = {}
        for k, v in arow.items():
            for j, w in b_rows[k].items():
                acc[j] = acc.get(j, 0) + v * w
        out.append({j: c for j, c in acc.items() if c})
    return out


def sparse_scale_add(acc: list[dict[int, Fraction]], c: Fraction,
                     rows: list[dict[int, Fraction]]) -> None:
    for arow, row in zip(acc, rows):
        for j, v in row.items():
            s = arow.get(j, 0) + c * v
            if s:
                arow[j] = s
            else:
                arow.pop(j, None)


# ---------------------------------------------------------------------------
# exact reduced row echelon form

class ExactRref:
    """Incremental reduced row echelon form over Q.

    Rows are inserted one at a time; the structure keeps a fully reduced
    set of pivot rows (leading coefficient 1, pivot columns cleared in all
    other rows) with deterministic leftmost pivoting.
    """

    def __init__(self, ncols: int):
        self.ncols = ncols
        self.rows: list[list[Fraction]] = []
        self.pivot_cols: list[int] = []

    @property
    def rank(self) -> int:
        return len(self.rows)

    def reduce(self, row) -> list:
        """Residue of ``row`` after clearing every pivot column."""
        v = [exactify(x) for x in row]
        for pc, prow in zip(self.pivot_cols, self.rows):
            c = v[pc]
            if c:
                for j in range(pc, self.ncols):
                    if prow[j]:
                        v[j] -= c * prow[j]
        return v

    def insert(self, row) -> bool:
        """Reduce and keep ``row``; True if it added a new pivot."""
        v = self.reduce(row)
        pc = next((j for j, x in enumerate(v) if x), None)
        if pc is None:
            return False
        inv = Fraction(1, 1) / v[pc]
        v = [exactify(x * inv) for x in v]
        for prow in self.rows:
            c = prow[pc]
            if c:
                for j in range(pc, self.ncols):
                    if v[j]:
                        prow[j] -= c * v[j]
        at = next((k for k, c in enumerate(self.pivot_cols) if c > pc), len(self.rows))
        self.rows.insert(at, v)
        self.pivot_cols.insert(at, pc)
        return True

    def contains(self, row) -> bool:
        return all(x == 0 for x in self.reduce(row))

    def kernel_basis(self) -> list[list[Fraction]]:
        """Kernel of the row span seen as a matrix, one vector per free
        column, in free-column order."""
        pivset = set(self.pivot_cols)
        free = [j for j in range(self.ncols) if j not in pivset]
        out = []
        for f in free:
            v = [0] * self.ncols
            v[f] = 1
            for pc, prow in zip(self.pivot_cols, self.rows):
                if prow[f]:
                    v[pc] = -prow[f]
            out.append(v)
        return out


def rref(mat) -> tuple[int, np.ndarray, tuple[int, ...]]:
    """Exact reduced row echelon form.

    Returns (rank, reduced matrix of the same shape, pivot columns).
    Pivoting is deterministic: leftmost nonzero entry, rows in order.
    """
    arr = mat if isinstance(mat, np.ndarray) else frac_matrix(mat)
    nrows, ncols = arr.shape
    acc = ExactRref(ncols)
    for i in range(nrows):
        acc.insert(list(arr[i, :]))
    out = zeros_matrix(nrows, ncols)
    for i, row in enumerate(acc.rows):
        for j, v in enumerate(row):
            out[i, j] = v
    return acc.rank, out, tuple(acc.pivot_cols)


def nullspace_exact(rows: Iterable[Sequence], ncols: int) -> list[list[Fraction]]:
    acc = ExactRref(ncols)
    for row in rows:
        acc.insert(row)
    return acc.kernel_basis()


# ---------------------------------------------------------------------------
# modular echelon form (int64 numpy, single prime)

class ModRref:
    """Streaming reduced row echelon form over GF(p).

    Pivot rows are kept in one preallocated int64 matrix so incoming rows
    reduce with a single mat-vec; the pivot block stays fully reduced.
    """

    def __init__(self, ncols: int, p: int, max_rank: int | None = None):
        self.ncols = ncols
        self.p = p
        cap = ncols if max_rank is None else min(max_rank, ncols)
        self._rows = np.zeros((cap, ncols), dtype=np.int64)
        self._pivots = np.zeros(cap, dtype=np.int64)
        self._pivot_row: dict[int, int] = {}
        self.rank = 0

    def reduce(self, v: np.ndarray) -> np.ndarray:
        v = np.mod(v, self.p)
        if self.rank:
            coeffs = v[self._pivots[: self.rank]]
            if coeffs.any():
                v = np.mod(v - coeffs @ self._rows[: self.rank], self.p)
        return v

    def _install(self, v: np.ndarray) -> bool:
        nz = np.nonzero(v)[0]
        if nz.size == 0:
            return False
        pc = int(nz[0])
        v = v * pow(int(v[pc]), self.p - 2, self.p) % self.p
        if self.rank:
            col = self._rows[: self.rank, pc].copy()
            if col.any():
                self._rows[: self.rank] = np.mod(
                    self._rows[: self.rank] - col[:, None] * v[None, :], self.p)
        at = int(np.searchsorted(self._pivots[: self.rank], pc))
        self._rows[at + 1: self.rank + 1] = self._rows[at: self.rank]
        self._pivots[at + 1: self.rank + 1] = self._pivots[at: self.rank]
        self._rows[at] = v
        self._pivots[at] = pc
        for col, row in self._pivot_row.items():
            if row >= at:
                self._pivot_row[col] = row + 1
        self._pivot_row[pc] = at
        self.rank += 1
        return True

    def insert(self, v: np.ndarray) -> bool:
        return self._install(self.reduce(v))

    def insert_sparse(self, items) -> bool:
        """Insert a row given as (column, residue) pairs.

        Because the pivot block is fully reduced, the only pivot rows
        that can interact with a sparse row are those whose pivot column
        the row actually touches; one pass over the nonzero entries
        reduces it completely.
        """
        v = np.zeros(self.ncols, dtype=np.int64)
        hits = []
        for col, val in items:
            val %= self.p
            v[col] = val
            if val:
                row = self._pivot_row.get(col)
                if row is not None:
                    hits.append((row, val))
        for row, val in hits:
            v = v - val * self._rows[row]
        if hits:
            v = np.mod(v, self.p)
        return self._install(v)

    @property
    def pivot_cols(self) -> tuple[int, ...]:
        return tuple(int(c) for c in self._pivots[: self.rank])

    def kernel_basis(self) -> np.ndarray:
        """Kernel vectors as columns of an (ncols x nullity) array, one per
        free column, in free-column order."""
        pivs = self.pivot_cols
        pivset = set(pivs)
        free = [j for j in range(self.ncols) if j not in pivset]
        out = np.zeros((self.ncols, len(free)), dtype=np.int64)
        for k, f in enumerate(free):
            out[f, k] = 1
            for i, pc in enumerate(pivs):
                out[pc, k] = (-int(self._rows[i, f])) % self.p
        return out


def kernel_modp_dense(mat: np.ndarray, p: int) -> np.ndarray:
    """Kernel (as columns) of a dense int64 matrix over GF(p)."""
    acc = ModRref(mat.shape[1], p)
    for i in range(mat.shape[0]):
        if acc.rank == acc.ncols:
            break
        acc.insert(mat[i])
    return acc.kernel_basis()


# ---------------------------------------------------------------------------
# CRT and rational reconstruction

def crt_pair(a1: int, p1: int, a2: int, p2: int) -> int:
    inv = pow(p1 % p2, p2 - 2, p2)
    return (a1 + p1 * ((a2 - a1) * inv % p2)) % (p1 * p2)


def rational_reconstruct(a: int, modulus: int) -> Fraction | None:
    """Find p/q == a (mod modulus) with |p|, q <= sqrt(modulus/2)."""
    bound = isqrt(modulus // 2)
    r0, r1 = modulus, a % modulus
    t0, t1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        t0, t1 = t1, t0 - q * t1
    if t1 == 0 or abs(t1) > bound or gcd(r1, abs(t1)) != 1:
        return None
    return Fraction(r1, t1) if t1 > 0 else Fraction(-r1, -t1)


# ---------------------------------------------------------------------------
# sparse linear systems with certification

@dataclass
class SolveResult:
    nullity: int
    rank: int
    kernel: list[list[Fraction]] | None
    method: str


def _sparse_row_to_exact(row: dict[int, Fraction], vec: Sequence) -> Fraction:
    acc = 0
    for j, c in row.items():
        acc += c * vec[j]
    return acc


def _sparse_row_items_modp(row, p, cache):
    return [(j, _residue(c, p, cache)) for j, c in row.items()]


def solve_sparse_system(
    rows: list[dict[int, Fraction]],
    ncols: int,
    mode: str = "auto",
    primes: Sequence[int] = DEFAULT_PRIMES,
    want_kernel: bool = True,
) -> SolveResult:
    """Rank and kernel of a sparse system of exact linear equations.

    Modes 'exact' and 'auto' both return unconditionally exact answers:
    pure Fraction elimination for small systems, and the certified
    modular route (which proves its result, see the module docstring)
    for larger ones.  Mode 'modular' skips certification and reports the
    two-prime dimensions only.
    """
    if mode not in ("auto", "exact", "modular"):
        raise ValueError(f"unknown mode {mode!r}")
    if mode in ("auto", "exact") and ncols <= EXACT_UNKNOWN_CAP:
        acc = ExactRref(ncols)
        for row in rows:
            dense = [Fraction(0)] * ncols
            for j, c in row.items():
                dense[j] = c
            acc.insert(dense)
        kernel = acc.kernel_basis() if want_kernel else None
        return SolveResult(ncols - acc.rank, acc.rank, kernel, "exact")

    primes = list(primes)
    attempts = list(primes) + [p for p in EXTRA_PRIMES if p not in primes]
    used: list[int] = []
    tables: list[ModRref] = []
    for p in attempts:
        if len(used) == 2:
            break
        try:
            acc = ModRref(ncols, p)
            cache: dict = {}
            for row in rows:
                acc.insert_sparse(_sparse_row_items_modp(row, p, cache))
        except ZeroDivisionError:
            continue
        used.append(p)
        tables.append(acc)
    if len(used) < 2:
        raise ArithmeticError("ran out of primes for the modular solve")

    t1, t2 = tables
    if t1.rank != t2.rank or t1.pivot_cols != t2.pivot_cols:
        raise ArithmeticError(
            f"primes {used} disagree on the echelon shape; system is ill-conditioned "
            f"for the configured primes")
    rank = t1.rank
    nullity = ncols - rank
    label = f"mod-p({used[0]},{used[1]})"
    if mode == "modular":
        return SolveResult(nullity, rank, None, label)

    # Lift the kernel: CRT across the two primes, rational reconstruction,
    # then exact verification row by row.  Together with the modular rank
    # (a lower bound on the exact rank) this pins both dimensions exactly.
    k1 = t1.kernel_basis()
    k2 = t2.kernel_basis()
    modulus = used[0] * used[1]
    kernel: list[list[Fraction]] = []
    for col in range(k1.shape[1]):
        vec = []
        for i in range(ncols):
            a = crt_pair(int(k1[i, col]), used[0], int(k2[i, col]), used[1])
            q = rational_reconstruct(a, modulus)
            if q is None:
                raise ArithmeticError(
                    "rational reconstruction failed; rerun with more primes")
            vec.append(q)
        kernel.append(vec)
    for vec in kernel:
        for row in rows:
            if _sparse_row_to_exact(row, vec) != 0:
                raise ArithmeticError("lifted kernel vector failed exact verification")
    return SolveResult(nullity, rank, kernel if want_kernel else None,
                       "mod-p-confirmed-exact")


# ---------------------------------------------------------------------------
# operators and intertwiner systems

class LinOp:
    """Exact operator normal form: sparse rows over a fixed dimension."""

    def __init__(self, dim: int, rows: list[dict[int, Fraction]]):
        self.dim = dim
        self.rows = rows
        self._cols: list[dict[int, Fraction]] | None = None

    @classmethod
    def from_dense(cls, mat: np.ndarray) -> "LinOp":
        dim = mat.shape[0]
        if mat.shape[1] != dim:
            raise ValueError("operator must be square")
        rows = []
        for i in range(dim):
            row = {}
            for j in range(dim):
                c = mat[i, j]
                if c:
                    row[j] = exactify(c)
            rows.append(row)
        return cls(dim, rows)

    @classmethod
    def zero(cls, dim: int) -> "LinOp":
        return cls(dim, [{} for _ in range(dim)])

    def cols(self) -> list[dict[int, Fraction]]:
        if self._cols is None:
            cols: list[dict[int, Fraction]] = [{} for _ in range(self.dim)]
            for i, row in enumerate(self.rows):
                for j, c in row.items():
                    cols[j][i] = c
            self._cols = cols
        return self._cols

    def diagonal_vector(self):
        """The diagonal as a list if the operator is diagonal, else None."""
        diag = [0] * self.dim
        for i, row in enumerate(self.rows):
            for j, c in row.items():
                if i != j:
                    return None
                diag[i] = c
        return diag

    def to_dense(self) -> np.ndarray:
        out = zeros_matrix(self.dim, self.dim)
        for i, row in enumerate(self.rows):
            for j, c in row.items():
                out[i, j] = c
        return out


def _as_linop(op, dim: int) -> LinOp:
    if isinstance(op, LinOp):
        if op.dim != dim:
            raise ValueError(f"operator dimension {op.dim} != {dim}")
        return op
    return LinOp.from_dense(op)


def intertwiner_kernel(
    left_ops: Sequence,
    right_ops: Sequence,
    dim_w: int,
    dim_u: int,
    mode: str = "auto",
    primes: Sequence[int] = DEFAULT_PRIMES,
    want_kernel: bool = True,
    unknown_cap: int = DEFAULT_UNKNOWN_CAP,
) -> tuple[SolveResult, list[tuple[int, int]]]:
    """Solve L_k A == A R_k for a dim_w x dim_u unknown matrix A.

    Diagonal operator pairs are used first: they force A to vanish outside
    the entry set where the diagonals agree, which is what keeps the big
    weight-graded systems small.  Returns the solve result together with
    the list of (row, col) unknowns the kernel vectors refer to.
    """
    if len(left_ops) != len(right_ops):
        raise ValueError("need one right operator per left operator")
    pairs = [(_as_linop(l, dim_w), _as_linop(r, dim_u))
             for l, r in zip(left_ops, right_ops)]

    diag_pairs = []
    general_pairs = []
    for l, r in pairs:
        dl, dr = l.diagonal_vector(), r.diagonal_vector()
        if dl is not None and dr is not None:
            diag_pairs.append((dl, dr))
        else:
            general_pairs.append((l, r))

    support = [(i, u) for i in range(dim_w) for u in range(dim_u)
               if all(dl[i] == dr[u] for dl, dr in diag_pairs)]
    if len(support) > unknown_cap:
        raise CapExceededError(
            f"{len(support)} unknowns exceed the solver cap {unknown_cap}; "
            f"the modular engine may still apply via a smaller formulation")
    unknown = {iu: k for k, iu in enumerate(support)}

    equations: dict[tuple[int, int, int], dict[int, Fraction]] = {}

    def eq_row(g: int, i: int, u: int) -> dict[int, Fraction]:
        key = (g, i, u)
        row = equations.get(key)
        if row is None:
            row = equations[key] = {}
        return row

    for g, (l, r) in enumerate(general_pairs):
        for i, lrow in enumerate(l.rows):
            for k, c in lrow.items():
                for u in range(dim_u):
                    idx = unknown.get((k, u))
                    if idx is not None:
                        row = eq_row(g, i, u)
                        row[idx] = row.get(idx, 0) + c
        for u, rcol in enumerate(r.cols()):
            for v, c in rcol.items():
                for i in range(dim_w):
                    idx = unknown.get((i, v))
                    if idx is not None:
                        row = eq_row(g, i, u)
                        row[idx] = row.get(idx, 0) - c

    rows = [equations[key] for key in sorted(equations)]
    rows = [r for r in rows if r]
    result = solve_sparse_system(rows, len(support), mode=mode, primes=primes,
                                 want_kernel=want_kernel)
    return result, support


@dataclass
class MatrixSpan:
    """A subspace of d x d matrices with an exactly independent basis."""

    d: int
    basis: list[np.ndarray]
    rref: ExactRref
    method: str = "exact"

    @property
    def dim(self) -> int:
        return len(self.basis)

    @classmethod
    def from_matrices(cls, mats: Iterable[np.ndarray], d: int,
                      method: str = "exact") -> "MatrixSpan":
        acc = ExactRref(d * d)
        kept = []
        for m in mats:
            if m.shape != (d, d):
                raise ValueError(f"expected {d}x{d} matrices, got {m.shape}")
            if acc.insert(list(m.reshape(-1))):
                kept.append(m)
        return cls(d, kept, acc, method)

    def contains_matrix(self, m: np.ndarray) -> bool:
        return self.rref.contains(list(m.reshape(-1)))


def commutant(
    gens: Sequence,
    d: int,
    mode: str = "auto",
    primes: Sequence[int] = DEFAULT_PRIMES,
    want_basis: bool = True,
    unknown_cap: int = DEFAULT_UNKNOWN_CAP,
) -> tuple[MatrixSpan | None, SolveResult]:
    """Basis (and dimensions) of { X : X g == g X for every generator }.

    With no generators this is the full matrix algebra.  The kernel comes
    back as a MatrixSpan when exact vectors are available; the modular
    mode returns dimensions only.
    """
    ops = [_as_linop(g, d) for g in gens]
    result, support = intertwiner_kernel(ops, ops, d, d, mode=mode, primes=primes,
                                         want_kernel=want_basis,
                                         unknown_cap=unknown_cap)
    span = None
    if want_basis and result.kernel is not None:
        mats = []
        for vec in result.kernel:
            m = zeros_matrix(d, d)
            for k, (i, j) in enumerate(support):
                if vec[k]:
                    m[i, j] = vec[k]
            mats.append(m)
        span = MatrixSpan.from_matrices(mats, d, method=result.method)
        if span.dim != result.nullity:
            raise ArithmeticError("kernel vectors were not independent")
    return span, result


def invariant_vectors(
    ops: Sequence,
    d: int,
    mode: str = "auto",
    primes: Sequence[int] = DEFAULT_PRIMES,
) -> tuple[SolveResult, list[int]]:
    """Joint kernel of a family of operators on a d-dimensional space."""
    lops = [_as_linop(o, d) for o in ops]
    rops = [LinOp.zero(1) for _ in lops]
    result, support = intertwiner_kernel(lops, rops, d, 1, mode=mode, primes=primes)
    return result, [i for i, _ in support]


# ---------------------------------------------------------------------------
# chunked modular commutant for torus-graded dense generator families

def _check_weight_zero(gens: Sequence[np.ndarray], weights: Sequence[tuple]):
    for g in gens:
        nz = np.nonzero(g != 0)
        for i, j in zip(*nz):
            if weights[int(i)] != weights[int(j)]:
                raise ValueError("generator is not weight-homogeneous of weight zero")


def graded_commutant_dim(
    gens: Sequence[np.ndarray],
    weights: Sequence[tuple],
    mode: str = "modular",
    primes: Sequence[int] = DEFAULT_PRIMES,
) -> tuple[int, str]:
    """Dimension of the commutant of weight-preserving dense generators.

    ``weights[i]`` grades the i-th basis vector; because every generator
    preserves the grading, the commutant equations split into independent
    blocks indexed by pairs of weights, each of which stays small even
    when the ambient matrix space is far too large to eliminate directly.
    """
    if not gens:
        raise ValueError("need at least one generator")
    d = gens[0].shape[0]
    if len(weights) != d:
        raise ValueError("need one weight per basis vector")
    _check_weight_zero(gens, weights)
    groups: dict[tuple, list[int]] = {}
    for i, w in enumerate(weights):
        groups.setdefault(w, []).append(i)
    keys = sorted(groups)

    if mode == "exact":
        total = 0
        for w1, w2 in itertools.product(keys, repeat=2):
            rows_ix = groups[w1]
            cols_ix = groups[w2]
            basis = None  # columns of an exact kernel matrix
            for g in gens:
                lblk = g[np.ix_(rows_ix, rows_ix)]
                rblk = g[np.ix_(cols_ix, cols_ix)]
                t = _kron_object(lblk, identity_matrix(len(cols_ix))) \
                    - _kron_object(identity_matrix(len(rows_ix)), rblk.T)
                mat = t if basis is None else t @ basis
                kern = nullspace_exact([list(mat[i, :]) for i in range(mat.shape[0])],
                                       mat.shape[1])
                if not kern:
                    basis = zeros_matrix(t.shape[1] if basis is None else basis.shape[0], 0)
                    break
                kmat = np.array(kern, dtype=object).T
                basis = kmat if basis is None else basis @ kmat
            total += 0 if basis is None else basis.shape[1]
        return total, "exact"

    dims = []
    used = []
    for p in list(primes) + [q for q in EXTRA_PRIMES if q not in primes]:
        if len(used) == 2:
            break
        try:
            gens_p = [mat_to_modp(g, p) for g in gens]
        except ZeroDivisionError:
            continue
        total = 0
        for w1, w2 in itertools.product(keys, repeat=2):
            rows_ix = np.array(groups[w1])
            cols_ix = np.array(groups[w2])
            nb = len(cols_ix)
            na = len(rows_ix)
            basis = None
            alive = na * nb
            for gp in gens_p:
                lblk = gp[np.ix_(rows_ix, rows_ix)]
                rblk = gp[np.ix_(cols_ix, cols_ix)]
                t = np.mod(np.kron(lblk, np.eye(nb, dtype=np.int64))
                           - np.kron(np.eye(na, dtype=np.int64), rblk.T), p)
                mat = t if basis is None else np.mod(t @ basis, p)
                kern = kernel_modp_dense(mat, p)
                basis = kern if basis is None else np.mod(basis @ kern, p)
                alive = basis.shape[1]
                if alive == 0:
                    break
            total += alive
        dims.append(total)
        used.append(p)
    if len(used) < 2:
        raise ArithmeticError("ran out of primes for the graded commutant")
    if dims[0] != dims[1]:
        raise ArithmeticError(f"primes {used} disagree: {dims}")
    return dims[0], f"mod-p({used[0]},{used[1]})"


def _kron_object(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    out = np.empty((a.shape[0] * b.shape[0], a.shape[1] * b.shape[1]), dtype=object)
    for i in range(a.shape[0]):
        for j in range(a.shape[1]):
            out[i * b.shape[0]:(i + 1) * b.shape[0],
                j * b.shape[1]:(j + 1) * b.shape[1]] = a[i, j] * b
    return out


# ---------------------------------------------------------------------------
# unital algebra closure

def algebra_closure(
    seed: Sequence[np.ndarray],
    d: int,
    primes: Sequence[int] = DEFAULT_PRIMES,
    dim_cap: int = 4096,
) -> MatrixSpan:
    """Smallest unital matrix algebra containing the seed matrices.

    The span is saturated under left multiplication by the seed, which
    reaches every word in the generators.  Membership during saturation
    is screened modulo two primes (a nonzero residue proves exact
    independence); once stable, closure is re-verified with exact
    arithmetic so the final dimension does not rest on the screening.
    """
    seed = list(seed)
    for m in seed:
        if m.shape != (d, d):
            raise ValueError(f"expected {d}x{d} matrices, got {m.shape}")
    p1, p2 = primes[0], primes[1]
    screens = (ModRref(d * d, p1), ModRref(d * d, p2))

    def screen_insert(mat: np.ndarray) -> bool:
        v1 = mat_to_modp(mat, p1).reshape(-1)
        v2 = mat_to_modp(mat, p2).reshape(-1)
        new1 = screens[0].insert(v1)
        new2 = screens[1].insert(v2)
        return new1 or new2

    basis: list[np.ndarray] = []
    frontier: list[np.ndarray] = []
    for m in [identity_matrix(d)] + seed:
        if screen_insert(m):
            basis.append(m)
            frontier.append(m)
    while frontier:
        if len(basis) > dim_cap:
            raise CapExceededError(f"closure dimension exceeds cap {dim_cap}")
        fresh: list[np.ndarray] = []
        for g in seed:
            for b in frontier:
                prod = g @ b
                if screen_insert(prod):
                    basis.append(prod)
                    fresh.append(prod)
        frontier = fresh

    span = MatrixSpan.from_matrices(basis, d)
    if span.dim != len(basis):
        raise ArithmeticError("modular screening produced a dependent basis")
    # Exact closure check: every generator times every basis element must
    # already lie in the span.  If the screening dropped something real,
    # resume saturation with exact membership tests.
    queue = [g @ b for g in seed for b in span.basis]
    while queue:
        prod = queue.pop(0)
        if not span.contains_matrix(prod):
            span.rref.insert(list(prod.reshape(-1)))
            span.basis.append(prod)
            queue.extend(g @ prod for g in seed)
    return span


def span_equal(a: MatrixSpan, b: MatrixSpan) -> bool:
    """Mutual containment of two matrix spans, checked exactly."""
    if a.d != b.d:
        raise ValueError(f"ambient dimensions differ: {a.d} vs {b.d}")
    if a.dim != b.dim:
        return False
    return (all(b.contains_matrix(m) for m in a.basis)
            and all(a.contains_matrix(m) for m in b.basis))


# ---------------------------------------------------------------------------
# matrix JSON export

def matrix_to_json(mat: np.ndarray, sparse: bool = False):
    """Dense: 2-d array of 'p/q' strings.  Sparse: explicit entry list."""
    nrows, ncols = mat.shape
    if not sparse:
        return [[fraction_to_str(mat[i, j]) for j in range(ncols)]
                for i in range(nrows)]
    entries = []
    for i in range(nrows):
        for j in range(ncols):
            v = Fraction(mat[i, j])
            if v:
                entries.append([i, j, fraction_to_str(v)])
    return {"rows": nrows, "cols": ncols, "entries": entries}


def matrix_from_json(obj) -> np.ndarray:
    if isinstance(obj, dict):
        out = zeros_matrix(obj["rows"], obj["cols"])
        for i, j, s in obj["entries"]:
            out[i, j] = fraction_from_str(s)
        return out
    return frac_matrix([[fraction_from_str(s) for s in row] for row in obj])
