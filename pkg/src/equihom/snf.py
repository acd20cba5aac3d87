"""Exact integer linear algebra: Smith normal form, kernels, lattice quotients.

All arithmetic uses Python integers, so entries may grow without bound during
elimination.  The Smith form runs in two phases: a sparse phase that eliminates
unit pivots chosen by Markowitz cost (which covers almost every pivot of the
boundary matrices arising from cell complexes), and a dense textbook phase on
whatever small block survives.
"""

import math

from .errors import InvalidInputError


class SparseMat:
    """Integer matrix stored as one dict per row (column index -> entry)."""

    def __init__(self, nrows, ncols, rows=None):
        self.nrows = nrows
        self.ncols = ncols
        self.rows = [dict() for _ in range(nrows)] if rows is None else rows

    @classmethod
    def from_dense(cls, dense, ncols=None):
        nrows = len(dense)
        if ncols is None:
            ncols = len(dense[0]) if dense else 0
        rows = [{j: v for j, v in enumerate(r) if v} for r in dense]
        return cls(nrows, ncols, rows)

    def to_dense(self):
        return [[r.get(j, 0) for j in range(self.ncols)] for r in self.rows]

    def set(self, i, j, v):
        if v:
            self.rows[i][j] = v
        else:
            self.rows[i].pop(j, None)

    def add_at(self, i, j, v):
        self.set(i, j, self.rows[i].get(j, 0) + v)

    def nnz(self):
        return sum(len(r) for r in self.rows)

    def is_zero(self):
        return all(not r for r in self.rows)

    def transpose(self):
        out = SparseMat(self.ncols, self.nrows)
        for i, r in enumerate(self.rows):
            for j, v in r.items():
                out.rows[j][i] = v
        return out

    def matmul(self, other):
        if self.ncols != other.nrows:
            raise InvalidInputError("matrix shapes do not compose")
        out = SparseMat(self.nrows, other.ncols)
        for i, r in enumerate(self.rows):
            acc = out.rows[i]
            for k, v in r.items():
                for j, w in other.rows[k].items():
                    c = acc.get(j, 0) + v * w
                    if c:
                        acc[j] = c
                    else:
                        del acc[j]
        return out

    def mulvec(self, vec):
        return [sum(v * vec[j] for j, v in r.items()) for r in self.rows]


class SmithResult:
    """Invariant factors d_1 | d_2 | ... (all positive) and the rank."""

    def __init__(self, invariants):
        self.invariants = tuple(invariants)
        self.rank = len(self.invariants)

    @property
    def torsion(self):
        return tuple(d for d in self.invariants if d > 1)

    def __repr__(self):
        return f"SmithResult(invariants={self.invariants})"


def _as_sparse(matrix, ncols=None):
    if isinstance(matrix, SparseMat):
        return matrix
    return SparseMat.from_dense([list(r) for r in matrix], ncols=ncols)


def smith_normal_form(matrix, ncols=None):
    """Invariant factors of an integer matrix; deterministic pivot choice.

    ``matrix`` may be a SparseMat or a list of rows (lists).  Only the
    invariant factors and the rank are computed, not the transforms.
    """
    m = _as_sparse(matrix, ncols)
    rows = {i: dict(r) for i, r in enumerate(m.rows) if r}
    cols = {}
    for i, r in rows.items():
        for j in r:
            cols.setdefault(j, set()).add(i)
    by_len = {}
    for i, r in rows.items():
        by_len.setdefault(len(r), set()).add(i)

    def unregister(i):
        bucket = by_len[len(rows[i])]
        bucket.discard(i)
        if not bucket:
            del by_len[len(rows[i])]

    def register(i):
        by_len.setdefault(len(rows[i]), set()).add(i)

    n_unit = 0
    # Phase 1: eliminate entries of absolute value 1.  Scanning only the
    # shortest rows that contain a unit keeps fill-in low (Markowitz-style)
    # without rescanning the whole matrix per pivot.
    while True:
        best = None
        for length in sorted(by_len):
            for i in sorted(by_len[length]):
                r = rows[i]
                units = [(len(cols[j]), j) for j, v in r.items()
                         if v == 1 or v == -1]
                if units:
                    cd, j = min(units)
                    cand = ((length - 1) * (cd - 1), i, j)
                    if best is None or cand < best:
                        best = cand
            if best is not None:
                break
        if best is None:
            break
        _, pi, pj = best
        s = rows[pi][pj]
        pivot_row = rows[pi]
        for i in list(cols[pj]):
            if i == pi:
                continue
            unregister(i)
            r = rows[i]
            factor = r[pj] * s
            for j, v in pivot_row.items():
                c = r.get(j, 0) - factor * v
                if c:
                    if j not in r:
                        cols.setdefault(j, set()).add(i)
                    r[j] = c
                else:
                    if j in r:
                        del r[j]
                        cols[j].discard(i)
            if r:
                register(i)
            else:
                del rows[i]
        # Column pj now meets only row pi, and clearing row pi with column
        # operations touches no other row, so dropping the row and column is a
        # valid Smith reduction step contributing the invariant factor 1.
        unregister(pi)
        for j in rows[pi]:
            cols[j].discard(pi)
            if not cols[j]:
                del cols[j]
        del rows[pi]
        n_unit += 1

    invariants = [1] * n_unit
    if rows:
        # Phase 2: dense Smith form of the small residual block.
        row_ids = sorted(rows)
        col_ids = sorted({j for r in rows.values() for j in r})
        dense = [[rows[i].get(j, 0) for j in col_ids] for i in row_ids]
        invariants.extend(_dense_smith_invariants(dense))
    return SmithResult(invariants)


def _dense_smith_invariants(a):
    """Invariant factors of a dense matrix, via diagonalization."""
    diag = _diagonalize(a, None, None)
    diag = [abs(d) for d in diag if d]
    # enforce the divisibility chain with pairwise gcd/lcm replacement
    for i in range(len(diag)):
        for j in range(i + 1, len(diag)):
            if diag[j] % diag[i]:
                g = math.gcd(diag[i], diag[j])
                diag[j] = diag[i] * diag[j] // g
                diag[i] = g
    return sorted(diag)


def _diagonalize(a, s, t):
    """Diagonalize ``a`` in place by unimodular row/column operations.

    ``s`` and ``t`` (optional) accumulate the operations so that the final
    matrix equals s * a_original * t.  Returns the diagonal.
    """
    m = len(a)
    n = len(a[0]) if m else 0

    def row_op(i, k, q):
        ai, ak = a[i], a[k]
        for j in range(n):
            ai[j] -= q * ak[j]
        if s is not None:
            si, sk = s[i], s[k]
            for j in range(len(si)):
                si[j] -= q * sk[j]

    def col_op(j, k, q):
        for row in a:
            row[j] -= q * row[k]
        if t is not None:
            for row in t:
                row[j] -= q * row[k]

    def row_swap(i, k):
        a[i], a[k] = a[k], a[i]
        if s is not None:
            s[i], s[k] = s[k], s[i]

    def col_swap(j, k):
        for row in a:
            row[j], row[k] = row[k], row[j]
        if t is not None:
            for row in t:
                row[j], row[k] = row[k], row[j]

    top = 0
    while True:
        pi = pj = None
        best = None
        for i in range(top, m):
            row = a[i]
            for j in range(top, n):
                v = abs(row[j])
                if v and (best is None or v < best):
                    best, pi, pj = v, i, j
        if best is None:
            break
        row_swap(top, pi)
        col_swap(top, pj)
        while True:
            p = a[top][top]
            restart = False
            for i in range(top + 1, m):
                if a[i][top]:
                    row_op(i, top, a[i][top] // p)
                    if a[i][top]:
                        row_swap(top, i)
                        restart = True
                        break
            if restart:
                continue
            for j in range(top + 1, n):
                if a[top][j]:
                    col_op(j, top, a[top][j] // p)
                    if a[top][j]:
                        col_swap(top, j)
                        restart = True
                        break
            if not restart:
                break
        if a[top][top] < 0:
            for j in range(n):
                a[top][j] = -a[top][j]
            if s is not None:
                for j in range(len(s[top])):
                    s[top][j] = -s[top][j]
        top += 1
    return [a[i][i] for i in range(min(m, n))]


def snf_with_transforms(matrix):
    """Smith form with transforms: returns (diag, S, T) with S*A*T diagonal.

    The diagonal satisfies the divisibility chain.  Intended for the modest
    dense matrices arising in cohomology-class computations.
    """
    a = [list(r) for r in matrix]
    m = len(a)
    n = len(a[0]) if m else 0
    s = [[int(i == j) for j in range(m)] for i in range(m)]
    t = [[int(i == j) for j in range(n)] for i in range(n)]
    diag = _diagonalize(a, s, t)
    # repair divisibility violations: merge the offending columns and
    # re-diagonalize (cheap at these sizes, and obviously correct)
    while True:
        rank = sum(1 for d in diag if d)
        bad = None
        for i in range(rank):
            for j in range(i + 1, rank):
                if diag[j] % diag[i]:
                    bad = (i, j)
                    break
            if bad:
                break
        if bad is None:
            break
        i, j = bad
        for row in a:
            row[i] += row[j]
        for row in t:
            row[i] += row[j]
        diag = _diagonalize(a, s, t)
    return [abs(d) for d in diag], s, t


def kernel_basis(matrix):
    """Basis (list of integer vectors) of the kernel of an integer matrix."""
    a = [list(r) for r in matrix]
    m = len(a)
    n = len(a[0]) if m else 0
    if m == 0 or n == 0:
        return [[int(i == j) for i in range(n)] for j in range(n)]
    diag, _, t = snf_with_transforms(a)
    rank = sum(1 for d in diag if d)
    return [[t[i][j] for i in range(n)] for j in range(rank, n)]


class ExactSolver:
    """Prefactorized integer linear solver for repeated right-hand sides."""

    def __init__(self, matrix):
        self.m = len(matrix)
        self.n = len(matrix[0]) if self.m else 0
        self.diag, self.s, self.t = snf_with_transforms(matrix)

    def solve(self, rhs):
        m, n = self.m, self.n
        c = [sum(self.s[i][k] * rhs[k] for k in range(m)) for i in range(m)]
        y = [0] * n
        for i in range(min(m, n)):
            if self.diag[i]:
                if c[i] % self.diag[i]:
                    raise InvalidInputError("no integer solution")
                y[i] = c[i] // self.diag[i]
            elif c[i]:
                raise InvalidInputError("no integer solution")
        for i in range(min(m, n), m):
            if c[i]:
                raise InvalidInputError("no integer solution")
        return [sum(self.t[i][k] * y[k] for k in range(n)) for i in range(n)]


def solve_exact(matrix, rhs):
    """Solve A x = b over the integers; raises if no integer solution exists."""
    return ExactSolver([list(r) for r in matrix]).solve(rhs)


class QuotientPresentation:
    """The quotient ker(A) / im(B) of integer lattices, with coordinates.

    ``a`` is a (r x dim) matrix (dense rows, possibly empty), ``b`` a
    (dim x m) matrix whose columns must lie in ker(a).  Exposes the free rank,
    the torsion coefficients, cocycle representatives of the free generators,
    and class coordinates of arbitrary kernel vectors.
    """

    def __init__(self, a, b, dim):
        self.dim = dim
        if a and any(any(row) for row in a):
            self.kernel = kernel_basis(a)
        else:
            self.kernel = [[int(i == j) for i in range(dim)] for j in range(dim)]
        k = len(self.kernel)
        # columns of the kernel-basis matrix are the basis vectors
        self._solver = ExactSolver([[self.kernel[j][i] for j in range(k)]
                                    for i in range(dim)])
        ncols_b = len(b[0]) if (b and b[0] is not None and len(b)) else 0
        if k == 0:
            self.diag, self._s = [], []
            self._s_solver = None
            self.free_positions = []
            self.torsion = ()
            self.free_rank = 0
            return
        if ncols_b:
            coords = [self._solver.solve([b[i][j] for i in range(dim)])
                      for j in range(ncols_b)]
            c = [[coords[j][i] for j in range(ncols_b)] for i in range(k)]
            self.diag, self._s, _ = snf_with_transforms(c)
        else:
            self.diag = []
            self._s = [[int(i == j) for j in range(k)] for i in range(k)]
        self._s_solver = ExactSolver(self._s)
        rank = sum(1 for d in self.diag if d)
        self.free_positions = list(range(rank, k))
        self.torsion = tuple(sorted(d for d in self.diag if d > 1))
        self.free_rank = len(self.free_positions)

    def class_coords(self, z):
        """(free, torsion) coordinates of a kernel vector's quotient class."""
        k = len(self.kernel)
        y = self._solver.solve(z)
        w = [sum(self._s[i][j] * y[j] for j in range(k)) for i in range(k)]
        free = [w[p] for p in self.free_positions]
        tors = [w[i] % d for i, d in enumerate(self.diag) if d > 1]
        return free, tors

    def free_representative(self, j):
        """A cocycle representing the j-th free generator."""
        k = len(self.kernel)
        pos = self.free_positions[j]
        x = self._s_solver.solve([int(i == pos) for i in range(k)])
        return [sum(self.kernel[i][c] * x[i] for i in range(k)) for c in range(self.dim)]


def gf2_rank(rows):
    """Rank over GF(2) of a matrix given as a list of bitmask integers."""
    rank = 0
    basis = []
    for row in rows:
        for b in basis:
            low = b & -b
            if row & low:
                row ^= b
        if row:
            basis.append(row)
            rank += 1
    return rank
