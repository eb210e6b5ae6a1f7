"""Small exact linear algebra over Z and Q used throughout the geometry code."""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd


def det_int(rows: list[list[int]]) -> int:
    """Determinant of a small integer matrix (fraction-free Bareiss)."""
    n = len(rows)
    m = [list(r) for r in rows]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def rank_int(rows) -> int:
    """Rank of a list of integer vectors (exact, fraction-free)."""
    m = [list(map(Fraction, r)) for r in rows]
    cols = len(m[0]) if m else 0
    rank = 0
    for c in range(cols):
        piv = None
        for i in range(rank, len(m)):
            if m[i][c]:
                piv = i
                break
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        pv = m[rank][c]
        for i in range(rank + 1, len(m)):
            if m[i][c]:
                f = m[i][c] / pv
                for j in range(c, cols):
                    m[i][j] -= f * m[rank][j]
        rank += 1
        if rank == len(m):
            break
    return rank


class RowSpan:
    """Incrementally maintained row space of rational vectors."""

    def __init__(self, dim: int):
        self.dim = dim
        self.rows: list[list[Fraction]] = []
        self.pivots: list[int] = []

    def copy(self) -> "RowSpan":
        s = RowSpan(self.dim)
        s.rows = [r[:] for r in self.rows]
        s.pivots = self.pivots[:]
        return s

    def _reduce(self, vec) -> list[Fraction]:
        v = [Fraction(x) for x in vec]
        for row, p in zip(self.rows, self.pivots):
            if v[p]:
                f = v[p] / row[p]
                for j in range(self.dim):
                    v[j] -= f * row[j]
        return v

    def contains(self, vec) -> bool:
        return not any(self._reduce(vec))

    def add(self, vec) -> bool:
        """Add a vector; returns False if it was already in the span."""
        v = self._reduce(vec)
        for p in range(self.dim):
            if v[p]:
                self.rows.append(v)
                self.pivots.append(p)
                return True
        return False

    @property
    def rank(self) -> int:
        return len(self.rows)


def adjugate_det(cols: list[tuple[int, ...]]) -> tuple[list[list[int]], int]:
    """(adjugate, det) of the square integer matrix with the given columns.

    adj @ M = det * I, so M^{-1} v = adj @ v / det.
    """
    n = len(cols)
    m = [[cols[j][i] for j in range(n)] for i in range(n)]
    d = det_int(m)
    if d == 0:
        raise ValueError("singular matrix")
    adj = []
    for i in range(n):
        row = []
        for j in range(n):
            minor = [[m[a][b] for b in range(n) if b != i] for a in range(n) if a != j]
            row.append((-1) ** (i + j) * (det_int(minor) if minor else 1))
        adj.append(row)
    return adj, d


def solve_in_basis(adj: list[list[int]], d: int, vec) -> list[Fraction]:
    """Coordinates of vec in the basis whose (adjugate, det) was precomputed."""
    n = len(adj)
    return [Fraction(sum(adj[i][j] * vec[j] for j in range(n)), d) for i in range(n)]


def largest_elementary_divisor(rows: list[tuple[int, ...]]) -> int:
    """Largest elementary divisor of a nonsingular square integer matrix.

    This is the smallest d with d*Z^n contained in the row lattice.
    """
    n = len(rows)
    m = [list(r) for r in rows]
    # Smith normal form, keeping only the diagonal; small n, plain algorithm.
    def smith(mat):
        mat = [row[:] for row in mat]
        size = len(mat)
        divisors = []
        r = 0
        while r < size:
            # find nonzero pivot
            piv = None
            for i in range(r, size):
                for j in range(r, size):
                    if mat[i][j]:
                        piv = (i, j)
                        break
                if piv:
                    break
            if piv is None:
                break
            i0, j0 = piv
            mat[r], mat[i0] = mat[i0], mat[r]
            for row in mat:
                row[r], row[j0] = row[j0], row[r]
            while True:
                # clear column r with row ops
                done = True
                for i in range(r + 1, size):
                    if mat[i][r]:
                        qq = mat[i][r] // mat[r][r]
                        for j in range(r, size):
                            mat[i][j] -= qq * mat[r][j]
                        if mat[i][r]:
                            mat[r], mat[i] = mat[i], mat[r]
                            done = False
                for j in range(r + 1, size):
                    if mat[r][j]:
                        qq = mat[r][j] // mat[r][r]
                        for i in range(r, size):
                            mat[i][j] -= qq * mat[i][r]
                        if mat[r][j]:
                            for i in range(r, size):
                                mat[i][r], mat[i][j] = mat[i][j], mat[i][r]
                            done = False
                if done:
                    break
            divisors.append(abs(mat[r][r]))
            r += 1
        return divisors

    divs = smith(m)
    if len(divs) < n or any(d == 0 for d in divs):
        raise ValueError("matrix is singular")
    out = 1
    for d in divs:
        out = out * d // gcd(out, d)
    return out


def primitive_normal(vectors: list[tuple[int, ...]], dim: int) -> tuple[int, ...] | None:
    """Primitive integer normal of the hyperplane spanned by the vectors.

    Returns None unless the vectors span a subspace of dimension dim - 1.
    Normalized so the first nonzero coordinate is positive.
    """
    span = RowSpan(dim)
    for v in vectors:
        span.add(v)
    if span.rank != dim - 1:
        return None
    # Solve span . x = 0 exactly: one-dimensional kernel.
    rows = [r[:] for r in span.rows]
    pivots = span.pivots[:]
    free = [j for j in range(dim) if j not in pivots]
    assert len(free) == 1
    f = free[0]
    x = [Fraction(0)] * dim
    x[f] = Fraction(1)
    for row, p in reversed(list(zip(rows, pivots))):
        s = sum(row[j] * x[j] for j in range(dim) if j != p)
        x[p] = -s / row[p]
    den = 1
    for c in x:
        den = den * c.denominator // gcd(den, c.denominator)
    ints = [int(c * den) for c in x]
    g = 0
    for c in ints:
        g = gcd(g, c)
    ints = [c // g for c in ints]
    for c in ints:
        if c != 0:
            if c < 0:
                ints = [-y for y in ints]
            break
    return tuple(ints)


def in_cone(generators: list[tuple], target) -> bool:
    """Exact feasibility of target = sum x_i g_i with x_i >= 0 (phase-I simplex)."""
    m = len(target)
    n = len(generators)
    b = [Fraction(t) for t in target]
    cols = [[Fraction(g[i]) for i in range(m)] for g in generators]
    # Make b >= 0 by row sign flips.
    for i in range(m):
        if b[i] < 0:
            b[i] = -b[i]
            for c in cols:
                c[i] = -c[i]
    # Tableau with artificial basis; minimize sum of artificials.
    # Columns: n structural + m artificial.
    T = [[cols[j][i] for j in range(n)] + [Fraction(int(k == i)) for k in range(m)] + [b[i]]
         for i in range(m)]
    basis = list(range(n, n + m))
    # cost row for phase I
    cost = [Fraction(0)] * (n + m + 1)
    for i in range(m):
        for j in range(n + m + 1):
            cost[j] -= T[i][j]
        cost[n + i] += 1

    while True:
        enter = None
        for j in range(n + m):
            if cost[j] < 0:
                enter = j  # Bland's rule
                break
        if enter is None:
            break
        # ratio test
        leave = None
        best = None
        for i in range(m):
            if T[i][enter] > 0:
                ratio = T[i][-1] / T[i][enter]
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best = ratio
                    leave = i
        if leave is None:
            # unbounded phase-I cannot happen (cost bounded below by 0)
            raise ArithmeticError("simplex anomaly")
        piv = T[leave][enter]
        T[leave] = [x / piv for x in T[leave]]
        for i in range(m):
            if i != leave and T[i][enter]:
                f = T[i][enter]
                T[i] = [x - f * y for x, y in zip(T[i], T[leave])]
        if cost[enter]:
            f = cost[enter]
            cost = [x - f * y for x, y in zip(cost, T[leave])]
        basis[leave] = enter
    return -cost[-1] == 0
