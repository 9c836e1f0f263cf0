"""Exact integer linear algebra.

Everything here works on Python ints, so entries never overflow.  Matrices
are small dense row lists; the only sparse routine is
:func:`invariant_factors`, which is what homology of large complexes uses
when no representative cycles are needed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence


class IntMatrix:
    """Dense integer matrix with explicit shape (so 0 x n matrices exist)."""

    __slots__ = ("rows", "cols", "data")

    def __init__(self, data: Iterable[Iterable[int]], rows: int | None = None, cols: int | None = None):
        self.data = [list(map(int, r)) for r in data]
        self.rows = len(self.data) if rows is None else rows
        if cols is None:
            cols = len(self.data[0]) if self.data else 0
        self.cols = cols
        if len(self.data) != self.rows or any(len(r) != self.cols for r in self.data):
            raise ValueError("inconsistent matrix dimensions")

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls([[0] * cols for _ in range(rows)], rows, cols)

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls([[int(i == j) for j in range(n)] for i in range(n)], n, n)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], rows: int) -> "IntMatrix":
        return cls([[c[i] for c in columns] for i in range(rows)], rows, len(columns))

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.data[i][j]

    def column(self, j: int) -> list[int]:
        return [r[j] for r in self.data]

    def columns(self) -> list[list[int]]:
        return [self.column(j) for j in range(self.cols)]

    @property
    def T(self) -> "IntMatrix":
        return IntMatrix([[self.data[i][j] for i in range(self.rows)] for j in range(self.cols)],
                         self.cols, self.rows)

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        ocols = other.columns()
        out = []
        for r in self.data:
            nz = [(k, v) for k, v in enumerate(r) if v]
            out.append([sum(v * c[k] for k, v in nz) for c in ocols])
        return IntMatrix(out, self.rows, other.cols)

    def apply(self, v: Sequence[int]) -> list[int]:
        if len(v) != self.cols:
            raise ValueError("vector length mismatch")
        nz = [(k, x) for k, x in enumerate(v) if x]
        return [sum(r[k] * x for k, x in nz) for r in self.data]

    def hstack(self, other: "IntMatrix") -> "IntMatrix":
        if self.rows != other.rows:
            raise ValueError("row count mismatch")
        return IntMatrix([a + b for a, b in zip(self.data, other.data)], self.rows, self.cols + other.cols)

    def is_zero(self) -> bool:
        return not any(any(r) for r in self.data)

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.data]

    def __eq__(self, other: object) -> bool:
        return isinstance(other, IntMatrix) and self.shape == other.shape and self.data == other.data

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, tuple(map(tuple, self.data))))

    def __repr__(self) -> str:
        return f"IntMatrix({self.data!r}, rows={self.rows}, cols={self.cols})"


def determinant(M: IntMatrix) -> int:
    """Bareiss fraction-free determinant."""
    n = M.rows
    if n != M.cols:
        raise ValueError("determinant of a non-square matrix")
    if n == 0:
        return 1
    A = M.tolist()
    sign, prev = 1, 1
    for k in range(n - 1):
        if A[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if A[i][k]), None)
            if swap is None:
                return 0
            A[k], A[swap] = A[swap], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


@dataclass(frozen=True)
class AbelianGroup:
    """Z^rank + Z/t_1 + ... + Z/t_k with t_1 | t_2 | ... and every t_i >= 2."""

    rank: int = 0
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        if self.rank < 0:
            raise ValueError("negative rank")
        t = tuple(self.torsion)
        if any(x < 2 for x in t) or any(t[i + 1] % t[i] for i in range(len(t) - 1)):
            raise ValueError(f"torsion {t} is not an invariant factor list")
        object.__setattr__(self, "torsion", t)

    @classmethod
    def from_orders(cls, rank: int, orders: Iterable[int]) -> "AbelianGroup":
        """Canonical form of Z^rank + sum Z/n for arbitrary orders n >= 1."""
        primes: dict[int, list[int]] = {}
        for n in orders:
            n = abs(int(n))
            if n == 0:
                rank += 1
                continue
            p = 2
            while p * p <= n:
                if n % p == 0:
                    q = 1
                    while n % p == 0:
                        n //= p
                        q *= p
                    primes.setdefault(p, []).append(q)
                p += 1
            if n > 1:
                primes.setdefault(n, []).append(n)
        length = max((len(v) for v in primes.values()), default=0)
        factors = [1] * length
        for powers in primes.values():
            powers.sort(reverse=True)
            for i, q in enumerate(powers):
                factors[length - 1 - i] *= q
        return cls(rank, tuple(f for f in factors if f > 1))

    def direct_sum(self, other: "AbelianGroup") -> "AbelianGroup":
        return AbelianGroup.from_orders(self.rank + other.rank, self.torsion + other.torsion)

    @property
    def is_trivial(self) -> bool:
        return self.rank == 0 and not self.torsion

    @property
    def torsion_order(self) -> int:
        out = 1
        for t in self.torsion:
            out *= t
        return out

    def __str__(self) -> str:
        parts = []
        if self.rank:
            parts.append("Z" if self.rank == 1 else f"Z^{self.rank}")
        parts.extend(f"Z/{t}" for t in self.torsion)
        return " + ".join(parts) if parts else "0"


@dataclass
class SmithDecomposition:
    """``M = U @ S @ V`` with U, V unimodular and S in Smith normal form.

    ``U_inv`` and ``V_inv`` are kept because kernels and solving need them.
    """

    U: IntMatrix
    S: IntMatrix
    V: IntMatrix
    U_inv: IntMatrix
    V_inv: IntMatrix

    @property
    def diagonal(self) -> list[int]:
        return [self.S[i, i] for i in range(min(self.S.shape))]

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d)

    @property
    def invariant_factors(self) -> list[int]:
        return [d for d in self.diagonal if d]


def smith(M: IntMatrix) -> SmithDecomposition:
    """Smith normal form with transforms.

    Pivot: the entry of smallest nonzero absolute value in the unfinished
    block, ties broken by row index then column index.
    """
    m, n = M.shape
    A = M.tolist()
    # invariant: P @ M @ Q == A, Pi = P^-1, Qi = Q^-1
    P = [[int(i == j) for j in range(m)] for i in range(m)]
    Pi = [[int(i == j) for j in range(m)] for i in range(m)]
    Q = [[int(i == j) for j in range(n)] for i in range(n)]
    Qi = [[int(i == j) for j in range(n)] for i in range(n)]

    def row_add(i, j, k):  # row_i += k * row_j
        Ai, Aj = A[i], A[j]
        for c in range(n):
            if Aj[c]:
                Ai[c] += k * Aj[c]
        Pr, Pj = P[i], P[j]
        for c in range(m):
            if Pj[c]:
                Pr[c] += k * Pj[c]
        for r in Pi:
            if r[i]:
                r[j] -= k * r[i]

    def col_add(i, j, k):  # col_i += k * col_j
        for r in A:
            if r[j]:
                r[i] += k * r[j]
        for r in Q:
            if r[j]:
                r[i] += k * r[j]
        Qj, Qr = Qi[j], Qi[i]
        for c in range(n):
            if Qr[c]:
                Qj[c] -= k * Qr[c]

    def row_swap(i, j):
        A[i], A[j] = A[j], A[i]
        P[i], P[j] = P[j], P[i]
        for r in Pi:
            r[i], r[j] = r[j], r[i]

    def col_swap(i, j):
        for r in A:
            r[i], r[j] = r[j], r[i]
        for r in Q:
            r[i], r[j] = r[j], r[i]
        Qi[i], Qi[j] = Qi[j], Qi[i]

    def row_neg(i):
        A[i] = [-x for x in A[i]]
        P[i] = [-x for x in P[i]]
        for r in Pi:
            r[i] = -r[i]

    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            Ai = A[i]
            for j in range(t, n):
                v = Ai[j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        if i != t:
            row_swap(i, t)
        if j != t:
            col_swap(j, t)
        while True:
            p = A[t][t]
            dirty = False
            for i in range(t + 1, m):
                if A[i][t]:
                    q = A[i][t] // p
                    row_add(i, t, -q)
                    if A[i][t]:
                        dirty = True
            for j in range(t + 1, n):
                if A[t][j]:
                    q = A[t][j] // p
                    col_add(j, t, -q)
                    if A[t][j]:
                        dirty = True
            if dirty:
                # a remainder smaller than the pivot survived: re-pivot within row/column t
                cand = [(abs(A[i][t]), i, t) for i in range(t, m) if A[i][t]]
                cand += [(abs(A[t][j]), t, j) for j in range(t + 1, n) if A[t][j]]
                _, i, j = min(cand)
                if i != t:
                    row_swap(i, t)
                if j != t:
                    col_swap(j, t)
                continue
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if A[i][j] % p), None)
            if bad is None:
                break
            row_add(t, bad[0], 1)
        if A[t][t] < 0:
            row_neg(t)
        t += 1

    return SmithDecomposition(
        U=IntMatrix(Pi, m, m), S=IntMatrix(A, m, n), V=IntMatrix(Qi, n, n),
        U_inv=IntMatrix(P, m, m), V_inv=IntMatrix(Q, n, n),
    )


@dataclass(frozen=True)
class HermiteDecomposition:
    """H = U M with U unimodular and H in row echelon form.

    Pivots are positive and the entries above each pivot lie in [0, pivot).
    """

    H: IntMatrix
    U: IntMatrix
    pivots: tuple[int, ...]


def hermite(M: IntMatrix) -> HermiteDecomposition:
    """Row-style Hermite normal form by extended gcd steps on rows."""
    m, n = M.shape
    A = M.tolist()
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    pivots: list[int] = []
    r = 0
    for c in range(n):
        if r == m:
            break
        for i in range(r + 1, m):
            if A[i][c] == 0:
                continue
            a, b = A[r][c], A[i][c]
            # [[x, y], [-b/g, a/g]] has determinant 1 and sends (a, b) to (g, 0)
            g, x, y = _xgcd(a, b)
            ra, rb, ua, ub = A[r], A[i], U[r], U[i]
            A[r] = [x * p + y * q for p, q in zip(ra, rb)]
            A[i] = [(-b // g) * p + (a // g) * q for p, q in zip(ra, rb)]
            U[r] = [x * p + y * q for p, q in zip(ua, ub)]
            U[i] = [(-b // g) * p + (a // g) * q for p, q in zip(ua, ub)]
        if A[r][c] == 0:
            continue
        if A[r][c] < 0:
            A[r] = [-v for v in A[r]]
            U[r] = [-v for v in U[r]]
        piv = A[r][c]
        for i in range(r):
            k = A[i][c] // piv
            if k:
                A[i] = [p - k * q for p, q in zip(A[i], A[r])]
                U[i] = [p - k * q for p, q in zip(U[i], U[r])]
        pivots.append(c)
        r += 1
    return HermiteDecomposition(IntMatrix(A, m, n), IntMatrix(U, m, m), tuple(pivots))


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """(g, x, y) with g = gcd(a, b) > 0 and a x + b y = g."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def invariant_factors(M: IntMatrix | dict, rows: int | None = None, cols: int | None = None) -> list[int]:
    """Nonzero invariant factors of M (sorted by divisibility).

    Accepts a dense matrix or a sparse ``{col: {row: value}}`` dict.  Unit
    pivots are eliminated sparsely first; only the leftover block goes
    through dense Smith form.
    """
    if isinstance(M, IntMatrix):
        cols_map = {}
        for i, r in enumerate(M.data):
            for j, v in enumerate(r):
                if v:
                    cols_map.setdefault(j, {})[i] = v
    else:
        cols_map = {j: dict(c) for j, c in M.items() if c}
    units = 0
    row_index: dict[int, set[int]] = {}
    for j, c in cols_map.items():
        for i in c:
            row_index.setdefault(i, set()).add(j)
    progress = True
    while progress:
        progress = False
        for j in sorted(cols_map):
            col = cols_map.get(j)
            if col is None:
                continue
            piv = next((i for i in sorted(col) if abs(col[i]) == 1), None)
            if piv is None:
                continue
            pv = col[piv]
            # clear row `piv` from every other column using column j
            for k in sorted(row_index.get(piv, ())):
                if k == j:
                    continue
                other = cols_map[k]
                f = other[piv] * pv  # pv = +-1 so f/pv == f*pv
                for i, v in col.items():
                    nv = other.get(i, 0) - f * v
                    if nv:
                        if i not in other:
                            row_index.setdefault(i, set()).add(k)
                        other[i] = nv
                    else:
                        if i in other:
                            del other[i]
                            row_index[i].discard(k)
                if not other:
                    del cols_map[k]
            for i in col:
                row_index[i].discard(j)
            del cols_map[j]
            units += 1
            progress = True
    rest: list[int] = []
    if cols_map:
        rset = sorted({i for c in cols_map.values() for i in c})
        ridx = {r: k for k, r in enumerate(rset)}
        cset = sorted(cols_map)
        dense = [[0] * len(cset) for _ in rset]
        for k, j in enumerate(cset):
            for i, v in cols_map[j].items():
                dense[ridx[i]][k] = v
        rest = _diagonal_only(dense)
    return [1] * units + rest


def _diagonal_only(A: list[list[int]]) -> list[int]:
    """Smith diagonal without transforms (works in place)."""
    m = len(A)
    n = len(A[0]) if A else 0
    out = []
    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                v = A[i][j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
        if best is None:
            break
        _, i, j = best
        A[i], A[t] = A[t], A[i]
        for r in A:
            r[j], r[t] = r[t], r[j]
        while True:
            p = A[t][t]
            dirty = False
            for i in range(t + 1, m):
                if A[i][t]:
                    q = A[i][t] // p
                    Ai, At = A[i], A[t]
                    for c in range(t, n):
                        if At[c]:
                            Ai[c] -= q * At[c]
                    dirty |= bool(A[i][t])
            for j in range(t + 1, n):
                if A[t][j]:
                    q = A[t][j] // p
                    for r in A:
                        if r[t]:
                            r[j] -= q * r[t]
                    dirty |= bool(A[t][j])
            if dirty:
                cand = [(abs(A[i][t]), i, t) for i in range(t, m) if A[i][t]]
                cand += [(abs(A[t][j]), t, j) for j in range(t + 1, n) if A[t][j]]
                _, i, j = min(cand)
                A[i], A[t] = A[t], A[i]
                for r in A:
                    r[j], r[t] = r[t], r[j]
                continue
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if A[i][j] % p), None)
            if bad is None:
                break
            At, Ab = A[t], A[bad[0]]
            for c in range(n):
                At[c] += Ab[c]
        out.append(abs(A[t][t]))
        t += 1
    return out


def rank(M: IntMatrix) -> int:
    return len(invariant_factors(M))


def kernel_basis(M: IntMatrix) -> IntMatrix:
    """Columns form a Z-basis of {x : Mx = 0}."""
    sd = smith(M)
    r = sd.rank
    Q = sd.V_inv  # M @ V_inv = U @ S, so the trailing columns are killed
    return IntMatrix([row[r:] for row in Q.data], M.cols, M.cols - r)


def image_basis(M: IntMatrix) -> IntMatrix:
    """Columns form a Z-basis of the column span of M."""
    sd = smith(M)
    d = sd.diagonal
    r = sd.rank
    return IntMatrix([[row[i] * d[i] for i in range(r)] for row in sd.U.data], M.rows, r)


def cokernel(M: IntMatrix) -> AbelianGroup:
    """Z^rows / column span."""
    f = invariant_factors(M)
    return AbelianGroup(M.rows - len(f), tuple(x for x in f if x > 1))


def _solve_with(sd: SmithDecomposition, b: Sequence[int]) -> list[int] | None:
    c = sd.U_inv.apply(b)
    d = sd.diagonal
    y = [0] * sd.S.cols
    for i, ci in enumerate(c):
        di = d[i] if i < len(d) else 0
        if di == 0:
            if ci:
                return None
        else:
            if ci % di:
                return None
            y[i] = ci // di
    return sd.V_inv.apply(y)


def solve(M: IntMatrix, b: Sequence[int]) -> list[int] | None:
    """Some integer x with Mx = b, or None when there is none."""
    if len(b) != M.rows:
        raise ValueError("right-hand side has the wrong length")
    return _solve_with(smith(M), b)


def member_of_subgroup(v: Sequence[int], basis: IntMatrix) -> list[int] | None:
    """Coordinates c with basis @ c == v, or None if v is outside the span."""
    return solve(basis, v)


@dataclass
class Subquotient:
    """The group L / R for lattices R <= L <= Z^n.

    ``numerator`` columns must be linearly independent; ``relations``
    columns may be any generating set of R.  ``generators`` are vectors of
    Z^n whose classes generate L/R canonically: free generators first, then
    torsion generators with ``orders`` ascending by divisibility.
    """

    numerator: IntMatrix
    relations: IntMatrix
    generators: list[list[int]] = field(init=False)
    orders: list[int] = field(init=False)
    group: AbelianGroup = field(init=False)

    def __post_init__(self):
        n = self.numerator.rows
        if self.relations.rows != n:
            raise ValueError("ambient dimension mismatch")
        self._num_sd = smith(self.numerator)
        if self._num_sd.rank != self.numerator.cols:
            raise ValueError("numerator columns are not independent")
        k = self.numerator.cols
        coords = []
        for g in self.relations.columns():
            c = _solve_with(self._num_sd, g)
            if c is None:
                raise ValueError("relation outside the numerator lattice")
            coords.append(c)
        C = IntMatrix.from_columns(coords, k)
        sd = smith(C)
        self._rel_sd = sd
        d = sd.diagonal + [0] * (k - min(C.shape))
        # classes of U[:, i] generate; quotient coordinate of x is (U_inv x)_i mod d_i
        free = [i for i in range(k) if d[i] == 0]
        tors = [i for i in range(k) if d[i] > 1]
        self._slots = free + tors
        self.orders = [0] * len(free) + [d[i] for i in tors]
        Ucols = sd.U.columns() if k else []
        self.generators = [self.numerator.apply(Ucols[i]) for i in self._slots]
        self.group = AbelianGroup(len(free), tuple(d[i] for i in tors))

    @property
    def ambient_dim(self) -> int:
        return self.numerator.rows

    def coordinates(self, v: Sequence[int]) -> list[int] | None:
        """Coordinates of the class of v in ``generators`` (torsion entries reduced),
        or None if v is not in the numerator lattice."""
        c = _solve_with(self._num_sd, v)
        if c is None:
            return None
        y = self._rel_sd.U_inv.apply(c)
        out = []
        for slot, o in zip(self._slots, self.orders):
            out.append(y[slot] % o if o else y[slot])
        return out

    def vector(self, coords: Sequence[int]) -> list[int]:
        """A representative vector for the class with the given coordinates."""
        out = [0] * self.ambient_dim
        for c, g in zip(coords, self.generators):
            if c:
                for i, x in enumerate(g):
                    if x:
                        out[i] += c * x
        return out
