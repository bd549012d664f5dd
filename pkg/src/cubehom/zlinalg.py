"""Exact integer linear algebra: Smith normal form, kernels, cokernels, chain homology.

Everything here works over plain Python ints, so there is no overflow and no
floating point anywhere. Matrices are small dense arrays of ints; the sizes
this package produces (a few hundred rows) are well within reach of the
quadratic-ish elimination below.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence


class IntMatrix:
    """An immutable integer matrix stored as a tuple of row tuples."""

    __slots__ = ("rows", "cols", "data")

    def __init__(self, rows: int, cols: int, data: Iterable[Iterable[int]]):
        self.rows = rows
        self.cols = cols
        self.data = tuple(tuple(int(x) for x in row) for row in data)
        if len(self.data) != rows or any(len(r) != cols for r in self.data):
            raise ValueError(f"shape mismatch: expected {rows}x{cols}")

    @staticmethod
    def from_rows(data: Sequence[Sequence[int]]) -> "IntMatrix":
        rows = len(data)
        cols = len(data[0]) if rows else 0
        return IntMatrix(rows, cols, data)

    @staticmethod
    def identity(n: int) -> "IntMatrix":
        return IntMatrix(n, n, [[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @staticmethod
    def zeros(rows: int, cols: int) -> "IntMatrix":
        return IntMatrix(rows, cols, [[0] * cols for _ in range(rows)])

    def __getitem__(self, ij) -> int:
        i, j = ij
        return self.data[i][j]

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, IntMatrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and self.data == other.data
        )

    def __hash__(self):
        return hash((self.rows, self.cols, self.data))

    def __repr__(self):
        return f"IntMatrix({self.rows}x{self.cols}, {list(map(list, self.data))})"

    def __add__(self, other: "IntMatrix") -> "IntMatrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch in addition")
        return IntMatrix(
            self.rows,
            self.cols,
            [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.data, other.data)],
        )

    def __sub__(self, other: "IntMatrix") -> "IntMatrix":
        return self + (-other)

    def __neg__(self) -> "IntMatrix":
        return IntMatrix(self.rows, self.cols, [[-a for a in r] for r in self.data])

    def scale(self, c: int) -> "IntMatrix":
        return IntMatrix(self.rows, self.cols, [[c * a for a in r] for r in self.data])

    def __mul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch: {self.rows}x{self.cols} * {other.rows}x{other.cols}")
        bt = list(zip(*other.data)) if other.data else [()] * other.cols
        out = []
        for row in self.data:
            out.append([sum(a * b for a, b in zip(row, col)) for col in bt])
        if not self.data:
            out = []
        return IntMatrix(self.rows, other.cols, out)

    def transpose(self) -> "IntMatrix":
        return IntMatrix(self.cols, self.rows, list(zip(*self.data)) if self.data else [[] for _ in range(self.cols)])

    def is_zero(self) -> bool:
        return all(all(a == 0 for a in r) for r in self.data)

    def column(self, j: int) -> tuple:
        return tuple(r[j] for r in self.data)

    def take_rows(self, indices: Sequence[int]) -> "IntMatrix":
        return IntMatrix(len(indices), self.cols, [self.data[i] for i in indices])

    def take_cols(self, indices: Sequence[int]) -> "IntMatrix":
        return IntMatrix(self.rows, len(indices), [[r[j] for j in indices] for r in self.data])


def stack_rows(mats: Sequence[IntMatrix]) -> IntMatrix:
    """Vertical stack; all blocks must share a column count."""
    if not mats:
        raise ValueError("nothing to stack")
    cols = mats[0].cols
    if any(m.cols != cols for m in mats):
        raise ValueError("column mismatch in stack_rows")
    data = [row for m in mats for row in m.data]
    return IntMatrix(sum(m.rows for m in mats), cols, data)


def assemble_blocks(
    row_sizes: Sequence[int],
    col_sizes: Sequence[int],
    blocks: dict,
) -> IntMatrix:
    """Build a matrix from a sparse dict {(row_block, col_block): IntMatrix}.

    Blocks with the same index pair must have been summed by the caller.
    Missing blocks are zero.
    """
    row_off = [0]
    for s in row_sizes:
        row_off.append(row_off[-1] + s)
    col_off = [0]
    for s in col_sizes:
        col_off.append(col_off[-1] + s)
    data = [[0] * col_off[-1] for _ in range(row_off[-1])]
    for (bi, bj), m in blocks.items():
        if m.rows != row_sizes[bi] or m.cols != col_sizes[bj]:
            raise ValueError(f"block ({bi},{bj}) has shape {m.rows}x{m.cols}, "
                             f"expected {row_sizes[bi]}x{col_sizes[bj]}")
        r0, c0 = row_off[bi], col_off[bj]
        for i, row in enumerate(m.data):
            tgt = data[r0 + i]
            for j, a in enumerate(row):
                tgt[c0 + j] = a
    return IntMatrix(row_off[-1], col_off[-1], data)


def det(a: IntMatrix) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    if a.rows != a.cols:
        raise ValueError("determinant of a non-square matrix")
    n = a.rows
    if n == 0:
        return 1
    m = [list(r) for r in a.data]
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


@dataclass(frozen=True)
class SmithDecomposition:
    """U * A * V = D with U, V unimodular and D diagonal, d1 | d2 | ... | dr."""

    U: IntMatrix
    D: IntMatrix
    V: IntMatrix
    U_inv: IntMatrix
    V_inv: IntMatrix

    @property
    def rank(self) -> int:
        return sum(1 for i in range(min(self.D.rows, self.D.cols)) if self.D[i, i] != 0)

    def invariant_factors(self) -> tuple:
        return tuple(self.D[i, i] for i in range(self.rank))


def smith_normal_form(a: IntMatrix) -> SmithDecomposition:
    """Smith normal form with deterministic pivoting.

    The pivot at each stage is the entry of minimal absolute value in the
    remaining submatrix, ties broken by row then column index. All four
    transform matrices are tracked so callers get sections and inverses
    without re-solving.
    """
    m, n = a.rows, a.cols
    d = [list(row) for row in a.data]
    u = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
    uinv = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
    v = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    vinv = [[1 if i == j else 0 for j in range(n)] for i in range(n)]

    def row_swap(r, s):
        d[r], d[s] = d[s], d[r]
        u[r], u[s] = u[s], u[r]
        for row in uinv:
            row[r], row[s] = row[s], row[r]

    def row_addmul(r, s, q):
        # row r += q * row s
        dr, ds = d[r], d[s]
        for j in range(n):
            dr[j] += q * ds[j]
        ur, us = u[r], u[s]
        for j in range(m):
            ur[j] += q * us[j]
        for row in uinv:
            row[s] -= q * row[r]

    def row_negate(r):
        d[r] = [-x for x in d[r]]
        u[r] = [-x for x in u[r]]
        for row in uinv:
            row[r] = -row[r]

    def col_swap(c, e):
        for row in d:
            row[c], row[e] = row[e], row[c]
        for row in v:
            row[c], row[e] = row[e], row[c]
        vinv[c], vinv[e] = vinv[e], vinv[c]

    def col_addmul(c, e, q):
        # col c += q * col e
        for row in d:
            row[c] += q * row[e]
        for row in v:
            row[c] += q * row[e]
        ve, vc = vinv[e], vinv[c]
        for j in range(n):
            ve[j] -= q * vc[j]

    t = 0
    limit = min(m, n)
    while t < limit:
        # locate the minimal-absolute-value nonzero entry, row-major tie-break
        best = None
        for i in range(t, m):
            di = d[i]
            for j in range(t, n):
                x = di[j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, pi, pj = best
        if pi != t:
            row_swap(t, pi)
        if pj != t:
            col_swap(t, pj)

        while True:
            dirty = False
            for i in range(t + 1, m):
                if d[i][t]:
                    q = d[i][t] // d[t][t]
                    row_addmul(i, t, -q)
                    if d[i][t]:
                        row_swap(t, i)
                        dirty = True
            for j in range(t + 1, n):
                if d[t][j]:
                    q = d[t][j] // d[t][t]
                    col_addmul(j, t, -q)
                    if d[t][j]:
                        col_swap(t, j)
                        dirty = True
            if dirty:
                continue
            pivot = d[t][t]
            offender = None
            for i in range(t + 1, m):
                di = d[i]
                for j in range(t + 1, n):
                    if di[j] % pivot:
                        offender = i
                        break
                if offender is not None:
                    break
            if offender is None:
                break
            row_addmul(t, offender, 1)
        if d[t][t] < 0:
            row_negate(t)
        t += 1

    return SmithDecomposition(
        U=IntMatrix(m, m, u),
        D=IntMatrix(m, n, d),
        V=IntMatrix(n, n, v),
        U_inv=IntMatrix(m, m, uinv),
        V_inv=IntMatrix(n, n, vinv),
    )


def kernel_basis(a: IntMatrix) -> IntMatrix:
    """Columns form a basis of the integer kernel lattice of a.

    The basis is saturated: kernels of integer matrices are pure submodules,
    and the returned columns are columns of a unimodular matrix, so every
    integer kernel vector is an integer combination of them.
    """
    snf = smith_normal_form(a)
    r = snf.rank
    return snf.V.take_cols(range(r, a.cols))


@dataclass(frozen=True)
class CokernelPresentation:
    """coker(A) = Z^m / im(A) presented by a free projection plus torsion.

    projection : (m - r) x m, restriction of a unimodular map; kills im(A).
    section    : m x (m - r), with projection * section = identity.
    torsion    : invariant factors > 1 of the torsion part.
    """

    projection: IntMatrix
    section: IntMatrix
    torsion: tuple


def cokernel_projection(a: IntMatrix) -> CokernelPresentation:
    snf = smith_normal_form(a)
    r = snf.rank
    free_idx = range(r, a.rows)
    proj = snf.U.take_rows(free_idx)
    section = snf.U_inv.take_cols(free_idx)
    torsion = tuple(x for x in snf.invariant_factors() if x > 1)
    return CokernelPresentation(projection=proj, section=section, torsion=torsion)


def solve_exact(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    """Solve A X = B over the integers; raises ValueError when unsolvable."""
    if a.rows != b.rows:
        raise ValueError("shape mismatch in solve_exact")
    snf = smith_normal_form(a)
    r = snf.rank
    ub = snf.U * b
    y = [[0] * b.cols for _ in range(a.cols)]
    for i in range(r):
        di = snf.D[i, i]
        for j in range(b.cols):
            q, rem = divmod(ub[i, j], di)
            if rem:
                raise ValueError(f"no integer solution: entry ({i},{j}) not divisible by {di}")
            y[i][j] = q
    for i in range(r, a.rows):
        for j in range(b.cols):
            if ub[i, j]:
                raise ValueError("no solution: right-hand side outside the column span")
    return snf.V * IntMatrix(a.cols, b.cols, y)


@dataclass(frozen=True)
class HomologyGroup:
    """A finitely generated abelian group Z^betti + sum of Z/d for d in torsion."""

    betti: int
    torsion: tuple

    def __str__(self):
        parts = []
        if self.betti == 1:
            parts.append("Z")
        elif self.betti > 1:
            parts.append(f"Z^{self.betti}")
        parts.extend(f"Z/{d}" for d in self.torsion)
        return " (+) ".join(parts) if parts else "0"

    def is_trivial(self) -> bool:
        return self.betti == 0 and not self.torsion


def homology_of_pair(d_out: IntMatrix, d_in: IntMatrix) -> HomologyGroup:
    """ker(d_out) / im(d_in) for a composable pair with d_out * d_in = 0."""
    if d_out.cols != d_in.rows:
        raise ValueError("shape mismatch: d_out and d_in do not share the middle module")
    if not (d_out * d_in).is_zero():
        raise ValueError("d_out * d_in is nonzero; not a complex")
    k = kernel_basis(d_out)
    if k.cols == 0:
        return HomologyGroup(0, ())
    coords = solve_exact(k, d_in)
    snf = smith_normal_form(coords)
    torsion = tuple(x for x in snf.invariant_factors() if x > 1)
    return HomologyGroup(k.cols - snf.rank, torsion)


class FreeChainComplex:
    """A bounded chain complex of free Z-modules, degrees 0..top.

    ranks[n] is the rank of C_n; boundaries[n] (1 <= n <= top) is
    d_n : C_n -> C_{n-1}. The constructor checks shapes and d . d = 0.
    """

    def __init__(self, ranks: Sequence[int], boundaries: Sequence[IntMatrix]):
        self.ranks = tuple(int(r) for r in ranks)
        self.boundaries = tuple(boundaries)
        if len(self.boundaries) != max(len(self.ranks) - 1, 0):
            raise ValueError("need exactly one boundary map per positive degree")
        for n, dmat in enumerate(self.boundaries, start=1):
            if (dmat.rows, dmat.cols) != (self.ranks[n - 1], self.ranks[n]):
                raise ValueError(f"d_{n} has shape {dmat.rows}x{dmat.cols}, "
                                 f"expected {self.ranks[n-1]}x{self.ranks[n]}")
        for n in range(1, len(self.boundaries)):
            if not (self.boundaries[n - 1] * self.boundaries[n]).is_zero():
                raise ValueError(f"d_{n} . d_{n+1} != 0")

    @property
    def top(self) -> int:
        return len(self.ranks) - 1

    def boundary(self, n: int) -> IntMatrix:
        """d_n for 0 <= n <= top; d_0 is the zero map into the zero module."""
        if n == 0:
            return IntMatrix.zeros(0, self.ranks[0])
        return self.boundaries[n - 1]


def homology_of_complex(cx: FreeChainComplex) -> tuple:
    """Homology groups in degrees 0 .. top-1.

    The top degree is not reported: computing H_top honestly would need
    d_{top+1}, which a truncated complex does not carry.
    """
    out = []
    for n in range(cx.top):
        out.append(homology_of_pair(cx.boundary(n), cx.boundary(n + 1)))
    return tuple(out)


def cohomology_of_cochain(ranks: Sequence[int], deltas: Sequence[IntMatrix]) -> tuple:
    """Cohomology of a cochain complex C^0 -> C^1 -> ... -> C^top.

    deltas[k] is d^k : C^k -> C^{k+1} for 0 <= k < top. Reports degrees
    0 .. top-1; degree top would need d^top.
    """
    ranks = tuple(int(r) for r in ranks)
    deltas = tuple(deltas)
    top = len(ranks) - 1
    if len(deltas) != top:
        raise ValueError("need exactly one coboundary per degree below the top")
    for k, dmat in enumerate(deltas):
        if (dmat.rows, dmat.cols) != (ranks[k + 1], ranks[k]):
            raise ValueError(f"d^{k} has shape {dmat.rows}x{dmat.cols}, "
                             f"expected {ranks[k+1]}x{ranks[k]}")
    out = []
    for k in range(top):
        d_out = deltas[k]
        d_in = deltas[k - 1] if k > 0 else IntMatrix.zeros(ranks[0], 0)
        out.append(homology_of_pair(d_out, d_in))
    return tuple(out)
