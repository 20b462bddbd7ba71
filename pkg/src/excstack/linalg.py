"""Exact dense and sparse linear algebra over a cyclotomic field.

Pivoting is always on the first nonzero entry in row-major order, so
ranks, kernels and quotient bases are deterministic.
"""


class FieldMatrix:
    "Rectangular matrix of CycNumber entries sharing one context."

    __slots__ = ("ctx", "rows", "cols", "entries")

    def __init__(self, ctx, entries):
        entries = tuple(tuple(row) for row in entries)
        self.ctx = ctx
        self.rows = len(entries)
        self.cols = len(entries[0]) if entries else 0
        for row in entries:
            if len(row) != self.cols:
                raise ValueError("ragged matrix")
            for x in row:
                if x.ctx.n != ctx.n:
                    raise ValueError("matrix entries in mixed contexts")
        self.entries = entries

    @classmethod
    def from_rows(cls, ctx, rows):
        lift = lambda x: x if hasattr(x, "ctx") else ctx.from_rational(x)
        return cls(ctx, [[lift(x) for x in row] for row in rows])

    @classmethod
    def identity(cls, ctx, n):
        z, o = ctx.zero, ctx.one
        return cls(ctx, [[o if i == j else z for j in range(n)] for i in range(n)])

    @classmethod
    def zero(cls, ctx, rows, cols):
        z = ctx.zero
        return cls(ctx, [[z] * cols for _ in range(rows)])

    def __eq__(self, other):
        return (
            isinstance(other, FieldMatrix)
            and self.entries == other.entries
            and self.ctx.n == other.ctx.n
        )

    def __hash__(self):
        return hash((self.ctx.n, self.entries))

    def __getitem__(self, ij):
        return self.entries[ij[0]][ij[1]]

    def __add__(self, other):
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("dimension mismatch in matrix addition")
        return FieldMatrix(
            self.ctx,
            [
                [a + b for a, b in zip(ra, rb)]
                for ra, rb in zip(self.entries, other.entries)
            ],
        )

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return FieldMatrix(self.ctx, [[-a for a in row] for row in self.entries])

    def __mul__(self, other):
        if isinstance(other, FieldMatrix):
            return mat_mul(self, other)
        return FieldMatrix(self.ctx, [[a * other for a in row] for row in self.entries])

    __rmul__ = lambda self, other: self * other
    __matmul__ = lambda self, other: mat_mul(self, other)

    def transpose(self):
        return FieldMatrix(self.ctx, list(zip(*self.entries))) if self.rows else self

    def is_zero(self):
        return all(not x for row in self.entries for x in row)

    def column(self, j):
        return tuple(row[j] for row in self.entries)

    def __repr__(self):
        return "FieldMatrix(%dx%d over zeta(%d))" % (self.rows, self.cols, self.ctx.n)


def mat_add(a, b):
    return a + b


def mat_mul(a, b):
    if a.cols != b.rows:
        raise ValueError("dimension mismatch in matrix product")
    bt = list(zip(*b.entries)) if b.rows else []
    zero = a.ctx.zero
    out = []
    for row in a.entries:
        orow = []
        for col in bt:
            s = zero
            for x, y in zip(row, col):
                if x and y:
                    s = s + x * y
            orow.append(s)
        out.append(orow)
    return FieldMatrix(a.ctx, out) if out else FieldMatrix.zero(a.ctx, a.rows, b.cols)


def mat_trace(a):
    if a.rows != a.cols:
        raise ValueError("trace of a non-square matrix")
    s = a.ctx.zero
    for i in range(a.rows):
        s = s + a.entries[i][i]
    return s


def mat_kron(a, b):
    "Kronecker product; index order (i_a, i_b) lexicographic."
    out = []
    for ra in a.entries:
        for rb in b.entries:
            out.append([x * y for x in ra for y in rb])
    if not out:
        return FieldMatrix.zero(a.ctx, a.rows * b.rows, a.cols * b.cols)
    return FieldMatrix(a.ctx, out)


def mat_inverse(a):
    if a.rows != a.cols:
        raise ValueError("inverse of a non-square matrix")
    n = a.rows
    work = [list(row) + list(irow) for row, irow in
            zip(a.entries, FieldMatrix.identity(a.ctx, n).entries)]
    for col in range(n):
        piv = next((r for r in range(col, n) if work[r][col]), None)
        if piv is None:
            raise ValueError("matrix is singular")
        work[col], work[piv] = work[piv], work[col]
        inv = work[col][col].inverse()
        work[col] = [x * inv for x in work[col]]
        for r in range(n):
            if r != col and work[r][col]:
                f = work[r][col]
                work[r] = [x - f * y for x, y in zip(work[r], work[col])]
    return FieldMatrix(a.ctx, [row[n:] for row in work])


def _echelon(entries, ncols):
    "Row echelon with full reduction; returns (pivot row list, pivot col list)."
    rows = [list(r) for r in entries]
    pivots = []
    reduced = []
    for row in rows:
        for prow, pcol in zip(reduced, pivots):
            if row[pcol]:
                f = row[pcol]
                for j in range(ncols):
                    if prow[j]:
                        row[j] = row[j] - f * prow[j]
        lead = next((j for j in range(ncols) if row[j]), None)
        if lead is None:
            continue
        inv = row[lead].inverse()
        row = [x * inv for x in row]
        for prow in reduced:
            if prow[lead]:
                f = prow[lead]
                for j in range(ncols):
                    if row[j]:
                        prow[j] = prow[j] - f * row[j]
        reduced.append(row)
        pivots.append(lead)
    order = sorted(range(len(pivots)), key=lambda i: pivots[i])
    return [reduced[i] for i in order], [pivots[i] for i in order]


def rank_kernel(m):
    """Exact rank and a kernel basis of a FieldMatrix.

    Kernel vectors are indexed by the free columns in ascending order,
    each normalized with a 1 in its free coordinate.
    """
    reduced, pivots = _echelon(m.entries, m.cols)
    rank = len(pivots)
    pivset = set(pivots)
    zero, one = m.ctx.zero, m.ctx.one
    kernel = []
    for free in range(m.cols):
        if free in pivset:
            continue
        v = [zero] * m.cols
        v[free] = one
        for prow, pcol in zip(reduced, pivots):
            if prow[free]:
                v[pcol] = -prow[free]
        kernel.append(tuple(v))
    return rank, kernel


def solve_linear(m, b):
    """Solve M x = b exactly; returns a tuple or None when inconsistent.

    Free variables are set to zero (pivot-first convention).
    """
    if m.rows != len(b):
        raise ValueError("right-hand side has wrong length")
    aug = [list(row) + [bi] for row, bi in zip(m.entries, b)]
    reduced, pivots = _echelon(aug, m.cols + 1)
    zero = m.ctx.zero
    x = [zero] * m.cols
    for prow, pcol in zip(reduced, pivots):
        if pcol == m.cols:
            return None
        x[pcol] = prow[m.cols]
    return tuple(x)


def column_space_basis(m):
    "Indices of the first-seen independent columns plus those columns."
    red = SparseReducer()
    picked = []
    for j in range(m.cols):
        col = {i: x for i, x in enumerate(m.column(j)) if x}
        if red.add(col) is not None:
            picked.append(j)
    return picked, [m.column(j) for j in picked]


class SparseReducer:
    """Incremental Gauss-Jordan over sparse vectors (dict index -> scalar).

    Rows are kept fully reduced against each other; the pivot of each row
    is its minimal index and each pivot coefficient is 1.  Free indices of
    the accumulated span give deterministic quotient bases.
    """

    def __init__(self):
        self.rows = {}
        self.where = {}  # column -> set of pivot columns whose row touches it

    def _reduce(self, v):
        "Eliminate every pivot column present in v (in place)."
        rows = self.rows
        while True:
            pivcols = sorted(c for c in v if c in rows)
            if not pivcols:
                return v
            for p in pivcols:
                f = v.get(p)
                if not f:
                    continue
                for c, x in rows[p].items():
                    y = v.get(c)
                    nv = (y - f * x) if y is not None else -(f * x)
                    if nv:
                        v[c] = nv
                    elif y is not None:
                        del v[c]

    def add(self, vec):
        "Reduce vec (a dict, consumed) into the span; return new pivot or None."
        v = self._reduce(vec)
        if not v:
            return None
        p = min(v)
        coef_inv = v[p].inverse() if hasattr(v[p], "inverse") else 1 / v[p]
        v = {c: x * coef_inv for c, x in v.items()}
        self._insert(p, v)
        return p

    def _insert(self, p, row):
        where = self.where
        for c in row:
            where.setdefault(c, set()).add(p)
        # eliminate column p from any older rows containing it
        for q in list(where.get(p, ())):
            if q == p:
                continue
            old = self.rows[q]
            f = old[p]
            for c, x in row.items():
                y = old.get(c)
                nv = (y - f * x) if y is not None else -(f * x)
                if nv:
                    old[c] = nv
                    where.setdefault(c, set()).add(q)
                else:
                    if y is not None:
                        del old[c]
                        where[c].discard(q)
        self.rows[p] = row

    def rank(self):
        return len(self.rows)

    def contains(self, vec):
        "Is vec in the accumulated span?"
        return not self._reduce(dict(vec))

    def free_indices(self, dim):
        return [c for c in range(dim) if c not in self.rows]

    def project(self, vec, free_pos):
        """Coordinates of vec's class modulo the span, on the free basis.

        free_pos maps free index -> position in the quotient basis.
        """
        out = {}
        for c, a in vec.items():
            if not a:
                continue
            row = self.rows.get(c)
            if row is None:
                j = free_pos[c]
                out[j] = out[j] + a if j in out else a
            else:
                # e_c == -sum_{f free} row[f] e_f modulo the span
                for f, r in row.items():
                    if f == c:
                        continue
                    j = free_pos[f]
                    d = a * r
                    out[j] = out[j] - d if j in out else -d
        return {j: x for j, x in out.items() if x}
