"""Exact representations of finite groups over cyclotomic fields.

Every Representation carries the full element -> matrix table; the
homomorphism property is proved on construction by checking every
(element, generator) edge of the Cayley graph.
"""

from .linalg import (
    FieldMatrix,
    column_space_basis,
    mat_kron,
    mat_mul,
    mat_trace,
)
from .rationals import qq


class RepresentationError(ValueError):
    pass


def extend_hom(source, target, gen_images):
    """Extend generator images to a full map source -> target (element indices).

    Verifies f(g s) = f(g) f(s) on every (element, generator) pair, which
    proves f is a homomorphism; raises RepresentationError otherwise.
    """
    if len(gen_images) != len(source.generators):
        raise RepresentationError("need one image per generator")
    images = [None] * source.order
    images[source.identity] = target.identity
    frontier = [source.identity]
    while frontier:
        nxt = []
        for g in frontier:
            for s, fs in zip(source.generators, gen_images):
                h = source.mul(g, s)
                fh = target.mul(images[g], fs)
                if images[h] is None:
                    images[h] = fh
                    nxt.append(h)
                elif images[h] != fh:
                    raise RepresentationError(
                        "generator images are inconsistent (not a homomorphism)"
                    )
        frontier = nxt
    assert all(x is not None for x in images)
    return tuple(images)


class Representation:
    "An exact matrix representation with a full element table."

    def __init__(self, group, ctx, matrices, check=True):
        self.group = group
        self.ctx = ctx
        self.matrices = tuple(matrices)
        self.dim = self.matrices[group.identity].rows if self.matrices else 0
        if check:
            ident = FieldMatrix.identity(ctx, self.dim)
            if self.matrices[group.identity] != ident:
                raise RepresentationError("identity does not map to the identity matrix")
            for g in range(group.order):
                for s in group.generators:
                    h = group.mul(g, s)
                    if self.matrices[h] != mat_mul(self.matrices[g], self.matrices[s]):
                        raise RepresentationError("matrix table is not multiplicative")
        self._cols = {}

    def __getitem__(self, g):
        return self.matrices[g]

    def sparse_column(self, g, j):
        "Column j of the matrix of g as a list of (row, coeff)."
        key = (g, j)
        col = self._cols.get(key)
        if col is None:
            col = [(i, x) for i, x in enumerate(self.matrices[g].column(j)) if x]
            self._cols[key] = col
        return col

    def character(self):
        vals = tuple(mat_trace(self.matrices[rep]) for rep in self.group.class_reps)
        return Character(self.group, self.ctx, vals)

    def __repr__(self):
        return "Representation(dim=%d, |G|=%d)" % (self.dim, self.group.order)


def rep_from_generator_matrices(group, ctx, generator_matrices):
    "Extend generator matrices along the Cayley graph, verifying every edge."
    gens = group.generators
    if len(generator_matrices) != len(gens):
        raise RepresentationError("need one matrix per group generator")
    dims = {m.rows for m in generator_matrices} | {m.cols for m in generator_matrices}
    if len(dims) > 1:
        raise RepresentationError("generator matrices must be square of equal size")
    d = dims.pop() if dims else 1
    table = [None] * group.order
    table[group.identity] = FieldMatrix.identity(ctx, d)
    frontier = [group.identity]
    gen_mats = dict(zip(gens, generator_matrices))
    while frontier:
        nxt = []
        for g in frontier:
            for s in gens:
                h = group.mul(g, s)
                m = mat_mul(table[g], gen_mats[s])
                if table[h] is None:
                    table[h] = m
                    nxt.append(h)
                elif table[h] != m:
                    raise RepresentationError(
                        "inconsistent extension: matrices do not define a representation"
                    )
        frontier = nxt
    if any(t is None for t in table):
        # happens only for the trivial group with no generators
        table = [FieldMatrix.identity(ctx, d) if t is None else t for t in table]
    return Representation(group, ctx, table, check=False)


def builtin_rep(group, kind, ctx, k=None):
    """Standard constructions: trivial, permutation, regular, abelian_character(k)."""
    zero, one = ctx.zero, ctx.one
    if kind == "trivial":
        mats = [FieldMatrix(ctx, [[one]]) for _ in range(group.order)]
        return Representation(group, ctx, mats, check=False)
    if kind == "permutation":
        d = group.degree
        mats = []
        for p in group.elements:
            m = [[zero] * d for _ in range(d)]
            for j in range(d):
                m[p[j]][j] = one
            mats.append(FieldMatrix(ctx, m))
        return Representation(group, ctx, mats, check=False)
    if kind == "regular":
        n = group.order
        mats = []
        for g in range(n):
            m = [[zero] * n for _ in range(n)]
            for h in range(n):
                m[group.mul(g, h)][h] = one
            mats.append(FieldMatrix(ctx, m))
        return Representation(group, ctx, mats, check=False)
    if kind == "abelian_character":
        if k is None:
            raise RepresentationError("abelian_character needs an exponent k")
        if not group.is_cyclic():
            raise RepresentationError("abelian_character requires a cyclic group")
        n = group.order
        if ctx.n % n != 0:
            raise RepresentationError(
                "conductor %d does not contain the |G|=%d-th roots of unity" % (ctx.n, n)
            )
        c = group.cyclic_generator()
        mats = [None] * n
        g, j = group.identity, 0
        for _ in range(n):
            mats[g] = FieldMatrix(ctx, [[ctx.zeta_power((ctx.n // n) * k * j)]])
            g, j = group.mul(g, c), j + 1
        return Representation(group, ctx, mats, check=False)
    raise RepresentationError("unknown builtin representation kind %r" % kind)


def tensor(v, w):
    if v.group is not w.group:
        raise RepresentationError("tensor of representations of different groups")
    mats = [mat_kron(a, b) for a, b in zip(v.matrices, w.matrices)]
    return Representation(v.group, v.ctx, mats, check=False)


def dual(v):
    g = v.group
    mats = [v.matrices[g.inv(x)].transpose() for x in range(g.order)]
    return Representation(g, v.ctx, mats, check=False)


def direct_sum(v, w):
    if v.group is not w.group:
        raise RepresentationError("sum of representations of different groups")
    ctx = v.ctx
    zero = ctx.zero
    mats = []
    for a, b in zip(v.matrices, w.matrices):
        top = [list(row) + [zero] * b.cols for row in a.entries]
        bot = [[zero] * a.cols + list(row) for row in b.entries]
        mats.append(FieldMatrix(ctx, top + bot))
    return Representation(v.group, ctx, mats, check=False)


def restrict_along(source, gen_images, v):
    """Restrict v along the homomorphism source -> v.group given on generators."""
    f = extend_hom(source, v.group, gen_images)
    mats = [v.matrices[f[h]] for h in range(source.order)]
    return Representation(source, v.ctx, mats, check=False)


def averaging_projector(v, subgroup=None):
    "(1/|H|) sum of v(h) over H (default: the whole group); idempotence asserted."
    g = v.group
    hs = range(g.order) if subgroup is None else subgroup
    hs = list(hs)
    acc = FieldMatrix.zero(v.ctx, v.dim, v.dim)
    for h in hs:
        acc = acc + v.matrices[h]
    p = acc * v.ctx.from_rational(qq(1, len(hs)))
    assert mat_mul(p, p) == p, "averaging projector is not idempotent"
    return p


def invariant_basis(v):
    "Basis of the invariant subspace via the averaging projector."
    p = averaging_projector(v)
    for g in range(v.group.order):
        assert mat_mul(v.matrices[g], p) == p
    _, cols = column_space_basis(p)
    return cols


class Character:
    "Class function attached to a representation; one value per class."

    def __init__(self, group, ctx, values):
        self.group = group
        self.ctx = ctx
        self.values = tuple(values)
        assert len(self.values) == len(group.class_reps)

    def value_at_element(self, g):
        return self.values[self.group.class_of[g]]

    def __eq__(self, other):
        return (
            isinstance(other, Character)
            and self.group is other.group
            and self.values == other.values
        )

    def __repr__(self):
        return "Character(%s)" % (", ".join(repr(v) for v in self.values))


def character_of(v):
    return v.character()


def inner_product(c1, c2):
    "(1/|G|) sum over classes of |class| c1 conj(c2)."
    g = c1.group
    acc = c1.ctx.zero
    for members, v1, v2 in zip(g.class_members, c1.values, c2.values):
        acc = acc + v1 * v2.conj() * len(members)
    return acc * c1.ctx.from_rational(qq(1, g.order))
