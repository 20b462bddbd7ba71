"""Excursion data and their class functions on the fixed-point groupoid.

An excursion datum is a tuple of representations with an invariant vector
and covector, together with one loop per slot in the mapping-torus group;
its value at (rho, g) is vstar o (tensor of slot monodromies) o v.
"""

from itertools import product as iproduct

from .groups import evaluate_word, word_inverse
from .linalg import FieldMatrix, mat_kron, mat_mul
from .rationals import qq
from .reps import dual, tensor, builtin_rep
from .linalg import SparseReducer


class InvarianceError(ValueError):
    pass


def _diag_transport(reps, g, ctx):
    m = FieldMatrix.identity(ctx, 1)
    for r in reps:
        m = mat_kron(m, r.matrices[g])
    return m


def _flat_dims(reps):
    dims = [r.dim for r in reps]
    total = 1
    for d in dims:
        total *= d
    return dims, total


class XiDatum:
    """(J, reps, v, vstar) with v, vstar invariant under the diagonal action.

    v and vstar are dense tuples of CycNumber of length prod(dim).
    """

    def __init__(self, reps, v, vstar, ctx, check=True):
        self.reps = tuple(reps)
        self.ctx = ctx
        self.dims, self.total_dim = _flat_dims(self.reps)
        self.v = tuple(v)
        self.vstar = tuple(vstar)
        assert len(self.v) == self.total_dim and len(self.vstar) == self.total_dim
        if check:
            self.check_invariance()

    @property
    def J(self):
        return len(self.reps)

    def check_invariance(self):
        if not self.reps:
            return
        group = self.reps[0].group
        ctx = self.ctx
        acc = FieldMatrix.zero(ctx, self.total_dim, self.total_dim)
        for g in range(group.order):
            acc = acc + _diag_transport(self.reps, g, ctx)
        proj = acc * ctx.from_rational(qq(1, group.order))
        assert mat_mul(proj, proj) == proj
        pv = tuple(
            sum((proj.entries[i][j] * self.v[j] for j in range(self.total_dim)),
                ctx.zero)
            for i in range(self.total_dim)
        )
        if pv != self.v:
            raise InvarianceError("v is not invariant under the diagonal action")
        vsp = tuple(
            sum((self.vstar[i] * proj.entries[i][j] for i in range(self.total_dim)),
                ctx.zero)
            for j in range(self.total_dim)
        )
        if vsp != self.vstar:
            raise InvarianceError("vstar is not invariant under the diagonal action")

    def pairing(self):
        "vstar(v)."
        return sum((a * b for a, b in zip(self.vstar, self.v)), self.ctx.zero)


def xi_from_rep(a):
    """The coevaluation/evaluation datum on (a, a dual).

    v = sum_i e_i tensor e_i*, vstar the evaluation pairing; both are
    invariant by construction (asserted anyway).
    """
    ctx = a.ctx
    d = a.dim
    adual = dual(a)
    v = [ctx.zero] * (d * d)
    vstar = [ctx.zero] * (d * d)
    for i in range(d):
        v[i * d + i] = ctx.one
        vstar[i * d + i] = ctx.one
    return XiDatum((a, adual), v, vstar, ctx)


def xi_trivial(group, ctx):
    triv = builtin_rep(group, "trivial", ctx)
    return XiDatum((triv,), (ctx.one,), (ctx.one,), ctx)


class ExcursionDatum:
    "(xi, loops): one loop word per slot, over the mapping-torus generators."

    def __init__(self, xi, loops):
        self.xi = xi
        self.loops = tuple(tuple(w) for w in loops)
        if len(self.loops) != xi.J:
            raise ValueError("need one loop per slot of xi")


class ExcursionFunction:
    "A class function on the orbits of a fixed groupoid."

    def __init__(self, fixed, values):
        self.fixed = fixed
        self.values = tuple(values)
        assert len(self.values) == len(fixed.orbits)

    def __eq__(self, other):
        return (
            isinstance(other, ExcursionFunction)
            and self.fixed is other.fixed
            and self.values == other.values
        )

    def __repr__(self):
        return "ExcursionFunction(%s)" % (", ".join(repr(v) for v in self.values))


def _value_at(datum, obj, group, ctx):
    rho, g = obj
    images = tuple(rho) + (g,)
    xi = datum.xi
    vec = list(xi.v)
    # apply the slot monodromies one slot at a time
    dims = xi.dims
    total = xi.total_dim
    for j, (r, w) in enumerate(zip(xi.reps, datum.loops)):
        elt = evaluate_word(w, images, group)
        if elt == group.identity:
            continue
        mat = r.matrices[elt]
        stride = 1
        for d in dims[j + 1:]:
            stride *= d
        block = dims[j] * stride
        new = [ctx.zero] * total
        for m, c in enumerate(vec):
            if not c:
                continue
            base = (m // block) * block
            inner = m % stride
            mj = (m % block) // stride
            for i, x in enumerate(mat.column(mj)):
                if x:
                    idx = base + i * stride + inner
                    new[idx] = new[idx] + c * x
        vec = new
    return sum((a * b for a, b in zip(xi.vstar, vec)), ctx.zero)


def evaluate_excursion(datum, fixed, check_orbit_constancy=True):
    """The excursion class function on a fixed groupoid.

    Values are computed at orbit representatives; constancy on each orbit
    is asserted by evaluating at every object.
    """
    group = fixed.group
    ctx = datum.xi.ctx
    values = []
    for orbit in fixed.orbits:
        val = _value_at(datum, orbit["representative"], group, ctx)
        if check_orbit_constancy:
            for member in orbit["members"]:
                assert _value_at(datum, member, group, ctx) == val, (
                    "excursion value is not constant on an orbit"
                )
        values.append(val)
    return ExcursionFunction(fixed, values)


def xi_star(x1, x2):
    """Slot-wise tensor product of excursion data (padding by trivial slots).

    Realizes the product of endomorphism-of-unit elements: evaluation is
    multiplicative for it.
    """
    ctx = x1.ctx
    group = (x1.reps or x2.reps)[0].group
    j = max(x1.J, x2.J)
    x1 = _pad(x1, j, group)
    x2 = _pad(x2, j, group)
    reps = tuple(tensor(a, b) for a, b in zip(x1.reps, x2.reps))
    _, total = _flat_dims(reps)
    v = [ctx.zero] * total
    vstar = [ctx.zero] * total
    for m1, c1 in enumerate(x1.v):
        if not c1:
            continue
        for m2, c2 in enumerate(x2.v):
            if c2:
                v[_interleave(m1, m2, x1.dims, x2.dims)] = c1 * c2
    for m1, c1 in enumerate(x1.vstar):
        if not c1:
            continue
        for m2, c2 in enumerate(x2.vstar):
            if c2:
                vstar[_interleave(m1, m2, x1.dims, x2.dims)] = c1 * c2
    return XiDatum(reps, v, vstar, ctx, check=False)


def _pad(xi, j, group):
    if xi.J == j:
        return xi
    triv = builtin_rep(group, "trivial", xi.ctx)
    reps = xi.reps + (triv,) * (j - xi.J)
    return XiDatum(reps, xi.v, xi.vstar, xi.ctx, check=False)


def _digits(m, dims):
    out = []
    for d in reversed(dims):
        out.append(m % d)
        m //= d
    return list(reversed(out))


def _interleave(m1, m2, dims1, dims2):
    d1 = _digits(m1, dims1)
    d2 = _digits(m2, dims2)
    out = 0
    for a, b, da, db in zip(d1, d2, dims1, dims2):
        out = out * (da * db) + (a * db + b)
    return out


def pad_datum(datum, j, group):
    "Pad an ExcursionDatum with trivial slots carrying trivial loops."
    if datum.xi.J == j:
        return datum
    xi = _pad(datum.xi, j, group)
    loops = datum.loops + ((),) * (j - len(datum.loops))
    return ExcursionDatum(xi, loops)


def conjugate_loops(datum, delta):
    "Replace every loop gamma by delta gamma delta^-1 (same delta)."
    inv = word_inverse(delta)
    return ExcursionDatum(
        datum.xi, [tuple(delta) + w + inv for w in datum.loops]
    )


def torus_words_up_to(n_letters, max_len):
    "All free words of length <= max_len over n_letters generators (unreduced)."
    letters = []
    for i in range(n_letters):
        letters.append(((i, 1),))
        letters.append(((i, -1),))
    words = [()]
    for length in range(1, max_len + 1):
        for combo in iproduct(letters, repeat=length):
            words.append(sum(combo, ()))
    return words


def excursion_algebra_span(fixed, generating_reps, max_len, max_data=200000):
    """Empirical span of excursion functions inside all class functions.

    Enumerates xi_from_rep over the generating representations with all
    ordered pairs of torus loop words of length <= max_len and measures the
    exact dimension of the span.  Reports a class function outside the
    span when the span is proper.
    """
    ctx = generating_reps[0].ctx if generating_reps else None
    n_orbits = len(fixed.orbits)
    torus_gens = fixed.base.presentation.ngens + 1
    words = torus_words_up_to(torus_gens, max_len)
    red = SparseReducer()
    basis = []
    count = 0
    for a in generating_reps:
        xi = xi_from_rep(a)
        for w1 in words:
            for w2 in words:
                count += 1
                if count > max_data:
                    raise RuntimeError("excursion span enumeration exceeded the cap")
                datum = ExcursionDatum(xi, (w1, w2))
                fn = evaluate_excursion(datum, fixed, check_orbit_constancy=False)
                vec = {i: v for i, v in enumerate(fn.values) if v}
                if vec and red.add(vec) is not None:
                    basis.append((a, w1, w2, fn))
                if red.rank() == n_orbits:
                    break
            if red.rank() == n_orbits:
                break
        if red.rank() == n_orbits:
            break
    dim = red.rank()
    gap = None
    if dim < n_orbits and n_orbits:
        for i in range(n_orbits):
            probe = {i: ctx.one}
            if not red.contains(dict(probe)):
                gap = {"orbit_indicator": i}
                break
    return {"dimension": dim, "orbit_count": n_orbits, "basis": basis, "gap": gap}
