"""Twisted bundle bimodules over a character groupoid, in closed form.

The regular module model composes Hecke functors (tensoring by a bundle
attached to basepoint representations) with the pullback along phi.  All
the bimodules appearing in the operator composites then share one shape:
basis (arrow, fiber index) with the left action transporting the fiber and
the right action twisted by the hom pullback.  This module implements that
calculus: commutator relations for HH_0, the closed-form tensor laws, and
the stage maps (insertion, rotation, slot permutation, contraction, loop
monodromy) from which the S, T and partial-Frobenius operators are
assembled.

Validity of the closed forms requires the pullback to be a bijection on
homomorphisms; the engine refuses to build otherwise (the generic
coequalizer path in homology.py has no such restriction).
"""

from .groups import evaluate_word
from .linalg import SparseReducer


class NonInvertiblePullback(ValueError):
    pass


class RegularEngine:
    "Arrow tables of the character groupoid plus the (bijective) pullback."

    def __init__(self, char_groupoid, fixed_groupoid, phi, ctx):
        self.C = char_groupoid
        self.F = fixed_groupoid
        self.phi = phi
        self.ctx = ctx
        group = char_groupoid.group
        self.group = group
        homs = char_groupoid.homs
        self.n_obj = len(homs)
        self.ng = group.order
        self.phimap = [
            char_groupoid.hom_index[phi.push_images(rho, group)] for rho in homs
        ]
        if sorted(set(self.phimap)) != list(range(self.n_obj)):
            raise NonInvertiblePullback(
                "phi pullback is not a bijection on Hom(Gamma, G); "
                "the structured operator calculus is unavailable"
            )
        conj_obj = lambda h, o: char_groupoid.hom_index[
            tuple(group.conj(h, x) for x in homs[o])
        ]
        self.target = [
            [conj_obj(k, o) for k in range(self.ng)] for o in range(self.n_obj)
        ]
        self.n_arrows = self.n_obj * self.ng
        self.arrows_into = [[] for _ in range(self.n_obj)]
        for o in range(self.n_obj):
            for k in range(self.ng):
                self.arrows_into[self.target[o][k]].append(o * self.ng + k)
        gen_elts = [group.identity] + list(group.generators)
        self.generator_arrows = [
            (o, l) for o in range(self.n_obj) for l in gen_elts
        ]

    def arrow(self, o, k):
        return o * self.ng + k

    def arrow_parts(self, a):
        return divmod(a, self.ng)

    def aligned(self, a):
        o, k = divmod(a, self.ng)
        return self.phimap[self.target[o][k]] == o

    def pair_of_arrow(self, a):
        """The fixed-groupoid object carried by an aligned arrow.

        For an arrow (x, k): x -> y with x = Phi(y) the pair is
        (rho = hom at y, g = k^-1): rho(phi(w)) = g rho(w) g^-1.
        """
        o, k = divmod(a, self.ng)
        y = self.target[o][k]
        return (self.C.homs[y], self.group.inv(k))

    def space(self, legs, twist=1):
        return TwistedSpace(self, tuple(legs), twist=twist)


class TwistedSpace:
    """Basis (arrow, fiber multi-index).

    twist is the number of pullback applications on the right action
    (1 for every carrier in the trace pipeline, 0 for a plain Hecke
    bimodule).
    """

    def __init__(self, engine, legs, twist=1):
        self.engine = engine
        self.twist = twist
        self.legs = tuple(legs)
        self.dims = [r.dim for r in self.legs]
        d = 1
        for x in self.dims:
            d *= x
        self.D = d
        self.dim = engine.n_arrows * d
        strides = []
        s = 1
        for x in reversed(self.dims):
            strides.append(s)
            s *= x
        self.strides = list(reversed(strides))
        self._tcols = {}

    def basis(self, arrow, m):
        return arrow * self.D + m

    def parts(self, idx):
        return divmod(idx, self.D)

    def transport_columns(self, l, m):
        "(kron of r_j(l)) applied to basis fiber m, as [(m', coeff)]."
        key = (l, m)
        got = self._tcols.get(key)
        if got is not None:
            return got
        result = [(0, self.engine.ctx.one)]
        for j, r in enumerate(self.legs):
            mj = (m // self.strides[j]) % self.dims[j]
            col = r.sparse_column(l, mj)
            nxt = []
            for base, c in result:
                for i, x in col:
                    nxt.append((base + i * self.strides[j], c * x))
            result = nxt
        self._tcols[key] = result
        return result

    # --- bimodule actions on basis elements -------------------------------

    def act_left(self, gen_o, gen_l, idx):
        "Action of the arrow (gen_o, gen_l); zero unless target(h) = gen_o."
        eng = self.engine
        a, m = self.parts(idx)
        o, k = divmod(a, eng.ng)
        if eng.target[o][k] != gen_o:
            return {}
        new_arrow = eng.arrow(o, eng.group.mul(gen_l, k))
        out = {}
        for m2, c in self.transport_columns(gen_l, m):
            out[self.basis(new_arrow, m2)] = c
        return out

    def act_right(self, idx, gen_o, gen_l):
        "Right action twisted by the pullback: h o Phi^twist(a)."
        eng = self.engine
        a, m = self.parts(idx)
        o, k = divmod(a, eng.ng)
        po = gen_o
        for _ in range(self.twist):
            po = eng.phimap[po]
        if eng.target[po][gen_l] != o:
            return {}
        new_arrow = eng.arrow(po, eng.group.mul(k, gen_l))
        return {self.basis(new_arrow, m): self.engine.ctx.one}

    def commutator_relations(self):
        "Sparse vectors spanning [A, Q], from generator arrows only."
        assert self.twist == 1, "HH carriers always carry one twist"
        eng = self.engine
        for gen_o, gen_l in eng.generator_arrows:
            po = eng.phimap[gen_o]
            right_sources = eng.target[po][gen_l]
            qs = set(eng.arrows_into[gen_o])
            qs.update(
                right_sources * eng.ng + k for k in range(eng.ng)
            )
            for a in sorted(qs):
                for m in range(self.D):
                    idx = self.basis(a, m)
                    rel = dict(self.act_left(gen_o, gen_l, idx))
                    for kk, v in self.act_right(idx, gen_o, gen_l).items():
                        cur = rel.get(kk)
                        nv = cur - v if cur is not None else -v
                        if nv:
                            rel[kk] = nv
                        else:
                            rel.pop(kk, None)
                    if rel:
                        yield rel

    def hh(self):
        red = SparseReducer()
        for rel in self.commutator_relations():
            red.add(rel)
        return TwistedHH(self, red)

    def __repr__(self):
        return "TwistedSpace(arrows=%d, fiber=%d)" % (self.engine.n_arrows, self.D)


class TwistedHH:
    "HH_0 of a TwistedSpace, with the fixed-orbit label of each basis class."

    def __init__(self, space, reducer):
        self.space = space
        self.reducer = reducer
        self.free = reducer.free_indices(space.dim)
        self.free_pos = {c: i for i, c in enumerate(self.free)}
        self.dim = len(self.free)
        eng = space.engine
        self.block_of = []
        for c in self.free:
            arrow, m = space.parts(c)
            assert eng.aligned(arrow), (
                "a quotient basis class is carried by a non-aligned arrow"
            )
            pair = eng.pair_of_arrow(arrow)
            self.block_of.append(eng.F.orbit_of[pair])

    def project(self, vec):
        return self.reducer.project(vec, self.free_pos)

    def section(self, j):
        return {self.free[j]: self.space.engine.ctx.one}


# --- stage maps -----------------------------------------------------------


class Stage:
    "A linear map between twisted spaces, given on sparse vectors."

    def __init__(self, name, src, dst, fn):
        self.name = name
        self.src = src
        self.dst = dst
        self.fn = fn

    def __call__(self, vec):
        out = self.fn(vec)
        assert all(0 <= k < self.dst.dim for k in out), (
            "stage %s produced an out-of-range index" % self.name
        )
        return out


def insert_front(src, dst, n_front, v_entries):
    "q -> sum v[mf] (mf tensor q); v_entries is {front flat index: coeff}."
    rest = src.D
    assert dst.D == rest * _prod(dst.dims[:n_front])
    assert dst.dims[n_front:] == src.dims

    def fn(vec):
        out = {}
        for idx, c in vec.items():
            a, m = src.parts(idx)
            for mf, x in v_entries.items():
                k = dst.basis(a, mf * rest + m)
                cur = out.get(k)
                nv = cur + c * x if cur is not None else c * x
                if nv:
                    out[k] = nv
                else:
                    out.pop(k, None)
        return out

    return Stage("insert", src, dst, fn)


def contract_front(src, dst, n_front, vstar_entries):
    "mf tensor q -> vstar[mf] q."
    rest = dst.D
    assert src.dims[n_front:] == dst.dims

    def fn(vec):
        out = {}
        for idx, c in vec.items():
            a, m = src.parts(idx)
            mf, mrest = divmod(m, rest)
            x = vstar_entries.get(mf)
            if not x:
                continue
            k = dst.basis(a, mrest)
            cur = out.get(k)
            nv = cur + c * x if cur is not None else c * x
            if nv:
                out[k] = nv
            else:
                out.pop(k, None)
        return out

    return Stage("contract", src, dst, fn)


def rotate_front_to_back(src, dst):
    """Cyclic rotation moving the front slot past the twist to the back.

    On classes this is the cyclicity isomorphism; on the ambient space the
    rotated slot is transported by the arrow's group element, and
    non-aligned arrows (which die in HH_0) map to zero.
    """
    assert dst.dims == src.dims[1:] + src.dims[:1]
    eng = src.engine
    d0 = src.dims[0]
    stride0 = src.D // d0
    r0 = src.legs[0]

    def fn(vec):
        out = {}
        for idx, c in vec.items():
            a, m = src.parts(idx)
            if not eng.aligned(a):
                continue
            _, k = divmod(a, eng.ng)
            m0, mrest = divmod(m, stride0)
            for i0, x in r0.sparse_column(k, m0):
                kk = dst.basis(a, mrest * d0 + i0)
                cur = out.get(kk)
                nv = cur + c * x if cur is not None else c * x
                if nv:
                    out[kk] = nv
                else:
                    out.pop(kk, None)
        return out

    return Stage("rotate>", src, dst, fn)


def rotate_back_to_front(src, dst):
    "Inverse rotation: the back slot comes to the front, transported by k^-1."
    assert dst.dims == src.dims[-1:] + src.dims[:-1]
    eng = src.engine
    dl = src.dims[-1]
    rl = src.legs[-1]
    rest = src.D // dl

    def fn(vec):
        out = {}
        for idx, c in vec.items():
            a, m = src.parts(idx)
            if not eng.aligned(a):
                continue
            _, k = divmod(a, eng.ng)
            kinv = eng.group.inv(k)
            mrest, ml = divmod(m, dl)
            for il, x in rl.sparse_column(kinv, ml):
                kk = dst.basis(a, il * rest + mrest)
                cur = out.get(kk)
                nv = cur + c * x if cur is not None else c * x
                if nv:
                    out[kk] = nv
                else:
                    out.pop(kk, None)
        return out

    return Stage("rotate<", src, dst, fn)


def permute_slots(src, dst, dst_pos):
    "Reorder fiber slots; dst_pos[j] is the destination of source slot j."
    assert sorted(dst_pos) == list(range(len(src.dims)))
    for j, p in enumerate(dst_pos):
        assert dst.dims[p] == src.dims[j]

    def fn(vec):
        out = {}
        for idx, c in vec.items():
            a, m = src.parts(idx)
            m2 = 0
            for j in range(len(src.dims)):
                digit = (m // src.strides[j]) % src.dims[j]
                m2 += digit * dst.strides[dst_pos[j]]
            k = dst.basis(a, m2)
            cur = out.get(k)
            out[k] = cur + c if cur is not None else c
            if not out[k]:
                del out[k]
        return out

    return Stage("permute", src, dst, fn)


def monodromy_stage(space, words, slots=None):
    """Loop monodromy: slot j is multiplied by r_j(sigma(gamma_j)).

    sigma is the fixed pair carried by the (aligned) arrow; letters of the
    words are over the mapping-torus generators.
    """
    eng = space.engine
    group = eng.group
    slots = list(range(len(words))) if slots is None else slots

    def fn(vec):
        out = {}
        elt_cache = {}
        for idx, c in vec.items():
            a, m = space.parts(idx)
            if not eng.aligned(a):
                continue
            elts = elt_cache.get(a)
            if elts is None:
                rho, g = eng.pair_of_arrow(a)
                images = tuple(rho) + (g,)
                elts = [evaluate_word(w, images, group) for w in words]
                elt_cache[a] = elts
            terms = [(m, c)]
            for j, elt in zip(slots, elts):
                if elt == group.identity:
                    continue
                r = space.legs[j]
                stride = space.strides[j]
                dj = space.dims[j]
                nxt = []
                for mm, cc in terms:
                    mj = (mm // stride) % dj
                    base = mm - mj * stride
                    for i, x in r.sparse_column(elt, mj):
                        nxt.append((base + i * stride, cc * x))
                terms = nxt
            for mm, cc in terms:
                k = space.basis(a, mm)
                cur = out.get(k)
                nv = cur + cc if cur is not None else cc
                if nv:
                    out[k] = nv
                else:
                    out.pop(k, None)
        return out

    return Stage("monodromy", space, space, fn)


def _prod(xs):
    p = 1
    for x in xs:
        p *= x
    return p


def compose_stages(stages, vec):
    for st in stages:
        vec = st(vec)
    return vec


def structured_mu(left_space, right_space, result_space):
    """The closed-form tensor surjection mu on basis pairs.

    mu((h,m) tensor (h',m')) = (h o Phi^s(h'), m tensor W'(k_h) m') where
    s is the left factor's twist; non-composable pairs map to zero.
    """
    eng = left_space.engine
    s = left_space.twist

    def mu(ql, ml, qr, mr):
        o1, k1 = divmod(ql, eng.ng)
        o2, k2 = divmod(qr, eng.ng)
        src = o2
        for _ in range(s):
            src = eng.phimap[src]
        if eng.target[src][k2] != o1:
            return {}
        arrow = eng.arrow(src, eng.group.mul(k1, k2))
        out = {}
        for m2, c in right_space.transport_columns(k1, mr):
            out[result_space.basis(arrow, ml * right_space.D + m2)] = c
        return out

    return mu


def _acc(out, coeff, vec):
    for k, v in vec.items():
        cur = out.get(k)
        nv = cur + coeff * v if cur is not None else coeff * v
        if nv:
            out[k] = nv
        else:
            out.pop(k, None)
    return out


def verify_structured_tensor(left_space, right_space, result_space, sample=None):
    """Check that mu is a well-defined bimodule surjection.

    Verifies, on basis elements against all generator arrows: the middle
    relation mu(q.a tensor p) = mu(q tensor a.p), left outer compatibility
    mu(b.q tensor p) = b.mu(q tensor p), and right outer compatibility
    mu(q tensor p.a) = mu(q tensor p).a.  Exhaustive when sample is None.
    """
    eng = left_space.engine
    assert result_space.twist == left_space.twist + right_space.twist
    mu = structured_mu(left_space, right_space, result_space)

    import random

    rng = random.Random(0xC0)
    if sample is None:
        pairs = [
            (ql, qr)
            for ql in range(eng.n_arrows)
            for qr in range(eng.n_arrows)
        ]
    else:
        pairs = [
            (rng.randrange(eng.n_arrows), rng.randrange(eng.n_arrows))
            for _ in range(sample)
        ]
    gen_arrows = eng.generator_arrows
    for ql, qr in pairs:
        for ml in range(left_space.D):
            for mr in range(right_space.D):
                base = mu(ql, ml, qr, mr)
                for go, gl in gen_arrows:
                    # middle relation
                    lhs = {}
                    for idx, c in left_space.act_right(
                        left_space.basis(ql, ml), go, gl
                    ).items():
                        a2, m2 = left_space.parts(idx)
                        _acc(lhs, c, mu(a2, m2, qr, mr))
                    rhs = {}
                    for idx, c in right_space.act_left(
                        go, gl, right_space.basis(qr, mr)
                    ).items():
                        a2, m2 = right_space.parts(idx)
                        _acc(rhs, c, mu(ql, ml, a2, m2))
                    assert lhs == rhs, "tensor middle relation fails under mu"
                    # outer actions
                    lout = {}
                    for idx, c in left_space.act_left(
                        go, gl, left_space.basis(ql, ml)
                    ).items():
                        a2, m2 = left_space.parts(idx)
                        _acc(lout, c, mu(a2, m2, qr, mr))
                    bmu = {}
                    for idx, c in base.items():
                        _acc(bmu, c, result_space.act_left(go, gl, idx))
                    assert lout == bmu, "left outer action fails under mu"
                    rout = {}
                    for idx, c in right_space.act_right(
                        right_space.basis(qr, mr), go, gl
                    ).items():
                        a2, m2 = right_space.parts(idx)
                        _acc(rout, c, mu(ql, ml, a2, m2))
                    mua = {}
                    for idx, c in base.items():
                        _acc(mua, c, result_space.act_right(idx, go, gl))
                    assert rout == mua, "right outer action fails under mu"
    return True
