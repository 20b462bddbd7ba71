"""Trace spaces, Hecke and excursion operators, and the identity checks.

The regular module model works over the groupoid algebra of the character
groupoid; its trace spaces are computed twice, through the Hochschild
quotient and through stabilizer-invariant sections over the fixed-point
groupoid, with an explicit invertible comparison isomorphism between the
two.  All operators are reported on the canonical block basis (fixed-point
orbits in their canonical order).
"""

from .excursion import ExcursionDatum, evaluate_excursion, xi_from_rep
from .groups import mapping_torus, parse_word, validate_phi
from .homology import (
    Bimodule,
    ProjectiveModuleData,
    groupoid_algebra,
    hh0,
    pullback_bimodule,
    pullback_endo,
    semisimplicity_guard,
    twist_bimodule,
    vec_axpy,
)
from .linalg import FieldMatrix, mat_inverse, mat_mul
from .rationals import qq
from .reps import dual
from .stacks import (
    build_char_groupoid,
    bundle_from_rep,
    fixed_groupoid_pairs,
    fixed_groupoid_torus,
    match_fixed_descriptions,
    sections,
)
from .structured import (
    NonInvertiblePullback,
    RegularEngine,
    compose_stages,
    contract_front,
    insert_front,
    monodromy_stage,
    permute_slots,
    rotate_back_to_front,
    rotate_front_to_back,
)


class ScenarioError(ValueError):
    pass


class Scenario:
    """A validated (Gamma, phi, G, reps) datum with its groupoids built.

    Validations are eager: phi is checked representation-wise, the two
    presentations of the fixed groupoid are built and matched, and the
    orbit-stabilizer identities are asserted inside the groupoid builders.
    """

    def __init__(self, name, presentation, phi, group, ctx, reps,
                 max_nodes=None):
        self.name = name
        self.presentation = presentation
        self.phi = phi
        self.group = group
        self.ctx = ctx
        self.reps = dict(reps)
        bad = validate_phi(presentation, phi, group)
        if bad is not None:
            raise ScenarioError(
                "phi does not preserve the relators: rho=%r fails %r" % bad
            )
        self.char_groupoid = build_char_groupoid(presentation, group,
                                                 max_nodes=max_nodes)
        self.fixed = fixed_groupoid_pairs(self.char_groupoid, phi)
        self.fixed_torus = fixed_groupoid_torus(
            presentation, phi, group, char_groupoid=self.char_groupoid,
            max_nodes=max_nodes,
        )
        self.match_report = match_fixed_descriptions(self.fixed, self.fixed_torus)
        if not self.match_report["ok"]:
            raise ScenarioError(
                "fixed-groupoid presentations disagree: %r" % self.match_report
            )
        self.torus_presentation = mapping_torus(presentation, phi)
        self.checks = {}
        self.excursion_doc = None
        self._engine = None
        self._algebra = None

    @property
    def engine(self):
        if self._engine is None:
            self._engine = RegularEngine(
                self.char_groupoid, self.fixed, self.phi, self.ctx
            )
        return self._engine

    @property
    def pullback_invertible(self):
        try:
            self.engine
            return True
        except NonInvertiblePullback:
            return False

    def algebra(self):
        if self._algebra is None:
            self._algebra = groupoid_algebra(self.char_groupoid, self.ctx)
            semisimplicity_guard(self._algebra)
        return self._algebra

    def parse_torus_word(self, text):
        return parse_word(text, self.torus_presentation.generator_names)

    def t_word(self):
        return ((self.presentation.ngens, 1),)

    def __repr__(self):
        return "Scenario(%r, |G|=%d, homs=%d, fixed orbits=%d)" % (
            self.name, self.group.order, len(self.char_groupoid.homs),
            len(self.fixed.orbits),
        )


class Regular:
    "The module model: modules over the character-groupoid algebra."

    slots = ()
    kind = "regular"

    def slot_reps(self, scenario):
        return ()


class BundleModel:
    """A user-supplied module: an equivariant bundle with a phi-structure.

    The bundle is generated by basepoint representations (object-independent
    transports); the phi-structure maps default to the tautological identity
    identification and must commute with transport.
    """

    kind = "bundle"

    def __init__(self, reps, fmaps=None):
        self.reps = tuple(reps)
        self.fmaps = fmaps

    def slot_reps(self, scenario):
        return self.reps

    def validate(self, scenario):
        ctx = scenario.ctx
        dim = 1
        for r in self.reps:
            dim *= r.dim
        ident = FieldMatrix.identity(ctx, dim)
        fmaps = self.fmaps
        if fmaps is None:
            fmaps = {rho: ident for rho in scenario.char_groupoid.homs}
        group = scenario.group
        bundle = bundle_from_rep(scenario.char_groupoid, self.reps)
        for rho in scenario.char_groupoid.homs:
            f_rho = fmaps[rho]
            for h in range(group.order):
                tgt = tuple(group.conj(h, x) for x in rho)
                lhs = mat_mul(fmaps[tgt], bundle.transport(h, ctx))
                rhs = mat_mul(bundle.transport(h, ctx), f_rho)
                if lhs != rhs:
                    return {"ok": False, "object": rho, "arrow": h}
        if self.fmaps is not None:
            for rho, m in self.fmaps.items():
                if m != ident:
                    return {
                        "ok": True,
                        "note": "operators use the tautological identity structure",
                    }
        return {"ok": True}


REGULAR = Regular()


class CarrierSpace:
    """A trace or legged space with both pipelines and the comparison iso.

    Blocks are indexed by fixed-groupoid orbits in canonical order; the
    comparison isomorphism is block-diagonal and exactly invertible.
    """

    def __init__(self, scenario, model, legs=()):
        self.scenario = scenario
        self.model = model
        self.legs = tuple(legs)
        self.slot_reps = tuple(model.slot_reps(scenario)) + self.legs
        engine = scenario.engine
        self.engine = engine
        self.space = engine.space(self.slot_reps)
        self.hh = self.space.hh()
        bundle = bundle_from_rep(scenario.fixed, self.slot_reps)
        self.section_space = sections(bundle, ctx=scenario.ctx)
        self.block_dims = self.section_space.block_dims
        self.block_offsets = []
        off = 0
        for d in self.block_dims:
            self.block_offsets.append(off)
            off += d
        self.dim = off
        if self.hh.dim != self.dim:
            raise AssertionError(
                "pipeline disagreement: HH dim %d vs sections dim %d"
                % (self.hh.dim, self.dim)
            )
        self._build_iso()

    def _build_iso(self):
        ctx = self.scenario.ctx
        fixed = self.scenario.fixed
        space = self.space
        cols = []
        for j in range(self.hh.dim):
            basis_idx = self.hh.free[j]
            arrow, m = space.parts(basis_idx)
            pair = self.engine.pair_of_arrow(arrow)
            oi = fixed.orbit_of[pair]
            orbit = fixed.orbits[oi]
            c = orbit["transporter"][pair]
            cinv = self.scenario.group.inv(c)
            fiber = {}
            for m2, x in space.transport_columns(cinv, m):
                fiber[m2] = fiber.get(m2, ctx.zero) + x
            vec = [ctx.zero] * max(space.D, 1)
            proj = self._orbit_projector(oi)
            for mm, x in fiber.items():
                for i in range(space.D):
                    p = proj.entries[i][mm]
                    if p:
                        vec[i] = vec[i] + p * x
            aut_order = len(orbit["aut"])
            scaled = tuple(v * aut_order for v in vec)
            coords = self.section_space.block_coordinates(oi, scaled)
            col = [ctx.zero] * self.dim
            for i, x in enumerate(coords):
                col[self.block_offsets[oi] + i] = x
            cols.append((oi, col))
        zero = ctx.zero
        entries = [[zero] * self.hh.dim for _ in range(self.dim)]
        for j, (oi, col) in enumerate(cols):
            for i, x in enumerate(col):
                entries[i][j] = x
        self.block_from_hh = FieldMatrix(ctx, entries) if self.dim else \
            FieldMatrix(ctx, [])
        if self.dim:
            self.hh_from_block = mat_inverse(self.block_from_hh)
        else:
            self.hh_from_block = self.block_from_hh
        # block-diagonality: each column is supported in its own block
        for j, (oi, col) in enumerate(cols):
            lo = self.block_offsets[oi]
            hi = lo + self.block_dims[oi]
            for i, x in enumerate(col):
                assert (lo <= i < hi) or not x, "comparison iso is not block-diagonal"

    def _orbit_projector(self, oi):
        cache = getattr(self, "_projcache", None)
        if cache is None:
            cache = self._projcache = {}
        got = cache.get(oi)
        if got is None:
            ctx = self.scenario.ctx
            orbit = self.scenario.fixed.orbits[oi]
            bundle = bundle_from_rep(self.scenario.fixed, self.slot_reps)
            acc = FieldMatrix.zero(ctx, self.space.D, self.space.D)
            for h in orbit["aut"]:
                acc = acc + bundle.transport(h, ctx)
            got = acc * ctx.from_rational(qq(1, len(orbit["aut"])))
            cache[oi] = got
        return got

    def operator_from_stages(self, stages, tag):
        ctx = self.scenario.ctx
        cols = []
        for j in range(self.hh.dim):
            vec = compose_stages(stages, self.hh.section(j))
            cols.append(self.hh.project(vec))
        zero = ctx.zero
        entries = [[zero] * self.hh.dim for _ in range(self.hh.dim)]
        for j, col in enumerate(cols):
            for i, x in col.items():
                entries[i][j] = x
        hh_mat = FieldMatrix(ctx, entries) if self.hh.dim else FieldMatrix(ctx, [])
        return OperatorMatrix(tag, self, hh_mat)

    def block_matrix_of(self, hh_mat):
        if not self.dim:
            return hh_mat
        return mat_mul(mat_mul(self.block_from_hh, hh_mat), self.hh_from_block)

    def block_scalar_matrix(self, values_per_orbit):
        "Block-diagonal scalar multiplication in the block basis."
        ctx = self.scenario.ctx
        zero = ctx.zero
        entries = [[zero] * self.dim for _ in range(self.dim)]
        for oi, val in enumerate(values_per_orbit):
            off = self.block_offsets[oi]
            for i in range(self.block_dims[oi]):
                entries[off + i][off + i] = val
        return FieldMatrix(ctx, entries) if self.dim else FieldMatrix(ctx, [])

    def block_slotwise_matrix(self, slot, matrix_of_orbit):
        """Per-orbit operator acting on one fiber slot, in block coordinates.

        matrix_of_orbit(orbit_index) must return the slot matrix (a
        FieldMatrix of the slot dimension).
        """
        ctx = self.scenario.ctx
        zero = ctx.zero
        entries = [[zero] * self.dim for _ in range(self.dim)]
        space = self.space
        stride = space.strides[slot]
        dj = space.dims[slot]
        for oi in range(len(self.scenario.fixed.orbits)):
            basis = self.section_space.block_bases[oi]
            m = matrix_of_orbit(oi)
            for bj, vecb in enumerate(basis):
                out = [ctx.zero] * space.D
                for mm, c in enumerate(vecb):
                    if not c:
                        continue
                    mj = (mm // stride) % dj
                    base = mm - mj * stride
                    for i in range(dj):
                        x = m.entries[i][mj]
                        if x:
                            out[base + i * stride] = out[base + i * stride] + c * x
                coords = self.section_space.block_coordinates(oi, tuple(out))
                for bi, x in enumerate(coords):
                    entries[self.block_offsets[oi] + bi][
                        self.block_offsets[oi] + bj
                    ] = x
        return FieldMatrix(ctx, entries) if self.dim else FieldMatrix(ctx, [])

    def provenance(self):
        return {
            "hh_pipeline": {"ambient_dim": self.space.dim, "dim": self.hh.dim},
            "sections_pipeline": {
                "dim": self.dim,
                "block_dims": list(self.block_dims),
            },
        }

    def __repr__(self):
        return "CarrierSpace(dim=%d, blocks=%s)" % (self.dim, self.block_dims)


class OperatorMatrix:
    "An operator on a carrier, stored on the HH basis and the block basis."

    def __init__(self, tag, carrier, hh_matrix, block_matrix=None):
        self.tag = tag
        self.carrier = carrier
        self.hh_matrix = hh_matrix
        self.block_matrix = (
            block_matrix
            if block_matrix is not None
            else carrier.block_matrix_of(hh_matrix)
        )

    def __eq__(self, other):
        return (
            isinstance(other, OperatorMatrix)
            and self.block_matrix == other.block_matrix
        )

    def __repr__(self):
        return "OperatorMatrix(%s, dim=%d)" % (self.tag, self.carrier.dim)


def trace_space(scenario, model=REGULAR):
    "Tr(F_M, M) with blocks over the fixed-point orbits."
    return CarrierSpace(scenario, model, ())


def legged_space(scenario, model, legs):
    "The I-legged space for per-leg representations."
    return CarrierSpace(scenario, model, tuple(legs))


def general_trace_space(scenario):
    """Trace space for arbitrary phi via the pullback bimodule.

    Works without invertibility of the pullback; computes the Hochschild
    quotient of the general pullback bimodule and compares with the
    class-function model on the fixed groupoid, returning the explicit
    isomorphism data.
    """
    alg = scenario.algebra()
    bim, aligned = pullback_bimodule(alg, scenario.char_groupoid, scenario.phi)
    h = hh0(bim)
    fixed = scenario.fixed
    n_orb = len(fixed.orbits)
    if h.dim != n_orb:
        raise AssertionError(
            "pipeline disagreement: HH dim %d vs %d fixed orbits" % (h.dim, n_orb)
        )
    ctx = scenario.ctx
    zero = ctx.zero
    entries = [[zero] * h.dim for _ in range(n_orb)]
    for j in range(h.dim):
        qi = h.free[j]
        assert qi in aligned, "HH class carried by a non-aligned basis element"
        pair = aligned[qi]
        oi = fixed.orbit_of[pair]
        aut = len(fixed.orbits[oi]["aut"])
        entries[oi][j] = ctx.from_rational(aut)
    iso = FieldMatrix(ctx, entries) if n_orb else FieldMatrix(ctx, [])
    if n_orb:
        mat_inverse(iso)  # raises when singular
    return {"hh": h, "iso": iso, "orbits": n_orb, "bimodule": bim}


# --- operators -------------------------------------------------------------


def T_operator(scenario, model, a, carrier):
    """The Hecke operator of a at the basepoint, as the four-stage composite.

    unit insertion, cyclicity rotation, the tautological commutation (a
    slot permutation: fibers are identified along phi at the basepoint),
    and counit contraction.
    """
    engine = scenario.engine
    legs = carrier.slot_reps
    adual = dual(a)
    d = a.dim
    ctx = scenario.ctx
    s_l = carrier.space
    s1 = engine.space((adual, a) + legs)
    s2 = engine.space((a,) + legs + (adual,))
    s3 = engine.space((a, adual) + legs)
    coev = {i * d + i: ctx.one for i in range(d)}
    ev = {i * d + i: ctx.one for i in range(d)}
    nl = len(legs)
    perm = [0] + [2 + j for j in range(nl)] + [1]
    stages = [
        insert_front(s_l, s1, 2, coev),
        rotate_front_to_back(s1, s2),
        permute_slots(s2, s3, perm),
        contract_front(s3, s_l, 2, ev),
    ]
    op = carrier.operator_from_stages(stages, "T")
    return op


def T_block_oracle(scenario, a, carrier):
    "Independent per-block evaluation sigma -> chi_a(sigma(t))."
    chi = a.character()
    vals = []
    for orbit in scenario.fixed.orbits:
        _, g = orbit["representative"]
        vals.append(chi.value_at_element(g))
    return carrier.block_scalar_matrix(vals)


def excursion_operator(scenario, model, datum, carrier, tag="excursion-action"):
    """The abstract excursion composite and its block realization.

    For the regular model the two are asserted equal; the block form is
    scalar multiplication by the excursion function on each orbit block.
    """
    engine = scenario.engine
    legs = carrier.slot_reps
    xi = datum.xi
    j = xi.J
    s_l = carrier.space
    s1 = engine.space(xi.reps + legs)
    v_entries = {m: c for m, c in enumerate(xi.v) if c}
    vstar_entries = {m: c for m, c in enumerate(xi.vstar) if c}
    stages = [
        insert_front(s_l, s1, j, v_entries),
        monodromy_stage(s1, datum.loops, slots=list(range(j))),
        contract_front(s1, s_l, j, vstar_entries),
    ]
    op = carrier.operator_from_stages(stages, tag)
    fn = evaluate_excursion(datum, scenario.fixed)
    block = carrier.block_scalar_matrix(fn.values)
    if model.kind == "regular":
        assert op.block_matrix == block, (
            "abstract excursion composite disagrees with the block scalars"
        )
    return op, fn, block


def S_operator(scenario, model, a, carrier):
    "The excursion operator for (gamma_taut, gamma_triv) and xi_a."
    datum = ExcursionDatum(xi_from_rep(a), (scenario.t_word(), ()))
    op, fn, _ = excursion_operator(scenario, model, datum, carrier, tag="S")
    return op, fn


def verify_S_equals_T(scenario, model, a, legs=()):
    "Exact matrix equality of the S and T operators, with or without legs."
    carrier = CarrierSpace(scenario, model, tuple(legs))
    t_op = T_operator(scenario, model, a, carrier)
    s_op, fn = S_operator(scenario, model, a, carrier)
    oracle = T_block_oracle(scenario, a, carrier)
    ok = (
        t_op.block_matrix == s_op.block_matrix
        and t_op.block_matrix == oracle
    )
    report = {
        "ok": ok,
        "scenario": scenario.name,
        "rep_dim": a.dim,
        "legs": len(legs),
        "carrier_dim": carrier.dim,
        "per_block_scalars": [repr(v) for v in fn.values],
        "T_matrix": _matrix_literal(t_op.block_matrix),
        "S_matrix": _matrix_literal(s_op.block_matrix),
    }
    if not ok:
        report["counterexample"] = _first_matrix_difference(
            t_op.block_matrix, s_op.block_matrix, oracle
        )
    return report, carrier, t_op, s_op


def _matrix_literal(m):
    return [[x.canonical_str() for x in row] for row in m.entries]


def _first_matrix_difference(t_mat, s_mat, oracle):
    for i in range(t_mat.rows):
        for j in range(t_mat.cols):
            trip = (t_mat.entries[i][j], s_mat.entries[i][j], oracle.entries[i][j])
            if not (trip[0] == trip[1] == trip[2]):
                return {
                    "entry": (i, j),
                    "T": repr(trip[0]),
                    "S": repr(trip[1]),
                    "oracle": repr(trip[2]),
                }
    return None


def partial_frobenius(scenario, model, carrier, leg):
    """Partial Frobenius at one leg, through the cyclicity route.

    Assembled as: rotate the leg slot to the back, bring it around the
    twist to the front (transporting by sigma(t)), and restore its
    position.  Asserted equal to the block realization r_leg(sigma(t)).
    """
    engine = scenario.engine
    legs = carrier.slot_reps
    nl = len(legs)
    if not (0 <= leg < nl):
        raise ValueError("leg index out of range")
    s_l = carrier.space
    mid_legs = legs[:leg] + legs[leg + 1:] + (legs[leg],)
    mid2_legs = (legs[leg],) + legs[:leg] + legs[leg + 1:]
    s_mid = engine.space(mid_legs)
    s_mid2 = engine.space(mid2_legs)
    perm1 = list(range(leg)) + [nl - 1] + [j - 1 for j in range(leg + 1, nl)]
    perm2 = [leg] + list(range(leg)) + list(range(leg + 1, nl))
    stages = [
        permute_slots(s_l, s_mid, perm1),
        rotate_back_to_front(s_mid, s_mid2),
        permute_slots(s_mid2, s_l, perm2),
    ]
    op = carrier.operator_from_stages(stages, "partial-frobenius")
    rep = legs[leg]
    block = carrier.block_slotwise_matrix(
        leg,
        lambda oi: rep.matrices[scenario.fixed.orbits[oi]["representative"][1]],
    )
    assert op.block_matrix == block, (
        "partial Frobenius disagrees with its block realization"
    )
    return op


def global_monodromy(scenario, model, carrier):
    "Diagonal action of sigma(t) on the whole fiber, restricted to invariants."
    legs = carrier.slot_reps
    nl = len(legs)
    t = scenario.t_word()
    stages = [monodromy_stage(carrier.space, (t,) * nl, slots=list(range(nl)))]
    return carrier.operator_from_stages(stages, "monodromy")


def verify_frobenius_product(scenario, model, legs):
    "Distinct-leg operators commute; their product is the global monodromy."
    carrier = CarrierSpace(scenario, model, tuple(legs))
    nl = len(carrier.slot_reps)
    ops = [partial_frobenius(scenario, model, carrier, i) for i in range(nl)]
    ctx = scenario.ctx
    prod = FieldMatrix.identity(ctx, carrier.dim)
    for op in ops:
        prod = mat_mul(op.block_matrix, prod)
    mono = global_monodromy(scenario, model, carrier)
    commute = True
    for i in range(nl):
        for j in range(i + 1, nl):
            ab = mat_mul(ops[i].block_matrix, ops[j].block_matrix)
            ba = mat_mul(ops[j].block_matrix, ops[i].block_matrix)
            if ab != ba:
                commute = False
    ok = commute and (prod == mono.block_matrix if nl else True)
    return {
        "ok": ok,
        "scenario": scenario.name,
        "legs": nl,
        "carrier_dim": carrier.dim,
        "commute": commute,
        "product_equals_monodromy": prod == mono.block_matrix,
    }


def chern_check(scenario, a):
    """cl(a, id) = the tautological excursion of a, on the inertia model.

    Needs Gamma trivial and phi = id; both sides must equal the class
    function [g] -> chi_a(g).
    """
    if scenario.presentation.ngens != 0:
        raise ScenarioError("chern check needs a trivial fundamental group")
    for w, expect in zip(scenario.phi.images, range(scenario.presentation.ngens)):
        if w != ((expect, 1),):
            raise ScenarioError("chern check needs phi = id")
    group = scenario.group
    ctx = scenario.ctx
    alg = scenario.algebra()
    n = group.order
    d = a.dim
    inv_order = ctx.from_rational(qq(1, n))
    e_mat = [
        [
            {
                g: a.matrices[group.inv(g)].entries[c][r] * inv_order
                for g in range(n)
                if a.matrices[group.inv(g)].entries[c][r]
            }
            for c in range(d)
        ]
        for r in range(d)
    ]
    theta = pullback_endo(alg, scenario.char_groupoid, scenario.phi)
    q_f = twist_bimodule(alg, theta)
    pm = ProjectiveModuleData(alg, q_f, d, e_mat, e_mat)
    carrier = trace_space(scenario, REGULAR)
    cls_vec = {}
    for i in range(d):
        vec_axpy(cls_vec, ctx.one, pm.B[i][i])
    coords = carrier.hh.project(cls_vec)
    col = [ctx.zero] * carrier.dim
    for j, x in coords.items():
        for i in range(carrier.dim):
            y = carrier.block_from_hh.entries[i][j]
            if y:
                col[i] = col[i] + y * x
    datum = ExcursionDatum(xi_from_rep(a), (scenario.t_word(), ()))
    fn = evaluate_excursion(datum, scenario.fixed)
    chi = a.character()
    expected = [
        chi.value_at_element(orbit["representative"][1])
        for orbit in scenario.fixed.orbits
    ]
    ok = list(col) == list(fn.values) == expected
    return {
        "ok": ok,
        "scenario": scenario.name,
        "class_values": [repr(v) for v in col],
        "excursion_values": [repr(v) for v in fn.values],
        "character_values": [repr(v) for v in expected],
    }


def excursion_action_check(scenario, model, datum, legs=()):
    """The abstract excursion composite equals the per-block scalar action.

    Also checks centrality: the action commutes with every T operator of
    the scenario's representations.
    """
    carrier = CarrierSpace(scenario, model, tuple(legs))
    op, fn, block = excursion_operator(scenario, model, datum, carrier)
    ok = op.block_matrix == block
    commutes = {}
    for name, a in scenario.reps.items():
        t_op = T_operator(scenario, model, a, carrier)
        lhs = mat_mul(op.block_matrix, t_op.block_matrix)
        rhs = mat_mul(t_op.block_matrix, op.block_matrix)
        commutes[name] = lhs == rhs
    ok = ok and all(commutes.values())
    return {
        "ok": ok,
        "scenario": scenario.name,
        "values": [repr(v) for v in fn.values],
        "commutes_with_T": commutes,
    }


# --- the Hecke bimodule as a spec-level Bimodule ---------------------------


def hecke_bimodule(scenario, model, r):
    """The Hecke bimodule of a representation plus its commutation data.

    Returns (Q_r as a Bimodule over the groupoid algebra, report).  The
    commutation isomorphism Q_r (x) Q_F = Q_F (x) Q_r is exhibited through
    the identity identification of fibers at rho and rho o phi and checked
    as a bimodule map (exhaustively for small scenarios).
    """
    alg = scenario.algebra()
    engine = scenario.engine
    group = scenario.group
    ng = group.order
    d = r.dim
    n_arrows = engine.n_arrows
    one = scenario.ctx.one
    left = {}
    right = {}
    for a_idx in range(n_arrows):
        o, k = divmod(a_idx, ng)
        tgt = engine.target[o][k]
        for i in range(d):
            qi = a_idx * d + i
            for l in range(ng):
                b = engine.arrow(tgt, l)
                new_a = engine.arrow(o, group.mul(l, k))
                ent = {}
                for row, x in r.sparse_column(l, i):
                    ent[new_a * d + row] = x
                left[(b, qi)] = ent
    for a_idx in range(n_arrows):
        o, k = divmod(a_idx, ng)
        for o2 in range(engine.n_obj):
            for l in range(ng):
                if engine.target[o2][l] != o:
                    continue
                b = engine.arrow(o2, l)
                for i in range(d):
                    qi = a_idx * d + i
                    right[(qi, b)] = {
                        engine.arrow(o2, group.mul(k, l)) * d + i: one
                    }
    q_r = Bimodule(alg, alg, n_arrows * d, left, right, verify=False)
    theta = pullback_endo(alg, scenario.char_groupoid, scenario.phi)
    q_f = twist_bimodule(alg, theta)
    small = alg.dim * q_r.dim <= 4096
    from .structured import verify_structured_tensor

    s_qr = engine.space((r,), twist=0)
    s_qf = engine.space((), twist=1)
    s_res = engine.space((r,), twist=1)
    verify_structured_tensor(
        s_qr, s_qf, s_res, sample=None if small else 400
    )
    verify_structured_tensor(
        s_qf, s_qr, s_res, sample=None if small else 400
    )
    report = {
        "ok": True,
        "dim": q_r.dim,
        "verified": "exhaustive" if small else "sampled",
    }
    return q_r, q_f, report
