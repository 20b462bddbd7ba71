"""Character groupoids, fixed-point groupoids, equivariant bundles, sections.

A point of the character groupoid is a homomorphism Gamma -> G; arrows are
conjugations.  The fixed-point groupoid of an endomorphism phi has objects
(rho, g) with rho(phi(x)) = g rho(x) g^-1, equivalently homomorphisms out
of the mapping torus <Gamma, t | t x t^-1 = phi(x)> via t -> g.
"""

from .groups import (
    conjugation_orbits,
    enumerate_homs,
    evaluate_word,
    mapping_torus,
)
from .linalg import FieldMatrix, column_space_basis, mat_kron, mat_mul, solve_linear
from .rationals import qq


class CharGroupoid:
    "Hom(Gamma, G) with the conjugation action, orbits and stabilizers."

    def __init__(self, presentation, group, homs):
        self.presentation = presentation
        self.group = group
        self.homs = list(homs)
        self.hom_index = {rho: i for i, rho in enumerate(self.homs)}
        self.orbits = conjugation_orbits(self.homs, group)
        card = sum((qq(1, len(o["stabilizer"])) for o in self.orbits), qq(0))
        assert card * group.order == len(self.homs), "orbit-stabilizer identity failed"

    @property
    def cardinality(self):
        "Groupoid cardinality sum(1/|Aut|) as an exact rational."
        return qq(len(self.homs), self.group.order)

    def __len__(self):
        return len(self.homs)

    def __repr__(self):
        return "CharGroupoid(|homs|=%d, orbits=%d)" % (len(self.homs), len(self.orbits))


def build_char_groupoid(presentation, group, max_nodes=None):
    from .groups import DEFAULT_MAX_SEARCH_NODES

    homs = enumerate_homs(
        presentation, group, max_nodes=max_nodes or DEFAULT_MAX_SEARCH_NODES
    )
    return CharGroupoid(presentation, group, homs)


class FixedGroupoid:
    """Objects (rho, g) with rho o phi = g rho g^-1, up to simultaneous conjugation.

    Objects are kept in lexicographic (hom position, group element index)
    order; orbit representatives are minimal in that order.
    """

    def __init__(self, char_groupoid, phi, objects):
        self.base = char_groupoid
        self.phi = phi
        self.group = char_groupoid.group
        self.objects = sorted(
            objects, key=lambda og: (char_groupoid.hom_index[og[0]], og[1])
        )
        self.object_index = {ob: i for i, ob in enumerate(self.objects)}
        self._build_orbits()

    def _key(self, obj):
        return (self.base.hom_index[obj[0]], obj[1])

    def _conj(self, h, obj):
        rho, g = obj
        group = self.group
        return (tuple(group.conj(h, x) for x in rho), group.conj(h, g))

    def _build_orbits(self):
        group = self.group
        seen = set()
        orbits = []
        for obj in self.objects:
            if obj in seen:
                continue
            members = {}
            for h in range(group.order):
                tgt = self._conj(h, obj)
                assert tgt in self.object_index, "fixed locus not conjugation-closed"
                if tgt not in members:
                    members[tgt] = h
            rep = min(members, key=self._key)
            hrep = members[rep]
            aut = [
                h for h in range(group.order) if self._conj(h, rep) == rep
            ]
            mem_sorted = sorted(members, key=self._key)
            transp = {
                m: group.mul(members[m], group.inv(hrep)) for m in mem_sorted
            }
            orbits.append(
                {
                    "representative": rep,
                    "members": mem_sorted,
                    "aut": aut,
                    "transporter": transp,
                }
            )
            seen.update(members)
        self.orbits = orbits
        self.orbit_of = {}
        for i, o in enumerate(orbits):
            for m in o["members"]:
                self.orbit_of[m] = i
        for o in orbits:
            assert len(o["members"]) * len(o["aut"]) == self.group.order

    @property
    def cardinality(self):
        return qq(len(self.objects), self.group.order)

    def __len__(self):
        return len(self.objects)

    def __repr__(self):
        return "FixedGroupoid(|objects|=%d, orbits=%d)" % (
            len(self.objects),
            len(self.orbits),
        )


def fixed_groupoid_pairs(char_groupoid, phi):
    "Enumerate pairs (rho, g) satisfying the defining relation directly."
    group = char_groupoid.group
    objects = []
    for rho in char_groupoid.homs:
        pushed = phi.push_images(rho, group)
        for g in range(group.order):
            if all(group.conj(g, x) == px for x, px in zip(rho, pushed)):
                objects.append((rho, g))
    return FixedGroupoid(char_groupoid, phi, objects)


def fixed_groupoid_torus(presentation, phi, group, char_groupoid=None, max_nodes=None):
    "Build the fixed groupoid through Hom(mapping torus, G)."
    from .groups import DEFAULT_MAX_SEARCH_NODES

    if char_groupoid is None:
        char_groupoid = build_char_groupoid(presentation, group, max_nodes=max_nodes)
    torus = mapping_torus(presentation, phi)
    homs = enumerate_homs(
        torus, group, max_nodes=max_nodes or DEFAULT_MAX_SEARCH_NODES
    )
    objects = [(rho[:-1], rho[-1]) for rho in homs]
    return FixedGroupoid(char_groupoid, phi, objects)


def match_fixed_descriptions(a, b):
    """Verify the two presentations of the fixed groupoid agree object by object.

    Returns a report dict; 'ok' is False on the first discrepancy found.
    """
    report = {"ok": True, "objects": len(a.objects)}

    def fail(reason, detail):
        report.update(ok=False, reason=reason, detail=detail)
        return report

    if a.objects != b.objects:
        extra = set(a.objects) ^ set(b.objects)
        which = next(iter(sorted(extra, key=repr)), None)
        return fail("object sets differ", which)
    if len(a.orbits) != len(b.orbits):
        return fail("orbit counts differ", (len(a.orbits), len(b.orbits)))
    for oa, ob in zip(a.orbits, b.orbits):
        if oa["representative"] != ob["representative"]:
            return fail("orbit representatives differ", (oa["representative"], ob["representative"]))
        if oa["members"] != ob["members"]:
            return fail("orbit members differ", oa["representative"])
        if oa["aut"] != ob["aut"]:
            return fail("stabilizers differ", oa["representative"])
    # the identity bijection intertwines conjugation by construction; spot-check
    group = a.group
    for obj in a.objects:
        for h in group.generators or range(group.order):
            if a._conj(h, obj) != b._conj(h, obj):
                return fail("conjugation actions differ", (obj, h))
    return report


class EquivariantBundle:
    """A bundle on a groupoid: one model fiber, arrows act via leg representations.

    Fibers at all objects are identified with the tensor product of the leg
    spaces; the arrow h acts by the Kronecker product of the r_j(h).
    """

    def __init__(self, base, legs):
        self.base = base
        self.legs = tuple(legs)
        group = base.group
        for r in self.legs:
            if r.group is not group:
                raise ValueError("bundle legs must be representations of the base group")
        self.ctx = self.legs[0].ctx if self.legs else None
        self.fiber_dim = 1
        for r in self.legs:
            self.fiber_dim *= r.dim

    def transport(self, h, ctx=None):
        ctx = ctx or self.ctx
        if not self.legs:
            return FieldMatrix.identity(ctx, 1)
        m = self.legs[0].matrices[h]
        for r in self.legs[1:]:
            m = mat_kron(m, r.matrices[h])
        return m

    def check_functoriality(self, spot=None):
        "transport(h2 h1) = transport(h2) transport(h1) on stabilizer generators."
        group = self.base.group
        pairs = spot or [
            (h2, h1)
            for h2 in group.generators or [group.identity]
            for h1 in group.generators or [group.identity]
        ]
        for h2, h1 in pairs:
            lhs = self.transport(group.mul(h2, h1))
            rhs = mat_mul(self.transport(h2), self.transport(h1))
            assert lhs == rhs, "bundle transport is not functorial"
        assert self.transport(group.identity) == FieldMatrix.identity(
            self.ctx, self.fiber_dim
        )
        return True


def bundle_from_rep(base, reps):
    "Bundle with fiber the tensor product of reps, transports diagonal."
    return EquivariantBundle(base, reps)


class SectionSpace:
    "Per-orbit invariant vectors of a bundle; the global sections."

    def __init__(self, bundle, ctx):
        base = bundle.base
        self.bundle = bundle
        self.ctx = ctx
        self.block_bases = []
        for orbit in base.orbits:
            aut = orbit["aut"]
            if bundle.fiber_dim == 0:
                self.block_bases.append([])
                continue
            acc = FieldMatrix.zero(ctx, bundle.fiber_dim, bundle.fiber_dim)
            for h in aut:
                acc = acc + bundle.transport(h, ctx)
            proj = acc * ctx.from_rational(qq(1, len(aut)))
            assert mat_mul(proj, proj) == proj
            _, cols = column_space_basis(proj)
            self.block_bases.append(cols)
        self.block_dims = [len(b) for b in self.block_bases]
        self.total_dim = sum(self.block_dims)

    def block_coordinates(self, orbit_index, fiber_vector):
        "Coordinates of an invariant fiber vector on the block basis."
        basis = self.block_bases[orbit_index]
        if not basis:
            assert all(not x for x in fiber_vector), "vector outside the block span"
            return ()
        mat = FieldMatrix(self.ctx, list(zip(*basis)))
        sol = solve_linear(mat, fiber_vector)
        assert sol is not None, "vector outside the block span"
        return sol


def sections(bundle, ctx=None):
    ctx = ctx or bundle.ctx
    if ctx is None:
        raise ValueError("a trivial bundle needs an explicit context")
    return SectionSpace(bundle, ctx)


def monodromy(obj, loop, rep, fixed=True):
    """Parallel transport of rep along a loop word.

    For a fixed-groupoid object (rho, g) the loop is a word over the
    mapping-torus generators (Gamma generators then t); for a plain hom it
    is a word over the Gamma generators.
    """
    group = rep.group
    if fixed:
        rho, g = obj
        images = tuple(rho) + (g,)
    else:
        images = tuple(obj)
    elt = evaluate_word(loop, images, group)
    return rep.matrices[elt]
