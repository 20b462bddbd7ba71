import pytest

from excstack.cyclo import make_context
from excstack.groups import (
    Endomorphism,
    Presentation,
    group_from_permutations,
    parse_cycles,
    parse_word,
)
from excstack.linalg import FieldMatrix
from excstack.rationals import qq
from excstack.reps import builtin_rep, rep_from_generator_matrices
from excstack.stacks import (
    build_char_groupoid,
    bundle_from_rep,
    fixed_groupoid_pairs,
    fixed_groupoid_torus,
    match_fixed_descriptions,
    monodromy,
    sections,
)

C1 = make_context(1)


def s3():
    return group_from_permutations(
        3, [parse_cycles("(0 1)", 3), parse_cycles("(0 1 2)", 3)]
    )


def z3():
    return group_from_permutations(3, [parse_cycles("(0 1 2)", 3)])


def std_rep(g, ctx=C1):
    return rep_from_generator_matrices(g, ctx, [
        FieldMatrix.from_rows(ctx, [[-1, 1], [0, 1]]),
        FieldMatrix.from_rows(ctx, [[-1, 1], [-1, 0]]),
    ])


def test_char_groupoid():
    g = s3()
    c = build_char_groupoid(Presentation.parse(["a"], []), g)
    assert len(c.orbits) == 3
    assert sorted(len(o["stabilizer"]) for o in c.orbits) == [2, 3, 6]
    c2 = build_char_groupoid(Presentation.parse(["a", "b"], []), g)
    assert len(c2.orbits) == 11
    assert c2.cardinality == qq(36, 6)
    c3 = build_char_groupoid(Presentation.parse([], []), g)
    assert len(c3.orbits) == 1 and len(c3.orbits[0]["stabilizer"]) == 6


def test_fixed_groupoid_inertia():
    g = s3()
    pres = Presentation.parse([], [])
    c = build_char_groupoid(pres, g)
    f = fixed_groupoid_pairs(c, Endomorphism.identity(pres))
    assert len(f.objects) == 6
    assert len(f.orbits) == 3  # conjugacy classes: the inertia groupoid
    assert f.cardinality == qq(1)


def test_fixed_groupoid_frobenius_square():
    z = z3()
    pres = Presentation.parse(["a"], [])
    c = build_char_groupoid(pres, z)
    phi = Endomorphism.parse(pres, {"a": "a a"})
    f = fixed_groupoid_pairs(c, phi)
    # rho(a) is forced trivial, t free: 3 singleton orbits with Aut = Z/3
    assert len(f.objects) == 3
    assert len(f.orbits) == 3
    assert all(len(o["aut"]) == 3 for o in f.orbits)


def test_fixed_groupoid_empty_is_legal():
    z4 = group_from_permutations(4, [parse_cycles("(0 1 2 3)", 4)])
    pres = Presentation.parse(["a"], ["a a a a"])
    c = build_char_groupoid(pres, z4)
    # phi: a -> a^2; rho(a)=c needs 2c = c, i.e. c = 0... that is nonempty;
    # use relator a^4 with phi a -> a^3 on the order-4 class only:
    # rho(a^3) = 3c = c forces 2c = 0: c in {0, 2}; never empty for abelian.
    # Build emptiness with a nonabelian target instead:
    g = s3()
    pres2 = Presentation.parse(["a"], ["a a"])
    c2 = build_char_groupoid(pres2, g)
    phi2 = Endomorphism.parse(pres2, {"a": "a"})
    f2 = fixed_groupoid_pairs(c2, phi2)
    assert len(f2.objects) > 0  # sanity
    # a genuinely empty case: Gamma = <a | a^3>, G = Z/3, phi: a -> a,
    # but restricted to pairs with rho nontrivial... emptiness cannot be
    # forced here; instead check the machinery tolerates a filtered-empty
    # groupoid directly.
    f3 = fixed_groupoid_pairs(c2, phi2)
    f3.objects = []
    f3.object_index = {}
    f3._build_orbits()
    assert len(f3.orbits) == 0 and f3.cardinality == qq(0, 1)


def test_pairs_vs_torus_presentations_agree():
    g = s3()
    cases = [
        (Presentation.parse([], []), {}),
        (Presentation.parse(["a"], []), {"a": "a a"}),
        (Presentation.parse(["a", "b"], []), {"a": "b", "b": "a"}),
        (Presentation.parse(["a"], ["a a"]), {"a": "a"}),
    ]
    for pres, phimap in cases:
        phi = Endomorphism.parse(pres, phimap)
        c = build_char_groupoid(pres, g)
        f1 = fixed_groupoid_pairs(c, phi)
        f2 = fixed_groupoid_torus(pres, phi, g, char_groupoid=c)
        rep = match_fixed_descriptions(f1, f2)
        assert rep["ok"], rep


def test_match_detects_corruption():
    g = z3()
    pres = Presentation.parse(["a"], [])
    c = build_char_groupoid(pres, g)
    phi = Endomorphism.identity(pres)
    f1 = fixed_groupoid_pairs(c, phi)
    f2 = fixed_groupoid_torus(pres, phi, g, char_groupoid=c)
    f2.objects = f2.objects[:-1]  # corrupt
    rep = match_fixed_descriptions(f1, f2)
    assert not rep["ok"]
    assert rep["reason"] == "object sets differ"


def test_z_phi_id_z2_gives_four_objects():
    z2 = group_from_permutations(2, [parse_cycles("(0 1)", 2)])
    pres = Presentation.parse(["a"], [])
    f = fixed_groupoid_torus(pres, Endomorphism.identity(pres), z2)
    assert len(f.objects) == 4  # Hom(Z^2, Z/2)


def test_bundle_and_sections():
    g = s3()
    pres = Presentation.parse([], [])
    c = build_char_groupoid(pres, g)
    f = fixed_groupoid_pairs(c, Endomorphism.identity(pres))
    std = std_rep(g)
    e = bundle_from_rep(f, [std])
    assert e.fiber_dim == 2
    e.check_functoriality()
    s = sections(e)
    assert s.block_dims == [0, 1, 0]
    # trivial line bundle: dim = number of orbits
    triv_bundle = bundle_from_rep(f, [])
    st = sections(triv_bundle, ctx=C1)
    assert st.block_dims == [1, 1, 1]
    # two legs via Kronecker
    e2 = bundle_from_rep(f, [std, std])
    assert e2.fiber_dim == 4


def test_section_dims_match_character_oracle():
    # per orbit [g], dim of invariants = <chi restricted to Z(g), 1>
    from excstack.reps import inner_product, restrict_along, builtin_rep
    from excstack.groups import group_from_permutations

    g = s3()
    pres = Presentation.parse([], [])
    c = build_char_groupoid(pres, g)
    f = fixed_groupoid_pairs(c, Endomorphism.identity(pres))
    std = std_rep(g)
    s = sections(bundle_from_rep(f, [std]))
    for orbit, dim in zip(f.orbits, s.block_dims):
        aut = orbit["aut"]
        avg = C1.zero
        for h in aut:
            avg = avg + std.character().value_at_element(h)
        assert avg == C1.from_rational(dim * len(aut))


def test_monodromy():
    g = s3()
    pres = Presentation.parse([], [])
    c = build_char_groupoid(pres, g)
    f = fixed_groupoid_pairs(c, Endomorphism.identity(pres))
    std = std_rep(g)
    t_loop = parse_word("t", ["t"])
    obj = f.orbits[1]["representative"]
    assert monodromy(obj, t_loop, std) == std.matrices[obj[1]]
    assert monodromy(obj, (), std) == FieldMatrix.identity(C1, 2)
