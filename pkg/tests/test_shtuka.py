import pytest

from excstack.cyclo import make_context
from excstack.excursion import ExcursionDatum, xi_from_rep
from excstack.linalg import FieldMatrix, mat_mul
from excstack.reps import direct_sum, tensor
from excstack.scenario_io import load_scenario, scenario_from_dict
from excstack.shtuka import (
    REGULAR,
    BundleModel,
    CarrierSpace,
    S_operator,
    ScenarioError,
    T_block_oracle,
    T_operator,
    chern_check,
    excursion_action_check,
    general_trace_space,
    hecke_bimodule,
    legged_space,
    partial_frobenius,
    trace_space,
    verify_frobenius_product,
    verify_S_equals_T,
)


def test_trace_space_dims():
    z3 = load_scenario("z3-frobenius")
    ts = trace_space(z3)
    assert ts.dim == 3 and ts.block_dims == [1, 1, 1]
    s3 = load_scenario("s3-inertia")
    assert trace_space(s3).dim == 3
    f2 = load_scenario("f2-swap")
    tf = trace_space(f2)
    assert tf.dim == len(f2.fixed.orbits)


def test_t_operator_z3_pinned_diagonal():
    scen = load_scenario("z3-frobenius")
    ctx = scen.ctx
    carrier = trace_space(scen)
    t_op = T_operator(scen, REGULAR, scen.reps["chi1"], carrier)
    z = ctx.zeta_power(1)
    diag = [t_op.block_matrix.entries[i][i] for i in range(3)]
    assert diag == [ctx.one, z, z * z]
    # off-diagonal vanishes
    for i in range(3):
        for j in range(3):
            if i != j:
                assert not t_op.block_matrix.entries[i][j]


def test_t_trivial_is_identity():
    for name in ("z3-frobenius", "s3-inertia", "f2-swap"):
        scen = load_scenario(name)
        carrier = trace_space(scen)
        t_op = T_operator(scen, REGULAR, scen.reps["trivial"], carrier)
        assert t_op.block_matrix == FieldMatrix.identity(scen.ctx, carrier.dim)


def test_t_additive_and_multiplicative():
    scen = load_scenario("s3-inertia")
    carrier = trace_space(scen)
    std, sgn = scen.reps["std"], scen.reps["sign"]
    t_std = T_operator(scen, REGULAR, std, carrier)
    t_sgn = T_operator(scen, REGULAR, sgn, carrier)
    t_sum = T_operator(scen, REGULAR, direct_sum(std, sgn), carrier)
    assert t_sum.block_matrix == t_std.block_matrix + t_sgn.block_matrix
    t_prod = T_operator(scen, REGULAR, tensor(std, sgn), carrier)
    assert t_prod.block_matrix == mat_mul(t_std.block_matrix, t_sgn.block_matrix)


def test_s_equals_t_everywhere():
    for name in ("z3-frobenius", "s3-inertia", "f2-swap"):
        scen = load_scenario(name)
        for rep_name, a in scen.reps.items():
            out, carrier, t_op, s_op = verify_S_equals_T(scen, REGULAR, a)
            assert out["ok"], (name, rep_name, out)
            oracle = T_block_oracle(scen, a, carrier)
            assert t_op.block_matrix == oracle


def test_s_equals_t_with_legs():
    scen = load_scenario("s3-inertia")
    std, sgn = scen.reps["std"], scen.reps["sign"]
    for legs in ((std,), (sgn,), (std, sgn)):
        for a in scen.reps.values():
            out, _, _, _ = verify_S_equals_T(scen, REGULAR, a, legs=legs)
            assert out["ok"], out


def test_legged_dims_from_section_oracle():
    # s3-inertia one std leg: invariants of std under the centralizers:
    # dims (0, 1, 0), total 1
    scen = load_scenario("s3-inertia")
    ls = legged_space(scen, REGULAR, (scen.reps["std"],))
    assert ls.block_dims == [0, 1, 0] and ls.dim == 1
    # z3-frobenius one chi1 leg: Aut = Z/3 acts by chi1 on the fiber at
    # every forced fixed point, so there are no invariants at all
    z3 = load_scenario("z3-frobenius")
    lz = legged_space(z3, REGULAR, (z3.reps["chi1"],))
    assert lz.block_dims == [0, 0, 0] and lz.dim == 0
    # chi1 (x) chi2 legs carry a trivial total action: full blocks
    lz2 = legged_space(z3, REGULAR, (z3.reps["chi1"], z3.reps["chi2"]))
    assert lz2.dim == 3
    # empty legs coincide with the trace space
    assert legged_space(scen, REGULAR, ()).dim == trace_space(scen).dim


def test_partial_frobenius_and_monodromy():
    for name in ("z3-frobenius", "s3-inertia", "f2-swap"):
        scen = load_scenario(name)
        leg_lists = scen.checks.get("st_legs", [])
        for leg_names in leg_lists:
            legs = tuple(scen.reps[n] for n in leg_names)
            out = verify_frobenius_product(scen, REGULAR, legs)
            assert out["ok"], (name, leg_names, out)


def test_partial_frobenius_block_values():
    z3 = load_scenario("z3-frobenius")
    legs = (z3.reps["chi1"], z3.reps["chi2"])
    carrier = CarrierSpace(z3, REGULAR, legs)
    op = partial_frobenius(z3, REGULAR, carrier, 0)
    ctx = z3.ctx
    z = ctx.zeta_power(1)
    diag = [op.block_matrix.entries[i][i] for i in range(3)]
    # blocks ordered by t-image 0,1,2: chi1(t) = 1, z, z^2
    assert diag == [ctx.one, z, z * z]


def test_zero_dimensional_carrier_is_fine():
    z3 = load_scenario("z3-frobenius")
    out, carrier, t_op, s_op = verify_S_equals_T(
        z3, REGULAR, z3.reps["chi1"], legs=(z3.reps["chi1"],)
    )
    assert carrier.dim == 0 and out["ok"]


def test_chern_requires_inertia_shape():
    z3 = load_scenario("z3-frobenius")
    with pytest.raises(ScenarioError):
        chern_check(z3, z3.reps["chi1"])


def test_chern_values():
    s3 = load_scenario("s3-inertia")
    out = chern_check(s3, s3.reps["std"])
    assert out["ok"] and out["character_values"] == ["2", "0", "-1"]
    z4 = load_scenario("z4-inertia")
    out = chern_check(z4, z4.reps["chi1"])
    assert out["ok"]
    assert out["character_values"] == ["1", "[0, 1] @ zeta(4)", "-1", "[0, -1] @ zeta(4)"]


def test_excursion_action_checks():
    s3 = load_scenario("s3-inertia")
    d = ExcursionDatum(xi_from_rep(s3.reps["std"]), (s3.t_word(), ()))
    out = excursion_action_check(s3, REGULAR, d)
    assert out["ok"] and out["values"] == ["2", "0", "-1"]
    # trivial loops: scalar vstar(v) = dim
    d0 = ExcursionDatum(xi_from_rep(s3.reps["std"]), ((), ()))
    out0 = excursion_action_check(s3, REGULAR, d0)
    assert out0["ok"] and out0["values"] == ["2", "2", "2"]
    # a datum with Gamma letters on a scenario with nontrivial rho
    f2 = load_scenario("f2-swap")
    d2 = ExcursionDatum(
        xi_from_rep(f2.reps["std"]),
        (f2.parse_torus_word("a t b^-1"), f2.parse_torus_word("t")),
    )
    out2 = excursion_action_check(f2, REGULAR, d2)
    assert out2["ok"], out2


def test_hecke_bimodule_report():
    s3 = load_scenario("s3-inertia")
    q_r, q_f, rep = hecke_bimodule(s3, REGULAR, s3.reps["std"])
    assert rep["ok"] and rep["dim"] == 12
    assert rep["verified"] == "exhaustive"
    # trivial rep gives the regular-bimodule dimension
    q_t, _, rep_t = hecke_bimodule(s3, REGULAR, s3.reps["trivial"])
    assert rep_t["dim"] == s3.algebra().dim


def test_bundle_model():
    s3 = load_scenario("s3-inertia")
    model = BundleModel((s3.reps["sign"],))
    assert model.validate(s3)["ok"]
    ts = trace_space(s3, model)
    # blocks: sign invariants under the centralizers: (0, 0, 1)
    assert ts.block_dims == [0, 0, 1] and ts.dim == 1
    out, carrier, t_op, s_op = verify_S_equals_T(s3, model, s3.reps["std"])
    assert out["ok"]
    d = ExcursionDatum(xi_from_rep(s3.reps["std"]), (s3.t_word(), ()))
    ea = excursion_action_check(s3, model, d)
    assert ea["ok"]


def test_general_trace_space_on_collapse():
    doc = {
        "name": "z2-collapse",
        "group": {"degree": 2, "generators": ["(0 1)"]},
        "presentation": {"generators": ["a"], "relators": []},
        "phi": {"a": "a a"},
        "reps": {"trivial": {"kind": "trivial"}},
    }
    scen = scenario_from_dict(doc)
    g = general_trace_space(scen)
    assert g["orbits"] == len(scen.fixed.orbits) == 2


def test_single_leg_frobenius_is_tautological():
    s3 = load_scenario("s3-inertia")
    out = verify_frobenius_product(s3, REGULAR, (s3.reps["std"],))
    assert out["ok"]
    # with phi = id the partial Frobenius is the monodromy of t itself
    from excstack.shtuka import global_monodromy

    carrier = CarrierSpace(s3, REGULAR, (s3.reps["std"],))
    pf = partial_frobenius(s3, REGULAR, carrier, 0)
    mono = global_monodromy(s3, REGULAR, carrier)
    assert pf.block_matrix == mono.block_matrix


def test_zero_legs_product_is_identity_on_trace_space():
    s3 = load_scenario("s3-inertia")
    out = verify_frobenius_product(s3, REGULAR, ())
    assert out["ok"] and out["carrier_dim"] == 3


def test_bundle_model_two_slots():
    s3 = load_scenario("s3-inertia")
    model = BundleModel((s3.reps["std"], s3.reps["sign"]))
    assert model.validate(s3)["ok"]
    ts = trace_space(s3, model)
    # fiber = std (x) sign; invariants per centralizer: e: 0, tau: dim 1
    # (std|<tau> = triv + sign, tensored by sign has one trivial line),
    # 3-cycle: 0
    assert ts.dim == ts.hh.dim == sum(ts.block_dims)
    out, _, _, _ = verify_S_equals_T(s3, model, s3.reps["sign"])
    assert out["ok"]
    fr = verify_frobenius_product(s3, model, (s3.reps["sign"],))
    assert fr["ok"]


def test_excursion_action_with_inverse_t():
    f2 = load_scenario("f2-swap")
    d = ExcursionDatum(
        xi_from_rep(f2.reps["std"]),
        (f2.parse_torus_word("t^-1"), f2.parse_torus_word("a t^-2 a^-1")),
    )
    out = excursion_action_check(f2, REGULAR, d)
    assert out["ok"], out


def test_identity_twist_trace_counts_stabilizer_classes():
    # for phi = id, fixed orbits are pairs ([rho], conjugacy class of the
    # stabilizer): Hom(Z, S3) gives 3 + 2 + 3 = 8
    doc = {
        "name": "z-s3-id",
        "group": {"degree": 3, "generators": ["(0 1)", "(0 1 2)"]},
        "presentation": {"generators": ["a"], "relators": []},
        "reps": {"trivial": {"kind": "trivial"}},
    }
    scen = scenario_from_dict(doc)
    ts = trace_space(scen)
    assert ts.dim == 8
    # independent count: sum over hom-orbits of the class count of the
    # stabilizer subgroup
    total = 0
    for orbit in scen.char_groupoid.orbits:
        stab = orbit["stabilizer"]
        seen = set()
        classes = 0
        for x in stab:
            if x in seen:
                continue
            classes += 1
            for h in stab:
                seen.add(scen.group.conj(h, x))
        total += classes
    assert total == 8


def test_bundle_model_explicit_fmaps():
    from excstack.linalg import FieldMatrix

    s3 = load_scenario("s3-inertia")
    ctx = s3.ctx
    rho = s3.char_groupoid.homs[0]
    # a central (scalar) f commutes with every transport
    good = BundleModel(
        (s3.reps["std"],),
        fmaps={rho: FieldMatrix.from_rows(ctx, [[2, 0], [0, 2]])},
    )
    out = good.validate(s3)
    assert out["ok"]
    # a non-central f fails the compatibility check
    bad = BundleModel(
        (s3.reps["std"],),
        fmaps={rho: FieldMatrix.from_rows(ctx, [[1, 1], [0, 1]])},
    )
    out = bad.validate(s3)
    assert not out["ok"]
