"""The structured twisted-bimodule calculus against the generic machinery."""

import pytest

from excstack.cyclo import make_context
from excstack.homology import (
    Bimodule,
    bimodule_tensor,
    groupoid_algebra,
    hh0,
    pullback_endo,
    twist_bimodule,
)
from excstack.scenario_io import load_scenario
from excstack.shtuka import REGULAR, trace_space
from excstack.structured import (
    NonInvertiblePullback,
    RegularEngine,
    verify_structured_tensor,
)


def test_structured_hh_matches_generic_twist():
    for name in ("z3-frobenius", "s3-inertia"):
        scen = load_scenario(name)
        alg = scen.algebra()
        theta = pullback_endo(alg, scen.char_groupoid, scen.phi)
        q = twist_bimodule(alg, theta)
        h_generic = hh0(q)
        space = scen.engine.space(())
        h_struct = space.hh()
        assert h_generic.dim == h_struct.dim
        assert h_generic.free == h_struct.free  # same canonical quotient basis


def test_structured_relations_are_twist_commutators():
    scen = load_scenario("z3-frobenius")
    alg = scen.algebra()
    theta = pullback_endo(alg, scen.char_groupoid, scen.phi)
    q = twist_bimodule(alg, theta)
    space = scen.engine.space(())
    one = scen.ctx.one
    # every structured relation must lie in the generic commutator span
    from excstack.linalg import SparseReducer

    red = SparseReducer()
    for i in range(alg.dim):
        for qq_ in range(q.dim):
            rel = dict(q.act_left_vec({i: one}, {qq_: one}))
            for k, v in q.act_right_vec({qq_: one}, {i: one}).items():
                rel[k] = rel.get(k, scen.ctx.zero) - v
            rel = {k: v for k, v in rel.items() if v}
            if rel:
                red.add(rel)
    for rel in space.commutator_relations():
        assert red.contains(rel)


def test_structured_tensor_bimodule_map():
    for name in ("z3-frobenius", "s3-inertia"):
        scen = load_scenario(name)
        engine = scen.engine
        reps = sorted(scen.reps)
        a = scen.reps[reps[0]]
        s_q = engine.space((a,), twist=0)
        s_f = engine.space((), twist=1)
        s_res = engine.space((a,), twist=1)
        assert verify_structured_tensor(s_q, s_f, s_res)
        assert verify_structured_tensor(s_f, s_q, s_res)


def test_structured_tensor_on_two_slot_fibers():
    scen = load_scenario("s3-inertia")
    engine = scen.engine
    std = scen.reps["std"]
    sgn = scen.reps["sign"]
    s_q = engine.space((std,), twist=0)
    s_p = engine.space((sgn,), twist=1)
    s_res = engine.space((std, sgn), twist=1)
    assert verify_structured_tensor(s_q, s_p, s_res)


def test_structured_legged_dims_match_generic_coequalizer():
    scen = load_scenario("s3-inertia")
    from excstack.shtuka import hecke_bimodule, legged_space

    std = scen.reps["std"]
    q_r, q_f, rep = hecke_bimodule(scen, REGULAR, std)
    assert rep["ok"]
    t = bimodule_tensor(q_r, q_f)
    h = hh0(t.bimodule)
    ls = legged_space(scen, REGULAR, (std,))
    assert h.dim == ls.dim == 1


def test_aligned_arrows_carry_fixed_pairs():
    scen = load_scenario("f2-swap")
    engine = scen.engine
    for a in range(engine.n_arrows):
        if engine.aligned(a):
            pair = engine.pair_of_arrow(a)
            assert pair in scen.fixed.object_index
            # the pair satisfies the defining relation
            rho, g = pair
            pushed = scen.phi.push_images(rho, scen.group)
            assert all(
                scen.group.conj(g, x) == px for x, px in zip(rho, pushed)
            )


def test_noninvertible_pullback_refused():
    import json

    doc = {
        "name": "z2-collapse",
        "group": {"degree": 2, "generators": ["(0 1)"]},
        "presentation": {"generators": ["a"], "relators": []},
        "phi": {"a": "a a"},
        "reps": {"trivial": {"kind": "trivial"}},
    }
    from excstack.scenario_io import scenario_from_dict

    scen = scenario_from_dict(doc)
    assert not scen.pullback_invertible
    with pytest.raises(NonInvertiblePullback):
        trace_space(scen)
    from excstack.shtuka import general_trace_space

    g = general_trace_space(scen)
    assert g["orbits"] == 2


def test_operator_shortcut_matches_intermediate_projections():
    # the T composite is assembled on ambient spaces and projected once;
    # inserting section-project at every intermediate HH_0 must not change
    # the matrix (each stage maps commutator spans into commutator spans)
    from excstack.linalg import FieldMatrix
    from excstack.reps import dual
    from excstack.shtuka import T_operator, trace_space
    from excstack.structured import (
        compose_stages,
        contract_front,
        insert_front,
        permute_slots,
        rotate_front_to_back,
    )

    scen = load_scenario("s3-inertia")
    engine = scen.engine
    a = scen.reps["std"]
    adual = dual(a)
    d = a.dim
    ctx = scen.ctx
    carrier = trace_space(scen)
    s_l = carrier.space
    s1 = engine.space((adual, a))
    s2 = engine.space((a, adual))   # after rotation the slots are (a,)+(adual,)
    s2_rot = engine.space((a,) + () + (adual,))
    s3 = engine.space((a, adual))
    coev = {i * d + i: ctx.one for i in range(d)}
    ev = {i * d + i: ctx.one for i in range(d)}
    stages = [
        insert_front(s_l, s1, 2, coev),
        rotate_front_to_back(s1, s2_rot),
        permute_slots(s2_rot, s3, [0, 1]),
        contract_front(s3, s_l, 2, ev),
    ]
    hhs = [carrier.hh, s1.hh(), s2_rot.hh(), s3.hh(), carrier.hh]
    cols_direct = []
    cols_projected = []
    for j in range(carrier.hh.dim):
        vec = carrier.hh.section(j)
        cols_direct.append(carrier.hh.project(compose_stages(stages, vec)))
        cur = carrier.hh.section(j)
        for stage, hh_out in zip(stages, hhs[1:]):
            img = stage(cur)
            coords = hh_out.project(img)
            cur = {}
            for cls, x in coords.items():
                for k, v in hh_out.section(cls).items():
                    cur[k] = cur.get(k, ctx.zero) + x * v
            cur = {k: v for k, v in cur.items() if v}
        cols_projected.append(carrier.hh.project(cur))
    assert cols_direct == cols_projected
    # and the shortcut agrees with the public operator
    t_op = T_operator(scen, REGULAR, a, carrier)
    zero = ctx.zero
    entries = [[zero] * carrier.hh.dim for _ in range(carrier.hh.dim)]
    for j, col in enumerate(cols_direct):
        for i, x in col.items():
            entries[i][j] = x
    assert FieldMatrix(ctx, entries) == t_op.hh_matrix
