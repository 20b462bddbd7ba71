"""Wider-coverage scenarios: deep cyclotomic arithmetic, big hom sets,
higher-order endomorphisms, and randomized operator checks."""

import random

from excstack.scenario_io import scenario_from_dict
from excstack.shtuka import (
    REGULAR,
    trace_space,
    verify_frobenius_product,
    verify_S_equals_T,
)


def test_z5_frobenius_degree_four_arithmetic():
    scen = scenario_from_dict({
        "name": "z5-frobenius",
        "group": {"degree": 5, "generators": ["(0 1 2 3 4)"]},
        "presentation": {"generators": ["a"], "relators": []},
        "phi": {"a": "a a"},
        "reps": {"trivial": {"kind": "trivial"},
                 "chi1": {"kind": "abelian_character", "k": 1}},
    })
    assert scen.ctx.degree == 4
    assert trace_space(scen).dim == 5
    out, _, _, _ = verify_S_equals_T(scen, REGULAR, scen.reps["chi1"])
    assert out["ok"]
    # blocks ordered by t-image: chi1 takes the five 5th roots of unity
    assert out["per_block_scalars"] == [
        "1",
        "[0, 1, 0, 0] @ zeta(5)",
        "[0, 0, 1, 0] @ zeta(5)",
        "[0, 0, 0, 1] @ zeta(5)",
        "[-1, -1, -1, -1] @ zeta(5)",
    ]


def test_z12_frobenius():
    scen = scenario_from_dict({
        "name": "z12-frobenius",
        "group": {"degree": 12,
                  "generators": ["(0 1 2 3 4 5 6 7 8 9 10 11)"]},
        "presentation": {"generators": ["a"], "relators": []},
        "phi": {"a": "a^5"},
        "reps": {"chi1": {"kind": "abelian_character", "k": 1}},
    })
    assert scen.ctx.n == 12
    # 5c = c mod 12 forces 4c = 0: four fixed homs, each with all of Z/12
    ts = trace_space(scen)
    assert ts.dim == 48
    out, _, _, _ = verify_S_equals_T(scen, REGULAR, scen.reps["chi1"])
    assert out["ok"]


def test_order_three_endomorphism_on_free_group():
    scen = scenario_from_dict({
        "name": "f3-rotate",
        "group": {"degree": 3, "generators": ["(0 1)", "(0 1 2)"]},
        "presentation": {"generators": ["a", "b", "c"], "relators": []},
        "phi": {"a": "b", "b": "c", "c": "a"},
        "reps": {
            "trivial": {"kind": "trivial"},
            "std": {"kind": "matrices", "matrices": [
                [["-1", "1"], ["0", "1"]],
                [["-1", "1"], ["-1", "0"]],
            ]},
        },
    })
    assert len(scen.char_groupoid.homs) == 216
    ts = trace_space(scen)
    assert ts.dim == len(scen.fixed.orbits) == 9
    for a in scen.reps.values():
        out, _, _, _ = verify_S_equals_T(scen, REGULAR, a)
        assert out["ok"], out
    fr = verify_frobenius_product(
        scen, REGULAR, (scen.reps["std"], scen.reps["std"])
    )
    assert fr["ok"]


def test_random_scenarios_satisfy_s_equals_t():
    # seeded random scenarios with a bijective pullback must satisfy S=T
    # with the permutation representation of their group
    from excstack.randoms import random_scenarios
    from excstack.reps import builtin_rep

    scens = [
        s for s in random_scenarios(424242, 12, max_homs=16)
        if s.pullback_invertible and s.group.degree <= 4
    ][:6]
    assert scens, "seed produced no usable scenarios"
    for scen in scens:
        perm = builtin_rep(scen.group, "permutation", scen.ctx)
        out, _, _, _ = verify_S_equals_T(scen, REGULAR, perm)
        assert out["ok"], (scen.name, out)
        fr = verify_frobenius_product(scen, REGULAR, (perm,))
        assert fr["ok"], (scen.name, fr)
