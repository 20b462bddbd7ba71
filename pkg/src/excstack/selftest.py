"""The acceptance suite: every structural identity at exact tolerance.

Each criterion function returns a report dict with an "ok" flag; selftest
runs them all against the builtin scenarios (plus seeded random instances)
and prints one pass/fail line per criterion.
"""

import random
import time

from .cyclo import make_context
from .excursion import (
    ExcursionDatum,
    conjugate_loops,
    evaluate_excursion,
    excursion_algebra_span,
    torus_words_up_to,
    xi_from_rep,
    xi_star,
)
from .homology import cyclicity_iso
from .linalg import FieldMatrix, rank_kernel
from .randoms import random_bimodule_pair, random_scenarios
from .rationals import qq
from .scenario_io import builtin_scenarios, load_scenario
from .shtuka import (
    REGULAR,
    chern_check,
    general_trace_space,
    trace_space,
    verify_frobenius_product,
    verify_S_equals_T,
)

RANDOM_SEED = 20260810


def _scenario_reps(scenario, names):
    return [(n, scenario.reps[n]) for n in names]


def criterion_1_st_vacuum(scenarios):
    "S=T, vacuum case, on every builtin scenario and representation."
    details = []
    ok = True
    for scen in scenarios:
        for name, a in _scenario_reps(scen, scen.checks.get("st_reps", list(scen.reps))):
            rep, _, _, _ = verify_S_equals_T(scen, REGULAR, a)
            ok &= rep["ok"]
            details.append(
                {
                    "scenario": scen.name,
                    "rep": name,
                    "ok": rep["ok"],
                    "scalars": rep["per_block_scalars"],
                }
            )
            if not rep["ok"]:
                details[-1]["counterexample"] = rep.get("counterexample")
    return {"criterion": 1, "title": "S=T (vacuum)", "ok": ok, "cases": details}


def criterion_2_st_legs(scenarios):
    "S=T with one and two legs drawn from the builtin representations."
    details = []
    ok = True
    for scen in scenarios:
        legsets = scen.checks.get("st_legs", [])
        for leg_names in legsets:
            legs = tuple(scen.reps[n] for n in leg_names)
            for name, a in _scenario_reps(
                scen, scen.checks.get("st_reps", list(scen.reps))
            ):
                rep, _, _, _ = verify_S_equals_T(scen, REGULAR, a, legs=legs)
                ok &= rep["ok"]
                details.append(
                    {
                        "scenario": scen.name,
                        "legs": list(leg_names),
                        "rep": name,
                        "carrier_dim": rep["carrier_dim"],
                        "ok": rep["ok"],
                    }
                )
    return {"criterion": 2, "title": "S=T (with legs)", "ok": ok, "cases": details}


def criterion_3_two_traces(scenarios, n_random=20):
    "HH and sections pipelines agree, with an invertible comparison iso."
    details = []
    ok = True
    randoms = random_scenarios(RANDOM_SEED, n_random)
    for scen in list(scenarios) + randoms:
        entry = {"scenario": scen.name}
        try:
            if scen.pullback_invertible:
                ts = trace_space(scen)
                entry.update(dim=ts.dim, pipeline="structured")
            else:
                g = general_trace_space(scen)
                entry.update(dim=g["orbits"], pipeline="general")
            entry["ok"] = True
        except AssertionError as e:
            entry.update(ok=False, error=str(e))
            ok = False
        details.append(entry)
    return {
        "criterion": 3,
        "title": "two-trace agreement (builtins + %d random)" % n_random,
        "ok": ok,
        "cases": details,
    }


def criterion_4_generation():
    "Excursion span = all class functions, against the character-matrix rank."
    details = []
    ok = True
    for name, rep_names, max_len in (
        ("s3-inertia", ("trivial", "sign", "std"), 1),
        ("z3-frobenius", ("chi1",), 1),
    ):
        scen = load_scenario(name)
        gens = [scen.reps[n] for n in rep_names]
        out = excursion_algebra_span(scen.fixed, gens, max_len)
        # independent oracle: rank of the matrix of character products
        ctx = scen.ctx
        chis = [a.character() for a in gens]
        rows = []
        words = torus_words_up_to(scen.presentation.ngens + 1, max_len)
        from .groups import evaluate_word

        for chi_row in chis:
            for w1 in words:
                for w2 in words:
                    row = []
                    for orbit in scen.fixed.orbits:
                        rho, g = orbit["representative"]
                        images = tuple(rho) + (g,)
                        e1 = evaluate_word(w1, images, scen.group)
                        e2 = evaluate_word(w2, images, scen.group)
                        row.append(
                            chi_row.value_at_element(e1)
                            * chi_row.value_at_element(e2).conj()
                        )
                    rows.append(row)
        rank, _ = rank_kernel(FieldMatrix(ctx, rows))
        good = (
            out["dimension"] == out["orbit_count"] == rank
            and out["gap"] is None
        )
        ok &= good
        details.append(
            {
                "scenario": name,
                "span_dim": out["dimension"],
                "orbits": out["orbit_count"],
                "character_rank": rank,
                "ok": good,
            }
        )
    return {"criterion": 4, "title": "excursion generation", "ok": ok, "cases": details}


def criterion_5_chern():
    "Hattori-Stallings class = tautological excursion = character values."
    details = []
    ok = True
    for name in ("s3-inertia", "z4-inertia"):
        scen = load_scenario(name)
        for rep_name in scen.checks.get("chern_reps", list(scen.reps)):
            rep = chern_check(scen, scen.reps[rep_name])
            ok &= rep["ok"]
            details.append(
                {
                    "scenario": name,
                    "rep": rep_name,
                    "values": rep["character_values"],
                    "ok": rep["ok"],
                }
            )
    return {"criterion": 5, "title": "Chern = tautological excursion", "ok": ok, "cases": details}


def criterion_6_cyclicity(n_trials=50):
    "Random bimodule pairs: the flip descends, inverts, and squares to id."
    rng = random.Random(RANDOM_SEED + 6)
    ctx = make_context(1)
    ok = True
    failures = []
    for trial in range(n_trials):
        q, p = random_bimodule_pair(ctx, rng)
        try:
            cyclicity_iso(q, p, check_descent=True)
        except AssertionError as e:
            ok = False
            failures.append({"trial": trial, "error": str(e)})
    return {
        "criterion": 6,
        "title": "cyclicity (%d random bimodule pairs)" % n_trials,
        "ok": ok,
        "failures": failures,
    }


def criterion_7_partial_frobenius(scenarios):
    "Two-legged spaces: distinct legs commute; product = global monodromy."
    details = []
    ok = True
    for scen in scenarios:
        for leg_names in scen.checks.get("st_legs", []):
            if len(leg_names) != 2:
                continue
            legs = tuple(scen.reps[n] for n in leg_names)
            rep = verify_frobenius_product(scen, REGULAR, legs)
            ok &= rep["ok"]
            details.append(
                {
                    "scenario": scen.name,
                    "legs": list(leg_names),
                    "carrier_dim": rep["carrier_dim"],
                    "ok": rep["ok"],
                }
            )
    return {"criterion": 7, "title": "partial Frobenius", "ok": ok, "cases": details}


def criterion_8_enumeration(scenarios, n_random=20):
    "Burnside / orbit-stabilizer identities; the two fixed-locus builds match."
    details = []
    ok = True
    randoms = random_scenarios(RANDOM_SEED, n_random)
    for scen in list(scenarios) + randoms:
        g = scen.group
        card = sum(
            (qq(1, len(o["stabilizer"])) for o in scen.char_groupoid.orbits), qq(0)
        )
        burnside = card * g.order == len(scen.char_groupoid.homs)
        fterms = sum((qq(1, len(o["aut"])) for o in scen.fixed.orbits), qq(0))
        fcard = fterms * g.order == len(scen.fixed.objects)
        match = scen.match_report["ok"]
        good = burnside and fcard and match
        ok &= good
        details.append(
            {
                "scenario": scen.name,
                "homs": len(scen.char_groupoid.homs),
                "fixed_objects": len(scen.fixed.objects),
                "burnside": burnside,
                "fixed_cardinality": fcard,
                "presentations_match": match,
                "ok": good,
            }
        )
    return {"criterion": 8, "title": "enumeration invariants", "ok": ok, "cases": details}


def criterion_9_excursion_laws(scenarios, n_trials=100):
    "Star-product multiplicativity and simultaneous-conjugation invariance."
    rng = random.Random(RANDOM_SEED + 9)
    ok = True
    failures = []
    pool = [s for s in scenarios if s.pullback_invertible]
    for trial in range(n_trials):
        scen = pool[rng.randrange(len(pool))]
        names = sorted(scen.reps)
        a1 = scen.reps[names[rng.randrange(len(names))]]
        a2 = scen.reps[names[rng.randrange(len(names))]]
        xi1, xi2 = xi_from_rep(a1), xi_from_rep(a2)
        ngens = scen.presentation.ngens + 1
        loops = tuple(
            tuple(
                (rng.randrange(ngens), rng.choice((1, -1)))
                for _ in range(rng.randint(0, 3))
            )
            for _ in range(2)
        )
        d1 = ExcursionDatum(xi1, loops)
        d2 = ExcursionDatum(xi2, loops)
        ds = ExcursionDatum(xi_star(xi1, xi2), loops)
        f1 = evaluate_excursion(d1, scen.fixed)
        f2 = evaluate_excursion(d2, scen.fixed)
        fs = evaluate_excursion(ds, scen.fixed)
        mult = fs.values == tuple(x * y for x, y in zip(f1.values, f2.values))
        delta = tuple(
            (rng.randrange(ngens), rng.choice((1, -1)))
            for _ in range(rng.randint(0, 2))
        )
        fconj = evaluate_excursion(conjugate_loops(d1, delta), scen.fixed)
        inv = fconj.values == f1.values
        if not (mult and inv):
            ok = False
            failures.append(
                {"trial": trial, "scenario": scen.name, "mult": mult, "conj": inv}
            )
    return {
        "criterion": 9,
        "title": "excursion algebra laws (%d random data)" % n_trials,
        "ok": ok,
        "failures": failures,
    }


def run_selftest(out=print, budget_seconds=180.0):
    "Run all acceptance criteria; returns the overall report."
    t_start = time.time()
    scenarios = builtin_scenarios()
    reports = []
    steps = [
        lambda: criterion_1_st_vacuum(scenarios),
        lambda: criterion_2_st_legs(scenarios),
        lambda: criterion_3_two_traces(scenarios),
        criterion_4_generation,
        criterion_5_chern,
        criterion_6_cyclicity,
        lambda: criterion_7_partial_frobenius(scenarios),
        lambda: criterion_8_enumeration(scenarios),
        lambda: criterion_9_excursion_laws(scenarios),
    ]
    for step in steps:
        t0 = time.time()
        rep = step()
        rep["seconds"] = round(time.time() - t0, 2)
        reports.append(rep)
        out(
            "%s criterion %d: %s (%.2fs)"
            % ("PASS" if rep["ok"] else "FAIL", rep["criterion"], rep["title"],
               rep["seconds"])
        )
    total = time.time() - t_start
    within = total < budget_seconds
    reports.append(
        {
            "criterion": 10,
            "title": "selftest wall time < %ds" % int(budget_seconds),
            "ok": within,
            "seconds": round(total, 2),
        }
    )
    out(
        "%s criterion 10: total %.1fs < %ds"
        % ("PASS" if within else "FAIL", total, int(budget_seconds))
    )
    return {"ok": all(r["ok"] for r in reports), "criteria": reports,
            "seconds": round(total, 2)}
