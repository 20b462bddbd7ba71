"""Scenario files: a strict JSON schema, loading, and the builtin registry.

Unknown keys are rejected and every error cites the offending key path.
The cyclotomic conductor of a scenario is the least n making all scenario
data representable: the lcm of |G| over abelian characters, of the
conductors mentioned by matrix entries, and of any excursion literals.
"""

import json
from importlib import resources
from math import lcm

from .cyclo import literal_conductor, make_context, parse_cyclotomic
from .groups import (
    DEFAULT_MAX_GROUP_ORDER,
    DEFAULT_MAX_SEARCH_NODES,
    Endomorphism,
    Presentation,
    group_from_permutations,
    parse_cycles,
)
from .linalg import FieldMatrix
from .reps import builtin_rep, rep_from_generator_matrices
from .shtuka import Scenario

BUILTIN_NAMES = ("z3-frobenius", "s3-inertia", "f2-swap", "z4-inertia")


class SchemaError(ValueError):
    pass


def _want(obj, typ, path):
    if not isinstance(obj, typ):
        raise SchemaError("%s: expected %s, got %s" % (path, typ.__name__, type(obj).__name__))
    return obj


def _check_keys(obj, allowed, required, path):
    _want(obj, dict, path)
    unknown = set(obj) - set(allowed)
    if unknown:
        raise SchemaError("%s: unknown keys %s" % (path, sorted(unknown)))
    missing = set(required) - set(obj)
    if missing:
        raise SchemaError("%s: missing keys %s" % (path, sorted(missing)))


REP_KINDS = ("trivial", "permutation", "regular", "abelian_character", "matrices")


def validate_scenario_dict(doc, path="scenario"):
    _check_keys(
        doc,
        ("name", "group", "presentation", "phi", "reps", "checks", "conductor",
         "excursion"),
        ("name", "group", "presentation", "reps"),
        path,
    )
    _want(doc["name"], str, path + ".name")
    g = doc["group"]
    _check_keys(g, ("degree", "generators"), ("degree", "generators"), path + ".group")
    _want(g["degree"], int, path + ".group.degree")
    _want(g["generators"], list, path + ".group.generators")
    for i, s in enumerate(g["generators"]):
        _want(s, str, path + ".group.generators[%d]" % i)
    p = doc["presentation"]
    _check_keys(p, ("generators", "relators"), ("generators",), path + ".presentation")
    _want(p["generators"], list, path + ".presentation.generators")
    for i, s in enumerate(p["generators"]):
        _want(s, str, path + ".presentation.generators[%d]" % i)
    for i, s in enumerate(p.get("relators", [])):
        _want(s, str, path + ".presentation.relators[%d]" % i)
    if "phi" in doc:
        _want(doc["phi"], dict, path + ".phi")
        for k, v in doc["phi"].items():
            _want(v, str, path + ".phi.%s" % k)
    _want(doc["reps"], dict, path + ".reps")
    if not doc["reps"]:
        raise SchemaError(path + ".reps: at least one representation is required")
    for name, spec in doc["reps"].items():
        rp = path + ".reps.%s" % name
        _check_keys(spec, ("kind", "k", "matrices"), ("kind",), rp)
        if spec["kind"] not in REP_KINDS:
            raise SchemaError("%s.kind: unknown kind %r" % (rp, spec["kind"]))
        if spec["kind"] == "abelian_character" and "k" not in spec:
            raise SchemaError("%s: abelian_character needs k" % rp)
        if spec["kind"] == "matrices":
            mats = spec.get("matrices")
            _want(mats, list, rp + ".matrices")
            for i, m in enumerate(mats):
                _want(m, list, rp + ".matrices[%d]" % i)
                for j, row in enumerate(m):
                    _want(row, list, rp + ".matrices[%d][%d]" % (i, j))
    if "conductor" in doc:
        _want(doc["conductor"], int, path + ".conductor")
    if "checks" in doc:
        c = doc["checks"]
        _check_keys(
            c,
            ("st_reps", "st_legs", "span_reps", "span_loop_length", "chern_reps"),
            (),
            path + ".checks",
        )
        for key in ("st_reps", "span_reps", "chern_reps"):
            if key in c:
                _want(c[key], list, path + ".checks." + key)
        if "st_legs" in c:
            _want(c["st_legs"], list, path + ".checks.st_legs")
            for i, legs in enumerate(c["st_legs"]):
                _want(legs, list, path + ".checks.st_legs[%d]" % i)
        if "span_loop_length" in c:
            _want(c["span_loop_length"], int, path + ".checks.span_loop_length")
    if "excursion" in doc:
        e = doc["excursion"]
        _check_keys(e, ("xi", "loops"), ("xi", "loops"), path + ".excursion")
        xi = e["xi"]
        _check_keys(xi, ("from_rep", "reps", "v", "vstar"), (), path + ".excursion.xi")
        if "from_rep" not in xi and not ("reps" in xi and "v" in xi and "vstar" in xi):
            raise SchemaError(
                path + ".excursion.xi: need from_rep or (reps, v, vstar)"
            )
        _want(e["loops"], list, path + ".excursion.loops")
    return doc


def _literal_entries(spec):
    "All cyclotomic literal strings appearing in a rep spec."
    if spec["kind"] != "matrices":
        return
    for m in spec["matrices"]:
        for row in m:
            for entry in row:
                yield str(entry)


def scenario_conductor(doc, group_order):
    n = doc.get("conductor", 1)
    for spec in doc["reps"].values():
        if spec["kind"] == "abelian_character":
            n = lcm(n, group_order)
        for lit in _literal_entries(spec):
            n = lcm(n, literal_conductor(lit))
    exc = doc.get("excursion")
    if exc:
        for key in ("v", "vstar"):
            for lit in exc["xi"].get(key, ()):
                n = lcm(n, literal_conductor(str(lit)))
    return n


def scenario_from_dict(doc, max_group_order=DEFAULT_MAX_GROUP_ORDER,
                       max_nodes=DEFAULT_MAX_SEARCH_NODES):
    validate_scenario_dict(doc)
    g = doc["group"]
    degree = g["degree"]
    try:
        perms = [parse_cycles(s, degree) for s in g["generators"]]
    except ValueError as e:
        raise SchemaError("scenario.group.generators: %s" % e)
    group = group_from_permutations(degree, perms, max_order=max_group_order)
    pres_doc = doc["presentation"]
    try:
        presentation = Presentation.parse(
            pres_doc["generators"], pres_doc.get("relators", [])
        )
    except ValueError as e:
        raise SchemaError("scenario.presentation: %s" % e)
    try:
        phi = Endomorphism.parse(presentation, doc.get("phi", {}))
    except ValueError as e:
        raise SchemaError("scenario.phi: %s" % e)
    ctx = make_context(scenario_conductor(doc, group.order))
    reps = {}
    for name, spec in doc["reps"].items():
        kind = spec["kind"]
        if kind == "matrices":
            mats = []
            for m in spec["matrices"]:
                rows = [
                    [parse_cyclotomic(str(x), ctx) for x in row] for row in m
                ]
                mats.append(FieldMatrix(ctx, rows))
            reps[name] = rep_from_generator_matrices(group, ctx, mats)
        else:
            reps[name] = builtin_rep(group, kind, ctx, k=spec.get("k"))
    scen = Scenario(
        doc["name"], presentation, phi, group, ctx, reps, max_nodes=max_nodes
    )
    scen.checks = doc.get("checks", {})
    scen.excursion_doc = doc.get("excursion")
    return scen


# the spec-level constructor name for a parsed configuration
build_scenario = scenario_from_dict


def load_scenario(path_or_name, max_group_order=DEFAULT_MAX_GROUP_ORDER,
                  max_nodes=DEFAULT_MAX_SEARCH_NODES):
    "Load a scenario file, or a builtin by name."
    if path_or_name in BUILTIN_NAMES:
        text = (
            resources.files("excstack")
            .joinpath("builtin_scenarios/%s.json" % path_or_name)
            .read_text()
        )
    else:
        import os

        if not os.path.exists(path_or_name):
            raise SchemaError(
                "%r is neither a scenario file nor a builtin (builtins: %s)"
                % (path_or_name, ", ".join(BUILTIN_NAMES))
            )
        with open(path_or_name) as fh:
            text = fh.read()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise SchemaError("%s: not valid JSON: %s" % (path_or_name, e))
    return scenario_from_dict(
        doc, max_group_order=max_group_order, max_nodes=max_nodes
    )


def builtin_scenarios(**kw):
    return [load_scenario(name, **kw) for name in BUILTIN_NAMES]
