"""Seeded random instances for the property checks.

Random scenarios stay within |G| <= 12, at most 2 generators and 2
relators; random bimodules are built semisimply (graded by idempotent
pairs, or matrix-algebra columns) and then conjugated by a random
invertible matrix so the grading is not syntactically visible.
"""

import random

from .cyclo import make_context
from .groups import (
    Endomorphism,
    Presentation,
    enumerate_homs,
    group_from_permutations,
    parse_cycles,
    validate_phi,
)
from .homology import Bimodule, FinDimAlgebra
from .linalg import FieldMatrix, mat_inverse, mat_mul
from .reps import builtin_rep
from .shtuka import Scenario

GROUP_POOL = [
    ("z2", 2, ["(0 1)"]),
    ("z3", 3, ["(0 1 2)"]),
    ("z4", 4, ["(0 1 2 3)"]),
    ("z6", 6, ["(0 1 2 3 4 5)"]),
    ("s3", 3, ["(0 1)", "(0 1 2)"]),
    ("d4", 4, ["(0 1 2 3)", "(0 2)"]),
    ("a4", 4, ["(0 1 2)", "(0 1)(2 3)"]),
    ("d6", 6, ["(0 1 2 3 4 5)", "(0 5)(1 4)(2 3)"]),
    ("z12", 12, ["(0 1 2 3 4 5 6 7 8 9 10 11)"]),
]


def _random_word(rng, ngens, max_len, min_len=1):
    length = rng.randint(min_len, max_len)
    return tuple(
        (rng.randrange(ngens), rng.choice((1, -1))) for _ in range(length)
    )


def random_scenario(rng, max_homs=36):
    "A validated random scenario; |G| <= 12, <= 2 generators, <= 2 relators."
    ctx = make_context(1)
    for _ in range(200):
        gname, degree, gens = GROUP_POOL[rng.randrange(len(GROUP_POOL))]
        group = group_from_permutations(
            degree, [parse_cycles(s, degree) for s in gens]
        )
        ngens = rng.randint(1, 2)
        names = ["a", "b"][:ngens]
        nrel = rng.randint(0, 2)
        if ngens == 2 and group.order >= 6:
            nrel = max(nrel, 1)
        relators = [_random_word(rng, ngens, 4, min_len=2) for _ in range(nrel)]
        presentation = Presentation(names, relators)
        homs = enumerate_homs(presentation, group)
        if not (1 <= len(homs) <= max_homs):
            continue
        images = [_random_word(rng, ngens, 3) for _ in range(ngens)]
        phi = Endomorphism(presentation, images)
        if validate_phi(presentation, phi, group, homs=homs) is not None:
            continue
        name = "rand-%s-g%d-r%d" % (gname, ngens, nrel)
        reps = {"trivial": builtin_rep(group, "trivial", ctx)}
        return Scenario(name, presentation, phi, group, ctx, reps)
    raise RuntimeError("could not draw a valid random scenario")


def random_scenarios(seed, count, max_homs=36):
    rng = random.Random(seed)
    return [random_scenario(rng, max_homs=max_homs) for _ in range(count)]


# --- random semisimple bimodules -------------------------------------------


def product_algebra(ctx, k):
    one = ctx.one
    mult = {(i, i): {i: one} for i in range(k)}
    unit = {i: one for i in range(k)}
    return FinDimAlgebra(ctx, k, mult, unit, verify=False)


def matrix_algebra(ctx, n):
    one = ctx.one
    idx = {(a, b): a * n + b for a in range(n) for b in range(n)}
    mult = {}
    for (a, b), i in idx.items():
        for (c, d), j in idx.items():
            if b == c:
                mult[(i, j)] = {idx[(a, d)]: one}
    unit = {idx[(a, a)]: one for a in range(n)}
    return FinDimAlgebra(ctx, n * n, mult, unit, verify=False)


def _graded_bimodule(ctx, a_blocks, b_blocks, grading):
    """(e^a, e^b)-bimodule with basis graded by (i, j) idempotent pairs."""
    A = product_algebra(ctx, a_blocks)
    B = product_algebra(ctx, b_blocks)
    one = ctx.one
    left = {}
    right = {}
    for q, (i, j) in enumerate(grading):
        left[(i, q)] = {q: one}
        right[(q, j)] = {q: one}
    return Bimodule(A, B, len(grading), left, right, verify=False), A, B


def _column_bimodule(ctx, n):
    "(Mat_n, e)-bimodule on column vectors."
    A = matrix_algebra(ctx, n)
    B = product_algebra(ctx, 1)
    one = ctx.one
    left = {}
    right = {(q, 0): {q: one} for q in range(n)}
    for a in range(n):
        for b in range(n):
            left[(a * n + b, b)] = {a: one}
    return Bimodule(A, B, n, left, right, verify=False), A, B


def _row_bimodule(ctx, n):
    "(e, Mat_n)-bimodule on row vectors."
    A = product_algebra(ctx, 1)
    B = matrix_algebra(ctx, n)
    one = ctx.one
    left = {(0, q): {q: one} for q in range(n)}
    right = {}
    for a in range(n):
        for b in range(n):
            right[(a, a * n + b)] = {b: one}
    return Bimodule(A, B, n, left, right, verify=False), A, B


def _random_invertible(ctx, rng, n):
    while True:
        m = FieldMatrix.from_rows(
            ctx, [[rng.randint(-2, 2) for _ in range(n)] for _ in range(n)]
        )
        try:
            inv = mat_inverse(m)
            return m, inv
        except ValueError:
            continue


def conjugate_bimodule(bim, p, p_inv):
    "Change of basis q -> P q on a bimodule (actions conjugated by P)."
    ctx = bim.A.ctx
    n = bim.dim

    def dense_action(getter, i):
        cols = []
        for q in range(n):
            vec = getter(i, q)
            cols.append([vec.get(r, ctx.zero) for r in range(n)])
        return FieldMatrix(ctx, list(map(list, zip(*cols))))

    left = {}
    right = {}
    for i in range(bim.A.dim):
        m = mat_mul(mat_mul(p, dense_action(bim.act_left, i)), p_inv)
        for q in range(n):
            col = {r: m.entries[r][q] for r in range(n) if m.entries[r][q]}
            if col:
                left[(i, q)] = col
    for j in range(bim.B.dim):
        m = mat_mul(mat_mul(p, dense_action(lambda jj, q: bim.act_right(q, jj), j)), p_inv)
        for q in range(n):
            col = {r: m.entries[r][q] for r in range(n) if m.entries[r][q]}
            if col:
                right[(q, j)] = col
    return Bimodule(bim.A, bim.B, n, left, right, verify="full")


def random_bimodule_pair(ctx, rng):
    """A random ((A,B), (B,A)) pair of bimodules, each of dimension <= 3."""
    if rng.random() < 0.25:
        n = rng.choice((2, 3))
        q, A, B = _column_bimodule(ctx, n)
        p, _, _ = _row_bimodule(ctx, n)
        # p must be over (B, A) with the same algebra objects
        one = ctx.one
        left = {(0, i): {i: one} for i in range(n)}
        right = {}
        for a in range(n):
            for b in range(n):
                right[(a, a * n + b)] = {b: one}
        p = Bimodule(B, A, n, left, right, verify=False)
    else:
        a_blocks = rng.randint(1, 3)
        b_blocks = rng.randint(1, 3)
        dq = rng.randint(1, 3)
        dp = rng.randint(1, 3)
        grading_q = [
            (rng.randrange(a_blocks), rng.randrange(b_blocks)) for _ in range(dq)
        ]
        q, A, B = _graded_bimodule(ctx, a_blocks, b_blocks, grading_q)
        grading_p = [
            (rng.randrange(b_blocks), rng.randrange(a_blocks)) for _ in range(dp)
        ]
        one = ctx.one
        left = {}
        right = {}
        for idx, (j, i) in enumerate(grading_p):
            left[(j, idx)] = {idx: one}
            right[(idx, i)] = {idx: one}
        p = Bimodule(B, A, dp, left, right, verify=False)
    mq, mq_inv = _random_invertible(ctx, rng, q.dim)
    mp, mp_inv = _random_invertible(ctx, rng, p.dim)
    return conjugate_bimodule(q, mq, mq_inv), conjugate_bimodule(p, mp, mp_inv)
