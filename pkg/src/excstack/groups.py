"""Finite permutation groups, finitely presented groups, and Hom(Gamma, G).

Group elements are permutations stored as image tuples; the canonical
element order is lexicographic on those tuples, so every enumeration
downstream is deterministic.
"""

from math import lcm


class GroupTooLarge(RuntimeError):
    pass


class SearchCapExceeded(RuntimeError):
    pass


DEFAULT_MAX_GROUP_ORDER = 5040
DEFAULT_MAX_SEARCH_NODES = 10**7


def parse_cycles(text, degree):
    "Parse cycle notation like '(0 1)(2 3)' into an image tuple; 'e' = identity."
    if text.strip() == "e":
        return tuple(range(degree))
    images = list(range(degree))
    depth = 0
    cycles = []
    cur = []
    tok = ""
    for ch in text + " ":
        if ch == "(":
            if depth:
                raise ValueError("nested parenthesis in cycle notation: %r" % text)
            depth = 1
            cur = []
        elif ch == ")":
            if tok:
                cur.append(int(tok))
                tok = ""
            cycles.append(cur)
            depth = 0
        elif ch.isspace() or ch == ",":
            if tok:
                cur.append(int(tok))
                tok = ""
        elif ch.isdigit():
            tok += ch
        else:
            raise ValueError("bad character %r in cycle notation %r" % (ch, text))
    if depth or tok:
        raise ValueError("unbalanced cycle notation: %r" % text)
    for cyc in reversed(cycles):  # rightmost cycle acts first
        if any(p >= degree or p < 0 for p in cyc):
            raise ValueError("cycle entry out of range in %r" % text)
        mapped = {cyc[i]: cyc[(i + 1) % len(cyc)] for i in range(len(cyc))}
        images = [mapped.get(images[i], images[i]) for i in range(degree)]
    return tuple(images)


def cycles_str(images):
    "Inverse of parse_cycles; fixed points omitted, 'e' for the identity."
    seen = set()
    parts = []
    for start in range(len(images)):
        if start in seen or images[start] == start:
            continue
        cyc = [start]
        seen.add(start)
        nxt = images[start]
        while nxt != start:
            cyc.append(nxt)
            seen.add(nxt)
            nxt = images[nxt]
        parts.append("(" + " ".join(str(p) for p in cyc) + ")")
    return "".join(parts) if parts else "e"


def _compose(p, q):
    "(p o q)(i) = p(q(i)); q acts first."
    return tuple(p[x] for x in q)


def _invert(p):
    out = [0] * len(p)
    for i, x in enumerate(p):
        out[x] = i
    return tuple(out)


class FinGroup:
    """A finite group given by permutation generators.

    Carries the full (sorted) element list, multiplication/inverse tables
    and the conjugacy class partition with minimal-index representatives.
    """

    def __init__(self, degree, generators, max_order=DEFAULT_MAX_GROUP_ORDER):
        self.degree = degree
        gens = []
        for g in generators:
            g = tuple(g)
            if sorted(g) != list(range(degree)):
                raise ValueError("generator %r is not a permutation of degree %d" % (g, degree))
            gens.append(g)
        self.generator_perms = tuple(gens)

        ident = tuple(range(degree))
        elems = {ident}
        frontier = [ident]
        while frontier:
            new = []
            for x in frontier:
                for g in gens:
                    y = _compose(g, x)
                    if y not in elems:
                        elems.add(y)
                        new.append(y)
                        if len(elems) > max_order:
                            raise GroupTooLarge(
                                "group order exceeds cap %d" % max_order
                            )
            frontier = new
        self.elements = tuple(sorted(elems))
        self.index = {p: i for i, p in enumerate(self.elements)}
        self.order = len(self.elements)
        self.identity = self.index[ident]
        self.generators = tuple(self.index[g] for g in gens)

        n = self.order
        # the full table is n^2 entries; above the threshold multiply lazily
        if n <= 1024:
            self.mul_table = [
                tuple(self.index[_compose(self.elements[i], self.elements[j])]
                      for j in range(n))
                for i in range(n)
            ]
        else:
            self.mul_table = None
            self._mul_cache = {}
        self.inv_table = tuple(self.index[_invert(p)] for p in self.elements)
        self._build_classes()

    def mul(self, i, j):
        if self.mul_table is not None:
            return self.mul_table[i][j]
        key = i * self.order + j
        got = self._mul_cache.get(key)
        if got is None:
            got = self.index[_compose(self.elements[i], self.elements[j])]
            self._mul_cache[key] = got
        return got

    def inv(self, i):
        return self.inv_table[i]

    def conj(self, g, x):
        "g x g^-1"
        return self.mul(self.mul(g, x), self.inv_table[g])

    def element_order(self, x):
        k, y = 1, x
        while y != self.identity:
            y = self.mul(y, x)
            k += 1
        return k

    def exponent(self):
        e = 1
        for x in range(self.order):
            e = lcm(e, self.element_order(x))
        return e

    def is_cyclic(self):
        return any(self.element_order(x) == self.order for x in range(self.order))

    def cyclic_generator(self):
        for x in range(self.order):
            if self.element_order(x) == self.order:
                return x
        raise ValueError("group is not cyclic")

    def _build_classes(self):
        n = self.order
        cls_of = [-1] * n
        classes = []
        for x in range(n):
            if cls_of[x] >= 0:
                continue
            orbit = {x}
            frontier = [x]
            while frontier:
                nxt = []
                for y in frontier:
                    for g in self.generators or range(n):
                        z = self.conj(g, y)
                        if z not in orbit:
                            orbit.add(z)
                            nxt.append(z)
                frontier = nxt
            members = tuple(sorted(orbit))
            for y in members:
                cls_of[y] = len(classes)
            classes.append(members)
        self.class_members = tuple(classes)
        self.class_of = tuple(cls_of)
        self.class_reps = tuple(c[0] for c in classes)
        self.centralizer_orders = tuple(self.order // len(c) for c in classes)

    def centralizer(self, xs):
        "Element indices commuting with every x in xs."
        return [
            g
            for g in range(self.order)
            if all(self.mul(g, x) == self.mul(x, g) for x in xs)
        ]

    def __repr__(self):
        return "FinGroup(degree=%d, order=%d)" % (self.degree, self.order)


def group_from_permutations(degree, generators, max_order=DEFAULT_MAX_GROUP_ORDER):
    return FinGroup(degree, generators, max_order=max_order)


def conjugacy_classes(group):
    "Partition, minimal-index representatives and centralizer orders."
    return [
        {
            "representative": rep,
            "members": members,
            "size": len(members),
            "centralizer_order": zorder,
        }
        for rep, members, zorder in zip(
            group.class_reps, group.class_members, group.centralizer_orders
        )
    ]


# ---------------------------------------------------------------------------
# words and presentations
# ---------------------------------------------------------------------------

def parse_word(text, names):
    """Parse 'a b^-2 c' into a Word (tuple of (generator index, +-1)).

    'e' denotes the empty word (unless a generator is named e).
    """
    lookup = {nm: i for i, nm in enumerate(names)}
    if text.strip() == "e" and "e" not in lookup:
        return ()
    letters = []
    for chunk in text.split():
        if "^" in chunk:
            nm, exp = chunk.split("^", 1)
            e = int(exp)
        else:
            nm, e = chunk, 1
        if nm not in lookup:
            raise ValueError("unknown generator %r in word %r" % (nm, text))
        if e == 0:
            continue
        sign = 1 if e > 0 else -1
        letters.extend([(lookup[nm], sign)] * abs(e))
    return tuple(letters)


def word_str(word, names):
    if not word:
        return "e"
    return " ".join(nm if s > 0 else nm + "^-1" for nm, s in
                    ((names[i], s) for i, s in word))


def word_inverse(word):
    return tuple((i, -s) for i, s in reversed(word))


def evaluate_word(word, images, group):
    "Left-to-right product of generator images; empty word is the identity."
    out = group.identity
    for gen, sign in word:
        if gen >= len(images):
            raise IndexError("word references generator %d beyond the image tuple" % gen)
        x = images[gen]
        if sign < 0:
            x = group.inv(x)
        out = group.mul(out, x)
    return out


class Presentation:
    "A finitely presented group <generators | relators>."

    def __init__(self, generator_names, relators):
        self.generator_names = tuple(generator_names)
        self.relators = tuple(tuple(r) for r in relators)
        ng = len(self.generator_names)
        for rel in self.relators:
            for gen, sign in rel:
                if not (0 <= gen < ng) or sign not in (1, -1):
                    raise ValueError("relator letter out of range: %r" % (rel,))

    @classmethod
    def parse(cls, generator_names, relator_strings):
        names = list(generator_names)
        return cls(names, [parse_word(s, names) for s in relator_strings])

    @property
    def ngens(self):
        return len(self.generator_names)

    def __repr__(self):
        rels = ", ".join(word_str(r, self.generator_names) for r in self.relators)
        return "<%s | %s>" % (" ".join(self.generator_names) or "-", rels or "-")


class Endomorphism:
    "Generator images defining an endomorphism of a presented group."

    def __init__(self, presentation, images):
        self.presentation = presentation
        self.images = tuple(tuple(w) for w in images)
        if len(self.images) != presentation.ngens:
            raise ValueError("need one image word per generator")
        for w in self.images:
            for gen, _ in w:
                if gen >= presentation.ngens:
                    raise ValueError("image word uses an unknown generator")

    @classmethod
    def identity(cls, presentation):
        return cls(presentation, [((i, 1),) for i in range(presentation.ngens)])

    @classmethod
    def parse(cls, presentation, mapping):
        "mapping: generator name -> word string; missing names map to themselves."
        names = presentation.generator_names
        images = []
        for i, nm in enumerate(names):
            if nm in mapping:
                images.append(parse_word(mapping[nm], names))
            else:
                images.append(((i, 1),))
        unknown = set(mapping) - set(names)
        if unknown:
            raise ValueError("phi maps unknown generators: %s" % sorted(unknown))
        return cls(presentation, images)

    def apply_to_word(self, word):
        out = []
        for gen, sign in word:
            img = self.images[gen]
            out.extend(img if sign > 0 else word_inverse(img))
        return tuple(out)

    def push_images(self, rho, group):
        "Images of (rho o phi) on the generators."
        return tuple(evaluate_word(w, rho, group) for w in self.images)

    def __repr__(self):
        names = self.presentation.generator_names
        return "phi{%s}" % ", ".join(
            "%s -> %s" % (nm, word_str(w, names)) for nm, w in zip(names, self.images)
        )


def enumerate_homs(presentation, group, max_nodes=DEFAULT_MAX_SEARCH_NODES,
                   reduce_first=False):
    """All homomorphisms presentation -> group as image-index tuples.

    Plain backtracking in lexicographic order; a prefix dies as soon as a
    relator whose generators are all assigned fails.  With reduce_first
    the first generator ranges over class representatives only and the
    full list is recovered by closing under conjugation.
    """
    ng = presentation.ngens
    if ng == 0:
        return [()]
    rel_by_stage = [[] for _ in range(ng)]
    for rel in presentation.relators:
        if not rel:
            continue
        stage = max(gen for gen, _ in rel)
        rel_by_stage[stage].append(rel)

    first_candidates = (
        list(group.class_reps) if reduce_first else list(range(group.order))
    )
    nodes = 0
    out = []

    def extend(prefix, depth):
        nonlocal nodes
        cands = first_candidates if depth == 0 else range(group.order)
        for img in cands:
            nodes += 1
            if nodes > max_nodes:
                raise SearchCapExceeded("hom search exceeded %d nodes" % max_nodes)
            prefix.append(img)
            if all(
                evaluate_word(rel, prefix, group) == group.identity
                for rel in rel_by_stage[depth]
            ):
                if depth + 1 == ng:
                    out.append(tuple(prefix))
                else:
                    extend(prefix, depth + 1)
            prefix.pop()

    extend([], 0)
    if reduce_first:
        seen = set(out)
        for rho in out:
            for g in range(group.order):
                tau = tuple(group.conj(g, x) for x in rho)
                if tau not in seen:
                    seen.add(tau)
        out = sorted(seen)
    return out


def conjugation_orbits(homs, group):
    """Orbits of simultaneous conjugation on a conjugation-closed hom list.

    Returns a list of dicts with representative (minimal member), members,
    stabilizer element indices and a transporter map member -> g with
    g . representative = member.
    """
    pos = {rho: i for i, rho in enumerate(homs)}
    seen = set()
    orbits = []
    for rho in homs:
        if rho in seen:
            continue
        members = {}
        for g in range(group.order):
            sig = tuple(group.conj(g, x) for x in rho)
            if sig not in members:
                assert sig in pos, "hom list not closed under conjugation"
                members[sig] = g
        rep = min(members)
        grep = members[rep]
        stab = [
            g
            for g in range(group.order)
            if tuple(group.conj(g, x) for x in rep) == rep
        ]
        mem_sorted = sorted(members)
        transp = {}
        for m in mem_sorted:
            # members[m] . rho = m and grep . rho = rep  =>  m = members[m] grep^-1 . rep
            transp[m] = group.mul(members[m], group.inv(grep))
        orbits.append(
            {
                "representative": rep,
                "members": mem_sorted,
                "stabilizer": stab,
                "transporter": transp,
            }
        )
        seen.update(members)
    assert sum(len(o["members"]) for o in orbits) == len(homs)
    for o in orbits:
        assert len(o["members"]) * len(o["stabilizer"]) == group.order
    return orbits


def mapping_torus(presentation, phi, t_name=None):
    "The presentation <gens, t | relators, t x t^-1 phi(x)^-1>."
    names = list(presentation.generator_names)
    if t_name is None:
        t_name = "t"
        while t_name in names:
            t_name += "_"
    names.append(t_name)
    t = presentation.ngens
    relators = [tuple(r) for r in presentation.relators]
    for i in range(presentation.ngens):
        rel = ((t, 1), (i, 1), (t, -1)) + word_inverse(phi.images[i])
        relators.append(rel)
    return Presentation(names, relators)


def validate_phi(presentation, phi, group, homs=None):
    """Check that rho o phi satisfies the relators for every rho.

    Returns None when fine, otherwise the first failing (rho, relator).
    """
    if homs is None:
        homs = enumerate_homs(presentation, group)
    for rho in homs:
        pushed = phi.push_images(rho, group)
        for rel in presentation.relators:
            if evaluate_word(rel, pushed, group) != group.identity:
                return rho, rel
    return None
