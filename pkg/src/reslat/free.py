"""Free algebras over finitely generated varieties, by the product-of-
valuations construction: Fr_n(K) is realized concretely as the subalgebra
of prod_{A in K} A^(A^n) generated by the n projection tuples."""

from dataclasses import dataclass
from itertools import product as iproduct

from . import budgets
from .algebra import (
    FiniteAlgebra,
    complement,
    homomorphisms,
    is_homomorphism,
    iso_check,
    product,
    subalgebra_generate,
)
from .errors import (
    InvalidSpecError,
    NotComplementedError,
    PreconditionError,
    ResourceError,
)


@dataclass(frozen=True)
class VarietySpec:
    """Finite algebras generating the variety V(Fin(K)); shared signature."""

    generators: tuple

    def __post_init__(self):
        if not self.generators:
            raise InvalidSpecError("variety needs at least one generating algebra")
        sig = self.generators[0].signature
        for g in self.generators[1:]:
            if g.signature.ops != sig.ops:
                raise InvalidSpecError("variety generators must share a signature")

    @property
    def signature(self):
        return self.generators[0].signature


class FreeAlgebra:
    """A concretely constructed free algebra plus its construction record."""

    def __init__(self, algebra, generators, coords, variety):
        self.algebra = algebra
        self.generators = tuple(generators)  # element indices of the free gens
        self.coords = tuple(coords)  # (generator-algebra index, valuation tuple)
        self.variety = variety

    @property
    def size(self):
        return self.algebra.size

    def report(self):
        return {
            "format": "reslat/1",
            "size": self.algebra.size,
            "free_generators": list(self.generators),
            "atom_count": len(atoms(self.algebra)),
            "coordinates": [
                {"algebra": ai, "valuation": list(v)} for ai, v in self.coords
            ],
            "universal_property": universal_property_holds(self),
        }


def free_algebra(variety, n, budget=None):
    """Birkhoff construction: close the projection tuples under the ops.

    Coordinates are (A, valuation) pairs in lexicographic valuation order.
    The closure itself runs vectorized per coordinate; elements end up in
    canonical (lexicographic tuple) order.
    """
    import numpy as np

    if n < 1:
        raise InvalidSpecError("need at least one generator")
    budget = budget or budgets.from_env()
    coords = []
    for ai, g in enumerate(variety.generators):
        for v in iproduct(range(g.size), repeat=n):
            coords.append((ai, v))
    if len(coords) > budget.closure:
        raise ResourceError("coordinate count %d over budget" % len(coords))
    gens_of = [variety.generators[ai] for ai, _ in coords]
    sig = variety.signature
    C = len(coords)
    ctabs = {
        opname: [gens_of[c].np_table(opname) for c in range(C)]
        for opname, ar in sig.ops
        if ar > 0
    }

    def keys_of(rows):
        return [r.tobytes() for r in np.ascontiguousarray(rows, dtype=np.int32)]

    start = []
    projections = []
    for i in range(n):
        e = tuple(v[i] for _, v in coords)
        projections.append(e)
        start.append(e)
    for opname, ar in sig.ops:
        if ar == 0:
            start.append(tuple(g.const(opname) for g in gens_of))
    E = np.array(sorted(set(start)), dtype=np.int32)
    seen = set(keys_of(E))

    def apply_unary(opname, block):
        out = np.empty_like(block)
        ts = ctabs[opname]
        for c in range(C):
            out[:, c] = ts[c][block[:, c]]
        return out

    def apply_binary(opname, left, right):
        m1, m2 = len(left), len(right)
        out = np.empty((m1 * m2, C), dtype=np.int32)
        ts = ctabs[opname]
        for c in range(C):
            out[:, c] = ts[c][left[:, c][:, None], right[:, c][None, :]].reshape(-1)
        return out

    frontier = E
    while len(frontier):
        blocks = []
        for opname, ar in sig.ops:
            if ar == 1:
                blocks.append(apply_unary(opname, frontier))
            elif ar == 2:
                blocks.append(apply_binary(opname, frontier, E))
                blocks.append(apply_binary(opname, E, frontier))
        fresh = []
        for block in blocks:
            for row, key in zip(block, keys_of(block)):
                if key not in seen:
                    seen.add(key)
                    fresh.append(tuple(int(x) for x in row))
        if not fresh:
            break
        if len(seen) > budget.closure:
            raise ResourceError("free-algebra closure budget exceeded")
        frontier = np.array(sorted(set(fresh)), dtype=np.int32)
        E = np.vstack([E, frontier])
    order = sorted(tuple(int(x) for x in row) for row in E)
    elems = {e: i for i, e in enumerate(order)}
    E = np.array(order, dtype=np.int32)
    size = len(order)
    lookup = {k: i for i, k in enumerate(keys_of(E))}
    tables = {}
    for opname, ar in sig.ops:
        if ar == 0:
            tables[opname] = elems[tuple(g.const(opname) for g in gens_of)]
        elif ar == 1:
            res = apply_unary(opname, E)
            tables[opname] = [lookup[k] for k in keys_of(res)]
        else:
            res = apply_binary(opname, E, E)
            flat = [lookup[k] for k in keys_of(res)]
            tables[opname] = [flat[i * size : (i + 1) * size] for i in range(size)]
    labels = None
    if size <= 64:
        labels = [
            "g%d" % projections.index(e) if e in projections else "e%d" % i
            for i, e in enumerate(order)
        ]
    alg = FiniteAlgebra(
        "Fr_%d(%s)" % (n, "+".join(g.name for g in variety.generators)),
        size,
        sig,
        tables,
        labels=labels,
    )
    return FreeAlgebra(alg, [elems[p] for p in projections], coords, variety)


def universal_property_holds(free):
    """Every valuation of the free generators into every variety generator
    extends to a homomorphism (namely the coordinate projection), and the
    extension is unique because the generators generate."""
    alg = free.algebra
    if len(subalgebra_generate(alg, free.generators)) != alg.size:
        return False
    coord_index = {c: i for i, c in enumerate(free.coords)}
    # rebuild the element tuples from the tables by walking Sg? cheaper:
    # projections are homomorphisms by construction; verify directly.
    for ai, g in enumerate(free.variety.generators):
        for v in iproduct(range(g.size), repeat=len(free.generators)):
            c = coord_index[(ai, v)]
            mapping = _projection_map(free, c)
            if any(mapping[free.generators[i]] != v[i] for i in range(len(v))):
                return False
            if not is_homomorphism(alg, g, mapping):
                return False
    return True


def _projection_map(free, coord):
    """Element -> its value at one coordinate, recovered through the tables."""
    alg = free.algebra
    sig = alg.signature
    g = free.variety.generators[free.coords[coord][0]]
    val = {}
    for i, gi in enumerate(free.generators):
        val[gi] = free.coords[coord][1][i]
    for opname, ar in sig.ops:
        if ar == 0:
            val[alg.const(opname)] = g.const(opname)
    changed = True
    while changed:
        changed = False
        for opname, ar in sig.ops:
            if ar == 1:
                t, tg = alg.tables[opname], g.tables[opname]
                for x in list(val):
                    y = t[x]
                    if y not in val:
                        val[y] = tg[val[x]]
                        changed = True
            elif ar == 2:
                t, tg = alg.tables[opname], g.tables[opname]
                for x in list(val):
                    for y in list(val):
                        z = t[x][y]
                        if z not in val:
                            val[z] = tg[val[x]][val[y]]
                            changed = True
    return [val[i] for i in range(alg.size)]


# ---------------------------------------------------------------------------
# atoms and atomicity
# ---------------------------------------------------------------------------


def atoms(alg):
    """Minimal nonzero elements of the derived lattice order."""
    out = []
    for a in range(alg.size):
        if a == alg.zero:
            continue
        if all(
            b == alg.zero or b == a or not alg.leq(b, a) for b in range(alg.size)
        ):
            out.append(a)
    return out

def is_atomic(alg):
    """(True, None) or (False, witness): a nonzero element with no atom below."""
    ats = atoms(alg)
    for a in range(alg.size):
        if a == alg.zero:
            continue
        if not any(alg.leq(x, a) for x in ats):
            return False, a
    return True, None


# ---------------------------------------------------------------------------
# relativization and decomposition
# ---------------------------------------------------------------------------


def relativize(alg, b):
    """Rl_b: universe {x : x <= b}, every op relativized by meeting with b."""
    sub = [x for x in range(alg.size) if alg.leq(x, b)]
    index = {x: i for i, x in enumerate(sub)}
    tables = {}
    for opname, ar in alg.signature.ops:
        if ar == 0:
            tables[opname] = index[alg.meet(alg.const(opname), b)]
        elif ar == 1:
            t = alg.tables[opname]
            tables[opname] = [index[alg.meet(t[x], b)] for x in sub]
        else:
            t = alg.tables[opname]
            tables[opname] = [
                [index[alg.meet(t[x][y], b)] for y in sub] for x in sub
            ]
    labels = [alg.label(x) for x in sub]
    out = FiniteAlgebra(
        "Rl_%s(%s)" % (alg.label(b), alg.name),
        len(sub),
        alg.signature,
        tables,
        labels=labels,
    )
    out.embedding = tuple(sub)  # position i holds original element sub[i]
    return out


def hereditary_closed(alg, b, op_names=None):
    """b is hereditary closed when every operator fixes everything below b."""
    if op_names is None:
        op_names = alg.extra_operator_names()
    for x in range(alg.size):
        if not alg.leq(x, b):
            continue
        for name in op_names:
            if alg.apply(name, x) != x:
                return False, (x, name)
    return True, None


def decompose(alg, b):
    """A ~ Rl_b x Rl_-b through x |-> (x ^ b, x ^ -b); verified exactly."""
    c = complement(alg, b)
    if c is None:
        raise NotComplementedError("element %s has no complement" % alg.label(b))
    rb = relativize(alg, b)
    rc = relativize(alg, c)
    prod = product([rb, rc])
    rb_idx = {e: i for i, e in enumerate(rb.embedding)}
    rc_idx = {e: i for i, e in enumerate(rc.embedding)}
    pair_index = {}
    k = 0
    for x in range(rb.size):
        for y in range(rc.size):
            pair_index[(x, y)] = k
            k += 1
    mapping = [
        pair_index[(rb_idx[alg.meet(x, b)], rc_idx[alg.meet(x, c)])]
        for x in range(alg.size)
    ]
    if len(set(mapping)) != alg.size or alg.size != prod.size:
        return None, (rb, rc, mapping)
    if not is_homomorphism(alg, prod, mapping):
        bad = _first_hom_failure(alg, prod, mapping)
        return None, (rb, rc, bad)
    return (rb, rc, mapping), None


def _first_hom_failure(a, b, mapping):
    for opname, ar in a.signature.ops:
        if ar == 0:
            if mapping[a.const(opname)] != b.const(opname):
                return (opname, ())
        elif ar == 1:
            for x in range(a.size):
                if mapping[a.apply(opname, x)] != b.apply(opname, mapping[x]):
                    return (opname, (x,))
        else:
            for x in range(a.size):
                for y in range(a.size):
                    if mapping[a.apply(opname, x, y)] != b.apply(
                        opname, mapping[x], mapping[y]
                    ):
                        return (opname, (x, y))
    return None


# ---------------------------------------------------------------------------
# free generation and the product decomposition
# ---------------------------------------------------------------------------


def is_freely_generated_by(free, ys, variety=None):
    """Y freely generates iff Y generates and every valuation of Y into a
    variety generator extends to a homomorphism (uniqueness is automatic
    once Y generates)."""
    variety = variety or free.variety
    alg = free.algebra
    ys = list(ys)
    if len(ys) != len(free.generators):
        raise PreconditionError("|Y| must match the free generator count")
    if len(subalgebra_generate(alg, ys)) != alg.size:
        return False
    for g in variety.generators:
        for v in iproduct(range(g.size), repeat=len(ys)):
            seed = dict(zip(ys, v))
            found = homomorphisms(alg, g, seed=seed, limit=1)
            if not found:
                return False
    return True


def free_product_decomposition_check(variety, n, budget=None):
    """Build Fr_n x Fr_n and Fr_{n+1}; search for an isomorphism.

    The canonical candidate g_i |-> (g_i, g_i), g_n |-> (1, 0) is tried
    first (it mirrors the relativization proof); a generic generator-image
    search is the fallback.  Returns (bool, mapping or None).
    """
    budget = budget or budgets.from_env()
    fr_n = free_algebra(variety, n, budget=budget)
    fr_n1 = free_algebra(variety, n + 1, budget=budget)
    prod = product([fr_n.algebra, fr_n.algebra])
    if prod.size != fr_n1.size:
        return False, None
    pair_index = {}
    k = 0
    for x in range(fr_n.size):
        for y in range(fr_n.size):
            pair_index[(x, y)] = k
            k += 1
    canonical = {}
    for i, g in enumerate(fr_n1.generators[:-1]):
        gi = fr_n.generators[i]
        canonical[g] = pair_index[(gi, gi)]
    canonical[fr_n1.generators[-1]] = pair_index[(fr_n.algebra.one, fr_n.algebra.zero)]
    maps = homomorphisms(
        fr_n1.algebra, prod, injective=True, gens=list(fr_n1.generators),
        seed=canonical, limit=1,
    )
    if maps and len(set(maps[0])) == prod.size:
        return True, maps[0]
    m = iso_check(fr_n1.algebra, prod, gens=list(fr_n1.generators))
    return (m is not None), m


def atomless_shadow_check(variety, n, budget=None):
    """Finite shadow of the atomless theorem: inside Fr_n, every nonzero a
    of the subalgebra on the first n-1 generators splits over the last
    generator (a ^ g != 0 and a ^ -g != 0)."""
    if n < 2:
        raise PreconditionError("need n >= 2")
    free = free_algebra(variety, n, budget=budget)
    alg = free.algebra
    g_last = free.generators[-1]
    neg_g = complement(alg, g_last)
    if neg_g is None:
        raise NotComplementedError("last generator has no complement")
    sub = subalgebra_generate(alg, free.generators[:-1])
    for a in sorted(sub):
        if a == alg.zero:
            continue
        if alg.meet(a, g_last) == alg.zero or alg.meet(a, neg_g) == alg.zero:
            return False, a
    return True, None


# builtin variety generators ------------------------------------------------


def boolean_variety():
    from .algebra import ChainSpec, make_chain

    return VarietySpec((make_chain(ChainSpec("lukasiewicz", 2)),))


def distributive_lattice_variety():
    from .algebra import Signature

    sig = Signature((("join", 2), ("meet", 2), ("zero", 0), ("one", 0)))
    alg = FiniteAlgebra(
        "dl2",
        2,
        sig,
        {"join": [[0, 1], [1, 1]], "meet": [[0, 0], [0, 1]], "zero": 0, "one": 1},
        labels=["0", "1"],
    )
    return VarietySpec((alg,))
