"""Ideals, congruences, amalgamation and superamalgamation search,
congruence-pair extension, weak interpolation, discriminator checks and
the Gratzer-Schmidt ideal/congruence correspondence."""

from dataclasses import dataclass

from . import budgets
from .algebra import (
    FiniteAlgebra,
    homomorphisms,
    is_homomorphism,
    lattice_reduct,
    product,
    subalgebra_generate,
)
from .errors import (
    DomainError,
    PreconditionError,
    ResourceError,
)


@dataclass(frozen=True)
class Ideal:
    """0-containing, downward closed, closed under oplus (else join)."""

    alg: object
    members: frozenset

    def __post_init__(self):
        object.__setattr__(self, "members", frozenset(self.members))

    def __contains__(self, x):
        return x in self.members

    def bitmask(self):
        return sum(1 << i for i in self.members)


def _ideal_sum(alg, mode):
    if mode == "auto":
        mode = "oplus" if "oplus" in alg.signature else "join"
    if mode == "lattice":
        mode = "join"
    return alg.tables[mode]


def ideal_generate(alg, seed, mode="auto"):
    """Ig: least 0-containing downward set closed under the additive op."""
    add = _ideal_sum(alg, mode)
    s = set(seed)
    s.add(alg.zero)
    changed = True
    while changed:
        changed = False
        snapshot = list(s)
        for a in snapshot:
            for b in snapshot:
                v = add[a][b]
                if v not in s:
                    s.add(v)
                    changed = True
            for b in range(alg.size):
                if alg.leq(b, a) and b not in s:
                    s.add(b)
                    changed = True
    return Ideal(alg, frozenset(s))


def is_ideal(alg, members, mode="auto"):
    add = _ideal_sum(alg, mode)
    s = set(members)
    if alg.zero not in s:
        return False
    for a in s:
        for b in s:
            if add[a][b] not in s:
                return False
        for b in range(alg.size):
            if alg.leq(b, a) and b not in s:
                return False
    return True


def enumerate_ideals(alg, mode="auto", bound=None, budget=None):
    """All ideals, by downward-set DFS plus additive-closure filtering."""
    budget = budget or budgets.from_env()
    bound = bound if bound is not None else budget.spectrum
    if alg.size > bound:
        raise ResourceError("ideal enumeration bound exceeded")
    n = alg.size
    below = [frozenset(b for b in range(n) if alg.leq(b, a)) for a in range(n)]
    order = sorted(range(n), key=lambda a: (len(below[a]), a))
    add = _ideal_sum(alg, mode)
    out = []

    def rec(i, chosen):
        if i == len(order):
            if alg.zero in chosen:
                for a in chosen:
                    for b in chosen:
                        if add[a][b] not in chosen:
                            return
                out.append(frozenset(chosen))
            return
        e = order[i]
        rec(i + 1, chosen)
        if below[e] - {e} <= chosen:
            rec(i + 1, chosen | {e})

    rec(0, frozenset())
    out.sort(key=lambda s: sum(1 << i for i in s))
    return [Ideal(alg, s) for s in out]


def ideal_join_characterize(alg, m_ideal, n_ideal, mode="auto"):
    """Ig(M u N) = {x : x <= b (+) c for b in M, c in N}, exhaustively."""
    add = _ideal_sum(alg, mode)
    generated = ideal_generate(alg, m_ideal.members | n_ideal.members, mode).members
    described = frozenset(
        x
        for x in range(alg.size)
        if any(
            alg.leq(x, add[b][c])
            for b in m_ideal.members
            for c in n_ideal.members
        )
    )
    return generated == described


def ideal_extension(alg, b_subuniverse, m_ideal, n_ideal, mode="auto",
                    want_maximal=False, bound=None, budget=None):
    """A witness N' with N <= N' and N' cap B = M, searched over the ideal
    lattice; None when no witness exists (a counterexample to the lemma)."""
    b_set = frozenset(b_subuniverse)
    if not (frozenset(n_ideal.members) & b_set <= m_ideal.members):
        raise PreconditionError("need N cap B <= M")
    if not m_ideal.members <= b_set:
        raise PreconditionError("M must be an ideal of B")
    every = enumerate_ideals(alg, mode, bound=bound, budget=budget)
    candidates = [
        i
        for i in every
        if n_ideal.members <= i.members and i.members & b_set == m_ideal.members
    ]
    if not candidates:
        return None
    if want_maximal:
        proper = [i.members for i in every if len(i.members) < alg.size]
        maximal = {m for m in proper if not any(m < p for p in proper)}
        best = [i for i in candidates if i.members in maximal]
        return best[0] if best else None
    return candidates[0]


# ---------------------------------------------------------------------------
# congruences as partitions
# ---------------------------------------------------------------------------


def _canon(parts, n):
    """Partition as a tuple: element -> least member of its class."""
    rep = list(range(n))
    for block in parts:
        least = min(block)
        for x in block:
            rep[x] = least
    return tuple(rep)


def congruence_closure(alg, pairs):
    """Smallest congruence containing the given element pairs."""
    n = alg.size
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y):
        rx, ry = find(x), find(y)
        if rx == ry:
            return False
        if ry < rx:
            rx, ry = ry, rx
        parent[ry] = rx
        return True

    queue = [p for p in pairs if union(*p)]
    unary = [alg.tables[nm] for nm, ar in alg.signature.ops if ar == 1]
    binary = [alg.tables[nm] for nm, ar in alg.signature.ops if ar == 2]
    while queue:
        x, y = queue.pop()
        for t in unary:
            if union(t[x], t[y]):
                queue.append((t[x], t[y]))
        for t in binary:
            for z in range(n):
                if union(t[x][z], t[y][z]):
                    queue.append((t[x][z], t[y][z]))
                if union(t[z][x], t[z][y]):
                    queue.append((t[z][x], t[z][y]))
    return tuple(find(x) for x in range(n))


def principal_congruence(alg, x, y):
    return congruence_closure(alg, [(x, y)])


def all_congruences(alg, budget=None, bound=None):
    """The congruence lattice: closure of principal congruences under join."""
    budget = budget or budgets.from_env()
    bound = bound if bound is not None else max(budget.spectrum, 20)
    if alg.size > bound:
        raise ResourceError("congruence lattice bound exceeded")
    n = alg.size
    identity = tuple(range(n))
    principals = set()
    for x in range(n):
        for y in range(x + 1, n):
            principals.add(principal_congruence(alg, x, y))
    known = {identity} | principals
    frontier = list(known)
    while frontier:
        new = []
        for a in frontier:
            for b in list(known):
                pairs = [(i, a[i]) for i in range(n)] + [(i, b[i]) for i in range(n)]
                j = congruence_closure(alg, pairs)
                if j not in known:
                    known.add(j)
                    new.append(j)
        frontier = new
    return sorted(known)


def congruence_blocks(theta):
    blocks = {}
    for i, r in enumerate(theta):
        blocks.setdefault(r, []).append(i)
    return [tuple(b) for _, b in sorted(blocks.items())]


def quotient(alg, theta, name=None):
    """Quotient algebra and the projection map element -> class index."""
    blocks = congruence_blocks(theta)
    index = {}
    for ci, block in enumerate(blocks):
        for x in block:
            index[x] = ci
    tables = {}
    for opname, ar in alg.signature.ops:
        if ar == 0:
            tables[opname] = index[alg.const(opname)]
        elif ar == 1:
            t = alg.tables[opname]
            tables[opname] = [index[t[b[0]]] for b in blocks]
        else:
            t = alg.tables[opname]
            tables[opname] = [
                [index[t[b[0]][c[0]]] for c in blocks] for b in blocks
            ]
    labels = ["[" + alg.label(b[0]) + "]" for b in blocks]
    q = FiniteAlgebra(
        name or alg.name + "/theta", len(blocks), alg.signature, tables, labels=labels
    )
    return q, [index[x] for x in range(alg.size)]


def restrict_congruence(theta, subuniverse):
    """The restriction of a congruence to a subuniverse, as a pair set."""
    sub = sorted(subuniverse)
    return frozenset(
        (x, y) for x in sub for y in sub if theta[x] == theta[y]
    )


# ---------------------------------------------------------------------------
# congruence pairs and CP
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CongruencePair:
    alg: object
    x1: tuple
    x2: tuple
    r: tuple  # congruence of the full algebra restricted to Sg(X1) members
    s: tuple

    def sg1(self):
        return subalgebra_generate(self.alg, self.x1)

    def sg2(self):
        return subalgebra_generate(self.alg, self.x2)

    def sg12(self):
        return subalgebra_generate(self.alg, set(self.x1) & set(self.x2))

    def agrees(self):
        common = self.sg12()
        r_pairs = {(x, y) for x in common for y in common if self.r[x] == self.r[y]}
        s_pairs = {(x, y) for x in common for y in common if self.s[x] == self.s[y]}
        return r_pairs == s_pairs


def cp_extend(pair, budget=None):
    """A congruence T of the whole algebra whose restrictions to Sg(X1)
    and Sg(X2) are R and S; None when no such T exists.  The finest
    witness in deterministic order is returned (identity pairs extend to
    the identity)."""
    if not pair.agrees():
        raise PreconditionError("R and S disagree on Sg(X1 cap X2)")
    alg = pair.alg
    sg1, sg2 = pair.sg1(), pair.sg2()
    want_r = restrict_congruence(pair.r, sg1)
    want_s = restrict_congruence(pair.s, sg2)
    candidates = all_congruences(alg, budget=budget)
    candidates.sort(key=lambda t: (sum(1 for i, r in enumerate(t) if r != i), t))
    for theta in candidates:
        if (
            restrict_congruence(theta, sg1) == want_r
            and restrict_congruence(theta, sg2) == want_s
        ):
            return theta
    return None


def congruence_on_subalgebra(alg, subuniverse, blocks):
    """Encode an equivalence on a subuniverse as a full-length tuple
    (identity outside), for use as the R/S field of CongruencePair."""
    rep = list(range(alg.size))
    for block in blocks:
        least = min(block)
        for x in block:
            rep[x] = least
    return tuple(rep)


def principal_congruence_on(alg, subuniverse, pairs):
    """The congruence of the subalgebra generated by the pairs, encoded
    as a full-length tuple (identity outside the subuniverse)."""
    sub = frozenset(subuniverse)
    parent = list(range(alg.size))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y):
        rx, ry = find(x), find(y)
        if rx == ry:
            return False
        if ry < rx:
            rx, ry = ry, rx
        parent[ry] = rx
        return True

    queue = [p for p in pairs if union(*p)]
    unary = [alg.tables[nm] for nm, ar in alg.signature.ops if ar == 1]
    binary = [alg.tables[nm] for nm, ar in alg.signature.ops if ar == 2]
    while queue:
        x, y = queue.pop()
        for t in unary:
            if t[x] in sub and t[y] in sub and union(t[x], t[y]):
                queue.append((t[x], t[y]))
        for t in binary:
            for z in sub:
                for u, v in ((t[x][z], t[y][z]), (t[z][x], t[z][y])):
                    if u in sub and v in sub and union(u, v):
                        queue.append((u, v))
    return tuple(find(x) for x in range(alg.size))


# ---------------------------------------------------------------------------
# amalgamation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AmalgamProblem:
    a: object
    b: object
    c: object
    m: tuple  # embedding C -> A
    n: tuple  # embedding C -> B
    max_size: int = 0

    def validate(self):
        if len(set(self.m)) != self.c.size or len(set(self.n)) != self.c.size:
            raise PreconditionError("m and n must be injective")
        if not is_homomorphism(self.c, self.a, list(self.m)):
            raise PreconditionError("m is not a homomorphism")
        if not is_homomorphism(self.c, self.b, list(self.n)):
            raise PreconditionError("n is not a homomorphism")


def amalgamate(problem, require_super=False, budget=None):
    """Search (D, k, h) with k.m = h.n, both injective, deterministically.

    Candidate D's are quotients of A x B by its congruences, congruences
    enumerated smallest-first (fewest collapsed pairs); for each D the
    embeddings are searched by generator images.  Returns (D, k, h) or None.
    """
    problem.validate()
    budget = budget or budgets.from_env()
    bound = problem.max_size or budget.amalgam_size
    p = product([problem.a, problem.b])
    thetas = all_congruences(p, budget=budget)

    # smallest candidate D first (most-collapsed congruence first)
    def quotient_size(theta):
        return len(set(theta))

    thetas.sort(key=lambda t: (quotient_size(t), t))
    for theta in thetas:
        d, _ = quotient(p, theta, name="amalgam-candidate")
        if d.size > bound or d.size < problem.c.size:
            continue
        for k in homomorphisms(problem.a, d, injective=True):
            seed = {problem.n[c]: k[problem.m[c]] for c in range(problem.c.size)}
            if len(set(seed.values())) != len(set(seed.keys())):
                continue
            for h in homomorphisms(problem.b, d, injective=True, seed=seed):
                if require_super and not superamalgam_check(problem, d, k, h):
                    continue
                return d, k, h
    return None


def superamalgam_check(problem, d, k, h):
    """Order reflection: k(a) <= h(b) forces a C-interpolant t with
    a <= m(t) and n(t) <= b; checked over all |A| x |B| pairs."""
    a_alg, b_alg, c_alg = problem.a, problem.b, problem.c
    for x in range(a_alg.size):
        for y in range(b_alg.size):
            if not d.leq(k[x], h[y]):
                continue
            if not any(
                a_alg.leq(x, problem.m[t]) and b_alg.leq(problem.n[t], y)
                for t in range(c_alg.size)
            ):
                return False
    return True


# ---------------------------------------------------------------------------
# weak interpolation
# ---------------------------------------------------------------------------


def interpolant_search(alg, x1, x2, x, z, tau_bound=None, budget=None):
    """y in Sg(X1 cap X2) with x <= y <= z; when the identity-term phase is
    empty, retry against n-fold oplus powers of z (n <= tau_bound).

    Returns (y, n) with n = 1 for the identity-term case, or None.
    """
    budget = budget or budgets.from_env()
    tau_bound = tau_bound or budget.tau_power
    sg1 = subalgebra_generate(alg, x1)
    sg2 = subalgebra_generate(alg, x2)
    if x not in sg1:
        raise PreconditionError("x must lie in Sg(X1)")
    if z not in sg2:
        raise PreconditionError("z must lie in Sg(X2)")
    if not alg.leq(x, z):
        raise PreconditionError("need x <= z")
    common = sorted(subalgebra_generate(alg, set(x1) & set(x2)))
    for y in common:
        if alg.leq(x, y) and alg.leq(y, z):
            return y, 1
    add = alg.tables["oplus"] if "oplus" in alg.signature else alg.tables["join"]
    zn = z
    for n in range(2, tau_bound + 1):
        zn = add[zn][z]
        for y in common:
            if alg.leq(x, y) and alg.leq(y, zn):
                return y, n
    return None


# ---------------------------------------------------------------------------
# discriminator and Gratzer-Schmidt
# ---------------------------------------------------------------------------


def discriminator_check(alg, d_table):
    """The three schemata for a unary discriminator-style term:
    (a) x <= d(x); (b) d(d(x)) <= d(x); (c) f(x) <= d(x) for every
    extra operator f.  Returns (bool, violations)."""
    if len(d_table) != alg.size:
        raise DomainError("d table has wrong length")
    violations = []
    for x in range(alg.size):
        if not alg.leq(x, d_table[x]):
            violations.append(("a", x))
            break
    for x in range(alg.size):
        if not alg.leq(d_table[d_table[x]], d_table[x]):
            violations.append(("b", x))
            break
    for name in alg.extra_operator_names():
        t = alg.tables[name]
        for x in range(alg.size):
            if not alg.leq(t[x], d_table[x]):
                violations.append(("c", (name, x)))
                break
    return not violations, violations


def is_distributive(alg):
    for a in range(alg.size):
        for b in range(alg.size):
            for c in range(alg.size):
                if alg.meet(a, alg.join(b, c)) != alg.join(
                    alg.meet(a, b), alg.meet(a, c)
                ):
                    return False
    return True


def is_relatively_complemented(alg):
    """Every interval [c, d] is complemented."""
    n = alg.size
    for c in range(n):
        for d in range(n):
            if not alg.leq(c, d):
                continue
            for a in range(n):
                if not (alg.leq(c, a) and alg.leq(a, d)):
                    continue
                if not any(
                    alg.leq(c, b)
                    and alg.leq(b, d)
                    and alg.join(a, b) == d
                    and alg.meet(a, b) == c
                    for b in range(n)
                ):
                    return False
    return True


def gratzer_schmidt_check(alg, bound=None, budget=None):
    """Ideal/congruence correspondence on the bounded-lattice reduct.

    Computes both lattices, tests the canonical map I |-> Co(I) for being
    an order isomorphism, independently tests distributivity + relative
    complementation + minimum, and asserts the biconditional.
    """
    budget = budget or budgets.from_env()
    lat = lattice_reduct(alg)
    ideals = enumerate_ideals(lat, mode="lattice", bound=bound, budget=budget)
    congruences = all_congruences(lat, budget=budget, bound=bound or max(budget.spectrum, 20))
    mapping = {}
    for ideal in ideals:
        theta = congruence_closure(lat, [(x, lat.zero) for x in ideal.members])
        mapping[ideal.members] = theta
    injective = len(set(mapping.values())) == len(mapping)
    surjective = set(mapping.values()) == set(congruences)
    monotone = all(
        (i.members <= j.members)
        == _congruence_leq(mapping[i.members], mapping[j.members])
        for i in ideals
        for j in ideals
    )
    correspondence = injective and surjective and monotone
    conditions = (
        is_distributive(lat)
        and is_relatively_complemented(lat)
        and lat.zero is not None
    )
    return {
        "correspondence": correspondence,
        "distributive": is_distributive(lat),
        "relatively_complemented": is_relatively_complemented(lat),
        "has_minimum": True,
        "conditions": conditions,
        "biconditional": correspondence == conditions,
    }


def _congruence_leq(t1, t2):
    """t1 finer-or-equal t2 as partitions (every t1 class inside a t2 class)."""
    n = len(t1)
    for x in range(n):
        for y in range(n):
            if t1[x] == t1[y] and t2[x] != t2[y]:
                return False
    return True
