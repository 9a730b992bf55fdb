"""Filters, prime/maximal spectra, the Zariski topology on Max, and
theory pairs with consistency, completion and saturation."""

from dataclasses import dataclass
from itertools import combinations

from . import budgets
from .algebra import AxiomReport
from .errors import (
    DomainError,
    PreconditionError,
    ResourceError,
    SignatureError,
)


@dataclass(frozen=True)
class Filter:
    """A star-closed upward-closed subset of a finite algebra."""

    alg: object
    members: frozenset

    def __post_init__(self):
        object.__setattr__(self, "members", frozenset(self.members))

    @property
    def proper(self):
        return self.alg.zero not in self.members

    def bitmask(self):
        return sum(1 << i for i in self.members)

    def __contains__(self, x):
        return x in self.members

    def __le__(self, other):
        return self.members <= other.members

    def sorted_members(self):
        return sorted(self.members)


def is_filter(alg, members):
    s = set(members)
    if not s or alg.one not in s:
        return False
    for a in s:
        for b in s:
            if alg.star(a, b) not in s:
                return False
        for b in range(alg.size):
            if alg.leq(a, b) and b not in s:
                return False
    return True


def generate_filter(alg, seed):
    """Fl: least filter containing the seed (may be improper)."""
    s = set(seed)
    s.add(alg.one)
    changed = True
    while changed:
        changed = False
        snapshot = list(s)
        for a in snapshot:
            for b in snapshot:
                v = alg.star(a, b)
                if v not in s:
                    s.add(v)
                    changed = True
            for b in range(alg.size):
                if alg.leq(a, b) and b not in s:
                    s.add(b)
                    changed = True
    return Filter(alg, frozenset(s))


def _upsets(alg):
    """All nonempty upward-closed subsets, by DFS over a linear extension."""
    n = alg.size
    above = [frozenset(b for b in range(n) if alg.leq(a, b)) for a in range(n)]
    # visit elements from top to bottom so the up-closure constraint is local
    order = sorted(range(n), key=lambda a: (len(above[a]), a))
    out = []

    def rec(i, chosen):
        if i == len(order):
            if chosen:
                out.append(frozenset(chosen))
            return
        e = order[i]
        # excluding e is always allowed
        rec(i + 1, chosen)
        # including e requires everything above e already in
        if above[e] - {e} <= chosen:
            rec(i + 1, chosen | {e})

    rec(0, frozenset())
    return out


def is_prime_filter(alg, members):
    if alg.zero in members:
        return False
    for a in range(alg.size):
        for b in range(alg.size):
            if alg.join(a, b) in members and a not in members and b not in members:
                return False
    return True


def enumerate_filters(alg, kind="all-proper", bound=None, budget=None):
    """Exhaustive filter enumeration (up-set scan with closure pruning).

    kind: all-proper | prime | maximal.  Output sorted by bitmask.
    """
    budget = budget or budgets.from_env()
    bound = bound if bound is not None else budget.spectrum
    if alg.size > bound:
        raise ResourceError(
            "filter enumeration bound %d exceeded by %r (size %d)"
            % (bound, alg.name, alg.size)
        )
    star = alg.star
    filters = []
    for up in _upsets(alg):
        ok = True
        for a in up:
            for b in up:
                if star(a, b) not in up:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            filters.append(up)
    proper = [f for f in filters if alg.zero not in f]
    proper.sort(key=lambda f: sum(1 << i for i in f))
    if kind == "all-proper":
        chosen = proper
    elif kind == "prime":
        chosen = [f for f in proper if is_prime_filter(alg, f)]
    elif kind == "maximal":
        chosen = [
            f for f in proper if not any(f < g for g in proper)
        ]
    else:
        raise DomainError("unknown filter kind %r" % kind)
    return [Filter(alg, f) for f in chosen]


# ---------------------------------------------------------------------------
# spectra and the Zariski topology on Max
# ---------------------------------------------------------------------------


class SpectrumSpace:
    """Spec(B) and Max(B) with the basic Zariski sets.

    Point sets are returned as frozensets of indices into max_points
    (or prime_points for the unrestricted V/D variants).
    """

    def __init__(self, alg, prime_points, max_points):
        self.alg = alg
        self.prime_points = prime_points
        self.max_points = max_points
        self._vm = {
            a: frozenset(i for i, f in enumerate(max_points) if a in f.members)
            for a in range(alg.size)
        }
        full = frozenset(range(len(max_points)))
        self.basis = {a: full - self._vm[a] for a in range(alg.size)}
        self._v = {
            a: frozenset(i for i, f in enumerate(prime_points) if a in f.members)
            for a in range(alg.size)
        }

    def V(self, a):
        return self._v[a]

    def D(self, a):
        return frozenset(range(len(self.prime_points))) - self._v[a]

    def VM(self, a):
        return self._vm[a]

    def DM(self, a):
        return self.basis[a]

    def VM_set(self, xs):
        out = frozenset(range(len(self.max_points)))
        for a in xs:
            out &= self.VM(a)
        return out

    def DM_set(self, xs):
        return frozenset(range(len(self.max_points))) - self.VM_set(xs)

    # finite topology on Max generated by the D_M basis
    def opens(self):
        base = sorted(set(self.basis.values()), key=sorted)
        out = {frozenset()}
        frontier = [frozenset()]
        while frontier:
            u = frontier.pop()
            for b in base:
                v = u | b
                if v not in out:
                    out.add(v)
                    frontier.append(v)
        return out

    def interior(self, s):
        out = frozenset()
        for b in set(self.basis.values()):
            if b <= s:
                out |= b
        return out

    def closure(self, s):
        full = frozenset(range(len(self.max_points)))
        return full - self.interior(full - s)

    def nowhere_dense(self, s):
        return not self.interior(self.closure(s))

    def is_discrete(self):
        pts = frozenset(range(len(self.max_points)))
        return all(self.interior(frozenset([p])) for p in pts)

    def report(self):
        points = []
        max_mask = {f.members for f in self.max_points}
        for f in self.prime_points:
            points.append(
                {
                    "members": f.sorted_members(),
                    "prime": True,
                    "maximal": f.members in max_mask,
                }
            )
        return {
            "format": "reslat/1",
            "points": points,
            "basis": {
                str(a): sorted(self.basis[a]) for a in range(self.alg.size)
            },
        }


def zariski_sets(alg, bound=None, budget=None):
    primes = enumerate_filters(alg, "prime", bound=bound, budget=budget)
    maxes = enumerate_filters(alg, "maximal", bound=bound, budget=budget)
    return SpectrumSpace(alg, primes, maxes)


def prime_lattice_filters(alg, bound=None, budget=None):
    """Prime filters of the bounded-lattice reduct (meet-closed up-sets).

    These separate the order in any distributive algebra: a <= b iff every
    prime lattice filter containing a contains b.  Star-filters cannot do
    this on chains with nilpotents (Fl{1/2} is improper in luk:3)."""
    budget = budget or budgets.from_env()
    bound = bound if bound is not None else budget.spectrum
    if alg.size > bound:
        raise ResourceError("filter enumeration bound exceeded")
    meet = alg.meet
    out = []
    for up in _upsets(alg):
        if alg.zero in up:
            continue
        if any(meet(a, b) not in up for a in up for b in up):
            continue
        if is_prime_filter(alg, up):
            out.append(up)
    out.sort(key=lambda f: sum(1 << i for i in f))
    return out


def verify_dm_lemma(alg, space=None, subset_size=2, bound=None, budget=None):
    """The six D_M/V_M identities, checked exhaustively.

    Items (i)-(v) and the forward half of (vi) quantify over Max as
    stated.  The backward half of (vi) is order separation and is checked
    over the prime filters of the lattice reduct, the only spectrum that
    separates on chains with nilpotent elements."""
    sp = space or zariski_sets(alg, bound=bound, budget=budget)
    lat_primes = prime_lattice_filters(alg, bound=bound, budget=budget)

    def VL(a):
        return frozenset(i for i, f in enumerate(lat_primes) if a in f)
    n = alg.size
    violations = []

    def check(aid, cond, witness):
        if not cond and all(v[0] != aid for v in violations):
            violations.append((aid, witness))

    for a in range(n):
        for b in range(n):
            check(
                "i-dm-join",
                sp.DM(a) & sp.DM(b) == sp.DM(alg.join(a, b)),
                (a, b),
            )
            check(
                "ii-dm-meet",
                sp.DM(a) | sp.DM(b) == sp.DM(alg.meet(a, b)) == sp.DM(alg.star(a, b)),
                (a, b),
            )
            check(
                "v-vm-meet",
                sp.VM(a) & sp.VM(b) == sp.VM(alg.meet(a, b)),
                (a, b),
            )
            check(
                "vi-max-forward",
                (not alg.leq(a, b)) or sp.VM(a) <= sp.VM(b),
                (a, b),
            )
            check(
                "vi-separation-iff",
                alg.leq(a, b) == (VL(a) <= VL(b)),
                (a, b),
            )
    full = frozenset(range(len(sp.max_points)))
    for k in range(1, subset_size + 1):
        for xs in combinations(range(n), k):
            fl = generate_filter(alg, xs)
            check(
                "iii-dm-cover",
                (sp.DM_set(xs) == full) == (len(fl.members) == n),
                xs,
            )
    for k in range(1, subset_size + 1):
        for xs in combinations(range(n), k):
            for ys in combinations(range(n), k):
                check(
                    "iv-dm-union",
                    sp.DM_set(set(xs) | set(ys)) == sp.DM_set(xs) | sp.DM_set(ys),
                    (xs, ys),
                )
    return AxiomReport("dm-lemma", not violations, violations)


def nowhere_dense_check(alg, a, parts, mode="join", space=None, budget=None):
    """Residual set of a finite join/meet decomposition, and its
    nowhere-density in the generated Max topology (not assumed discrete)."""
    if mode not in ("join", "meet"):
        raise DomainError("mode must be join or meet")
    sp = space or zariski_sets(alg, budget=budget)
    fold = alg.join if mode == "join" else alg.meet
    acc = parts[0]
    for p in parts[1:]:
        acc = fold(acc, p)
    if acc != a:
        raise PreconditionError(
            "%s of parts is %s, not %s" % (mode, alg.label(acc), alg.label(a))
        )
    if mode == "join":
        residual = sp.VM(a)
        for p in parts:
            residual -= sp.VM(p)
    else:
        residual = frozenset(range(len(sp.max_points)))
        for p in parts:
            residual &= sp.VM(p)
        residual -= sp.VM(a)
    return sp.nowhere_dense(residual), residual


def hausdorff_witness(alg, m_filter, n_filter, space=None):
    """Separating basic opens for two distinct maximal filters, built the
    way the compact-Hausdorff proof builds them: a = x=>y, b = y=>x."""
    if m_filter.members == n_filter.members:
        raise DomainError("filters must be distinct")
    xs = sorted(m_filter.members - n_filter.members)
    ys = sorted(n_filter.members - m_filter.members)
    if not xs or not ys:
        raise DomainError("maximal filters must be incomparable")
    x, y = xs[0], ys[0]
    a, b = alg.imp(x, y), alg.imp(y, x)
    sp = space or zariski_sets(alg)
    im = next(i for i, f in enumerate(sp.max_points) if f.members == m_filter.members)
    jn = next(i for i, f in enumerate(sp.max_points) if f.members == n_filter.members)
    if im not in sp.DM(a) or jn not in sp.DM(b) or (sp.DM(a) & sp.DM(b)):
        raise PreconditionError("separation construction failed; algebra not prelinear?")
    return a, b


# ---------------------------------------------------------------------------
# theory pairs
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TheoryPair:
    """A pair (Gamma, Delta) of element subsets of a finite algebra."""

    alg: object
    gamma: frozenset
    delta: frozenset

    def __post_init__(self):
        object.__setattr__(self, "gamma", frozenset(self.gamma))
        object.__setattr__(self, "delta", frozenset(self.delta))

    def is_complete(self):
        return self.gamma | self.delta == frozenset(range(self.alg.size))


def _meet_all(alg, xs):
    acc = alg.one
    for x in xs:
        acc = alg.meet(acc, x)
    return acc


def _join_all(alg, xs):
    acc = alg.zero
    for x in xs:
        acc = alg.join(acc, x)
    return acc


def pair_consistent(tp):
    """No finite meet of Gamma lies below a finite join of Delta.

    Monotonicity makes the single comparison meet(Gamma) <= join(Delta)
    (empty meet = 1, empty join = 0) equivalent to the subset scan.
    """
    alg = tp.alg
    return not alg.leq(_meet_all(alg, sorted(tp.gamma)), _join_all(alg, sorted(tp.delta)))


def pair_complete_extension(tp, record_steps=False):
    """Extend a consistent pair to a complete one, inserting elements in
    ascending index order; ties (both sides consistent) go to Gamma."""
    alg = tp.alg
    if not pair_consistent(tp):
        raise PreconditionError("pair is inconsistent")
    gamma, delta = set(tp.gamma), set(tp.delta)
    steps = []
    for a in range(alg.size):
        if a in gamma or a in delta:
            continue
        g_ok = pair_consistent(TheoryPair(alg, gamma | {a}, delta))
        d_ok = pair_consistent(TheoryPair(alg, gamma, delta | {a}))
        if not (g_ok or d_ok):
            # contradicts the extension dichotomy; cannot happen in a lattice
            raise PreconditionError("extension dichotomy failed at %s" % alg.label(a))
        if g_ok:
            gamma.add(a)
            side = "gamma"
        else:
            delta.add(a)
            side = "delta"
        steps.append((a, side, g_ok, d_ok))
    out = TheoryPair(alg, frozenset(gamma), frozenset(delta))
    if record_steps:
        return out, steps
    return out


def _alpha_of(alg):
    dims = [
        int(n[2:])
        for n in alg.signature.names()
        if n.startswith("c_") and n[2:].isdigit()
    ]
    if not dims:
        raise SignatureError("algebra carries no cylindrifier tables")
    return sorted(dims)


def _replacement_name(alpha_size, j, k):
    tau = list(range(alpha_size))
    tau[j] = k
    return "s_" + "".join(str(t) for t in tau)


def pair_saturated(tp, alg=None):
    """Saturation: c_j a in Gamma demands a witness substitution instance.

    Returns (True, None) or (False, (a, j)) with the first violation.
    """
    alg = alg or tp.alg
    dims = _alpha_of(alg)
    from .kripke import dimension_set  # local import to avoid a cycle

    for a in range(alg.size):
        dims_a = dimension_set(alg, a)
        for j in dims:
            cja = alg.apply("c_%d" % j, a)
            if cja not in tp.gamma:
                continue
            witnessed = False
            for k in dims:
                if k in dims_a:
                    continue
                name = _replacement_name(len(dims), j, k)
                if name not in alg.signature:
                    raise SignatureError("missing substitution table %r" % name)
                if alg.apply(name, a) in tp.gamma:
                    witnessed = True
                    break
            if not witnessed:
                return False, (a, j)
    return True, None


def filters_as_points(filters):
    return [f.members for f in filters]


def upset(alg, a):
    return frozenset(b for b in range(alg.size) if alg.leq(a, b))
