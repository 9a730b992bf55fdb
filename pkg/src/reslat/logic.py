"""Formula frontend: parsing, evaluation over finite chains, semantic
consequence, Lindenbaum algebras, type spaces and the generic-filter
engine behind the finite omitting-types machinery.

Consequence here is semantic over a declared finite chain family.  For a
BL-sound calculus, provability implies validity on these chains; the
converse is not claimed.
"""

from dataclasses import dataclass
from itertools import product as iproduct

from . import budgets
from .algebra import ChainSpec, FiniteAlgebra, Signature, make_chain
from .errors import (
    DomainError,
    InvalidSpecError,
    NoGenericPointError,
    ResourceError,
)
from .spectra import upset, zariski_sets

# ---------------------------------------------------------------------------
# formulas
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Konst:
    value: int  # 0 or 1

    def __str__(self):
        return str(self.value)


@dataclass(frozen=True)
class Neg:
    sub: object

    def __str__(self):
        return "~%s" % _wrap(self.sub)


@dataclass(frozen=True)
class Bin:
    op: str  # one of & -> /\ \/ <->
    left: object
    right: object

    def __str__(self):
        return "%s %s %s" % (_wrap(self.left), self.op, _wrap(self.right))


def _wrap(f):
    if isinstance(f, (Var, Konst, Neg)):
        return str(f)
    return "(%s)" % f


class ParseError(InvalidSpecError):
    def __init__(self, message, position):
        self.position = position
        super().__init__("%s (at position %d)" % (message, position))


_TOKENS = ("->", "<->", "&", "/\\", "\\/", "~", "(", ")")


def tokenize(text):
    out = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch in " \t\r\n":
            i += 1
            continue
        matched = False
        for t in ("<->", "->", "/\\", "\\/", "&", "~", "(", ")"):
            if text.startswith(t, i):
                out.append((t, i))
                i += len(t)
                matched = True
                break
        if matched:
            continue
        if ch.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            word = text[i:j]
            if word not in ("0", "1"):
                raise ParseError("bad numeral %r" % word, i)
            out.append((word, i))
            i = j
            continue
        if ch.isalpha():
            j = i
            while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                j += 1
            out.append((text[i:j], i))
            i = j
            continue
        raise ParseError("unexpected character %r" % ch, i)
    out.append((None, len(text)))
    return out


def parse(text):
    """Grammar: imp := or (('->'|'<->') imp)?; or := and ('\\/' and)*;
    and := strong ('/\\' strong)*; strong := unary ('&' unary)*;
    unary := '~' unary | atom.  Implication is right associative."""
    tokens = tokenize(text)
    pos = [0]

    def peek():
        return tokens[pos[0]][0]

    def where():
        return tokens[pos[0]][1]

    def advance():
        tok = tokens[pos[0]]
        pos[0] += 1
        return tok[0]

    def parse_imp():
        left = parse_or()
        if peek() in ("->", "<->"):
            op = advance()
            right = parse_imp()
            return Bin(op, left, right)
        return left

    def parse_or():
        node = parse_and()
        while peek() == "\\/":
            advance()
            node = Bin("\\/", node, parse_and())
        return node

    def parse_and():
        node = parse_strong()
        while peek() == "/\\":
            advance()
            node = Bin("/\\", node, parse_strong())
        return node

    def parse_strong():
        node = parse_unary()
        while peek() == "&":
            advance()
            node = Bin("&", node, parse_unary())
        return node

    def parse_unary():
        if peek() == "~":
            advance()
            return Neg(parse_unary())
        return parse_atom()

    def parse_atom():
        tok = peek()
        if tok == "(":
            advance()
            node = parse_imp()
            if peek() != ")":
                raise ParseError("expected ')'", where())
            advance()
            return node
        if tok in ("0", "1"):
            advance()
            return Konst(int(tok))
        if tok is None or tok in _TOKENS:
            raise ParseError("expected a formula", where())
        advance()
        return Var(tok)

    node = parse_imp()
    if peek() is not None:
        raise ParseError("trailing input", where())
    return node


def expand(f):
    """Rewrite derived connectives into & and -> (idempotent, syntactic)."""
    if isinstance(f, (Var, Konst)):
        return f
    if isinstance(f, Neg):
        return Bin("->", expand(f.sub), Konst(0))
    left, right = expand(f.left), expand(f.right)
    if f.op == "&" or f.op == "->":
        return Bin(f.op, left, right)
    if f.op == "/\\":
        return Bin("&", left, Bin("->", left, right))
    if f.op == "\\/":
        a = Bin("->", Bin("->", left, right), right)
        b = Bin("->", Bin("->", right, left), left)
        return Bin("&", a, Bin("->", a, b))
    if f.op == "<->":
        return Bin("&", Bin("->", left, right), Bin("->", right, left))
    raise DomainError("unknown connective %r" % f.op)


def variables(f):
    if isinstance(f, Var):
        return {f.name}
    if isinstance(f, Konst):
        return set()
    if isinstance(f, Neg):
        return variables(f.sub)
    return variables(f.left) | variables(f.right)


def eval_formula(f, chain, valuation):
    """Evaluate over a chain; derived connectives go through the primitive
    meet/join tables directly (the expansion route must agree; tested)."""
    if isinstance(f, Var):
        if f.name not in valuation:
            raise DomainError("unbound variable %r" % f.name)
        return valuation[f.name]
    if isinstance(f, Konst):
        return chain.zero if f.value == 0 else chain.one
    if isinstance(f, Neg):
        return chain.imp(eval_formula(f.sub, chain, valuation), chain.zero)
    a = eval_formula(f.left, chain, valuation)
    b = eval_formula(f.right, chain, valuation)
    if f.op == "&":
        return chain.star(a, b)
    if f.op == "->":
        return chain.imp(a, b)
    if f.op == "/\\":
        return chain.meet(a, b)
    if f.op == "\\/":
        return chain.join(a, b)
    if f.op == "<->":
        return chain.star(chain.imp(a, b), chain.imp(b, a))
    raise DomainError("unknown connective %r" % f.op)


def parse_chain_list(text):
    """Chain list syntax: 'luk:2..6,godel:3' -> list of ChainSpec."""
    out = []
    for piece in text.split(","):
        piece = piece.strip()
        if not piece:
            continue
        kind, _, num = piece.partition(":")
        kind = {"luk": "lukasiewicz", "godel": "godel"}.get(kind.lower())
        if kind is None:
            raise InvalidSpecError("bad chain %r" % piece)
        if ".." in num:
            lo, hi = num.split("..")
            for n in range(int(lo), int(hi) + 1):
                out.append(ChainSpec(kind, n))
        else:
            out.append(ChainSpec(kind, int(num)))
    if not out:
        raise InvalidSpecError("empty chain list")
    return out


@dataclass(frozen=True)
class Theory:
    axioms: tuple  # formulas
    semantics: tuple  # ChainSpec list

    def __post_init__(self):
        if not self.semantics:
            raise InvalidSpecError("theory needs a nonempty chain list")

    @classmethod
    def from_json(cls, data):
        return cls(
            tuple(parse(s) for s in data.get("axioms", [])),
            tuple(parse_chain_list(",".join(data["chains"]))),
        )


def _valuations(chain, names):
    for vals in iproduct(range(chain.size), repeat=len(names)):
        yield dict(zip(names, vals))


def is_tautology(formula, chain_specs):
    """(True, None) or (False, (chain spec, counter-valuation))."""
    names = sorted(variables(formula))
    for spec in chain_specs:
        chain = make_chain(spec)
        for val in _valuations(chain, names):
            if eval_formula(formula, chain, val) != chain.one:
                pretty = {k: chain.label(v) for k, v in val.items()}
                return False, (str(spec), pretty)
    return True, None


def consequence(theory, formula):
    """Semantic consequence over the theory's chains: the formula holds in
    every valuation making every axiom fully true."""
    names = sorted(
        set().union(variables(formula), *[variables(a) for a in theory.axioms])
    )
    for spec in theory.semantics:
        chain = make_chain(spec)
        for val in _valuations(chain, names):
            if any(
                eval_formula(a, chain, val) != chain.one for a in theory.axioms
            ):
                continue
            if eval_formula(formula, chain, val) != chain.one:
                pretty = {k: chain.label(v) for k, v in val.items()}
                return False, (str(spec), pretty)
    return True, None


# ---------------------------------------------------------------------------
# Lindenbaum algebras over finite-chain semantics
# ---------------------------------------------------------------------------


class LindenbaumAlgebra:
    """Formulas over n variables modulo semantic equivalence.

    Classes are value vectors over all (chain, valuation) pairs satisfying
    the theory; operations act coordinatewise; the representative of a
    class is the first formula reaching it in breadth-first enumeration."""

    def __init__(self, theory, n, algebra, vectors, reps, generator_classes):
        self.theory = theory
        self.n = n
        self.algebra = algebra
        self.vectors = vectors  # class index -> value vector
        self.reps = reps  # class index -> representative formula
        self.generator_classes = generator_classes  # class of p0..p_{n-1}

    def class_of(self, formula):
        vec = _value_vector(formula, self._coords)
        return self._index[vec]

    def attach_coords(self, coords, index):
        self._coords = coords
        self._index = index


def _value_vector(formula, coords):
    return tuple(eval_formula(formula, chain, val) for chain, val in coords)


def lindenbaum(theory, n, budget=None):
    budget = budget or budgets.from_env()
    chains = [make_chain(s) for s in theory.semantics]
    names = ["p%d" % i for i in range(n)]
    coords = []
    for chain in chains:
        for val in _valuations(chain, names):
            if all(
                eval_formula(a, chain, val) == chain.one for a in theory.axioms
            ):
                coords.append((chain, val))
    if not coords:
        raise InvalidSpecError("theory has no satisfying valuations on its chains")
    ops = ("join", "meet", "star", "imp")

    def vec_op(name, *vecs):
        return tuple(
            coords[i][0].apply(name, *[v[i] for v in vecs])
            for i in range(len(coords))
        )

    zero_vec = tuple(c.zero for c, _ in coords)
    one_vec = tuple(c.one for c, _ in coords)
    gen_vecs = [
        tuple(val[nm] for _, val in coords) for nm in names
    ]
    universe = {}
    order = []

    def add(v):
        if v not in universe:
            if len(universe) >= budget.closure:
                raise ResourceError("Lindenbaum closure budget exceeded")
            universe[v] = len(order)
            order.append(v)
            return True
        return False

    add(zero_vec)
    add(one_vec)
    for g in gen_vecs:
        add(g)
    frontier = list(order)
    known = list(order)
    while frontier:
        new = []
        for v in frontier:
            for name in ops:
                for w in known:
                    for r in (vec_op(name, v, w), vec_op(name, w, v)):
                        if add(r):
                            new.append(r)
        known.extend(new)
        frontier = new
    # canonical order: sort vectors, rebuild indices
    final = sorted(order)
    index = {v: i for i, v in enumerate(final)}
    tables = {
        "zero": index[zero_vec],
        "one": index[one_vec],
    }
    for name in ops:
        tables[name] = [
            [index[vec_op(name, a, b)] for b in final] for a in final
        ]
    reps = _representatives(final, index, coords, names, budget)
    labels = [str(reps[i]) if reps[i] is not None else "e%d" % i for i in range(len(final))]
    alg = FiniteAlgebra(
        "lindenbaum(n=%d)" % n,
        len(final),
        Signature(tuple((nm, 2) for nm in ops) + (("zero", 0), ("one", 0))),
        tables,
        labels=labels,
    )
    lind = LindenbaumAlgebra(
        theory, n, alg, final, reps, [index[g] for g in gen_vecs]
    )
    lind.attach_coords(coords, index)
    return lind


def _representatives(final, index, coords, names, budget):
    """First formula per class, breadth-first: constants, then variables
    by index, then one-step combinations of already-named classes.  Every
    class is reachable because the universe was closed under the same
    connectives."""
    reps = [None] * len(final)
    remaining = len(final)

    def try_add(f):
        nonlocal remaining
        i = index.get(_value_vector(f, coords))
        if i is not None and reps[i] is None:
            reps[i] = f
            remaining -= 1
            return True
        return False

    for f in [Konst(0), Konst(1)] + [Var(nm) for nm in names]:
        try_add(f)
    frontier = [r for r in reps if r is not None]
    while remaining and frontier:
        have = [r for r in reps if r is not None]
        new = []
        for f in frontier:
            candidates = [Neg(f)]
            for g in have:
                for op in ("&", "->", "/\\", "\\/"):
                    candidates.append(Bin(op, f, g))
                    candidates.append(Bin(op, g, f))
            for c in candidates:
                if try_add(c):
                    new.append(c)
        frontier = new
    return reps


# ---------------------------------------------------------------------------
# types, generic filters, type spaces
# ---------------------------------------------------------------------------


def non_principal_certify(alg, elements):
    """Certificate: the finite meet of the listed elements is 0."""
    acc = alg.one
    for x in elements:
        acc = alg.meet(acc, x)
    return acc == alg.zero


def generic_filter(alg, inside, avoid=(), verify_nowhere_dense=False,
                   bound=None, budget=None):
    """Least maximal filter containing `inside` and avoiding every listed
    point set.

    `avoid` entries are collections of maximal filters (Filter objects or
    member frozensets).  With verify_nowhere_dense=True each avoid set is
    first checked nowhere dense in the finite Max topology (in a finite
    Hausdorff space this forces emptiness)."""
    if inside == alg.zero:
        raise DomainError("inside element must be nonzero")
    space = zariski_sets(alg, bound=bound, budget=budget)
    maxes = space.max_points
    avoid_sets = []
    for entry in avoid:
        pts = set()
        for f in entry:
            members = f.members if hasattr(f, "members") else frozenset(f)
            for i, g in enumerate(maxes):
                if g.members == members:
                    pts.add(i)
        avoid_sets.append(frozenset(pts))
    if verify_nowhere_dense:
        for i, pts in enumerate(avoid_sets):
            if not space.nowhere_dense(pts):
                raise DomainError("avoid set %d is not nowhere dense" % i)
    banned = frozenset().union(*avoid_sets) if avoid_sets else frozenset()
    admissible = [
        i
        for i, f in enumerate(maxes)
        if inside in f.members and i not in banned
    ]
    if not admissible:
        raise NoGenericPointError(
            "every maximal filter through %s is excluded" % alg.label(inside),
            inside=inside,
            avoid=avoid_sets,
        )
    best = min(admissible, key=lambda i: maxes[i].bitmask())
    return maxes[best]


def type_space(alg, bound=None, budget=None):
    """Maximal filters as a spectrum, each tagged with principality
    (generated by a single element)."""
    space = zariski_sets(alg, bound=bound, budget=budget)
    tags = []
    for f in space.max_points:
        m = alg.one
        for x in f.members:
            m = alg.meet(m, x)
        tags.append(f.members == upset(alg, m))
    return space, tags


def isolated_dense_check(alg, space=None, tags=None, bound=None, budget=None):
    """Isolated (principal) points are dense: every nonempty basic open
    D_M(a) contains a principal point; cross-checked through completeness:
    every nonzero element dominates a complete (atom-like) element."""
    if space is None or tags is None:
        space, tags = type_space(alg, bound=bound, budget=budget)
    principal = {i for i, t in enumerate(tags) if t}
    for a in range(alg.size):
        dm = space.DM(a)
        if dm and not (dm & principal):
            return False, ("basic-open", a)
    complete = [
        c
        for c in range(alg.size)
        if c != alg.zero
        and all(
            b == alg.zero or not alg.leq(b, c) or alg.leq(c, b)
            for b in range(alg.size)
        )
    ]
    for a in range(alg.size):
        if a == alg.zero:
            continue
        if not any(alg.leq(c, a) for c in complete):
            return False, ("completeness", a)
    return True, None


def join_of_atoms_is_one(alg):
    """Dense-set join shadow, instantiated with X = the atoms: when some
    atom sits below every nonzero element, their join is 1.

    Holds in complemented algebras; the underlying argument needs
    b ^ -b = 0 and fails on chains, so callers should expect
    False there."""
    from .free import atoms

    ats = atoms(alg)
    acc = alg.zero
    for a in ats:
        acc = alg.join(acc, a)
    covers = all(
        any(alg.leq(x, b) for x in ats)
        for b in range(alg.size)
        if b != alg.zero
    )
    return (not covers) or acc == alg.one
