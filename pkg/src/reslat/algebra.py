"""Finite algebras as operation tables.

The single carrier type is `FiniteAlgebra`: a universe 0..n-1 together with
named operation tables over a declared signature.  Chains built from the
Lukasiewicz and Godel t-norms use exact rationals for labels; no floating
point enters the core anywhere.
"""

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product as iproduct

from .errors import (
    DomainError,
    InternalError,
    InvalidSpecError,
    SignatureError,
)

# ops every algebra must carry
CORE_OPS = (
    ("join", 2),
    ("meet", 2),
    ("star", 2),
    ("imp", 2),
    ("zero", 0),
    ("one", 0),
)
CORE_NAMES = frozenset(n for n, _ in CORE_OPS)
# names that belong to the (residuated/MV) structure rather than to
# "extra" operators in the BAO sense
STRUCTURAL_NAMES = CORE_NAMES | {"oplus", "odot", "neg"}


@dataclass(frozen=True)
class Signature:
    """Declared operation names with arities; names must be unique."""

    ops: tuple  # tuple of (name, arity)

    def __post_init__(self):
        names = [n for n, _ in self.ops]
        if len(set(names)) != len(names):
            raise SignatureError("duplicate op names in signature")
        for _, ar in self.ops:
            if ar not in (0, 1, 2):
                raise SignatureError("arity must be 0, 1 or 2")

    def arity(self, name):
        for n, ar in self.ops:
            if n == name:
                return ar
        raise SignatureError("unknown op %r" % name)

    def names(self):
        return [n for n, _ in self.ops]

    def __contains__(self, name):
        return any(n == name for n, _ in self.ops)


class FiniteAlgebra:
    """Universe 0..size-1 plus one table per signature operation.

    Tables: arity 0 -> int, arity 1 -> tuple of ints,
    arity 2 -> row-major tuple of tuples.  Values are immutable after
    construction; all operations on the algebra are pure.
    """

    def __init__(self, name, size, signature, tables, labels=None):
        if size < 1:
            raise InvalidSpecError("size must be positive")
        self.name = name
        self.size = size
        self.signature = signature
        self.labels = tuple(labels) if labels is not None else None
        if self.labels is not None and len(self.labels) != size:
            raise InvalidSpecError("labels length must equal size")
        frozen = {}
        for opname, arity in signature.ops:
            if opname not in tables:
                raise SignatureError("missing table for %r" % opname)
            t = tables[opname]
            if arity == 0:
                t = int(t)
                self._check_elem(t, opname)
            elif arity == 1:
                t = tuple(int(v) for v in t)
                if len(t) != size:
                    raise SignatureError("unary table %r has wrong length" % opname)
                for v in t:
                    self._check_elem(v, opname)
            else:
                t = tuple(tuple(int(v) for v in row) for row in t)
                if len(t) != size or any(len(r) != size for r in t):
                    raise SignatureError("binary table %r has wrong shape" % opname)
                for row in t:
                    for v in row:
                        self._check_elem(v, opname)
            frozen[opname] = t
        extra = set(tables) - set(signature.names())
        if extra:
            raise SignatureError("tables without signature entry: %s" % sorted(extra))
        self.tables = frozen
        self._leq = None
        self._np = {}

    def _check_elem(self, v, opname):
        if not (0 <= v < self.size):
            raise SignatureError("table %r contains non-element %r" % (opname, v))

    # ---- basic access -------------------------------------------------

    def apply(self, name, *args):
        t = self.tables[name]
        ar = self.signature.arity(name)
        if len(args) != ar:
            raise SignatureError("op %r expects %d args" % (name, ar))
        if ar == 0:
            return t
        if ar == 1:
            return t[args[0]]
        return t[args[0]][args[1]]

    def const(self, name):
        return self.apply(name)

    @property
    def zero(self):
        return self.tables["zero"]

    @property
    def one(self):
        return self.tables["one"]

    def join(self, a, b):
        return self.tables["join"][a][b]

    def meet(self, a, b):
        return self.tables["meet"][a][b]

    def star(self, a, b):
        return self.tables["star"][a][b]

    def imp(self, a, b):
        return self.tables["imp"][a][b]

    def leq(self, a, b):
        """Lattice order: a <= b iff meet(a, b) == a."""
        return self.tables["meet"][a][b] == a

    def leq_matrix(self):
        if self._leq is None:
            m = self.tables["meet"]
            self._leq = tuple(
                tuple(m[a][b] == a for b in range(self.size)) for a in range(self.size)
            )
        return self._leq

    def label(self, i):
        if self.labels is not None:
            return self.labels[i]
        return "e%d" % i

    def element_index(self, ref):
        """Resolve an element by label, 'e<k>' name or integer index."""
        if isinstance(ref, int):
            if 0 <= ref < self.size:
                return ref
            raise DomainError("element index out of range: %r" % ref)
        ref = str(ref)
        if self.labels is not None and ref in self.labels:
            return self.labels.index(ref)
        if ref.startswith("e") and ref[1:].isdigit():
            return self.element_index(int(ref[1:]))
        if ref.isdigit():
            return self.element_index(int(ref))
        raise DomainError("unknown element %r of %s" % (ref, self.name))

    def extra_operator_names(self):
        """Unary ops beyond the residuated/MV structure (c_i, q_i, s_t, ...)."""
        return [
            n
            for n, ar in self.signature.ops
            if ar == 1 and n not in STRUCTURAL_NAMES
        ]

    def np_table(self, name):
        """Numpy view of a table, cached; used by the bulk verifiers."""
        if name not in self._np:
            import numpy

            self._np[name] = numpy.array(self.tables[name], dtype=numpy.int32)
        return self._np[name]

    def __repr__(self):
        return "FiniteAlgebra(%r, size=%d)" % (self.name, self.size)

    # ---- JSON ----------------------------------------------------------

    def to_json(self):
        ops = {}
        for opname, arity in self.signature.ops:
            t = self.tables[opname]
            if arity == 0:
                ops[opname] = t
            elif arity == 1:
                ops[opname] = list(t)
            else:
                ops[opname] = [list(r) for r in t]
        data = {"format": "reslat/1", "name": self.name, "size": self.size, "ops": ops}
        if self.labels is not None:
            data["labels"] = list(self.labels)
        return data

    def dumps(self):
        return json.dumps(self.to_json(), indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, data):
        size = int(data["size"])
        ops = data["ops"]
        sig = []
        for name in sorted(ops):
            t = ops[name]
            if isinstance(t, int):
                sig.append((name, 0))
            elif t and isinstance(t[0], list):
                sig.append((name, 2))
            else:
                sig.append((name, 1))
        return cls(
            data.get("name", "algebra"),
            size,
            Signature(tuple(sig)),
            ops,
            labels=data.get("labels"),
        )

    @classmethod
    def load(cls, path):
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_json(json.load(fh))


# ---------------------------------------------------------------------------
# t-norm chains
# ---------------------------------------------------------------------------

CHAIN_KINDS = ("lukasiewicz", "godel")
TNORM_KINDS = CHAIN_KINDS + ("product",)


@dataclass(frozen=True)
class ChainSpec:
    kind: str
    size: int

    def __post_init__(self):
        if self.kind not in CHAIN_KINDS:
            raise InvalidSpecError("unknown chain kind %r" % self.kind)
        if self.size < 2:
            raise InvalidSpecError("chain size must be >= 2")

    def __str__(self):
        short = "luk" if self.kind == "lukasiewicz" else "godel"
        return "%s:%d" % (short, self.size)


def _check_unit(x):
    if not (0 <= x <= 1):
        raise DomainError("value %s outside [0,1]" % x)


def tnorm_eval(kind, x, y):
    """Exact value of the named t-norm at rational points of [0,1]."""
    x, y = Fraction(x), Fraction(y)
    _check_unit(x)
    _check_unit(y)
    if kind == "lukasiewicz":
        return max(Fraction(0), x + y - 1)
    if kind == "godel":
        return min(x, y)
    if kind == "product":
        return x * y
    raise DomainError("unknown t-norm kind %r" % kind)


def residuum_closed_form(kind, x, y):
    """Closed-form residuum max{z : x*z <= y} for the two chain t-norms."""
    x, y = Fraction(x), Fraction(y)
    _check_unit(x)
    _check_unit(y)
    if kind == "lukasiewicz":
        return min(Fraction(1), 1 - x + y)
    if kind == "godel":
        return Fraction(1) if x <= y else y
    raise DomainError("no grid-closed residuum for kind %r" % kind)


def residuum_oracle(star_table, x, y):
    """Largest z with star(x, z) <= y, by descending scan of a chain table.

    This is the independent oracle for residuum_closed_form and for the imp
    tables of loaded algebras: elements are chain indices, order is index
    order, and star_table must be monotone in both arguments.
    """
    n = len(star_table)
    for z in range(n - 1, -1, -1):
        if star_table[x][z] <= y:
            return z
    raise InternalError("no residuum witness; star(x, 0) > y should be impossible")


def make_chain(spec):
    """Chain algebra on {0, 1/(n-1), ..., 1} for the given t-norm kind."""
    if not isinstance(spec, ChainSpec):
        spec = ChainSpec(*spec)
    n = spec.size
    den = n - 1
    labels = [str(Fraction(i, den)) for i in range(n)]
    join = [[max(i, j) for j in range(n)] for i in range(n)]
    meet = [[min(i, j) for j in range(n)] for i in range(n)]
    if spec.kind == "lukasiewicz":
        star = [[max(0, i + j - den) for j in range(n)] for i in range(n)]
        imp = [[min(den, den - i + j) for j in range(n)] for i in range(n)]
    else:
        star = [[min(i, j) for j in range(n)] for i in range(n)]
        imp = [[den if i <= j else j for j in range(n)] for i in range(n)]
    ops = {
        "join": join,
        "meet": meet,
        "star": star,
        "imp": imp,
        "zero": 0,
        "one": den,
    }
    sig = list(CORE_OPS)
    if spec.kind == "lukasiewicz":
        ops["oplus"] = [[min(den, i + j) for j in range(n)] for i in range(n)]
        ops["odot"] = star
        ops["neg"] = [den - i for i in range(n)]
        sig += [("oplus", 2), ("odot", 2), ("neg", 1)]
    return FiniteAlgebra(str(spec), n, Signature(tuple(sig)), ops, labels=labels)


def parse_builtin(text):
    """Builtin algebra syntax: luk:N, godel:N, optionally builtin: prefixed."""
    t = text.strip()
    if t.startswith("builtin:"):
        t = t[len("builtin:") :]
    kind, _, num = t.partition(":")
    kind = {"luk": "lukasiewicz", "lukasiewicz": "lukasiewicz", "godel": "godel"}.get(
        kind.lower()
    )
    if kind is None or not num.isdigit():
        raise InvalidSpecError("bad builtin algebra %r" % text)
    return make_chain(ChainSpec(kind, int(num)))


def load_algebra(ref):
    """Load an algebra from a builtin chain name or a JSON file path."""
    try:
        return parse_builtin(ref)
    except InvalidSpecError:
        pass
    return FiniteAlgebra.load(ref)


# ---------------------------------------------------------------------------
# class axiom checking
# ---------------------------------------------------------------------------

ALGEBRA_CLASSES = ("residuated-lattice", "bl", "mv", "heyting", "boolean")


@dataclass
class AxiomReport:
    class_checked: str
    passed: bool
    violations: list = field(default_factory=list)  # (axiom id, witness tuple)

    def witness(self, axiom_id):
        for aid, w in self.violations:
            if aid == axiom_id:
                return w
        return None

    def failed_ids(self):
        return [aid for aid, _ in self.violations]


def _derived_mv_ops(alg):
    """oplus/odot/neg, from the algebra's own tables when present, else
    via neg a = a -> 0, odot = star, oplus(a,b) = neg(neg a odot neg b)."""
    n = alg.size
    if "neg" in alg.signature:
        neg = alg.tables["neg"]
    else:
        z = alg.zero
        neg = tuple(alg.imp(a, z) for a in range(n))
    if "odot" in alg.signature:
        odot = alg.tables["odot"]
    else:
        odot = alg.tables["star"]
    if "oplus" in alg.signature:
        oplus = alg.tables["oplus"]
    else:
        oplus = tuple(
            tuple(neg[odot[neg[a]][neg[b]]] for b in range(n)) for a in range(n)
        )
    return oplus, odot, neg


def _axioms_for_class(alg, cls):
    """List of (axiom id, arity, predicate on element tuples)."""
    jn, mt, st, im = alg.join, alg.meet, alg.star, alg.imp
    one, zero = alg.one, alg.zero
    lattice = [
        ("join-comm", 2, lambda a, b: jn(a, b) == jn(b, a)),
        ("meet-comm", 2, lambda a, b: mt(a, b) == mt(b, a)),
        ("join-assoc", 3, lambda a, b, c: jn(a, jn(b, c)) == jn(jn(a, b), c)),
        ("meet-assoc", 3, lambda a, b, c: mt(a, mt(b, c)) == mt(mt(a, b), c)),
        ("absorb-1", 2, lambda a, b: jn(a, mt(a, b)) == a),
        ("absorb-2", 2, lambda a, b: mt(a, jn(a, b)) == a),
        ("bound-top", 1, lambda a: mt(a, one) == a),
        ("bound-bottom", 1, lambda a: jn(a, zero) == a),
    ]
    monoid = [
        ("star-comm", 2, lambda a, b: st(a, b) == st(b, a)),
        ("star-assoc", 3, lambda a, b, c: st(a, st(b, c)) == st(st(a, b), c)),
        ("star-unit", 1, lambda a: st(one, a) == a),
    ]
    adjoint = [
        (
            "adjunction",
            3,
            lambda x, y, z: (alg.leq(z, im(x, y))) == (alg.leq(st(x, z), y)),
        ),
    ]
    rl = lattice + monoid + adjoint
    if cls == "residuated-lattice":
        return rl
    if cls == "bl":
        return rl + [
            ("prelinearity", 2, lambda a, b: jn(im(a, b), im(b, a)) == one),
            ("divisibility", 2, lambda a, b: st(a, im(a, b)) == mt(a, b)),
        ]
    if cls == "heyting":
        return rl + [("star-is-meet", 2, lambda a, b: st(a, b) == mt(a, b))]
    if cls == "boolean":
        return (
            rl
            + [("star-is-meet", 2, lambda a, b: st(a, b) == mt(a, b))]
            + [("excluded-middle", 1, lambda a: jn(a, im(a, zero)) == one)]
        )
    if cls == "mv":
        op, od, ng = _derived_mv_ops(alg)

        def O(a, b):
            return op[a][b]

        def D(a, b):
            return od[a][b]

        def N(a):
            return ng[a]

        return [
            ("mv1-oplus-comm", 2, lambda a, b: O(a, b) == O(b, a)),
            ("mv1-odot-comm", 2, lambda a, b: D(a, b) == D(b, a)),
            ("mv2-oplus-assoc", 3, lambda a, b, c: O(a, O(b, c)) == O(O(a, b), c)),
            ("mv2-odot-assoc", 3, lambda a, b, c: D(a, D(b, c)) == D(D(a, b), c)),
            ("mv3-oplus-zero", 1, lambda a: O(a, zero) == a),
            ("mv3-odot-one", 1, lambda a: D(a, one) == a),
            ("mv4-oplus-one", 1, lambda a: O(a, one) == one),
            ("mv4-odot-zero", 1, lambda a: D(a, zero) == zero),
            ("mv5-oplus-neg", 1, lambda a: O(a, N(a)) == one),
            ("mv5-odot-neg", 1, lambda a: D(a, N(a)) == zero),
            ("mv6-demorgan-oplus", 2, lambda a, b: N(O(a, b)) == D(N(a), N(b))),
            ("mv6-demorgan-odot", 2, lambda a, b: N(D(a, b)) == O(N(a), N(b))),
            ("mv7-double-neg", 1, lambda a: N(N(a)) == a),
            ("mv7-neg-zero", 0, lambda: N(zero) == one),
            ("mv8-lukasiewicz", 2, lambda a, b: O(N(O(N(a), b)), b) == O(N(O(N(b), a)), a)),
        ]
    raise DomainError("unknown algebra class %r" % cls)


def check_class_axioms(alg, cls):
    """Exhaustively evaluate a class axiom suite; first witness per axiom."""
    for name in ("join", "meet", "star", "imp"):
        if name not in alg.signature:
            raise SignatureError("class check needs core op %r" % name)
    axioms = _axioms_for_class(alg, cls)
    n = alg.size
    violations = []
    for aid, arity, pred in axioms:
        witness = None
        for args in iproduct(range(n), repeat=arity):
            if not pred(*args):
                witness = args
                break
        if witness is not None:
            violations.append((aid, witness))
    return AxiomReport(cls, not violations, violations)


# ---------------------------------------------------------------------------
# structural operations
# ---------------------------------------------------------------------------


def subalgebra_generate(alg, seed, op_names=None):
    """Sg: least subset containing seed and the constants, closed under ops."""
    if op_names is None:
        op_names = alg.signature.names()
    current = set(seed)
    for name in op_names:
        if alg.signature.arity(name) == 0:
            current.add(alg.const(name))
    unary = [alg.tables[n] for n in op_names if alg.signature.arity(n) == 1]
    binary = [alg.tables[n] for n in op_names if alg.signature.arity(n) == 2]
    frontier = list(current)
    known = list(current)
    while frontier:
        new = []
        for e in frontier:
            for t in unary:
                v = t[e]
                if v not in current:
                    current.add(v)
                    new.append(v)
            for t in binary:
                for x in known:
                    for v in (t[e][x], t[x][e]):
                        if v not in current:
                            current.add(v)
                            new.append(v)
        known.extend(new)
        frontier = new
    return frozenset(current)


def product(algs, name=None):
    """Componentwise product; elements enumerated lexicographically."""
    if not algs:
        raise InvalidSpecError("empty product")
    sig = algs[0].signature
    for a in algs[1:]:
        if a.signature.ops != sig.ops:
            raise SignatureError("product requires a shared signature")
    ranges = [range(a.size) for a in algs]
    elems = list(iproduct(*ranges))
    index = {e: i for i, e in enumerate(elems)}
    tables = {}
    for opname, arity in sig.ops:
        if arity == 0:
            tables[opname] = index[tuple(a.const(opname) for a in algs)]
        elif arity == 1:
            ts = [a.tables[opname] for a in algs]
            tables[opname] = [
                index[tuple(t[e[i]] for i, t in enumerate(ts))] for e in elems
            ]
        else:
            ts = [a.tables[opname] for a in algs]
            tables[opname] = [
                [
                    index[tuple(t[x[i]][y[i]] for i, t in enumerate(ts))]
                    for y in elems
                ]
                for x in elems
            ]
    labels = ["(" + ",".join(a.label(e[i]) for i, a in enumerate(algs)) + ")" for e in elems]
    return FiniteAlgebra(
        name or " x ".join(a.name for a in algs),
        len(elems),
        sig,
        tables,
        labels=labels,
    )


def _close_map(a, b, seed, domain):
    """Extend seed (element -> image) over the subuniverse `domain` of `a`.

    Constants are seeded automatically.  Every op application with args in
    `domain` is evaluated, so a total result is a verified homomorphism on
    `domain`.  Returns the map or None on conflict.
    """
    m = {}
    for opname, arity in a.signature.ops:
        if arity == 0:
            m[a.const(opname)] = b.const(opname)
    for k, v in seed.items():
        if k in m and m[k] != v:
            return None
        m[k] = v
    unary = [(a.tables[n], b.tables[n]) for n, ar in a.signature.ops if ar == 1]
    binary = [(a.tables[n], b.tables[n]) for n, ar in a.signature.ops if ar == 2]
    known = [k for k in m if k in domain]
    m = {k: v for k, v in m.items() if k in domain}
    frontier = list(known)
    while frontier:
        new = []
        for e in frontier:
            for ta, tb in unary:
                v = ta[e]
                if v not in domain:
                    continue
                img = tb[m[e]]
                if v in m:
                    if m[v] != img:
                        return None
                else:
                    m[v] = img
                    new.append(v)
            for ta, tb in binary:
                for x in known:
                    for v, img in (
                        (ta[e][x], tb[m[e]][m[x]]),
                        (ta[x][e], tb[m[x]][m[e]]),
                    ):
                        if v not in domain:
                            continue
                        if v in m:
                            if m[v] != img:
                                return None
                        else:
                            m[v] = img
                            new.append(v)
        known.extend(new)
        frontier = new
    # every op application with both args in the domain was evaluated when
    # the later argument left the frontier, so consistency is already full
    return m


def generating_sequence(alg, hint=None, start=()):
    """A small generating sequence, greedily grown from constants + start."""
    span = subalgebra_generate(alg, list(start))
    if len(span) == alg.size:
        return []
    if hint is not None:
        gens = list(hint)
        if len(subalgebra_generate(alg, list(start) + gens)) == alg.size:
            return gens
    gens = []
    while len(span) < alg.size:
        best, best_span = None, None
        for x in range(alg.size):
            if x in span:
                continue
            s = subalgebra_generate(alg, list(span) + [x])
            if best_span is None or len(s) > len(best_span):
                best, best_span = x, s
                if len(s) == alg.size:
                    break
        gens.append(best)
        span = best_span
    return gens


def homomorphisms(a, b, injective=False, gens=None, seed=None, limit=None):
    """All homomorphisms a -> b, by generator-image search.

    `seed` optionally pins images of some elements.  Results come in a
    deterministic order (generator images scanned ascending).
    """
    base = list(seed.keys()) if seed else []
    gens = generating_sequence(a, hint=gens, start=base)
    domains = []
    for i in range(len(gens) + 1):
        domains.append(subalgebra_generate(a, base + gens[:i]))
    results = []

    def dfs(level, images):
        if limit is not None and len(results) >= limit:
            return
        current = dict(seed) if seed else {}
        current.update({g: img for g, img in zip(gens[:level], images)})
        m = _close_map(a, b, current, domains[level])
        if m is None:
            return
        if injective and len(set(m.values())) != len(m):
            return
        if level == len(gens):
            results.append(tuple(m[i] for i in range(a.size)))
            return
        for img in range(b.size):
            dfs(level + 1, images + [img])

    dfs(0, [])
    return results


def iso_check(a, b, gens=None):
    """Search for an isomorphism a -> b; returns the map or None."""
    if a.size != b.size or a.signature.ops != b.signature.ops:
        return None
    found = homomorphisms(a, b, injective=True, gens=gens, limit=1)
    if not found:
        return None
    m = found[0]
    if len(set(m)) != a.size:
        return None
    return m


def is_homomorphism(a, b, mapping):
    """Verify a full element map a -> b against every table."""
    import numpy

    m = numpy.asarray(mapping, dtype=numpy.int32)
    for opname, arity in a.signature.ops:
        if arity == 0:
            if mapping[a.const(opname)] != b.const(opname):
                return False
        elif arity == 1:
            ta, tb = a.np_table(opname), b.np_table(opname)
            if not numpy.array_equal(m[ta], tb[m]):
                return False
        else:
            ta, tb = a.np_table(opname), b.np_table(opname)
            if not numpy.array_equal(m[ta], tb[m[:, None], m[None, :]]):
                return False
    return True


def complement(alg, x):
    """First c with x join c = 1 and x meet c = 0, or None."""
    for c in range(alg.size):
        if alg.join(x, c) == alg.one and alg.meet(x, c) == alg.zero:
            return c
    return None


def core_reduct(alg):
    """Restriction to the six required core ops (for mixed-signature products)."""
    sig = Signature(CORE_OPS)
    tables = {k: alg.tables[k] for k, _ in CORE_OPS}
    return FiniteAlgebra(alg.name + "#core", alg.size, sig, tables, labels=alg.labels)


def lattice_reduct(alg):
    """The bounded-lattice reduct (join/meet/zero/one only)."""
    sig = Signature((("join", 2), ("meet", 2), ("zero", 0), ("one", 0)))
    tables = {k: alg.tables[k] for k in ("join", "meet", "zero", "one")}
    return FiniteAlgebra(alg.name + "#lattice", alg.size, sig, tables, labels=alg.labels)
