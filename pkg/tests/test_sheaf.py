"""Dual sheaves: zero-dimensional parts, stalks, sections, eta, regularity."""

from reslat.algebra import (
    ChainSpec,
    FiniteAlgebra,
    Signature,
    core_reduct,
    iso_check,
    lattice_reduct,
    make_chain,
    product,
)
from reslat.kripke import KripkeSystem, dimension_set, set_algebra
from reslat.sheaf import (
    dual_sheaf,
    eta_check,
    kernel_ideal_generate,
    regular_ideals_open_sets,
    regularity,
    report,
    sections,
    sheaf_reduct,
    strongly_regular_equiv_check,
    zero_dim,
)


def luk(n):
    return make_chain(ChainSpec("lukasiewicz", n))


def godel(n):
    return make_chain(ChainSpec("godel", n))


def ba4():
    l2 = luk(2)
    return product([l2, l2])


def coordinate_closure_product(algs):
    prod = product(algs)
    strides = []
    n = 1
    for a in reversed(algs):
        strides.insert(0, n)
        n *= a.size
    table = []
    for e in range(prod.size):
        closed = 0
        for i, a in enumerate(algs):
            c = (e // strides[i]) % a.size
            closed += (0 if c == a.zero else a.one) * strides[i]
        table.append(closed)
    sig = Signature(prod.signature.ops + (("c_0", 1),))
    tables = dict(prod.tables)
    tables["c_0"] = table
    return FiniteAlgebra(prod.name + "+cl", prod.size, sig, tables, labels=prod.labels)


# ---- zero dimensional part ---------------------------------------------------


def test_zd_with_no_operators_is_everything():
    alg = godel(4)
    zd, witness = zero_dim(alg)
    assert witness is None and len(zd) == alg.size


def test_zd_of_kripke_algebra_matches_dimension_sets():
    system = KripkeSystem(1, [[True]], {0: (0, 1)}, None, 2)
    ksa = set_algebra(system, with_diagonals=True)
    alg = ksa.algebra
    zd, witness = zero_dim(alg, [n for n in alg.extra_operator_names() if n.startswith("c_")])
    assert witness is None
    assert set(zd) == {x for x in range(alg.size) if dimension_set(alg, x) == frozenset()}


def test_zd_of_coordinate_closure_product():
    pc = coordinate_closure_product([ba4(), ba4()])
    zd, witness = zero_dim(pc)
    assert witness is None and len(zd) == 4


# ---- dual sheaves --------------------------------------------------------------


def test_dual_sheaf_of_4ba():
    alg = ba4()
    sheaf = dual_sheaf(alg)
    assert len(sheaf.points) == 2
    assert [q.size for q in sheaf.stalks] == [2, 2]
    assert len(sections(sheaf)) == 4


def test_dual_sheaf_of_2ba():
    alg = luk(2)
    sheaf = dual_sheaf(alg)
    assert len(sheaf.points) == 1
    assert sheaf.stalks[0].size == 2


def test_sections_are_sections():
    alg = ba4()
    sheaf = dual_sheaf(alg)
    for a in range(alg.size):
        sigma = sheaf.section_of(a)
        assert len(sigma) == len(sheaf.points)
        for i, v in enumerate(sigma):
            assert 0 <= v < sheaf.stalks[i].size


def test_eta_iso_on_corpus_samples():
    for alg in (luk(2), luk(3), luk(6), godel(3), godel(6), ba4()):
        ok, details = eta_check(alg)
        assert ok, (alg.name, details)


def test_eta_on_mixed_product():
    p = product([core_reduct(luk(3)), core_reduct(godel(4))])
    ok, _ = eta_check(p)
    assert ok


def test_eta_on_kripke_set_algebra():
    system = KripkeSystem(1, [[True]], {0: (0, 1)}, None, 2)
    ksa = set_algebra(system, with_diagonals=True)
    ok, _ = eta_check(ksa.algebra)
    assert ok


def test_stalks_of_coordinate_product_are_factors():
    l2 = luk(2)
    b4 = ba4()
    pc = coordinate_closure_product([l2, b4])
    sheaf = dual_sheaf(pc)
    assert sorted(q.size for q in sheaf.stalks) == [2, 4]
    for q in sheaf.stalks:
        target = l2 if q.size == 2 else b4
        assert iso_check(lattice_reduct(q), lattice_reduct(target)) is not None
    ok, _ = eta_check(pc, sheaf)
    assert ok


# ---- regularity ------------------------------------------------------------------


def test_simple_algebra_strongly_regular():
    # luk:3 is simple in its full signature; one-point base, stalk = itself
    reg = regularity(luk(3))
    assert reg["strongly_regular"] and reg["regular"]


def test_regularity_of_4ba():
    reg = regularity(ba4())
    assert reg == {
        "regular": True,
        "strongly_regular": True,
        "congruence_strongly_regular": True,
    }


def test_strongly_regular_implies_regular_on_samples():
    for alg in (luk(2), luk(3), ba4(), godel(3), godel(5)):
        reg = regularity(alg)
        if reg["strongly_regular"]:
            assert reg["regular"]


def test_equiv_check_on_boolean():
    rep = strongly_regular_equiv_check(ba4())
    assert rep["equivalent"]
    assert rep["strongly_regular"] and rep["stalks_semisimple"]


def test_equiv_check_skips_chains():
    rep = strongly_regular_equiv_check(godel(4))
    assert rep == {"skipped": "not relatively complemented"}


def test_equiv_check_on_simple_kripke():
    system = KripkeSystem(1, [[True]], {0: (0, 1)}, None, 1)
    ksa = set_algebra(system, with_diagonals=True)
    rep = strongly_regular_equiv_check(ksa.algebra)
    if "skipped" not in rep:
        assert rep["equivalent"]


# ---- regular ideals <-> opens --------------------------------------------------------


def test_regular_ideals_open_sets_small():
    rep = regular_ideals_open_sets(luk(2))
    assert rep["isomorphism"] and rep["regular_ideals"] == 2 and rep["opens"] == 2


def test_regular_ideals_open_sets_4ba():
    rep = regular_ideals_open_sets(ba4())
    assert rep["isomorphism"] and rep["regular_ideals"] == 4


def test_regular_ideals_on_chain():
    for alg in (godel(4), luk(4)):
        rep = regular_ideals_open_sets(alg)
        assert rep["isomorphism"], (alg.name, rep)


def test_regular_ideals_on_kripke():
    system = KripkeSystem(1, [[True]], {0: (0, 1)}, None, 2)
    ksa = set_algebra(system, with_diagonals=True)
    rep = regular_ideals_open_sets(ksa.algebra)
    assert rep["isomorphism"]


def test_kernel_ideal_generation_respects_operators():
    pc = coordinate_closure_product([luk(2), ba4()])
    reduct = sheaf_reduct(pc)
    atom = next(
        x for x in range(pc.size) if x != pc.zero and pc.apply("c_0", x) != x
    )
    ideal = kernel_ideal_generate(reduct, [atom], ["c_0"])
    assert pc.apply("c_0", atom) in ideal


def test_report_shape():
    rep = report(ba4())
    assert rep["eta_isomorphism"] is True
    assert rep["section_count"] == 4
    assert len(rep["base_points"]) == 2
    assert rep["stalk_sizes"] == [2, 2]
