"""Parser, evaluation, Lindenbaum algebras and the generic-filter engine."""

import random

import pytest

from reslat.algebra import ChainSpec, check_class_axioms, make_chain, product
from reslat.errors import DomainError, InvalidSpecError, NoGenericPointError
from reslat.logic import (
    Bin,
    Konst,
    ParseError,
    Theory,
    Var,
    consequence,
    eval_formula,
    expand,
    generic_filter,
    is_tautology,
    isolated_dense_check,
    join_of_atoms_is_one,
    lindenbaum,
    non_principal_certify,
    parse,
    parse_chain_list,
    type_space,
    variables,
)
from reslat.spectra import zariski_sets


def luk(n):
    return make_chain(ChainSpec("lukasiewicz", n))


def godel(n):
    return make_chain(ChainSpec("godel", n))


# ---- parser -------------------------------------------------------------------


def test_implication_right_associative():
    assert str(parse("p0 -> p1 -> p2")) == "p0 -> (p1 -> p2)"


def test_negation_expands_to_imp_zero():
    f = expand(parse("~p0"))
    assert f == Bin("->", Var("p0"), Konst(0))


def test_weak_conjunction_expands():
    f = expand(parse("p0 /\\ p1"))
    assert f == Bin("&", Var("p0"), Bin("->", Var("p0"), Var("p1")))


def test_expansion_idempotent():
    for text in ("p0 \\/ p1", "~(p0 <-> p1)", "p0 /\\ (p1 & p2)"):
        once = expand(parse(text))
        assert expand(once) == once


def test_precedence():
    # & binds tighter than /\ binds tighter than \/ binds tighter than ->
    f = parse("p0 & p1 \\/ p2 -> p3")
    assert f.op == "->"
    assert f.left.op == "\\/"
    assert f.left.left.op == "&"


def test_parse_errors_carry_positions():
    with pytest.raises(ParseError) as err:
        parse("p0 -> ")
    assert err.value.position == 6
    with pytest.raises(ParseError):
        parse("(p0")
    with pytest.raises(ParseError):
        parse("p0 22")
    with pytest.raises(ParseError):
        parse("p0 $ p1")


def test_variable_collection():
    assert variables(parse("p0 -> (q \\/ ~p3)")) == {"p0", "q", "p3"}


def test_chain_list_parsing():
    specs = parse_chain_list("luk:2..4,godel:3")
    assert [str(s) for s in specs] == ["luk:2", "luk:3", "luk:4", "godel:3"]
    with pytest.raises(InvalidSpecError):
        parse_chain_list("prod:3")


# ---- evaluation ------------------------------------------------------------------


def test_eval_join_of_p_and_not_p():
    l3 = luk(3)
    v = {"p": 1}
    assert eval_formula(parse("p \\/ ~p"), l3, v) == 1  # max(1/2, 1/2)


def test_eval_phi_implies_phi():
    for chain in (luk(4), godel(5)):
        for a in range(chain.size):
            assert eval_formula(parse("p -> p"), chain, {"p": a}) == chain.one


def test_prelinearity_exhaustive_on_luk3():
    l3 = luk(3)
    f = parse("(p -> q) \\/ (q -> p)")
    for a in range(3):
        for b in range(3):
            assert eval_formula(f, l3, {"p": a, "q": b}) == l3.one


def test_unbound_variable():
    with pytest.raises(DomainError):
        eval_formula(parse("p0"), luk(3), {})


def test_tautology_examples():
    ok, _ = is_tautology(parse("(p0->p1) \\/ (p1->p0)"), parse_chain_list("luk:2..6,godel:2..6"))
    assert ok
    ok, counter = is_tautology(parse("p0 \\/ ~p0"), [ChainSpec("lukasiewicz", 3)])
    assert not ok
    assert counter == ("luk:3", {"p0": "1/2"})
    ok, _ = is_tautology(parse("1"), parse_chain_list("luk:2,godel:5"))
    assert ok


def test_consequence_restricts_to_models():
    theory = Theory((parse("p0"),), (ChainSpec("lukasiewicz", 3),))
    ok, _ = consequence(theory, parse("p0 & p0"))
    assert ok  # only the valuation p0 = 1 satisfies the axiom
    ok, counter = consequence(theory, parse("p1"))
    assert not ok


def test_derived_connective_coherence():
    # expansion route equals primitive-table route; makes all-depth
    # coherence compositional
    for chain in (luk(3), godel(3)):
        for text in ("p /\\ q", "p \\/ q", "~p", "p <-> q"):
            f = parse(text)
            g = expand(f)
            for a in range(chain.size):
                for b in range(chain.size):
                    v = {"p": a, "q": b}
                    assert eval_formula(f, chain, v) == eval_formula(g, chain, v)


def test_join_definition_collapses_to_max_on_chains():
    for chain in (luk(4), godel(4)):
        f = expand(parse("p \\/ q"))
        for a in range(chain.size):
            for b in range(chain.size):
                assert eval_formula(f, chain, {"p": a, "q": b}) == chain.join(a, b)


# ---- Lindenbaum algebras -----------------------------------------------------------


def test_lindenbaum_classical_one_variable():
    lind = lindenbaum(Theory((), (ChainSpec("lukasiewicz", 2),)), 1)
    assert lind.algebra.size == 4
    assert check_class_axioms(lind.algebra, "boolean").passed


def test_lindenbaum_with_axiom():
    lind = lindenbaum(Theory((parse("p0"),), (ChainSpec("lukasiewicz", 2),)), 1)
    assert lind.algebra.size == 2


def test_lindenbaum_luk3_golden_count():
    # golden value: the 1-generated algebra of the variety of luk:3,
    # pinned by the independent closure oracle in test_free
    lind = lindenbaum(Theory((), (ChainSpec("lukasiewicz", 3),)), 1)
    assert lind.algebra.size == 12
    assert check_class_axioms(lind.algebra, "bl").passed


def test_lindenbaum_passes_bl_on_bl_chains():
    lind = lindenbaum(Theory((), (ChainSpec("godel", 3),)), 1)
    assert check_class_axioms(lind.algebra, "bl").passed


def test_lindenbaum_representatives_evaluate_into_their_class():
    lind = lindenbaum(Theory((), (ChainSpec("lukasiewicz", 3),)), 1)
    for i, rep in enumerate(lind.reps):
        assert rep is not None
        assert lind.class_of(rep) == i


def test_lindenbaum_operations_are_induced():
    # f([phi], [psi]) = [f(phi, psi)] for the quotient tables
    lind = lindenbaum(Theory((), (ChainSpec("lukasiewicz", 2),)), 1)
    alg = lind.algebra
    for i, phi in enumerate(lind.reps):
        for j, psi in enumerate(lind.reps):
            assert alg.join(i, j) == lind.class_of(Bin("\\/", phi, psi))
            assert alg.star(i, j) == lind.class_of(Bin("&", phi, psi))


def test_henkin_finite_join_shadow():
    # [v phi_i] = v [phi_i] at finite-join scale
    lind = lindenbaum(Theory((), (ChainSpec("godel", 3),)), 2)
    alg = lind.algebra
    phis = [lind.reps[i] for i in range(min(4, alg.size))]
    acc_formula = phis[0]
    acc_class = lind.class_of(phis[0])
    for f in phis[1:]:
        acc_formula = Bin("\\/", acc_formula, f)
        acc_class = alg.join(acc_class, lind.class_of(f))
    assert lind.class_of(acc_formula) == acc_class


def test_inconsistent_theory_rejected():
    with pytest.raises(InvalidSpecError):
        lindenbaum(Theory((parse("0"),), (ChainSpec("lukasiewicz", 2),)), 1)


# ---- types and generic filters ------------------------------------------------------


def test_non_principal_certificates():
    alg = product([luk(2), luk(2)])
    a = alg.element_index("(0,1)")
    b = alg.element_index("(1,0)")
    assert non_principal_certify(alg, [a, b])
    assert not non_principal_certify(alg, [alg.one])


def test_certificate_on_descending_chain():
    g4 = godel(4)
    assert not non_principal_certify(g4, [3, 2, 1])  # meet = 1/3 != 0
    assert non_principal_certify(g4, [3, 2, 1, 0])


def test_generic_filter_no_avoid():
    alg = product([luk(2), luk(2)])
    f = generic_filter(alg, alg.one)
    space = zariski_sets(alg)
    least = min(space.max_points, key=lambda g: g.bitmask())
    assert f.members == least.members


def test_generic_filter_avoids():
    alg = product([luk(2), luk(2)])
    space = zariski_sets(alg)
    first, second = space.max_points
    got = generic_filter(alg, alg.one, [[first]])
    assert got.members == second.members


def test_generic_filter_oracle_equivalence():
    rng = random.Random(5)
    algs = [product([luk(2), luk(2)]), godel(4), luk(4)]
    for _ in range(100):
        alg = algs[rng.randrange(len(algs))]
        space = zariski_sets(alg)
        maxes = space.max_points
        a = rng.randrange(1, alg.size)
        k = rng.randint(0, len(maxes))
        avoid_pts = [maxes[i] for i in sorted(rng.sample(range(len(maxes)), k))]
        admissible = [
            f
            for f in maxes
            if a in f.members and f.members not in {g.members for g in avoid_pts}
        ]
        if admissible:
            got = generic_filter(alg, a, [avoid_pts])
            assert got.members == min(admissible, key=lambda f: f.bitmask()).members
        else:
            with pytest.raises(NoGenericPointError):
                generic_filter(alg, a, [avoid_pts])


def test_generic_filter_rejects_zero():
    with pytest.raises(DomainError):
        generic_filter(luk(3), 0)


def test_nowhere_dense_verification_mode():
    alg = product([luk(2), luk(2)])
    space = zariski_sets(alg)
    with pytest.raises(DomainError):
        generic_filter(
            alg, alg.one, [[space.max_points[0]]], verify_nowhere_dense=True
        )
    # empty avoid sets are nowhere dense and fine
    assert generic_filter(alg, alg.one, [[]], verify_nowhere_dense=True)


def test_type_space_classical():
    lind = lindenbaum(Theory((), (ChainSpec("lukasiewicz", 2),)), 1)
    space, tags = type_space(lind.algebra)
    assert len(space.max_points) == 2
    assert tags == [True, True]


def test_type_space_single_point():
    lind = lindenbaum(Theory((parse("p0"),), (ChainSpec("lukasiewicz", 2),)), 1)
    space, tags = type_space(lind.algebra)
    assert len(space.max_points) == 1 and tags == [True]


def test_type_space_on_godel_lindenbaum():
    lind = lindenbaum(Theory((), (ChainSpec("godel", 3),)), 1)
    space, tags = type_space(lind.algebra)
    assert len(space.max_points) >= 1
    assert all(tags)  # finite algebras: every maximal filter is principal


def test_isolated_types_dense():
    for alg in (godel(4), product([luk(2), luk(2)]), luk(3)):
        ok, witness = isolated_dense_check(alg)
        assert ok, witness


def test_join_of_atoms_on_boolean_corpus():
    from reslat.free import boolean_variety, free_algebra

    for alg in (
        product([luk(2), luk(2)]),
        free_algebra(boolean_variety(), 2).algebra,
    ):
        assert join_of_atoms_is_one(alg)


def test_join_lemma_needs_complementation():
    # documented defect: the sup lemma's proof uses b ^ -b = 0; on a chain
    # the single atom is dense below every nonzero element yet joins to
    # itself, not to 1
    from reslat.free import atoms

    g4 = godel(4)
    assert atoms(g4) == [1]
    assert all(g4.leq(1, b) for b in range(1, g4.size))  # dense
    assert not join_of_atoms_is_one(g4)
