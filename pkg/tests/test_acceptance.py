"""The acceptance gate: every corpus criterion at its stated tolerance.

All checks are exact (no floating point anywhere); the timed criteria
carry the stated wall-clock bounds.  One pass/fail line per criterion is
printed as the suite runs.
"""

import pytest

from reslat import corpus

TIME_BOUNDS = {
    "1 axiom suites on chains": 1.0,
    "2 residuum closed form == brute-force oracle, grids 1/2..1/64": 5.0,
    "3 free Boolean algebras: sizes, atoms, product decomposition": 30.0,
    "7 Kripke equational theory, 100 seeded systems + fault injection": 60.0,
    "9 interpolation on Fr_3 and congruence pairs on Fr_2": 120.0,
}


@pytest.mark.parametrize(
    "criterion", corpus.ALL_CRITERIA, ids=[fn.criterion_name for fn in corpus.ALL_CRITERIA]
)
def test_criterion(criterion):
    result = criterion()
    status = "PASS" if result["passed"] else "FAIL"
    print("%s  %s  (%.2fs)" % (status, result["name"], result["seconds"]))
    assert result["passed"], result["details"]
    bound = TIME_BOUNDS.get(result["name"])
    if bound is not None:
        assert result["seconds"] <= bound, "criterion exceeded its %.0fs bound" % bound
