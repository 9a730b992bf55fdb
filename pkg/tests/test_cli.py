"""CLI surface: verbs, exit codes, JSON shape, determinism."""

import json

from reslat.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_taut_pass(capsys):
    code, out, _ = run(capsys, "taut", "(p0->p1)\\/(p1->p0)", "--chains", "luk:2..6")
    assert code == 0
    assert "tautology" in out


def test_taut_counterexample(capsys):
    code, out, _ = run(capsys, "taut", "p0\\/~p0", "--chains", "luk:3")
    assert code == 1
    assert "1/2" in out


def test_check_mv_failure_witness(capsys):
    code, out, _ = run(capsys, "check", "builtin:godel:3", "--class", "mv")
    assert code == 1
    assert "1/2" in out


def test_check_pass(capsys):
    code, out, _ = run(capsys, "check", "luk:5", "--class", "mv")
    assert code == 0


def test_json_output_is_versioned(capsys):
    code, out, _ = run(capsys, "--json", "check", "godel:3", "--class", "bl")
    assert code == 0
    data = json.loads(out)
    assert data["format"] == "reslat/1"
    assert data["passed"] is True


def test_spectrum_verb(capsys):
    code, out, _ = run(capsys, "--json", "spectrum", "godel:3", "--verify-lemma")
    assert code == 0
    data = json.loads(out)
    assert data["lemma"]["passed"] is True
    assert len(data["points"]) == 2


def test_free_verb(capsys):
    code, out, _ = run(
        capsys, "--json", "free", "--variety", "ba", "--gens", "2", "--atoms"
    )
    assert code == 0
    data = json.loads(out)
    assert data["size"] == 16 and len(data["atoms"]) == 4


def test_sheaf_verb(capsys):
    code, out, _ = run(capsys, "sheaf", "luk:3", "--eta", "--regularity")
    assert code == 0
    assert "eta isomorphism: True" in out


def test_kripke_verb(capsys):
    code, out, _ = run(
        capsys,
        "kripke",
        "verify",
        "--random",
        "3",
        "--seed",
        "2",
        "--max-worlds",
        "2",
        "--max-base",
        "2",
        "--alpha",
        "2",
    )
    assert code == 0
    assert "0 failures" in out


def test_lindenbaum_verb(tmp_path, capsys):
    theory = tmp_path / "t.json"
    theory.write_text(json.dumps({"axioms": [], "chains": ["luk:2"]}))
    code, out, _ = run(capsys, "--json", "lindenbaum", "--theory", str(theory), "--vars", "1")
    assert code == 0
    assert json.loads(out)["classes"] == 4


def test_interp_verb(tmp_path, capsys):
    from reslat.free import boolean_variety, free_algebra

    fr = free_algebra(boolean_variety(), 2)
    path = tmp_path / "fr2.json"
    path.write_text(fr.algebra.dumps())
    code, out, _ = run(
        capsys,
        "interp",
        "--alg",
        str(path),
        "--x",
        "g0 /\\ g1",
        "--z",
        "g0 \\/ g1",
        "--x1",
        "g0,g1",
        "--x2",
        "g0,g1",
    )
    assert code == 0
    assert "interpolant" in out


def test_amalgamate_verb(tmp_path, capsys):
    from reslat.algebra import ChainSpec, make_chain, product

    l2 = make_chain(ChainSpec("lukasiewicz", 2))
    ba4 = product([l2, l2], name="ba4")
    emb = [ba4.element_index("(0,0)"), ba4.element_index("(1,1)")]
    problem = {
        "A": ba4.to_json(),
        "B": ba4.to_json(),
        "C": l2.to_json(),
        "m": emb,
        "n": emb,
    }
    path = tmp_path / "problem.json"
    path.write_text(json.dumps(problem))
    code, out, _ = run(capsys, "--json", "amalgamate", "--problem", str(path), "--max-size", "16")
    assert code == 0
    data = json.loads(out)
    assert data["amalgam_size"] >= 2


def test_omit_verb(tmp_path, capsys):
    from reslat.free import boolean_variety, free_algebra

    fr = free_algebra(boolean_variety(), 1)
    path = tmp_path / "fr1.json"
    path.write_text(fr.algebra.dumps())
    types = tmp_path / "types.json"
    types.write_text(json.dumps({"types": [["g0 /\\ ~g0"]]}))
    code, out, _ = run(
        capsys, "omit", "--alg", str(path), "--inside", "1", "--types", str(types)
    )
    assert code == 0
    assert "generic filter" in out


def test_usage_error_exit_code(capsys):
    assert main(["nonsense"]) == 2
    assert main(["check", "luk:3"]) == 2  # missing --class


def test_resource_exit_code(capsys, monkeypatch):
    monkeypatch.setenv("RESLAT_BUDGET", "spectrum=2")
    code, _, err = run(capsys, "spectrum", "godel:4")
    assert code == 3


def test_determinism(capsys):
    a = run(capsys, "--json", "spectrum", "godel:4")
    b = run(capsys, "--json", "spectrum", "godel:4")
    assert a == b


def test_corpus_verb_wired():
    from reslat.cli import build_parser

    parser = build_parser()
    args = parser.parse_args(["corpus", "run"])
    assert args.action == "run"
