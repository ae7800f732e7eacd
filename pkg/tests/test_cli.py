import json

import pytest

from gstar.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_hom_lists_nonzero_morphisms_then_zero(capsys):
    code, out, _ = run(capsys, "hom", "--from", "(2)", "--to", "(3)")
    data = json.loads(out)
    assert code == 0
    assert data["nonzero"] == 15
    assert len(data["morphisms"]) == 16
    assert data["morphisms"][-1] == {"cod": {"entries": [3]}, "dom": {"entries": [2]}, "zero": True}


def test_hom_csv(capsys):
    code, out, _ = run(capsys, "hom", "--from", "(1)", "--to", "(1)", "--format", "csv")
    assert code == 0
    assert out.splitlines() == ["position,dom,cod,injection,components", "0,(1),(1),1,1", "1,(1),(1),zero,"]


def test_global_flags_on_either_side(capsys):
    a = run(capsys, "--trunc", "2", "hom", "--from", "(1)", "--to", "(2)")
    b = run(capsys, "hom", "--from", "(1)", "--to", "(2)", "--trunc", "2")
    assert a == b and a[0] == 0


def test_lift_representable(capsys):
    code, out, _ = run(capsys, "lift", "--diagram", "rep1.json", "--at", "(2)")
    data = json.loads(out)
    assert code == 0
    assert data["size"] == 2
    assert data["elements"] == [0, 1, 2]


def test_lift_all_objects(capsys):
    code, out, _ = run(capsys, "lift", "--diagram", "rep1.json", "--all", "--qmax", "2")
    values = json.loads(out)["values"]
    assert values["(1)"] == 1 and values["(2)"] == 2 and values["()"] == 0 and values["*"] == 0
    assert values["(1,1)"] == 2


def test_classify_single_cell(capsys):
    assert run(capsys, "classify", "--fixture", "walking-iso", "--n", "1", "--k", "1")[1] == "16\n"


def test_classify_table(capsys):
    code, out, _ = run(capsys, "classify", "--fixture", "walking-iso", "--degree", "1", "--format", "csv")
    assert code == 0
    assert out.splitlines()[1:] == ["0,0,2", "0,1,4", "1,0,4", "1,1,16"]


def test_segal(capsys):
    code, out, _ = run(capsys, "segal", "--fixture", "walking-iso", "--n", "3", "--k", "2")
    assert code == 0 and json.loads(out)["status"] == "pass"
    code, out, _ = run(capsys, "segal", "--fixture", "boundary-of-triangle")
    assert code == 1
    surj = next(c for c in json.loads(out)["checks"] if c["name"] == "surjective")
    assert surj["witness"] == {"spine": [1, 4]}


def test_prism(capsys):
    code, out, _ = run(capsys, "prism", "--degree", "2")
    assert code == 0
    assert "h0@0" in json.loads(out)["homotopy"]


def test_smash_object(capsys):
    code, out, _ = run(capsys, "smash", "--from", "(2,2)")
    data = json.loads(out)
    assert data["smash"] == 4 and data["points"][1] == [1, 2]


def test_smash_hom(capsys):
    code, out, _ = run(capsys, "smash", "--from", "(2,2)", "--to", "(2,2)", "--format", "csv")
    assert code == 0
    # the swap of the two factors, among the 129 morphisms
    assert "100,1 3 2 4" in out.splitlines()


def test_tuplecat_dot_and_validate(capsys):
    code, out, _ = run(capsys, "tuplecat", "--trunc", "1", "--qmax", "2", "--format", "dot")
    assert code == 0 and out.startswith('digraph "G*<=1,2"')
    code, out, _ = run(capsys, "tuplecat", "--trunc", "1", "--qmax", "1", "--validate")
    assert code == 0 and json.loads(out)["validation"]["status"] == "pass"


def test_diagram_subcommands(capsys):
    assert run(capsys, "diagram", "validate", "--diagram", "rep1.json")[0] == 0
    code, out, _ = run(capsys, "diagram", "nerve", "--diagram", "arrow-gamma.json", "--degree", "2")
    assert code == 0
    code, out, _ = run(capsys, "diagram", "precompose", "--diagram", "rep1.json", "--along", "smash",
                       "--trunc", "1")
    assert code == 0
    assert json.loads(out)["on_objects"]["(1,1)"] == 1
    # smash out of G<=2,2 reaches <4>, beyond the diagram's F<=2
    assert run(capsys, "diagram", "precompose", "--diagram", "rep1.json")[0] == 2


def test_check_restricted_suite_skips_the_rest(capsys):
    code, out, _ = run(capsys, "check", "--suite", "emptiness", "--suite", "hom-counts")
    data = json.loads(out)
    assert code == 0
    assert data["suites"]["emptiness"] == "pass"
    assert data["suites"]["adjunction"] == "skipped"
    assert "timing" not in data


def test_check_fault_fixture_exits_one(capsys):
    code, out, _ = run(capsys, "check", "--category", "broken-composition.json")
    assert code == 1
    assoc = next(c for c in json.loads(out)["checks"] if c["name"] == "associativity")
    assert assoc["status"] == "fail"
    assert set(assoc["witness"]) >= {"f", "g", "h"}


def test_repeated_runs_are_byte_identical(capsys):
    argv = ["check", "--suite", "unit-iso", "--random-count", "5", "--seed", "3"]
    first = run(capsys, *argv)
    second = run(capsys, *argv)
    assert first == second
    assert json.loads(first[1])["seeds"]["unit-iso"] == [3 * 1_000_003 + k for k in range(5)]


def test_emit_artifacts(capsys):
    code, out, _ = run(capsys, "emit", "--artifact", "hom-census", "--format", "csv", "--trunc", "1")
    assert code == 0 and out.startswith("dom,cod,nonzero")
    code, out, _ = run(capsys, "emit", "--artifact", "L-values", "--diagram", "rep1.json")
    assert code == 0 and "values" in json.loads(out)
    code, out, _ = run(capsys, "emit", "--artifact", "classification", "--fixture", "walking-arrow",
                       "--degree", "1")
    assert code == 0


@pytest.mark.parametrize("argv", [
    ["hom", "--from", "(1", "--to", "(1)"],
    ["--trunc", "1", "hom", "--from", "(2)", "--to", "(1)"],
    ["lift", "--diagram", "missing.json"],
    ["classify", "--fixture", "walking-iso", "--weq", "some"],
    ["check", "--budget", "0"],
    ["emit", "--artifact", "L-values"],
    ["hom", "--from", "(1)", "--to", "(1)", "--format", "dot"],
])
def test_bad_input_exits_two(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_argparse_errors_exit_two(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["hom", "--from", "(1)"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["classify"])
    assert exc.value.code == 2


def test_check_accepts_suite_names_positionally(capsys):
    code, out, _ = run(capsys, "check", "emptiness", "--seed", "2")
    data = json.loads(out)
    assert code == 0
    assert data["config"]["suites"] == ["emptiness"]
    assert data["config"]["seed"] == 2
    assert run(capsys, "check", "bogus")[0] == 2
