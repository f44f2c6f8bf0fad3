import json

import pytest

from stratkit import corpus
from stratkit.cli import EXIT_INVALID, EXIT_OK, EXIT_USAGE, dispatch, main


def run(*argv):
    payload, summary, code = dispatch(list(argv))
    return (json.loads(payload) if payload and payload.lstrip().startswith("{") else payload), summary, code


def test_homology_fields():
    out, _, code = run("homology", "corpus:rp2")
    assert code == EXIT_OK and out["betti"] == [1, 0, 0]
    out, _, _ = run("homology", "--field", "f2", "corpus:rp2")
    assert out["betti"] == [1, 1, 1]


@pytest.mark.parametrize("name", sorted(n for ns in corpus.names().values() for n in ns))
def test_every_corpus_entry_validates(name):
    out, summary, code = run("validate", f"corpus:{name}")
    assert code == EXIT_OK, summary
    assert out["report"]["valid"]


def test_unzip_cone():
    out, summary, code = run("unzip", "corpus:cone-s1", "--deep", "*")
    assert code == EXIT_OK and "balanced" in summary
    assert out["ledger"]["balanced"]


def test_unzip_tower_and_strata_report():
    out, _, code = run("unzip-tower", "corpus:face-delta2")
    assert code == EXIT_OK and len(out["stages"]) == 2
    out, _, _ = run("strata-report", "corpus:cone-s1")
    assert out["monotone"]


def test_sheaf_cohomology_refined():
    out, _, code = run("sheaf-cohomology", "corpus:s1-monodromy-minus", "--refine", "1")
    assert code == EXIT_OK and out["global_sections"] == 0


def test_ran_poset_verdict():
    out, summary, code = run("ran-poset", "corpus:chain1", "--bound", "2")
    assert code == EXIT_OK and "antisymmetry" in summary


def test_constructions():
    for argv in (
        ("cone", "corpus:boundary2"),
        ("join", "corpus:two-points", "corpus:point"),
        ("product", "corpus:delta1", "corpus:delta1"),
        ("subdivide", "corpus:delta2", "--times", "2"),
        ("restrict", "corpus:delta2-standard", "--strata", "2"),
        ("exitpath", "corpus:face-boundary2"),
    ):
        _, summary, code = run(*argv)
        assert code == EXIT_OK, (argv, summary)


def test_mesh_export_is_off():
    text, _, code = run("mesh-export", "corpus:cone-s1", "--deep", "*", "--part", "link")
    assert code == EXIT_OK and text.startswith("OFF\n")


def test_invalid_document(tmp_path):
    p = tmp_path / "p.json"
    p.write_text(json.dumps({"elements": ["a", "b", "c"], "leq": [["a", "b"], ["b", "c"]]}))
    out, summary, code = run("validate", str(p))
    assert code == EXIT_INVALID and "transitivity" in summary
    p.write_text(json.dumps({"elements": ["a"], "leq": [], "extra": 1}))
    assert run("validate", str(p))[2] == EXIT_INVALID
    p.write_text('{"elements": [')
    _, summary, code = run("validate", str(p))
    assert code == EXIT_INVALID and "line" in summary


def test_usage_errors():
    assert run("frobnicate")[2] == EXIT_USAGE
    assert run("homology", "corpus:nope")[2] == EXIT_USAGE
    assert run("ran-poset", "corpus:chain1")[2] == EXIT_USAGE


def test_deterministic_output():
    a = dispatch(["unzip", "corpus:cone-face-boundary2", "--deep", "*"])[0]
    b = dispatch(["unzip", "corpus:cone-face-boundary2", "--deep", "*"])[0]
    assert a == b


def test_out_and_log(tmp_path, capsys):
    out = tmp_path / "r.json"
    log = tmp_path / "run.log"
    assert main(["homology", "corpus:torus", "--out", str(out), "--log", str(log)]) == 0
    assert json.loads(out.read_text())["betti"] == [1, 2, 1]
    assert "homology" in log.read_text()
    captured = capsys.readouterr()
    assert captured.out == "" and "betti" in captured.err
