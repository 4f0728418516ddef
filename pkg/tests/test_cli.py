import json

import pytest

from real_conic_bundles import __version__
from real_conic_bundles.cli import build_parser, main


@pytest.fixture
def genus1_path(write_document, genus1_document):
    return str(write_document(genus1_document))


def test_analyze_human(genus1_path, capsys):
    assert main(["analyze", genus1_path]) == 0
    out = capsys.readouterr().out
    assert "census: s=2 t=1 k=0 k'=0" in out
    assert "Gamma: Z" in out


def test_analyze_json(genus1_path, capsys):
    assert main(["analyze", genus1_path, "--format", "json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["gamma"]["text"] == "Z"
    assert data["exit_code"] == 0


def test_gamma(genus1_path, capsys):
    assert main(["gamma", genus1_path, "--format", "json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["group"] == {"free_rank": 1, "torsion": []}
    assert data["match"] is True and data["mismatches"] == []


@pytest.mark.parametrize("name,approximable", [("wrap-torus", False), ("spheres-only", True)])
def test_approx(genus1_path, capsys, name, approximable):
    assert main(["approx", genus1_path, "--map", name, "--format", "json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["approximable"] is approximable
    assert data["criterion"] is approximable


def test_approx_unknown_map(genus1_path, capsys):
    assert main(["approx", genus1_path, "--map", "nope"]) == 2
    assert "nope" in capsys.readouterr().err


def test_validate(genus1_path, capsys):
    assert main(["validate", genus1_path]) == 0
    assert capsys.readouterr().out == "valid: 3 real component(s)\n"


def test_validate_reports_every_issue(write_document, genus1_document, capsys):
    genus1_document["g"]["abstract"][0]["zeros"] = 3
    genus1_document["transformations"] = [
        {"kind": "blowup_real", "target": 1},
        {"kind": "elm_real", "target": 3},
    ]
    assert main(["validate", str(write_document(genus1_document))]) == 2
    err = capsys.readouterr().err
    assert "$.g.abstract[0].zeros" in err
    assert "pipeline order" in err


def test_missing_file(tmp_path, capsys):
    assert main(["analyze", str(tmp_path / "missing.json")]) == 2
    assert "cannot read" in capsys.readouterr().err


def test_bad_option_value(genus1_path, capsys):
    assert main(["analyze", genus1_path, "--refine-bits", "0"]) == 2
    assert "refine_bits" in capsys.readouterr().err


def test_oracle_check(write_document, worked_document, capsys):
    path = str(write_document(worked_document))
    assert main(["oracle-check", path, "--samples", "256", "--format", "json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert (data["real_zeros"], data["spheres"], data["tori"]) == (4, 2, 0)


def test_oracle_check_on_abstract_document(genus1_path):
    assert main(["oracle-check", genus1_path]) == 2


def test_batch_directory(tmp_path, write_document, genus1_document, worked_document, capsys):
    write_document(genus1_document, "a.json")
    write_document(worked_document, "b.json")
    assert main(["analyze", str(tmp_path), "--no-progress", "--format", "json"]) == 0
    rows = json.loads(capsys.readouterr().out)
    assert [r["file"] for r in rows] == ["a.json", "b.json"]
    assert [r["gamma"] for r in rows] == ["Z", "0"]


def test_batch_directory_exit_code_is_the_worst(tmp_path, write_document, genus1_document):
    write_document(genus1_document, "a.json")
    (tmp_path / "b.json").write_text("{")
    assert main(["analyze", str(tmp_path), "--no-progress"]) == 2


def test_batch_directory_keeps_going_past_undecodable_files(
    tmp_path, write_document, genus1_document, capsys
):
    write_document(genus1_document, "a.json")
    (tmp_path / "b.json").write_bytes(b"\xff\xfe\x00{")
    assert main(["analyze", str(tmp_path), "--no-progress", "--format", "json"]) == 2
    rows = json.loads(capsys.readouterr().out)
    assert [(r["file"], r["exit_code"]) for r in rows] == [("a.json", 0), ("b.json", 2)]


def test_parser():
    parser = build_parser()
    args = parser.parse_args(["approx", "spec.json", "--map", "f", "-v"])
    assert (args.command, args.map_name, args.verbose) == ("approx", "f", True)
    with pytest.raises(SystemExit):
        parser.parse_args(["approx", "spec.json"])


def test_version(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--version"])
    assert exc.value.code == 0
    assert __version__ in capsys.readouterr().out
