import json

import pytest

from fatsection.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr()


def test_check_axioms_rot2(capsys):
    code, out = run(capsys, "check-axioms", "--entry", "rot2")
    assert code == 0 and "k = 0" in out.out


def test_faces_emits_hasse_diagram(capsys, tmp_path):
    dot = tmp_path / "hexagon.dot"
    code, _ = run(capsys, "faces", "--entry", "schur-horn-3", "--emit-dot", str(dot))
    assert code == 0
    text = dot.read_text()
    assert text.count("[label=") == 14


def test_suite_json(capsys, tmp_path):
    path = tmp_path / "r.json"
    code, _ = run(capsys, "suite", "--name", "face-correspondence", "--entry", "schur-horn-2",
                  "--seed", "7", "--json", str(path))
    assert code == 0
    d = json.loads(path.read_text())
    assert d["status"] == "pass" and d["checks"]["class_count"]["classes"] == 2


def test_json_to_stdout(capsys):
    code, out = run(capsys, "weyl", "--entry", "dihedral-4", "--json", "-")
    assert code == 0 and json.loads(out.out)["order"] == 8


@pytest.mark.parametrize("argv", [
    ["lift", "--entry", "schur-horn-3", "--face", "0"],
    ["reduce", "--entry", "schur-horn-3", "--face", "0"],
    ["slice", "--entry", "schur-horn-3", "--direction", "2,0,-2"],
    ["push", "--entry", "schur-horn-3", "--direction", "1,0,0,0,0"],
    ["correspond", "--entry", "schur-horn-2", "--probe"],
    ["orbit", "--entry", "rot2", "--samples", "4"],
    ["hull", "--entry", "dihedral-4"],
])
def test_commands_pass(capsys, argv):
    assert run(capsys, *argv)[0] == 0


def test_group_file_input(capsys, tmp_path):
    g = tmp_path / "g.json"
    g.write_text(json.dumps({"dim": 2, "kind": "finite", "generators": [[["0", "-1"], ["1", "0"]]]}))
    code, out = run(capsys, "orbit", "--group", str(g), "--point", "1,2")
    assert code == 0 and "4 points" in out.out


def test_failing_section_exit_code(capsys, tmp_path):
    g = tmp_path / "g.json"
    basis = []
    for i, j in ((0, 1), (0, 2), (1, 2)):
        x = [[0.0] * 3 for _ in range(3)]
        x[i][j], x[j][i] = -1.0, 1.0
        basis.append(x)
    g.write_text(json.dumps({"dim": 3, "kind": "lie", "algebra_basis": basis}))
    s = tmp_path / "s.json"
    s.write_text(json.dumps({"basis": [[1, 0, 0], [0, 1, 0]]}))
    code, _ = run(capsys, "check-axioms", "--group", str(g), "--section", str(s), "--samples", "32")
    assert code == 1


def test_indeterminate_and_input_errors(capsys):
    assert run(capsys, "conjecture", "--entry", "copolarity-candidate")[0] == 2
    assert run(capsys, "faces", "--entry", "nope")[0] == 3
    assert run(capsys, "suite", "--name", "nope", "--entry", "rot2")[0] == 3
    assert run(capsys, "lift", "--entry", "schur-horn-3", "--face", "0,3")[0] == 3
    assert run(capsys, "bogus")[0] == 3
