import json

import pytest

from poscurves.cli import main


@pytest.fixture
def files(tmp_path):
    def write(name, obj):
        p = tmp_path / name
        p.write_text(json.dumps(obj))
        return str(p)
    return write


def run(capsys, argv):
    code = main(argv)
    return code, capsys.readouterr()


def test_mcal_json(capsys, files):
    code, out = run(capsys, ["mcal", "--fan", "builtin:BlP2", "--curve", files("a.json", {"curve": [1, 1, 1, 0]})])
    assert code == 0
    data = json.loads(out.out)
    assert data["value"] == "1" and data["witness_divisor"] == ["0", "0", "1", "0"]


def test_zariski_json(capsys, files):
    code, out = run(capsys, ["zariski", "--fan", "builtin:BlP2",
                             "--curve", files("a.json", {"curve": ["3", "3", "2", "-1"]})])
    assert code == 0 and json.loads(out.out)["volhat"] == "4"


def test_custom_fan_file(capsys, files):
    fan = files("fan.json", {"dim": 2, "rays": [[1, 0], [0, 1], [-1, -1]], "max_cones": [[0, 1], [1, 2], [0, 2]]})
    code, out = run(capsys, ["fan", "check", "--fan", fan])
    assert code == 0 and json.loads(out.out)["picard_rank"] == 1
    code, out = run(capsys, ["volhat", "--fan", fan, "--curve", files("c.json", {"curve": ["1/2", "1/2", "1/2"]})])
    assert code == 0
    assert json.loads(out.out)["volhat"] == "1/4"


def test_bad_fan_exit_code(capsys, files):
    fan = files("fan.json", {"dim": 2, "rays": [[1, 0], [0, 1], [-1, -1]], "max_cones": [[0, 1], [1, 2]]})
    code, out = run(capsys, ["fan", "check", "--fan", fan])
    assert code == 2 and "error" in out.err


def test_precondition_exit_code(capsys, files):
    code, _ = run(capsys, ["cihood", "--fan", "builtin:P1xP1", "--curve", files("a.json", {"curve": [1, 1, 0, 0]})])
    assert code == 2
    code, _ = run(capsys, ["mcal", "--fan", "builtin:P2", "--curve", files("a.json", {"curve": [1, 0, 0]})])
    assert code == 2


def test_cones_dump(capsys):
    code, out = run(capsys, ["cones", "--fan", "builtin:PBundle"])
    cones = json.loads(out.out)["cones"]
    assert code == 0
    assert set(cones) == {"nef_divisors", "eff_divisors", "mov_divisors", "eff_curves", "mov_curves"}
    assert all(c["generators"] and c["inequalities"] for c in cones.values())


def test_polytope_commands(capsys, files, tmp_path):
    tri = files("t.json", {"vertices": [[0, 0], [1, 0], [1, -1]]})
    code, out = run(capsys, ["polytope", "vol", "--polytope", tri])
    assert code == 0 and json.loads(out.out)["volume"] == "1/2"
    sq = files("s.json", {"halfspaces": [{"normal": [1, 0], "offset": 1}, {"normal": [-1, 0], "offset": 0},
                                         {"normal": [0, 1], "offset": 1}, {"normal": [0, -1], "offset": 0}]})
    code, out = run(capsys, ["polytope", "support", "--polytope", sq, "--direction", "1,1"])
    assert json.loads(out.out)["support"] == "2"
    mesh = tmp_path / "m.txt"
    code, out = run(capsys, ["polytope", "facets", "--polytope", sq, "--mesh", str(mesh)])
    assert len(json.loads(out.out)["facets"]) == 4
    lines = mesh.read_text().splitlines()
    assert sum(ln.startswith("v ") for ln in lines) == 4 and sum(ln.startswith("f ") for ln in lines) == 4


def test_minkowski_mesh_3d(capsys, files, tmp_path):
    mesh = tmp_path / "m.txt"
    code, out = run(capsys, ["minkowski", "--fan", "builtin:P3", "--curve", files("a.json", {"curve": [1, 1, 1, 1]}),
                             "--mesh", str(mesh)])
    assert code == 0 and json.loads(out.out)["converged"]
    assert sum(ln.startswith("f ") for ln in mesh.read_text().splitlines()) == 4


def test_morse_and_pihat(capsys, files):
    code, out = run(capsys, ["morse", "--fan", "builtin:BlP2", "--curve", files("a.json", {"curve": [1, 1, 1, 0]}),
                             "--beta", files("b.json", {"curve": ["1/2", "1/2", "0", "-1/2"]})])
    assert code == 0 and json.loads(out.out)["certified_big"]
    code, out = run(capsys, ["pihat", "--fan", "builtin:BlP2", "--divisor", files("d.json", {"divisor": [0, 0, 2, 1]})])
    assert json.loads(out.out)["pi_hat"] == ["0", "0", "2", "0"]


def test_boundary(capsys, files):
    code, out = run(capsys, ["boundary", "--fan", "builtin:PBundle",
                             "--curve", files("a.json", {"curve": [1, 0, 0, 1, 1]})])
    assert code == 0


def test_verify_command(capsys, tmp_path):
    out_json = tmp_path / "r.json"
    code, out = run(capsys, ["verify", "--fan", "builtin:P2", "--seed", "0", "--count", "2", "--json", str(out_json)])
    assert code == 0
    report = json.loads(out_json.read_text())
    assert report["status"] == "pass" and report["out_of_scope"]
    assert "out of scope" in out.out
