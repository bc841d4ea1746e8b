import json
import subprocess
import sys
from math import comb

import pytest

from hpss.calculus import Bivector
from hpss.cli import main
from hpss.exact import GaussianRational as G
from hpss.model import AlgebraSpec, builtin_example


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def zero_spec(tmp_path):
    path = tmp_path / "zero.json"
    path.write_text(AlgebraSpec.zero(1, 1, "abelian").dumps())
    return str(path)


def test_degeneracy_example1(capsys):
    code, out, _ = run(capsys, "degeneracy", "--example", "heis_ext", "--n", "1", "--lambda", "wt:1,1=1")
    assert code == 0
    assert "degeneracy page: 1" in out
    code, out, _ = run(capsys, "degeneracy", "--example", "heis_ext", "--n", "1", "--lambda", "wt:1,1=1", "--format", "json")
    assert json.loads(out)["degeneracy_page"] == 1


def test_cohomology_table_orientation(capsys, zero_spec):
    code, out, _ = run(capsys, "cohomology", "--spec", zero_spec)
    assert code == 0
    lines = out.splitlines()
    # top row is q = 2, columns p = 0, 1, 2
    assert lines[1].startswith("q=2") and lines[1].split("|")[1].split() == ["1", "2", "1"]
    assert lines[2].split("|")[1].split() == ["2", "4", "2"]
    assert lines[-1].split() == ["p=0", "p=1", "p=2"]
    code, out, _ = run(capsys, "cohomology", "--spec", zero_spec, "--format", "json")
    dims = {(p, q): d for p, q, d in json.loads(out)["dims"]}
    assert dims == {(p, q): comb(2, p) * comb(2, q) for p in range(3) for q in range(3)}


def test_spectral_example3_json(capsys):
    code, out, _ = run(capsys, "spectral", "--example", "W4n6", "--k", "0", "--lambda", "wt:1,1=1", "--format", "json")
    assert code == 0
    obj = json.loads(out)
    assert obj["degeneracy_page"] == 2
    assert {"r": 1, "source": [0, 1], "target": [1, 1]}.items() <= obj["differentials"][0].items()
    assert all(d["r"] == 1 for d in obj["differentials"])


def test_spectral_table_prints_differentials(capsys):
    code, out, _ = run(capsys, "spectral", "--example", "W4n6", "--k", "0", "--lambda", "wt:1,1=1")
    assert code == 0 and "d_1: E_1^(0,1) -> E_1^(1,1)" in out


def test_example_list(capsys):
    code, out, _ = run(capsys, "example-list", "--format", "json")
    cat = json.loads(out)
    assert [c["name"] for c in cat] == ["heis_ext", "heis_sum", "W4n6", "P4n2"]
    p4 = {(e["l"], e["k"], e["j"]): G.from_json(e) for e in cat[3]["E"]}
    assert p4 == {(1, 1, 1): G.parse("i/4"), (1, 1, 2): G.parse("-1/4"), (1, 2, 1): G.parse("-1/4")}
    code, out, _ = run(capsys, "example-list")
    assert "E^1_11 = -1/2i, E^1_22 = 1/2" in out


def test_example_run(capsys):
    code, out, _ = run(capsys, "example-run", "heis_sum", "--m", "1", "--n", "1", "--lambda", "wt:1,2=1/2+i", "--format", "json")
    assert code == 0 and json.loads(out)["degeneracy_page"] == 1


def test_validate(capsys, zero_spec):
    code, out, _ = run(capsys, "validate", "--spec", zero_spec, "--format", "json")
    obj = json.loads(out)
    assert code == 0 and obj["valid"] and "declared center strictly contains derived algebra" in obj["warnings"]
    code, out, _ = run(capsys, "validate", "--example", "heis_ext")
    assert "no warnings" in out


def test_m_not_one_reports_flags(capsys, tmp_path):
    spec = AlgebraSpec.from_entries(1, 2, {(1, 1, 1): 1, (2, 1, 1): G(0, 1)})
    path = tmp_path / "m2.json"
    path.write_text(spec.dumps())
    code, out, _ = run(capsys, "degeneracy", "--spec", str(path), "--format", "json")
    obj = json.loads(out)
    assert code == 0 and obj["checks"]["m_is_1"] is False and obj["checks"]["drhobar_rank"] is None


def test_parse_error_has_line_and_column(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"n": 1,\n "m": 1,\n "E": [}\n')
    code, _, err = run(capsys, "cohomology", "--spec", str(path))
    assert code == 1 and f"{path}:3:" in err


def test_bad_token(capsys):
    code, _, err = run(capsys, "degeneracy", "--example", "heis_ext", "--lambda", "wt:1,1=1/0")
    assert code == 1 and "token 1" in err and "column 8" in err
    code, _, err = run(capsys, "degeneracy", "--example", "heis_ext", "--lambda", "wt:2,1=1")
    assert code == 1 and "outside" in err


def test_usage_error_exits_1(capsys):
    with pytest.raises(SystemExit) as info:
        main(["degeneracy", "--format", "xml"])
    assert info.value.code == 1


def test_non_holomorphic_exit_2(capsys):
    code, _, err = run(capsys, "degeneracy", "--example", "heis_sum", "--lambda", "tt:1,2=1")
    assert code == 2 and "not holomorphic Poisson" in err


def test_bivector_file_overrides_tokens(capsys, tmp_path):
    spec = builtin_example("W4n6", k=0)
    path = tmp_path / "lam.json"
    path.write_text(json.dumps(Bivector.from_coefficients(spec, wt={(1, 2): 1}).to_json()))
    code, out, _ = run(capsys, "degeneracy", "--example", "W4n6", "--k", "0", "--lambda", "wt:1,1=1", "--bivector", str(path), "--format", "json")
    assert code == 0 and json.loads(out)["degeneracy_page"] == 1


def test_dump_round_trip(capsys, tmp_path):
    sp, bv = tmp_path / "spec.json", tmp_path / "lam.json"
    code, _, _ = run(
        capsys, "degeneracy", "--example", "P4n2", "--k", "0", "--lambda", "wt:1,1=3/2-2/3i", "tt:1,2=0",
        "--dump-spec", str(sp), "--dump-bivector", str(bv),
    )
    assert code == 0
    spec = AlgebraSpec.from_json(json.loads(sp.read_text()))
    assert spec == builtin_example("P4n2", k=0)
    lam = Bivector.from_json(spec, json.loads(bv.read_text()))
    assert lam == Bivector.from_coefficients(spec, wt={(1, 1): G.parse("3/2-2/3i")})
    assert sp.read_text() == spec.dumps() + "\n"


def test_output_file_and_determinism(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    args = ["spectral", "--example", "W4n6", "--k", "0", "--lambda", "wt:1,1=1", "--format", "json"]
    assert main(args + ["--output", str(a)]) == 0
    assert main(args + ["--output", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    json.loads(a.read_text())


def test_console_script_and_env_cap(tmp_path):
    env = {"HPSS_MAX_PAGES": "1", "PATH": ""}
    proc = subprocess.run(
        [sys.executable, "-m", "hpss.cli", "degeneracy", "--example", "W4n6", "--k", "0", "--lambda", "wt:1,1=1", "--format", "json"],
        capture_output=True, text=True, env=env,
    )
    assert proc.returncode == 0, proc.stderr
    obj = json.loads(proc.stdout)
    assert len(obj["e_pages"]) == 1 and obj["converged"] is False
