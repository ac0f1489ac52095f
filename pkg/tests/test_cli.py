import io
import json
import subprocess
import sys
from pathlib import Path

import pytest

from multipolar import cli
from multipolar.cli import SessionError, main, parse_session

SESSIONS = Path(__file__).resolve().parent.parent / "sessions"


def run(args, text=None):
    out, err = io.StringIO(), io.StringIO()
    if text is not None:
        path = Path(args.pop(0))
        path.write_text(text)
        args = [str(path)] + args
    code = main(args, stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def test_d_infinity_line():
    code, out, _ = run([str(SESSIONS / "d_infinity.ses")])
    assert code == 0
    assert out.strip() == "task=j_invariant name=f value=1 status=ok"


def test_family_verdict_line():
    code, out, _ = run([str(SESSIONS / "polar_family.ses")])
    assert code == 0
    assert "lhs=1 rhs=1 verdict=equal" in out.splitlines()[-1]


def test_undefined_name_reports_line(tmp_path):
    text = "format 1\nring R space x,y over QQ order local\n\ntask samuel I\n"
    code, out, err = run([tmp_path / "s.ses"], text)
    assert code == 3 and out == ""
    assert err.strip() == "parse error: line 4: undefined name I"


def test_bad_polynomial_reports_line(tmp_path):
    text = "format 1\nring R space x over QQ order local\npoly f = x +* 2\n"
    code, _, err = run([tmp_path / "s.ses"], text)
    assert code == 3 and err.startswith("parse error: line 3:")


def test_parse_session_errors():
    with pytest.raises(SessionError):
        parse_session("ring R space x over QQ order local\n")          # no format line
    with pytest.raises(SessionError, match="line 2"):
        parse_session("format 1\nfrobnicate x\n")


def test_missing_file_exit_code(tmp_path):
    code, _, err = run([str(tmp_path / "nope.ses")])
    assert code == 3 and "error" in err


def test_task_error_does_not_stop_session():
    code, out, _ = run([str(SESSIONS / "errors.ses")])
    lines = out.splitlines()
    assert code == 1
    assert "status=error" in lines[0] and "kind=InfiniteColength" in lines[0]
    assert lines[1] == "task=samuel name=I value=1 lambda=[0,1,3,6,10,15,21] status=ok"


def test_identity_failure_exit_code(monkeypatch, tmp_path):
    monkeypatch.setattr(cli.G, "triple_point_identity", lambda ctx=None: (["x"], ["y"], False))
    code, out, _ = run([tmp_path / "s.ses"], "format 1\nring R space x,y,z over QQ order local\ntask triple_point\n")
    assert code == 2 and "verdict=fails" in out


def test_error_beats_identity_failure(monkeypatch, tmp_path):
    monkeypatch.setattr(cli.G, "triple_point_identity", lambda ctx=None: (["x"], ["y"], False))
    text = "format 1\nring R space x,y,z over QQ order local\nideal J = [x]\ntask triple_point\ntask samuel J\n"
    code, _, _ = run([tmp_path / "s.ses"], text)
    assert code == 1


def test_json_output_sorted_keys():
    code, out, _ = run([str(SESSIONS / "kernel.ses"), "--json"])
    assert code == 0
    for line in out.splitlines():
        obj = json.loads(line)
        assert list(obj) == sorted(obj)
        assert obj["status"] == "ok"


@pytest.mark.parametrize("name", ["polar_family.ses", "kernel.ses"])
def test_determinism(name):
    a = run([str(SESSIONS / name)])
    b = run([str(SESSIONS / name)])
    assert a == b


def test_seed_override_changes_draws():
    _, a, _ = run([str(SESSIONS / "polar_family.ses"), "--seed", "1"])
    _, b, _ = run([str(SESSIONS / "polar_family.ses"), "--seed", "2"])
    assert a != b
    assert a.splitlines()[-1].split("lhs=")[1].startswith("1 rhs=1")


@pytest.mark.parametrize("path", sorted(SESSIONS.glob("*.ses")), ids=lambda p: p.name)
def test_serialize_round_trip(path):
    s = parse_session(path.read_text())
    text = s.serialize()
    assert parse_session(text).serialize() == text


def test_max_colength_flag():
    code, out, _ = run([str(SESSIONS / "kernel.ses"), "--max-colength", "3"])
    assert code == 1 and "kind=ColengthBoundExceeded" in out


def test_prime_field_override():
    code, out, _ = run([str(SESSIONS / "kernel.ses"), "--field", "FP:32003"])
    assert code == 0
    assert out.splitlines()[0].startswith("task=samuel name=I value=6")


def test_console_entry_point():
    p = subprocess.run([sys.executable, "-m", "multipolar", str(SESSIONS / "d_infinity.ses")],
                       capture_output=True, text=True, check=False)
    assert p.returncode == 0 and "value=1" in p.stdout
