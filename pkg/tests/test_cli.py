import io
import json
import os
import subprocess
import sys


from ordlab.cli import main


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


def run_proc(*argv, env=None):
    e = dict(os.environ)
    e.update(env or {})
    p = subprocess.run([sys.executable, "-m", "ordlab.cli", *argv], capture_output=True, text=True, env=e)
    return p.returncode, p.stdout, p.stderr


def test_zx_sign(tmp_path):
    spec = tmp_path / "s.json"
    spec.write_text(json.dumps({"stages": [
        {"kind": "algebraic", "value": {"minpoly": [-2, 0, 1], "interval": ["1", "2"]}, "eps": 1},
        {"kind": "zero", "eps": 1}]}))
    assert run("zx-sign", "--spec", str(spec), "--poly", "3-2*x") == (0, "+1\n")


def test_sign_cmp_abs_eval():
    assert run("cmp", "--order", "m2lex", "a", "ABab") == (0, "+1\n")
    assert run("sign", "--order", "nc3", "--word", "BCbcA") == (0, "+1\n")
    assert run("sign", "--order", "m2lex", "--word", "aA") == (0, "0\n")
    code, text = run("abs", "--order", "m2lex", "--word", "BAba")
    assert code == 0 and json.loads(text)["word"] == "ABab"
    code, text = run("eval", "--word", "ab")
    assert json.loads(text) == {"rank": 2, "slots": ["1", "x1"], "t": [1, 1]}


def test_ci_methods():
    assert json.loads(run("ci", "--tower", "tower_12", "1,0", "0,1")[1]) == {"kind": "exact", "value": "2"}
    assert json.loads(run("ci", "--tower", "tower_12", "1,0", "0,1", "--method", "limit", "--n", "10")[1])["value"] == "19/10"
    b = json.loads(run("ci", "--tower", "tower_sqrt2", "1,0", "0,1", "--method", "bracket", "--denom", "1000")[1])
    assert b == {"kind": "interval", "lo": "1393/985", "hi": "577/408"}


def test_zx_chain_and_perturb():
    assert run("zx-chain", "--spec", "zx_chain", "--depth", "2")[1].splitlines()[1] == "x - 2"
    code, text = run("perturb", "--spec", "zx_sqrt2", "--positive", "x-1", "--target", "3/2")
    rep = json.loads(text)
    assert code == 0 and rep["witness"] == "2*x - 3"
    assert (rep["witness_sign_before"], rep["witness_sign_after"]) == (-1, 1)


def test_cone_commands():
    assert run("cone", "accept", "caA") == (0, "accepted\n")
    assert run("cone", "accept", "C") == (0, "rejected\n")
    rep = json.loads(run("cone", "accept", "caA", "--trace")[1])
    assert rep["accepted"] and rep["trace"]["branch"] == 1
    code, text = run("cone", "scan", "--maxlen", "6")
    assert code == 0 and json.loads(text)["violations"] == []
    assert run("cone", "find", "--word", "CaAa") == (0, "CaAa\n")


def test_check_suites():
    assert run("check", "jacobi", "--rank", "5")[0] == 0
    code, text = run("check", "commutator-powers")
    assert code == 0 and len(json.loads(text)["binomial_form_mismatches"]) == 12
    code, text = run("check", "convexity", "--max-degree", "2")
    assert code == 0
    code, text = run("check", "sandwich", "--order", "nc3", "--word", "a", "--samples", "200", "--seed", "1")
    assert code == 0 and json.loads(text)["sandwich"] is not None


def test_axioms_report_exit_codes():
    code, text = run("check", "axioms", "--order", "nc3", "--trials", "300", "--seed", "7")
    assert code == 0 and json.loads(text)["violations"] == []
    code, text = run("check", "axioms", "--order", "m2base", "--trials", "300", "--seed", "7")
    assert code == 1 and json.loads(text)["violations"]


def test_usage_and_config_errors(tmp_path):
    assert run("sign", "--order", "m2lex")[0] == 2
    assert run("sign", "--order", "nope", "--word", "a")[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text('{"rank": 2, "derived": [{"kind": "weird"}]}')
    code, _, err = run_proc("sign", "--order", str(bad), "--word", "a")
    assert code == 2 and "derived[0].kind" in err
    assert run("sign", "--order", "m2lex", "--word", "a!b")[0] == 2


def test_reports_byte_identical_across_threads():
    argv = ["check", "axioms", "--order", "m2base", "--trials", "600", "--seed", "9"]
    c1, o1, e1 = run_proc(*argv, env={"ORDLAB_THREADS": "1"})
    c2, o2, e2 = run_proc(*argv, env={"ORDLAB_THREADS": "2"})
    c3, o3, _ = run_proc(*argv, env={"ORDLAB_THREADS": "1"})
    assert c1 == c2 == 1
    assert o1 == o2 == o3
    assert "runtime" in e1 and "runtime" not in o1


def test_replay_round_trip(tmp_path):
    code, text = run("check", "axioms", "--order", "m2base", "--trials", "250", "--seed", "3")
    assert code == 1
    p = tmp_path / "report.json"
    p.write_text(text)
    code, out = run("replay", "--report", str(p))
    rep = json.loads(out)
    assert code == 0 and rep["replayed"] == rep["reproduced"] > 0
    # the witnesses do not violate a genuine bi-order
    code, out = run("replay", "--report", str(p), "--order", "m2lex")
    assert code == 1 and json.loads(out)["reproduced"] == 0


def test_console_script_installed():
    p = subprocess.run(["ordlab", "configs"], capture_output=True, text=True)
    assert p.returncode == 0 and "nc3" in p.stdout.split()
